#include "qdistil/presets.hpp"

namespace qdistil {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"recurrence", "qpa", "xxxx-zzzz"};
    return names;
}

bool is_preset(std::string_view name) {
    for (const std::string& n : preset_names()) {
        if (n == name) return true;
    }
    return false;
}

StabilizerCode preset_code(std::string_view name) {
    if (name == "recurrence") {
        // logical X = X.X, logical Z = Z.I
        return StabilizerCode::build(2, {SympVector(2, {0, 1, 0, 1})},
                                     {SympVector(2, {1, 0, 1, 0}), SympVector(2, {0, 1, 0, 0})});
    }
    if (name == "qpa") {
        // logical X = X.X, logical Z = I.XZ
        return StabilizerCode::build(2, {SympVector(2, {1, 1, 1, 1})},
                                     {SympVector(2, {1, 0, 1, 0}), SympVector(2, {0, 0, 1, 1})});
    }
    if (name == "xxxx-zzzz") {
        // logicals X1 = I.X.I.X, Z1 = Z.Z.I.I, X2 = I.I.X.X, Z2 = Z.I.Z.I
        return StabilizerCode::build(
            2,
            {SympVector(2, {1, 0, 1, 0, 1, 0, 1, 0}), SympVector(2, {0, 1, 0, 1, 0, 1, 0, 1})},
            {SympVector(2, {0, 0, 1, 0, 0, 0, 1, 0}), SympVector(2, {0, 1, 0, 1, 0, 0, 0, 0}),
             SympVector(2, {0, 0, 0, 0, 1, 0, 1, 0}), SympVector(2, {0, 1, 0, 0, 0, 1, 0, 0})});
    }
    throw ParseError("unknown preset '" + std::string(name) + "'");
}

ConvertedProtocol preset_protocol(std::string_view name, AcceptPolicy policy) {
    return make_protocol(preset_code(name), policy);
}

} // namespace qdistil
