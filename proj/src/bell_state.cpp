#include "qdistil/bell_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qdistil {

namespace {

void validate_weights(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw ContractError("state weights must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        throw ContractError("state weights must sum to 1 within 1e-9, got " + std::to_string(total));
    }
}

} // namespace

BellDiagState BellDiagState::dense(int p, int pairs, std::vector<double> weights) {
    if (!is_prime(p)) throw ContractError("BellDiagState: modulus must be prime");
    if (pairs < 1) throw DimensionError("BellDiagState: need at least one pair");
    std::uint64_t size = checked_pow(p, 2 * pairs, kEnumerationCapacity, "dense state table");
    if (weights.size() != size) {
        throw DimensionError("BellDiagState: weight table must have p^(2n) entries");
    }
    validate_weights(weights);
    BellDiagState s;
    s.p_ = p;
    s.pairs_ = pairs;
    s.weights_ = std::move(weights);
    return s;
}

BellDiagState BellDiagState::product(std::vector<BellDiagState> factors) {
    if (factors.empty()) throw DimensionError("product state: no factors");
    if (factors.size() == 1) return std::move(factors.front());
    BellDiagState s;
    s.p_ = factors.front().p();
    s.pairs_ = 0;
    for (const BellDiagState& f : factors) {
        if (f.p() != s.p_) throw DimensionError("product state: mismatched moduli");
        s.pairs_ += f.pairs();
    }
    // flatten nested products
    for (BellDiagState& f : factors) {
        if (f.is_product()) {
            for (BellDiagState& g : f.factors_) s.factors_.push_back(std::move(g));
        } else {
            s.factors_.push_back(std::move(f));
        }
    }
    checked_pow(s.p_, 2 * s.pairs_, kEnumerationCapacity, "product state");
    return s;
}

BellDiagState BellDiagState::point_mass(const SympVector& u) {
    std::uint64_t size = checked_pow(u.p, u.size(), kEnumerationCapacity, "point mass table");
    std::vector<double> w(size, 0.0);
    w[static_cast<std::size_t>(vector_rank(u))] = 1.0;
    return dense(u.p, u.pairs(), std::move(w));
}

double BellDiagState::weight(const SympVector& u) const {
    if (u.p != p_ || u.pairs() != pairs_) {
        throw DimensionError("weight: vector lives in a different space");
    }
    if (!is_product()) return weights_[static_cast<std::size_t>(vector_rank(u))];
    double w = 1.0;
    int off = 0;
    for (const BellDiagState& f : factors_) {
        std::vector<int> piece(u.coords.begin() + 2 * off, u.coords.begin() + 2 * (off + f.pairs()));
        w *= f.weight(SympVector(p_, std::move(piece)));
        off += f.pairs();
    }
    return w;
}

const std::vector<double>& BellDiagState::dense_weights() const {
    if (is_product()) throw ContractError("dense_weights: state is in product form");
    return weights_;
}

BellDiagState BellDiagState::densified() const {
    if (!is_product()) return *this;
    std::uint64_t size = checked_pow(p_, 2 * pairs_, kEnumerationCapacity, "densify");
    std::vector<double> w(size, 0.0);
    for (std::uint64_t r = 0; r < size; ++r) {
        w[static_cast<std::size_t>(r)] = weight(vector_unrank(p_, 2 * pairs_, r));
    }
    BellDiagState s;
    s.p_ = p_;
    s.pairs_ = pairs_;
    s.weights_ = std::move(w);
    return s;
}

double BellDiagState::sum() const {
    if (is_product()) {
        double t = 1.0;
        for (const BellDiagState& f : factors_) t *= f.sum();
        return t;
    }
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

BellDiagState werner_raw(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw ContractError("werner_raw: fidelity must lie in [0,1]");
    }
    double rest = (1.0 - fidelity) / 3.0;
    return BellDiagState::dense(2, 1, {rest, rest, rest, fidelity});
}

BellDiagState werner_converted(double fidelity, int p) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw ContractError("werner_converted: fidelity must lie in [0,1]");
    }
    if (!is_prime(p)) throw ContractError("werner_converted: p must be prime");
    std::uint64_t size = static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p);
    std::vector<double> w(size, (1.0 - fidelity) / static_cast<double>(size - 1));
    w[0] = fidelity;
    return BellDiagState::dense(p, 1, std::move(w));
}

BellDiagState apply_pauli_to_bob(const BellDiagState& state, const SympVector& v) {
    if (v.p != state.p() || v.pairs() != state.pairs()) {
        throw DimensionError("apply_pauli_to_bob: vector lives in a different space");
    }
    if (state.is_product()) {
        std::vector<BellDiagState> out;
        int off = 0;
        for (const BellDiagState& f : state.factors()) {
            std::vector<int> piece(v.coords.begin() + 2 * off,
                                   v.coords.begin() + 2 * (off + f.pairs()));
            out.push_back(apply_pauli_to_bob(f, SympVector(v.p, std::move(piece))));
            off += f.pairs();
        }
        return BellDiagState::product(std::move(out));
    }
    const std::vector<double>& in = state.dense_weights();
    std::vector<double> out(in.size(), 0.0);
    for (std::uint64_t r = 0; r < in.size(); ++r) {
        SympVector u = vector_unrank(state.p(), 2 * state.pairs(), r);
        out[static_cast<std::size_t>(vector_rank(u + v))] = in[static_cast<std::size_t>(r)];
    }
    return BellDiagState::dense(state.p(), state.pairs(), std::move(out));
}

BellDiagState tensor(std::span<const BellDiagState> states) {
    std::vector<BellDiagState> fs(states.begin(), states.end());
    return BellDiagState::product(std::move(fs));
}

BellDiagState tensor(const BellDiagState& a, const BellDiagState& b) {
    std::vector<BellDiagState> fs{a, b};
    return BellDiagState::product(std::move(fs));
}

BellDiagState marginal(const BellDiagState& state, std::span<const int> pair_indices) {
    if (pair_indices.empty()) throw DimensionError("marginal: empty index set");
    for (std::size_t i = 0; i < pair_indices.size(); ++i) {
        if (pair_indices[i] < 0 || pair_indices[i] >= state.pairs() ||
            (i > 0 && pair_indices[i] <= pair_indices[i - 1])) {
            throw DimensionError("marginal: indices must be strictly increasing and in range");
        }
    }
    if (static_cast<int>(pair_indices.size()) == state.pairs()) return state;
    if (state.is_product()) {
        // independence: the marginal is the product of per-factor marginals
        std::vector<BellDiagState> out;
        int off = 0;
        std::size_t i = 0;
        for (const BellDiagState& f : state.factors()) {
            std::vector<int> local;
            while (i < pair_indices.size() && pair_indices[i] < off + f.pairs()) {
                local.push_back(pair_indices[i] - off);
                ++i;
            }
            if (!local.empty()) out.push_back(marginal(f, local));
            off += f.pairs();
        }
        if (out.size() == 1) return out.front();
        return BellDiagState::product(std::move(out));
    }
    const std::vector<double>& in = state.dense_weights();
    const int kept = static_cast<int>(pair_indices.size());
    std::uint64_t out_size = checked_pow(state.p(), 2 * kept, kEnumerationCapacity, "marginal");
    std::vector<double> out(out_size, 0.0);
    for (std::uint64_t r = 0; r < in.size(); ++r) {
        SympVector u = vector_unrank(state.p(), 2 * state.pairs(), r);
        std::vector<int> sel;
        sel.reserve(static_cast<std::size_t>(2 * kept));
        for (int idx : pair_indices) {
            sel.push_back(u.coords[static_cast<std::size_t>(2 * idx)]);
            sel.push_back(u.coords[static_cast<std::size_t>(2 * idx + 1)]);
        }
        out[static_cast<std::size_t>(vector_rank(SympVector(state.p(), std::move(sel))))] +=
            in[static_cast<std::size_t>(r)];
    }
    return BellDiagState::dense(state.p(), kept, std::move(out));
}

nlohmann::json state_to_json(const BellDiagState& state) {
    nlohmann::json j;
    j["schema"] = "qdistil/state-v1";
    j["p"] = state.p();
    j["n"] = state.pairs();
    if (state.is_product()) {
        j["form"] = "product";
        nlohmann::json fs = nlohmann::json::array();
        for (const BellDiagState& f : state.factors()) fs.push_back(state_to_json(f));
        j["weights"] = std::move(fs);
    } else {
        j["form"] = "dense";
        nlohmann::json ws = nlohmann::json::array();
        const std::vector<double>& w = state.dense_weights();
        for (std::uint64_t r = 0; r < w.size(); ++r) {
            if (w[static_cast<std::size_t>(r)] == 0.0) continue;
            SympVector u = vector_unrank(state.p(), 2 * state.pairs(), r);
            ws.push_back({{"u", u.coords}, {"w", w[static_cast<std::size_t>(r)]}});
        }
        j["weights"] = std::move(ws);
    }
    return j;
}

BellDiagState state_from_json(const nlohmann::json& j) {
    try {
        int p = j.at("p").get<int>();
        int n = j.at("n").get<int>();
        std::string form = j.at("form").get<std::string>();
        if (form == "product") {
            std::vector<BellDiagState> fs;
            for (const nlohmann::json& f : j.at("weights")) fs.push_back(state_from_json(f));
            BellDiagState s = BellDiagState::product(std::move(fs));
            if (s.pairs() != n) throw ParseError("state json: factor pair counts do not sum to n");
            return s;
        }
        if (form != "dense") throw ParseError("state json: unknown form '" + form + "'");
        std::uint64_t size = checked_pow(p, 2 * n, kEnumerationCapacity, "state json");
        std::vector<double> w(size, 0.0);
        for (const nlohmann::json& entry : j.at("weights")) {
            std::vector<int> coords = entry.at("u").get<std::vector<int>>();
            if (static_cast<int>(coords.size()) != 2 * n) {
                throw ParseError("state json: weight vector has the wrong length");
            }
            w[static_cast<std::size_t>(vector_rank(SympVector(p, std::move(coords))))] =
                entry.at("w").get<double>();
        }
        return BellDiagState::dense(p, n, std::move(w));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("state json: ") + e.what());
    }
}

} // namespace qdistil
