#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "qdistil/cli_app.hpp"
#include "qdistil/densesim.hpp"
#include "qdistil/presets.hpp"
#include "qdistil/rates.hpp"

namespace py = pybind11;
using namespace qdistil;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto& v : j) out.append(json_to_py(v));
        return out;
    }
    case nlohmann::json::value_t::object: {
        py::dict out;
        for (auto it = j.begin(); it != j.end(); ++it) {
            out[py::str(it.key())] = json_to_py(it.value());
        }
        return out;
    }
    default: return py::none();
    }
}

SympVector to_vector(int p, const std::vector<int>& coords) { return SympVector(p, coords); }

StabilizerCode code_from_any(const py::object& spec) {
    if (py::isinstance<py::str>(spec)) {
        std::string name = spec.cast<std::string>();
        if (is_preset(name)) return preset_code(name);
        ParsedCode parsed = parse_generators(name);
        return StabilizerCode::build(parsed.p, std::move(parsed.generators));
    }
    return spec.cast<StabilizerCode>();
}

ConvertedProtocol protocol_from(const py::object& code_spec, const std::string& policy) {
    return make_protocol(code_from_any(code_spec), AcceptPolicy::parse(policy));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "stabilizer-code entanglement distillation analysis";

    auto base_error = py::register_exception<Error>(m, "QdistilError");
    py::register_exception<CapacityError>(m, "CapacityError", base_error.ptr());

    py::class_<SympVector>(m, "SympVector")
        .def(py::init(&to_vector), py::arg("p"), py::arg("coords"))
        .def_readonly("p", &SympVector::p)
        .def_readonly("coords", &SympVector::coords)
        .def("pairs", &SympVector::pairs)
        .def("__repr__", [](const SympVector& u) { return "SympVector" + to_string(u); })
        .def("__eq__", [](const SympVector& a, const SympVector& b) { return a == b; });

    m.def("symp_product", &symp_product, py::arg("u"), py::arg("v"));

    py::class_<StabilizerCode>(m, "StabilizerCode")
        .def_static(
            "build",
            [](int p, const std::vector<std::vector<int>>& gens) {
                std::vector<SympVector> vs;
                for (const auto& g : gens) vs.emplace_back(p, g);
                return StabilizerCode::build(p, std::move(vs));
            },
            py::arg("p"), py::arg("generators"))
        .def_property_readonly("p", &StabilizerCode::p)
        .def_property_readonly("n", &StabilizerCode::n)
        .def_property_readonly("k", &StabilizerCode::k)
        .def("syndrome_of",
             [](const StabilizerCode& c, const SympVector& u) { return c.syndrome_of(u).entries; })
        .def("logical_class_of",
             [](const StabilizerCode& c, const SympVector& u) { return c.logical_class_of(u).label; })
        .def("__repr__", [](const StabilizerCode& c) {
            return "StabilizerCode([[" + std::to_string(c.n()) + "," + std::to_string(c.k()) +
                   "]], p=" + std::to_string(c.p()) + ")";
        });

    m.def("preset_code", &preset_code, py::arg("name"));
    m.def("preset_names", [] { return preset_names(); });
    m.def(
        "parse_code",
        [](const std::string& text) {
            ParsedCode parsed = parse_generators(text);
            return StabilizerCode::build(parsed.p, std::move(parsed.generators));
        },
        py::arg("text"));

    py::class_<BellDiagState>(m, "BellDiagState")
        .def_static("dense", &BellDiagState::dense, py::arg("p"), py::arg("pairs"), py::arg("weights"))
        .def_static("point_mass", &BellDiagState::point_mass, py::arg("u"))
        .def_property_readonly("p", &BellDiagState::p)
        .def_property_readonly("pairs", &BellDiagState::pairs)
        .def("weight", &BellDiagState::weight, py::arg("u"))
        .def("weights",
             [](const BellDiagState& s) { return s.densified().dense_weights(); })
        .def("to_json", [](const BellDiagState& s) { return json_to_py(state_to_json(s)); });

    m.def("werner_raw", &werner_raw, py::arg("fidelity"));
    m.def("werner_converted", &werner_converted, py::arg("fidelity"), py::arg("p") = 2);
    m.def("apply_pauli_to_bob", &apply_pauli_to_bob, py::arg("state"), py::arg("v"));
    m.def(
        "tensor",
        [](const std::vector<BellDiagState>& states) { return tensor(states); },
        py::arg("states"));
    m.def(
        "marginal",
        [](const BellDiagState& s, const std::vector<int>& idx) { return marginal(s, idx); },
        py::arg("state"), py::arg("pair_indices"));

    m.def(
        "analyze",
        [](const py::object& code, const BellDiagState& state, const std::string& policy) {
            return json_to_py(report_to_json(analyze(protocol_from(code, policy), state)));
        },
        py::arg("code"), py::arg("state"), py::arg("policy") = "zero-syndrome",
        "Per-syndrome protocol report as a dict; `code` is a preset name, a "
        "generator text block, or a StabilizerCode.");

    m.def(
        "iterate",
        [](const py::object& code, const BellDiagState& initial, int rounds,
           const std::string& policy) {
            return json_to_py(trace_to_json(iterate(protocol_from(code, policy), initial, rounds)));
        },
        py::arg("code"), py::arg("initial"), py::arg("rounds"), py::arg("policy") = "zero-syndrome");

    m.def(
        "entropy",
        [](const std::vector<double>& dist, double base) {
            return entropy(std::span<const double>(dist), base);
        },
        py::arg("dist"), py::arg("base"));
    m.def(
        "hashing_yield", [](const BellDiagState& w) { return hashing_yield(w); }, py::arg("state"));
    m.def(
        "combined_yield",
        [](const py::object& code, double fidelity, int max_rounds, const std::string& policy) {
            CombinedYield y = combined_yield(protocol_from(code, policy), fidelity, max_rounds);
            return py::make_tuple(y.best_rounds, y.net_yield);
        },
        py::arg("code"), py::arg("fidelity"), py::arg("max_rounds"),
        py::arg("policy") = "zero-syndrome");
    m.def(
        "comparison_sweep",
        [](const std::vector<std::string>& presets, const std::vector<double>& grid, int max_rounds,
           const std::string& policy) {
            std::vector<NamedProtocol> protos;
            for (const std::string& name : presets) {
                protos.push_back({name, preset_protocol(name, AcceptPolicy::parse(policy))});
            }
            std::vector<YieldCurve> curves = comparison_sweep(protos, grid, max_rounds);
            py::list out;
            for (const YieldCurve& c : curves) {
                py::list pts;
                for (const YieldPoint& pt : c.points) {
                    py::dict d;
                    d["F"] = pt.fidelity;
                    d["best_rounds"] = pt.best_rounds;
                    d["net_yield"] = pt.net_yield;
                    pts.append(std::move(d));
                }
                py::dict curve;
                curve["protocol"] = c.protocol;
                curve["points"] = std::move(pts);
                out.append(std::move(curve));
            }
            return out;
        },
        py::arg("presets"), py::arg("grid"), py::arg("max_rounds") = 6,
        py::arg("policy") = "zero-syndrome");

    m.def(
        "general_fidelity_bound",
        [](const py::object& code, const std::vector<double>& coeffs, const std::string& policy) {
            return general_fidelity_bound(protocol_from(code, policy), coeffs);
        },
        py::arg("code"), py::arg("coeffs"), py::arg("policy") = "oneway");

    m.def(
        "bell_vector", [](const SympVector& u) { return bell_vector(u).amps; }, py::arg("u"),
        "Amplitudes of |beta(u)> as a complex vector.");
    m.def(
        "xz_matrix", [](const SympVector& u) { return xz_operator(u).mat; }, py::arg("u"));
    m.def(
        "bell_diag_density", [](const BellDiagState& s) { return bell_diag_density(s); },
        py::arg("state"));
    m.def(
        "run_protocol_dense",
        [](const py::object& code, const Eigen::MatrixXcd& rho, const std::string& policy) {
            DenseRunResult res = run_protocol_dense(protocol_from(code, policy), rho);
            py::list records;
            for (const DenseSyndromeRecord& r : res.records) {
                py::dict d;
                d["s"] = r.s.entries;
                d["prob"] = r.prob;
                d["fidelity"] = r.fidelity;
                d["bell_weights"] = r.bell_weights;
                records.append(std::move(d));
            }
            py::dict out;
            out["records"] = std::move(records);
            out["avg_fidelity"] = res.avg_fidelity;
            return out;
        },
        py::arg("code"), py::arg("rho"), py::arg("policy") = "zero-syndrome");

    m.def(
        "uncorrectable_overlap",
        [](const py::object& code_spec) {
            StabilizerCode code = code_from_any(code_spec);
            std::vector<SympVector> table;
            for (std::uint64_t s = 0; s < code.syndrome_count(); ++s) {
                table.push_back(
                    code.error_set(syndrome_unrank(code.p(), code.n() - code.k(), s)).e0);
            }
            UncorrectableOverlap res = max_uncorrectable_overlap(code, DecodeRule(code, std::move(table)));
            py::dict out;
            out["max_overlap"] = res.max_overlap;
            out["witness_error"] = res.witness_error.coords;
            out["uncorrectable_count"] = res.uncorrectable_count;
            return out;
        },
        py::arg("code"),
        "Exhaustive decoded-state overlap maximum under the smallest-solution "
        "decode table.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
