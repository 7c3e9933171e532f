#include "qdistil/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdistil/densesim.hpp"
#include "qdistil/presets.hpp"
#include "qdistil/rates.hpp"

namespace qdistil {

namespace {

// All CLI numeric output carries twelve significant digits.
double round_sig12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

nlohmann::json round_numbers(const nlohmann::json& j) {
    if (j.is_number_float()) return round_sig12(j.get<double>());
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_numbers(it.value());
        return out;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& v : j) out.push_back(round_numbers(v));
        return out;
    }
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
    if (path.empty() || path == "-") {
        stdout_stream << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << content;
}

StabilizerCode load_code(const std::string& preset, const std::string& file) {
    if (!preset.empty() && !file.empty()) {
        throw ParseError("give either --preset or --code-file, not both");
    }
    if (!preset.empty()) return preset_code(preset);
    if (!file.empty()) {
        ParsedCode parsed = parse_generators(read_file(file));
        return StabilizerCode::build(parsed.p, std::move(parsed.generators));
    }
    throw ParseError("a code is required: --preset or --code-file");
}

BellDiagState load_state(double werner_f, const std::string& state_file, const StabilizerCode& code,
                         int pairs_needed) {
    if (werner_f >= 0.0 && !state_file.empty()) {
        throw ParseError("give either --werner-converted or --state-file, not both");
    }
    if (werner_f >= 0.0) {
        BellDiagState single = werner_converted(werner_f, code.p());
        if (pairs_needed == 1) return single;
        std::vector<BellDiagState> copies(static_cast<std::size_t>(pairs_needed), single);
        return tensor(copies);
    }
    if (!state_file.empty()) {
        BellDiagState s = state_from_json(nlohmann::json::parse(read_file(state_file), nullptr, true));
        if (s.p() != code.p() || s.pairs() != pairs_needed) {
            throw ParseError("state file covers " + std::to_string(s.pairs()) + " pairs at p=" +
                             std::to_string(s.p()) + ", expected " + std::to_string(pairs_needed) +
                             " at p=" + std::to_string(code.p()));
        }
        return s;
    }
    throw ParseError("an input state is required: --werner-converted or --state-file");
}

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0.0;
    double b = 0.0;
    double step = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3 || step <= 0.0) {
        throw ParseError("grid must be 'a:b:step' with positive step, got '" + spec + "'");
    }
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double f = a + i * step;
        if (f > b + 1e-12) break;
        grid.push_back(f);
    }
    if (grid.empty()) throw ParseError("empty grid '" + spec + "'");
    for (double f : grid) {
        if (f < 0.0 || f > 1.0 + 1e-12) throw ParseError("grid values must lie in [0,1]");
    }
    return grid;
}

std::string report_csv(const ProtocolReport& rep) {
    std::ostringstream os;
    os << "s,prob,fidelity,accepted\n";
    char buf[64];
    for (const SyndromeRecord& r : rep.records) {
        for (int e : r.s.entries) os << e;
        std::snprintf(buf, sizeof buf, ",%.12g,%.12g,", r.prob, r.fidelity);
        os << buf << (r.accepted ? 1 : 0) << '\n';
    }
    return os.str();
}

// --- verify -----------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Deterministic pseudo-random weights for the oracle-equivalence trials.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    double next_unit() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

BellDiagState random_bell_state(int p, int pairs, SplitMix& rng) {
    std::uint64_t size = checked_pow(p, 2 * pairs, kEnumerationCapacity, "verify state");
    std::vector<double> w(static_cast<std::size_t>(size));
    double total = 0.0;
    for (double& x : w) {
        x = rng.next_unit();
        total += x;
    }
    for (double& x : w) x /= total;
    return BellDiagState::dense(p, pairs, std::move(w));
}

DecodeRule lex_rule(const StabilizerCode& code) {
    std::vector<SympVector> table;
    const std::uint64_t syndromes = code.syndrome_count();
    for (std::uint64_t s = 0; s < syndromes; ++s) {
        table.push_back(code.error_set(syndrome_unrank(code.p(), code.n() - code.k(), s)).e0);
    }
    return DecodeRule(code, std::move(table));
}

CheckResult check_projection_identity(const StabilizerCode& code) {
    std::vector<DenseOperator> plain = stabilizer_projectors(code, false);
    std::vector<DenseOperator> starred = stabilizer_projectors(code, true);
    DenseState beta0 =
        bell_vector(SympVector(code.p(), std::vector<int>(static_cast<std::size_t>(2 * code.n()), 0)));
    const Eigen::Index dn = plain.front().mat.rows();
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dn, dn);
    double worst = 0.0;
    for (std::size_t x = 0; x < plain.size(); ++x) {
        Eigen::VectorXcd lhs = Eigen::VectorXcd::Zero(beta0.amps.size());
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(beta0.amps.size());
        // (P*(x) o I) beta0 vs (P*(x) o P(x)) beta0, blockwise over A indices
        for (Eigen::Index ia = 0; ia < dn; ++ia) {
            for (Eigen::Index ja = 0; ja < dn; ++ja) {
                std::complex<double> c = starred[x].mat(ia, ja);
                if (c == std::complex<double>(0.0, 0.0)) continue;
                lhs.segment(ia * dn, dn) += c * beta0.amps.segment(ja * dn, dn);
                rhs.segment(ia * dn, dn) += c * (plain[x].mat * beta0.amps.segment(ja * dn, dn));
            }
        }
        worst = std::max(worst, (lhs - rhs).norm());
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max residual %.3g", worst);
    return {"projection-identity", worst < 1e-12, buf};
}

CheckResult check_completeness(const StabilizerCode& code) {
    std::vector<DenseOperator> plain = stabilizer_projectors(code, false);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(plain.front().mat.rows(), plain.front().mat.cols());
    for (const DenseOperator& op : plain) sum += op.mat;
    double dev = (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
    char buf[96];
    std::snprintf(buf, sizeof buf, "deviation %.3g", dev);
    return {"projector-completeness", dev < 1e-12, buf};
}

CheckResult check_encoders(const StabilizerCode& code) {
    double worst = 0.0;
    const std::uint64_t sectors = code.syndrome_count();
    for (std::uint64_t s = 0; s < sectors; ++s) {
        Eigen::MatrixXcd u = encoder(code, syndrome_unrank(code.p(), code.n() - code.k(), s)).mat;
        worst = std::max(worst, (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max unitarity deviation %.3g", worst);
    return {"encoder-unitary", worst < 1e-12, buf};
}

CheckResult check_bell_invariance(const StabilizerCode& code) {
    Eigen::MatrixXcd u =
        encoder(code, Syndrome(code.p(), std::vector<int>(static_cast<std::size_t>(code.n() - code.k()), 0)))
            .mat;
    DenseState beta0 =
        bell_vector(SympVector(code.p(), std::vector<int>(static_cast<std::size_t>(2 * code.n()), 0)));
    const Eigen::Index dn = u.rows();
    Eigen::VectorXcd mapped = Eigen::VectorXcd::Zero(beta0.amps.size());
    Eigen::MatrixXcd ubar = u.conjugate();
    for (Eigen::Index ia = 0; ia < dn; ++ia) {
        for (Eigen::Index ja = 0; ja < dn; ++ja) {
            std::complex<double> c = ubar(ia, ja);
            if (c == std::complex<double>(0.0, 0.0)) continue;
            mapped.segment(ia * dn, dn) += c * (u * beta0.amps.segment(ja * dn, dn));
        }
    }
    double dev = (mapped - beta0.amps).norm();
    char buf[96];
    std::snprintf(buf, sizeof buf, "residual %.3g", dev);
    return {"conjugate-encoder-invariance", dev < 1e-12, buf};
}

CheckResult check_oracle_equivalence(const StabilizerCode& code) {
    SplitMix rng(0x51ab5u);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        BellDiagState alpha = random_bell_state(code.p(), code.n(), rng);
        ConvertedProtocol proto = make_protocol(code, AcceptPolicy::one_way());
        ProtocolReport rep = analyze(proto, alpha);
        DenseRunResult dense = run_protocol_dense(proto, bell_diag_density(alpha));
        for (std::size_t i = 0; i < rep.records.size(); ++i) {
            const SyndromeRecord& a = rep.records[i];
            const DenseSyndromeRecord& d = dense.records[i];
            worst = std::max(worst, std::abs(a.prob - d.prob));
            worst = std::max(worst, std::abs(a.fidelity - d.fidelity));
            for (std::size_t w = 0; w < a.output_weights.size(); ++w) {
                worst = std::max(worst, std::abs(a.output_weights[w] - d.bell_weights[w]));
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "max deviation %.3g over 3 pseudo-random inputs", worst);
    return {"oracle-equivalence", worst < 1e-9, buf};
}

CheckResult check_uncorrectable_overlap(const StabilizerCode& code) {
    UncorrectableOverlap r = max_uncorrectable_overlap(code, lex_rule(code));
    char buf[160];
    std::snprintf(buf, sizeof buf, "max_overlap %.6g at error %s", r.max_overlap,
                  pauli_string(r.witness_error).c_str());
    return {"uncorrectable-overlap", r.max_overlap <= 0.75 + 1e-12, buf};
}

CheckResult check_good_set(const StabilizerCode& code) {
    ConvertedProtocol proto = make_protocol(code, AcceptPolicy::one_way(), lex_rule(code));
    GoodSet good = good_set(proto);
    const std::uint64_t expect =
        checked_pow(code.p(), 2 * (code.n() - code.k()), kEnumerationCapacity, "good set");
    if (good.size() != expect) {
        return {"good-set", false,
                "size " + std::to_string(good.size()) + ", expected " + std::to_string(expect)};
    }
    const std::uint64_t total =
        checked_pow(code.p(), 2 * code.n(), kEnumerationCapacity, "good set");
    double worst = 1.0;
    for (std::uint64_t r = 0; r < total; ++r) {
        SympVector u = vector_unrank(code.p(), 2 * code.n(), r);
        if (!good.contains(u)) continue;
        ProtocolReport rep = analyze(proto, BellDiagState::point_mass(u));
        worst = std::min(worst, rep.record(code.syndrome_of(u)).fidelity);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu members, min point-mass fidelity %.12g",
                  static_cast<unsigned long long>(good.size()), worst);
    return {"good-set", worst > 1.0 - 1e-12, buf};
}

struct EncoderRow {
    std::vector<int> sector;
    int logical = 0;
    std::vector<std::pair<std::uint64_t, std::complex<double>>> amps; // index, amplitude
};

CheckResult check_encoder_table(const StabilizerCode& code, const std::string& preset) {
    std::vector<EncoderRow> rows;
    const double h = 1.0 / std::sqrt(2.0);
    if (preset == "recurrence") {
        rows = {{{0}, 0, {{0b00, 1.0}}},
                {{0}, 1, {{0b11, 1.0}}},
                {{1}, 0, {{0b01, 1.0}}},
                {{1}, 1, {{0b10, 1.0}}}};
    } else if (preset == "qpa") {
        // the +1 sector maps of the historical protocol
        std::complex<double> i(0.0, 1.0);
        rows = {{{0}, 0, {{0b00, 0.5}, {0b01, 0.5 * i}, {0b10, -0.5 * i}, {0b11, 0.5}}},
                {{0}, 1, {{0b00, 0.5}, {0b01, -0.5 * i}, {0b10, 0.5 * i}, {0b11, 0.5}}}};
    } else if (preset == "xxxx-zzzz") {
        auto pair_row = [&](std::vector<int> sector, int logical, unsigned first, unsigned second,
                            double sign) {
            rows.push_back({std::move(sector), logical, {{first, h}, {second, sign * h}}});
        };
        pair_row({0, 0}, 0b00, 0b0000, 0b1111, 1.0);
        pair_row({0, 0}, 0b01, 0b0011, 0b1100, 1.0);
        pair_row({0, 0}, 0b10, 0b0101, 0b1010, 1.0);
        pair_row({0, 0}, 0b11, 0b0110, 0b1001, 1.0);
        pair_row({0, 1}, 0b00, 0b0001, 0b1110, 1.0);
        pair_row({0, 1}, 0b01, 0b0010, 0b1101, 1.0);
        pair_row({0, 1}, 0b10, 0b0100, 0b1011, 1.0);
        pair_row({0, 1}, 0b11, 0b1000, 0b0111, 1.0);
        pair_row({1, 0}, 0b00, 0b0000, 0b1111, -1.0);
        pair_row({1, 0}, 0b01, 0b0011, 0b1100, -1.0);
        pair_row({1, 0}, 0b10, 0b0101, 0b1010, -1.0);
        pair_row({1, 0}, 0b11, 0b0110, 0b1001, -1.0);
        pair_row({1, 1}, 0b00, 0b0001, 0b1110, -1.0);
        pair_row({1, 1}, 0b01, 0b0010, 0b1101, -1.0);
        pair_row({1, 1}, 0b10, 0b0100, 0b1011, -1.0);
        pair_row({1, 1}, 0b11, 0b1000, 0b0111, -1.0);
    } else {
        return {"encoder-table", true, "no reference table for this code"};
    }
    const std::uint64_t da = checked_pow(code.p(), code.n() - code.k(), kDensityDimensionCapacity,
                                         "encoder table");
    double worst = 1.0;
    std::vector<int> last_sector(static_cast<std::size_t>(code.n() - code.k()), -1);
    Eigen::MatrixXcd u;
    for (const EncoderRow& row : rows) {
        if (row.sector != last_sector) {
            u = encoder(code, Syndrome(code.p(), row.sector)).mat;
            last_sector = row.sector;
        }
        Eigen::VectorXcd want = Eigen::VectorXcd::Zero(u.rows());
        for (const auto& [idx, amp] : row.amps) want(static_cast<Eigen::Index>(idx)) = amp;
        Eigen::VectorXcd got = u.col(static_cast<Eigen::Index>(row.logical * static_cast<int>(da)));
        worst = std::min(worst, std::abs((want.adjoint() * got)(0)));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu rows, min overlap magnitude %.12g", rows.size(), worst);
    return {"encoder-table", worst > 1.0 - 1e-12, buf};
}

int cmd_verify(const std::string& preset, const std::string& file, const std::string& out_path,
               std::ostream& out) {
    StabilizerCode code = load_code(preset, file);
    std::vector<CheckResult> checks;
    checks.push_back({"stabilizer", true,
                      "[[" + std::to_string(code.n()) + "," + std::to_string(code.k()) + "]] p=" +
                          std::to_string(code.p())});
    checks.push_back(check_projection_identity(code));
    checks.push_back(check_completeness(code));
    checks.push_back(check_encoders(code));
    checks.push_back(check_bell_invariance(code));
    checks.push_back(check_oracle_equivalence(code));
    checks.push_back(check_uncorrectable_overlap(code));
    checks.push_back(check_good_set(code));
    checks.push_back(check_encoder_table(code, preset));

    std::ostringstream os;
    bool all = true;
    for (const CheckResult& c : checks) {
        all = all && c.pass;
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    os << (all ? "all checks passed\n" : "some checks FAILED\n");
    write_output(out_path, os.str(), out);
    return all ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact analysis of distillation protocols built from stabilizer codes", "qdistil"};
    app.require_subcommand(1);

    std::string preset;
    std::string code_file;
    double werner_f = -1.0;
    std::string state_file;
    std::string policy_text = "zero-syndrome";
    std::string out_path;
    std::string format = "json";
    int rounds = 0;
    std::string grid_spec;
    std::vector<std::string> sweep_presets;

    auto add_code_opts = [&](CLI::App* cmd) {
        cmd->add_option("--preset", preset, "built-in code: recurrence | qpa | xxxx-zzzz");
        cmd->add_option("--code-file", code_file, "generator file (see docs/formats.md)");
    };
    auto add_state_opts = [&](CLI::App* cmd) {
        cmd->add_option("--werner-converted", werner_f,
                        "independent converted-Werner pairs of this fidelity");
        cmd->add_option("--state-file", state_file, "input state as JSON");
    };

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "per-syndrome report for one input state");
    add_code_opts(analyze_cmd);
    add_state_opts(analyze_cmd);
    analyze_cmd->add_option("--policy", policy_text, "oneway | zero-syndrome | threshold=<t>");
    analyze_cmd->add_option("--out", out_path, "output path (default stdout)");
    analyze_cmd->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* iterate_cmd =
        app.add_subcommand("iterate", "repeated blocks of the protocol plus hashing yields");
    add_code_opts(iterate_cmd);
    add_state_opts(iterate_cmd);
    iterate_cmd->add_option("--rounds", rounds, "number of iteration rounds")
        ->required()
        ->check(CLI::NonNegativeNumber);
    iterate_cmd->add_option("--policy", policy_text, "oneway | zero-syndrome | threshold=<t>");
    iterate_cmd->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "best iterate-then-hash yields over a fidelity grid");
    sweep_cmd->add_option("--preset", sweep_presets, "presets to compare (repeatable)");
    sweep_cmd->add_option("--grid", grid_spec, "fidelity grid a:b:step")->required();
    sweep_cmd->add_option("--rounds", rounds, "max iteration rounds (default 6)")
        ->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--policy", policy_text, "oneway | zero-syndrome | threshold=<t>");
    sweep_cmd->add_option("--out", out_path, "output path (default stdout)");
    sweep_cmd->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "dense-simulation verification suite for a code");
    add_code_opts(verify_cmd);
    verify_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (app.got_subcommand(analyze_cmd)) {
            StabilizerCode code = load_code(preset, code_file);
            BellDiagState state = load_state(werner_f, state_file, code, code.n());
            ConvertedProtocol proto = make_protocol(code, AcceptPolicy::parse(policy_text));
            ProtocolReport rep = analyze(proto, state);
            if (format == "csv") {
                write_output(out_path, report_csv(rep), out);
            } else {
                write_output(out_path, round_numbers(report_to_json(rep)).dump(2) + "\n", out);
            }
            return 0;
        }
        if (app.got_subcommand(iterate_cmd)) {
            StabilizerCode code = load_code(preset, code_file);
            BellDiagState initial = load_state(werner_f, state_file, code, code.k());
            ConvertedProtocol proto = make_protocol(code, AcceptPolicy::parse(policy_text));
            IterationTrace trace = iterate(proto, initial, rounds);
            write_output(out_path, round_numbers(trace_to_json(trace)).dump(2) + "\n", out);
            return 0;
        }
        if (app.got_subcommand(sweep_cmd)) {
            if (sweep_presets.empty()) sweep_presets = preset_names();
            if (sweep_cmd->count("--rounds") == 0) rounds = 6;
            if (sweep_cmd->count("--format") == 0) format = "csv";
            AcceptPolicy policy = AcceptPolicy::parse(policy_text);
            std::vector<NamedProtocol> protos;
            for (const std::string& name : sweep_presets) {
                protos.push_back({name, preset_protocol(name, policy)});
            }
            std::vector<double> grid = parse_grid(grid_spec);
            std::vector<YieldCurve> curves = comparison_sweep(protos, grid, rounds);
            if (format == "json") {
                nlohmann::json j;
                j["schema"] = "qdistil/sweep-v1";
                j["max_rounds"] = rounds;
                nlohmann::json cs = nlohmann::json::array();
                for (const YieldCurve& c : curves) {
                    nlohmann::json pts = nlohmann::json::array();
                    for (const YieldPoint& pt : c.points) {
                        pts.push_back({{"F", pt.fidelity},
                                       {"best_rounds", pt.best_rounds},
                                       {"net_yield", pt.net_yield}});
                    }
                    cs.push_back({{"protocol", c.protocol}, {"points", std::move(pts)}});
                }
                j["curves"] = std::move(cs);
                write_output(out_path, round_numbers(j).dump(2) + "\n", out);
            } else {
                write_output(out_path, sweep_to_csv(curves), out);
            }
            return 0;
        }
        if (app.got_subcommand(verify_cmd)) {
            return cmd_verify(preset, code_file, out_path, out);
        }
        err << "no subcommand given\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qdistil
