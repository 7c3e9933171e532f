#include "qdistil/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qdistil/rates.hpp"

namespace qdistil {

AcceptPolicy AcceptPolicy::parse(std::string_view text) {
    if (text == "oneway") return one_way();
    if (text == "zero-syndrome") return zero_syndrome();
    if (text.rfind("threshold=", 0) == 0) {
        std::string_view v = text.substr(10);
        double theta = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), theta);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !(theta >= 0.0 && theta <= 1.0)) {
            throw ParseError("invalid threshold policy: '" + std::string(text) + "'");
        }
        return fidelity_threshold(theta);
    }
    throw ParseError("unknown accept policy: '" + std::string(text) + "'");
}

std::string AcceptPolicy::name() const {
    switch (kind) {
    case Kind::OneWay: return "oneway";
    case Kind::ZeroSyndrome: return "zero-syndrome";
    case Kind::FidelityThreshold: {
        char buf[48];
        std::snprintf(buf, sizeof buf, "threshold=%.12g", threshold);
        return buf;
    }
    }
    return "?";
}

bool AcceptPolicy::accepts(const Syndrome& s, double fidelity) const {
    switch (kind) {
    case Kind::OneWay: return true;
    case Kind::ZeroSyndrome: return s.is_zero();
    case Kind::FidelityThreshold: return fidelity >= threshold;
    }
    return false;
}

ConvertedProtocol make_protocol(StabilizerCode code, AcceptPolicy policy) {
    return ConvertedProtocol{std::move(code), policy, DecodeMode::MostLikely, std::nullopt};
}

ConvertedProtocol make_protocol(StabilizerCode code, AcceptPolicy policy, DecodeRule rule) {
    return ConvertedProtocol{std::move(code), policy, DecodeMode::Fixed, std::move(rule)};
}

namespace {

// One pass over Z_p^{2n}: weight mass per (syndrome, raw label) cell plus the
// lexicographically smallest member of each cell (= first one visited, since
// the enumeration is in lex order and cells are cosets of C).
struct MassTable {
    int p;
    std::uint64_t syndromes;
    std::uint64_t classes;
    std::vector<double> mass;            // [s * classes + label]
    std::vector<std::int64_t> first_rep; // vector rank, -1 when the cell is empty

    double cell(std::uint64_t s, std::uint64_t label) const {
        return mass[static_cast<std::size_t>(s * classes + label)];
    }
};

template <typename WeightAt>
MassTable accumulate_masses(const StabilizerCode& code, WeightAt&& weight_at) {
    const int p = code.p();
    const int len = 2 * code.n();
    const std::uint64_t total = checked_pow(p, len, kEnumerationCapacity, "protocol analysis");
    MassTable t;
    t.p = p;
    t.syndromes = code.syndrome_count();
    t.classes = checked_pow(p, 2 * code.k(), kEnumerationCapacity, "logical classes");
    t.mass.assign(static_cast<std::size_t>(t.syndromes * t.classes), 0.0);
    t.first_rep.assign(static_cast<std::size_t>(t.syndromes * t.classes), -1);
    for (std::uint64_t r = 0; r < total; ++r) {
        SympVector u = vector_unrank(p, len, r);
        std::uint64_t s = code.syndrome_of(u).rank();
        std::uint64_t label = code.raw_label(u).rank();
        std::size_t cell = static_cast<std::size_t>(s * t.classes + label);
        t.mass[cell] += weight_at(u, r);
        if (t.first_rep[cell] < 0) t.first_rep[cell] = static_cast<std::int64_t>(r);
    }
    return t;
}

MassTable accumulate_masses(const StabilizerCode& code, const BellDiagState& state) {
    if (state.p() != code.p() || state.pairs() != code.n()) {
        throw DimensionError("analyze: state does not match the code's pair count");
    }
    if (!state.is_product()) {
        const std::vector<double>& w = state.dense_weights();
        return accumulate_masses(code,
                                 [&](const SympVector&, std::uint64_t r) { return w[static_cast<std::size_t>(r)]; });
    }
    return accumulate_masses(code, [&](const SympVector& u, std::uint64_t) { return state.weight(u); });
}

// Rank of the componentwise mod-p sum of two label ranks.
std::uint64_t label_add(int p, int k, std::uint64_t a, std::uint64_t b) {
    std::vector<int> da(static_cast<std::size_t>(2 * k)), db(static_cast<std::size_t>(2 * k));
    for (int i = 2 * k - 1; i >= 0; --i) {
        da[static_cast<std::size_t>(i)] = static_cast<int>(a % static_cast<std::uint64_t>(p));
        db[static_cast<std::size_t>(i)] = static_cast<int>(b % static_cast<std::uint64_t>(p));
        a /= static_cast<std::uint64_t>(p);
        b /= static_cast<std::uint64_t>(p);
    }
    std::uint64_t out = 0;
    for (int i = 0; i < 2 * k; ++i) {
        out = out * static_cast<std::uint64_t>(p) +
              static_cast<std::uint64_t>((da[static_cast<std::size_t>(i)] + db[static_cast<std::size_t>(i)]) % p);
    }
    return out;
}

SympVector choose_most_likely(const StabilizerCode& code, const MassTable& t, std::uint64_t s_rank) {
    // argmax of the coset masses; ties resolved by the smaller representative
    double best = -1.0;
    std::int64_t best_rep = -1;
    for (std::uint64_t label = 0; label < t.classes; ++label) {
        std::size_t cell = static_cast<std::size_t>(s_rank * t.classes + label);
        if (t.first_rep[cell] < 0) continue;
        double m = t.mass[cell];
        if (m > best || (m == best && t.first_rep[cell] < best_rep)) {
            best = m;
            best_rep = t.first_rep[cell];
        }
    }
    if (best_rep < 0 || best <= 0.0) {
        return code.error_set(syndrome_unrank(code.p(), code.n() - code.k(), s_rank)).e0;
    }
    return vector_unrank(code.p(), 2 * code.n(), static_cast<std::uint64_t>(best_rep));
}

ProtocolReport build_report(const ConvertedProtocol& proto, const MassTable& t) {
    const StabilizerCode& code = proto.code;
    ProtocolReport rep;
    rep.p = code.p();
    rep.n = code.n();
    rep.k = code.k();
    rep.policy = proto.policy.name();
    rep.records.resize(static_cast<std::size_t>(t.syndromes));
    for (std::uint64_t s = 0; s < t.syndromes; ++s) {
        SyndromeRecord& r = rep.records[static_cast<std::size_t>(s)];
        r.s = syndrome_unrank(code.p(), code.n() - code.k(), s);
        double prob = 0.0;
        for (std::uint64_t label = 0; label < t.classes; ++label) prob += t.cell(s, label);
        r.prob = prob;
        if (proto.mode == DecodeMode::Fixed) {
            r.decoded = (*proto.fixed_rule)(r.s);
        } else {
            r.decoded = choose_most_likely(code, t, s);
        }
        std::uint64_t shift = code.raw_label(r.decoded).rank();
        r.output_weights.assign(static_cast<std::size_t>(t.classes), 0.0);
        if (prob > 0.0) {
            for (std::uint64_t mu = 0; mu < t.classes; ++mu) {
                r.output_weights[static_cast<std::size_t>(mu)] =
                    t.cell(s, label_add(code.p(), code.k(), mu, shift)) / prob;
            }
            r.fidelity = r.output_weights[0];
        }
        r.accepted = proto.policy.accepts(r.s, r.fidelity);
        rep.avg_fidelity_bound += r.prob * r.fidelity;
        if (r.accepted) {
            rep.accept_prob += r.prob;
            rep.conditional_fidelity += r.prob * r.fidelity;
        }
    }
    rep.conditional_fidelity = rep.accept_prob > 0.0 ? rep.conditional_fidelity / rep.accept_prob : 0.0;
    return rep;
}

} // namespace

const SyndromeRecord& ProtocolReport::record(const Syndrome& s) const {
    return records.at(static_cast<std::size_t>(s.rank()));
}

BellDiagState ProtocolReport::accepted_output() const {
    if (accept_prob <= 0.0) {
        throw ContractError("accepted_output: acceptance probability is zero");
    }
    std::size_t classes = records.front().output_weights.size();
    std::vector<double> w(classes, 0.0);
    for (const SyndromeRecord& r : records) {
        if (!r.accepted || r.prob <= 0.0) continue;
        for (std::size_t i = 0; i < classes; ++i) w[i] += r.prob * r.output_weights[i];
    }
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return BellDiagState::dense(p, k, std::move(w));
}

SympVector most_likely_error(const StabilizerCode& code, const Syndrome& s,
                             const BellDiagState& weights) {
    MassTable t = accumulate_masses(code, weights);
    return choose_most_likely(code, t, s.rank());
}

namespace {

DecodeRule rule_from_masses(const StabilizerCode& code, const MassTable& t) {
    std::vector<SympVector> table;
    table.reserve(static_cast<std::size_t>(t.syndromes));
    for (std::uint64_t s = 0; s < t.syndromes; ++s) {
        table.push_back(choose_most_likely(code, t, s));
    }
    return DecodeRule(code, std::move(table));
}

} // namespace

DecodeRule make_most_likely_rule(const StabilizerCode& code, const BellDiagState& weights) {
    return rule_from_masses(code, accumulate_masses(code, weights));
}

DecodeRule make_most_likely_rule(const StabilizerCode& code, const std::vector<double>& table) {
    const std::uint64_t total =
        checked_pow(code.p(), 2 * code.n(), kEnumerationCapacity, "most_likely_rule");
    if (table.size() != total) {
        throw DimensionError("most_likely_rule: table must have p^(2n) entries");
    }
    MassTable t = accumulate_masses(
        code, [&](const SympVector&, std::uint64_t r) { return table[static_cast<std::size_t>(r)]; });
    return rule_from_masses(code, t);
}

ProtocolReport analyze(const ConvertedProtocol& proto, const BellDiagState& weights) {
    if (proto.mode == DecodeMode::Fixed && !proto.fixed_rule) {
        throw ContractError("analyze: fixed decode mode without a rule");
    }
    MassTable t = accumulate_masses(proto.code, weights);
    return build_report(proto, t);
}

IterationTrace iterate(const ConvertedProtocol& proto, const BellDiagState& initial, int rounds) {
    const StabilizerCode& code = proto.code;
    if (rounds < 0) throw ContractError("iterate: negative round count");
    if (code.n() % code.k() != 0) {
        throw ContractError("iterate: unsupported iteration, n must be a multiple of k");
    }
    if (initial.pairs() != code.k()) {
        throw DimensionError("iterate: initial state must cover k pairs");
    }
    const int copies = code.n() / code.k();

    IterationTrace trace;
    trace.p = code.p();
    trace.n = code.n();
    trace.k = code.k();

    BellDiagState joint = initial;
    double cumulative_accept = 1.0;
    double hy = hashing_yield(joint);
    trace.rounds.push_back(IterationRound{0, 1.0, joint, hy, hy / code.k()});

    const double block_ratio = static_cast<double>(code.k()) / static_cast<double>(code.n());
    for (int m = 1; m <= rounds; ++m) {
        std::vector<BellDiagState> block(static_cast<std::size_t>(copies), joint);
        ProtocolReport rep = analyze(proto, tensor(block));
        if (rep.accept_prob <= 0.0) break; // nothing survives; trace ends here
        joint = rep.accepted_output();
        cumulative_accept *= rep.accept_prob;
        hy = hashing_yield(joint);
        trace.rounds.push_back(IterationRound{
            m, rep.accept_prob, joint, hy,
            std::pow(block_ratio, m) * cumulative_accept * hy / code.k()});
    }
    return trace;
}

bool GoodSet::contains(const SympVector& u) const {
    const Syndrome s = code.syndrome_of(u);
    if (!accepted[static_cast<std::size_t>(s.rank())]) return false;
    return code.stabilizer_space().contains(u - rule_table[static_cast<std::size_t>(s.rank())]);
}

std::uint64_t GoodSet::size() const {
    std::uint64_t n_accept = 0;
    for (bool a : accepted) n_accept += a ? 1 : 0;
    return n_accept *
           checked_pow(code.p(), code.n() - code.k(), kEnumerationCapacity, "good set size");
}

GoodSet good_set(const ConvertedProtocol& proto, const std::optional<BellDiagState>& weights) {
    const StabilizerCode& code = proto.code;
    GoodSet g{code, {}, {}};
    const std::uint64_t syndromes = code.syndrome_count();
    if (weights) {
        ProtocolReport rep = analyze(proto, *weights);
        for (const SyndromeRecord& r : rep.records) {
            g.rule_table.push_back(r.decoded);
            g.accepted.push_back(r.accepted);
        }
        return g;
    }
    if (proto.mode != DecodeMode::Fixed) {
        throw ContractError("good_set: most-likely decoding needs an input distribution");
    }
    if (proto.policy.depends_on_weights()) {
        throw ContractError("good_set: threshold policy needs an input distribution");
    }
    for (std::uint64_t s = 0; s < syndromes; ++s) {
        Syndrome syn = syndrome_unrank(code.p(), code.n() - code.k(), s);
        g.rule_table.push_back((*proto.fixed_rule)(syn));
        g.accepted.push_back(proto.policy.accepts(syn, 0.0));
    }
    return g;
}

double general_fidelity_bound(const ConvertedProtocol& proto, const std::vector<double>& coeffs) {
    const StabilizerCode& code = proto.code;
    const std::uint64_t total =
        checked_pow(code.p(), 2 * code.n(), kEnumerationCapacity, "general_fidelity_bound");
    if (coeffs.size() != total) {
        throw DimensionError("general_fidelity_bound: coefficient table must have p^(2n) entries");
    }
    double sum = 0.0;
    for (double c : coeffs) {
        if (!(c >= 0.0)) throw ContractError("general_fidelity_bound: negative coefficient");
        sum += c;
    }
    if (sum > 1.0 + kWeightTolerance) {
        throw ContractError("general_fidelity_bound: coefficients sum above 1");
    }
    MassTable t = accumulate_masses(
        code, [&](const SympVector&, std::uint64_t r) { return coeffs[static_cast<std::size_t>(r)]; });
    // Rule: maximize the Good mass per syndrome; policy evaluated on the
    // induced per-syndrome fidelities.
    double good_mass = 0.0;
    for (std::uint64_t s = 0; s < t.syndromes; ++s) {
        SympVector e = proto.mode == DecodeMode::Fixed
                           ? (*proto.fixed_rule)(syndrome_unrank(code.p(), code.n() - code.k(), s))
                           : choose_most_likely(code, t, s);
        double prob = 0.0;
        for (std::uint64_t label = 0; label < t.classes; ++label) prob += t.cell(s, label);
        double kept = t.cell(s, code.raw_label(e).rank());
        double fid = prob > 0.0 ? kept / prob : 0.0;
        if (proto.policy.accepts(syndrome_unrank(code.p(), code.n() - code.k(), s), fid)) {
            good_mass += kept;
        }
    }
    return 1.0 - (sum - good_mass);
}

nlohmann::json report_to_json(const ProtocolReport& report) {
    nlohmann::json j;
    j["schema"] = "qdistil/report-v1";
    j["p"] = report.p;
    j["n"] = report.n;
    j["k"] = report.k;
    j["policy"] = report.policy;
    j["accept_prob"] = report.accept_prob;
    j["avg_fidelity_bound"] = report.avg_fidelity_bound;
    j["conditional_fidelity"] = report.conditional_fidelity;
    nlohmann::json recs = nlohmann::json::array();
    for (const SyndromeRecord& r : report.records) {
        nlohmann::json e;
        e["s"] = r.s.entries;
        e["prob"] = r.prob;
        e["accepted"] = r.accepted;
        e["decoded"] = r.decoded.coords;
        e["fidelity"] = r.fidelity;
        nlohmann::json ws = nlohmann::json::array();
        for (std::size_t i = 0; i < r.output_weights.size(); ++i) {
            if (r.output_weights[i] == 0.0) continue;
            SympVector label = vector_unrank(report.p, 2 * report.k, static_cast<std::uint64_t>(i));
            ws.push_back({{"label", label.coords}, {"w", r.output_weights[i]}});
        }
        e["output_weights"] = std::move(ws);
        recs.push_back(std::move(e));
    }
    j["syndromes"] = std::move(recs);
    return j;
}

nlohmann::json trace_to_json(const IterationTrace& trace) {
    nlohmann::json j;
    j["schema"] = "qdistil/trace-v1";
    j["p"] = trace.p;
    j["n"] = trace.n;
    j["k"] = trace.k;
    nlohmann::json rounds = nlohmann::json::array();
    for (const IterationRound& r : trace.rounds) {
        rounds.push_back({{"round", r.round},
                          {"accept_prob", r.accept_prob},
                          {"hashing_yield", r.hashing_yield},
                          {"net_yield_per_initial_pair", r.net_yield_per_initial_pair},
                          {"joint_state", state_to_json(r.joint)}});
    }
    j["rounds"] = std::move(rounds);
    return j;
}

} // namespace qdistil
