#ifndef QDISTIL_PROTOCOL_HPP
#define QDISTIL_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdistil/bell_state.hpp"
#include "qdistil/stabilizer.hpp"

// The conversion engine: classical tracking of the measure/communicate/
// correct/decode steps on Bell-diagonal inputs, per-syndrome output states
// and fidelities, acceptance policies, block iteration, and the
// fidelity bound for arbitrary input density operators.

namespace qdistil {

// Syndrome acceptance. Keeping or discarding the round is the only step that
// needs back-communication, so "accept all" is the one-way protocol and any
// strict subset gives a two-way protocol.
struct AcceptPolicy {
    enum class Kind { OneWay, ZeroSyndrome, FidelityThreshold };

    Kind kind = Kind::ZeroSyndrome;
    double threshold = 0.0;

    static AcceptPolicy one_way() { return {Kind::OneWay, 0.0}; }
    static AcceptPolicy zero_syndrome() { return {Kind::ZeroSyndrome, 0.0}; }
    static AcceptPolicy fidelity_threshold(double theta) { return {Kind::FidelityThreshold, theta}; }

    // "oneway" | "zero-syndrome" | "threshold=<theta>"
    static AcceptPolicy parse(std::string_view text);
    std::string name() const;

    bool depends_on_weights() const { return kind == Kind::FidelityThreshold; }
    bool accepts(const Syndrome& s, double fidelity) const;
};

enum class DecodeMode {
    MostLikely, // recompute e(s) from the input weights on every run
    Fixed,      // use the stored table
};

struct ConvertedProtocol {
    StabilizerCode code;
    AcceptPolicy policy = AcceptPolicy::zero_syndrome();
    DecodeMode mode = DecodeMode::MostLikely;
    std::optional<DecodeRule> fixed_rule; // required iff mode == Fixed
};

ConvertedProtocol make_protocol(StabilizerCode code,
                                AcceptPolicy policy = AcceptPolicy::zero_syndrome());
ConvertedProtocol make_protocol(StabilizerCode code, AcceptPolicy policy, DecodeRule rule);

struct SyndromeRecord {
    Syndrome s;
    double prob = 0.0;
    SympVector decoded;                 // e(s)
    std::vector<double> output_weights; // conditional on s, indexed by LogicalClass rank
    double fidelity = 0.0;              // output_weights at the zero class
    bool accepted = false;
};

struct ProtocolReport {
    int p = 2;
    int n = 0;
    int k = 0;
    std::string policy;
    std::vector<SyndromeRecord> records; // all p^(n-k) syndromes in rank order
    double accept_prob = 0.0;
    double avg_fidelity_bound = 0.0;    // sum_s prob(s) fidelity(s) over all s
    double conditional_fidelity = 0.0;  // same sum over accepted s, renormalized

    const SyndromeRecord& record(const Syndrome& s) const;
    // Mixture of conditional outputs over accepted syndromes: the k-pair
    // joint state fed into the next round.
    BellDiagState accepted_output() const;
};

// argmax_e of the stabilizer-coset weight sum within D(s); ties broken by the
// lexicographically smallest coset representative.
SympVector most_likely_error(const StabilizerCode& code, const Syndrome& s,
                             const BellDiagState& weights);

// The full most-likely table for one input distribution. Syndromes with zero
// probability fall back to the lex-smallest solution of the syndrome
// equation, keeping the rule total.
DecodeRule make_most_likely_rule(const StabilizerCode& code, const BellDiagState& weights);

// Same maximization on a raw nonnegative table indexed by vector rank; the
// table need not be normalized (used for Bell-basis diagonals).
DecodeRule make_most_likely_rule(const StabilizerCode& code, const std::vector<double>& table);

ProtocolReport analyze(const ConvertedProtocol& proto, const BellDiagState& weights);

struct IterationRound {
    int round = 0;
    double accept_prob = 1.0;
    BellDiagState joint; // k-pair joint state after this round
    double hashing_yield = 0.0;
    double net_yield_per_initial_pair = 0.0;
};

struct IterationTrace {
    int p = 2;
    int n = 0;
    int k = 0;
    std::vector<IterationRound> rounds; // index = round number, 0 = input
};

// Each round feeds n/k independent copies of the current k-pair joint into
// the protocol and conditions on acceptance; the trace stops early if the
// acceptance probability hits zero.
IterationTrace iterate(const ConvertedProtocol& proto, const BellDiagState& initial, int rounds);

// Good = {u : u in e(syndrome_of(u)) + C and the syndrome is accepted}:
// exactly the inputs |beta(u)> the protocol turns into perfect output pairs.
// Owns its code so it outlives the protocol it was derived from.
struct GoodSet {
    StabilizerCode code;
    std::vector<SympVector> rule_table;  // per syndrome rank
    std::vector<bool> accepted;          // per syndrome rank

    bool contains(const SympVector& u) const;
    std::uint64_t size() const; // (#accepted syndromes) * p^(n-k)
};

// For weight-dependent pieces (most-likely decoding, threshold policies) the
// input distribution must be supplied.
GoodSet good_set(const ConvertedProtocol& proto,
                 const std::optional<BellDiagState>& weights = std::nullopt);

// Lower bound on the output fidelity for an arbitrary input density operator,
// given only its Bell-basis diagonal. The rule maximizes the Good mass per
// syndrome (coset-mass argmax over the supplied coefficients); returns
// 1 - sum_{u not in Good} coeff(u).
double general_fidelity_bound(const ConvertedProtocol& proto, const std::vector<double>& coeffs);

nlohmann::json report_to_json(const ProtocolReport& report);
nlohmann::json trace_to_json(const IterationTrace& trace);

} // namespace qdistil

#endif
