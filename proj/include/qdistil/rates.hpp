#ifndef QDISTIL_RATES_HPP
#define QDISTIL_RATES_HPP

#include <span>
#include <string>
#include <vector>

#include "qdistil/bell_state.hpp"
#include "qdistil/protocol.hpp"

// Hashing-protocol yields, iterate-then-hash accounting, and comparison
// sweeps over Werner fidelities.
//
// Yield accounting per initial pair after m rounds of an [[n,k]] protocol:
//   (k/n)^m * prod_{r<=m} accept_prob_r * hashing_yield(W_m) / k
// Negative hashing yields are clipped to zero (the hashing stage is simply
// not run below threshold).

namespace qdistil {

// Shannon entropy -sum w log_b w with 0 log 0 = 0; the distribution must be
// normalized within 1e-9.
double entropy(std::span<const double> dist, double base);

// Entropy of a weight table in base b; additive over product factors.
double entropy(const BellDiagState& state, double base);

// max(0, k - H_p(W)) distillable pairs per k-pair block.
double hashing_yield(const BellDiagState& w);

struct CombinedYield {
    int best_rounds = 0;
    double net_yield = 0.0;
};

// Runs the iteration from werner_converted(F) (k independent copies when
// k > 1) for m = 0..max_rounds and returns the maximizing round count.
CombinedYield combined_yield(const ConvertedProtocol& proto, double fidelity, int max_rounds);

struct YieldPoint {
    double fidelity = 0.0;
    int best_rounds = 0;
    double net_yield = 0.0;
};

struct YieldCurve {
    std::string protocol;
    std::vector<YieldPoint> points;
};

struct NamedProtocol {
    std::string name;
    ConvertedProtocol proto;
};

// One curve per protocol over the grid. Grid points are independent and are
// evaluated on a small thread pool; output ordering follows the inputs.
std::vector<YieldCurve> comparison_sweep(std::span<const NamedProtocol> protocols,
                                         std::span<const double> f_grid, int max_rounds);

// Header "F,protocol,best_rounds,net_yield", grid-major row order, twelve
// significant digits.
std::string sweep_to_csv(std::span<const YieldCurve> curves);

} // namespace qdistil

#endif
