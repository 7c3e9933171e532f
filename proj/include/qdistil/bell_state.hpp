#ifndef QDISTIL_BELL_STATE_HPP
#define QDISTIL_BELL_STATE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "qdistil/zp.hpp"

// Bell-diagonal n-pair states as weight distributions over Z_p^{2n}, kept in
// dense form (table of size p^{2n}) or lazily as a product of independent
// factors. Weights are indexed by vector_rank of the interleaved error vector.

namespace qdistil {

inline constexpr double kWeightTolerance = 1e-9;

class BellDiagState {
public:
    static BellDiagState dense(int p, int pairs, std::vector<double> weights);
    static BellDiagState product(std::vector<BellDiagState> factors);
    static BellDiagState point_mass(const SympVector& u);

    int p() const { return p_; }
    int pairs() const { return pairs_; }
    bool is_product() const { return !factors_.empty(); }

    double weight(const SympVector& u) const;
    // Dense table access; throws on product form.
    const std::vector<double>& dense_weights() const;
    const std::vector<BellDiagState>& factors() const { return factors_; }

    BellDiagState densified() const; // capacity p^{2n} <= 2^20

    double sum() const;

private:
    BellDiagState() = default;

    int p_ = 2;
    int pairs_ = 0;
    std::vector<double> weights_;         // dense form
    std::vector<BellDiagState> factors_;  // product form
};

// alpha(1,1) = F, the three others (1-F)/3. p = 2 only.
BellDiagState werner_raw(double fidelity);

// F on the zero vector, (1-F)/(p^2-1) on the rest; the p = 2 case is the
// raw Werner state with XZ applied on the second particle.
BellDiagState werner_converted(double fidelity, int p = 2);

// Weight-table translation u -> u + v (norm and entropy preserving).
BellDiagState apply_pauli_to_bob(const BellDiagState& state, const SympVector& v);

BellDiagState tensor(std::span<const BellDiagState> states);
BellDiagState tensor(const BellDiagState& a, const BellDiagState& b);

// Marginal over the given strictly increasing 0-based pair indices.
BellDiagState marginal(const BellDiagState& state, std::span<const int> pair_indices);

nlohmann::json state_to_json(const BellDiagState& state);
BellDiagState state_from_json(const nlohmann::json& j);

} // namespace qdistil

#endif
