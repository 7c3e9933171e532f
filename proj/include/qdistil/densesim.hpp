#ifndef QDISTIL_DENSESIM_HPP
#define QDISTIL_DENSESIM_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qdistil/protocol.hpp"

// Small dense complex state-vector oracle: exact quantum semantics of the
// protocol (Bell vectors, XZ operators, eigenspace projectors, encoders, the
// full measure/correct/decode/trace channel) plus the bad-codeword
// construction. Everything here exists for verification at desk scale, not
// for performance.
//
// Conventions, pinned by the checks in tests/:
//   - omega = exp(2*pi*i/p); X|i> = |i+1 mod p>, Z|i> = omega^i |i>.
//   - qudit digits are big-endian; a joint (A,B) index is iA * p^n + iB.
//   - generators with XZ(g)^p = -I (p = 2, odd XZ overlap) are premultiplied
//     by i so every measured operator has an eigenvalue-one eigenspace; the
//     correction is invisible in syndrome differences.
//   - star operators are entrywise conjugates; the Alice-side projector of a
//     sector is the conjugate of Bob's.

namespace qdistil {

// Dense state vectors are capped at p^{2n} <= 2^18 amplitudes; operator and
// density-matrix work is capped at dimension p^{2n} <= 2^10.
inline constexpr std::uint64_t kAmplitudeCapacity = 1u << 18;
inline constexpr std::uint64_t kDensityDimensionCapacity = 1u << 10;

struct DenseState {
    int p = 2;
    int qudits = 0;
    Eigen::VectorXcd amps;
};

struct DenseOperator {
    int p = 2;
    int qudits = 0;
    Eigen::MatrixXcd mat;
};

// |beta(u)> on 2n qudits (n A-qudits then n B-qudits).
DenseState bell_vector(const SympVector& u);

// XZ(u) = X^{a1}Z^{b1} x ... x X^{an}Z^{bn} on n qudits (no phase correction).
DenseOperator xz_operator(const SympVector& u);

// XZ(u)|v> as a monomial action, O(p^n).
Eigen::VectorXcd xz_apply(const SympVector& u, const Eigen::VectorXcd& v);

// i^(sum a_t b_t mod 2) for p = 2, 1 otherwise: the premultiplier that makes
// (phase * XZ(u))^p = I.
std::complex<double> xz_phase_correction(const SympVector& u);

// Projector table indexed by syndrome rank; sum over x is the identity.
// star = true returns the entrywise conjugates.
std::vector<DenseOperator> stabilizer_projectors(const StabilizerCode& code, bool star);

// Unitary sending |i>|a> (logical digits first) to XZ(i . xbar)|sector+a, 0>,
// where |x,0> is the joint eigenvalue-one state of the sector projector and
// the phase-corrected logical Z operators, with its first nonzero amplitude
// rotated to the positive real axis.
DenseOperator encoder(const StabilizerCode& code, const Syndrome& sector);

struct DenseSyndromeRecord {
    Syndrome s;
    double prob = 0.0;
    Eigen::MatrixXcd state;             // normalized k-pair output, zero when prob = 0
    double fidelity = 0.0;              // <beta(0)|state|beta(0)>
    std::vector<double> bell_weights;   // Bell-basis diagonal of `state`
};

struct DenseRunResult {
    std::vector<DenseSyndromeRecord> records; // all p^(n-k) syndromes in rank order
    double avg_fidelity = 0.0;                // sum_s prob(s) fidelity(s)
};

// Exact channel semantics of one protocol run on an arbitrary density
// operator rho over the joint (A,B) space of n pairs: Alice measures the
// conjugated sector projectors, Bob measures the plain ones, Bob applies
// XZ(e(s))^{-1}, both apply inverse encoders for Alice's sector, and the last
// n-k qudit pairs are traced out.
DenseRunResult run_protocol_dense(const ConvertedProtocol& proto, const Eigen::MatrixXcd& rho);

Eigen::MatrixXcd bell_diag_density(const BellDiagState& state);

// Bell-basis diagonal <beta(u)|rho|beta(u)>, indexed by vector rank.
std::vector<double> bell_coefficients(const Eigen::MatrixXcd& rho, int p, int pairs);

struct BadCodewordWitness {
    SympSubspace c_max;               // self-dual extension of the stabilizer span
    std::vector<SympVector> reps;     // representatives of C^perp / c_max, zero first
    DenseState stabilizer_state;      // the unique eigenvalue-one state of c_max
    DenseState superposed_codeword;   // its normalized sum of XZ(x)-translates over reps
    DenseState witness;               // normalized stabilizer_state + superposed_codeword
};

BadCodewordWitness bad_codeword_witness(const StabilizerCode& code);

struct UncorrectableOverlap {
    double max_overlap = 0.0;          // max |<w|XZ(e - r_e)|w>| over uncorrectable errors
    SympVector witness_error;          // the maximizing error
    SympVector witness_residual;       // e - r_e for the maximizer
    std::uint64_t uncorrectable_count = 0;
};

UncorrectableOverlap max_uncorrectable_overlap(const StabilizerCode& code, const DecodeRule& rule);

} // namespace qdistil

#endif
