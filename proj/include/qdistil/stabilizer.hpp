#ifndef QDISTIL_STABILIZER_HPP
#define QDISTIL_STABILIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdistil/zp.hpp"

// An [[n,k]] stabilizer code over Z_p: generators g_1..g_{n-k}, the spanned
// subspace C, its symplectic dual C^perp, and a symplectic logical basis
// (x1,z1,...,xk,zk) in C^perp with <xi,zj> = delta_ij.

namespace qdistil {

// Difference vector of measurement outcomes, one residue per generator.
struct Syndrome {
    int p = 2;
    std::vector<int> entries;

    Syndrome() = default;
    Syndrome(int p, std::vector<int> entries);

    int size() const { return static_cast<int>(entries.size()); }
    bool is_zero() const;
    std::uint64_t rank() const; // big-endian base-p

    friend bool operator==(const Syndrome&, const Syndrome&) = default;
    std::strong_ordering operator<=>(const Syndrome& other) const { return entries <=> other.entries; }
};

Syndrome syndrome_unrank(int p, int len, std::uint64_t rank);

// Element of C^perp/C as a length-2k residue label, interleaved; the label
// doubles as the residual error vector on the k output pairs.
struct LogicalClass {
    int p = 2;
    int k = 0;
    std::vector<int> label;

    LogicalClass() = default;
    LogicalClass(int p, int k, std::vector<int> label);

    bool is_zero() const;
    std::uint64_t rank() const;
    SympVector as_vector() const { return SympVector(p, label); }

    friend bool operator==(const LogicalClass&, const LogicalClass&) = default;
};

class StabilizerCode {
public:
    // Derives a deterministic logical basis by greedy hyperbolic-pair
    // extraction from the coset representatives of C in C^perp.
    static StabilizerCode build(int p, std::vector<SympVector> generators);

    // Same validation, but with a caller-pinned logical basis (used by the
    // built-in presets, whose conventions are fixed by their encoders).
    static StabilizerCode build(int p, std::vector<SympVector> generators,
                                std::vector<SympVector> logical_basis);

    int p() const { return p_; }
    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<SympVector>& generators() const { return generators_; }
    const SympSubspace& stabilizer_space() const { return c_; }      // C
    const SympSubspace& dual_space() const { return c_perp_; }       // C^perp
    const std::vector<SympVector>& logical_basis() const { return logical_; }

    std::uint64_t syndrome_count() const; // p^(n-k)

    Syndrome syndrome_of(const SympVector& u) const;

    // D(s) = e0 + C^perp with e0 the lexicographically smallest solution of
    // <g_i,u> = s_i. |D(s)| = p^(n+k).
    struct ErrorSet {
        SympVector e0;
        const SympSubspace* coset_space; // C^perp of the owning code
        std::uint64_t size;
    };
    ErrorSet error_set(const Syndrome& s) const;

    // Requires u in C^perp. Constant on cosets of C; zero iff u in C.
    LogicalClass logical_class_of(const SympVector& u) const;

    // Label of an arbitrary vector under the same pairing formulas. Within a
    // fixed D(s) this is constant on cosets of C and classes differ by
    // label(u) - label(v); logical_class_of is the restriction to C^perp.
    LogicalClass raw_label(const SympVector& u) const;

private:
    StabilizerCode() : c_(2, 0), c_perp_(2, 0) {}

    int p_ = 2;
    int n_ = 0;
    int k_ = 0;
    std::vector<SympVector> generators_;
    SympSubspace c_;
    SympSubspace c_perp_;
    std::vector<SympVector> logical_;
};

// Total decode table: one error vector per syndrome, indexed by syndrome
// rank, with syndrome_of(e(s)) = s enforced on construction.
class DecodeRule {
public:
    DecodeRule(const StabilizerCode& code, std::vector<SympVector> table);

    const SympVector& operator()(const Syndrome& s) const;
    const std::vector<SympVector>& table() const { return table_; }

private:
    std::vector<SympVector> table_;
};

// u is correctable iff u lies in e(syndrome_of(u)) + C.
struct CorrectableSet {
    StabilizerCode code;
    DecodeRule rule;

    bool operator()(const SympVector& u) const;
    std::uint64_t count() const; // exhaustive; equals p^(2n-2k) for any total rule
};

CorrectableSet correctable_set(const StabilizerCode& code, const DecodeRule& rule);

// --- text format for code input -------------------------------------------
//
// One generator per line, either a Pauli string over {I,X,Z,Y} (Y = XZ) with
// optional exponent digits for p > 2, or an explicit interleaved coordinate
// row "0 1 0 1". An optional "p = <prime>" line sets the modulus (default 2).
// Full grammar in docs/formats.md.
struct ParsedCode {
    int p = 2;
    std::vector<SympVector> generators;
};

ParsedCode parse_generators(std::string_view text);
SympVector parse_pauli_line(std::string_view line, int p);

// Inverse of the parser for diagnostics: "X2Z ..." style, one qudit per token.
std::string pauli_string(const SympVector& u);

} // namespace qdistil

#endif
