#ifndef QDISTIL_ZP_HPP
#define QDISTIL_ZP_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdistil/errors.hpp"

// Exact linear algebra over Z_p with the symplectic form
//   <u,v> = sum_i (b_i c_i - a_i d_i)  mod p
// for u = (a_1,b_1,...,a_n,b_n), v = (c_1,d_1,...,c_n,d_n).
// The interleaved (a_1,b_1,...) coordinate layout is the only wire layout.

namespace qdistil {

// Enumeration of tables and subspace elements is capped at p^{2n} <= 2^20;
// larger inputs are rejected with CapacityError instead of degrading.
inline constexpr std::uint64_t kEnumerationCapacity = 1u << 20;

bool is_prime(int p);
int mod_inverse(int a, int p);

// p^e, throwing CapacityError when the result would exceed `limit`.
std::uint64_t checked_pow(int p, int e, std::uint64_t limit, const char* context);

// An element of Z_p^{2n}, coordinates interleaved as (a1,b1,...,an,bn).
// Coordinates are normalized into {0,...,p-1} on construction.
struct SympVector {
    int p = 2;
    std::vector<int> coords;

    SympVector() = default;
    SympVector(int p, std::vector<int> coords);

    int size() const { return static_cast<int>(coords.size()); }
    int pairs() const { return size() / 2; }
    bool is_zero() const;

    friend bool operator==(const SympVector&, const SympVector&) = default;
    // Lexicographic order on coordinates; moduli must match to be comparable.
    std::strong_ordering operator<=>(const SympVector& other) const;
};

SympVector operator+(const SympVector& u, const SympVector& v);
SympVector operator-(const SympVector& u, const SympVector& v);
SympVector operator*(int c, const SympVector& u);

// Rank of a vector in the lexicographic enumeration of Z_p^{len}
// (big-endian base-p reading of the coordinates).
std::uint64_t vector_rank(const SympVector& u);
SympVector vector_unrank(int p, int len, std::uint64_t rank);

// (a1,b1,...) -> (a1,-b1,...): the vector of the componentwise conjugate.
SympVector star(const SympVector& u);

int symp_product(const SympVector& u, const SympVector& v);

// A subspace of Z_p^{2n} held as a canonical reduced-row-echelon basis,
// so equality of subspaces is basis-independent.
class SympSubspace {
public:
    SympSubspace(int p, int length); // zero subspace
    static SympSubspace span(int p, int length, std::span<const SympVector> vectors);

    int p() const { return p_; }
    int length() const { return length_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<SympVector>& basis() const { return basis_; }

    bool contains(const SympVector& v) const;
    bool contains_subspace(const SympSubspace& other) const;

    // Canonical coset representative of v + (this subspace): the result has
    // zeros at all pivot positions, which makes it the lexicographically
    // smallest member of the coset.
    SympVector reduce(SympVector v) const;

    // All p^dim elements, sorted lexicographically. CapacityError beyond 2^20.
    std::vector<SympVector> elements() const;

    friend bool operator==(const SympSubspace&, const SympSubspace&) = default;

private:
    int p_;
    int length_;
    std::vector<SympVector> basis_;
};

// Canonical row reduction of an arbitrary generating set.
SympSubspace row_reduce(int p, int length, std::span<const SympVector> vectors);

// C^perp = {u : <g,u> = 0 for all g in C}; dim C + dim C^perp = 2n.
SympSubspace symplectic_dual(const SympSubspace& c);

// True iff all pairs of basis vectors have vanishing symplectic product.
bool is_isotropic(const SympSubspace& c);

// Completes an isotropic C to a self-dual C_max (dim n) by repeatedly
// adjoining the lexicographically smallest vector of C^perp that keeps the
// span isotropic. Deterministic; a fixpoint when C is already self-dual.
SympSubspace witt_extend(const SympSubspace& c);

// Exactly |A|/|B| coset representatives of B in A, each the lexicographically
// smallest member of its coset (so the zero vector represents B itself),
// sorted lexicographically. Requires B <= A.
std::vector<SympVector> coset_representatives(const SympSubspace& a, const SympSubspace& b);

std::string to_string(const SympVector& u);

} // namespace qdistil

#endif
