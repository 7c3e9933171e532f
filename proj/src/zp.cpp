#include "qdistil/zp.hpp"

#include <algorithm>
#include <sstream>

namespace qdistil {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

int mod_inverse(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw ContractError("mod_inverse: zero has no inverse");
    // Fermat: a^(p-2) mod p
    int result = 1;
    int base = a;
    int e = p - 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result;
}

std::uint64_t checked_pow(int p, int e, std::uint64_t limit, const char* context) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        r *= static_cast<std::uint64_t>(p);
        if (r > limit) {
            throw CapacityError(std::string(context) + ": p^" + std::to_string(e) +
                                " exceeds the capacity limit " + std::to_string(limit));
        }
    }
    return r;
}

namespace {

int norm_mod(int x, int p) {
    x %= p;
    return x < 0 ? x + p : x;
}

void require_same_space(const SympVector& u, const SympVector& v, const char* op) {
    if (u.p != v.p) throw DimensionError(std::string(op) + ": mismatched moduli");
    if (u.coords.size() != v.coords.size()) {
        throw DimensionError(std::string(op) + ": mismatched lengths");
    }
}

} // namespace

SympVector::SympVector(int p_, std::vector<int> coords_) : p(p_), coords(std::move(coords_)) {
    if (!is_prime(p)) throw ContractError("SympVector: modulus must be prime");
    if (coords.size() % 2 != 0) throw DimensionError("SympVector: length must be even");
    for (int& c : coords) c = norm_mod(c, p);
}

bool SympVector::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
}

std::strong_ordering SympVector::operator<=>(const SympVector& other) const {
    return coords <=> other.coords;
}

SympVector operator+(const SympVector& u, const SympVector& v) {
    require_same_space(u, v, "vector addition");
    SympVector r = u;
    for (std::size_t i = 0; i < r.coords.size(); ++i) {
        r.coords[i] = (r.coords[i] + v.coords[i]) % u.p;
    }
    return r;
}

SympVector operator-(const SympVector& u, const SympVector& v) {
    require_same_space(u, v, "vector subtraction");
    SympVector r = u;
    for (std::size_t i = 0; i < r.coords.size(); ++i) {
        r.coords[i] = norm_mod(r.coords[i] - v.coords[i], u.p);
    }
    return r;
}

SympVector operator*(int c, const SympVector& u) {
    SympVector r = u;
    c = norm_mod(c, u.p);
    for (int& x : r.coords) x = x * c % u.p;
    return r;
}

std::uint64_t vector_rank(const SympVector& u) {
    std::uint64_t r = 0;
    for (int c : u.coords) r = r * static_cast<std::uint64_t>(u.p) + static_cast<std::uint64_t>(c);
    return r;
}

SympVector vector_unrank(int p, int len, std::uint64_t rank) {
    std::vector<int> coords(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        coords[static_cast<std::size_t>(i)] = static_cast<int>(rank % static_cast<std::uint64_t>(p));
        rank /= static_cast<std::uint64_t>(p);
    }
    return SympVector(p, std::move(coords));
}

SympVector star(const SympVector& u) {
    SympVector r = u;
    for (int i = 1; i < r.size(); i += 2) r.coords[i] = norm_mod(-r.coords[i], r.p);
    return r;
}

int symp_product(const SympVector& u, const SympVector& v) {
    require_same_space(u, v, "symp_product");
    long long s = 0;
    for (int i = 0; i < u.size(); i += 2) {
        s += static_cast<long long>(u.coords[i + 1]) * v.coords[i] -
             static_cast<long long>(u.coords[i]) * v.coords[i + 1];
    }
    return norm_mod(static_cast<int>(s % u.p), u.p);
}

SympSubspace::SympSubspace(int p, int length) : p_(p), length_(length) {
    if (!is_prime(p_)) throw ContractError("SympSubspace: modulus must be prime");
    if (length_ < 0 || length_ % 2 != 0) throw DimensionError("SympSubspace: length must be even");
}

SympSubspace SympSubspace::span(int p, int length, std::span<const SympVector> vectors) {
    SympSubspace s(p, length);
    // Gauss-Jordan to reduced row echelon form.
    std::vector<std::vector<int>> rows;
    rows.reserve(vectors.size());
    for (const SympVector& v : vectors) {
        if (v.p != p || v.size() != length) {
            throw DimensionError("row_reduce: vectors live in different spaces");
        }
        rows.push_back(v.coords);
    }
    std::size_t pivot_row = 0;
    for (int col = 0; col < length && pivot_row < rows.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows.size() && rows[sel][static_cast<std::size_t>(col)] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[pivot_row], rows[sel]);
        int inv = mod_inverse(rows[pivot_row][static_cast<std::size_t>(col)], p);
        for (int& x : rows[pivot_row]) x = x * inv % p;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row) continue;
            int f = rows[r][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < length; ++j) {
                rows[r][static_cast<std::size_t>(j)] = norm_mod(
                    rows[r][static_cast<std::size_t>(j)] -
                        f * rows[pivot_row][static_cast<std::size_t>(j)],
                    p);
            }
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
    for (auto& r : rows) s.basis_.emplace_back(p, std::move(r));
    return s;
}

bool SympSubspace::contains(const SympVector& v) const {
    if (v.p != p_ || v.size() != length_) {
        throw DimensionError("contains: vector lives in a different space");
    }
    return reduce(v).is_zero();
}

bool SympSubspace::contains_subspace(const SympSubspace& other) const {
    for (const SympVector& b : other.basis()) {
        if (!contains(b)) return false;
    }
    return true;
}

SympVector SympSubspace::reduce(SympVector v) const {
    if (v.p != p_ || v.size() != length_) {
        throw DimensionError("reduce: vector lives in a different space");
    }
    for (const SympVector& b : basis_) {
        int piv = 0;
        while (b.coords[static_cast<std::size_t>(piv)] == 0) ++piv;
        int f = v.coords[static_cast<std::size_t>(piv)]; // pivot entry of b is 1
        if (f == 0) continue;
        for (int j = piv; j < length_; ++j) {
            v.coords[static_cast<std::size_t>(j)] = norm_mod(
                v.coords[static_cast<std::size_t>(j)] - f * b.coords[static_cast<std::size_t>(j)],
                p_);
        }
    }
    return v;
}

std::vector<SympVector> SympSubspace::elements() const {
    std::uint64_t count = checked_pow(p_, dim(), kEnumerationCapacity, "subspace enumeration");
    std::vector<SympVector> out;
    out.reserve(count);
    std::vector<int> coeffs(static_cast<std::size_t>(dim()), 0);
    SympVector zero(p_, std::vector<int>(static_cast<std::size_t>(length_), 0));
    for (std::uint64_t it = 0;; ++it) {
        SympVector v = zero;
        for (int i = 0; i < dim(); ++i) {
            if (coeffs[static_cast<std::size_t>(i)] != 0) {
                v = v + coeffs[static_cast<std::size_t>(i)] * basis_[static_cast<std::size_t>(i)];
            }
        }
        out.push_back(std::move(v));
        int i = dim() - 1;
        while (i >= 0 && ++coeffs[static_cast<std::size_t>(i)] == p_) {
            coeffs[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

SympSubspace row_reduce(int p, int length, std::span<const SympVector> vectors) {
    return SympSubspace::span(p, length, vectors);
}

SympSubspace symplectic_dual(const SympSubspace& c) {
    const int p = c.p();
    const int len = c.length();
    // <g,u> = flip(g) . u  with flip(g) = (b1,-a1,b2,-a2,...); the dual is the
    // nullspace of the flipped basis matrix.
    std::vector<std::vector<int>> m;
    for (const SympVector& g : c.basis()) {
        std::vector<int> row(static_cast<std::size_t>(len));
        for (int t = 0; t < len; t += 2) {
            row[static_cast<std::size_t>(t)] = g.coords[static_cast<std::size_t>(t + 1)];
            row[static_cast<std::size_t>(t + 1)] = (p - g.coords[static_cast<std::size_t>(t)]) % p;
        }
        m.push_back(std::move(row));
    }
    // RREF of m, then read the nullspace off the free columns.
    std::vector<int> pivot_col;
    std::size_t pivot_row = 0;
    for (int col = 0; col < len && pivot_row < m.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < m.size() && m[sel][static_cast<std::size_t>(col)] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[pivot_row], m[sel]);
        int inv = mod_inverse(m[pivot_row][static_cast<std::size_t>(col)], p);
        for (int& x : m[pivot_row]) x = x * inv % p;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == pivot_row) continue;
            int f = m[r][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < len; ++j) {
                m[r][static_cast<std::size_t>(j)] =
                    norm_mod(m[r][static_cast<std::size_t>(j)] -
                                 f * m[pivot_row][static_cast<std::size_t>(j)],
                             p);
            }
        }
        pivot_col.push_back(col);
        ++pivot_row;
    }
    std::vector<SympVector> null_basis;
    std::vector<bool> is_pivot(static_cast<std::size_t>(len), false);
    for (int c2 : pivot_col) is_pivot[static_cast<std::size_t>(c2)] = true;
    for (int free = 0; free < len; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<int> v(static_cast<std::size_t>(len), 0);
        v[static_cast<std::size_t>(free)] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            v[static_cast<std::size_t>(pivot_col[r])] =
                (p - m[r][static_cast<std::size_t>(free)]) % p;
        }
        null_basis.emplace_back(p, std::move(v));
    }
    return SympSubspace::span(p, len, null_basis);
}

bool is_isotropic(const SympSubspace& c) {
    const auto& b = c.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            if (symp_product(b[i], b[j]) != 0) return false;
        }
    }
    return true;
}

SympSubspace witt_extend(const SympSubspace& c) {
    if (!is_isotropic(c)) throw ContractError("witt_extend: input subspace is not isotropic");
    const int n = c.length() / 2;
    SympSubspace w = c;
    if (w.dim() == n) return w;
    std::vector<SympVector> candidates = symplectic_dual(c).elements();
    // A single lex pass is equivalent to restarting after each adjunction:
    // both rejection conditions are monotone as w grows.
    for (const SympVector& v : candidates) {
        if (w.dim() == n) break;
        bool orthogonal = true;
        for (const SympVector& b : w.basis()) {
            if (symp_product(b, v) != 0) {
                orthogonal = false;
                break;
            }
        }
        if (!orthogonal || w.contains(v)) continue;
        std::vector<SympVector> next = w.basis();
        next.push_back(v);
        w = SympSubspace::span(c.p(), c.length(), next);
    }
    if (w.dim() != n) throw ContractError("witt_extend: extension did not reach dimension n");
    return w;
}

std::vector<SympVector> coset_representatives(const SympSubspace& a, const SympSubspace& b) {
    if (a.p() != b.p() || a.length() != b.length()) {
        throw DimensionError("coset_representatives: subspaces live in different spaces");
    }
    if (!a.contains_subspace(b)) {
        throw ContractError("coset_representatives: B is not a subspace of A");
    }
    // Complement basis of B inside A, then one reduced representative per
    // coefficient combination. reduce() yields the lex-smallest coset member.
    std::vector<SympVector> complement;
    std::vector<SympVector> extended = b.basis();
    SympSubspace grown = b;
    for (const SympVector& row : a.basis()) {
        if (grown.contains(row)) continue;
        complement.push_back(row);
        extended.push_back(row);
        grown = SympSubspace::span(a.p(), a.length(), extended);
    }
    checked_pow(a.p(), static_cast<int>(complement.size()), kEnumerationCapacity,
                "coset enumeration");
    std::vector<SympVector> reps;
    std::vector<int> coeffs(complement.size(), 0);
    SympVector zero(a.p(), std::vector<int>(static_cast<std::size_t>(a.length()), 0));
    for (;;) {
        SympVector v = zero;
        for (std::size_t i = 0; i < complement.size(); ++i) {
            if (coeffs[i] != 0) v = v + coeffs[i] * complement[i];
        }
        reps.push_back(b.reduce(v));
        int i = static_cast<int>(complement.size()) - 1;
        while (i >= 0 && ++coeffs[static_cast<std::size_t>(i)] == a.p()) {
            coeffs[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

std::string to_string(const SympVector& u) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < u.size(); ++i) {
        if (i) os << ",";
        os << u.coords[static_cast<std::size_t>(i)];
    }
    os << ")";
    return os.str();
}

} // namespace qdistil
