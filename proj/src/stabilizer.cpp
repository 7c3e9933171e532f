#include "qdistil/stabilizer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qdistil {

Syndrome::Syndrome(int p_, std::vector<int> entries_) : p(p_), entries(std::move(entries_)) {
    if (!is_prime(p)) throw ContractError("Syndrome: modulus must be prime");
    for (int& e : entries) {
        e %= p;
        if (e < 0) e += p;
    }
}

bool Syndrome::is_zero() const {
    return std::all_of(entries.begin(), entries.end(), [](int e) { return e == 0; });
}

std::uint64_t Syndrome::rank() const {
    std::uint64_t r = 0;
    for (int e : entries) r = r * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(e);
    return r;
}

Syndrome syndrome_unrank(int p, int len, std::uint64_t rank) {
    std::vector<int> entries(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        entries[static_cast<std::size_t>(i)] = static_cast<int>(rank % static_cast<std::uint64_t>(p));
        rank /= static_cast<std::uint64_t>(p);
    }
    return Syndrome(p, std::move(entries));
}

LogicalClass::LogicalClass(int p_, int k_, std::vector<int> label_)
    : p(p_), k(k_), label(std::move(label_)) {
    if (static_cast<int>(label.size()) != 2 * k) {
        throw DimensionError("LogicalClass: label must have length 2k");
    }
    for (int& c : label) {
        c %= p;
        if (c < 0) c += p;
    }
}

bool LogicalClass::is_zero() const {
    return std::all_of(label.begin(), label.end(), [](int c) { return c == 0; });
}

std::uint64_t LogicalClass::rank() const {
    std::uint64_t r = 0;
    for (int c : label) r = r * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(c);
    return r;
}

namespace {

void validate_generators(int p, const std::vector<SympVector>& generators) {
    if (generators.empty()) throw ContractError("build_code: no generators");
    const int len = generators.front().size();
    for (const SympVector& g : generators) {
        if (g.p != p || g.size() != len) {
            throw DimensionError("build_code: generators live in different spaces");
        }
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            if (symp_product(generators[i], generators[j]) != 0) {
                throw ContractError("not a stabilizer: generators " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1) + " do not commute");
            }
        }
    }
}

// Greedy symplectic Gram-Schmidt on C^perp/C: for each pair, take the first
// coset representative independent of everything picked so far and commuting
// with it, then the first partner with nonzero pairing, normalized to
// <x,z> = 1.
std::vector<SympVector> derive_logical_basis(int p, int len, const SympSubspace& c,
                                             const SympSubspace& c_perp, int k) {
    std::vector<SympVector> pool = coset_representatives(c_perp, c);
    std::vector<SympVector> picked;
    for (int j = 0; j < k; ++j) {
        std::vector<SympVector> spanned = c.basis();
        spanned.insert(spanned.end(), picked.begin(), picked.end());
        SympSubspace seen = SympSubspace::span(p, len, spanned);
        const SympVector* x = nullptr;
        for (const SympVector& v : pool) {
            if (seen.contains(v)) continue;
            bool commutes = true;
            for (const SympVector& w : picked) {
                if (symp_product(w, v) != 0) {
                    commutes = false;
                    break;
                }
            }
            if (commutes) {
                x = &v;
                break;
            }
        }
        if (!x) throw ContractError("logical basis extraction failed");
        SympVector xv = *x;
        const SympVector* z = nullptr;
        for (const SympVector& v : pool) {
            if (symp_product(xv, v) == 0) continue;
            bool commutes = true;
            for (const SympVector& w : picked) {
                if (symp_product(w, v) != 0) {
                    commutes = false;
                    break;
                }
            }
            if (commutes) {
                z = &v;
                break;
            }
        }
        if (!z) throw ContractError("logical basis extraction failed");
        SympVector zv = mod_inverse(symp_product(xv, *z), p) * (*z);
        picked.push_back(std::move(xv));
        picked.push_back(std::move(zv));
    }
    return picked;
}

void validate_logical_basis(const StabilizerCode& code, const std::vector<SympVector>& logical) {
    if (static_cast<int>(logical.size()) != 2 * code.k()) {
        throw ContractError("logical basis must contain 2k vectors");
    }
    for (const SympVector& v : logical) {
        if (!code.dual_space().contains(v)) {
            throw ContractError("logical basis vector outside C^perp");
        }
    }
    for (int i = 0; i < code.k(); ++i) {
        for (int j = 0; j < code.k(); ++j) {
            const SympVector& xi = logical[static_cast<std::size_t>(2 * i)];
            const SympVector& zi = logical[static_cast<std::size_t>(2 * i + 1)];
            const SympVector& xj = logical[static_cast<std::size_t>(2 * j)];
            const SympVector& zj = logical[static_cast<std::size_t>(2 * j + 1)];
            if (symp_product(xi, zj) != (i == j ? 1 : 0) || symp_product(xi, xj) != 0 ||
                symp_product(zi, zj) != 0) {
                throw ContractError("logical basis is not symplectic");
            }
        }
    }
}

} // namespace

StabilizerCode StabilizerCode::build(int p, std::vector<SympVector> generators) {
    StabilizerCode code = build(p, std::move(generators), {});
    return code;
}

StabilizerCode StabilizerCode::build(int p, std::vector<SympVector> generators,
                                     std::vector<SympVector> logical_basis) {
    if (!is_prime(p)) throw ContractError("build_code: p must be prime");
    validate_generators(p, generators);
    const int len = generators.front().size();

    StabilizerCode code;
    code.p_ = p;
    code.n_ = len / 2;
    code.c_ = SympSubspace::span(p, len, generators);
    if (code.c_.dim() != static_cast<int>(generators.size())) {
        throw ContractError("build_code: generators are linearly dependent");
    }
    code.k_ = code.n_ - code.c_.dim();
    code.generators_ = std::move(generators);
    code.c_perp_ = symplectic_dual(code.c_);
    if (logical_basis.empty()) {
        code.logical_ = derive_logical_basis(p, len, code.c_, code.c_perp_, code.k_);
    } else {
        code.logical_ = std::move(logical_basis);
    }
    validate_logical_basis(code, code.logical_);
    return code;
}

std::uint64_t StabilizerCode::syndrome_count() const {
    return checked_pow(p_, n_ - k_, kEnumerationCapacity, "syndrome_count");
}

Syndrome StabilizerCode::syndrome_of(const SympVector& u) const {
    if (u.p != p_ || u.size() != 2 * n_) {
        throw DimensionError("syndrome_of: vector lives in a different space");
    }
    std::vector<int> entries;
    entries.reserve(generators_.size());
    for (const SympVector& g : generators_) entries.push_back(symp_product(g, u));
    return Syndrome(p_, std::move(entries));
}

StabilizerCode::ErrorSet StabilizerCode::error_set(const Syndrome& s) const {
    if (s.p != p_ || s.size() != n_ - k_) {
        throw DimensionError("error_set: syndrome has the wrong shape");
    }
    // Solve <g_i,u> = s_i as flip(g_i) . u = s_i, then take the canonical
    // (lex-smallest) representative of the solution coset e + C^perp.
    const int len = 2 * n_;
    const int rows = n_ - k_;
    std::vector<std::vector<int>> m(static_cast<std::size_t>(rows),
                                    std::vector<int>(static_cast<std::size_t>(len + 1), 0));
    for (int r = 0; r < rows; ++r) {
        const SympVector& g = generators_[static_cast<std::size_t>(r)];
        for (int t = 0; t < len; t += 2) {
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] =
                g.coords[static_cast<std::size_t>(t + 1)];
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(t + 1)] =
                (p_ - g.coords[static_cast<std::size_t>(t)]) % p_;
        }
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(len)] =
            s.entries[static_cast<std::size_t>(r)];
    }
    std::vector<int> pivot_col;
    int pivot_row = 0;
    for (int col = 0; col < len && pivot_row < rows; ++col) {
        int sel = pivot_row;
        while (sel < rows && m[static_cast<std::size_t>(sel)][static_cast<std::size_t>(col)] == 0)
            ++sel;
        if (sel == rows) continue;
        std::swap(m[static_cast<std::size_t>(pivot_row)], m[static_cast<std::size_t>(sel)]);
        int inv = mod_inverse(m[static_cast<std::size_t>(pivot_row)][static_cast<std::size_t>(col)], p_);
        for (int& x : m[static_cast<std::size_t>(pivot_row)]) x = x * inv % p_;
        for (int r = 0; r < rows; ++r) {
            if (r == pivot_row) continue;
            int f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j <= len; ++j) {
                int& cell = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
                cell = (cell - f * m[static_cast<std::size_t>(pivot_row)][static_cast<std::size_t>(j)] % p_ + p_) % p_;
            }
        }
        pivot_col.push_back(col);
        ++pivot_row;
    }
    std::vector<int> sol(static_cast<std::size_t>(len), 0);
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        sol[static_cast<std::size_t>(pivot_col[r])] = m[r][static_cast<std::size_t>(len)];
    }
    SympVector e0 = c_perp_.reduce(SympVector(p_, std::move(sol)));
    std::uint64_t size = checked_pow(p_, n_ + k_, kEnumerationCapacity, "error_set size");
    return ErrorSet{std::move(e0), &c_perp_, size};
}

LogicalClass StabilizerCode::logical_class_of(const SympVector& u) const {
    if (!c_perp_.contains(u)) {
        throw ContractError("detected error has no logical class: vector outside C^perp");
    }
    return raw_label(u);
}

LogicalClass StabilizerCode::raw_label(const SympVector& u) const {
    if (u.p != p_ || u.size() != 2 * n_) {
        throw DimensionError("logical label: vector lives in a different space");
    }
    // (  <u,z_j>, <u,x_j>  ) per pair: the interleaved residual error on the
    // decoded output pairs. The slot order is pinned by the dense oracle.
    std::vector<int> label;
    label.reserve(static_cast<std::size_t>(2 * k_));
    for (int j = 0; j < k_; ++j) {
        const SympVector& xj = logical_[static_cast<std::size_t>(2 * j)];
        const SympVector& zj = logical_[static_cast<std::size_t>(2 * j + 1)];
        label.push_back(symp_product(u, zj));
        label.push_back(symp_product(u, xj));
    }
    return LogicalClass(p_, k_, std::move(label));
}

DecodeRule::DecodeRule(const StabilizerCode& code, std::vector<SympVector> table)
    : table_(std::move(table)) {
    const std::uint64_t want = code.syndrome_count();
    if (table_.size() != want) {
        throw ContractError("decode rule must cover all p^(n-k) syndromes");
    }
    for (std::uint64_t r = 0; r < want; ++r) {
        if (code.syndrome_of(table_[static_cast<std::size_t>(r)]).rank() != r) {
            throw ContractError("decode rule entry does not solve its syndrome equation");
        }
    }
}

const SympVector& DecodeRule::operator()(const Syndrome& s) const {
    return table_[static_cast<std::size_t>(s.rank())];
}

bool CorrectableSet::operator()(const SympVector& u) const {
    const SympVector& e = rule(code.syndrome_of(u));
    return code.stabilizer_space().contains(u - e);
}

std::uint64_t CorrectableSet::count() const {
    const std::uint64_t total =
        checked_pow(code.p(), 2 * code.n(), kEnumerationCapacity, "correctable_set count");
    std::uint64_t c = 0;
    for (std::uint64_t r = 0; r < total; ++r) {
        if ((*this)(vector_unrank(code.p(), 2 * code.n(), r))) ++c;
    }
    return c;
}

CorrectableSet correctable_set(const StabilizerCode& code, const DecodeRule& rule) {
    return CorrectableSet{code, rule};
}

// --- parsing ----------------------------------------------------------------

namespace {

bool is_integer_token(const std::string& tok) {
    if (tok.empty()) return false;
    std::size_t i = tok[0] == '-' ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    }
    return true;
}

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> toks;
    std::istringstream is{std::string(line)};
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

// One qudit factor: sequence of letter[digits] with X adding to the a part,
// Z to the b part, Y shorthand for XZ.
std::pair<int, int> parse_factor(std::string_view tok, int p, std::string_view line) {
    int a = 0;
    int b = 0;
    std::size_t i = 0;
    while (i < tok.size()) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[i])));
        ++i;
        int expo = 1;
        std::size_t j = i;
        while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
        if (j > i) {
            expo = std::stoi(std::string(tok.substr(i, j - i)));
            i = j;
        }
        switch (c) {
        case 'I': break;
        case 'X': a += expo; break;
        case 'Z': b += expo; break;
        case 'Y': a += expo; b += expo; break;
        default:
            throw ParseError("unexpected symbol '" + std::string(1, c) + "' in generator line '" +
                             std::string(line) + "'");
        }
    }
    return {a % p, b % p};
}

} // namespace

SympVector parse_pauli_line(std::string_view line, int p) {
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) throw ParseError("empty generator line");
    bool all_ints = std::all_of(toks.begin(), toks.end(), is_integer_token);
    std::vector<int> coords;
    if (all_ints && toks.size() >= 2) {
        if (toks.size() % 2 != 0) {
            throw ParseError("coordinate row must have an even number of entries: '" +
                             std::string(line) + "'");
        }
        for (const std::string& t : toks) coords.push_back(std::stoi(t));
        return SympVector(p, std::move(coords));
    }
    if (toks.size() == 1) {
        // single token: each letter (with optional exponent digits) is one qudit
        std::string_view tok = toks[0];
        std::size_t i = 0;
        while (i < tok.size()) {
            std::size_t j = i + 1;
            while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
            auto [a, b] = parse_factor(tok.substr(i, j - i), p, line);
            coords.push_back(a);
            coords.push_back(b);
            i = j;
        }
    } else {
        // one token per qudit
        for (const std::string& t : toks) {
            auto [a, b] = parse_factor(t, p, line);
            coords.push_back(a);
            coords.push_back(b);
        }
    }
    return SympVector(p, std::move(coords));
}

ParsedCode parse_generators(std::string_view text) {
    ParsedCode out;
    std::vector<std::string> generator_lines;
    std::istringstream is{std::string(text)};
    std::string raw;
    bool p_seen = false;
    while (std::getline(is, raw)) {
        std::string line = raw.substr(0, raw.find('#'));
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.rfind("p", 0) == 0 &&
            (line.size() > 1 && (line[1] == '=' || line[1] == ' ' || line[1] == '\t'))) {
            std::string rest = line.substr(1);
            std::size_t eq = rest.find('=');
            if (eq != std::string::npos) rest = rest.substr(eq + 1);
            std::istringstream ps(rest);
            int p = 0;
            if (!(ps >> p) || !is_prime(p)) {
                throw ParseError("invalid modulus line: '" + raw + "'");
            }
            if (p_seen) throw ParseError("duplicate modulus line");
            if (!generator_lines.empty()) {
                throw ParseError("modulus line must precede the generators");
            }
            out.p = p;
            p_seen = true;
            continue;
        }
        generator_lines.push_back(line);
    }
    if (generator_lines.empty()) throw ParseError("no generators in code input");
    for (const std::string& line : generator_lines) {
        out.generators.push_back(parse_pauli_line(line, out.p));
    }
    for (const SympVector& g : out.generators) {
        if (g.size() != out.generators.front().size()) {
            throw ParseError("generators have inconsistent lengths");
        }
    }
    return out;
}

std::string pauli_string(const SympVector& u) {
    std::ostringstream os;
    for (int t = 0; t < u.pairs(); ++t) {
        if (t) os << ' ';
        int a = u.coords[static_cast<std::size_t>(2 * t)];
        int b = u.coords[static_cast<std::size_t>(2 * t + 1)];
        if (a == 0 && b == 0) {
            os << 'I';
            continue;
        }
        if (a > 0) {
            os << 'X';
            if (a > 1) os << a;
        }
        if (b > 0) {
            os << 'Z';
            if (b > 1) os << b;
        }
    }
    return os.str();
}

} // namespace qdistil
