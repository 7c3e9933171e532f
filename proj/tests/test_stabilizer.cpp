#include "doctest.h"

#include <set>

#include "qdistil/presets.hpp"
#include "qdistil/stabilizer.hpp"

using namespace qdistil;

namespace {

SympVector vec(int p, std::vector<int> c) { return SympVector(p, std::move(c)); }

StabilizerCode recurrence_code() { return preset_code("recurrence"); }
StabilizerCode four_two_code() { return preset_code("xxxx-zzzz"); }

} // namespace

TEST_CASE("building the [[2,1]] and [[4,2]] codes") {
    StabilizerCode rec = StabilizerCode::build(2, {vec(2, {0, 1, 0, 1})});
    CHECK(rec.n() == 2);
    CHECK(rec.k() == 1);
    CHECK(rec.dual_space().dim() == 3);

    StabilizerCode qpa = StabilizerCode::build(2, {vec(2, {1, 1, 1, 1})});
    CHECK(qpa.n() == 2);
    CHECK(qpa.k() == 1);

    StabilizerCode big = four_two_code();
    CHECK(big.n() == 4);
    CHECK(big.k() == 2);
    CHECK(big.dual_space().dim() == 6);
}

TEST_CASE("non-commuting or dependent generators are rejected") {
    CHECK_THROWS_WITH_AS(StabilizerCode::build(2, {vec(2, {1, 0, 0, 0}), vec(2, {0, 1, 0, 0})}),
                         doctest::Contains("not a stabilizer"), ContractError);
    CHECK_THROWS_WITH_AS(StabilizerCode::build(2, {vec(2, {0, 1, 0, 1}), vec(2, {0, 1, 0, 1})}),
                         doctest::Contains("dependent"), ContractError);
}

TEST_CASE("syndromes") {
    StabilizerCode rec = recurrence_code();
    CHECK(rec.syndrome_of(vec(2, {1, 0, 0, 0})).entries == std::vector<int>{1}); // X.I
    for (const SympVector& g : rec.stabilizer_space().elements()) {
        CHECK(rec.syndrome_of(g).is_zero());
    }
    StabilizerCode big = four_two_code();
    CHECK(big.syndrome_of(vec(2, {1, 0, 0, 0, 0, 0, 0, 0})).entries == std::vector<int>{0, 1});
}

TEST_CASE("syndrome map is linear") {
    for (const char* name : {"recurrence", "qpa"}) {
        StabilizerCode code = preset_code(name);
        for (std::uint64_t a = 0; a < 16; ++a) {
            for (std::uint64_t b = 0; b < 16; ++b) {
                SympVector u = vector_unrank(2, 4, a);
                SympVector v = vector_unrank(2, 4, b);
                Syndrome su = code.syndrome_of(u);
                Syndrome sv = code.syndrome_of(v);
                Syndrome sum = code.syndrome_of(u + v);
                for (int i = 0; i < sum.size(); ++i) {
                    CHECK(sum.entries[i] == (su.entries[i] + sv.entries[i]) % 2);
                }
            }
        }
    }
}

TEST_CASE("error sets") {
    StabilizerCode rec = recurrence_code();
    StabilizerCode::ErrorSet zero = rec.error_set(Syndrome(2, {0}));
    CHECK(zero.e0.is_zero());
    CHECK(zero.size == 8); // p^(n+k)

    StabilizerCode::ErrorSet one = rec.error_set(Syndrome(2, {1}));
    CHECK(one.e0 == vec(2, {0, 0, 1, 0})); // I.X, smallest solution

    StabilizerCode big = four_two_code();
    for (std::uint64_t s = 0; s < 4; ++s) {
        Syndrome syn = syndrome_unrank(2, 2, s);
        CHECK(big.error_set(syn).e0.p == 2);
        CHECK(big.syndrome_of(big.error_set(syn).e0) == syn);
    }
}

TEST_CASE("logical classes on the recurrence code") {
    StabilizerCode rec = recurrence_code();
    for (const SympVector& g : rec.stabilizer_space().elements()) {
        CHECK(rec.logical_class_of(g).is_zero());
    }
    LogicalClass xx = rec.logical_class_of(vec(2, {1, 0, 1, 0}));
    CHECK_FALSE(xx.is_zero());
    CHECK(xx == rec.logical_class_of(vec(2, {1, 1, 1, 1}))); // same coset mod C

    // labels are constant on cosets of C and enumerate all p^2k values
    std::set<std::uint64_t> seen;
    for (const SympVector& rep : coset_representatives(rec.dual_space(), rec.stabilizer_space())) {
        LogicalClass cls = rec.logical_class_of(rep);
        for (const SympVector& g : rec.stabilizer_space().elements()) {
            CHECK(rec.logical_class_of(rep + g) == cls);
        }
        seen.insert(cls.rank());
    }
    CHECK(seen.size() == 4);

    CHECK_THROWS_AS(rec.logical_class_of(vec(2, {1, 0, 0, 0})), ContractError);
}

TEST_CASE("derived logical basis is deterministic and symplectic") {
    StabilizerCode a = StabilizerCode::build(3, {vec(3, {0, 1, 0, 1})});
    StabilizerCode b = StabilizerCode::build(3, {vec(3, {0, 1, 0, 1})});
    CHECK(a.logical_basis() == b.logical_basis());
    CHECK(a.logical_basis()[0] == vec(3, {0, 0, 0, 1}));
    CHECK(a.logical_basis()[1] == vec(3, {2, 0, 1, 0}));
    CHECK(symp_product(a.logical_basis()[0], a.logical_basis()[1]) == 1);
}

TEST_CASE("pinned logical bases must be valid") {
    CHECK_THROWS_AS(
        StabilizerCode::build(2, {vec(2, {0, 1, 0, 1})}, {vec(2, {1, 0, 0, 0}), vec(2, {0, 1, 0, 0})}),
        ContractError); // X.I is outside C^perp
}

TEST_CASE("decode rules and the correctable set") {
    StabilizerCode rec = recurrence_code();
    DecodeRule rule(rec, {vec(2, {0, 0, 0, 0}), vec(2, {0, 0, 1, 0})});
    CorrectableSet cs = correctable_set(rec, rule);
    CHECK(cs.count() == 4); // p^(2n-2k)
    CHECK(cs(vec(2, {0, 0, 1, 0})));
    CHECK(cs(vec(2, {0, 1, 1, 1})));
    CHECK_FALSE(cs(vec(2, {0, 1, 0, 0}))); // Z.I: syndrome 0 but outside C

    CHECK_THROWS_AS(DecodeRule(rec, {vec(2, {0, 0, 1, 0}), vec(2, {0, 0, 0, 0})}), ContractError);
    CHECK_THROWS_AS(DecodeRule(rec, {vec(2, {0, 0, 0, 0})}), ContractError);
}

TEST_CASE("correctable count is rule-independent") {
    StabilizerCode big = four_two_code();
    std::vector<SympVector> table;
    for (std::uint64_t s = 0; s < 4; ++s) {
        table.push_back(big.error_set(syndrome_unrank(2, 2, s)).e0);
    }
    DecodeRule rule(big, std::move(table));
    CHECK(correctable_set(big, rule).count() == 16); // p^(2n-2k)
}

TEST_CASE("generator text parsing") {
    ParsedCode zz = parse_generators("ZZ\n");
    CHECK(zz.p == 2);
    REQUIRE(zz.generators.size() == 1);
    CHECK(zz.generators[0] == vec(2, {0, 1, 0, 1}));

    ParsedCode qpa = parse_generators("XZ XZ\n");
    CHECK(qpa.generators[0] == vec(2, {1, 1, 1, 1}));

    ParsedCode coords = parse_generators("0 1 0 1\n");
    CHECK(coords.generators[0] == vec(2, {0, 1, 0, 1}));

    ParsedCode big = parse_generators("# the [[4,2]] pair\nXXXX\nZZZZ\n");
    CHECK(big.generators[0] == vec(2, {1, 0, 1, 0, 1, 0, 1, 0}));
    CHECK(big.generators[1] == vec(2, {0, 1, 0, 1, 0, 1, 0, 1}));

    ParsedCode ternary = parse_generators("p = 3\nX2Z X\n");
    CHECK(ternary.p == 3);
    CHECK(ternary.generators[0] == vec(3, {2, 1, 1, 0}));

    ParsedCode ys = parse_generators("Y Y\n");
    CHECK(ys.generators[0] == vec(2, {1, 1, 1, 1}));

    CHECK_THROWS_AS(parse_generators("XQ\n"), ParseError);
    CHECK_THROWS_AS(parse_generators(""), ParseError);
    CHECK_THROWS_AS(parse_generators("p = 4\nZZ\n"), ParseError);
    CHECK_THROWS_AS(parse_generators("ZZ\nZZZ\n"), ParseError);
    CHECK_THROWS_AS(parse_generators("0 1 0\n"), ParseError);
}

TEST_CASE("pauli_string inverts the one-token-per-qudit form") {
    CHECK(pauli_string(vec(2, {0, 1, 0, 1})) == "Z Z");
    CHECK(pauli_string(vec(3, {2, 1, 0, 0})) == "X2Z I");

    std::uint64_t seed = 0xc0ffee;
    for (int p : {2, 3, 5}) {
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<int> coords(8);
            for (int& c : coords) {
                seed = seed * 6364136223846793005ull + 1442695040888963407ull;
                c = static_cast<int>((seed >> 33) % static_cast<std::uint64_t>(p));
            }
            SympVector u(p, coords);
            CHECK(parse_pauli_line(pauli_string(u), p) == u);
        }
    }
}
