#include "doctest.h"

#include <cmath>
#include <complex>

#include "qdistil/densesim.hpp"
#include "qdistil/presets.hpp"

using namespace qdistil;

namespace {

using Cplx = std::complex<double>;

SympVector vec(int p, std::vector<int> c) { return SympVector(p, std::move(c)); }

struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double next_unit() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
};

BellDiagState random_state(int p, int pairs, Lcg& rng) {
    std::uint64_t size = checked_pow(p, 2 * pairs, kEnumerationCapacity, "test");
    std::vector<double> w(static_cast<std::size_t>(size));
    double total = 0.0;
    for (double& x : w) total += (x = rng.next_unit());
    for (double& x : w) x /= total;
    return BellDiagState::dense(p, pairs, std::move(w));
}

Eigen::MatrixXcd random_density(int dim, Lcg& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
        }
    }
    Eigen::MatrixXcd rho = g * g.adjoint();
    return rho / rho.trace().real();
}

void check_equivalence(const ConvertedProtocol& proto, const BellDiagState& alpha, double tol) {
    ProtocolReport rep = analyze(proto, alpha);
    DenseRunResult dense = run_protocol_dense(proto, bell_diag_density(alpha));
    REQUIRE(dense.records.size() == rep.records.size());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        CHECK(dense.records[i].prob == doctest::Approx(rep.records[i].prob).epsilon(tol));
        CHECK(dense.records[i].fidelity == doctest::Approx(rep.records[i].fidelity).epsilon(tol));
        for (std::size_t w = 0; w < rep.records[i].output_weights.size(); ++w) {
            CHECK(std::abs(dense.records[i].bell_weights[w] - rep.records[i].output_weights[w]) < tol);
        }
    }
}

} // namespace

TEST_CASE("bell vectors") {
    DenseState b00 = bell_vector(vec(2, {0, 0}));
    CHECK(b00.amps(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b00.amps(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(b00.amps(1)) == doctest::Approx(0.0));

    // Z|1> = omega|1> enters through the phase of beta(0,1) at p = 3
    DenseOperator z3 = xz_operator(vec(3, {0, 1}));
    Cplx omega = std::exp(Cplx(0, 2 * std::numbers::pi / 3));
    CHECK(std::abs(z3.mat(1, 1) - omega) < 1e-12);
    DenseState b01 = bell_vector(vec(3, {0, 1}));
    CHECK(std::abs(b01.amps(4) - omega / std::sqrt(3.0)) < 1e-12);

    // the sixteen two-pair Bell vectors are orthonormal
    for (std::uint64_t a = 0; a < 16; ++a) {
        DenseState va = bell_vector(vector_unrank(2, 4, a));
        for (std::uint64_t b = 0; b < 16; ++b) {
            DenseState vb = bell_vector(vector_unrank(2, 4, b));
            Cplx ip = (va.amps.adjoint() * vb.amps)(0);
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("xz operators") {
    CHECK(xz_operator(vec(2, {0, 0})).mat.isIdentity(1e-15));

    // X then Z as written: XZ = [[0,-1],[1,0]]
    Eigen::MatrixXcd expect(2, 2);
    expect << 0, -1, 1, 0;
    CHECK((xz_operator(vec(2, {1, 1})).mat - expect).cwiseAbs().maxCoeff() < 1e-15);

    Lcg rng(17);
    for (int p : {2, 3}) {
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<int> c(4);
            for (int& x : c) x = static_cast<int>(rng.next_unit() * p);
            SympVector u(p, c);
            Eigen::MatrixXcd m = xz_operator(u).mat;
            CHECK((m * m.adjoint()).isIdentity(1e-12));
            // star operators are the entrywise conjugates
            CHECK((xz_operator(star(u)).mat - m.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
            // monomial action agrees with the matrix
            Eigen::VectorXcd probe = Eigen::VectorXcd::Random(m.rows());
            CHECK((xz_apply(u, probe) - m * probe).norm() < 1e-12);
        }
    }
}

TEST_CASE("composition picks up the symplectic commutation phase") {
    Lcg rng(23);
    for (int p : {2, 3}) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<int> cu(4), cv(4);
            for (int& x : cu) x = static_cast<int>(rng.next_unit() * p);
            for (int& x : cv) x = static_cast<int>(rng.next_unit() * p);
            SympVector u(p, cu), v(p, cv);
            Eigen::MatrixXcd lhs = xz_operator(u).mat * xz_operator(v).mat;
            Cplx phase = std::exp(Cplx(0, 2 * std::numbers::pi * symp_product(u, v) / p));
            Eigen::MatrixXcd rhs = phase * xz_operator(v).mat * xz_operator(u).mat;
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("stabilizer projectors") {
    StabilizerCode rec = preset_code("recurrence");
    std::vector<DenseOperator> projs = stabilizer_projectors(rec, false);
    REQUIRE(projs.size() == 2);

    // P(0) of the Z.Z code projects onto span{|00>, |11>}
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
    expect(0, 0) = 1;
    expect(3, 3) = 1;
    CHECK((projs[0].mat - expect).cwiseAbs().maxCoeff() < 1e-12);

    for (const char* name : {"recurrence", "qpa", "xxxx-zzzz"}) {
        StabilizerCode code = preset_code(name);
        std::vector<DenseOperator> ps = stabilizer_projectors(code, false);
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(ps[0].mat.rows(), ps[0].mat.cols());
        for (std::size_t x = 0; x < ps.size(); ++x) {
            sum += ps[x].mat;
            CHECK((ps[x].mat * ps[x].mat - ps[x].mat).cwiseAbs().maxCoeff() < 1e-12);
            for (std::size_t y = x + 1; y < ps.size(); ++y) {
                CHECK((ps[x].mat * ps[y].mat).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
        CHECK(sum.isIdentity(1e-12));
        // star projectors are entrywise conjugates
        std::vector<DenseOperator> starred = stabilizer_projectors(code, true);
        for (std::size_t x = 0; x < ps.size(); ++x) {
            CHECK((starred[x].mat - ps[x].mat.conjugate()).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
}

TEST_CASE("commuting projections fix the maximally entangled state") {
    for (const char* name : {"recurrence", "qpa", "xxxx-zzzz"}) {
        StabilizerCode code = preset_code(name);
        std::vector<DenseOperator> plain = stabilizer_projectors(code, false);
        std::vector<DenseOperator> starred = stabilizer_projectors(code, true);
        DenseState beta0 = bell_vector(vec(2, std::vector<int>(static_cast<std::size_t>(2 * code.n()), 0)));
        Eigen::Index dn = plain[0].mat.rows();
        for (std::size_t x = 0; x < plain.size(); ++x) {
            Eigen::VectorXcd lhs = Eigen::VectorXcd::Zero(beta0.amps.size());
            Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(beta0.amps.size());
            for (Eigen::Index ia = 0; ia < dn; ++ia) {
                for (Eigen::Index ja = 0; ja < dn; ++ja) {
                    Cplx c = starred[x].mat(ia, ja);
                    if (c == Cplx(0, 0)) continue;
                    lhs.segment(ia * dn, dn) += c * beta0.amps.segment(ja * dn, dn);
                    rhs.segment(ia * dn, dn) += c * (plain[x].mat * beta0.amps.segment(ja * dn, dn));
                }
            }
            CHECK((lhs - rhs).norm() < 1e-12);
        }
    }
}

TEST_CASE("encoders reproduce the [[2,1]] historical maps exactly") {
    StabilizerCode rec = preset_code("recurrence");
    Eigen::MatrixXcd u0 = encoder(rec, Syndrome(2, {0})).mat;
    CHECK(std::abs(u0(0, 0) - 1.0) < 1e-12); // |0>|0> -> |00>
    CHECK(std::abs(u0(3, 2) - 1.0) < 1e-12); // |1>|0> -> |11>
    Eigen::MatrixXcd u1 = encoder(rec, Syndrome(2, {1})).mat;
    CHECK(std::abs(u1(1, 0) - 1.0) < 1e-12); // |0>|0> -> |01>
    CHECK(std::abs(u1(2, 2) - 1.0) < 1e-12); // |1>|0> -> |10>

    StabilizerCode qpa = preset_code("qpa");
    Eigen::MatrixXcd q0 = encoder(qpa, Syndrome(2, {0})).mat;
    Eigen::VectorXcd want0(4), want1(4);
    want0 << 0.5, Cplx(0, 0.5), Cplx(0, -0.5), 0.5;   // (|0>-i|1>)(|0>+i|1>)/2
    want1 << 0.5, Cplx(0, -0.5), Cplx(0, 0.5), 0.5;
    CHECK((q0.col(0) - want0).norm() < 1e-12);
    CHECK((q0.col(2) - want1).norm() < 1e-12);
}

TEST_CASE("encoders are unitary") {
    for (const char* name : {"recurrence", "qpa", "xxxx-zzzz"}) {
        StabilizerCode code = preset_code(name);
        for (std::uint64_t s = 0; s < code.syndrome_count(); ++s) {
            Eigen::MatrixXcd u = encoder(code, syndrome_unrank(2, code.n() - code.k(), s)).mat;
            CHECK((u.adjoint() * u).isIdentity(1e-12));
        }
    }
}

TEST_CASE("protocol channel on a perfect input") {
    ConvertedProtocol proto = preset_protocol("recurrence");
    BellDiagState perfect =
        tensor(BellDiagState::point_mass(vec(2, {0, 0})), BellDiagState::point_mass(vec(2, {0, 0})));
    DenseRunResult res = run_protocol_dense(proto, bell_diag_density(perfect));
    CHECK(res.records[0].prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.records[0].fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.records[1].prob == doctest::Approx(0.0));
    CHECK(res.avg_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense channel reproduces the frozen recurrence numbers") {
    ConvertedProtocol proto = preset_protocol("recurrence");
    BellDiagState input = tensor(werner_converted(0.75), werner_converted(0.75));
    DenseRunResult res = run_protocol_dense(proto, bell_diag_density(input));
    CHECK(res.records[0].prob == doctest::Approx(26.0 / 36.0).epsilon(1e-9));
    CHECK(res.records[0].fidelity == doctest::Approx(41.0 / 52.0).epsilon(1e-9));
}

TEST_CASE("dense channel equals the table analysis on random Bell-diagonal inputs") {
    Lcg rng(0xbeef);
    for (const char* name : {"recurrence", "qpa"}) {
        ConvertedProtocol proto = preset_protocol(name, AcceptPolicy::one_way());
        for (int trial = 0; trial < 5; ++trial) {
            check_equivalence(proto, random_state(2, 2, rng), 1e-9);
        }
    }
}

TEST_CASE("dense channel equals the table analysis for a ternary code") {
    StabilizerCode code = StabilizerCode::build(3, {vec(3, {0, 1, 0, 1})});
    ConvertedProtocol proto = make_protocol(code, AcceptPolicy::one_way());
    Lcg rng(0xfeed);
    check_equivalence(proto, random_state(3, 2, rng), 1e-9);
}

TEST_CASE("density operator validation") {
    ConvertedProtocol proto = preset_protocol("recurrence");
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(16, 16);
    bad(0, 1) = 1.0; // not hermitian
    CHECK_THROWS_AS(run_protocol_dense(proto, bad), ContractError);
    CHECK_THROWS_AS(run_protocol_dense(proto, Eigen::MatrixXcd::Identity(8, 8)), DimensionError);
}

TEST_CASE("bad-codeword construction for the Z.Z code") {
    StabilizerCode rec = preset_code("recurrence");
    BadCodewordWitness obj = bad_codeword_witness(rec);

    SympSubspace expect_cmax =
        row_reduce(2, 4, std::vector<SympVector>{vec(2, {0, 1, 0, 0}), vec(2, {0, 0, 0, 1})});
    CHECK(obj.c_max == expect_cmax);
    REQUIRE(obj.reps.size() == 2);
    CHECK(obj.reps[0].is_zero());
    CHECK(obj.reps[1] == vec(2, {1, 0, 1, 0}));

    CHECK(std::abs(obj.stabilizer_state.amps(0) - 1.0) < 1e-12); // |00>
    CHECK(std::abs(obj.superposed_codeword.amps(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(obj.superposed_codeword.amps(3) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(obj.stabilizer_state.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(obj.superposed_codeword.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(obj.witness.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));

    Cplx ip = (obj.stabilizer_state.amps.adjoint() * obj.superposed_codeword.amps)(0);
    CHECK(std::abs(ip - 1.0 / std::sqrt(2.0)) < 1e-12);

    // representatives of distinct cosets act orthogonally on the pinned state
    for (const SympVector& x : obj.reps) {
        for (const SympVector& y : obj.reps) {
            if (x == y) continue;
            Cplx ov = (xz_apply(x, obj.stabilizer_state.amps).adjoint() * xz_apply(y, obj.stabilizer_state.amps))(0);
            CHECK(std::abs(ov) < 1e-12);
        }
    }
}

TEST_CASE("bad-codeword overlap bound for all presets") {
    const double limit = 0.75 + 1e-12;
    for (const char* name : {"recurrence", "qpa", "xxxx-zzzz"}) {
        StabilizerCode code = preset_code(name);
        std::vector<SympVector> table;
        for (std::uint64_t s = 0; s < code.syndrome_count(); ++s) {
            table.push_back(code.error_set(syndrome_unrank(2, code.n() - code.k(), s)).e0);
        }
        DecodeRule rule(code, std::move(table));
        UncorrectableOverlap res = max_uncorrectable_overlap(code, rule);
        CHECK(res.max_overlap <= limit);
        CHECK(res.uncorrectable_count ==
              checked_pow(2, 2 * code.n(), kEnumerationCapacity, "test") -
                  checked_pow(2, 2 * (code.n() - code.k()), kEnumerationCapacity, "test"));
        CHECK(code.dual_space().contains(res.witness_residual));
        CHECK_FALSE(code.stabilizer_space().contains(res.witness_residual));
    }

    StabilizerCode rec = preset_code("recurrence");
    DecodeRule rule(rec, {vec(2, {0, 0, 0, 0}), vec(2, {0, 0, 1, 0})});
    UncorrectableOverlap res = max_uncorrectable_overlap(rec, rule);
    double witness = (std::sqrt(2.0) + 1.0) / (2.0 + std::sqrt(2.0));
    CHECK(res.max_overlap == doctest::Approx(witness).epsilon(1e-9));
}

TEST_CASE("the general fidelity bound never exceeds the exact channel fidelity") {
    Lcg rng(0x5eed);
    ConvertedProtocol proto = preset_protocol("recurrence", AcceptPolicy::one_way());
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd rho = random_density(16, rng);
        double bound = general_fidelity_bound(proto, bell_coefficients(rho, 2, 2));
        DenseRunResult exact = run_protocol_dense(proto, rho);
        CHECK(bound <= exact.avg_fidelity + 1e-9);
    }
}

TEST_CASE("state vector capacity guard") {
    std::vector<int> big(2 * 19, 0); // p^(2n) = 2^38 amplitudes
    CHECK_THROWS_AS(bell_vector(vec(2, std::move(big))), CapacityError);
}
