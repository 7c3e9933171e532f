#include "qdistil/densesim.hpp"

#include <cmath>
#include <numbers>

namespace qdistil {

namespace {

using Cplx = std::complex<double>;

Cplx root_of_unity(int p, long long power) {
    long long r = power % p;
    if (r < 0) r += p;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p);
    return {std::cos(angle), std::sin(angle)};
}

std::vector<int> index_digits(std::uint64_t idx, int p, int count) {
    std::vector<int> d(static_cast<std::size_t>(count));
    for (int t = count - 1; t >= 0; --t) {
        d[static_cast<std::size_t>(t)] = static_cast<int>(idx % static_cast<std::uint64_t>(p));
        idx /= static_cast<std::uint64_t>(p);
    }
    return d;
}

std::uint64_t digits_index(const std::vector<int>& d, int p) {
    std::uint64_t idx = 0;
    for (int x : d) idx = idx * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(x);
    return idx;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Projector onto the eigenvalue omega^x eigenspace of W, assuming W^p = I.
Eigen::MatrixXcd eigenvalue_projector(const Eigen::MatrixXcd& w, int x, int p) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(w.rows(), w.cols());
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(w.rows(), w.cols());
    for (int t = 0; t < p; ++t) {
        proj += root_of_unity(p, static_cast<long long>(-t) * x) * power;
        power = power * w;
    }
    return proj / static_cast<double>(p);
}

Eigen::MatrixXcd corrected_xz(const SympVector& u) {
    return xz_phase_correction(u) * xz_operator(u).mat;
}

// Rank-one projector onto the joint eigenvalue-one state of the sector
// (generators at the given syndrome, phase-corrected logical Zs at zero),
// returned as the canonical unit vector.
Eigen::VectorXcd sector_base_state(const StabilizerCode& code, const std::vector<int>& sector) {
    const int p = code.p();
    const std::uint64_t dim = checked_pow(p, code.n(), kDensityDimensionCapacity, "encoder");
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                                       static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < code.generators().size(); ++i) {
        proj = proj * eigenvalue_projector(corrected_xz(code.generators()[i]), sector[i], p);
    }
    for (int j = 0; j < code.k(); ++j) {
        const SympVector& zbar = code.logical_basis()[static_cast<std::size_t>(2 * j + 1)];
        proj = proj * eigenvalue_projector(corrected_xz(zbar), 0, p);
    }
    for (Eigen::Index c = 0; c < proj.cols(); ++c) {
        double nrm = proj.col(c).norm();
        if (nrm > 1e-8) {
            Eigen::VectorXcd v = proj.col(c) / nrm;
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                if (std::abs(v(i)) > 1e-9) {
                    v *= std::abs(v(i)) / v(i);
                    break;
                }
            }
            return v;
        }
    }
    throw ContractError("encoder: sector projector has empty range");
}

void require_state_shape(const Eigen::MatrixXcd& rho, std::uint64_t dim) {
    if (rho.rows() != static_cast<Eigen::Index>(dim) || rho.cols() != static_cast<Eigen::Index>(dim)) {
        throw DimensionError("density operator has the wrong dimension");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw ContractError("density operator is not hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9) {
        throw ContractError("density operator trace is not 1");
    }
}

// Trace out the last n-k qudits on both sides of a joint (A,B) operator.
Eigen::MatrixXcd trace_out_ancillas(const Eigen::MatrixXcd& sigma, int p, int n, int k) {
    const std::uint64_t dn = checked_pow(p, n, kDensityDimensionCapacity, "partial trace");
    const std::uint64_t dk = checked_pow(p, k, kDensityDimensionCapacity, "partial trace");
    const std::uint64_t da = dn / dk;
    Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk * dk),
                                                  static_cast<Eigen::Index>(dk * dk));
    for (std::uint64_t iak = 0; iak < dk; ++iak)
        for (std::uint64_t ibk = 0; ibk < dk; ++ibk)
            for (std::uint64_t jak = 0; jak < dk; ++jak)
                for (std::uint64_t jbk = 0; jbk < dk; ++jbk) {
                    Cplx sum = 0.0;
                    for (std::uint64_t aa = 0; aa < da; ++aa)
                        for (std::uint64_t ab = 0; ab < da; ++ab) {
                            std::uint64_t row = (iak * da + aa) * dn + (ibk * da + ab);
                            std::uint64_t col = (jak * da + aa) * dn + (jbk * da + ab);
                            sum += sigma(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
                        }
                    tau(static_cast<Eigen::Index>(iak * dk + ibk),
                        static_cast<Eigen::Index>(jak * dk + jbk)) = sum;
                }
    return tau;
}

} // namespace

DenseState bell_vector(const SympVector& u) {
    const int p = u.p;
    const int n = u.pairs();
    const std::uint64_t joint = checked_pow(p, 2 * n, kAmplitudeCapacity, "bell_vector");
    const std::uint64_t dn = checked_pow(p, n, kAmplitudeCapacity, "bell_vector");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(joint));
    const double scale = 1.0 / std::sqrt(static_cast<double>(dn));
    for (std::uint64_t i = 0; i < dn; ++i) {
        std::vector<int> digits = index_digits(i, p, n);
        std::vector<int> shifted(static_cast<std::size_t>(n));
        long long phase_exp = 0;
        for (int t = 0; t < n; ++t) {
            shifted[static_cast<std::size_t>(t)] =
                (digits[static_cast<std::size_t>(t)] + u.coords[static_cast<std::size_t>(2 * t)]) % p;
            phase_exp += static_cast<long long>(u.coords[static_cast<std::size_t>(2 * t + 1)]) *
                         digits[static_cast<std::size_t>(t)];
        }
        amps(static_cast<Eigen::Index>(i * dn + digits_index(shifted, p))) =
            root_of_unity(p, phase_exp) * scale;
    }
    return DenseState{p, 2 * n, std::move(amps)};
}

DenseOperator xz_operator(const SympVector& u) {
    const int p = u.p;
    const int n = u.pairs();
    const std::uint64_t dim = checked_pow(p, n, kDensityDimensionCapacity, "xz_operator");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::vector<int> digits = index_digits(i, p, n);
        std::vector<int> shifted(static_cast<std::size_t>(n));
        long long phase_exp = 0;
        for (int t = 0; t < n; ++t) {
            shifted[static_cast<std::size_t>(t)] =
                (digits[static_cast<std::size_t>(t)] + u.coords[static_cast<std::size_t>(2 * t)]) % p;
            phase_exp += static_cast<long long>(u.coords[static_cast<std::size_t>(2 * t + 1)]) *
                         digits[static_cast<std::size_t>(t)];
        }
        m(static_cast<Eigen::Index>(digits_index(shifted, p)), static_cast<Eigen::Index>(i)) =
            root_of_unity(p, phase_exp);
    }
    return DenseOperator{p, n, std::move(m)};
}

Eigen::VectorXcd xz_apply(const SympVector& u, const Eigen::VectorXcd& v) {
    const int p = u.p;
    const int n = u.pairs();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(v.size()); ++i) {
        std::vector<int> digits = index_digits(i, p, n);
        std::vector<int> shifted(static_cast<std::size_t>(n));
        long long phase_exp = 0;
        for (int t = 0; t < n; ++t) {
            shifted[static_cast<std::size_t>(t)] =
                (digits[static_cast<std::size_t>(t)] + u.coords[static_cast<std::size_t>(2 * t)]) % p;
            phase_exp += static_cast<long long>(u.coords[static_cast<std::size_t>(2 * t + 1)]) *
                         digits[static_cast<std::size_t>(t)];
        }
        out(static_cast<Eigen::Index>(digits_index(shifted, p))) =
            root_of_unity(p, phase_exp) * v(static_cast<Eigen::Index>(i));
    }
    return out;
}

std::complex<double> xz_phase_correction(const SympVector& u) {
    if (u.p != 2) return 1.0;
    int overlap = 0;
    for (int t = 0; t < u.pairs(); ++t) {
        overlap += u.coords[static_cast<std::size_t>(2 * t)] * u.coords[static_cast<std::size_t>(2 * t + 1)];
    }
    return overlap % 2 ? Cplx(0.0, 1.0) : Cplx(1.0, 0.0);
}

std::vector<DenseOperator> stabilizer_projectors(const StabilizerCode& code, bool star) {
    const int p = code.p();
    const std::uint64_t dim = checked_pow(p, code.n(), kDensityDimensionCapacity, "projectors");
    const std::uint64_t sectors = code.syndrome_count();
    std::vector<Eigen::MatrixXcd> gen_projs; // [generator][eigenvalue]
    for (const SympVector& g : code.generators()) {
        Eigen::MatrixXcd w = corrected_xz(g);
        for (int x = 0; x < p; ++x) gen_projs.push_back(eigenvalue_projector(w, x, p));
    }
    std::vector<DenseOperator> out;
    out.reserve(sectors);
    for (std::uint64_t s = 0; s < sectors; ++s) {
        std::vector<int> digits = index_digits(s, p, code.n() - code.k());
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                                           static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < code.generators().size(); ++i) {
            proj = proj * gen_projs[i * static_cast<std::size_t>(p) +
                                    static_cast<std::size_t>(digits[i])];
        }
        if (star) proj = proj.conjugate();
        out.push_back(DenseOperator{p, code.n(), std::move(proj)});
    }
    return out;
}

DenseOperator encoder(const StabilizerCode& code, const Syndrome& sector) {
    const int p = code.p();
    const int n = code.n();
    const int k = code.k();
    if (sector.p != p || sector.size() != n - k) {
        throw DimensionError("encoder: sector has the wrong shape");
    }
    const std::uint64_t dim = checked_pow(p, n, kDensityDimensionCapacity, "encoder");
    const std::uint64_t dk = checked_pow(p, k, kDensityDimensionCapacity, "encoder");
    const std::uint64_t da = dim / dk;

    std::vector<Eigen::VectorXcd> base(static_cast<std::size_t>(da));
    for (std::uint64_t a = 0; a < da; ++a) {
        std::vector<int> digits = index_digits(a, p, n - k);
        for (int i = 0; i < n - k; ++i) {
            digits[static_cast<std::size_t>(i)] =
                (digits[static_cast<std::size_t>(i)] + sector.entries[static_cast<std::size_t>(i)]) % p;
        }
        base[static_cast<std::size_t>(a)] = sector_base_state(code, digits);
    }

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dk; ++i) {
        std::vector<int> idig = index_digits(i, p, k);
        SympVector logical_x(p, std::vector<int>(static_cast<std::size_t>(2 * n), 0));
        for (int j = 0; j < k; ++j) {
            if (idig[static_cast<std::size_t>(j)] != 0) {
                logical_x = logical_x + idig[static_cast<std::size_t>(j)] *
                                            code.logical_basis()[static_cast<std::size_t>(2 * j)];
            }
        }
        for (std::uint64_t a = 0; a < da; ++a) {
            u.col(static_cast<Eigen::Index>(i * da + a)) =
                xz_apply(logical_x, base[static_cast<std::size_t>(a)]);
        }
    }
    return DenseOperator{p, n, std::move(u)};
}

DenseRunResult run_protocol_dense(const ConvertedProtocol& proto, const Eigen::MatrixXcd& rho) {
    const StabilizerCode& code = proto.code;
    const int p = code.p();
    const int n = code.n();
    const int k = code.k();
    const std::uint64_t dn = checked_pow(p, n, kDensityDimensionCapacity, "run_protocol_dense");
    const std::uint64_t joint = checked_pow(p, 2 * n, kDensityDimensionCapacity, "run_protocol_dense");
    require_state_shape(rho, joint);

    DecodeRule rule = [&] {
        if (proto.mode == DecodeMode::Fixed) return *proto.fixed_rule;
        std::vector<double> coeffs = bell_coefficients(rho, p, n);
        for (double& c : coeffs) {
            if (c < 0.0 && c > -1e-9) c = 0.0; // fp noise on the diagonal
        }
        return make_most_likely_rule(code, coeffs);
    }();

    std::vector<DenseOperator> projs = stabilizer_projectors(code, false);
    const std::uint64_t sectors = projs.size();
    const std::uint64_t dk = checked_pow(p, k, kDensityDimensionCapacity, "run_protocol_dense");

    std::vector<Eigen::MatrixXcd> per_s(static_cast<std::size_t>(sectors));
    for (auto& m : per_s) {
        m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk * dk),
                                   static_cast<Eigen::Index>(dk * dk));
    }

    for (std::uint64_t a = 0; a < sectors; ++a) {
        Syndrome sa = syndrome_unrank(p, n - k, a);
        Eigen::MatrixXcd ue = encoder(code, sa).mat;
        // Alice undoes the conjugated encoder, Bob the plain one
        Eigen::MatrixXcd decode = kron(ue.transpose(), ue.adjoint());
        Eigen::MatrixXcd pa_star = projs[static_cast<std::size_t>(a)].mat.conjugate();
        for (std::uint64_t b = 0; b < sectors; ++b) {
            std::vector<int> sdiff(static_cast<std::size_t>(n - k));
            Syndrome sb = syndrome_unrank(p, n - k, b);
            for (int i = 0; i < n - k; ++i) {
                sdiff[static_cast<std::size_t>(i)] =
                    (sb.entries[static_cast<std::size_t>(i)] - sa.entries[static_cast<std::size_t>(i)] + p) % p;
            }
            Syndrome s(p, sdiff);
            Eigen::MatrixXcd meas = kron(pa_star, projs[static_cast<std::size_t>(b)].mat);
            Eigen::MatrixXcd sigma = meas * rho * meas;
            if (sigma.cwiseAbs().maxCoeff() < 1e-18) continue;
            Eigen::MatrixXcd correct =
                kron(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dn),
                                                static_cast<Eigen::Index>(dn)),
                     xz_operator(rule(s)).mat.adjoint());
            sigma = correct * sigma * correct.adjoint();
            sigma = decode * sigma * decode.adjoint();
            per_s[static_cast<std::size_t>(s.rank())] += trace_out_ancillas(sigma, p, n, k);
        }
    }

    DenseRunResult result;
    DenseState beta0 =
        bell_vector(SympVector(p, std::vector<int>(static_cast<std::size_t>(2 * k), 0)));
    for (std::uint64_t s = 0; s < sectors; ++s) {
        DenseSyndromeRecord rec;
        rec.s = syndrome_unrank(p, n - k, s);
        Eigen::MatrixXcd& tau = per_s[static_cast<std::size_t>(s)];
        double prob = tau.trace().real();
        if (prob < 1e-15) {
            rec.prob = 0.0;
            rec.state = Eigen::MatrixXcd::Zero(tau.rows(), tau.cols());
            rec.bell_weights.assign(static_cast<std::size_t>(dk * dk), 0.0);
        } else {
            rec.prob = prob;
            rec.state = tau / prob;
            rec.fidelity = (beta0.amps.adjoint() * rec.state * beta0.amps)(0).real();
            rec.bell_weights = bell_coefficients(rec.state, p, k);
        }
        result.avg_fidelity += rec.prob * rec.fidelity;
        result.records.push_back(std::move(rec));
    }
    return result;
}

Eigen::MatrixXcd bell_diag_density(const BellDiagState& state) {
    const std::uint64_t joint =
        checked_pow(state.p(), 2 * state.pairs(), kDensityDimensionCapacity, "bell_diag_density");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(joint),
                                                  static_cast<Eigen::Index>(joint));
    for (std::uint64_t r = 0; r < joint; ++r) {
        SympVector u = vector_unrank(state.p(), 2 * state.pairs(), r);
        double w = state.weight(u);
        if (w == 0.0) continue;
        DenseState b = bell_vector(u);
        rho += w * (b.amps * b.amps.adjoint());
    }
    return rho;
}

std::vector<double> bell_coefficients(const Eigen::MatrixXcd& rho, int p, int pairs) {
    const std::uint64_t joint = checked_pow(p, 2 * pairs, kDensityDimensionCapacity, "bell_coefficients");
    if (rho.rows() != static_cast<Eigen::Index>(joint)) {
        throw DimensionError("bell_coefficients: dimension mismatch");
    }
    std::vector<double> out(static_cast<std::size_t>(joint));
    for (std::uint64_t r = 0; r < joint; ++r) {
        DenseState b = bell_vector(vector_unrank(p, 2 * pairs, r));
        out[static_cast<std::size_t>(r)] = (b.amps.adjoint() * rho * b.amps)(0).real();
    }
    return out;
}

BadCodewordWitness bad_codeword_witness(const StabilizerCode& code) {
    const int p = code.p();
    const int k = code.k();
    const std::uint64_t dim = checked_pow(p, code.n(), kDensityDimensionCapacity, "bad codeword");
    BadCodewordWitness obj{witt_extend(code.stabilizer_space()),
                      {},
                      DenseState{p, code.n(), {}},
                      DenseState{p, code.n(), {}},
                      DenseState{p, code.n(), {}}};
    obj.reps = coset_representatives(code.dual_space(), obj.c_max);

    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                                       static_cast<Eigen::Index>(dim));
    for (const SympVector& h : obj.c_max.basis()) {
        proj = proj * eigenvalue_projector(corrected_xz(h), 0, p);
    }
    Eigen::VectorXcd base;
    bool found = false;
    for (Eigen::Index c = 0; c < proj.cols() && !found; ++c) {
        double nrm = proj.col(c).norm();
        if (nrm > 1e-8) {
            base = proj.col(c) / nrm;
            found = true;
        }
    }
    if (!found) throw ContractError("bad codeword witness: maximal stabilizer state not found");
    for (Eigen::Index i = 0; i < base.size(); ++i) {
        if (std::abs(base(i)) > 1e-9) {
            base *= std::abs(base(i)) / base(i);
            break;
        }
    }

    Eigen::VectorXcd spread = Eigen::VectorXcd::Zero(base.size());
    for (const SympVector& x : obj.reps) spread += xz_apply(x, base);
    spread /= std::sqrt(std::pow(static_cast<double>(p), k));

    const double ip_expect = std::pow(static_cast<double>(p), -0.5 * k);
    Cplx ip = (base.adjoint() * spread)(0);
    if (std::abs(ip - Cplx(ip_expect, 0.0)) > 1e-9) {
        throw ContractError("bad codeword witness: translate overlap deviates from p^{-k/2}");
    }
    Eigen::VectorXcd mixed = (base + spread) / std::sqrt(2.0 + 2.0 * ip_expect);

    obj.stabilizer_state.amps = std::move(base);
    obj.superposed_codeword.amps = std::move(spread);
    obj.witness.amps = std::move(mixed);
    return obj;
}

UncorrectableOverlap max_uncorrectable_overlap(const StabilizerCode& code, const DecodeRule& rule) {
    const int p = code.p();
    BadCodewordWitness obj = bad_codeword_witness(code);
    const std::uint64_t total =
        checked_pow(p, 2 * code.n(), kEnumerationCapacity, "uncorrectable overlap scan");
    UncorrectableOverlap result;
    for (std::uint64_t r = 0; r < total; ++r) {
        SympVector err = vector_unrank(p, 2 * code.n(), r);
        SympVector residual = err - rule(code.syndrome_of(err));
        if (code.stabilizer_space().contains(residual)) continue; // correctable
        ++result.uncorrectable_count;
        if (!code.dual_space().contains(residual)) continue; // decoded state orthogonal
        Cplx ov = (obj.witness.amps.adjoint() * xz_apply(residual, obj.witness.amps))(0);
        if (std::abs(ov) > result.max_overlap) {
            result.max_overlap = std::abs(ov);
            result.witness_error = err;
            result.witness_residual = residual;
        }
    }
    return result;
}

} // namespace qdistil
