#include "hcma/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hcma/error.hpp"
#include "hcma/local_model.hpp"

namespace hcma {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double herm_defect(const MatrixXcd& M) { return (M - M.adjoint()).cwiseAbs().maxCoeff(); }
double sym_defect(const MatrixXcd& M) { return (M - M.transpose()).cwiseAbs().maxCoeff(); }

double min_eig_herm(const MatrixXcd& M) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double objective(const MatrixXcd& A, const MatrixXcd& Q, const VectorXcd& xi) {
    return (xi.adjoint() * A * xi)(0, 0).real() - std::abs((xi.transpose() * Q * xi)(0, 0));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

VectorXcd from_real(const VectorXd& w, int m) {
    VectorXcd xi(m);
    for (int k = 0; k < m; ++k) xi(k) = {w(k), w(k + m)};
    return xi;
}

}  // namespace

ObstructionInstance ObstructionInstance::scalar(double omega11, double p, std::complex<double> q) {
    ObstructionInstance inst;
    inst.Omega = MatrixXcd::Constant(1, 1, omega11);
    inst.P = MatrixXcd::Constant(1, 1, p);
    inst.Q = MatrixXcd::Constant(1, 1, q);
    return inst;
}

void validate_instance(const ObstructionInstance& inst) {
    const auto m = inst.Omega.rows();
    if (m < 1) throw ValidationError("obstruction: empty instance");
    if (inst.Omega.cols() != m || inst.P.rows() != m || inst.P.cols() != m || inst.Q.rows() != m ||
        inst.Q.cols() != m)
        throw ValidationError("obstruction: Omega, P, Q must be square of equal size");
    if (!inst.Omega.allFinite() || !inst.P.allFinite() || !inst.Q.allFinite())
        throw ValidationError("obstruction: non-finite entries");
    const double scale = 1.0 + inst.Omega.cwiseAbs().maxCoeff() + inst.P.cwiseAbs().maxCoeff() +
                         inst.Q.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale;
    if (herm_defect(inst.Omega) > tol) throw ValidationError("obstruction: Omega is not Hermitian");
    if (herm_defect(inst.P) > tol) throw ValidationError("obstruction: P is not Hermitian");
    if (sym_defect(inst.Q) > tol) throw ValidationError("obstruction: Q is not symmetric");
    if (!(min_eig_herm(inst.Omega) > 0.0))
        throw ValidationError("obstruction: Omega is not positive definite");
    if (!(min_eig_herm(inst.Omega + inst.P) > 0.0))
        throw InvalidPotential("obstruction: Omega + P is not positive definite");
}

ObstructionVerdict check_obstruction(const ObstructionInstance& inst) {
    validate_instance(inst);
    const int m = inst.m();
    const MatrixXcd A = 2.0 * inst.Omega + inst.P;
    const MatrixXcd& Q = inst.Q;
    ObstructionVerdict v;

    // xi = x + i y: xi^* A xi - Re(xi^T Q xi) as a real quadratic form in (x, y);
    // the phase of xi absorbs the absolute value.
    MatrixXd M(2 * m, 2 * m);
    const MatrixXd Ar = A.real(), Ai = A.imag(), Qr = Q.real(), Qi = Q.imag();
    M.topLeftCorner(m, m) = Ar - Qr;
    M.topRightCorner(m, m) = Qi - Ai;
    M.bottomLeftCorner(m, m) = Ai + Qi;
    M.bottomRightCorner(m, m) = Ar + Qr;
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
    v.margin = es.eigenvalues()(0);
    v.witness = from_real(es.eigenvectors().col(0), m);
    v.witness /= v.witness.norm();
    if (m == 1) {
        v.margin = A(0, 0).real() - std::abs(Q(0, 0));
        const double phase = std::arg(Q(0, 0));
        v.witness(0) = std::polar(1.0, -0.5 * phase);
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> ea(0.5 * (A + A.adjoint()));
    const MatrixXcd Ainv_half = ea.eigenvectors() *
                                ea.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                ea.eigenvectors().adjoint();
    const MatrixXcd B = Ainv_half.transpose() * Q * Ainv_half;
    v.sigma_max = Eigen::JacobiSVD<MatrixXcd>(B).singularValues()(0);

    const double snap = 64.0 * std::numeric_limits<double>::epsilon() * A.cwiseAbs().maxCoeff();
    if (v.margin < 0.0 && v.margin > -snap) v.margin = 0.0;
    v.satisfied = v.margin >= 0.0;
    return v;
}

ObstructionVerdict check_obstruction_sampled(const ObstructionInstance& inst,
                                             std::int64_t samples, std::uint64_t seed,
                                             int shards) {
    validate_instance(inst);
    if (samples < 10000) throw ValidationError("sampled obstruction check needs >= 10^4 samples");
    if (shards < 1) throw ValidationError("shards must be positive");
    const int m = inst.m();
    const MatrixXcd A = 2.0 * inst.Omega + inst.P;
    auto f = [&](const VectorXd& w) { return objective(A, inst.Q, from_real(w, m)); };

    // each shard is independent and seeded from the master seed
    VectorXd best;
    double best_val = std::numeric_limits<double>::infinity();
    for (int s = 0; s < shards; ++s) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s))));
        std::normal_distribution<double> N(0.0, 1.0);
        const std::int64_t count = samples / shards + (s < samples % shards ? 1 : 0);
        VectorXd w(2 * m);
        for (std::int64_t c = 0; c < count; ++c) {
            for (int k = 0; k < 2 * m; ++k) w(k) = N(rng);
            const double n = w.norm();
            if (!(n > 0.0)) continue;
            w /= n;
            const double val = f(w);
            if (val < best_val) {
                best_val = val;
                best = w;
            }
        }
    }

    // pattern search on the sphere
    double step = 0.25;
    VectorXd trial(2 * m);
    while (step > 1e-12) {
        bool improved = false;
        for (int k = 0; k < 2 * m; ++k)
            for (double sgn : {1.0, -1.0}) {
                trial = best;
                trial(k) += sgn * step;
                trial.normalize();
                const double val = f(trial);
                if (val < best_val) {
                    best_val = val;
                    best = trial;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }

    ObstructionVerdict v;
    v.margin = best_val;
    v.witness = from_real(best, m);
    v.witness /= v.witness.norm();
    v.satisfied = v.margin >= 0.0;
    v.sigma_max = std::numeric_limits<double>::quiet_NaN();
    return v;
}

// ---- radial cutoff ---------------------------------------------------------

namespace {

struct RawProfile {
    double kappa, ell, L, B;

    // chi as a function of sigma = s - s_start
    double chi(double sg) const {
        if (sg <= 0.0) return 1.0;
        const double q = kappa / 4.0;
        if (sg <= ell) return 1.0 - q * (sg - (1.0 - std::exp(-4.0 * sg)) / 4.0);
        if (sg >= L) return 0.0;
        const double c_ell = 1.0 - q * (ell - (1.0 - std::exp(-4.0 * ell)) / 4.0);
        return c_ell + q * ((sg - ell) + B * (std::exp(-4.0 * sg) - std::exp(-4.0 * ell)) / 4.0);
    }
};

// G = -kappa then +kappa; total drop of one.
RawProfile raw_profile(double kappa) {
    auto drop = [&](double ell) {
        const double L = 0.25 * std::log(2.0 * std::exp(4.0 * ell) - 1.0);
        return 0.25 * kappa * (2.0 * ell - L);
    };
    double lo = 0.0, hi = 1.0;
    while (drop(hi) < 1.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (drop(mid) < 1.0 ? lo : hi) = mid;
    }
    RawProfile p;
    p.kappa = kappa;
    p.ell = 0.5 * (lo + hi);
    p.B = 2.0 * std::exp(4.0 * p.ell) - 1.0;
    p.L = 0.25 * std::log(p.B);
    return p;
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

LogRadialCutoff::LogRadialCutoff(double rho, double slope, double mollify) : rho_(rho) {
    if (!(rho > 0.0) || !(slope > 0.0) || !(mollify >= 0.0))
        throw ValidationError("cutoff: rho, slope must be positive and mollify nonnegative");
    const RawProfile raw = raw_profile(slope);
    const double w = mollify;
    const double s_end = std::log(rho);
    const double s_start = s_end - raw.L - w;  // raw profile start
    s0_ = s_start - w;
    r_in_ = std::exp(s0_);
    const int N = 4096;
    ds_ = (s_end - s0_) / N;
    table_.assign(N + 1, 0.0);
    if (w == 0.0) {
        for (int k = 0; k <= N; ++k) table_[k] = raw.chi(s0_ + k * ds_ - s_start);
    } else {
        // smoothing in s commutes with d^2/ds^2 + 4 d/ds, so |G| stays <= slope
        const int M = 100;
        std::vector<double> wt(2 * M + 1);
        double norm = 0.0;
        for (int a = -M; a <= M; ++a) norm += wt[a + M] = bump(static_cast<double>(a) / M);
        for (int k = 0; k <= N; ++k) {
            const double s = s0_ + k * ds_;
            double acc = 0.0;
            for (int a = -M; a <= M; ++a)
                acc += wt[a + M] * raw.chi(s - s_start - w * static_cast<double>(a) / M);
            table_[k] = acc / norm;
        }
    }
    table_.front() = 1.0;
    table_.back() = 0.0;
}

double LogRadialCutoff::operator()(double r) const {
    if (r <= r_in_) return 1.0;
    if (r >= rho_) return 0.0;
    const double x = (std::log(r) - s0_) / ds_;
    const int N = static_cast<int>(table_.size()) - 1;
    int k = std::clamp(static_cast<int>(x), 1, N - 2);
    const double u = x - k;
    // cubic Lagrange on 4 table points
    const double f0 = table_[k - 1], f1 = table_[k], f2 = table_[k + 1], f3 = table_[k + 2];
    return f1 + 0.5 * u * (f2 - f0 + u * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3 +
                                          u * (3.0 * (f1 - f2) + f3 - f0)));
}

GridFunction sample_symmetric_potential(const GridSpec& grid, double omega11, double p,
                                        std::complex<double> q, const CutoffSpec& profile) {
    if (grid.topology != Topology::Torus)
        throw ValidationError("symmetric potential: builder works on the torus");
    GridSpec g = grid;
    g.nt = 1;
    GridFunction v(g, omega11);
    v.symmetric = true;
    if (p == 0.0 && q == 0.0) return v;
    const LogRadialCutoff chi(profile.rho, profile.slope, profile.mollify);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double x = g.x(i), y = g.y(j);
            const double r2 = x * x + y * y;
            const double quad = p * r2 + q.real() * (x * x - y * y) - 2.0 * q.imag() * x * y;
            v(0, i, j) = r2 > 0.0 ? chi(std::sqrt(r2)) * quad : 0.0;
        }
    return v;
}

namespace {

void measure(BuiltPotential& b, double omega11) {
    const auto c = wirtinger(b.v, 0, Wirtinger::ZZBar);
    b.min_c = std::numeric_limits<double>::infinity();
    for (const auto& z : c) b.min_c = std::min(b.min_c, omega11 + z.real());
    const std::size_t o = b.v.grid.index(0, b.v.grid.origin_i(), b.v.grid.origin_j());
    b.vzzbar0 = c[o].real();
    b.vzz0 = wirtinger(b.v, 0, Wirtinger::ZZ)[o];
}

}  // namespace

BuiltPotential build_symmetric_potential(const GridSpec& grid, double omega11, double p,
                                         std::complex<double> q, CutoffSpec profile) {
    if (!(omega11 > 0.0)) throw ValidationError("builder: omega11 must be positive");
    if (!(omega11 + p > 0.0)) throw InvalidPotential("builder: omega11 + p must be positive");
    if (grid.topology != Topology::Torus) throw ValidationError("builder: torus grids only");
    if (!(profile.rho > 0.0 && profile.rho < 0.5))
        throw ValidationError("builder: rho must lie in (0, 1/2)");

    auto attempt = [&](const CutoffSpec& spec) {
        BuiltPotential b;
        b.profile = spec;
        b.v = sample_symmetric_potential(grid, omega11, p, q, spec);
        if (p != 0.0 || q != 0.0)
            b.inner_radius = LogRadialCutoff(spec.rho, spec.slope, spec.mollify).inner_radius();
        measure(b, omega11);
        return b;
    };

    BuiltPotential best = attempt(profile);
    bool found = best.min_c > profile.psh_tol;
    if (!profile.search) {
        if (found) return best;
        throw ConstructiveFailure("builder: profile not admissible (min omega11 + v_zzbar = " +
                                      std::to_string(best.min_c) + ")",
                                  best.min_c);
    }
    if (p == 0.0 && q == 0.0) return best;
    // among admissible profiles keep the widest plateau, so the prescribed jet
    // at the fixed point is resolved by the most grid nodes
    for (double rho : {0.49, 0.47, 0.45, 0.42, 0.4, 0.35, 0.3})
        for (double slope : {0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.25, 1.3, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
            CutoffSpec s = profile;
            s.rho = rho;
            s.slope = slope;
            BuiltPotential b = attempt(s);
            const bool ok = b.min_c > profile.psh_tol;
            const bool better = ok ? (!found || b.inner_radius > best.inner_radius)
                                   : (!found && b.min_c > best.min_c);
            if (better) {
                best = std::move(b);
                found = found || ok;
            }
        }
    if (!found)
        throw ConstructiveFailure("builder: no admissible cutoff (best min omega11 + v_zzbar = " +
                                      std::to_string(best.min_c) + ")",
                                  best.min_c);
    return best;
}

}  // namespace hcma
