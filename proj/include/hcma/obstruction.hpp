#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "hcma/grid.hpp"

namespace hcma {

// Second-order data of a boundary potential at the fixed point.
struct ObstructionInstance {
    Eigen::MatrixXcd Omega;  // Hermitian positive definite
    Eigen::MatrixXcd P;      // Hermitian, mixed second derivatives
    Eigen::MatrixXcd Q;      // complex symmetric, holomorphic second derivatives

    int m() const { return static_cast<int>(Omega.rows()); }
    static ObstructionInstance scalar(double omega11, double p, std::complex<double> q);
};

struct ObstructionVerdict {
    bool satisfied = false;
    // inf over unit xi of xi^*(2 Omega + P) xi - |xi^T Q xi|
    double margin = 0.0;
    Eigen::VectorXcd witness;
    // largest singular value of A^{-1/2 T} Q A^{-1/2}, A = 2 Omega + P
    double sigma_max = 0.0;
};

// Throws ValidationError for malformed shapes or symmetry, InvalidPotential
// when Omega + P is not positive definite.
void validate_instance(const ObstructionInstance& inst);

ObstructionVerdict check_obstruction(const ObstructionInstance& inst);

// Random unit vectors plus pattern-search refinement; deterministic per seed.
ObstructionVerdict check_obstruction_sampled(const ObstructionInstance& inst,
                                             std::int64_t samples = 10000,
                                             std::uint64_t seed = 0, int shards = 8);

// Radial cutoff chi(|z|) = 1 near 0, 0 beyond rho, built on log-radius so that
// chi'' + 4 chi' (in s = log r) stays within +-slope.
struct CutoffSpec {
    double rho = 0.45;          // outer radius of the support
    double slope = 1.2;         // bound on |chi_ss + 4 chi_s|
    double mollify = 0.15;      // smoothing width in log-radius
    bool search = true;         // scan (rho, slope) when the given profile fails
    double psh_tol = 0.0;       // required minimum of omega11 + v_zzbar
};

struct BuiltPotential {
    GridFunction v;  // nt = 1
    CutoffSpec profile;
    double min_c = 0.0;       // min over nodes of omega11 + discrete v_zzbar
    double vzzbar0 = 0.0;     // discrete v_zzbar at z = 0
    std::complex<double> vzz0;
    double inner_radius = 0.0;
};

// Samples chi(|z|) (p|z|^2 + Re(q z^2)) on a torus grid in wrapped coordinates.
GridFunction sample_symmetric_potential(const GridSpec& grid, double omega11, double p,
                                        std::complex<double> q, const CutoffSpec& profile);

BuiltPotential build_symmetric_potential(const GridSpec& grid, double omega11, double p,
                                         std::complex<double> q, CutoffSpec profile = {});

// Radial profile used by the builder; exposed for tests.
class LogRadialCutoff {
public:
    LogRadialCutoff(double rho, double slope, double mollify);
    double operator()(double r) const;
    double inner_radius() const { return r_in_; }
    double outer_radius() const { return rho_; }

private:
    double rho_, r_in_;
    double s0_, ds_;
    std::vector<double> table_;  // chi on a uniform log-radius grid
};

}  // namespace hcma
