#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hcma/grid.hpp"
#include "hcma/quadrature.hpp"

namespace hcma {

using cplx = std::complex<double>;

enum class Wirtinger { Z, ZBar, ZZ, ZZBar };

// Second-order finite differences of one time slice; one-sided at patch faces.
std::vector<cplx> wirtinger(const GridFunction& f, int k, Wirtinger which);

// Per node [[a, b], [conj(b), c]] with a = u_tt/4, b = -(i/2) d_zbar u_t,
// c = omega11 + u_zzbar.
struct ReducedHessian {
    GridSpec grid;
    std::vector<double> a;
    std::vector<cplx> b;
    std::vector<double> c;

    double det(std::size_t p) const { return a[p] * c[p] - std::norm(b[p]); }
    double min_eig(std::size_t p) const;
    double max_eig(std::size_t p) const;
    // unit vector d = (d_s, d_z) with d^T H conj(d) = min_eig
    std::pair<cplx, cplx> kernel_direction(std::size_t p) const;
};

ReducedHessian reduced_hessian(const GridFunction& u, double omega11);

struct PshReport {
    bool pass = false;
    double min_eig = 0.0;
    int k = -1, i = -1, j = -1;  // argmin node
};

// Smallest reduced-Hessian eigenvalue over nodes; pass iff >= -tol.
// With interior_only, t = 0, 1 slices and Dirichlet faces are skipped.
PshReport is_omega_psh(const GridFunction& u, double omega11, double tol,
                       bool interior_only = false);
PshReport is_omega_psh(const ReducedHessian& H, double tol, bool interior_only = false);

struct GreenIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_err = 0.0;
    double rhs_err = 0.0;
};

// Circle mean of U(z1, .) minus its centre value, over r^2, against
// (2/(pi r^2)) * integral over the disc of log(r/|z2|) U_{z2 z2bar}.
GreenIdentity green_disc_identity(const std::function<double(cplx, cplx)>& U,
                                  const std::function<double(cplx, cplx)>& U_zzbar, cplx z1,
                                  double r, const QuadratureSpec& quad = {});

// Samples of a real function on [x0, x0 + (nx-1)h] x [y0, y0 + (ny-1)h], row-major in x.
struct PlaneSamples {
    double x0 = 0.0, y0 = 0.0, h = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
    double interpolate(double x, double y) const;
};

struct SubmeanEntry {
    int i = 0, j = 0;
    double radius = 0.0;
    double centre = 0.0;
    double mean = 0.0;
    bool ok = false;
};

struct SubmeanReport {
    bool pass = true;
    double min_slack = 0.0;  // min over entries of mean - centre
    std::vector<SubmeanEntry> entries;
};

// phi(centre) <= circle mean + tol at every node whose largest circle fits.
SubmeanReport submeanvalue_test(const PlaneSamples& phi, const std::vector<double>& radii,
                                double tol = 1e-10, int angular_points = 256);

}  // namespace hcma
