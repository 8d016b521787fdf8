#include "hcma/local_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hcma/error.hpp"

namespace hcma {

namespace {

constexpr double pi = std::numbers::pi;

// First and second derivatives along one axis of a sampled line g(0..m-1).
// periodic lines wrap; bounded lines use one-sided second-order stencils.
// Central sums pair the outer neighbours first so mirrored nodes agree bitwise.
template <class G>
double diff1(const G& g, int i, int m, bool periodic, double h) {
    if (periodic) return (g((i + 1) % m) - g((i + m - 1) % m)) / (2.0 * h);
    if (i == 0) return (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h);
    if (i == m - 1) return (3.0 * g(m - 1) - 4.0 * g(m - 2) + g(m - 3)) / (2.0 * h);
    return (g(i + 1) - g(i - 1)) / (2.0 * h);
}

template <class G>
double diff2(const G& g, int i, int m, bool periodic, double h) {
    const double h2 = h * h;
    if (periodic) return ((g((i + 1) % m) + g((i + m - 1) % m)) - 2.0 * g(i)) / h2;
    if (m < 4) {
        const int c = std::clamp(i, 1, m - 2);
        return ((g(c + 1) + g(c - 1)) - 2.0 * g(c)) / h2;
    }
    if (i == 0) return (2.0 * g(0) - 5.0 * g(1) + 4.0 * g(2) - g(3)) / h2;
    if (i == m - 1) return (2.0 * g(m - 1) - 5.0 * g(m - 2) + 4.0 * g(m - 3) - g(m - 4)) / h2;
    return ((g(i + 1) + g(i - 1)) - 2.0 * g(i)) / h2;
}

struct SliceOps {
    const GridSpec& G;
    const double* f;
    double h;

    double at(int i, int j) const { return f[static_cast<std::size_t>(i) * G.ny + j]; }
    double dx(int i, int j) const {
        return diff1([&](int a) { return at(a, j); }, i, G.nx, G.periodic_x(), h);
    }
    double dy(int i, int j) const {
        return diff1([&](int b) { return at(i, b); }, j, G.ny, true, h);
    }
    double dxx(int i, int j) const {
        return diff2([&](int a) { return at(a, j); }, i, G.nx, G.periodic_x(), h);
    }
    double dyy(int i, int j) const {
        return diff2([&](int b) { return at(i, b); }, j, G.ny, true, h);
    }
    double dxy(int i, int j) const {
        return diff1([&](int a) { return dy(a, j); }, i, G.nx, G.periodic_x(), h);
    }
};

void check_omega(double omega11) {
    if (!(omega11 > 0.0) || !std::isfinite(omega11))
        throw ValidationError("omega11 must be positive and finite");
}

}  // namespace

std::vector<cplx> wirtinger(const GridFunction& f, int k, Wirtinger which) {
    f.require_finite("wirtinger");
    const GridSpec& G = f.grid;
    if (k < 0 || k >= G.nt) throw DomainError("wirtinger: slice index out of range");
    if (!G.periodic_x() && G.nx < 3) throw InsufficientResolution("wirtinger: patch too narrow");
    SliceOps op{G, f.values.data() + k * G.slice_size(), G.h()};
    std::vector<cplx> out(G.slice_size());
    for (int i = 0; i < G.nx; ++i)
        for (int j = 0; j < G.ny; ++j) {
            cplx v;
            switch (which) {
                case Wirtinger::Z: v = cplx(op.dx(i, j), -op.dy(i, j)) * 0.5; break;
                case Wirtinger::ZBar: v = cplx(op.dx(i, j), op.dy(i, j)) * 0.5; break;
                case Wirtinger::ZZ:
                    v = cplx(op.dxx(i, j) - op.dyy(i, j), -2.0 * op.dxy(i, j)) * 0.25;
                    break;
                case Wirtinger::ZZBar: v = 0.25 * (op.dxx(i, j) + op.dyy(i, j)); break;
            }
            out[static_cast<std::size_t>(i) * G.ny + j] = v;
        }
    return out;
}

double ReducedHessian::min_eig(std::size_t p) const {
    const double m = 0.5 * (a[p] + c[p]);
    const double d = 0.5 * (a[p] - c[p]);
    return m - std::sqrt(d * d + std::norm(b[p]));
}

double ReducedHessian::max_eig(std::size_t p) const {
    const double m = 0.5 * (a[p] + c[p]);
    const double d = 0.5 * (a[p] - c[p]);
    return m + std::sqrt(d * d + std::norm(b[p]));
}

std::pair<cplx, cplx> ReducedHessian::kernel_direction(std::size_t p) const {
    const double lam = min_eig(p);
    // eigenvector of H from whichever row is better conditioned, then conjugated
    cplx v1(b[p]), v2(lam - a[p], 0.0);
    cplx w1(lam - c[p], 0.0), w2(std::conj(b[p]));
    if (std::norm(w1) + std::norm(w2) > std::norm(v1) + std::norm(v2)) {
        v1 = w1;
        v2 = w2;
    }
    const double nrm = std::sqrt(std::norm(v1) + std::norm(v2));
    if (!(nrm > 0.0)) return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    return {std::conj(v1) / nrm, std::conj(v2) / nrm};
}

ReducedHessian reduced_hessian(const GridFunction& u, double omega11) {
    check_omega(omega11);
    u.require_finite("reduced_hessian");
    const GridSpec& G = u.grid;
    if (G.nt < 3) throw InsufficientResolution("reduced_hessian: nt must be at least 3");
    const int nt = G.nt;
    const double ht = G.ht();
    const std::size_t m = G.slice_size();

    ReducedHessian H;
    H.grid = G;
    H.a.resize(G.size());
    H.b.resize(G.size());
    H.c.resize(G.size());

    std::vector<double> ut(G.size());
    for (std::size_t q = 0; q < m; ++q) {
        auto line = [&](int k) { return u.values[k * m + q]; };
        for (int k = 0; k < nt; ++k) {
            ut[k * m + q] = diff1(line, k, nt, false, ht);
            H.a[k * m + q] = 0.25 * diff2(line, k, nt, false, ht);
        }
    }
    for (int k = 0; k < nt; ++k) {
        SliceOps uop{G, u.values.data() + k * m, G.h()};
        SliceOps top{G, ut.data() + k * m, G.h()};
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) {
                const std::size_t p = G.index(k, i, j);
                // -(i/2) * (u_tx + i u_ty)/2
                H.b[p] = cplx(top.dy(i, j), -top.dx(i, j)) * 0.25;
                H.c[p] = omega11 + 0.25 * (uop.dxx(i, j) + uop.dyy(i, j));
            }
    }
    return H;
}

PshReport is_omega_psh(const ReducedHessian& H, double tol, bool interior_only) {
    const GridSpec& G = H.grid;
    PshReport r;
    r.min_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k < G.nt; ++k) {
        if (interior_only && (k == 0 || k == G.nt - 1)) continue;
        for (int i = 0; i < G.nx; ++i) {
            if (interior_only && G.dirichlet_x(i)) continue;
            for (int j = 0; j < G.ny; ++j) {
                const double e = H.min_eig(G.index(k, i, j));
                if (e < r.min_eig) {
                    r.min_eig = e;
                    r.k = k;
                    r.i = i;
                    r.j = j;
                }
            }
        }
    }
    r.pass = r.min_eig >= -tol;
    return r;
}

PshReport is_omega_psh(const GridFunction& u, double omega11, double tol, bool interior_only) {
    return is_omega_psh(reduced_hessian(u, omega11), tol, interior_only);
}

GreenIdentity green_disc_identity(const std::function<double(cplx, cplx)>& U,
                                  const std::function<double(cplx, cplx)>& U_zzbar, cplx z1,
                                  double r, const QuadratureSpec& quad) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("green_disc_identity: r must be positive");
    GreenIdentity g;
    const double centre = U(z1, cplx(0.0, 0.0));
    const double tol = quad.tolerance;
    auto boundary = [&](double t) { return U(z1, std::polar(r, 2.0 * pi * t)) - centre; };
    QuadResult lhs = integrate(boundary, 0.0, 1.0, tol * r * r, quad.max_subdivisions);
    g.lhs = lhs.value / (r * r);
    g.lhs_err = lhs.abserr / (r * r);

    // trapezoid in angle is spectrally accurate for the periodic inner integral
    const int na = 512;
    auto ring = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        double s = 0.0;
        for (int a = 0; a < na; ++a) s += U_zzbar(z1, std::polar(rho, 2.0 * pi * a / na));
        return (2.0 * pi * s / na) * rho * (std::log(r) - std::log(rho));
    };
    const double scale = 2.0 / (pi * r * r);
    QuadResult rhs = integrate(ring, 0.0, r, tol / scale, quad.max_subdivisions);
    g.rhs = scale * rhs.value;
    g.rhs_err = scale * rhs.abserr;
    return g;
}

double PlaneSamples::interpolate(double x, double y) const {
    const double fx = (x - x0) / h, fy = (y - y0) / h;
    int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    i = std::clamp(i, 0, nx - 2);
    j = std::clamp(j, 0, ny - 2);
    const double sx = fx - i, sy = fy - j;
    return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) +
           (1 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
}

SubmeanReport submeanvalue_test(const PlaneSamples& phi, const std::vector<double>& radii,
                                double tol, int angular_points) {
    if (phi.nx < 2 || phi.ny < 2 || !(phi.h > 0.0))
        throw ValidationError("submeanvalue_test: empty sample patch");
    if (phi.values.size() != static_cast<std::size_t>(phi.nx) * phi.ny)
        throw ValidationError("submeanvalue_test: sample count mismatch");
    for (double v : phi.values)
        if (!std::isfinite(v)) throw ValidationError("submeanvalue_test: non-finite sample");
    if (radii.empty()) throw ValidationError("submeanvalue_test: no radii");
    if (angular_points < 8) throw ValidationError("submeanvalue_test: too few angular points");
    double rmax = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("submeanvalue_test: radii must be positive");
        rmax = std::max(rmax, r);
    }
    const int reach = static_cast<int>(std::ceil(rmax / phi.h - 1e-12));
    if (2 * reach >= phi.nx || 2 * reach >= phi.ny)
        throw DomainError("submeanvalue_test: radius exceeds the sampled patch");

    SubmeanReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (int i = reach; i < phi.nx - reach; ++i)
        for (int j = reach; j < phi.ny - reach; ++j) {
            const double cx = phi.x0 + i * phi.h, cy = phi.y0 + j * phi.h;
            for (double r : radii) {
                double s = 0.0;
                for (int a = 0; a < angular_points; ++a) {
                    const double th = 2.0 * pi * a / angular_points;
                    s += phi.interpolate(cx + r * std::cos(th), cy + r * std::sin(th));
                }
                SubmeanEntry e{i, j, r, phi.at(i, j), s / angular_points, false};
                e.ok = e.centre <= e.mean + tol;
                rep.pass = rep.pass && e.ok;
                rep.min_slack = std::min(rep.min_slack, e.mean - e.centre);
                rep.entries.push_back(e);
            }
        }
    return rep;
}

}  // namespace hcma
