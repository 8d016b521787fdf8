#include "hcma/sharp_family.hpp"

#include <algorithm>
#include <cmath>

#include "hcma/error.hpp"
#include "hcma/local_model.hpp"
#include "hcma/obstruction.hpp"

namespace hcma {

void SharpFamilyParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("sharp family: epsilon must be positive");
}

double eval_family(const SharpFamilyParams& params, double t, std::complex<double> z) {
    params.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("sharp family: t must lie in [0, 1]");
    const double x = z.real();
    return -(2.0 * t / (params.epsilon + t)) * (x * x);
}

HessianEntry family_hessian_closed_form(const SharpFamilyParams& params, double t,
                                        std::complex<double> z) {
    params.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("sharp family: t must lie in [0, 1]");
    const double e = params.epsilon, x = z.real(), s = e + t;
    const double g = 2.0 * t / s;
    const double g1 = 2.0 * e / (s * s);
    const double g2 = -4.0 * e / (s * s * s);
    HessianEntry H;
    H.a = -g2 * x * x / 4.0;
    H.b = std::complex<double>(0.0, 0.5 * g1 * x);
    H.c = 1.0 - g / 2.0;
    return H;
}

std::vector<SharpnessRow> sharpness_limit(const std::vector<double>& eps_sequence) {
    std::vector<SharpnessRow> rows;
    for (double e : eps_sequence) {
        SharpFamilyParams{e}.validate();
        // v = u(t = 1): v_zzbar(0) = v_zz(0) = -1/(1 + eps)
        const double w = -1.0 / (1.0 + e);
        SharpnessRow r;
        r.epsilon = e;
        r.two_plus_vzzbar = 2.0 + w;
        r.abs_vzz = std::abs(w);
        r.margin = check_obstruction(ObstructionInstance::scalar(1.0, w, w)).margin;
        rows.push_back(r);
    }
    return rows;
}

GridSpec family_patch(int n) {
    if (n < 4 || n % 2 != 0) throw ValidationError("family patch: n must be even and >= 4");
    return GridSpec::centred_patch(n, n + 1, n / 2);
}

GridFunction sample_family(const SharpFamilyParams& params, const GridSpec& grid) {
    params.validate();
    GridFunction u(grid, 1.0);
    u.symmetric = grid.has_symmetry();
    for (int k = 0; k < grid.nt; ++k)
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                u(k, i, j) = eval_family(params, grid.t(k), {grid.x(i), grid.y(j)});
    return u;
}

FamilyCheck verify_family(const SharpFamilyParams& params, int n) {
    const GridSpec G = family_patch(n);
    const GridFunction u = sample_family(params, G);
    const ReducedHessian H = reduced_hessian(u, 1.0);
    FamilyCheck r;
    r.n = n;
    r.h = G.h();
    r.expected_min_c = params.epsilon / (params.epsilon + 1.0);
    r.min_c = H.c[0];
    for (int k = 0; k < G.nt; ++k)
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) {
                const std::size_t p = G.index(k, i, j);
                const double d = std::abs(H.det(p));
                r.max_abs_det = std::max(r.max_abs_det, d);
                if (k > 0 && k < G.nt - 1 && !G.dirichlet_x(i))
                    r.max_abs_det_interior = std::max(r.max_abs_det_interior, d);
                r.min_c = std::min(r.min_c, H.c[p]);
                const HessianEntry e = family_hessian_closed_form(params, G.t(k), {G.x(i), G.y(j)});
                r.max_hessian_error = std::max(
                    {r.max_hessian_error, std::abs(H.a[p] - e.a), std::abs(H.b[p] - e.b),
                     std::abs(H.c[p] - e.c)});
            }
    for (int i = 0; i < G.nx; ++i)
        for (int j = 0; j < G.ny; ++j) r.boundary_t0 = std::max(r.boundary_t0, std::abs(u(0, i, j)));
    const int i0 = G.origin_i();
    for (int k = 0; k < G.nt; ++k)
        for (int j = 0; j < G.ny; ++j) r.boundary_axis = std::max(r.boundary_axis, std::abs(u(k, i0, j)));
    r.min_eig = is_omega_psh(H, 0.0).min_eig;
    return r;
}

}  // namespace hcma
