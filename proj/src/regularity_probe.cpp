#include "hcma/regularity_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcma/error.hpp"
#include "hcma/local_model.hpp"

namespace hcma {

namespace {

std::pair<int, int> resolve_node(const GridSpec& G, int i0, int j0) {
    if (i0 < 0) i0 = G.origin_i();
    if (j0 < 0) j0 = G.origin_j();
    if (i0 < 0 || i0 >= G.nx || j0 < 0 || j0 >= G.ny)
        throw DomainError("probe: fixed point is not a grid node");
    return {i0, j0};
}

}  // namespace

TraceDiagnostics linear_trace_test(const EnvelopeResult& result, int i0, int j0) {
    const GridFunction& u = result.u;
    const GridSpec& G = u.grid;
    std::tie(i0, j0) = resolve_node(G, i0, j0);
    TraceDiagnostics d;
    double stu = 0.0, stt = 0.0;
    for (int k = 0; k < G.nt; ++k) {
        const double t = G.t(k), val = u(k, i0, j0);
        d.trace.push_back(val);
        stu += t * val;
        stt += t * t;
    }
    d.a_fit = stu / stt;
    d.chord_slope = u(G.nt - 1, i0, j0);
    for (int k = 0; k < G.nt; ++k) {
        const double t = G.t(k);
        d.linear_residual = std::max(d.linear_residual, std::abs(d.trace[k] - d.a_fit * t));
        d.chord_residual = std::max(d.chord_residual, std::abs(d.trace[k] - d.chord_slope * t));
    }
    return d;
}

LambdaProbe lambda_subharmonicity_probe(const EnvelopeResult& result, int i0, int j0) {
    const GridFunction& u = result.u;
    const GridSpec& G = u.grid;
    std::tie(i0, j0) = resolve_node(G, i0, j0);
    LambdaProbe pr;
    const double ninf = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < G.nt; ++k) {
        const double c = u.omega11 + wirtinger(u, k, Wirtinger::ZZBar)[static_cast<std::size_t>(i0) * G.ny + j0].real();
        if (c > 0.0) {
            pr.lambda.push_back(std::log(c));
        } else {
            pr.lambda.push_back(ninf);
            ++pr.flagged;
        }
    }
    const double ht2 = G.ht() * G.ht();
    pr.min_second_diff = std::numeric_limits<double>::infinity();
    pr.second_diff.assign(G.nt, std::numeric_limits<double>::quiet_NaN());
    for (int k = 1; k + 1 < G.nt; ++k) {
        const double a = pr.lambda[k - 1], b = pr.lambda[k], c = pr.lambda[k + 1];
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
        pr.second_diff[k] = ((a + c) - 2.0 * b) / ht2;
        pr.min_second_diff = std::min(pr.min_second_diff, pr.second_diff[k]);
    }
    return pr;
}

std::vector<BlowupRow> blowup_rows(const GridFunction& u, const std::vector<double>& radii,
                                   int i0, int j0) {
    const GridSpec& G = u.grid;
    std::tie(i0, j0) = resolve_node(G, i0, j0);
    std::vector<std::vector<cplx>> lap;
    for (int k = 0; k < G.nt; ++k) lap.push_back(wirtinger(u, k, Wirtinger::ZZBar));
    const double cx = G.x(i0), cy = G.y(j0);
    std::vector<BlowupRow> rows;
    for (double r : radii) {
        if (!(r >= 0.0)) throw DomainError("blowup: radii must be nonnegative");
        BlowupRow row;
        row.n = G.n;
        row.h = G.h();
        row.radius = r;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) {
                double dx = G.x(i) - cx, dy = G.y(j) - cy;
                if (G.periodic_x()) dx -= std::round(dx);
                dy -= std::round(dy * G.n / G.ny) * G.ny / static_cast<double>(G.n);
                if (dx * dx + dy * dy > r * r * (1.0 + 1e-12)) continue;
                for (int k = 0; k < G.nt; ++k) {
                    const double z = lap[k][static_cast<std::size_t>(i) * G.ny + j].real();
                    lo = std::min(lo, z);
                    hi = std::max(hi, z);
                    row.max_abs = std::max(row.max_abs, std::abs(z));
                }
            }
        row.oscillation = hi - lo;
        rows.push_back(row);
    }
    return rows;
}

std::vector<BlowupRow> blowup_scan(const ScanTemplate& tmpl, const std::vector<int>& levels,
                                   const std::vector<double>& radii) {
    if (levels.empty()) throw ValidationError("blowup_scan: no grid levels");
    const int finest = *std::max_element(levels.begin(), levels.end());
    CutoffSpec profile = tmpl.profile;
    if (tmpl.p != 0.0 || tmpl.q != 0.0) {
        profile = build_symmetric_potential(GridSpec::torus(finest, 1), tmpl.omega11, tmpl.p,
                                            tmpl.q, tmpl.profile)
                      .profile;
    }
    profile.search = false;

    std::vector<BlowupRow> out;
    for (int n : levels) {
        const GridSpec G = GridSpec::torus(n, n + 1);
        EnvelopeProblem pb;
        pb.grid = G;
        pb.omega11 = tmpl.omega11;
        pb.v = sample_symmetric_potential(G, tmpl.omega11, tmpl.p, tmpl.q, profile);
        pb.phases = tmpl.phases;
        pb.tol_sweep = tmpl.tol_sweep;
        pb.max_sweeps = tmpl.max_sweeps;
        try {
            pb.validate();
        } catch (const InvalidPotential& e) {
            for (double r : radii) {
                BlowupRow row;
                row.n = n;
                row.h = G.h();
                row.radius = r;
                row.ok = false;
                row.note = "potential not admissible at this level";
                out.push_back(row);
            }
            continue;
        }
        const EnvelopeResult res = solve_envelope(pb);
        for (auto& row : blowup_rows(res.u, radii)) out.push_back(row);
    }
    return out;
}

}  // namespace hcma
