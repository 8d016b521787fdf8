#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hcma/geodesic_envelope.hpp"
#include "hcma/obstruction.hpp"

namespace hcma {

struct TraceDiagnostics {
    double a_fit = 0.0;            // least squares slope of u(t, x0) through the origin
    double linear_residual = 0.0;  // max |u(t, x0) - a_fit t|
    double chord_slope = 0.0;      // u(1, x0)
    double chord_residual = 0.0;   // max |u(t, x0) - chord_slope t|
    std::vector<double> trace;     // u(t_k, x0)
};

// x0 is a grid node (i0, j0); defaults to the node of z = 0.
TraceDiagnostics linear_trace_test(const EnvelopeResult& result, int i0 = -1, int j0 = -1);

struct LambdaProbe {
    std::vector<double> lambda;          // log(omega11 + u_zzbar)(t_k, x0); -inf when not positive
    std::vector<double> second_diff;     // (lambda[k+1] - 2 lambda[k] + lambda[k-1]) / ht^2, NaN when undefined
    double min_second_diff = 0.0;
    int flagged = 0;                     // slices with omega11 + u_zzbar <= 0
};

LambdaProbe lambda_subharmonicity_probe(const EnvelopeResult& result, int i0 = -1, int j0 = -1);

struct BlowupRow {
    int n = 0;
    double h = 0.0;
    double radius = 0.0;
    double max_abs = 0.0;      // max |u_zzbar| over |z - x0| <= radius, all t
    double oscillation = 0.0;  // max - min of u_zzbar over the same set
    bool ok = true;
    std::string note;
};

// u_zzbar statistics of one solved grid around the node (i0, j0).
std::vector<BlowupRow> blowup_rows(const GridFunction& u, const std::vector<double>& radii,
                                   int i0 = -1, int j0 = -1);

// Boundary potential chi(|z|)(p|z|^2 + Re(q z^2)) on the torus, solved at several levels.
struct ScanTemplate {
    double omega11 = 1.0;
    double p = 0.0;
    std::complex<double> q;
    CutoffSpec profile;
    int phases = 3;
    double tol_sweep = 0.0;
    long max_sweeps = 100000;
};

// The cutoff profile is chosen once on the finest level and reused on the
// others; a level whose sampled potential is not admissible gets ok = false.
std::vector<BlowupRow> blowup_scan(const ScanTemplate& tmpl, const std::vector<int>& levels,
                                   const std::vector<double>& radii);

}  // namespace hcma
