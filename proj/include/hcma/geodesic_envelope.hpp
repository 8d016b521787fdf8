#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcma/grid.hpp"

namespace hcma {

// Complex direction d = (d_s, d_z) with Gaussian-integer entries
// d_s = s_re + i s_im, d_z = z_re + i z_im. Sub-mean-value stencils use the
// four points p + zeta d, zeta in {+-r h, +-i r h}, r = 1, 2, 4, ...
struct LatticeDirection {
    int s_re = 0, s_im = 0, z_re = 0, z_im = 0;
    bool operator==(const LatticeDirection&) const = default;
};

std::vector<LatticeDirection> default_directions();

enum class SweepMode { GaussSeidel, Jacobi };

struct EnvelopeProblem {
    GridSpec grid;             // nt slices over t in [0, 1]
    double omega11 = 1.0;
    GridFunction v;            // t = 1 data, nt = 1
    // full Dirichlet data for patch grids (t = 0, t = 1 and the x faces)
    std::optional<GridFunction> boundary;
    std::vector<LatticeDirection> directions = default_directions();
    double tol_sweep = 0.0;    // <= 0 selects 1e-10 (1 + max|v|)
    long max_sweeps = 100000;
    int max_multiple = 0;      // cap on the dyadic stencil multiple, 0 = none
    int phases = 3;            // 1 = fixed direction set only
    int max_denominator = 0;   // lattice search depth for kernel directions, 0 = n/8
    int kernel_candidates = 4;
    SweepMode mode = SweepMode::GaussSeidel;
    int threads = 1;
    double consistency_factor = 100.0;  // barrier checks at factor * tol_sweep

    double resolved_tol() const;
    void validate() const;
};

struct EnvelopeResult {
    GridFunction u;
    long sweeps_used = 0;
    double final_update = 0.0;
    double barrier_violation = 0.0;
    double hessian_min_eig = 0.0;
    double max_abs_det = 0.0;         // interior nodes
    double lower_constant = 0.0;
    std::vector<long> phase_sweeps;
    std::vector<LatticeDirection> direction_table;
    // per node: index into direction_table of the binding stencil, -1 on Dirichlet nodes
    std::vector<std::int32_t> active_direction;
    std::vector<std::uint8_t> active_multiple;  // log2 of the stencil multiple
};

GridFunction upper_barrier(const EnvelopeProblem& problem);

struct LowerBarrier {
    GridFunction L;
    double C = 0.0;
};
LowerBarrier lower_barrier(const EnvelopeProblem& problem, double safety = 1.05);

EnvelopeResult solve_envelope(const EnvelopeProblem& problem);
// Start from an explicit grid function; Dirichlet nodes are reset to the data.
EnvelopeResult solve_envelope(const EnvelopeProblem& problem, const GridFunction& start);

double symmetrize_check(const EnvelopeResult& result, const EnvelopeProblem& problem);

struct UniquenessProbe {
    double max_difference = 0.0;
    double bump = 0.0;
    EnvelopeResult from_upper;
    EnvelopeResult from_lower;
};

// Solves from the upper barrier and from the upper barrier minus bump, both to
// tol_sweep * tighten, and compares.
UniquenessProbe uniqueness_probe(const EnvelopeProblem& problem, double bump = 1e-6,
                                 double tighten = 1e-3);

}  // namespace hcma
