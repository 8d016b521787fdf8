#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hcma/error.hpp"
#include "hcma/geodesic_envelope.hpp"
#include "hcma/local_model.hpp"
#include "hcma/sharp_family.hpp"

using namespace hcma;

namespace {

constexpr double tp = 2.0 * std::numbers::pi;

EnvelopeProblem torus_problem(int n, auto f) {
    EnvelopeProblem pb;
    pb.grid = GridSpec::torus(n, n + 1);
    GridSpec g1 = pb.grid;
    g1.nt = 1;
    pb.v = GridFunction(g1, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pb.v(0, i, j) = f(g1.x(i), g1.y(j));
    pb.v.symmetric = true;
    return pb;
}

double wave(double x, double y) { return 0.07 * std::cos(tp * x) + 0.01 * std::cos(tp * x) * std::cos(tp * y); }

}  // namespace

TEST_SUITE("geodesic_envelope") {

TEST_CASE("barriers for constant data") {
    auto pb = torus_problem(8, [](double, double) { return 0.7; });
    const GridFunction up = upper_barrier(pb);
    const LowerBarrier lo = lower_barrier(pb);
    CHECK(lo.C == 0.0);
    for (int k = 0; k < pb.grid.nt; ++k) {
        CHECK(up(k, 3, 5) == doctest::Approx(0.7 * pb.grid.t(k)).epsilon(1e-15));
        CHECK(lo.L(k, 3, 5) == up(k, 3, 5));
    }
    CHECK(up(pb.grid.nt - 1, 2, 2) == 0.7);
    auto zero = torus_problem(8, [](double, double) { return 0.0; });
    for (double v : upper_barrier(zero).values) CHECK(v == 0.0);
}

TEST_CASE("lower barrier is omega-psh and pinned at the ends") {
    auto pb = torus_problem(32, wave);
    const LowerBarrier lo = lower_barrier(pb);
    CHECK(lo.C > 0.0);
    const int last = pb.grid.nt - 1;
    for (int i = 0; i < 32; ++i) {
        CHECK(lo.L(0, i, 7) == 0.0);
        CHECK(lo.L(last, i, 7) == pb.v(0, i, 7));
    }
    CHECK(is_omega_psh(lo.L, 1.0, 1e-12, true).pass);
}

TEST_CASE("problem validation") {
    auto pb = torus_problem(32, wave);
    SUBCASE("two time slices") {
        pb.grid.nt = 2;
        CHECK_THROWS_AS(solve_envelope(pb), InsufficientResolution);
    }
    SUBCASE("direction set without mixed directions") {
        pb.directions = {{1, 0, 0, 0}, {0, 0, 1, 0}};
        CHECK_THROWS_AS(solve_envelope(pb), ValidationError);
    }
    SUBCASE("potential outside H") {
        for (double& v : pb.v.values) v *= 200.0;
        CHECK_THROWS_AS(solve_envelope(pb), InvalidPotential);
    }
    SUBCASE("sweep budget") {
        pb.max_sweeps = 3;
        CHECK_THROWS_AS(solve_envelope(pb), NonConvergence);
    }
    SUBCASE("budget used up before the last phase") {
        auto flat = torus_problem(8, [](double, double) { return 0.5; });
        flat.max_sweeps = 1;
        flat.phases = 2;
        CHECK_THROWS_AS(solve_envelope(flat), NonConvergence);
        flat.phases = 1;
        CHECK(solve_envelope(flat).sweeps_used == 1);
    }
}

TEST_CASE("constant data gives the exact linear geodesic") {
    for (double c : {0.0, 1.0, -2.5}) {
        auto pb = torus_problem(16, [c](double, double) { return c; });
        const EnvelopeResult r = solve_envelope(pb);
        double err = 0.0;
        for (int k = 0; k < pb.grid.nt; ++k) err = std::max(err, std::abs(r.u(k, 4, 9) - c * pb.grid.t(k)));
        CHECK(err <= 1e-12);
        CHECK(r.barrier_violation <= pb.resolved_tol());
        CHECK(symmetrize_check(r, pb) == 0.0);
    }
}

TEST_CASE("smooth data: sandwich, symmetry, determinism, comparison") {
    auto pb = torus_problem(32, wave);
    const EnvelopeResult r = solve_envelope(pb);
    const double tol = pb.resolved_tol();
    CHECK(r.final_update < tol);
    CHECK(r.barrier_violation <= 100.0 * tol);
    CHECK(symmetrize_check(r, pb) <= 10.0 * tol);
    CHECK(r.hessian_min_eig > -0.1);
    double moved = 0.0;
    const GridFunction up = upper_barrier(pb);
    for (std::size_t p = 0; p < up.values.size(); ++p) moved = std::max(moved, up.values[p] - r.u.values[p]);
    CHECK(moved > 1e-4);
    for (int k = 1; k < pb.grid.nt - 1; ++k)
        for (int i = 0; i < 32; ++i) CHECK(r.active_direction[pb.grid.index(k, i, 3)] >= 0);

    const EnvelopeResult again = solve_envelope(pb);
    CHECK(again.u.values == r.u.values);

    auto higher = torus_problem(32, [](double x, double y) { return wave(x, y) + 0.005 * std::cos(tp * y) + 0.006; });
    const EnvelopeResult r2 = solve_envelope(higher);
    double worst = 0.0;
    for (std::size_t p = 0; p < r.u.values.size(); ++p) worst = std::max(worst, r.u.values[p] - r2.u.values[p]);
    CHECK(worst <= tol);
}

TEST_CASE("Jacobi mode reaches the Gauss-Seidel fixed point") {
    auto pb = torus_problem(32, wave);
    pb.phases = 2;
    const EnvelopeResult gs = solve_envelope(pb);
    pb.mode = SweepMode::Jacobi;
    pb.threads = 2;
    const EnvelopeResult ja = solve_envelope(pb);
    double diff = 0.0;
    for (std::size_t p = 0; p < gs.u.values.size(); ++p) diff = std::max(diff, std::abs(gs.u.values[p] - ja.u.values[p]));
    CHECK(diff < 1e-7);
}

TEST_CASE("uniqueness probe from two starts") {
    auto pb = torus_problem(16, wave);
    const UniquenessProbe up = uniqueness_probe(pb);
    CHECK(up.max_difference <= 10.0 * pb.resolved_tol());
    CHECK(up.from_lower.sweeps_used > up.from_upper.sweeps_used);
    CHECK_THROWS_AS(uniqueness_probe(pb, -1.0), ValidationError);
}

TEST_CASE("sharp family Dirichlet reproduction at second order") {
    double prev = 0.0;
    for (int n : {16, 32}) {
        EnvelopeProblem pb;
        pb.grid = family_patch(n);
        const GridFunction ex = sample_family(SharpFamilyParams{1.0}, pb.grid);
        pb.boundary = ex;
        pb.v = ex.slice(n);
        const EnvelopeResult r = solve_envelope(pb);
        double err = 0.0;
        for (std::size_t p = 0; p < ex.values.size(); ++p) err = std::max(err, std::abs(r.u.values[p] - ex.values[p]));
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.5);
        prev = err;
        CHECK(r.u.symmetry_residual() <= 10.0 * pb.resolved_tol());
    }
    EnvelopeProblem bad;
    bad.grid = family_patch(8);
    bad.v = sample_family(SharpFamilyParams{1.0}, bad.grid).slice(8);
    CHECK_THROWS_AS(solve_envelope(bad), ValidationError);
}

}
