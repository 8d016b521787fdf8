#include <cmath>
#include <complex>

#include "doctest.h"
#include "hcma/error.hpp"
#include "hcma/local_model.hpp"

using namespace hcma;

namespace {

GridFunction sample(const GridSpec& G, auto f) {
    GridFunction u(G, 1.0);
    for (int k = 0; k < G.nt; ++k)
        for (int i = 0; i < G.nx; ++i)
            for (int j = 0; j < G.ny; ++j) u(k, i, j) = f(G.t(k), G.x(i), G.y(j));
    return u;
}

double max_err(const std::vector<cplx>& a, auto exact, const GridSpec& G) {
    double e = 0.0;
    for (int i = 0; i < G.nx; ++i)
        for (int j = 0; j < G.ny; ++j)
            e = std::max(e, std::abs(a[static_cast<std::size_t>(i) * G.ny + j] - exact(G.x(i), G.y(j))));
    return e;
}

}  // namespace

TEST_SUITE("local_model") {

TEST_CASE("Wirtinger derivatives of polynomials on a patch") {
    const GridSpec G = GridSpec::centred_patch(32, 1, 8);
    const auto rez = sample(G, [](double, double x, double) { return x; });
    CHECK(max_err(wirtinger(rez, 0, Wirtinger::Z), [](double, double) { return cplx(0.5, 0); }, G) < 1e-12);
    CHECK(max_err(wirtinger(rez, 0, Wirtinger::ZBar), [](double, double) { return cplx(0.5, 0); }, G) < 1e-12);
    // the y direction is periodic on a patch, so use functions of x or harmonic-in-x tests only
    const auto sq = sample(G, [](double, double x, double) { return x * x; });
    CHECK(max_err(wirtinger(sq, 0, Wirtinger::ZZBar), [](double, double) { return cplx(0.5, 0); }, G) < 1e-9);
    CHECK(max_err(wirtinger(sq, 0, Wirtinger::ZZ), [](double, double) { return cplx(0.5, 0); }, G) < 1e-9);
}

TEST_CASE("Wirtinger derivatives on the torus converge at second order") {
    const double tp = 2.0 * M_PI;
    auto f = [&](double, double x, double y) { return std::sin(tp * x) * std::cos(tp * y) + 0.3 * std::cos(2 * tp * x); };
    auto fzzb = [&](double x, double y) {
        return cplx(0.25 * (-2 * tp * tp * std::sin(tp * x) * std::cos(tp * y) - 0.3 * 4 * tp * tp * std::cos(2 * tp * x)), 0);
    };
    auto fz = [&](double x, double y) {
        const double fx = tp * std::cos(tp * x) * std::cos(tp * y) - 0.3 * 2 * tp * std::sin(2 * tp * x);
        const double fy = -tp * std::sin(tp * x) * std::sin(tp * y);
        return cplx(fx, -fy) * 0.5;
    };
    double prev_a = 0, prev_b = 0;
    for (int n : {16, 32, 64}) {
        const GridSpec G = GridSpec::torus(n, 1);
        const auto u = sample(G, f);
        const double ea = max_err(wirtinger(u, 0, Wirtinger::ZZBar), fzzb, G);
        const double eb = max_err(wirtinger(u, 0, Wirtinger::Z), fz, G);
        if (prev_a > 0) {
            CHECK(std::log2(prev_a / ea) >= 1.8);
            CHECK(std::log2(prev_b / eb) >= 1.8);
        }
        prev_a = ea;
        prev_b = eb;
    }
}

TEST_CASE("harmonic Re(z^2) away from the periodic seam") {
    const GridSpec P = GridSpec::centred_patch(64, 1, 16);
    const auto u = sample(P, [](double, double x, double y) { return x * x - y * y; });
    const auto lap = wirtinger(u, 0, Wirtinger::ZZBar);
    const auto zz = wirtinger(u, 0, Wirtinger::ZZ);
    for (int i = 0; i < P.nx; ++i)
        for (int j = 0; j < P.ny; ++j) {
            if (std::abs(j - P.ny / 2) <= 1) continue;  // y wraps from 1/2 to -1/2 here
            CHECK(std::abs(lap[i * P.ny + j]) < 1e-9);
            CHECK(std::abs(zz[i * P.ny + j] - cplx(1.0, 0.0)) < 1e-9);
        }
}

TEST_CASE("reduced Hessian closed forms") {
    const GridSpec G = GridSpec::torus(8, 9);
    const double om = 1.7;
    const auto lin = sample(G, [](double t, double, double) { return 2.5 * t; });
    const ReducedHessian H1 = reduced_hessian(lin, om);
    const auto sq = sample(G, [](double t, double, double) { return t * t; });
    const ReducedHessian H2 = reduced_hessian(sq, om);
    for (std::size_t p = 0; p < G.size(); ++p) {
        CHECK(std::abs(H1.a[p]) < 1e-12);
        CHECK(std::abs(H1.b[p]) < 1e-12);
        CHECK(H1.c[p] == doctest::Approx(om));
        CHECK(std::abs(H1.det(p)) < 1e-11);
        CHECK(H2.a[p] == doctest::Approx(0.5));
        CHECK(std::abs(H2.b[p]) < 1e-12);
        CHECK(H2.det(p) == doctest::Approx(om / 2));
    }
    CHECK_THROWS_AS(reduced_hessian(sample(GridSpec::torus(8, 2), [](double, double, double) { return 0.0; }), 1.0),
                    InsufficientResolution);
    GridFunction bad = lin;
    bad.values[3] = std::nan("");
    CHECK_THROWS_AS(reduced_hessian(bad, 1.0), ValidationError);
}

TEST_CASE("kernel direction annihilates a degenerate Hessian") {
    ReducedHessian H;
    const double kap = 0.37;
    // [[a, b], [conj b, c]] with kernel (1, i kap): a = kap^2 c, b = -i kap c ... here c = 2
    const double c = 2.0;
    H.a = {kap * kap * c};
    H.b = {cplx(0.0, kap * c)};
    H.c = {c};
    CHECK(std::abs(H.det(0)) < 1e-14);
    const auto [ds, dz] = H.kernel_direction(0);
    const cplx levi = ds * H.a[0] * std::conj(ds) + ds * H.b[0] * std::conj(dz) +
                      dz * std::conj(H.b[0]) * std::conj(ds) + dz * H.c[0] * std::conj(dz);
    CHECK(std::abs(levi) < 1e-14);
    CHECK(std::abs(dz / ds - cplx(0.0, -kap)) < 1e-14);
}

TEST_CASE("omega-psh test") {
    const GridSpec G = GridSpec::torus(8, 9);
    const auto zero = sample(G, [](double, double, double) { return 0.0; });
    const PshReport z = is_omega_psh(zero, 1.0, 0.0);
    CHECK(z.pass);
    CHECK(z.min_eig == doctest::Approx(0.0));
    const auto neg = sample(G, [](double t, double, double) { return -t * t; });
    const PshReport n = is_omega_psh(neg, 1.0, 1e-3);
    CHECK_FALSE(n.pass);
    CHECK(n.min_eig == doctest::Approx(-0.5));
    // invariance under affine functions of t
    const double tp = 2 * M_PI;
    const auto f = sample(G, [&](double t, double x, double y) { return 0.01 * t * t * std::cos(tp * x) + 0.02 * std::sin(tp * y); });
    const auto g = sample(G, [&](double t, double x, double y) {
        return 0.01 * t * t * std::cos(tp * x) + 0.02 * std::sin(tp * y) + 0.3 - 1.1 * t;
    });
    CHECK(is_omega_psh(f, 1.0, 0.0).min_eig == doctest::Approx(is_omega_psh(g, 1.0, 0.0).min_eig).epsilon(1e-10));
}

TEST_CASE("symmetric functions have b = 0 at the fixed point") {
    const double tp = 2 * M_PI;
    const GridSpec G = GridSpec::torus(32, 17);
    auto u = sample(G, [&](double t, double x, double y) {
        return t * (1 - t) * (std::cos(tp * x) + 0.5 * std::cos(tp * (x + y))) + 0.1 * t * std::sin(tp * x) * std::sin(tp * y);
    });
    CHECK(u.symmetry_residual() < 1e-15);
    const ReducedHessian H = reduced_hessian(u, 1.0);
    for (int k = 0; k < G.nt; ++k) CHECK(std::abs(H.b[G.index(k, 0, 0)]) < 1e-12);
}

TEST_CASE("Green disc identity") {
    auto abs2 = [](cplx, cplx z) { return std::norm(z); };
    auto one = [](cplx, cplx) { return 1.0; };
    for (double r : {0.2, 0.5, 0.9}) {
        const GreenIdentity g = green_disc_identity(abs2, one, {0.3, 0.1}, r);
        CHECK(std::abs(g.lhs - 1.0) < 1e-9);
        CHECK(std::abs(g.rhs - 1.0) < 1e-9);
        const GreenIdentity h = green_disc_identity([](cplx, cplx z) { return z.real(); }, [](cplx, cplx) { return 0.0; }, {0, 0}, r);
        CHECK(std::abs(h.lhs) < 1e-9);
        CHECK(std::abs(h.rhs) < 1e-12);
        const GreenIdentity q = green_disc_identity([](cplx, cplx z) { return std::norm(z) * std::norm(z); },
                                                    [](cplx, cplx z) { return 4.0 * std::norm(z); }, {0, 0}, r);
        CHECK(std::abs(q.lhs - r * r) < 1e-9);
        CHECK(std::abs(q.rhs - r * r) < 1e-9);
    }
    CHECK_THROWS_AS(green_disc_identity(abs2, one, {0, 0}, 0.0), DomainError);
}

TEST_CASE("sub-mean-value tester") {
    PlaneSamples s;
    s.x0 = -1;
    s.y0 = -1;
    s.h = 0.05;
    s.nx = s.ny = 41;
    auto fill = [&](auto f) {
        s.values.assign(41 * 41, 0.0);
        for (int i = 0; i < 41; ++i)
            for (int j = 0; j < 41; ++j) s.values[i * 41 + j] = f(s.x0 + i * s.h, s.y0 + j * s.h);
    };
    fill([](double x, double) { return x; });
    SubmeanReport re = submeanvalue_test(s, {0.1, 0.3}, 1e-12);
    CHECK(re.pass);
    CHECK(std::abs(re.min_slack) < 1e-12);
    fill([](double x, double y) { return x * x + y * y; });
    re = submeanvalue_test(s, {0.1, 0.3});
    CHECK(re.pass);
    CHECK(re.min_slack > 0.0);
    fill([](double x, double y) { return -(x * x + y * y); });
    CHECK_FALSE(submeanvalue_test(s, {0.1, 0.3}).pass);
    CHECK_THROWS_AS(submeanvalue_test(s, {1.5}), DomainError);
}

}
