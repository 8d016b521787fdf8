#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hcma/error.hpp"
#include "hcma/strip_harmonic.hpp"

using namespace hcma;
using std::numbers::pi;

TEST_SUITE("strip_harmonic") {

TEST_CASE("kernel closed forms") {
    CHECK(poisson_kernel(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    for (double xi : {-2.5, -0.3, 0.0, 0.7, 4.0})
        CHECK(poisson_kernel(xi, 0.5) == doctest::Approx(1.0 / (2.0 * std::cosh(pi * xi))).epsilon(1e-14));
    // 40-digit mpmath value
    CHECK(std::abs(poisson_kernel(3.0, 0.25) - 5.706968889620031969888211e-05) < 1e-18);
    for (double eta : {0.01, 0.5, 0.99})
        for (double xi : {-50.0, -1.0, 0.0, 3.0, 200.0}) CHECK(poisson_kernel(xi, eta) > 0.0);
}

TEST_CASE("kernel rejects boundary points") {
    CHECK_THROWS_AS(poisson_kernel(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(poisson_kernel(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(poisson_kernel(0.0, -0.2), DomainError);
}

TEST_CASE("extension of constants and of Im s") {
    QuadratureSpec q;
    StripBoundaryData one{[](double) { return 1.0; }, [](double) { return 1.0; }, 0.0, 1.0};
    StripBoundaryData im{[](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, 1.0};
    for (double eta : {0.1, 0.3, 0.5, 0.77, 0.9})
        for (double xi : {-3.0, 0.0, 1.5}) {
            const QuadResult r = harmonic_extend_with_error(one, {xi, eta}, q);
            CHECK(std::abs(r.value - 1.0) <= q.tolerance);
            CHECK(r.abserr <= q.tolerance);
            CHECK(std::abs(harmonic_extend(im, {xi, eta}, q) - eta) <= q.tolerance);
        }
}

TEST_CASE("extension is linear in the data") {
    QuadratureSpec q;
    StripBoundaryData d1{[](double t) { return std::sin(t); }, [](double t) { return std::cos(2 * t); }, 0, 1};
    StripBoundaryData d2{[](double t) { return 1.0 / (1 + t * t); }, [](double t) { return std::tanh(t); }, 0, 1};
    StripBoundaryData mix{[&](double t) { return 2.0 * d1.lower(t) - 3.0 * d2.lower(t); },
                          [&](double t) { return 2.0 * d1.upper(t) - 3.0 * d2.upper(t); }, 0, 5};
    const StripPoint p{0.4, 0.35};
    const double lhs = harmonic_extend(mix, p, q);
    const double rhs = 2.0 * harmonic_extend(d1, p, q) - 3.0 * harmonic_extend(d2, p, q);
    CHECK(std::abs(lhs - rhs) <= 2.0 * q.tolerance * 5.0);
}

TEST_CASE("test function values") {
    CHECK(std::abs(test_function({0.0, 0.5}, 3.0)) < 1e-15);
    CHECK(std::abs(test_function({0.0, 0.5}, 40.0)) < 1e-15);
    const auto lim = 1.0 - std::polar(1.0, pi / 4);
    CHECK(std::abs(test_function({0.0, 0.0}, 60.0) - lim) < 1e-12);
    // mpmath: f(20) at lambda = 20
    const auto v = test_function({20.0, 0.0}, 20.0);
    CHECK(v.real() == doctest::Approx(22015752930315.66095230968).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(-0.3535533905932737622004222).epsilon(1e-12));
    const auto w = test_function({30.0, 0.0}, 30.0);
    CHECK(w.real() == doctest::Approx(146088258507969847503.3662).epsilon(1e-14));
    // far right, the stable branch stays bounded by e^{pi lambda/2} + 1
    const auto far = test_function({500.0, 1.0}, 10.0);
    CHECK(std::isfinite(far.real()));
    CHECK(std::abs(far) <= std::exp(5.0 * pi) + 1.0);
    CHECK_THROWS_AS(test_function({0.0, 1.5}, 1.0), DomainError);
}

TEST_CASE("boundary integrals against the high-precision oracle") {
    struct Row { double lam, I, J, K; };
    const Row rows[] = {
        {5, 7.7370462702344346281, 9.0010963467526924893, -6.7381399452030784018},
        {10, 17.726768708884869187, 19.000000426248376986, -16.72676913513238936},
        {20, 37.726760455267365877, 39.000000000000064236, -36.726760455267430114},
        {40, 77.726760455264837314, 79.0, -76.726760455264837314},
    };
    QuadratureSpec q;
    for (const Row& r : rows) {
        const IJKValues v = ijk_functionals(r.lam, q);
        CHECK(std::abs(v.I - r.I) < 1e-8);
        CHECK(std::abs(v.J - r.J) < 1e-8);
        CHECK(std::abs(v.K - r.K) < 1e-8);
        CHECK(std::abs(v.K) <= v.J + q.tolerance);
        CHECK(v.I >= 0.0);
        CHECK(v.err_I <= q.tolerance);
    }
}

TEST_CASE("relative errors shrink along lambda") {
    double prev[3] = {1e9, 1e9, 1e9};
    for (double lam : {5.0, 10.0, 20.0, 40.0}) {
        const IJKValues v = ijk_functionals(lam);
        const double e[3] = {std::abs(v.I / (2 * lam) - 1), std::abs(v.J / (2 * lam) - 1),
                             std::abs(v.K / (-2 * lam) - 1)};
        for (int c = 0; c < 3; ++c) {
            CHECK(e[c] < prev[c]);
            prev[c] = e[c];
        }
    }
    CHECK(prev[0] <= 0.15);
    CHECK(prev[1] <= 0.15);
    CHECK(prev[2] <= 0.15);
}

TEST_CASE("combination signs") {
    const auto c0 = obstruction_combination(0, 0, 1, 10);
    CHECK(c0.value > 0.0);
    CHECK(c0.value == doctest::Approx(c0.ijk.I + c0.ijk.J));
    CHECK(c0.psi1 == doctest::Approx(0.5 * (c0.ijk.I + c0.ijk.J)));
    const auto c3 = obstruction_combination(0, 3, 1, 40);
    CHECK(c3.value < 0.0);
    CHECK(std::abs(c3.value / 80.0 + 1.0) <= 0.2);
    const auto c1 = obstruction_combination(0, 1, 1, 40);
    CHECK(std::abs(c1.value / 80.0 - 1.0) <= 0.05);
    CHECK_THROWS_AS(obstruction_combination(-2, 0, 1, 10), DomainError);
    CHECK_THROWS_AS(obstruction_combination(0, 0, 0, 10), DomainError);
}

TEST_CASE("quadrature failure carries the tail bound") {
    QuadratureSpec q;
    q.max_subdivisions = 1;
    q.tolerance = 1e-14;
    try {
        (void)ijk_functionals(40.0, q);
        FAIL("expected QuadratureFailure");
    } catch (const QuadratureFailure& e) {
        CHECK(e.tail_bound() >= 0.0);
    }
}

}
