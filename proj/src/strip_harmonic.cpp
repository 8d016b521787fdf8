#include "hcma/strip_harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hcma/error.hpp"

namespace hcma {

namespace {

constexpr double pi = std::numbers::pi;

void check_spec(const QuadratureSpec& q) {
    if (!(q.tolerance > 0.0) || !std::isfinite(q.tolerance))
        throw ValidationError("quadrature tolerance must be positive and finite");
    if (q.max_subdivisions == 0) throw ValidationError("max_subdivisions must be positive");
    if (!(q.truncation >= 0.0)) throw ValidationError("truncation radius must be nonnegative");
}

// Real-line integral of f split at the given interior points and +-T.
QuadResult line_integral(const std::function<double(double)>& f, double T,
                         std::vector<double> interior, const QuadratureSpec& quad) {
    std::vector<double> breaks{-T, T};
    for (double b : interior)
        if (b > -T && b < T) breaks.push_back(b);
    // tails are bounded separately (<= tol/4), so the pieces share the remainder
    return integrate_pieces(f, breaks, 0.5 * quad.tolerance, quad.max_subdivisions);
}

}  // namespace

double poisson_kernel(double xi, double eta) {
    if (!(eta > 0.0 && eta < 1.0))
        throw DomainError("poisson_kernel: eta must lie in (0, 1)");
    if (!std::isfinite(xi)) throw DomainError("poisson_kernel: xi must be finite");
    const double ax = std::abs(pi * xi);
    const double s = std::sin(pi * eta);
    if (ax > 30.0) {
        // cosh overflows long before the ratio does; use e^{-|x|} form
        const double e = std::exp(-ax);
        return s * e / (1.0 + e * e - 2.0 * e * std::cos(pi * eta));
    }
    return s / (2.0 * (std::cosh(pi * xi) - std::cos(pi * eta)));
}

double strip_truncation(double sup_bound, double centre, double tol, double min_radius) {
    // P(tau, eta) <= 2 sin(pi eta) e^{-pi |tau|} for |tau| >= 1, two kernels, two sides
    const double s = std::max(sup_bound, 1e-300);
    const double R = std::max(1.0, std::log(32.0 * s / (pi * tol)) / pi);
    return std::max(min_radius, std::abs(centre) + R);
}

QuadResult harmonic_extend_with_error(const StripBoundaryData& data, StripPoint p,
                                      const QuadratureSpec& quad) {
    check_spec(quad);
    if (!(p.eta > 0.0 && p.eta < 1.0))
        throw DomainError("harmonic_extend: point must be strictly inside the strip");
    if (!data.lower || !data.upper)
        throw ValidationError("harmonic_extend: boundary data functions are missing");
    const double T = strip_truncation(data.sup_bound, p.xi, quad.tolerance,
                                      std::max(quad.truncation, std::abs(data.decay_hint)));
    auto f = [&](double t) {
        return poisson_kernel(t - p.xi, p.eta) * data.lower(t) +
               poisson_kernel(t - p.xi, 1.0 - p.eta) * data.upper(t);
    };
    std::vector<double> interior{p.xi};
    if (data.decay_hint != 0.0) {
        interior.push_back(data.decay_hint);
        interior.push_back(-data.decay_hint);
    }
    QuadResult r = line_integral(f, T, interior, quad);
    const double tail = 8.0 * data.sup_bound * std::exp(-pi * (T - std::abs(p.xi))) / pi;
    r.abserr += tail;
    if (r.abserr > quad.tolerance)
        throw QuadratureFailure("harmonic_extend: error estimate exceeds tolerance", tail);
    return r;
}

double harmonic_extend(const StripBoundaryData& data, StripPoint p, const QuadratureSpec& quad) {
    return harmonic_extend_with_error(data, p, quad).value;
}

std::complex<double> test_function(std::complex<double> s, double lambda) {
    if (s.imag() < 0.0 || s.imag() > 1.0)
        throw DomainError("test_function: s must lie in the closed strip");
    const std::complex<double> w = std::polar(1.0, pi / 4.0);
    if (s.real() <= lambda) {
        return (std::exp(0.5 * pi * s) - w) / (1.0 + std::exp(0.5 * pi * (s - lambda)));
    }
    const std::complex<double> e = std::exp(-0.5 * pi * (s - lambda));
    return (std::exp(0.5 * pi * lambda) - w * e) / (e + 1.0);
}

IJKValues ijk_functionals(double lambda, const QuadratureSpec& quad) {
    check_spec(quad);
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("ijk_functionals: lambda must be positive");
    const double sup = std::pow(std::exp(0.5 * pi * lambda) + 1.0, 2);
    // 1/cosh(pi t) <= 2 e^{-pi|t|}: tail of sup * weight is 4 sup e^{-pi T} / pi
    const double T = std::max({quad.truncation, lambda + 1.0,
                               std::log(16.0 * sup / (pi * quad.tolerance)) / pi});
    const double tail = 4.0 * sup * std::exp(-pi * T) / pi;
    auto weight = [](double t) { return 1.0 / std::cosh(pi * t); };
    const std::vector<double> interior{0.0, 0.5 * lambda, lambda};

    IJKValues v;
    v.lambda = lambda;
    auto run = [&](auto&& g, double& value, double& err) {
        QuadResult r = line_integral(g, T, interior, quad);
        value = r.value;
        err = r.abserr + tail;
        if (err > quad.tolerance)
            throw QuadratureFailure("ijk_functionals: error estimate exceeds tolerance", tail);
    };
    run([&](double t) { return std::norm(test_function({t, 0.0}, lambda)) * weight(t); }, v.I,
        v.err_I);
    run([&](double t) { return std::norm(test_function({t, 1.0}, lambda)) * weight(t); }, v.J,
        v.err_J);
    run(
        [&](double t) {
            const auto f = test_function({t, 1.0}, lambda);
            return (f * f).real() * weight(t);
        },
        v.K, v.err_K);
    return v;
}

CombinationValue obstruction_combination(double p, double q_abs, double r, double lambda,
                                         const QuadratureSpec& quad) {
    if (!(r > 0.0)) throw DomainError("obstruction_combination: r must be positive");
    if (!(p > -r)) throw DomainError("obstruction_combination: requires p > -r");
    if (!(q_abs >= 0.0)) throw DomainError("obstruction_combination: |q| must be nonnegative");
    CombinationValue c;
    c.ijk = ijk_functionals(lambda, quad);
    c.psi1 = 0.5 * (c.ijk.I + c.ijk.J);
    c.psi2 = 0.5 * c.ijk.J;
    c.psi3 = 0.5 * c.ijk.K;
    c.value = 2.0 * (r * c.psi1 + p * c.psi2 + q_abs * c.psi3);
    return c;
}

}  // namespace hcma
