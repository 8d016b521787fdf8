#pragma once

#include <complex>
#include <functional>

#include "hcma/quadrature.hpp"

namespace hcma {

// Point xi + i*eta of the closed strip 0 <= eta <= 1.
struct StripPoint {
    double xi = 0.0;
    double eta = 0.5;
};

struct StripBoundaryData {
    std::function<double(double)> lower;  // values on Im s = 0
    std::function<double(double)> upper;  // values on Im s = 1
    double decay_hint = 0.0;              // extra breakpoints at +-decay_hint
    double sup_bound = 1.0;               // bound on |lower|, |upper|; sets the truncation radius
};

struct IJKValues {
    double I = 0.0;
    double J = 0.0;
    double K = 0.0;
    double lambda = 0.0;
    double err_I = 0.0;
    double err_J = 0.0;
    double err_K = 0.0;
};

struct CombinationValue {
    double value = 0.0;  // r(I+J) + pJ + |q|K
    double psi1 = 0.0;   // (I+J)/2
    double psi2 = 0.0;   // J/2
    double psi3 = 0.0;   // K/2
    IJKValues ijk;
};

double poisson_kernel(double xi, double eta);

// Truncation radius for the real-line integrals: the kernel tail beyond it,
// weighted by sup_bound, is below tol/4.
double strip_truncation(double sup_bound, double centre, double tol, double min_radius);

QuadResult harmonic_extend_with_error(const StripBoundaryData& data, StripPoint p,
                                      const QuadratureSpec& quad = {});
double harmonic_extend(const StripBoundaryData& data, StripPoint p,
                       const QuadratureSpec& quad = {});

// (e^{pi s/2} - e^{pi i/4}) / (1 + e^{pi (s - lambda)/2}); vanishes at s = i/2.
std::complex<double> test_function(std::complex<double> s, double lambda);

IJKValues ijk_functionals(double lambda, const QuadratureSpec& quad = {});

CombinationValue obstruction_combination(double p, double q_abs, double r, double lambda,
                                     const QuadratureSpec& quad = {});

}  // namespace hcma
