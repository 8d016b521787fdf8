#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hcma {

struct QuadratureSpec {
    double tolerance = 1e-10;
    std::size_t max_subdivisions = std::size_t{1} << 20;
    double truncation = 40.0;  // minimum half-width for integrals over the real line
};

struct QuadResult {
    double value = 0.0;
    double abserr = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b] to absolute tolerance tol.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, std::size_t max_subdivisions);

// Integral over consecutive breakpoints; tol is shared evenly between pieces.
QuadResult integrate_pieces(const std::function<double(double)>& f,
                            std::vector<double> breaks, double tol,
                            std::size_t max_subdivisions);

}  // namespace hcma
