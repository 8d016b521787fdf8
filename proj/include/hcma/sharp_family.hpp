#pragma once

#include <complex>
#include <vector>

#include "hcma/grid.hpp"

namespace hcma {

// u(t, z) = -(2t / (eps + t)) (Re z)^2 with omega11 = 1.
struct SharpFamilyParams {
    double epsilon = 1.0;
    void validate() const;
};

struct HessianEntry {
    double a = 0.0;
    std::complex<double> b;
    double c = 0.0;
    double det() const { return a * c - std::norm(b); }
};

double eval_family(const SharpFamilyParams& params, double t, std::complex<double> z);
HessianEntry family_hessian_closed_form(const SharpFamilyParams& params, double t,
                                        std::complex<double> z);

struct SharpnessRow {
    double epsilon = 0.0;
    double two_plus_vzzbar = 0.0;  // 2 + v_zzbar(0)
    double abs_vzz = 0.0;          // |v_zz(0)|
    double margin = 0.0;           // obstruction margin of the t = 1 slice
};

std::vector<SharpnessRow> sharpness_limit(const std::vector<double>& eps_sequence);

// Patch over x in [-1/2, 1/2], y periodic with period 1, h = 1/n, nt = n + 1.
GridSpec family_patch(int n);
GridFunction sample_family(const SharpFamilyParams& params, const GridSpec& grid);

struct FamilyCheck {
    int n = 0;
    double h = 0.0;
    double max_abs_det = 0.0;      // over every node
    double max_abs_det_interior = 0.0;
    double min_c = 0.0;
    double expected_min_c = 0.0;   // eps / (eps + 1)
    double max_hessian_error = 0.0;
    double boundary_t0 = 0.0;      // max |u| on the t = 0 slice
    double boundary_axis = 0.0;    // max |u| on Re z = 0
    double min_eig = 0.0;
};

FamilyCheck verify_family(const SharpFamilyParams& params, int n);

}  // namespace hcma
