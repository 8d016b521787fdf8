#include <cmath>

#include "doctest.h"
#include "hcma/error.hpp"
#include "hcma/local_model.hpp"
#include "hcma/sharp_family.hpp"

using namespace hcma;

TEST_SUITE("sharp_family") {

TEST_CASE("point values") {
    const SharpFamilyParams p{1.0};
    CHECK(eval_family(p, 0.0, {0.3, 0.2}) == 0.0);
    CHECK(eval_family(SharpFamilyParams{0.2}, 0.7, {0.0, 0.4}) == 0.0);
    CHECK(eval_family(p, 1.0, {0.5, 0.0}) == -0.25);
    CHECK(eval_family(p, 0.4, {0.3, 0.1}) == eval_family(p, 0.4, {-0.3, -0.1}));
    CHECK_THROWS_AS(eval_family(p, 1.5, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(eval_family(SharpFamilyParams{0.0}, 0.5, {0.0, 0.0}), DomainError);
}

TEST_CASE("closed-form Hessian is degenerate with c = eps/(eps+t)") {
    const HessianEntry h = family_hessian_closed_form(SharpFamilyParams{1.0}, 0.5, {0.3, 0.0});
    CHECK(std::abs(h.det()) < 1e-15);
    for (double e : {0.01, 0.5, 1.0, 3.0})
        for (double t : {0.0, 0.25, 1.0}) {
            const HessianEntry g = family_hessian_closed_form(SharpFamilyParams{e}, t, {0.41, -0.2});
            CHECK(g.c == doctest::Approx(e / (e + t)).epsilon(1e-14));
            CHECK(std::abs(g.det()) <= 1e-12 * (1.0 + g.a * g.c));
        }
    const HessianEntry z = family_hessian_closed_form(SharpFamilyParams{1.0}, 0.3, {0.0, 0.7});
    CHECK(z.a == 0.0);
    CHECK(z.b == std::complex<double>(0.0, 0.0));
    CHECK(z.det() == 0.0);
}

TEST_CASE("sharpness limit table") {
    const auto rows = sharpness_limit({1.0, 0.01, 1e-8});
    CHECK(rows[0].two_plus_vzzbar == doctest::Approx(1.5));
    CHECK(rows[0].abs_vzz == doctest::Approx(0.5));
    CHECK(rows[0].margin == doctest::Approx(1.0));
    CHECK(rows[1].two_plus_vzzbar == doctest::Approx(1.00990099).epsilon(1e-8));
    CHECK(rows[1].abs_vzz == doctest::Approx(0.99009901).epsilon(1e-8));
    CHECK(rows[1].margin == doctest::Approx(0.01980198).epsilon(1e-7));
    CHECK(rows[2].margin < 1e-7);
    CHECK(rows[2].margin >= 0.0);
    CHECK_THROWS_AS(sharpness_limit({-1.0}), DomainError);
}

TEST_CASE("discrete determinant matches the numpy replica") {
    // tests/oracles/sharp_family_oracle.py
    const double frozen[3] = {1.388622212780e-03, 3.844957649367e-04, 1.012840138879e-04};
    int idx = 0;
    for (int n : {32, 64, 128}) {
        const FamilyCheck c = verify_family(SharpFamilyParams{1.0}, n);
        CHECK(c.max_abs_det == doctest::Approx(frozen[idx++]).epsilon(1e-9));
        CHECK(c.min_c == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c.boundary_t0 == 0.0);
        CHECK(c.boundary_axis == 0.0);
        CHECK(c.max_hessian_error < 12.0 * c.h * c.h);
        CHECK(c.max_abs_det_interior <= c.max_abs_det);
    }
}

TEST_CASE("discrete Hessian is omega-psh up to O(h^2)") {
    for (double e : {0.3, 1.0, 2.0}) {
        const GridSpec G = family_patch(32);
        const GridFunction u = sample_family(SharpFamilyParams{e}, G);
        const PshReport r = is_omega_psh(u, 1.0, 0.0, true);
        CHECK(r.min_eig > -20.0 * G.h() * G.h() / (e * e));
        CHECK(u.symmetry_residual() == 0.0);
    }
    CHECK_THROWS_AS(family_patch(7), ValidationError);
}

}
