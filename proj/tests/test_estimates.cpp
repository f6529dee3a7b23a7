#include <doctest.h>

#include <cmath>

#include "curvlab/estimates.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

TEST_CASE("weyl bound: constant-curvature background has C = 2") {
    const int m = 5;
    const CurvTensor w = decompose(random_curvature_tensor(m, 10)).W;
    const CurvTensor r = constant_curvature(m, 1.0);
    const BoundReport rep = weyl_bound_slack(w, r);
    // rhs = 2(m-1) * C * |W|^2 with C = partial trace at floor((m-1)/2) = 2
    CHECK(rep.rhs == doctest::Approx(16.0 * w.norm2()).epsilon(1e-12));
    CHECK(rep.satisfied);

    const BoundReport zero = weyl_bound_slack(CurvTensor::zero(m), r);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    CHECK(zero.slack == 0.0);

    CHECK_THROWS_AS(weyl_bound_slack(random_curvature_tensor(m, 11), r), domain_error);
}

TEST_CASE("weyl bound: random backgrounds across dimensions") {
    for (int m : {4, 5, 6, 7}) {
        for (int c = 0; c < 60; ++c) {
            const CurvTensor w = decompose(random_curvature_tensor(m, 6000 * m + c)).W;
            const CurvTensor r = random_curvature_tensor(m, 6100 * m + c);
            CHECK(weyl_bound_slack(w, r).satisfied);
        }
    }
}

TEST_CASE("traceless bound: frozen equality case at m=4, constant curvature") {
    const int m = 4;
    SymTwoTensor z(m);
    z.set(0, 0, 1.0);
    z.set(1, 1, -1.0);
    const CurvTensor r = constant_curvature(m, 1.0);
    const BoundReport rep = traceless_bound_slack(z, r);
    // eigenframe oracle: sum over ordered pairs of R_ijij (zeta_i - zeta_j)^2
    //   = 2 * (4 + 1 + 1 + 1 + 1 + 0) = 16; rhs = 2m C |Z|^2 = 8 * 1 * 2 = 16
    CHECK(rep.lhs == doctest::Approx(16.0));
    CHECK(rep.rhs == doctest::Approx(16.0));
    CHECK(rep.satisfied);

    SymTwoTensor zero(m);
    const BoundReport zr = traceless_bound_slack(zero, r);
    CHECK(zr.lhs == 0.0);
    CHECK(zr.rhs == 0.0);

    SymTwoTensor bad(m);
    bad.set(0, 0, 1.0);
    CHECK_THROWS_AS(traceless_bound_slack(bad, r), domain_error);
}

TEST_CASE("traceless bound: random pairs across dimensions") {
    for (int m : {3, 4, 5, 6, 7}) {
        for (int c = 0; c < 60; ++c) {
            const SymTwoTensor z = random_traceless_sym(m, 6200 * m + c);
            const CurvTensor r = random_curvature_tensor(m, 6300 * m + c);
            CHECK(traceless_bound_slack(z, r).satisfied);
        }
    }
}

TEST_CASE("projective gamma bound: degenerate and generic cases") {
    const CurvTensor cc = constant_curvature(4, 1.0);
    const TachibanaReport deg = tachibana_slack(cc, cc);
    CHECK(std::abs(deg.report.lhs) <= 1e-10);
    CHECK(std::abs(deg.report.rhs) <= 1e-10);

    for (int c = 0; c < 60; ++c) {
        const CurvTensor t = random_curvature_tensor(4, 6400 + c);
        const TachibanaReport rep = tachibana_slack(t, constant_curvature(4, 1.0));
        CHECK(rep.report.satisfied);
        // C = partial trace at floor(3/2) = 1 equals 2 for the round background
        const double p2 = pseudo_projective(t).norm2();
        CHECK(rep.report.rhs == doctest::Approx(12.0 * p2).epsilon(1e-10));
        // the split of the left side matches the full quadratic form
        CHECK(std::abs(rep.report.lhs - rep.gamma_weyl - rep.gamma_traceless) <=
              1e-9 * rep.report.scale);
    }
}

TEST_CASE("projective gamma bound: random pairs across dimensions") {
    for (int m : {3, 4, 5, 6, 7}) {
        for (int c = 0; c < 60; ++c) {
            const CurvTensor t = random_curvature_tensor(m, 6500 * m + c);
            const CurvTensor r = random_curvature_tensor(m, 6600 * m + c);
            CHECK(tachibana_slack(t, r).report.satisfied);
        }
    }
}

TEST_CASE("hamilton_3d_form: frozen values and symmetry") {
    CHECK(hamilton_3d_form(1, 1, 1) == doctest::Approx(0.0));
    CHECK(hamilton_3d_form(0, 1, 1) == doctest::Approx(0.0));
    CHECK(hamilton_3d_form(1, 2, 3) == doctest::Approx(48.0));
    Rng rng(77, 0);
    for (int c = 0; c < 100; ++c) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), d = rng.uniform(-3, 3);
        const double v = hamilton_3d_form(a, b, d);
        CHECK(v == doctest::Approx(hamilton_3d_form(b, a, d)));
        CHECK(v == doctest::Approx(hamilton_3d_form(d, b, a)));
        CHECK(v == doctest::Approx(hamilton_3d_form(a, d, b)));
    }
}

TEST_CASE("hamilton_3d_form: matches the gamma quadratic on prescribed-Ricci tensors") {
    for (int c = 0; c < 200; ++c) {
        Rng rng(7000 + c, 0);
        const double l = rng.uniform(-2, 3), mu = rng.uniform(-2, 3), nu = rng.uniform(-2, 3);
        SymTwoTensor e(3);
        e.set(0, 0, l);
        e.set(1, 1, mu);
        e.set(2, 2, nu);
        const CurvTensor t = curvature_from_ricci_3d(e);
        const GammaRoutes routes = gamma_quadratic(t.tensor(), t.tensor(), t);
        const double expect = hamilton_3d_form(l, mu, nu);
        const double scale = std::max({std::abs(expect), t.norm2(), 1.0});
        CHECK(std::abs(routes.route_def - expect) <= 1e-9 * scale);
        CHECK(std::abs(routes.route_hat - expect) <= 1e-9 * scale);
    }
}

TEST_CASE("hamilton_3d_form: nonnegative on the octant, zero classification") {
    Rng rng(88, 0);
    for (int c = 0; c < 2000; ++c) {
        const double a = rng.uniform(0, 5), b = rng.uniform(0, 5), d = rng.uniform(0, 5);
        CHECK(hamilton_3d_form(a, b, d) >= -1e-12 * std::max(1.0, a * a * a + b * b * b + d * d * d));
    }
    for (int c = 0; c < 100; ++c) {
        const double v = rng.uniform(0.1, 5);
        CHECK(std::abs(hamilton_3d_form(v, v, v)) <= 1e-12 * v * v * v);
        CHECK(std::abs(hamilton_3d_form(0, v, v)) <= 1e-12 * v * v * v);
        // interior non-degenerate points are strictly positive
        CHECK(hamilton_3d_form(v, 2 * v, 4 * v) > 0.0);
    }
}
