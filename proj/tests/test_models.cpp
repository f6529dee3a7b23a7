#include <doctest.h>

#include <cmath>

#include "curvlab/algebra.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

TEST_CASE("constant curvature: spectrum, zero case, trace") {
    const Spectrum s = curvature_spectrum(constant_curvature(4, 1.0));
    for (double v : s.values) CHECK(v == doctest::Approx(2.0));

    CHECK(constant_curvature(3, 0.0).norm() == 0.0);

    // S = m(m-1) kappa = 40 for (5, 2)
    CHECK(decompose(constant_curvature(5, 2.0)).S == doctest::Approx(40.0));

    // every sectional curvature equals kappa
    const CurvTensor t = constant_curvature(4, -1.5);
    Rng rng(5, 0);
    for (int c = 0; c < 10; ++c) {
        std::vector<double> x(4), y(4);
        for (int i = 0; i < 4; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        CHECK(sectional(t, x, y) == doctest::Approx(-1.5).epsilon(1e-10));
    }
    CHECK_THROWS_AS(constant_curvature(1, 1.0), domain_error);
}

TEST_CASE("product_sphere_flat: spectra with exact multiplicities") {
    const Spectrum s2r = curvature_spectrum(product_sphere_flat(2, 1.0, 1));
    CHECK(s2r.values[0] == doctest::Approx(0.0));
    CHECK(s2r.values[1] == doctest::Approx(0.0));
    CHECK(s2r.values[2] == doctest::Approx(2.0));

    const Spectrum s3r = curvature_spectrum(product_sphere_flat(3, 1.0, 1));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s3r.values[i]) <= 1e-10);
    for (int i = 3; i < 6; ++i) CHECK(s3r.values[i] == doctest::Approx(2.0));
    CHECK(partial_trace(s3r, 1) == doctest::Approx(0.0));

    const Spectrum t2s2 = curvature_spectrum(product_sphere_flat(2, 1.0, 2));
    for (int i = 0; i < 5; ++i) CHECK(std::abs(t2s2.values[i]) <= 1e-10);
    CHECK(t2s2.values[5] == doctest::Approx(2.0));

    // general multiplicity rule: C(p,2) values at 2/r^2, the rest zero
    const int p = 4, q = 2;
    const double r = 1.7;
    const Spectrum gen = curvature_spectrum(product_sphere_flat(p, r, q));
    const int zeros = binomial2(p + q) - binomial2(p);
    for (int i = 0; i < zeros; ++i) CHECK(std::abs(gen.values[i]) <= 1e-10);
    for (int i = zeros; i < gen.n; ++i)
        CHECK(gen.values[i] == doctest::Approx(2.0 / (r * r)).epsilon(1e-10));
}

TEST_CASE("product_sphere_flat: Ricci block eigenvalues and domain errors") {
    const int p = 3, q = 2;
    const double r = 2.0;
    const SymTwoTensor e = ricci_contraction(product_sphere_flat(p, r, q));
    for (int i = 0; i < p; ++i) CHECK(e(i, i) == doctest::Approx((p - 1) / (r * r)));
    for (int i = p; i < p + q; ++i) CHECK(e(i, i) == doctest::Approx(0.0));

    CHECK_THROWS_AS(product_sphere_flat(1, 1.0, 2), domain_error);
    CHECK_THROWS_AS(product_sphere_flat(2, 0.0, 2), domain_error);
    CHECK_THROWS_AS(product_sphere_flat(2, 1.0, -1), domain_error);
}

TEST_CASE("curvature_from_ricci_3d: round sphere, product, zero") {
    SymTwoTensor round(3);
    for (int i = 0; i < 3; ++i) round.set(i, i, 2.0);
    const CurvTensor s3 = curvature_from_ricci_3d(round);
    CHECK((s3.tensor() - constant_curvature(3, 1.0).tensor()).norm() <= 1e-13);

    SymTwoTensor prod(3);
    prod.set(0, 0, 1.0);
    prod.set(1, 1, 1.0);
    const CurvTensor s2r = curvature_from_ricci_3d(prod);
    CHECK((s2r.tensor() - product_sphere_flat(2, 1.0, 1).tensor()).norm() <= 1e-13);

    CHECK(curvature_from_ricci_3d(SymTwoTensor(3)).norm() == 0.0);
    CHECK_THROWS_AS(curvature_from_ricci_3d(SymTwoTensor(4)), domain_error);
}

TEST_CASE("curvature_from_ricci_3d: right inverse of the Ricci contraction") {
    for (int c = 0; c < 200; ++c) {
        const SymTwoTensor e = random_sym_two_tensor(3, 9500 + c);
        const CurvTensor t = curvature_from_ricci_3d(e);
        const SymTwoTensor back = ricci_contraction(t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(back(i, j) - e(i, j)) <= 1e-12 * std::max(1.0, std::sqrt(e.norm2())));
        CHECK(decompose(t).W.norm() <= 1e-12 * std::max(1.0, t.norm()));
        CHECK(symmetry_residual(t.tensor()) <= 1e-13);
        CHECK(bianchi_residual(t.tensor()) <= 1e-13);
    }
}

TEST_CASE("model constructors pass the curvature invariants tightly") {
    Rng rng(42, 0);
    for (int c = 0; c < 30; ++c) {
        const CurvTensor a = constant_curvature(3 + rng.uniform_int(5), rng.uniform(-2, 2));
        CHECK(symmetry_residual(a.tensor()) <= 1e-13);
        CHECK(bianchi_residual(a.tensor()) <= 1e-13);
        const CurvTensor b =
            product_sphere_flat(2 + rng.uniform_int(3), rng.uniform(0.5, 2.0), rng.uniform_int(3));
        CHECK(symmetry_residual(b.tensor()) <= 1e-13);
        CHECK(bianchi_residual(b.tensor()) <= 1e-13);
    }
}
