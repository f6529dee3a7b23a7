#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curvlab/algebra.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/spectral.hpp"

using namespace curvlab;

TEST_CASE("sym_eigen: small closed forms") {
    Matrix d(3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    const Spectrum s = sym_eigen(d);
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(2.0));
    CHECK(s.values[2] == doctest::Approx(3.0));

    Matrix f(2);
    f(0, 1) = f(1, 0) = 1;
    const Spectrum s2 = sym_eigen(f);
    CHECK(s2.values[0] == doctest::Approx(-1.0));
    CHECK(s2.values[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eigen: trace identities and eigenpairs on random matrices") {
    for (int c = 0; c < 50; ++c) {
        Rng rng(7000 + c, 0);
        const int n = 10;
        Matrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
        const Spectrum s = sym_eigen(a);
        CHECK(std::abs(s.sum() - a.trace()) <= 1e-10 * std::max(1.0, std::abs(a.trace())));
        const double f2 = a.frobenius_norm() * a.frobenius_norm();
        CHECK(std::abs(s.sum_sq() - f2) <= 1e-10 * f2);
        CHECK(std::is_sorted(s.values.begin(), s.values.end()));
        for (int col = 0; col < n; ++col)
            for (int r = 0; r < n; ++r) {
                double mv = 0;
                for (int k = 0; k < n; ++k) mv += a(r, k) * s.vectors(k, col);
                CHECK(std::abs(mv - s.values[col] * s.vectors(r, col)) <=
                      1e-9 * std::max(1.0, s.op_norm()));
            }
    }
}

TEST_CASE("sym_eigen: rejects non-finite input") {
    Matrix bad(2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sym_eigen(bad), numeric_error);
}

TEST_CASE("partial_trace: model-space spectra") {
    // S^3 x R has spectrum (0,0,0,2,2,2)
    const Spectrum s = curvature_spectrum(product_sphere_flat(3, 1.0, 1));
    CHECK(partial_trace(s, 2) == doctest::Approx(0.0));
    CHECK(partial_trace(s, 6) == doctest::Approx(1.0));
    // constant curvature kappa=1, m=4: all partial traces equal 2
    const Spectrum c = curvature_spectrum(constant_curvature(4, 1.0));
    for (int k = 1; k <= 6; ++k) CHECK(partial_trace(c, k) == doctest::Approx(2.0));
    CHECK_THROWS_AS(partial_trace(s, 0), domain_error);
    CHECK_THROWS_AS(partial_trace(s, 7), domain_error);
}

TEST_CASE("weighted_sum_lower_bound: hand case and equality case") {
    const BoundReport r = weighted_sum_lower_bound({1, 2, 3}, {1, 1, 1}, 2);
    CHECK(r.lhs == doctest::Approx(6.0));
    CHECK(r.rhs == doctest::Approx(4.5));
    CHECK(r.applicable);
    CHECK(r.satisfied);

    // constant a: lhs = c * sum(b) = rhs exactly
    Rng rng(31, 0);
    std::vector<double> b(6);
    for (double& v : b) v = rng.uniform(0.4, 0.6);  // pinched enough for k=2
    const double c = 2.5;
    const BoundReport eq = weighted_sum_lower_bound(std::vector<double>(6, c), b, 2);
    CHECK(eq.applicable);
    CHECK(std::abs(eq.slack) <= 1e-13 * std::abs(eq.lhs));

    CHECK_THROWS_AS(weighted_sum_lower_bound({2, 1, 3}, {1, 1, 1}, 2), domain_error);
    CHECK_THROWS_AS(weighted_sum_lower_bound({1, 2, 3}, {1, 1, 1}, 3), domain_error);

    // hypothesis violation is reported, not assumed away
    const BoundReport na = weighted_sum_lower_bound({1, 2, 3, 4}, {10, 0, 0, 0}, 2);
    CHECK_FALSE(na.applicable);
}

TEST_CASE("weighted_sum_lower_bound: randomized oracle with enforced hypothesis") {
    for (int c = 0; c < 10000; ++c) {
        Rng rng(40000 + c, 0);
        const int n = 3 + rng.uniform_int(10);
        const int k = 1 + rng.uniform_int(n - 1);
        std::vector<double> a(n), b(n);
        for (double& v : a) v = rng.uniform(-3, 3);
        std::sort(a.begin(), a.end());
        for (double& v : b) v = rng.uniform(0, 1);
        double bsum = 0, bmax = 0;
        for (double v : b) {
            bsum += v;
            bmax = std::max(bmax, v);
        }
        const double need = (k * bmax - bsum) / (n - k);
        if (need > 0)
            for (double& v : b) v += need + 1e-9;
        const BoundReport r = weighted_sum_lower_bound(a, b, k);
        REQUIRE(r.applicable);
        REQUIRE(r.satisfied);
    }
}

TEST_CASE("weighted_sum_lower_bound_real: floor rule") {
    const BoundReport r = weighted_sum_lower_bound_real({1, 2, 3}, {1, 1, 1}, 2.9);
    CHECK(r.rhs == doctest::Approx(4.5));  // floor(2.9) = 2
}

TEST_CASE("knonneg_trace_bound: hand case, zero case, randomized oracle") {
    const BoundReport r = knonneg_trace_bound({-1, 1, 1, 1}, 2);
    CHECK(r.lhs == doctest::Approx(2.0));
    CHECK(r.rhs == doctest::Approx(0.5));
    CHECK(r.applicable);
    CHECK(r.satisfied);

    const BoundReport z = knonneg_trace_bound({0, 0, 0}, 1);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.slack == 0.0);

    CHECK_THROWS_AS(knonneg_trace_bound({1, 0, 2}, 1), domain_error);

    for (int c = 0; c < 10000; ++c) {
        Rng rng(50000 + c, 0);
        const int n = 2 + rng.uniform_int(11);
        const int k = 1 + rng.uniform_int(n - 1);
        std::vector<double> a(n);
        for (double& v : a) v = rng.uniform(-2, 2);
        std::sort(a.begin(), a.end());
        double prefix = 0;
        for (int i = 0; i < k; ++i) prefix += a[i];
        if (prefix < 0)
            for (double& v : a) v -= prefix / k - 1e-12;
        const BoundReport rr = knonneg_trace_bound(a, k);
        REQUIRE(rr.applicable);
        REQUIRE(rr.satisfied);
    }
}

TEST_CASE("pinching_check: model-space values") {
    // constant curvature kappa=1, m=4, k=1: lhs = 1*6*12^2 = 864, rhs = 24
    const BoundReport r = pinching_check(constant_curvature(4, 1.0), 1);
    CHECK(r.lhs == doctest::Approx(864.0));
    CHECK(r.rhs == doctest::Approx(24.0));
    CHECK(r.applicable);
    CHECK(r.satisfied);

    // T^2 x S^2: S = 2, lhs = 24, rhs = 4
    const BoundReport p = pinching_check(product_sphere_flat(2, 1.0, 2), 1);
    CHECK(p.lhs == doctest::Approx(24.0));
    CHECK(p.rhs == doctest::Approx(4.0));
    CHECK(p.satisfied);

    const BoundReport z = pinching_check(CurvTensor::zero(4), 3);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(z.slack == 0.0);

    CHECK_THROWS_AS(pinching_check(constant_curvature(4, 1.0), 0), domain_error);
    CHECK_THROWS_AS(pinching_check(constant_curvature(4, 1.0), 6), domain_error);
}

TEST_CASE("partial trace is nondecreasing in k") {
    for (int m : {3, 4, 5}) {
        for (int c = 0; c < 200; ++c) {
            const Spectrum s = curvature_spectrum(random_curvature_tensor(m, 60000 + c));
            for (int k = 2; k <= s.n; ++k)
                CHECK(partial_trace(s, k) >= partial_trace(s, k - 1) - 1e-13 * s.op_norm());
        }
    }
}
