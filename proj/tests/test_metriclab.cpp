#include <doctest.h>

#include <array>
#include <cmath>

#include "curvlab/algebra.hpp"
#include "curvlab/polymetric.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

namespace {

PolynomialMetric bump_metric(int m, double eps) {
    // g = id + eps x1^2 (e2 x e2)
    std::vector<Polynomial> e;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Polynomial p(m);
            p.add_term(std::vector<int>(m, 0), i == j ? 1.0 : 0.0);
            if (i == 1 && j == 1) {
                std::vector<int> q(m, 0);
                q[0] = 2;
                p.add_term(q, eps);
            }
            e.push_back(std::move(p));
        }
    return PolynomialMetric(m, std::move(e), 0.9);
}

}  // namespace

TEST_CASE("polynomial: evaluation, derivative, product, rotation") {
    Polynomial p(2);
    p.add_term({2, 1}, 3.0);  // 3 x^2 y
    p.add_term({0, 0}, -1.0);
    const std::array<double, 2> x{2.0, 0.5};
    CHECK(p.eval(x) == doctest::Approx(3.0 * 4.0 * 0.5 - 1.0));

    const Polynomial dx = p.derivative(0);  // 6 x y
    CHECK(dx.eval(x) == doctest::Approx(6.0));
    CHECK(p.derivative(1).eval(x) == doctest::Approx(12.0));

    const Polynomial prod = dx * dx;  // 36 x^2 y^2
    CHECK(prod.eval(x) == doctest::Approx(36.0));

    // substitution by a rotation preserves values: p(Q y) at y = Q^T x
    Matrix q(2);
    const double c = std::cos(0.3), s = std::sin(0.3);
    q(0, 0) = c;
    q(0, 1) = -s;
    q(1, 0) = s;
    q(1, 1) = c;
    const Polynomial pq = p.substitute_linear(q);
    const std::array<double, 2> y{c * x[0] + s * x[1], -s * x[0] + c * x[1]};
    CHECK(pq.eval(y) == doctest::Approx(p.eval(x)));
}

TEST_CASE("polynomial metric: validation catches indefiniteness") {
    std::vector<Polynomial> e;
    const int m = 2;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Polynomial p(m);
            p.add_term(std::vector<int>(m, 0), i == j ? 1.0 : 0.0);
            if (i == 0 && j == 0) {
                p.add_term({2, 0}, -10.0);
                p.add_term({0, 2}, -10.0);
            }
            e.push_back(std::move(p));
        }
    CHECK_THROWS_AS(PolynomialMetric(m, std::move(e), 1.0), decomposition_error);
}

TEST_CASE("riemann_at: flat metric and the quadratic bump hand formula") {
    const int m = 4;
    const std::vector<double> x0(m, 0.0);
    CHECK(riemann_at(PolynomialMetric::euclidean(m), x0).riem.norm() <= 1e-14);

    const double eps = 1e-3;
    const PolynomialMetric pm = bump_metric(m, eps);
    const double r1212 = riemann_at(pm, x0).riem.at(0, 1, 0, 1);
    CHECK(std::abs(r1212 + eps) <= 1e-8 * eps);  // R_1212(0) = -eps

    std::vector<double> outside(m, 0.0);
    outside[0] = 2.0;
    CHECK_THROWS_AS(riemann_at(pm, outside), domain_error);
}

TEST_CASE("riemann_at: degree-4 round truncation reproduces sectional curvature") {
    for (double kappa : {1.0, 0.5}) {
        const int m = 3;
        const PolynomialMetric pm = PolynomialMetric::sphere_normal_truncation(m, kappa);
        const std::vector<double> x0(m, 0.0);
        const CurvTensor t = riemann_orthonormal_at(pm, x0);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                CHECK(std::abs(t.at(i, j, i, j) - kappa) <= 1e-6 * kappa);
        // first Bianchi holds at the stated tolerance
        CHECK(bianchi_residual(t.tensor()) <= 1e-9);
        CHECK(symmetry_residual(t.tensor()) <= 1e-9);

        // away from the base point the truncation still carries valid curvature
        std::vector<double> x(m, 0.0);
        x[0] = 0.15;
        x[2] = -0.1;
        const PointCurvature pc = riemann_at(pm, x);
        CHECK(bianchi_residual(pc.riem.tensor()) <= 1e-9);
    }
}

TEST_CASE("nabla_riemann_at: flat, locally symmetric, generic") {
    const int m = 3;
    const std::vector<double> x0(m, 0.0);

    const CurvJet flat = nabla_riemann_at(PolynomialMetric::euclidean(m), x0, 1e-2);
    CHECK(flat.D.norm() <= 1e-12);

    const CurvJet sym =
        nabla_riemann_at(PolynomialMetric::sphere_normal_truncation(m, 1.0), x0, 1e-2);
    CHECK(sym.D.norm() <= 1e-5);

    const PolynomialMetric pm = PolynomialMetric::random_perturbation(4, 0.05, 31);
    const std::vector<double> y0(4, 0.0);
    const CurvJet j = nabla_riemann_at(pm, y0, 1e-2);
    CHECK(j.D.norm() > 1e-4);  // generic metrics are not locally symmetric
    CHECK(second_bianchi(j.D).norm() <= 1e-6 * std::max(j.D.norm(), j.T.norm()));
    CHECK(j.satisfies_B2);
}

TEST_CASE("nabla_riemann_at: finite-difference order is at least 3.5") {
    const PolynomialMetric pm = PolynomialMetric::random_perturbation(3, 0.05, 77);
    const std::vector<double> x0(3, 0.0);
    std::vector<double> hs{4e-2, 2e-2, 1e-2, 5e-3};
    std::vector<double> logres;
    for (double h : hs) {
        const CurvJet j = nabla_riemann_at(pm, x0, h);
        logres.push_back(std::log(second_bianchi(j.D).norm() / j.D.norm()));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double lx = std::log(hs[i]);
        sx += lx;
        sy += logres[i];
        sxx += lx * lx;
        sxy += lx * logres[i];
    }
    const double n = static_cast<double>(hs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 3.5);
}

TEST_CASE("bochner_residual: flat and locally symmetric metrics close trivially") {
    const int m = 3;
    const std::vector<double> x0(m, 0.0);
    const BochnerResiduals flat = bochner_residual(PolynomialMetric::euclidean(m), x0, 1e-2);
    CHECK(std::abs(flat.residual_plus) <= 1e-12);
    CHECK(std::abs(flat.residual_minus) <= 1e-12);

    const BochnerResiduals sym =
        bochner_residual(PolynomialMetric::sphere_normal_truncation(m, 1.0), x0, 1e-2);
    CHECK(std::abs(sym.gamma_TT) <= 1e-4);
    CHECK(std::abs(sym.div_T2) <= 1e-4);
    CHECK(std::abs(sym.residual_plus) <= 1e-4);
    CHECK(std::abs(sym.residual_minus) <= 1e-4);
}

TEST_CASE("bochner_residual: exactly the positive divergence sign closes") {
    for (int c = 0; c < 3; ++c) {
        const int m = (c % 2 == 0) ? 3 : 4;
        const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, 400 + c);
        const std::vector<double> x0(m, 0.0);
        const BochnerResiduals r = bochner_residual(pm, x0, 1e-2);
        CHECK(std::abs(r.residual_plus) <= 1e-3 * r.scale);
        CHECK(std::abs(r.residual_minus) > 1e-3 * r.scale);
    }
}

TEST_CASE("gamma commutator form agrees with the curvature action") {
    for (int c = 0; c < 2; ++c) {
        const int m = 3;
        const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, 500 + c);
        const std::vector<double> x0(m, 0.0);
        CHECK(gamma_commutator_residual(pm, x0, 1e-2) <= 1e-4);
    }
}

TEST_CASE("chart rotation leaves scalar outputs invariant") {
    const int m = 3;
    const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, 600);
    const Matrix q = random_orthogonal(m, 601);
    const PolynomialMetric pmq = pm.rotated(q);
    const std::vector<double> x0(m, 0.0);
    const CurvJet a = nabla_riemann_at(pm, x0, 1e-2);
    const CurvJet b = nabla_riemann_at(pmq, x0, 1e-2);
    CHECK(std::abs(a.T.norm2() - b.T.norm2()) <= 1e-8 * std::max(1.0, a.T.norm2()));
    CHECK(std::abs(a.D.norm2() - b.D.norm2()) <= 1e-8 * std::max(1.0, a.D.norm2()));
    const Spectrum sa = curvature_spectrum(a.T), sb = curvature_spectrum(b.T);
    for (int k = 0; k < sa.n; ++k)
        CHECK(std::abs(sa.values[k] - sb.values[k]) <= 1e-8 * std::max(1.0, sa.op_norm()));
}
