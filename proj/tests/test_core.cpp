#include <doctest.h>

#include <cmath>

#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/tensor.hpp"

using namespace curvlab;

namespace {

SymTwoTensor identity_sym(int m) {
    SymTwoTensor g(m);
    for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
    return g;
}

// brute-force oracle: full index contraction of two rank-4 arrays
double contract4_oracle(const DenseTensor& a, const DenseTensor& b) {
    const int m = a.dim();
    double s = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) s += a.at(i, j, k, l) * b.at(i, j, k, l);
    return s;
}

// brute-force oracle: Ricci contraction by explicit loops
SymTwoTensor ricci_oracle(const DenseTensor& t) {
    const int m = t.dim();
    SymTwoTensor e(m);
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
            double s = 0;
            for (int i = 0; i < m; ++i) s += t.at(i, j, i, l);
            e.set(j, l, s);
        }
    return e;
}

Matrix random_spd(int m, std::uint64_t seed) {
    Rng rng(seed, 0);
    Matrix a(m);
    for (double& v : a.a) v = rng.normal();
    Matrix g(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = 0;
            for (int k = 0; k < m; ++k) v += a(i, k) * a(j, k);
            g(i, j) = v + (i == j ? m : 0.0);
        }
    return g;
}

}  // namespace

TEST_CASE("inner product: identity metric trace and 2-form convention") {
    const int m = 4;
    const Metric id = Metric::identity(m);
    const DenseTensor g_tensor = identity_sym(m).as_tensor();
    CHECK(inner(g_tensor, g_tensor, id) == doctest::Approx(4.0).epsilon(1e-14));

    TwoForm w(m);
    w.set(0, 1, 1.0);  // theta^1 ^ theta^2 as the +-1 antisymmetric matrix
    CHECK(inner(w.as_tensor(), w.as_tensor(), id) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.norm2() == doctest::Approx(2.0));
}

TEST_CASE("inner product: orthogonal frame invariance") {
    const int m = 4;
    const Metric id = Metric::identity(m);
    for (int c = 0; c < 25; ++c) {
        const DenseTensor a = random_tensor(m, 4, 100 + c);
        const DenseTensor b = random_tensor(m, 4, 200 + c);
        const Matrix q = random_orthogonal(m, 300 + c);
        const double before = inner(a, b, id);
        const double after = inner(transform_all_slots(a, q), transform_all_slots(b, q), id);
        CHECK(std::abs(before - after) <= 1e-12 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("inner product: shape errors") {
    const Metric id = Metric::identity(3);
    CHECK_THROWS_AS(inner(DenseTensor(3, 2), DenseTensor(3, 3), id), shape_error);
    CHECK_THROWS_AS(inner(DenseTensor(4, 2), DenseTensor(3, 2), id), shape_error);
    CHECK_THROWS_AS(inner(DenseTensor(4, 2), DenseTensor(4, 2), id), shape_error);
}

TEST_CASE("kulkarni-nomizu: component values on the identity") {
    const SymTwoTensor g = identity_sym(3);
    const CurvTensor gg = kulkarni_nomizu(g, g);
    CHECK(gg.at(0, 1, 0, 1) == doctest::Approx(2.0));
    CHECK(gg.at(0, 1, 0, 2) == doctest::Approx(0.0));
}

TEST_CASE("kulkarni-nomizu: norm and Ricci contraction oracles at m=4") {
    const int m = 4;
    const SymTwoTensor g = identity_sym(m);
    const CurvTensor gg = kulkarni_nomizu(g, g);
    // |g^g|^2 = 8m(m-1) = 192, via the brute-force contraction
    CHECK(contract4_oracle(gg.tensor(), gg.tensor()) == doctest::Approx(192.0).epsilon(1e-14));
    // Ricci contraction equals 2(m-1) g = 6g
    const SymTwoTensor e = ricci_oracle(gg.tensor());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            CHECK(e(i, j) == doctest::Approx(i == j ? 6.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("kulkarni-nomizu: bilinear, symmetric, closed under the symmetries") {
    for (int m : {3, 4, 5, 6, 7}) {
        for (int c = 0; c < 20; ++c) {
            const SymTwoTensor e = random_sym_two_tensor(m, 40 + c);
            const SymTwoTensor f = random_sym_two_tensor(m, 90 + c);
            const CurvTensor ef = kulkarni_nomizu(e, f);
            const CurvTensor fe = kulkarni_nomizu(f, e);
            CHECK((ef.tensor() - fe.tensor()).norm() <= 1e-13 * ef.norm());
            CHECK(symmetry_residual(ef.tensor()) <= 1e-13);
            CHECK(bianchi_residual(ef.tensor()) <= 1e-13);
        }
    }
    CHECK_THROWS_AS(kulkarni_nomizu(SymTwoTensor(3), SymTwoTensor(4)), shape_error);
}

TEST_CASE("symmetry projection: idempotent on valid curvature tensors") {
    const CurvTensor t = constant_curvature(3, 2.0);
    const DenseTensor p = project_curvature_symmetries_raw(t.tensor());
    CHECK((p - t.tensor()).norm() <= 1e-14 * t.norm());
}

TEST_CASE("symmetry projection: kills the fully antisymmetric tensor") {
    const int m = 4;
    DenseTensor eps(m, 4);
    int idx[4];
    for (idx[0] = 0; idx[0] < m; ++idx[0])
        for (idx[1] = 0; idx[1] < m; ++idx[1])
            for (idx[2] = 0; idx[2] < m; ++idx[2])
                for (idx[3] = 0; idx[3] < m; ++idx[3]) {
                    bool repeat = false;
                    for (int a = 0; a < 4; ++a)
                        for (int b = a + 1; b < 4; ++b)
                            if (idx[a] == idx[b]) repeat = true;
                    if (repeat) continue;
                    int inversions = 0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = a + 1; b < 4; ++b)
                            if (idx[a] > idx[b]) ++inversions;
                    eps.at(idx[0], idx[1], idx[2], idx[3]) = (inversions % 2 == 0) ? 1.0 : -1.0;
                }
    CHECK(eps.norm() > 1.0);
    CHECK(project_curvature_symmetries_raw(eps).norm() <= 1e-14);
}

TEST_CASE("symmetry projection: output valid, orthogonal, self-adjoint") {
    const int m = 4;
    for (int c = 0; c < 30; ++c) {
        const DenseTensor d = random_tensor(m, 4, 600 + c);
        const DenseTensor p = project_curvature_symmetries_raw(d);
        CHECK(symmetry_residual(p) <= 1e-12);
        CHECK(bianchi_residual(p) <= 1e-12);
        CHECK(std::abs((d - p).dot(p)) <= 1e-12 * d.norm2());
        const DenseTensor b = random_tensor(m, 4, 700 + c);
        CHECK(std::abs(project_curvature_symmetries_raw(d).dot(b) -
                       d.dot(project_curvature_symmetries_raw(b))) <= 1e-11 * d.norm() * b.norm());
    }
}

TEST_CASE("random curvature tensors: deterministic, seed-sensitive, valid") {
    const CurvTensor a = random_curvature_tensor(4, 1);
    const CurvTensor b = random_curvature_tensor(4, 1);
    CHECK(a.tensor().data() == b.tensor().data());  // bitwise

    const CurvTensor c = random_curvature_tensor(4, 2);
    CHECK((a.tensor() - c.tensor()).norm() > 1e-3);

    CHECK(symmetry_residual(a.tensor()) <= 1e-12);
    CHECK(bianchi_residual(a.tensor()) <= 1e-12);
    CHECK(a.norm() > 1e-3);  // nonzero with probability 1
    CHECK_THROWS_AS(random_curvature_tensor(2, 1), domain_error);
}

TEST_CASE("orthonormalize: identity metric is exact no-op") {
    const CurvTensor t = random_curvature_tensor(4, 11);
    const CurvTensor u = orthonormalize(t, Metric::identity(4));
    CHECK(u.tensor().data() == t.tensor().data());
}

TEST_CASE("orthonormalize: constant curvature w.r.t. diag(4,1,1)") {
    const int m = 3;
    const double kappa = 0.7;
    Matrix gmat(m);
    gmat(0, 0) = 4.0;
    gmat(1, 1) = 1.0;
    gmat(2, 2) = 1.0;
    const Metric g(gmat);
    // T = (kappa/2) g ^ g built from the curved metric
    SymTwoTensor gs(m);
    for (int i = 0; i < m; ++i) gs.set(i, i, gmat(i, i));
    const CurvTensor t = CurvTensor::unchecked(0.5 * kappa * kulkarni_nomizu(gs, gs).tensor());
    const CurvTensor u = orthonormalize(t, g);
    const CurvTensor expect = constant_curvature(m, kappa);
    CHECK((u.tensor() - expect.tensor()).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("orthonormalize: preserves the metric norm; rejects non-SPD") {
    for (int c = 0; c < 20; ++c) {
        const int m = 4;
        const CurvTensor t = random_curvature_tensor(m, 800 + c);
        const Metric g(random_spd(m, 900 + c));
        const CurvTensor u = orthonormalize(t, g);
        const double with_g = inner(t.tensor(), t.tensor(), g);
        CHECK(std::abs(with_g - u.norm2()) <= 1e-10 * std::abs(with_g));
    }
    Matrix bad(3);
    bad(0, 0) = 1.0;
    bad(1, 1) = -1.0;
    bad(2, 2) = 1.0;
    CHECK_THROWS_AS(Metric{bad}, decomposition_error);
}

TEST_CASE("metric invariant: inverse(g) g = identity to 1e-12") {
    for (int c = 0; c < 10; ++c) {
        const int m = 5;
        const Metric g(random_spd(m, 1000 + c));
        const Matrix prod = g.inverse() * g.g();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("dense tensor: length validation and row-major layout") {
    CHECK_THROWS_AS(DenseTensor::from_data(3, 2, std::vector<double>(8)), shape_error);
    DenseTensor t(3, 2);
    t.at(1, 2) = 7.0;
    CHECK(t.data()[1 * 3 + 2] == 7.0);
    CHECK_THROWS_AS(DenseTensor(3, 7), shape_error);
}

TEST_CASE("curvature tensor validation rejects broken symmetries") {
    DenseTensor bad(3, 4);
    bad.at(0, 1, 0, 1) = 1.0;  // missing the antisymmetric partners
    CHECK_THROWS_AS(CurvTensor{bad}, validation_error);
}
