#include <doctest.h>

#include <cmath>

#include "curvlab/jets.hpp"
#include "curvlab/polymetric.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/tensor.hpp"

using namespace curvlab;

TEST_CASE("second_bianchi: zero on the parallel jet, nonzero on raw noise") {
    CHECK(second_bianchi(DenseTensor(4, 5)).norm() == 0.0);
    const DenseTensor noise = random_tensor(4, 5, 3);
    CHECK(second_bianchi(noise).norm() > 1e-2 * noise.norm());
}

TEST_CASE("random_jet: determinism, requested residuals, convergence") {
    const CurvJet a = random_jet(4, 7, true, false);
    const CurvJet b = random_jet(4, 7, true, false);
    CHECK(a.D.data() == b.D.data());  // bitwise
    CHECK(a.T.tensor().data() == b.T.tensor().data());

    const double dn = a.D.norm();
    CHECK(second_bianchi(a.D).norm() <= 1e-10 * dn);
    CHECK((a.D - project_slicewise_curvature(a.D)).norm() <= 1e-10 * dn);
    CHECK(a.satisfies_B2);
    CHECK_FALSE(a.satisfies_div0);

    const CurvJet c = random_jet(4, 7, true, true);
    CHECK(second_bianchi(c.D).norm() <= 1e-10 * c.D.norm());
    CHECK(divergence(c).norm() <= 1e-10 * c.D.norm());

    CHECK_THROWS_AS(random_jet(2, 1, true, false), domain_error);
    CHECK_THROWS_AS(random_jet(9, 1, true, false), domain_error);
}

TEST_CASE("jet projectors: idempotent and self-adjoint") {
    const int m = 4;
    for (int c = 0; c < 20; ++c) {
        const DenseTensor a = random_tensor(m, 5, 8000 + c);
        const DenseTensor b = random_tensor(m, 5, 8100 + c);
        const auto check_projector = [&](auto&& proj) {
            const DenseTensor pa = proj(a);
            CHECK((proj(pa) - pa).norm() <= 1e-11 * std::max(pa.norm(), 1.0));
            CHECK(std::abs(pa.dot(b) - a.dot(proj(b))) <= 1e-11 * a.norm() * b.norm());
        };
        check_projector([](const DenseTensor& x) { return project_slicewise_curvature(x); });
        check_projector([](const DenseTensor& x) { return project_second_bianchi(x); });
        check_projector([](const DenseTensor& x) { return project_divergence_free(x); });
    }
}

TEST_CASE("divergence identities under the second Bianchi identity") {
    for (int m : {3, 4, 5, 6}) {
        for (int c = 0; c < 25; ++c) {
            const CurvJet j = random_jet(m, 8200 * m + c, true, false);
            const DivergenceReport rep = divergence_identities(j);
            CHECK(rep.codazzi_residual <= 1e-9);
            CHECK(rep.schur_residual <= 1e-9);
            CHECK(rep.cotton_trace_residual <= 1e-9);
            CHECK(rep.div_split_residual <= 1e-9);
        }
    }
}

TEST_CASE("parallel jet: everything vanishes") {
    CurvJet j;
    j.T = random_curvature_tensor(4, 5);
    j.D = DenseTensor(4, 5);
    j.satisfies_B2 = true;
    j.satisfies_div0 = true;
    CHECK(divergence(j).norm() == 0.0);
    CHECK(cotton(j).norm() == 0.0);
    const WeylJetReport rep = weyl_jet_relations(j);
    CHECK(rep.bw_component_residual == 0.0);
    CHECK(rep.divw_component_residual == 0.0);
    const HarmonicityReport h = harmonicity_equivalences(j);
    CHECK(h.div_free);
    CHECK(h.cotton_free);
    CHECK(h.grad_s_free);
    CHECK(h.equivalences_hold);
}

TEST_CASE("weyl jet relations: componentwise and norm forms") {
    for (int m : {4, 5, 6}) {
        for (int c = 0; c < 25; ++c) {
            const CurvJet j = random_jet(m, 8300 * m + c, true, false);
            const WeylJetReport rep = weyl_jet_relations(j);
            CHECK(rep.bw_component_residual <= 1e-9);
            CHECK(rep.divw_component_residual <= 1e-9);
            CHECK(rep.bw_norm_residual <= 1e-9);
            CHECK(rep.divw_norm_residual <= 1e-9);
        }
    }
}

TEST_CASE("weyl jet relations: dimension 3 forces both sides to vanish") {
    for (int c = 0; c < 10; ++c) {
        const CurvJet j = random_jet(3, 8400 + c, true, false);
        const DenseTensor dw = nabla_weyl(j);
        CHECK(second_bianchi(dw).norm() <= 1e-9 * std::max(1.0, j.D.norm()));
        CurvJet wj{j.T, dw, false, false};
        CHECK(divergence(wj).norm() <= 1e-9 * std::max(1.0, j.D.norm()));
    }
    CurvJet no_b2;
    no_b2.T = random_curvature_tensor(4, 1);
    no_b2.D = random_tensor(4, 5, 1);
    no_b2.satisfies_B2 = false;
    CHECK_THROWS_AS(weyl_jet_relations(no_b2), domain_error);
}

TEST_CASE("harmonicity: divergence-free jets kill Cotton and grad S") {
    for (int m : {4, 5}) {
        for (int c = 0; c < 10; ++c) {
            const CurvJet j = random_jet(m, 8500 * m + c, true, true);
            const HarmonicityReport rep = harmonicity_equivalences(j);
            CHECK(rep.cotton_residual <= 1e-8);
            CHECK(rep.grad_s_residual <= 1e-8);
            CHECK(rep.div_weyl_residual <= 1e-8);
            CHECK(rep.equivalences_hold);
        }
    }
}

TEST_CASE("harmonicity: generic B2 jets witness the converse direction") {
    int nonzero_div = 0;
    for (int c = 0; c < 20; ++c) {
        const CurvJet j = random_jet(4, 8600 + c, true, false);
        const HarmonicityReport rep = harmonicity_equivalences(j);
        CHECK(rep.equivalences_hold);
        if (!rep.div_free) {
            ++nonzero_div;
            // |div T| >= |grad S| / sqrt(2(m-1)) from the orthogonal split
            CHECK(rep.div_residual >= rep.grad_s_residual / std::sqrt(6.0) - 1e-12);
        }
    }
    CHECK(nonzero_div > 0);  // generic jets are not divergence-free
}

TEST_CASE("geometric jets satisfy the second Bianchi identity at FD tolerance") {
    for (int c = 0; c < 3; ++c) {
        const PolynomialMetric pm = PolynomialMetric::random_perturbation(4, 0.05, 9000 + c);
        const std::vector<double> x(4, 0.0);
        const CurvJet j = nabla_riemann_at(pm, x, 1e-2);
        CHECK(j.satisfies_B2);
        CHECK(second_bianchi(j.D).norm() <= 1e-6 * std::max(j.D.norm(), j.T.norm()));
        // slices keep the curvature symmetries
        CHECK((j.D - project_slicewise_curvature(j.D)).norm() <= 1e-7 * j.D.norm());
    }
}
