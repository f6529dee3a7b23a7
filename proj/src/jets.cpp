#include "curvlab/jets.hpp"

#include <cmath>

#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

constexpr int kMaxJetDim = 6;  // m^5 entries; desk scale

void check_jet_dim(int m, const char* who) {
    if (m < 3) throw domain_error(std::string(who) + ": requires m >= 3");
    if (m > kMaxJetDim) throw domain_error(std::string(who) + ": jet operations capped at m = 6");
}

double rel(double value, double scale) { return scale > 0 ? value / scale : value; }

}  // namespace

DenseTensor second_bianchi(const DenseTensor& d) {
    if (d.rank() != 5) throw shape_error("second_bianchi: rank must be 5");
    const int m = d.dim();
    DenseTensor b(m, 5);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int t = 0; t < m; ++t)
                    for (int l = 0; l < m; ++l)
                        b.at(i, j, k, t, l) =
                            d.at(i, j, k, t, l) + d.at(i, j, l, k, t) + d.at(i, j, t, l, k);
    return b;
}

DenseTensor second_bianchi(const CurvJet& j) { return second_bianchi(j.D); }

DenseTensor divergence(const CurvJet& j) {
    const int m = j.dim();
    DenseTensor out(m, 3);
    for (int jj = 0; jj < m; ++jj)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t) {
                double s = 0;
                for (int i = 0; i < m; ++i) s += j.D.at(i, jj, k, t, i);
                out.at(jj, k, t) = s;
            }
    return out;
}

DenseTensor nabla_ricci(const CurvJet& j) {
    const int m = j.dim();
    DenseTensor out(m, 3);  // E_{jt,l} indexed (j, t, l)
    for (int jj = 0; jj < m; ++jj)
        for (int t = 0; t < m; ++t)
            for (int l = 0; l < m; ++l) {
                double s = 0;
                for (int i = 0; i < m; ++i) s += j.D.at(i, jj, i, t, l);
                out.at(jj, t, l) = s;
            }
    return out;
}

std::vector<double> nabla_scalar(const CurvJet& j) {
    const int m = j.dim();
    const DenseTensor de = nabla_ricci(j);
    std::vector<double> out(m, 0.0);
    for (int l = 0; l < m; ++l) {
        double s = 0;
        for (int i = 0; i < m; ++i) s += de.at(i, i, l);
        out[l] = s;
    }
    return out;
}

DenseTensor cotton(const CurvJet& j) {
    const int m = j.dim();
    const DenseTensor de = nabla_ricci(j);
    const std::vector<double> ds = nabla_scalar(j);
    const double c = 1.0 / (2.0 * (m - 1));
    // A_{ij,k} = E_{ij,k} - S_k g_ij / (2(m-1))
    DenseTensor out(m, 3);
    for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj)
            for (int k = 0; k < m; ++k) {
                double v = de.at(i, jj, k) - de.at(i, k, jj);
                if (i == jj) v -= c * ds[k];
                if (i == k) v += c * ds[jj];
                out.at(i, jj, k) = v;
            }
    return out;
}

DenseTensor nabla_weyl(const CurvJet& j) {
    const int m = j.dim();
    const DenseTensor de = nabla_ricci(j);
    const std::vector<double> ds = nabla_scalar(j);
    const double cs = 1.0 / (2.0 * (m - 1));
    DenseTensor out = j.D;
    const double c = 1.0 / (m - 2);
    for (int l = 0; l < m; ++l) {
        // (nabla A)_{., l} as a symmetric 2-tensor, then its KN product with g
        SymTwoTensor a(m);
        for (int i = 0; i < m; ++i)
            for (int jj = i; jj < m; ++jj) {
                double v = 0.5 * (de.at(i, jj, l) + de.at(jj, i, l));
                if (i == jj) v -= cs * ds[l];
                a.set(i, jj, v);
            }
        for (int i = 0; i < m; ++i)
            for (int jj = 0; jj < m; ++jj)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        double kn = 0;
                        if (jj == t) kn += a(i, k);
                        if (i == k) kn += a(jj, t);
                        if (jj == k) kn -= a(i, t);
                        if (i == t) kn -= a(jj, k);
                        out.at(i, jj, k, t, l) -= c * kn;
                    }
    }
    return out;
}

DivergenceReport divergence_identities(const CurvJet& j) {
    const int m = j.dim();
    const double dnorm = std::max(j.D.norm(), 1e-300);
    const DenseTensor divt = divergence(j);
    const DenseTensor de = nabla_ricci(j);
    const std::vector<double> ds = nabla_scalar(j);
    const DenseTensor c = cotton(j);

    DivergenceReport rep;
    double worst = 0;
    for (int jj = 0; jj < m; ++jj)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t)
                worst = std::max(worst,
                                 std::abs(divt.at(jj, k, t) - (de.at(jj, t, k) - de.at(jj, k, t))));
    rep.codazzi_residual = rel(worst, dnorm);

    worst = 0;
    for (int k = 0; k < m; ++k) {
        double dive = 0;
        for (int i = 0; i < m; ++i) dive += de.at(i, k, i);
        worst = std::max(worst, std::abs(2.0 * dive - ds[k]));
    }
    rep.schur_residual = rel(worst, dnorm);

    worst = 0;
    for (int a = 0; a < m; ++a) {
        double t12 = 0, t13 = 0, t23 = 0;
        for (int i = 0; i < m; ++i) {
            t12 += c.at(i, i, a);
            t13 += c.at(i, a, i);
            t23 += c.at(a, i, i);
        }
        worst = std::max({worst, std::abs(t12), std::abs(t13), std::abs(t23)});
    }
    rep.cotton_trace_residual = rel(worst, dnorm);

    double grad2 = 0;
    for (double v : ds) grad2 += v * v;
    const double split = divt.norm2() - c.norm2() - grad2 / (2.0 * (m - 1));
    rep.div_split_residual = rel(std::abs(split), std::max(divt.norm2(), 1e-300));
    return rep;
}

WeylJetReport weyl_jet_relations(const CurvJet& j) {
    if (!j.satisfies_B2)
        throw domain_error("weyl_jet_relations: jet does not satisfy the second Bianchi identity");
    const int m = j.dim();
    const double dnorm = std::max(j.D.norm(), 1e-300);
    const DenseTensor dw = nabla_weyl(j);
    const DenseTensor bw = second_bianchi(dw);
    const DenseTensor c = cotton(j);

    WeylJetReport rep;
    const double cm = 1.0 / (m - 2);
    double worst = 0;
    for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj)
            for (int k = 0; k < m; ++k)
                for (int t = 0; t < m; ++t)
                    for (int l = 0; l < m; ++l) {
                        double expect = 0;
                        if (jj == t) expect += c.at(i, k, l);
                        if (jj == k) expect += c.at(i, l, t);
                        if (jj == l) expect += c.at(i, t, k);
                        if (i == t) expect -= c.at(jj, k, l);
                        if (i == k) expect -= c.at(jj, l, t);
                        if (i == l) expect -= c.at(jj, t, k);
                        expect *= -cm;
                        worst = std::max(worst, std::abs(bw.at(i, jj, k, t, l) - expect));
                    }
    rep.bw_component_residual = rel(worst, dnorm);

    // div W against -(m-3)/(m-2) C; components (j,k,t) vs C_{jkt}
    CurvJet wjet{j.T, dw, false, false};
    const DenseTensor divw = divergence(wjet);
    const double factor = static_cast<double>(m - 3) / (m - 2);
    worst = 0;
    for (int jj = 0; jj < m; ++jj)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t)
                worst = std::max(worst, std::abs(divw.at(jj, k, t) + factor * c.at(jj, k, t)));
    rep.divw_component_residual = rel(worst, dnorm);

    const double c2 = c.norm2();
    rep.bw_norm_residual =
        rel(std::abs(bw.norm2() - 6.0 * (m - 3) / ((m - 2.0) * (m - 2.0)) * c2),
            std::max(dnorm * dnorm, 1e-300));
    rep.divw_norm_residual =
        rel(std::abs(divw.norm2() - factor * factor * c2), std::max(dnorm * dnorm, 1e-300));
    return rep;
}

HarmonicityReport harmonicity_equivalences(const CurvJet& j, double tol) {
    if (!j.satisfies_B2)
        throw domain_error("harmonicity_equivalences: jet does not satisfy the second Bianchi identity");
    const int m = j.dim();
    const double dnorm = std::max(j.D.norm(), 1e-300);

    HarmonicityReport rep;
    rep.div_residual = divergence(j).norm() / dnorm;
    rep.cotton_residual = cotton(j).norm() / dnorm;
    double g2 = 0;
    for (double v : nabla_scalar(j)) g2 += v * v;
    rep.grad_s_residual = std::sqrt(g2) / dnorm;
    CurvJet wjet{j.T, nabla_weyl(j), false, false};
    rep.div_weyl_residual = divergence(wjet).norm() / dnorm;

    rep.div_free = rep.div_residual < tol;
    rep.cotton_free = rep.cotton_residual < tol;
    rep.grad_s_free = rep.grad_s_residual < tol;
    rep.div_weyl_free = rep.div_weyl_residual < tol;

    const bool forward = !rep.div_free || (rep.cotton_free && rep.grad_s_free);
    const bool backward = !(rep.cotton_free && rep.grad_s_free) || rep.div_free;
    bool weyl_dir = true;
    if (m >= 4) weyl_dir = rep.div_weyl_free == rep.cotton_free;
    rep.equivalences_hold = forward && backward && weyl_dir;
    return rep;
}

DenseTensor project_slicewise_curvature(const DenseTensor& d) {
    if (d.rank() != 5) throw shape_error("project_slicewise_curvature: rank must be 5");
    const int m = d.dim();
    DenseTensor out(m, 5);
    DenseTensor slice(m, 4);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i)
            for (int jj = 0; jj < m; ++jj)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) slice.at(i, jj, k, t) = d.at(i, jj, k, t, l);
        const DenseTensor p = project_curvature_symmetries_raw(slice);
        for (int i = 0; i < m; ++i)
            for (int jj = 0; jj < m; ++jj)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) out.at(i, jj, k, t, l) = p.at(i, jj, k, t);
    }
    return out;
}

DenseTensor project_second_bianchi(const DenseTensor& d) {
    if (d.rank() != 5) throw shape_error("project_second_bianchi: rank must be 5");
    const int m = d.dim();
    DenseTensor out(m, 5);
    for (int i = 0; i < m; ++i)
        for (int jj = 0; jj < m; ++jj)
            for (int k = 0; k < m; ++k)
                for (int t = 0; t < m; ++t)
                    for (int l = 0; l < m; ++l)
                        out.at(i, jj, k, t, l) =
                            d.at(i, jj, k, t, l) -
                            (d.at(i, jj, k, t, l) + d.at(i, jj, l, k, t) + d.at(i, jj, t, l, k)) /
                                3.0;
    return out;
}

DenseTensor project_divergence_free(const DenseTensor& d) {
    if (d.rank() != 5) throw shape_error("project_divergence_free: rank must be 5");
    const int m = d.dim();
    DenseTensor out = d;
    for (int jj = 0; jj < m; ++jj)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t) {
                double s = 0;
                for (int i = 0; i < m; ++i) s += d.at(i, jj, k, t, i);
                s /= m;
                for (int i = 0; i < m; ++i) out.at(i, jj, k, t, i) -= s;
            }
    return out;
}

CurvJet random_jet(int m, std::uint64_t seed, bool enforce_b2, bool enforce_div0) {
    check_jet_dim(m, "random_jet");
    DenseTensor d = random_tensor(m, 5, seed);

    const auto residuals = [&](const DenseTensor& x) {
        const double scale = std::max(x.norm(), 1e-300);
        double r = (x - project_slicewise_curvature(x)).norm() / scale;
        if (enforce_b2) r = std::max(r, (x - project_second_bianchi(x)).norm() / scale);
        if (enforce_div0) r = std::max(r, (x - project_divergence_free(x)).norm() / scale);
        return r;
    };

    bool converged = false;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        d = project_slicewise_curvature(d);
        if (enforce_b2) d = project_second_bianchi(d);
        if (enforce_div0) d = project_divergence_free(d);
        if (residuals(d) < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) throw convergence_error("random_jet: alternating projections did not converge");

    CurvJet jet;
    jet.T = random_curvature_tensor(m, seed ^ 0x6a09e667f3bcc908ULL);
    jet.D = std::move(d);
    jet.satisfies_B2 = enforce_b2;
    jet.satisfies_div0 = enforce_div0;
    return jet;
}

}  // namespace curvlab
