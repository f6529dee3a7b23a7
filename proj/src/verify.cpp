#include "curvlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "curvlab/algebra.hpp"
#include "curvlab/estimates.hpp"
#include "curvlab/jets.hpp"
#include "curvlab/models.hpp"
#include "curvlab/polymetric.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab::verify {

namespace {

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t check, int c) {
    return seed ^ (0x9e3779b97f4a7c15ULL * (check + 1)) ^
           (0xc2b2ae3d27d4eb4fULL * static_cast<std::uint64_t>(c + 1));
}

int thread_budget() {
    if (const char* env = std::getenv("CURVLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Collects per-case residuals; the aggregation is order-independent.
class Check {
public:
    Check(std::string id, double tol) : id_(std::move(id)), tol_(tol) {}

    void run_cases(int n, std::uint64_t base_seed,
                   const std::function<double(std::uint64_t)>& residual_of) {
        std::vector<double> res(static_cast<std::size_t>(n), 0.0);
        const std::uint64_t check_key = std::hash<std::string>{}(id_);
        parallel_cases(n, [&](int c) {
            res[static_cast<std::size_t>(c)] = residual_of(case_seed(base_seed, check_key, c));
        });
        for (int c = 0; c < n; ++c) {
            if (res[static_cast<std::size_t>(c)] > worst_) {
                worst_ = res[static_cast<std::size_t>(c)];
                worst_seed_ = case_seed(base_seed, check_key, c);
            }
        }
        cases_ += n;
    }

    void observe(double residual, std::uint64_t seed = 0) {
        ++cases_;
        if (residual > worst_) {
            worst_ = residual;
            worst_seed_ = seed;
        }
    }

    CheckResult result(std::string detail = "") const {
        CheckResult r;
        r.id = id_;
        r.cases = cases_;
        r.max_residual = worst_;
        r.tolerance = tol_;
        r.worst_seed = worst_seed_;
        r.passed = worst_ <= tol_;
        r.detail = std::move(detail);
        return r;
    }

private:
    std::string id_;
    double tol_;
    double worst_ = 0;
    std::uint64_t worst_seed_ = 0;
    int cases_ = 0;
};

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

// slack deficit normalized by the report scale; <= tol means satisfied
double bound_deficit(const BoundReport& r) { return -r.slack / std::max(r.scale, 1e-300); }

// ------------------------------------------------------------------- core

std::vector<CheckResult> suite_core(const SuiteOptions& opt) {
    const int m = opt.m;
    std::vector<CheckResult> out;

    {
        Check chk("curvature_generator_residuals", 1e-12 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            return std::max(symmetry_residual(t.tensor()), bianchi_residual(t.tensor()));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("inner_frame_invariance", 1e-12 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const DenseTensor a = random_tensor(m, 4, s);
            const DenseTensor b = random_tensor(m, 4, s ^ 0x1234567ULL);
            const Matrix q = random_orthogonal(m, s ^ 0xfeedULL);
            const double lhs = a.dot(b);
            const double rhs = transform_all_slots(a, q).dot(transform_all_slots(b, q));
            return rel_diff(lhs, rhs);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("kn_curvature_closure", 1e-12 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const SymTwoTensor e = random_sym_two_tensor(m, s);
            SymTwoTensor g(m);
            for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
            const CurvTensor kn = kulkarni_nomizu(e, g);
            return std::max(symmetry_residual(kn.tensor()), bianchi_residual(kn.tensor()));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("projector_idempotent", 1e-14 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const DenseTensor d = random_tensor(m, 4, s);
            const DenseTensor p1 = project_curvature_symmetries_raw(d);
            const DenseTensor p2 = project_curvature_symmetries_raw(p1);
            return (p2 - p1).norm() / std::max(p1.norm(), 1e-300);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("projector_self_adjoint", 1e-11 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const DenseTensor a = random_tensor(m, 4, s);
            const DenseTensor b = random_tensor(m, 4, s ^ 0xabcdULL);
            const double lhs = project_curvature_symmetries_raw(a).dot(b);
            const double rhs = a.dot(project_curvature_symmetries_raw(b));
            return rel_diff(lhs, rhs);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("projector_orthogonal_complement", 1e-12 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const DenseTensor d = random_tensor(m, 4, s);
            const DenseTensor p = project_curvature_symmetries_raw(d);
            return std::abs((d - p).dot(p)) / std::max(d.norm2(), 1e-300);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("orthonormalize_invariants", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            Rng rng(s, 0x9dc0de);
            Matrix a(m);
            for (double& v : a.a) v = rng.normal();
            Matrix g(m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    double v = 0;
                    for (int k = 0; k < m; ++k) v += a(i, k) * a(j, k);
                    g(i, j) = v + (i == j ? static_cast<double>(m) : 0.0);
                }
            const Metric metric(g);
            const CurvTensor t_on = orthonormalize(t, metric);
            double worst = rel_diff(inner(t.tensor(), t.tensor(), metric), t_on.norm2());
            const DenseTensor b = random_tensor(m, 4, s ^ 0x4242ULL);
            worst = std::max(worst, rel_diff(inner(t.tensor(), b, metric),
                                             t_on.tensor().dot(orthonormalize(b, metric))));
            // identity metric is a no-op
            worst = std::max(worst,
                             (orthonormalize(t, Metric::identity(m)).tensor() - t.tensor()).norm());
            return worst;
        });
        out.push_back(chk.result());
    }
    return out;
}

// --------------------------------------------------------------- spectral

std::vector<CheckResult> suite_spectral(const SuiteOptions& opt) {
    const int m = opt.m;
    std::vector<CheckResult> out;

    {
        Check chk("eigen_trace_identities", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            Rng rng(s, 0xe1);
            const int n = 10;
            Matrix a(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
            const Spectrum sp = sym_eigen(a);
            double worst = rel_diff(sp.sum(), a.trace());
            worst = std::max(worst, rel_diff(sp.sum_sq(), a.frobenius_norm() * a.frobenius_norm()));
            // eigenpair residual and orthonormality
            double eig_res = 0, ortho_res = 0;
            for (int c = 0; c < n; ++c) {
                for (int r = 0; r < n; ++r) {
                    double mv = 0;
                    for (int k = 0; k < n; ++k) mv += a(r, k) * sp.vectors(k, c);
                    eig_res = std::max(eig_res, std::abs(mv - sp.values[c] * sp.vectors(r, c)));
                }
                for (int c2 = 0; c2 < n; ++c2) {
                    double dot = 0;
                    for (int k = 0; k < n; ++k) dot += sp.vectors(k, c) * sp.vectors(k, c2);
                    ortho_res = std::max(ortho_res, std::abs(dot - (c == c2 ? 1.0 : 0.0)));
                }
            }
            worst = std::max(worst, eig_res / std::max(1.0, sp.op_norm()));
            worst = std::max(worst, ortho_res);
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("partial_trace_monotone", 1e-15);
        chk.run_cases(std::max(opt.cases, 1000), opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const Spectrum sp = curvature_spectrum(t);
            double worst = 0;
            double prev = partial_trace(sp, 1);
            for (int k = 2; k <= sp.n; ++k) {
                const double cur = partial_trace(sp, k);
                worst = std::max(worst, (prev - cur) / std::max(1.0, sp.op_norm()));
                prev = cur;
            }
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("weighted_sum_bound", 1e-9 * opt.tol_scale);
        const int cases = std::max(opt.cases, 1000);
        chk.run_cases(cases, opt.seed, [&](std::uint64_t s) {
            Rng rng(s, 0x5e01);
            const int n = 3 + rng.uniform_int(10);  // N <= 12
            const int k = 1 + rng.uniform_int(n - 1);
            std::vector<double> a(n), b(n);
            for (double& v : a) v = rng.uniform(-2, 3);
            std::sort(a.begin(), a.end());
            for (double& v : b) v = rng.uniform(0, 2);
            // enforce the pinching hypothesis by a uniform shift
            double bsum = 0, bmax = 0;
            for (double v : b) {
                bsum += v;
                bmax = std::max(bmax, v);
            }
            const double need = (k * bmax - bsum) / (n - k);
            if (need > 0)
                for (double& v : b) v += need + 1e-12;
            const BoundReport r = weighted_sum_lower_bound(a, b, k);
            if (!r.applicable) return 1.0;  // the shift must have made it applicable
            return bound_deficit(r);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("prefix_trace_bound", 1e-9 * opt.tol_scale);
        const int cases = std::max(opt.cases, 1000);
        chk.run_cases(cases, opt.seed, [&](std::uint64_t s) {
            Rng rng(s, 0x9f);
            const int n = 3 + rng.uniform_int(10);
            const int k = 1 + rng.uniform_int(n - 1);
            std::vector<double> a(n);
            for (double& v : a) v = rng.uniform(-2, 2);
            std::sort(a.begin(), a.end());
            double prefix = 0;
            for (int i = 0; i < k; ++i) prefix += a[i];
            if (prefix < 0)
                for (double& v : a) v -= prefix / k - 1e-12;
            const BoundReport r = knonneg_trace_bound(a, k);
            if (!r.applicable) return 1.0;
            return bound_deficit(r);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("pinching_bound", 1e-9 * opt.tol_scale);
        Check book("operator_trace_bookkeeping", 1e-10 * opt.tol_scale);
        const int cases = std::max(opt.cases, 1000);
        std::vector<double> res1(cases), res2(cases);
        const int n = binomial2(m);
        parallel_cases(cases, [&](int c) {
            const std::uint64_t s = case_seed(opt.seed, 0x510, c);
            Rng rng(s, 0x01b1);
            const int k = 1 + rng.uniform_int(n - 1);
            CurvTensor t = random_curvature_tensor(m, s);
            const Spectrum sp0 = curvature_spectrum(t);
            const double shift = std::max(0.0, -partial_trace(sp0, k) / 4.0);
            if (shift > 0) {
                SymTwoTensor g(m);
                for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
                t = CurvTensor::unchecked(t.tensor() + shift * kulkarni_nomizu(g, g).tensor());
            }
            const BoundReport r = pinching_check(t, k);
            res1[static_cast<std::size_t>(c)] = r.applicable ? bound_deficit(r) : 1.0;
            const Spectrum sp = curvature_spectrum(t);
            const SymTwoTensor e = ricci_contraction(t);
            res2[static_cast<std::size_t>(c)] =
                std::max(rel_diff(sp.sum(), e.trace()), rel_diff(sp.sum_sq(), t.norm2()));
        });
        for (int c = 0; c < cases; ++c) {
            chk.observe(res1[static_cast<std::size_t>(c)], case_seed(opt.seed, 0x510, c));
            book.observe(res2[static_cast<std::size_t>(c)], case_seed(opt.seed, 0x510, c));
        }
        out.push_back(chk.result());
        out.push_back(book.result());
    }
    return out;
}

// ---------------------------------------------------------------- algebra

std::vector<CheckResult> suite_algebra(const SuiteOptions& opt) {
    const int m = opt.m;
    std::vector<CheckResult> out;

    {
        Check chk("decomposition_identities", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const Decomposition d = decompose(t);
            const double tn = std::max(t.norm(), 1e-300);
            double worst = 0;
            // reconstruction
            worst = std::max(worst,
                             (t.tensor() - d.W.tensor() - d.V.tensor() - d.U.tensor()).norm() / tn);
            // Weyl part totally traceless
            worst = std::max(worst, std::sqrt(ricci_contraction(d.W).norm2()) / tn);
            // pairwise orthogonality
            const double t2 = std::max(t.norm2(), 1e-300);
            worst = std::max(worst, std::abs(d.W.tensor().dot(d.V.tensor())) / t2);
            worst = std::max(worst, std::abs(d.W.tensor().dot(d.U.tensor())) / t2);
            worst = std::max(worst, std::abs(d.V.tensor().dot(d.U.tensor())) / t2);
            // |T|^2 = |W|^2 + 4/(m-2)|Z|^2 + 2S^2/(m(m-1))
            const double split = d.W.norm2() + 4.0 / (m - 2) * d.Z.norm2() +
                                 2.0 * d.S * d.S / (static_cast<double>(m) * (m - 1));
            worst = std::max(worst, rel_diff(t.norm2(), split));
            // |T|^2 = |W|^2 + 4/(m-2)|E|^2 - 2S^2/((m-1)(m-2))
            const double split2 = d.W.norm2() + 4.0 / (m - 2) * d.E.norm2() -
                                  2.0 * d.S * d.S / (static_cast<double>(m - 1) * (m - 2));
            worst = std::max(worst, rel_diff(t.norm2(), split2));
            // T = W + A ^ g / (m-2)
            SymTwoTensor g(m);
            for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
            const DenseTensor twa =
                d.W.tensor() + (1.0 / (m - 2)) * kulkarni_nomizu(d.A, g).tensor();
            worst = std::max(worst, (t.tensor() - twa).norm() / tn);
            return worst;
        });
        out.push_back(chk.result());
    }
    if (m == 3) {
        Check chk("weyl_vanishes_dim3", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(3, s);
            return decompose(t).W.norm() / std::max(t.norm(), 1e-300);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("projective_norm_identity", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const Decomposition d = decompose(t);
            const double p2 = pseudo_projective(t).norm2();
            const double route_e = t.norm2() - 2.0 / (m - 1) * d.E.norm2();
            const double route_wz =
                d.W.norm2() + 2.0 * m / (static_cast<double>(m - 2) * (m - 1)) * d.Z.norm2();
            return std::max(rel_diff(p2, route_e), rel_diff(p2, route_wz));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("operator_trace_identities", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const Matrix op = curvature_operator_matrix(t);
            const Decomposition d = decompose(t);
            const Spectrum sp = sym_eigen(op);
            double worst = rel_diff(op.trace(), d.S);
            worst = std::max(worst, rel_diff(sp.sum_sq(), t.norm2()));
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("gamma_route_agreement", 1e-9 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor r = random_curvature_tensor(m, s ^ 0xbac6ULL);
            double worst = 0;
            for (int rank : {1, 2, 4}) {
                DenseTensor q(m, 1), v(m, 1);
                if (rank == 1) {
                    q = random_tensor(m, 1, s);
                    v = random_tensor(m, 1, s ^ 0x77ULL);
                } else if (rank == 2) {
                    q = random_sym_two_tensor(m, s).as_tensor();
                    v = random_sym_two_tensor(m, s ^ 0x77ULL).as_tensor();
                } else {
                    q = random_curvature_tensor(m, s).tensor();
                    v = random_curvature_tensor(m, s ^ 0x77ULL).tensor();
                }
                const GammaRoutes g = gamma_quadratic(q, v, r);
                const double scale =
                    std::max({std::abs(g.route_def), std::abs(g.route_hat), 1e-300});
                worst = std::max(worst, std::abs(g.route_def - g.route_hat) / scale);
                if (g.route_closed)
                    worst = std::max(worst, std::abs(g.route_def - *g.route_closed) / scale);
            }
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("gamma_split_identities", 1e-9 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const CurvTensor tt = random_curvature_tensor(m, s ^ 0x3333ULL);
            const CurvTensor r = random_curvature_tensor(m, s ^ 0xbac6ULL);
            double worst = 0;
            for (const BoundReport& rep : gamma_split_check(t, tt, r))
                worst = std::max(worst, bound_deficit(rep));
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("hat_norm_identities", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const double that2 = hat(t.tensor()).norm2();
            const double p2 = pseudo_projective(t).norm2();
            double worst = rel_diff(that2, 2.0 * (m - 1) * p2);
            const CurvTensor w = decompose(t).W;
            if (w.norm() > 1e-12 * t.norm()) {
                const double what2 = hat(w.tensor()).norm2();
                worst = std::max(worst, rel_diff(what2, 2.0 * (m - 1) * w.norm2()));
            }
            // hat of the metric vanishes
            SymTwoTensor g(m);
            for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
            worst = std::max(worst, hat(g.as_tensor()).norm());
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("sectional_certified_bound", 1e-9 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 4), opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            Rng rng(s, 0x5ec7);
            const int k = 1 + rng.uniform_int(binomial2(m));
            const SectKBounds b = sect_k_bounds(t, k, 16, s ^ 0x5a5aULL);
            const double scale = std::max({std::abs(b.certified_lower), 1.0});
            return std::max(0.0, (b.certified_lower - b.sampled_min) / scale);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("ricci_sectional_chain", 1e-9 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const SymTwoTensor e = ricci_contraction(t);
            const Spectrum esp = sym_eigen(e.as_matrix());
            const Spectrum rsp = curvature_spectrum(t);
            double worst = 0;
            for (int k = 1; k <= m - 1; ++k) {
                const double lower = 0.5 * (m - 1) * partial_trace(rsp, k);
                const double deficit = lower - esp.min();
                worst = std::max(worst, deficit / std::max({std::abs(lower), esp.op_norm(), 1e-300}));
            }
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("scalar_frame_invariance", 1e-10 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor t = random_curvature_tensor(m, s);
            const Matrix q = random_orthogonal(m, s ^ 0x0f0fULL);
            const CurvTensor tq = CurvTensor::unchecked(transform_all_slots(t.tensor(), q));
            const Decomposition d = decompose(t), dq = decompose(tq);
            const double t2 = std::max(t.norm2(), 1e-300);
            double worst = std::abs(d.S - dq.S) / std::max(std::abs(d.S), t.norm());
            worst = std::max(worst, std::abs(d.W.norm2() - dq.W.norm2()) / t2);
            worst = std::max(worst, std::abs(pseudo_projective(t).norm2() -
                                             pseudo_projective(tq).norm2()) /
                                        t2);
            const Spectrum sp = curvature_spectrum(t), spq = curvature_spectrum(tq);
            for (int k = 0; k < sp.n; ++k)
                worst = std::max(worst, std::abs(sp.values[k] - spq.values[k]) /
                                            std::max(1.0, sp.op_norm()));
            const double g1 = gamma_quadratic_curv(t, t, t, d.E);
            const double g2 = gamma_quadratic_curv(tq, tq, tq, dq.E);
            worst = std::max(worst, std::abs(g1 - g2) /
                                        std::max({std::abs(g1), std::abs(g2), t.norm() * t2}));
            return worst;
        });
        out.push_back(chk.result());
    }
    return out;
}

// --------------------------------------------------------------- estimates

std::vector<CheckResult> suite_estimates(const SuiteOptions& opt) {
    const int m = opt.m;
    std::vector<CheckResult> out;

    {
        Check chk("weyl_gamma_bound", 1e-9 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const CurvTensor w = decompose(random_curvature_tensor(m, s)).W;
            const CurvTensor r = random_curvature_tensor(m, s ^ 0xbac6ULL);
            if (w.norm() < 1e-12) return 0.0;  // m = 3
            return bound_deficit(weyl_bound_slack(w, r));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("traceless_gamma_bound", 1e-9 * opt.tol_scale);
        chk.run_cases(opt.cases, opt.seed, [&](std::uint64_t s) {
            const SymTwoTensor z = random_traceless_sym(m, s);
            const CurvTensor r = random_curvature_tensor(m, s ^ 0xbac6ULL);
            return bound_deficit(traceless_bound_slack(z, r));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("projective_gamma_bound", 1e-9 * opt.tol_scale);
        Check split("gamma_split_consistency", 1e-9 * opt.tol_scale);
        const int cases = opt.cases;
        std::vector<double> res1(cases), res2(cases);
        parallel_cases(cases, [&](int c) {
            const std::uint64_t s = case_seed(opt.seed, 0xe571, c);
            const CurvTensor t = random_curvature_tensor(m, s);
            const CurvTensor r = random_curvature_tensor(m, s ^ 0xbac6ULL);
            const TachibanaReport rep = tachibana_slack(t, r);
            res1[static_cast<std::size_t>(c)] = bound_deficit(rep.report);
            res2[static_cast<std::size_t>(c)] =
                std::abs(rep.report.lhs - rep.gamma_weyl - rep.gamma_traceless) /
                std::max(rep.report.scale, 1e-300);
        });
        for (int c = 0; c < cases; ++c) {
            chk.observe(res1[static_cast<std::size_t>(c)], case_seed(opt.seed, 0xe571, c));
            split.observe(res2[static_cast<std::size_t>(c)], case_seed(opt.seed, 0xe571, c));
        }
        out.push_back(chk.result());
        out.push_back(split.result());
    }
    {
        Check chk("cubic_3d_matches_gamma", 1e-9 * opt.tol_scale);
        chk.run_cases(std::max(opt.cases, 200), opt.seed, [&](std::uint64_t s) {
            Rng rng(s, 0x3d);
            const double l = rng.uniform(-2, 3), mu = rng.uniform(-2, 3), nu = rng.uniform(-2, 3);
            SymTwoTensor e(3);
            e.set(0, 0, l);
            e.set(1, 1, mu);
            e.set(2, 2, nu);
            const CurvTensor t = curvature_from_ricci_3d(e);
            const double expect = hamilton_3d_form(l, mu, nu);
            const double got = gamma_quadratic_curv(t, t, t, ricci_contraction(t));
            return std::abs(expect - got) /
                   std::max({std::abs(expect), std::abs(got), t.norm2(), 1e-300});
        });
        out.push_back(chk.result());
    }
    {
        Check chk("cubic_3d_nonnegative_octant", 1e-12);
        const int grid = 50;
        std::vector<double> res(grid);
        parallel_cases(grid, [&](int i) {
            double worst = 0;
            for (int j = 0; j < grid; ++j)
                for (int k = 0; k < grid; ++k) {
                    const double a = 5.0 * i / (grid - 1);
                    const double b = 5.0 * j / (grid - 1);
                    const double c = 5.0 * k / (grid - 1);
                    const double v = hamilton_3d_form(a, b, c);
                    const double scale = std::max(1.0, a * a * a + b * b * b + c * c * c);
                    worst = std::max(worst, -v / scale);
                }
            res[static_cast<std::size_t>(i)] = worst;
        });
        for (int i = 0; i < grid; ++i) chk.observe(res[static_cast<std::size_t>(i)]);
        out.push_back(chk.result());
    }
    {
        Check chk("cubic_3d_zero_patterns", 1e-12);
        chk.run_cases(std::max(opt.cases, 200), opt.seed, [&](std::uint64_t s) {
            Rng rng(s, 0x00cc);
            const double c = rng.uniform(0, 5);
            double worst = std::abs(hamilton_3d_form(c, c, c));
            worst = std::max(worst, std::abs(hamilton_3d_form(0, c, c)));
            worst = std::max(worst, std::abs(hamilton_3d_form(c, 0, c)));
            worst = std::max(worst, std::abs(hamilton_3d_form(c, c, 0)));
            return worst / std::max(1.0, c * c * c);
        });
        out.push_back(chk.result());
    }
    return out;
}

// ------------------------------------------------------------------- jets

std::vector<CheckResult> suite_jets(const SuiteOptions& opt) {
    const int m = std::min(opt.m, 6);
    std::vector<CheckResult> out;

    {
        Check chk("jet_projection_residuals", 1e-10 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 4), opt.seed, [&](std::uint64_t s) {
            const CurvJet j = random_jet(m, s, true, (s & 1) != 0);
            const double dn = std::max(j.D.norm(), 1e-300);
            double worst = (j.D - project_slicewise_curvature(j.D)).norm() / dn;
            worst = std::max(worst, second_bianchi(j.D).norm() / dn);
            if (j.satisfies_div0) worst = std::max(worst, divergence(j).norm() / dn);
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("divergence_split_identity", 1e-9 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 2), opt.seed, [&](std::uint64_t s) {
            const CurvJet j = random_jet(m, s, true, false);
            const DivergenceReport rep = divergence_identities(j);
            return std::max({rep.div_split_residual, rep.codazzi_residual, rep.schur_residual,
                             rep.cotton_trace_residual});
        });
        out.push_back(chk.result());
    }
    {
        Check chk("weyl_jet_relations", 1e-9 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 2), opt.seed, [&](std::uint64_t s) {
            const CurvJet j = random_jet(m, s, true, false);
            const WeylJetReport rep = weyl_jet_relations(j);
            return std::max({rep.bw_component_residual, rep.divw_component_residual,
                             rep.bw_norm_residual, rep.divw_norm_residual});
        });
        out.push_back(chk.result());
    }
    {
        Check chk("jet_projector_idempotent_self_adjoint", 1e-11 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 4), opt.seed, [&](std::uint64_t s) {
            const DenseTensor a = random_tensor(m, 5, s);
            const DenseTensor b = random_tensor(m, 5, s ^ 0xbeefULL);
            double worst = 0;
            const auto test_projector = [&](auto&& proj) {
                const DenseTensor pa = proj(a);
                worst = std::max(worst, (proj(pa) - pa).norm() / std::max(pa.norm(), 1e-300));
                worst = std::max(worst, std::abs(pa.dot(b) - a.dot(proj(b))) /
                                            std::max(a.norm() * b.norm(), 1e-300));
            };
            test_projector([](const DenseTensor& x) { return project_slicewise_curvature(x); });
            test_projector([](const DenseTensor& x) { return project_second_bianchi(x); });
            test_projector([](const DenseTensor& x) { return project_divergence_free(x); });
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("harmonicity_equivalences", 1e-9 * opt.tol_scale);
        chk.run_cases(std::max(1, opt.cases / 4), opt.seed, [&](std::uint64_t s) {
            const CurvJet j0 = random_jet(m, s, true, true);
            const HarmonicityReport r0 = harmonicity_equivalences(j0);
            double worst = std::max(r0.cotton_residual, r0.grad_s_residual);
            if (!r0.equivalences_hold) worst = std::max(worst, 1.0);
            const CurvJet j1 = random_jet(m, s ^ 0x99ULL, true, false);
            const HarmonicityReport r1 = harmonicity_equivalences(j1);
            if (!r1.equivalences_hold) worst = std::max(worst, 1.0);
            // div T dominates grad S via the split identity
            if (r1.div_residual > 1e-6) {
                const double lb = r1.grad_s_residual / std::sqrt(2.0 * (m - 1));
                if (r1.div_residual < lb * (1.0 - 1e-9)) worst = std::max(worst, 1.0);
            }
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("geometric_jet_second_bianchi", 1e-6 * opt.tol_scale);
        const int cases = std::min(5, std::max(1, opt.cases / 40));
        chk.run_cases(cases, opt.seed, [&](std::uint64_t s) {
            const int mm = std::min(m, 4);
            const PolynomialMetric pm = PolynomialMetric::random_perturbation(mm, 0.05, s);
            const std::vector<double> x(mm, 0.0);
            const CurvJet j = nabla_riemann_at(pm, x, 1e-2);
            return second_bianchi(j.D).norm() / std::max(j.D.norm(), j.T.norm());
        });
        out.push_back(chk.result());
    }
    return out;
}

// ----------------------------------------------------------------- models

std::vector<CheckResult> suite_models(const SuiteOptions& opt) {
    std::vector<CheckResult> out;

    {
        Check chk("model_invariant_residuals", 1e-13);
        Rng rng(opt.seed, 0x30de15);
        for (int c = 0; c < std::max(10, opt.cases / 10); ++c) {
            const int mm = 3 + rng.uniform_int(5);
            const double kappa = rng.uniform(-2, 2);
            const CurvTensor t1 = constant_curvature(mm, kappa);
            chk.observe(std::max(symmetry_residual(t1.tensor()), bianchi_residual(t1.tensor())));
            const int p = 2 + rng.uniform_int(3);
            const int q = rng.uniform_int(3);
            const CurvTensor t2 = product_sphere_flat(p, rng.uniform(0.5, 2.0), q);
            chk.observe(std::max(symmetry_residual(t2.tensor()), bianchi_residual(t2.tensor())));
        }
        out.push_back(chk.result());
    }
    {
        Check chk("model_spectra_exact", 1e-10);
        const auto spectrum_matches = [](const CurvTensor& t, const std::vector<double>& expect) {
            const Spectrum sp = curvature_spectrum(t);
            double worst = 0;
            for (std::size_t i = 0; i < expect.size(); ++i)
                worst = std::max(worst, std::abs(sp.values[i] - expect[i]));
            return worst;
        };
        chk.observe(spectrum_matches(product_sphere_flat(2, 1.0, 1), {0, 0, 2}));
        chk.observe(spectrum_matches(product_sphere_flat(3, 1.0, 1), {0, 0, 0, 2, 2, 2}));
        chk.observe(spectrum_matches(product_sphere_flat(2, 1.0, 2), {0, 0, 0, 0, 0, 2}));
        chk.observe(spectrum_matches(constant_curvature(4, 1.0), {2, 2, 2, 2, 2, 2}));
        chk.observe(std::abs(partial_trace(curvature_spectrum(product_sphere_flat(3, 1.0, 1)), 1)));
        // T^2 x S^2 has |W|^2 = 4/3
        const Decomposition d = decompose(product_sphere_flat(2, 1.0, 2));
        chk.observe(std::abs(d.W.norm2() - 4.0 / 3.0));
        out.push_back(chk.result());
    }
    {
        Check chk("ricci_prescription_3d", 1e-12);
        chk.run_cases(std::max(opt.cases, 200), opt.seed, [&](std::uint64_t s) {
            const SymTwoTensor e = random_sym_two_tensor(3, s);
            const CurvTensor t = curvature_from_ricci_3d(e);
            const SymTwoTensor back = ricci_contraction(t);
            double worst = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    worst = std::max(worst, std::abs(back(i, j) - e(i, j)));
            worst /= std::max(1.0, std::sqrt(e.norm2()));
            worst = std::max(worst, decompose(t).W.norm() / std::max(t.norm(), 1e-300));
            return worst;
        });
        out.push_back(chk.result());
    }
    return out;
}

// -------------------------------------------------------------- metriclab

std::vector<CheckResult> suite_metriclab(const SuiteOptions& opt) {
    const int m = std::min(opt.m, 4);
    std::vector<CheckResult> out;

    {
        Check chk("coordinate_curvature_witnesses", 1e-8);
        // flat metric has zero curvature
        const PolynomialMetric flat = PolynomialMetric::euclidean(m);
        const std::vector<double> x0(m, 0.0);
        chk.observe(riemann_at(flat, x0).riem.norm());
        // g = id + eps x1^2 e2 x e2 gives R_1212(0) = -eps
        {
            const double eps = 1e-3;
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
            const PolynomialMetric pm(m, std::move(e), 0.8);
            const double r1212 = riemann_at(pm, x0).riem.at(0, 1, 0, 1);
            chk.observe(std::abs(r1212 + eps) / eps);
        }
        // degree-4 round-metric truncation: sectional curvatures at 0 equal kappa
        {
            const double kappa = 1.0;
            const PolynomialMetric pm = PolynomialMetric::sphere_normal_truncation(m, kappa);
            const CurvTensor t = riemann_orthonormal_at(pm, x0);
            double worst = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    worst = std::max(worst, std::abs(t.at(i, j, i, j) - kappa));
            chk.observe(worst);
            chk.observe(std::max(symmetry_residual(t.tensor()), bianchi_residual(t.tensor())) *
                        1e-1);
        }
        out.push_back(chk.result());
    }
    {
        Check chk("geometric_first_bianchi", 1e-9);
        chk.run_cases(std::max(1, std::min(10, opt.cases / 20)), opt.seed, [&](std::uint64_t s) {
            const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, s);
            Rng rng(s, 0x97);
            std::vector<double> x(m);
            for (double& v : x) v = 0.05 * rng.normal();
            const PointCurvature pc = riemann_at(pm, x);
            return std::max(symmetry_residual(pc.riem.tensor()),
                            bianchi_residual(pc.riem.tensor()));
        });
        out.push_back(chk.result());
    }
    {
        Check chk("locally_symmetric_truncation", 1e-5);
        const PolynomialMetric pm = PolynomialMetric::sphere_normal_truncation(m, 1.0);
        const std::vector<double> x0(m, 0.0);
        const CurvJet j = nabla_riemann_at(pm, x0, 1e-2);
        chk.observe(j.D.norm());
        out.push_back(chk.result());
    }
    {
        Check chk("fd_order_second_bianchi", 1e-12);
        // the log-log slope of the B2 residual in h must be >= 3.5;
        // recorded as the slope deficit so that "residual <= tol" is the pass rule
        const PolynomialMetric pm =
            PolynomialMetric::random_perturbation(m, 0.05, opt.seed ^ 0x0cdeULL);
        const std::vector<double> x0(m, 0.0);
        std::vector<double> hs{4e-2, 2e-2, 1e-2, 5e-3};
        std::vector<double> lr;
        for (double h : hs) {
            const CurvJet j = nabla_riemann_at(pm, x0, h);
            lr.push_back(std::log(second_bianchi(j.D).norm() /
                                  std::max(j.D.norm(), j.T.norm())));
        }
        // least-squares slope of log(residual) vs log(h)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(hs.size());
        for (int i = 0; i < n; ++i) {
            const double lx = std::log(hs[static_cast<std::size_t>(i)]);
            sx += lx;
            sy += lr[static_cast<std::size_t>(i)];
            sxx += lx * lx;
            sxy += lx * lr[static_cast<std::size_t>(i)];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        chk.observe(std::max(0.0, 3.5 - slope));
        out.push_back(chk.result("observed slope " + std::to_string(slope)));
    }
    {
        Check chk("chart_rotation_covariance", 1e-8);
        chk.run_cases(2, opt.seed, [&](std::uint64_t s) {
            const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, s);
            const Matrix q = random_orthogonal(m, s ^ 0x0123ULL);
            const PolynomialMetric pmq = pm.rotated(q);
            const std::vector<double> x0(m, 0.0);
            const CurvJet a = nabla_riemann_at(pm, x0, 1e-2);
            const CurvJet b = nabla_riemann_at(pmq, x0, 1e-2);
            double worst = rel_diff(a.T.norm2(), b.T.norm2());
            worst = std::max(worst, rel_diff(a.D.norm2(), b.D.norm2()));
            const Spectrum sa = curvature_spectrum(a.T), sb = curvature_spectrum(b.T);
            for (int k = 0; k < sa.n; ++k)
                worst = std::max(worst, std::abs(sa.values[k] - sb.values[k]) /
                                            std::max(1.0, sa.op_norm()));
            return worst;
        });
        out.push_back(chk.result());
    }
    {
        Check chk("gamma_commutator_agreement", 1e-4);
        chk.run_cases(2, opt.seed, [&](std::uint64_t s) {
            const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, s);
            const std::vector<double> x0(m, 0.0);
            return gamma_commutator_residual(pm, x0, 1e-2);
        });
        out.push_back(chk.result());
    }
    {
        Check chk("bochner_single_sign_closure", 1e-3);
        int plus_wins = 0, minus_wins = 0;
        const int cases = std::max(2, std::min(5, opt.cases / 40));
        std::vector<BochnerResiduals> rs(static_cast<std::size_t>(cases));
        parallel_cases(cases, [&](int c) {
            const std::uint64_t s = case_seed(opt.seed, 0xb0c4, c);
            const PolynomialMetric pm = PolynomialMetric::random_perturbation(m, 0.05, s);
            const std::vector<double> x0(m, 0.0);
            rs[static_cast<std::size_t>(c)] = bochner_residual(pm, x0, 1e-2);
        });
        for (int c = 0; c < cases; ++c) {
            const BochnerResiduals& r = rs[static_cast<std::size_t>(c)];
            const double rp = std::abs(r.residual_plus) / r.scale;
            const double rm = std::abs(r.residual_minus) / r.scale;
            chk.observe(std::min(rp, rm), case_seed(opt.seed, 0xb0c4, c));
            if (rp < rm)
                ++plus_wins;
            else
                ++minus_wins;
            // exactly one sign may close
            if (rp < 1e-3 && rm < 1e-3) chk.observe(1.0, case_seed(opt.seed, 0xb0c4, c));
        }
        std::string detail = "closing sign: ";
        detail += (plus_wins >= minus_wins) ? "+div X" : "-div X";
        if (plus_wins != 0 && minus_wins != 0) detail += " (inconsistent across seeds)";
        if (plus_wins != 0 && minus_wins != 0) chk.observe(1.0);
        out.push_back(chk.result(detail));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"core",   "spectral", "algebra", "estimates",
                                                "jets",   "models",   "metriclab"};
    return names;
}

bool is_suite(const std::string& name) {
    if (name == "all") return true;
    for (const std::string& n : suite_names())
        if (n == name) return true;
    return false;
}

void parallel_cases(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) fn(i);
        });
    for (std::thread& t : pool) t.join();
}

std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opt) {
    if (!is_suite(suite)) throw domain_error("unknown suite: " + suite);
    if (opt.m < 3 || opt.m > 10) throw domain_error("suite dimension must be in 3..10");
    std::vector<CheckResult> out;
    const auto append = [&](std::vector<CheckResult> r) {
        out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    };
    if (suite == "core" || suite == "all") append(suite_core(opt));
    if (suite == "spectral" || suite == "all") append(suite_spectral(opt));
    if (suite == "algebra" || suite == "all") append(suite_algebra(opt));
    if (suite == "estimates" || suite == "all") append(suite_estimates(opt));
    if (suite == "jets" || suite == "all") append(suite_jets(opt));
    if (suite == "models" || suite == "all") append(suite_models(opt));
    if (suite == "metriclab" || suite == "all") append(suite_metriclab(opt));
    return out;
}

}  // namespace curvlab::verify
