#include "curvlab/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

SymTwoTensor identity_sym(int m) {
    SymTwoTensor g(m);
    for (int i = 0; i < m; ++i) g.set(i, i, 1.0);
    return g;
}

// Iterate all rank-q multi-indices.
template <typename F>
void for_each_index(int m, int q, F&& f) {
    std::array<int, 6> idx{};
    while (true) {
        f(std::span<const int>(idx.data(), static_cast<std::size_t>(q)));
        int s = q - 1;
        while (s >= 0 && ++idx[s] == m) idx[s--] = 0;
        if (s < 0) break;
    }
}

}  // namespace

Decomposition decompose(const CurvTensor& t) {
    const int m = t.dim();
    if (m < 3) throw domain_error("decompose: requires m >= 3");
    Decomposition d;
    d.E = ricci_contraction(t);
    d.S = d.E.trace();
    d.Z = d.E;
    for (int i = 0; i < m; ++i) d.Z.set(i, i, d.Z(i, i) - d.S / m);
    d.A = d.E;
    for (int i = 0; i < m; ++i) d.A.set(i, i, d.A(i, i) - d.S / (2.0 * (m - 1)));

    const SymTwoTensor g = identity_sym(m);
    d.V = CurvTensor::unchecked((1.0 / (m - 2)) * kulkarni_nomizu(d.Z, g).tensor());
    d.U = CurvTensor::unchecked((d.S / (2.0 * m * (m - 1))) * kulkarni_nomizu(g, g).tensor());
    d.W = CurvTensor::unchecked(t.tensor() - d.V.tensor() - d.U.tensor());
    return d;
}

DenseTensor pseudo_projective(const CurvTensor& t) {
    const int m = t.dim();
    if (m < 2) throw domain_error("pseudo_projective: requires m >= 2");
    const SymTwoTensor e = ricci_contraction(t);
    DenseTensor p = t.tensor();
    const double c = 1.0 / (m - 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                // g_ik E_jt - g_it E_jk with identity metric
                for (int l = 0; l < m; ++l) {
                    double corr = 0;
                    if (i == k) corr += e(j, l);
                    if (i == l) corr -= e(j, k);
                    p.at(i, j, k, l) -= c * corr;
                }
            }
    return p;
}

Matrix curvature_operator_matrix(const CurvTensor& t) {
    const int m = t.dim();
    const int n = binomial2(m);
    Matrix op(n);
    int row = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j, ++row) {
            int col = 0;
            for (int k = 0; k < m; ++k)
                for (int l = k + 1; l < m; ++l, ++col) op(row, col) = 2.0 * t.at(i, j, k, l);
        }
    return op;
}

Spectrum curvature_spectrum(const CurvTensor& t) { return sym_eigen(curvature_operator_matrix(t)); }

TwoForm eigen_two_form(const Spectrum& s, int m, int alpha) {
    if (s.n != binomial2(m)) throw shape_error("eigen_two_form: spectrum size mismatch");
    if (alpha < 0 || alpha >= s.n) throw domain_error("eigen_two_form: index out of range");
    TwoForm w(m);
    const double inv_sqrt2 = 0.70710678118654752440;
    int row = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j, ++row) w.set(i, j, s.vectors(row, alpha) * inv_sqrt2);
    return w;
}

DenseTensor hat(const DenseTensor& q) {
    const int rank = q.rank();
    if (rank < 1 || rank > 4) throw domain_error("hat: rank must be in 1..4");
    const int m = q.dim();
    DenseTensor out(m, rank + 2);
    std::array<int, 6> jdx{};
    for_each_index(m, rank, [&](std::span<const int> idx) {
        std::copy(idx.begin(), idx.end(), jdx.begin());
        for (int s = 0; s < m; ++s)
            for (int r = 0; r < m; ++r) {
                if (s == r) continue;
                double v = 0;
                for (int l = 0; l < rank; ++l) {
                    const int orig = jdx[l];
                    if (orig == r) {
                        jdx[l] = s;
                        v += 0.5 * q.data()[q.flat_index({jdx.data(), idx.size()})];
                        jdx[l] = orig;
                    }
                    if (orig == s) {
                        jdx[l] = r;
                        v -= 0.5 * q.data()[q.flat_index({jdx.data(), idx.size()})];
                        jdx[l] = orig;
                    }
                }
                jdx[rank] = s;
                jdx[rank + 1] = r;
                out.data()[out.flat_index({jdx.data(), idx.size() + 2})] = v;
            }
    });
    return out;
}

DenseTensor gamma(const DenseTensor& q, const CurvTensor& r, const SymTwoTensor& ric) {
    const int rank = q.rank();
    if (rank < 1 || rank > 4) throw domain_error("gamma: rank must be in 1..4");
    const int m = q.dim();
    if (r.dim() != m || ric.dim() != m) throw shape_error("gamma: dimension mismatch");

    const SymTwoTensor check = ricci_contraction(r);
    double diff = 0, scale = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            diff = std::max(diff, std::abs(check(i, j) - ric(i, j)));
            scale = std::max(scale, std::abs(check(i, j)));
        }
    if (diff > 1e-10 * std::max(1.0, scale))
        throw consistency_error("gamma: ric does not match the Ricci contraction of r");

    DenseTensor out(m, rank);
    std::array<int, 6> jdx{};
    for_each_index(m, rank, [&](std::span<const int> idx) {
        std::copy(idx.begin(), idx.end(), jdx.begin());
        double val = 0;
        for (int l = 0; l < rank; ++l) {
            const int il = idx[l];
            for (int j = 0; j < m; ++j) {
                jdx[l] = j;
                val += ric(il, j) * q.data()[q.flat_index({jdx.data(), idx.size()})];
            }
            jdx[l] = il;
        }
        for (int l = 0; l < rank; ++l)
            for (int h = 0; h < rank; ++h) {
                if (h == l) continue;
                const int il = idx[l], ih = idx[h];
                for (int j = 0; j < m; ++j) {
                    jdx[l] = j;
                    for (int tt = 0; tt < m; ++tt) {
                        jdx[h] = tt;
                        val -= r.at(il, j, ih, tt) *
                               q.data()[q.flat_index({jdx.data(), idx.size()})];
                    }
                    jdx[h] = ih;
                }
                jdx[l] = il;
            }
        out.data()[out.flat_index(idx)] = val;
    });
    return out;
}

namespace {

double hat_route(const DenseTensor& q, const DenseTensor& v, const CurvTensor& r) {
    const int m = q.dim();
    const DenseTensor qh = hat(q);
    const DenseTensor vh = hat(v);
    // <R^{T0q} qh, vh> = sum_{s,r,k,t} R_srkt G[(s,r),(k,t)] with
    // G = sum_I qh(I,s,r) vh(I,k,t)
    const std::size_t m2 = static_cast<std::size_t>(m) * m;
    std::vector<double> gram(m2 * m2, 0.0);
    const std::size_t block = m2;  // trailing (s,r) block of qh/vh
    const std::size_t outer = qh.size() / block;
    const auto& qd = qh.data();
    const auto& vd = vh.data();
    for (std::size_t o = 0; o < outer; ++o) {
        const double* qrow = qd.data() + o * block;
        const double* vrow = vd.data() + o * block;
        for (std::size_t a = 0; a < m2; ++a) {
            const double qa = qrow[a];
            if (qa == 0.0) continue;
            double* grow = gram.data() + a * m2;
            for (std::size_t b = 0; b < m2; ++b) grow[b] += qa * vrow[b];
        }
    }
    double total = 0;
    for (int s = 0; s < m; ++s)
        for (int rr = 0; rr < m; ++rr)
            for (int k = 0; k < m; ++k)
                for (int t = 0; t < m; ++t)
                    total += r.at(s, rr, k, t) *
                             gram[(static_cast<std::size_t>(s) * m + rr) * m2 +
                                  static_cast<std::size_t>(k) * m + t];
    return total;
}

}  // namespace

double gamma_quadratic_curv(const CurvTensor& t, const CurvTensor& tt, const CurvTensor& r,
                            const SymTwoTensor& ric) {
    const int m = t.dim();
    // 4 Ric_is T_sjkt Tt_ijkt - 4 R_isjl T_slkt Tt_ijkt - 8 R_iskl T_sjlt Tt_ijkt
    double term1 = 0;
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s) {
            const double ris = ric(i, s);
            if (ris == 0.0) continue;
            double dot = 0;
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) dot += t.at(s, j, k, l) * tt.at(i, j, k, l);
            term1 += ris * dot;
        }
    // U[(s,l),(i,j)] = sum_{kt} T_slkt Tt_ijkt ; V[(s,l),(i,k)] = sum_{jt} T_sjlt Tt_ijkt
    double term2 = 0, term3 = 0;
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s)
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < m; ++l) {
                    double u = 0;
                    for (int k = 0; k < m; ++k)
                        for (int tt2 = 0; tt2 < m; ++tt2)
                            u += t.at(s, l, k, tt2) * tt.at(i, j, k, tt2);
                    term2 += r.at(i, s, j, l) * u;
                }
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    double w = 0;
                    for (int j = 0; j < m; ++j)
                        for (int tt2 = 0; tt2 < m; ++tt2)
                            w += t.at(s, j, l, tt2) * tt.at(i, j, k, tt2);
                    term3 += r.at(i, s, k, l) * w;
                }
    return 4.0 * term1 - 4.0 * term2 - 8.0 * term3;
}

double gamma_quadratic_sym(const SymTwoTensor& e, const SymTwoTensor& et, const CurvTensor& r,
                           const SymTwoTensor& ric) {
    const int m = e.dim();
    double term1 = 0, term2 = 0;
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s)
            for (int j = 0; j < m; ++j) term1 += ric(i, s) * e(s, j) * et(i, j);
    for (int i = 0; i < m; ++i)
        for (int s = 0; s < m; ++s)
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < m; ++l) term2 += r.at(i, s, j, l) * e(l, s) * et(i, j);
    return 2.0 * term1 - 2.0 * term2;
}

GammaRoutes gamma_quadratic(const DenseTensor& q, const DenseTensor& v, const CurvTensor& r) {
    if (q.dim() != v.dim() || q.rank() != v.rank())
        throw shape_error("gamma_quadratic: shape mismatch");
    const int rank = q.rank();
    const int m = q.dim();
    const SymTwoTensor ric = ricci_contraction(r);

    GammaRoutes out;
    out.route_def = gamma(q, r, ric).dot(v);
    out.route_hat = hat_route(q, v, r);

    if (rank == 1) {
        double s = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s += ric(i, j) * q.at(i) * v.at(j);
        out.route_closed = s;
    } else if (rank == 2) {
        auto symmetric = [m](const DenseTensor& x) {
            double worst = 0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(x.at(i, j) - x.at(j, i)));
            return worst <= 1e-10 * std::max(1.0, x.norm());
        };
        if (symmetric(q) && symmetric(v)) {
            SymTwoTensor e(m), et(m);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j) {
                    e.set(i, j, q.at(i, j));
                    et.set(i, j, v.at(i, j));
                }
            out.route_closed = gamma_quadratic_sym(e, et, r, ric);
        }
    } else if (rank == 4) {
        const double tol = 1e-6;
        if (symmetry_residual(q) < tol && bianchi_residual(q) < tol &&
            symmetry_residual(v) < tol && bianchi_residual(v) < tol)
            out.route_closed = gamma_quadratic_curv(CurvTensor::unchecked(q),
                                                    CurvTensor::unchecked(v), r, ric);
    }
    return out;
}

std::vector<BoundReport> gamma_split_check(const CurvTensor& t, const CurvTensor& tt,
                                           const CurvTensor& r) {
    const int m = t.dim();
    if (m < 3) throw domain_error("gamma_split_check: requires m >= 3");
    const SymTwoTensor ric = ricci_contraction(r);
    const Decomposition dt = decompose(t);
    const Decomposition dtt = decompose(tt);
    const SymTwoTensor g = identity_sym(m);

    std::vector<BoundReport> reports;
    const double big = std::max({t.norm2(), tt.norm2(), 1.0}) * std::max(1.0, r.norm());

    {
        const double full = gamma_quadratic_curv(t, tt, r, ric);
        const double weyl = gamma_quadratic_curv(dt.W, dtt.W, r, ric);
        const double tr = gamma_quadratic_sym(dt.Z, dtt.Z, r, ric);
        const double recon = weyl + 4.0 / (m - 2) * tr;
        reports.push_back(make_bound_report(-std::abs(full - recon), 0.0,
                                            std::max({std::abs(full), std::abs(recon), big}),
                                            true, "gamma_split"));
    }
    {
        const CurvTensor eg = kulkarni_nomizu(dtt.E, g);
        const double ortho = gamma_quadratic_curv(dt.W, eg, r, ric);
        reports.push_back(make_bound_report(-std::abs(ortho), 0.0, big, true,
                                            "gamma_weyl_kn_orthogonal"));
    }
    {
        const CurvTensor eg = kulkarni_nomizu(dt.E, g);
        const CurvTensor etg = kulkarni_nomizu(dtt.E, g);
        const double lhs = gamma_quadratic_curv(eg, etg, r, ric);
        const double rhs = 4.0 * (m - 2) * gamma_quadratic_sym(dt.E, dtt.E, r, ric);
        reports.push_back(make_bound_report(-std::abs(lhs - rhs), 0.0,
                                            std::max({std::abs(lhs), std::abs(rhs), big}), true,
                                            "gamma_kn_factor"));
    }
    return reports;
}

double sectional(const CurvTensor& r, std::span<const double> x, std::span<const double> y) {
    const int m = r.dim();
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != m)
        throw shape_error("sectional: vector dimension mismatch");
    double xx = 0, yy = 0;
    for (int i = 0; i < m; ++i) {
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    const TwoForm w = TwoForm::wedge(x, y);
    const double w2 = w.norm2();
    if (w2 < 1e-14 * xx * yy) throw domain_error("sectional: degenerate plane");
    double quad = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) quad += r.at(i, j, k, l) * w(i, j) * w(k, l);
    return 0.5 * quad / w2;
}

SectKBounds sect_k_bounds(const CurvTensor& r, int k, int samples, std::uint64_t seed) {
    const int m = r.dim();
    const int n = binomial2(m);
    if (k < 1 || k > n) throw domain_error("sect_k_bounds: k out of range");

    SectKBounds out;
    out.certified_lower = 0.5 * partial_trace(curvature_spectrum(r), k);

    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < samples; ++c) {
        const Matrix q = random_orthogonal(m, seed + 0x5b3f9e1cull * (c + 1));
        const CurvTensor rq = CurvTensor::unchecked(transform_all_slots(r.tensor(), q));
        // all coordinate planes of the rotated frame are mutually orthogonal;
        // pick the k smallest sectional curvatures among them
        std::vector<double> sect;
        sect.reserve(n);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) sect.push_back(rq.at(i, j, i, j));
        std::sort(sect.begin(), sect.end());
        double avg = 0;
        for (int i = 0; i < k; ++i) avg += sect[i];
        best = std::min(best, avg / k);
    }
    if (samples <= 0) best = out.certified_lower;
    out.sampled_min = best;
    return out;
}

}  // namespace curvlab
