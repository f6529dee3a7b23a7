#include "curvlab/estimates.hpp"

#include <cmath>

namespace curvlab {

namespace {

double bound_scale(double lhs, double rhs, double tensor_norm2, const Spectrum& sp) {
    return std::max({std::abs(lhs), std::abs(rhs), tensor_norm2 * sp.op_norm(), 1e-300});
}

}  // namespace

BoundReport weyl_bound_slack(const CurvTensor& w, const CurvTensor& r) {
    const int m = w.dim();
    if (r.dim() != m) throw shape_error("weyl_bound_slack: dimension mismatch");
    const SymTwoTensor ew = ricci_contraction(w);
    if (std::sqrt(ew.norm2()) > 1e-10 * std::max(1.0, w.norm()))
        throw domain_error("weyl_bound_slack: tensor is not totally traceless");

    const SymTwoTensor ric = ricci_contraction(r);
    const Spectrum sp = curvature_spectrum(r);
    const int k = std::max(1, (m - 1) / 2);
    const double c = partial_trace(sp, k);
    const double lhs = gamma_quadratic_curv(w, w, r, ric);
    const double rhs = 2.0 * (m - 1) * c * w.norm2();
    return make_bound_report(lhs, rhs, bound_scale(lhs, rhs, w.norm2(), sp), true,
                             "weyl_gamma_bound");
}

BoundReport traceless_bound_slack(const SymTwoTensor& z, const CurvTensor& r) {
    const int m = z.dim();
    if (r.dim() != m) throw shape_error("traceless_bound_slack: dimension mismatch");
    if (std::abs(z.trace()) > 1e-12 * std::max(1.0, std::sqrt(z.norm2())))
        throw domain_error("traceless_bound_slack: tensor has nonzero trace");

    const SymTwoTensor ric = ricci_contraction(r);
    const Spectrum sp = curvature_spectrum(r);
    const double c = 0.5 * partial_trace(sp, std::max(1, m / 2));
    const double lhs = gamma_quadratic_sym(z, z, r, ric);
    const double rhs = 2.0 * m * c * z.norm2();

    // cross-check the eigenframe form: sum_ij R'_ijij (zeta_i - zeta_j)^2
    const Spectrum ze = sym_eigen(z.as_matrix());
    const Matrix frame = ze.vectors.transposed();  // rows = eigenvectors
    const CurvTensor rz = CurvTensor::unchecked(transform_all_slots(r.tensor(), frame));
    double eigenframe = 0, spread = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double d = ze.values[i] - ze.values[j];
            eigenframe += rz.at(i, j, i, j) * d * d;
            spread += d * d;
        }
    const double scale = bound_scale(lhs, rhs, z.norm2(), sp);
    if (std::abs(eigenframe - lhs) > 1e-9 * scale)
        throw consistency_error("traceless_bound_slack: eigenframe identity failed");
    if (std::abs(spread - 2.0 * m * z.norm2()) > 1e-9 * std::max(1.0, 2.0 * m * z.norm2()))
        throw consistency_error("traceless_bound_slack: eigenvalue spread identity failed");

    return make_bound_report(lhs, rhs, scale, true, "traceless_gamma_bound");
}

TachibanaReport tachibana_slack(const CurvTensor& t, const CurvTensor& r) {
    const int m = t.dim();
    if (m < 3) throw domain_error("tachibana_slack: requires m >= 3");
    if (r.dim() != m) throw shape_error("tachibana_slack: dimension mismatch");

    const SymTwoTensor ric = ricci_contraction(r);
    const Spectrum sp = curvature_spectrum(r);
    const double c = partial_trace(sp, std::max(1, (m - 1) / 2));
    const Decomposition d = decompose(t);

    TachibanaReport out;
    out.gamma_weyl = gamma_quadratic_curv(d.W, d.W, r, ric);
    out.gamma_traceless = 4.0 / (m - 2) * gamma_quadratic_sym(d.Z, d.Z, r, ric);
    const double lhs = gamma_quadratic_curv(t, t, r, ric);
    const double p2 = pseudo_projective(t).norm2();
    const double rhs = 2.0 * (m - 1) * c * p2;
    out.report = make_bound_report(lhs, rhs, bound_scale(lhs, rhs, t.norm2(), sp), true,
                                   "projective_gamma_bound");
    return out;
}

double hamilton_3d_form(double l, double mu, double nu) {
    return 8.0 * (l * (l - mu) * (l - nu) + mu * (mu - l) * (mu - nu) +
                  nu * (nu - l) * (nu - mu));
}

}  // namespace curvlab
