#include "curvlab/models.hpp"

namespace curvlab {

CurvTensor constant_curvature(int m, double kappa) {
    if (m < 2) throw domain_error("constant_curvature: requires m >= 2");
    DenseTensor t(m, 4);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            t.at(i, j, i, j) += kappa;
            t.at(i, j, j, i) -= kappa;
        }
    return CurvTensor::unchecked(std::move(t));
}

CurvTensor product_sphere_flat(int p, double r, int q) {
    if (p < 2) throw domain_error("product_sphere_flat: sphere factor needs p >= 2");
    if (!(r > 0)) throw domain_error("product_sphere_flat: radius must be positive");
    if (q < 0) throw domain_error("product_sphere_flat: flat factor needs q >= 0");
    const int m = p + q;
    const double kappa = 1.0 / (r * r);
    DenseTensor t(m, 4);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            if (i == j) continue;
            t.at(i, j, i, j) += kappa;
            t.at(i, j, j, i) -= kappa;
        }
    return CurvTensor::unchecked(std::move(t));
}

CurvTensor curvature_from_ricci_3d(const SymTwoTensor& e) {
    const int m = e.dim();
    if (m != 3) throw domain_error("curvature_from_ricci_3d: requires m = 3");
    const double s = e.trace();
    DenseTensor t(m, 4);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    double v = 0;
                    if (j == l) v += e(i, k);
                    if (i == k) v += e(j, l);
                    if (j == k) v -= e(i, l);
                    if (i == l) v -= e(j, k);
                    if (i == k && j == l) v -= 0.5 * s;
                    if (i == l && j == k) v += 0.5 * s;
                    t.at(i, j, k, l) = v;
                }
    return CurvTensor::unchecked(std::move(t));
}

}  // namespace curvlab
