#pragma once

#include "curvlab/algebra.hpp"

namespace curvlab {

/// <Gamma W, W> >= 2(m-1) C |W|^2 for totally traceless W, with C the
/// partial trace of the background operator at floor((m-1)/2).  C is always
/// recomputed from the actual spectrum of `r`.
BoundReport weyl_bound_slack(const CurvTensor& w, const CurvTensor& r);

/// <Gamma Z, Z> >= 2m C |Z|^2 for traceless symmetric Z, with the certified
/// constant C = (1/2) partial trace at floor(m/2).  Cross-checks the
/// eigenframe identity <Gamma Z,Z> = sum_ij R'_ijij (zeta_i - zeta_j)^2 and
/// sum_ij (zeta_i - zeta_j)^2 = 2m |Z|^2.
BoundReport traceless_bound_slack(const SymTwoTensor& z, const CurvTensor& r);

/// <Gamma T, T> >= 2(m-1) C |P|^2 for every algebraic curvature tensor,
/// C = partial trace at floor((m-1)/2).  The report records how the left
/// side splits into its Weyl and traceless-Ricci parts.
struct TachibanaReport {
    BoundReport report;
    double gamma_weyl = 0;       // <Gamma W, W>
    double gamma_traceless = 0;  // 4/(m-2) <Gamma Z, Z>
};
TachibanaReport tachibana_slack(const CurvTensor& t, const CurvTensor& r);

/// 8 [ l(l-mu)(l-nu) + mu(mu-l)(mu-nu) + nu(nu-l)(nu-mu) ]: the value of
/// <Gamma Riem, Riem> on the 3-dimensional curvature tensor with Ricci
/// eigenvalues (l, mu, nu).  Nonnegative on the nonnegative octant, zero
/// exactly when all eigenvalues agree or the pattern is {0, c, c}.
double hamilton_3d_form(double l, double mu, double nu);

}  // namespace curvlab
