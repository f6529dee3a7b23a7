#pragma once

#include "curvlab/tensor.hpp"

namespace curvlab {

/// T = (kappa/2) g ^ g, so every sectional curvature equals kappa and the
/// curvature operator is 2 kappa times the identity.
CurvTensor constant_curvature(int m, double kappa);

/// Riemannian product S^p(r) x R^q in an adapted orthonormal frame: sphere
/// planes have sectional curvature 1/r^2, mixed and flat planes vanish.
/// Requires p >= 2, r > 0, q >= 0.
CurvTensor product_sphere_flat(int p, double r, int q);

/// The 3-dimensional curvature tensor with prescribed Ricci contraction:
/// T_ijkt = E_ik g_jt + E_jt g_ik - E_it g_jk - E_jk g_it
///          - (S/2)(g_ik g_jt - g_it g_jk).
CurvTensor curvature_from_ricci_3d(const SymTwoTensor& e);

}  // namespace curvlab
