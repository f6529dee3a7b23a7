#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curvlab/spectral.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

/// Orthogonal O(m)-decomposition T = W + V + U of an algebraic curvature
/// tensor, together with its Ricci contraction E, total trace S, traceless
/// part Z and Schouten-like tensor A = E - S/(2(m-1)) g.
struct Decomposition {
    SymTwoTensor E;
    double S = 0;
    SymTwoTensor Z;
    SymTwoTensor A;
    CurvTensor W;
    CurvTensor V;
    CurvTensor U;
};

/// All operations in this module assume an orthonormal frame (identity
/// metric); callers holding tensors in a general frame orthonormalize first.
Decomposition decompose(const CurvTensor& t);

/// P_ijkt = T_ijkt - (E_jt g_ik - E_jk g_it)/(m-1); vanishes exactly when T
/// is a multiple of g ^ g.  Not an algebraic curvature tensor.
DenseTensor pseudo_projective(const CurvTensor& t);

/// The curvature operator on 2-forms as a symmetric C(m,2) x C(m,2) matrix
/// in the lexicographic basis {(1/sqrt 2) e_i ^ e_j : i < j}; the entry for
/// ((i,j),(k,t)) is 2 T_ijkt.
Matrix curvature_operator_matrix(const CurvTensor& t);
Spectrum curvature_spectrum(const CurvTensor& t);

/// Recover the eigen-2-form for column alpha of a curvature spectrum.
TwoForm eigen_two_form(const Spectrum& s, int m, int alpha);

/// Associated tensor-valued 2-form: rank q -> rank q+2, antisymmetric in the
/// two appended slots.  q in {1,...,4}.
DenseTensor hat(const DenseTensor& q);

/// Lichnerowicz-type curvature action on rank-q tensors (q in {1,...,4}).
/// `ric` must equal the Ricci contraction of `r` (verified).
DenseTensor gamma(const DenseTensor& q, const CurvTensor& r, const SymTwoTensor& ric);

/// The quadratic form <Gamma Q, V> evaluated along independent routes:
/// the defining sum, the hat-map route through the curvature operator, and
/// (when shapes permit: q = 1, symmetric q = 2, curvature q = 4) a closed
/// contraction formula.
struct GammaRoutes {
    double route_def = 0;
    double route_hat = 0;
    std::optional<double> route_closed;
};
GammaRoutes gamma_quadratic(const DenseTensor& q, const DenseTensor& v, const CurvTensor& r);

/// Fast closed-form quadratic <Gamma T, Ttilde> for curvature tensors.
double gamma_quadratic_curv(const CurvTensor& t, const CurvTensor& tt, const CurvTensor& r,
                            const SymTwoTensor& ric);
/// Closed-form quadratic for symmetric 2-tensors.
double gamma_quadratic_sym(const SymTwoTensor& e, const SymTwoTensor& et, const CurvTensor& r,
                           const SymTwoTensor& ric);

/// Residual checks of the splitting <Gamma T,Tt> = <Gamma W,Wt> +
/// 4/(m-2) <Gamma Z,Zt>, the orthogonality <Gamma W, E^g> = 0 and the
/// Kulkarni-Nomizu factor <Gamma(E^g), Et^g> = 4(m-2) <Gamma E,Et>.
std::vector<BoundReport> gamma_split_check(const CurvTensor& t, const CurvTensor& tt,
                                           const CurvTensor& r);

/// Sectional curvature of span{X, Y}; throws on (near-)degenerate planes.
double sectional(const CurvTensor& r, std::span<const double> x, std::span<const double> y);

/// Certified lower bound (half the k-th partial trace) for the averaged
/// sectional curvature over k mutually orthogonal planes, plus a stochastic
/// upper estimate from random-frame coordinate-plane collections.
struct SectKBounds {
    double certified_lower = 0;
    double sampled_min = 0;
};
SectKBounds sect_k_bounds(const CurvTensor& r, int k, int samples, std::uint64_t seed);

}  // namespace curvlab
