#pragma once

#include <cstdint>

#include "curvlab/tensor.hpp"

namespace curvlab {

/// One-point first jet of an algebraic curvature tensor: the value T and an
/// independent rank-5 array D with D[i,j,k,t,l] = T_ijkt,l.  Every slice
/// D[.,.,.,.,l] carries the curvature symmetries; the flags record which
/// additional linear constraints the jet was built to satisfy.
struct CurvJet {
    CurvTensor T;
    DenseTensor D;
    bool satisfies_B2 = false;
    bool satisfies_div0 = false;

    int dim() const { return T.dim(); }
};

/// B(T)_ijktl = T_ijkt,l + T_ijlk,t + T_ijtl,k (cyclic over the slots k,t,l).
DenseTensor second_bianchi(const DenseTensor& d);
DenseTensor second_bianchi(const CurvJet& j);

/// (div T)_jkt = D[i,j,k,t,i] summed over i.
DenseTensor divergence(const CurvJet& j);
/// E_jt,l: derivative of the Ricci contraction, by metric traces of D.
DenseTensor nabla_ricci(const CurvJet& j);
/// S_l: derivative of the total trace.
std::vector<double> nabla_scalar(const CurvJet& j);
/// Cotton-like tensor C_ijk = A_ij,k - A_ik,j with A = E - S/(2(m-1)) g.
DenseTensor cotton(const CurvJet& j);
/// Derivative of the Weyl part: D minus the jet of A ^ g / (m-2).
DenseTensor nabla_weyl(const CurvJet& j);

/// Relative residuals (against |D|) of the consequences of B(T) = 0:
/// the Codazzi form of div T, Schur's identity, trace-freeness of C.
struct DivergenceReport {
    double codazzi_residual = 0;      // (div T)_jkt - (E_jt,k - E_jk,t)
    double schur_residual = 0;        // 2 div E - grad S
    double cotton_trace_residual = 0; // all three traces of C
    double div_split_residual = 0;    // |div T|^2 - |C|^2 - |grad S|^2/(2(m-1))
};
DivergenceReport divergence_identities(const CurvJet& j);

/// Relations tying B(W) and div W to the Cotton-like tensor on a jet with
/// satisfies_B2 (componentwise and in norm).  Residuals are relative.
struct WeylJetReport {
    double bw_component_residual = 0;    // B(W) vs its Cotton expression
    double divw_component_residual = 0;  // div W vs -(m-3)/(m-2) C
    double bw_norm_residual = 0;         // |B(W)|^2 vs 6(m-3)/(m-2)^2 |C|^2
    double divw_norm_residual = 0;       // |div W|^2 vs ((m-3)/(m-2))^2 |C|^2
};
WeylJetReport weyl_jet_relations(const CurvJet& j);

/// Numeric witnesses for: div T = 0  <=>  C(A) = 0 and grad S = 0
/// (and, for m >= 4, <=> div W = 0 and grad S = 0).  A side "holds" when
/// its residual is below tol * |D|.
struct HarmonicityReport {
    double div_residual = 0;
    double cotton_residual = 0;
    double grad_s_residual = 0;
    double div_weyl_residual = 0;
    bool div_free = false;
    bool cotton_free = false;
    bool grad_s_free = false;
    bool div_weyl_free = false;
    bool equivalences_hold = false;
};
HarmonicityReport harmonicity_equivalences(const CurvJet& j, double tol = 1e-8);

/// Random jet via alternating orthogonal projections onto (a) the per-slice
/// curvature symmetries, (b) optionally the kernel of the cyclic B sum,
/// (c) optionally the divergence-free subspace.  Deterministic in the seed;
/// throws convergence_error after 10^4 sweeps (never observed at m <= 6).
CurvJet random_jet(int m, std::uint64_t seed, bool enforce_b2, bool enforce_div0);

/// Projection helpers (exposed for the projector property tests).
DenseTensor project_slicewise_curvature(const DenseTensor& d);
DenseTensor project_second_bianchi(const DenseTensor& d);
DenseTensor project_divergence_free(const DenseTensor& d);

}  // namespace curvlab
