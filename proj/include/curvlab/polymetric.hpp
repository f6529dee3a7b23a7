#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/jets.hpp"
#include "curvlab/tensor.hpp"

namespace curvlab {

/// Sparse multivariate polynomial in m variables with real coefficients.
class Polynomial {
public:
    struct Term {
        std::vector<int> exponents;  // length m
        double coeff = 0;
    };

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}
    static Polynomial constant(int nvars, double c);

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int total_degree() const;

    void add_term(std::vector<int> exponents, double coeff);

    double eval(std::span<const double> x) const;
    Polynomial derivative(int var) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial& operator*=(double s);

    /// Substitute x_i = sum_j Q(i,j) y_j (constant linear change of chart).
    Polynomial substitute_linear(const Matrix& q) const;

private:
    void normalize();  // merge duplicate exponent tuples, drop zeros

    int nvars_ = 0;
    std::vector<Term> terms_;
};

/// Chart metric with polynomial components, exactly differentiable.  SPD on
/// the stated ball (validated by sampling at construction).
class PolynomialMetric {
public:
    /// entries: row-major upper triangle, (i,j) with i <= j.
    PolynomialMetric(int m, std::vector<Polynomial> upper_entries, double domain_radius);

    int dim() const { return m_; }
    double domain_radius() const { return radius_; }
    int degree() const;
    const Polynomial& entry(int i, int j) const;  // i <= j or swapped

    Matrix metric_at(std::span<const double> x) const;
    /// First partials d_k g_ij, exact.
    const Polynomial& d_entry(int k, int i, int j) const;
    /// Second partials d_k d_l g_ij, exact.
    const Polynomial& dd_entry(int k, int l, int i, int j) const;

    /// Rotate the chart: y = Q^T x with Q orthogonal.
    PolynomialMetric rotated(const Matrix& q) const;

    static PolynomialMetric euclidean(int m);
    /// Degree-4 normal-coordinate truncation of the round metric with
    /// constant sectional curvature kappa.
    static PolynomialMetric sphere_normal_truncation(int m, double kappa);
    /// Identity plus a random polynomial perturbation of degree <= 3 with
    /// coefficients of size `eps`; deterministic in the seed and validated
    /// SPD on the ball.
    static PolynomialMetric random_perturbation(int m, double eps, std::uint64_t seed);

private:
    int m_ = 0;
    double radius_ = 0;
    std::vector<Polynomial> entries_;     // upper triangle
    std::vector<Polynomial> d_entries_;   // cached first partials
    std::vector<Polynomial> dd_entries_;  // cached second partials
};

/// Christoffel symbols Gamma^a_{ij} at x (exact polynomial derivatives,
/// numeric matrix inversion); layout t.at(a, i, j).
DenseTensor christoffel_at(const PolynomialMetric& pm, std::span<const double> x);

/// Riemann tensor in the coordinate frame together with the metric at x.
struct PointCurvature {
    Metric g;
    CurvTensor riem;  // coordinate-frame components
};
PointCurvature riemann_at(const PolynomialMetric& pm, std::span<const double> x);

/// Riemann tensor at x in an orthonormal frame.
CurvTensor riemann_orthonormal_at(const PolynomialMetric& pm, std::span<const double> x);

/// Coordinate-frame first jet of the Riemann tensor: 4th-order central
/// differences of the frame components plus Christoffel corrections.
struct CoordinateJet {
    Metric g;
    CurvTensor T;   // coordinate frame
    DenseTensor D;  // T_ijkt,l, coordinate frame
};
CoordinateJet coordinate_jet(const PolynomialMetric& pm, std::span<const double> x, double h);

/// First jet of the Riemann tensor at x, expressed in an orthonormal frame;
/// `satisfies_B2` is set when the measured residual is below the finite-
/// difference tolerance 1e-6 * max(|D|, |T|).
CurvJet nabla_riemann_at(const PolynomialMetric& pm, std::span<const double> x, double h);

/// Both closures of the pointwise Bochner identity for T = Riem, with the
/// divergence-type vector field entering with either sign; exactly one
/// residual should vanish to FD accuracy for generic metrics.
struct BochnerResiduals {
    double residual_plus = 0;   // identity taken with + div X(T)
    double residual_minus = 0;  // identity taken with - div X(T)
    double scale = 0;           // max magnitude of the individual terms
    double laplacian_T2 = 0;
    double grad_T2 = 0;
    double gamma_TT = 0;
    double div_T2 = 0;
    double b_T2 = 0;
    double div_X = 0;
};
BochnerResiduals bochner_residual(const PolynomialMetric& pm, std::span<const double> x, double h);

/// Relative difference between the curvature-action form of Gamma(Riem) and
/// its second-derivative commutator form evaluated by finite differences.
double gamma_commutator_residual(const PolynomialMetric& pm, std::span<const double> x, double h);

}  // namespace curvlab
