#pragma once

#include <string>
#include <vector>

#include "curvlab/tensor.hpp"

namespace curvlab {

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors (column alpha of `vectors` pairs with
/// values[alpha]).
struct Spectrum {
    int n = 0;
    std::vector<double> values;  // ascending, ties keep input order
    Matrix vectors;

    double sum() const;
    double sum_sq() const;
    double min() const { return values.front(); }
    double max() const { return values.back(); }
    double op_norm() const;  // max |lambda|
};

/// Result of a single inequality check.  `slack = lhs - rhs`; `satisfied`
/// allows slack down to -tol * scale; `applicable` records whether the
/// hypothesis of the underlying conditional statement held.
struct BoundReport {
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    double scale = 0;
    bool satisfied = false;
    bool applicable = true;
    std::string context;
};

BoundReport make_bound_report(double lhs, double rhs, double scale, bool applicable,
                              std::string context, double tol = 1e-9);

/// Cyclic Jacobi eigensolver; the input is symmetrized on entry.  Stops when
/// the off-diagonal Frobenius norm drops below 1e-12 * ||M||_F.  n <= 256.
Spectrum sym_eigen(const Matrix& M);

/// Mean of the k smallest eigenvalues, 1 <= k <= n.
double partial_trace(const Spectrum& s, int k);

/// For ascending a and nonnegative b with b_i <= (1/k) sum(b):
/// sum a_i b_i >= (1/k) sum_{i<=k} a_i * sum(b).  The hypothesis is verified,
/// not assumed; the report is marked inapplicable when it fails.
BoundReport weighted_sum_lower_bound(const std::vector<double>& a, const std::vector<double>& b,
                                     int k);
/// Real-k variant: k is replaced by floor(k).
BoundReport weighted_sum_lower_bound_real(const std::vector<double>& a,
                                          const std::vector<double>& b, double k);

/// For ascending a with sum_{i<=k} a_i >= 0 (1 <= k < N):
/// sum a_i >= (1/k) * sqrt(mean(a_i^2)).
BoundReport knonneg_trace_bound(const std::vector<double>& a, int k);

/// k^2 * C(m,2) * S^2 >= |T|^2 whenever the k-th partial trace of the
/// curvature operator is nonnegative (1 <= k < C(m,2)).  Cross-checks
/// sum(lambda^2) against the tensor norm.
BoundReport pinching_check(const CurvTensor& t, int k);

}  // namespace curvlab
