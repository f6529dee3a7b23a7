#include "curvlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curvlab/algebra.hpp"

namespace curvlab {

double Spectrum::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double Spectrum::sum_sq() const {
    double s = 0;
    for (double v : values) s += v * v;
    return s;
}

double Spectrum::op_norm() const {
    double s = 0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

BoundReport make_bound_report(double lhs, double rhs, double scale, bool applicable,
                              std::string context, double tol) {
    BoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = lhs - rhs;
    r.scale = scale;
    r.applicable = applicable;
    r.satisfied = r.slack >= -tol * scale;
    r.context = std::move(context);
    return r;
}

Spectrum sym_eigen(const Matrix& M) {
    const int n = M.n;
    if (n < 1 || n > 256) throw shape_error("sym_eigen: size out of range");
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (M(i, j) + M(j, i));
            if (!std::isfinite(v)) throw numeric_error("sym_eigen: non-finite entry");
            a(i, j) = v;
        }
    Matrix v = Matrix::identity(n);
    const double total = a.frobenius_norm();
    const double stop = 1e-12 * total;

    auto off_norm = [&]() {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double diff = a(q, q) - a(p, p);
                const double theta = 0.5 * diff / apq;
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;  // tan -> 1/(2 theta) as theta -> inf
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apq;
                a(p, p) -= h;
                a(q, q) += h;
                a(p, q) = a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = a(p, k) = akp - s * (akq + akp * tau);
                        a(k, q) = a(q, k) = akq + s * (akp - akq * tau);
                    }
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + vkp * tau);
                    v(k, q) = vkq + s * (vkp - vkq * tau);
                }
            }
        }
    }

    // ascending sort, stable so degenerate clusters keep Jacobi order
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a(x, x) < a(y, y); });

    Spectrum sp;
    sp.n = n;
    sp.values.resize(n);
    sp.vectors = Matrix(n);
    for (int c = 0; c < n; ++c) {
        sp.values[c] = a(order[c], order[c]);
        for (int r = 0; r < n; ++r) sp.vectors(r, c) = v(r, order[c]);
    }
    return sp;
}

double partial_trace(const Spectrum& s, int k) {
    if (k < 1 || k > s.n) throw domain_error("partial_trace: k out of range");
    double sum = 0;
    for (int i = 0; i < k; ++i) sum += s.values[i];
    return sum / k;
}

namespace {

void require_ascending(const std::vector<double>& a, const char* who) {
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] < a[i - 1]) throw domain_error(std::string(who) + ": sequence not ascending");
}

}  // namespace

BoundReport weighted_sum_lower_bound(const std::vector<double>& a, const std::vector<double>& b,
                                     int k) {
    const int n = static_cast<int>(a.size());
    if (b.size() != a.size()) throw shape_error("weighted_sum_lower_bound: length mismatch");
    if (k < 1 || k >= n) throw domain_error("weighted_sum_lower_bound: k out of range");
    require_ascending(a, "weighted_sum_lower_bound");

    double bsum = 0;
    bool b_ok = true;
    for (double v : b) {
        if (v < 0) b_ok = false;
        bsum += v;
    }
    bool pinched = b_ok;
    for (double v : b)
        if (v > bsum / k + 1e-15 * std::abs(bsum)) pinched = false;

    double lhs = 0;
    for (int i = 0; i < n; ++i) lhs += a[i] * b[i];
    double head = 0;
    for (int i = 0; i < k; ++i) head += a[i];
    const double rhs = head / k * bsum;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return make_bound_report(lhs, rhs, scale, pinched, "weighted_sum_bound");
}

BoundReport weighted_sum_lower_bound_real(const std::vector<double>& a,
                                          const std::vector<double>& b, double k) {
    return weighted_sum_lower_bound(a, b, static_cast<int>(std::floor(k)));
}

BoundReport knonneg_trace_bound(const std::vector<double>& a, int k) {
    const int n = static_cast<int>(a.size());
    if (k < 1 || k >= n) throw domain_error("knonneg_trace_bound: k out of range");
    require_ascending(a, "knonneg_trace_bound");

    double prefix = 0;
    for (int i = 0; i < k; ++i) prefix += a[i];
    double lhs = 0, sq = 0;
    for (double v : a) {
        lhs += v;
        sq += v * v;
    }
    const double rhs = std::sqrt(sq / n) / k;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return make_bound_report(lhs, rhs, scale, prefix >= -1e-15 * std::sqrt(sq),
                             "prefix_trace_bound");
}

BoundReport pinching_check(const CurvTensor& t, int k) {
    const int n = binomial2(t.dim());
    if (k < 1 || k >= n) throw domain_error("pinching_check: k out of range");
    const Spectrum sp = curvature_spectrum(t);
    const double tnorm2 = t.norm2();
    const double ssq = sp.sum_sq();
    if (std::abs(ssq - tnorm2) > 1e-9 * std::max(1.0, std::max(ssq, tnorm2)))
        throw consistency_error("pinching_check: operator norm does not match tensor norm");

    const double s = sp.sum();
    const double lhs = static_cast<double>(k) * k * n * s * s;
    const double rhs = tnorm2;
    const bool applicable = partial_trace(sp, k) >= -1e-12 * sp.op_norm();
    const double scale = std::max({lhs, rhs, 1e-300});
    return make_bound_report(lhs, rhs, scale, applicable, "pinching_bound");
}

}  // namespace curvlab
