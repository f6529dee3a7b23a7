#include "curvlab/polymetric.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "curvlab/algebra.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab {

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

int Polynomial::total_degree() const {
    int deg = 0;
    for (const Term& t : terms_) {
        int d = 0;
        for (int e : t.exponents) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

void Polynomial::add_term(std::vector<int> exponents, double coeff) {
    if (static_cast<int>(exponents.size()) != nvars_)
        throw shape_error("Polynomial: exponent tuple length mismatch");
    for (int e : exponents)
        if (e < 0) throw domain_error("Polynomial: negative exponent");
    terms_.push_back({std::move(exponents), coeff});
    normalize();
}

void Polynomial::normalize() {
    std::map<std::vector<int>, double> merged;
    for (Term& t : terms_) merged[std::move(t.exponents)] += t.coeff;
    terms_.clear();
    for (auto& [e, c] : merged)
        if (c != 0.0) terms_.push_back({e, c});
}

double Polynomial::eval(std::span<const double> x) const {
    double s = 0;
    for (const Term& t : terms_) {
        double v = t.coeff;
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < t.exponents[i]; ++e) v *= x[i];
        s += v;
    }
    return s;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial d(nvars_);
    for (const Term& t : terms_) {
        if (t.exponents[var] == 0) continue;
        Term dt = t;
        dt.coeff *= dt.exponents[var];
        dt.exponents[var] -= 1;
        d.terms_.push_back(std::move(dt));
    }
    d.normalize();
    return d;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (nvars_ != rhs.nvars_) throw shape_error("Polynomial *: variable count mismatch");
    Polynomial p(nvars_);
    for (const Term& a : terms_)
        for (const Term& b : rhs.terms_) {
            Term t;
            t.coeff = a.coeff * b.coeff;
            t.exponents.resize(nvars_);
            for (int i = 0; i < nvars_; ++i) t.exponents[i] = a.exponents[i] + b.exponents[i];
            p.terms_.push_back(std::move(t));
        }
    p.normalize();
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (nvars_ != rhs.nvars_) throw shape_error("Polynomial +: variable count mismatch");
    Polynomial p(nvars_);
    p.terms_ = terms_;
    p.terms_.insert(p.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    p.normalize();
    return p;
}

Polynomial& Polynomial::operator*=(double s) {
    for (Term& t : terms_) t.coeff *= s;
    normalize();
    return *this;
}

Polynomial Polynomial::substitute_linear(const Matrix& q) const {
    if (q.n != nvars_) throw shape_error("substitute_linear: matrix size mismatch");
    Polynomial out(nvars_);
    // x_i -> sum_j q(i,j) y_j
    std::vector<Polynomial> linear;
    linear.reserve(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        Polynomial li(nvars_);
        for (int j = 0; j < nvars_; ++j) {
            if (q(i, j) == 0.0) continue;
            std::vector<int> e(nvars_, 0);
            e[j] = 1;
            li.terms_.push_back({std::move(e), q(i, j)});
        }
        li.normalize();
        linear.push_back(std::move(li));
    }
    for (const Term& t : terms_) {
        Polynomial prod = Polynomial::constant(nvars_, t.coeff);
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < t.exponents[i]; ++e) prod = prod * linear[i];
        out = out + prod;
    }
    return out;
}

// ---------------------------------------------------------- PolynomialMetric

namespace {

int upper_index(int m, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * m - i * (i - 1) / 2 + (j - i);
}

int upper_count(int m) { return m * (m + 1) / 2; }

}  // namespace

PolynomialMetric::PolynomialMetric(int m, std::vector<Polynomial> upper_entries,
                                   double domain_radius)
    : m_(m), radius_(domain_radius), entries_(std::move(upper_entries)) {
    if (m < 2) throw domain_error("PolynomialMetric: dimension must be >= 2");
    if (static_cast<int>(entries_.size()) != upper_count(m))
        throw shape_error("PolynomialMetric: wrong number of entries");
    if (!(radius_ > 0)) throw domain_error("PolynomialMetric: radius must be positive");
    for (const Polynomial& p : entries_)
        if (p.nvars() != m) throw shape_error("PolynomialMetric: variable count mismatch");

    d_entries_.reserve(static_cast<std::size_t>(m) * upper_count(m));
    for (int k = 0; k < m; ++k)
        for (int u = 0; u < upper_count(m); ++u) d_entries_.push_back(entries_[u].derivative(k));

    dd_entries_.reserve(static_cast<std::size_t>(m) * m * upper_count(m));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            for (int u = 0; u < upper_count(m); ++u)
                dd_entries_.push_back(
                    d_entries_[static_cast<std::size_t>(k) * upper_count(m) + u].derivative(l));

    // SPD validation: at the origin and on 200 sampled points in the ball
    Rng rng(0xd0a17, 0);
    std::vector<double> x(m, 0.0);
    for (int sample = 0; sample <= 200; ++sample) {
        if (sample > 0) {
            double r2 = 0;
            for (int i = 0; i < m; ++i) {
                x[i] = rng.normal();
                r2 += x[i] * x[i];
            }
            const double scale = radius_ * std::pow(rng.uniform(), 1.0 / m) / std::sqrt(r2);
            for (int i = 0; i < m; ++i) x[i] *= scale;
        }
        const Spectrum sp = sym_eigen(metric_at(x));
        if (sp.min() <= 1e-6)
            throw decomposition_error("PolynomialMetric: not positive definite on the domain");
    }
}

int PolynomialMetric::degree() const {
    int d = 0;
    for (const Polynomial& p : entries_) d = std::max(d, p.total_degree());
    return d;
}

const Polynomial& PolynomialMetric::entry(int i, int j) const {
    return entries_[upper_index(m_, i, j)];
}

const Polynomial& PolynomialMetric::d_entry(int k, int i, int j) const {
    return d_entries_[static_cast<std::size_t>(k) * upper_count(m_) + upper_index(m_, i, j)];
}

const Polynomial& PolynomialMetric::dd_entry(int k, int l, int i, int j) const {
    return dd_entries_[(static_cast<std::size_t>(k) * m_ + l) * upper_count(m_) +
                       upper_index(m_, i, j)];
}

Matrix PolynomialMetric::metric_at(std::span<const double> x) const {
    Matrix g(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = i; j < m_; ++j) g(i, j) = g(j, i) = entry(i, j).eval(x);
    return g;
}

PolynomialMetric PolynomialMetric::rotated(const Matrix& q) const {
    std::vector<Polynomial> rot;
    rot.reserve(upper_count(m_));
    for (int a = 0; a < m_; ++a)
        for (int b = a; b < m_; ++b) {
            Polynomial s(m_);
            for (int i = 0; i < m_; ++i)
                for (int j = 0; j < m_; ++j) {
                    if (q(i, a) * q(j, b) == 0.0) continue;
                    Polynomial term = entry(i, j).substitute_linear(q);
                    term *= q(i, a) * q(j, b);
                    s = s + term;
                }
            rot.push_back(std::move(s));
        }
    return PolynomialMetric(m_, std::move(rot), radius_);
}

PolynomialMetric PolynomialMetric::euclidean(int m) {
    std::vector<Polynomial> e;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            e.push_back(i == j ? Polynomial::constant(m, 1.0) : Polynomial(m));
    return PolynomialMetric(m, std::move(e), 1.0);
}

PolynomialMetric PolynomialMetric::sphere_normal_truncation(int m, double kappa) {
    // g_ij = d_ij - (k/3)(|x|^2 d_ij - x_i x_j) + (2 k^2/45)|x|^2(|x|^2 d_ij - x_i x_j)
    std::vector<Polynomial> e;
    const double c2 = -kappa / 3.0;
    const double c4 = 2.0 * kappa * kappa / 45.0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Polynomial p(m);
            if (i == j) {
                // 1 + c2 sum_{a != i} x_a^2 + c4 sum_{a != i} sum_b x_a^2 x_b^2
                p.add_term(std::vector<int>(m, 0), 1.0);
                for (int a = 0; a < m; ++a) {
                    if (a == i) continue;
                    std::vector<int> q(m, 0);
                    q[a] = 2;
                    p.add_term(q, c2);
                    for (int b = 0; b < m; ++b) {
                        std::vector<int> q4(m, 0);
                        q4[a] += 2;
                        q4[b] += 2;
                        p.add_term(q4, c4);
                    }
                }
            } else {
                std::vector<int> q(m, 0);
                q[i] = 1;
                q[j] = 1;
                p.add_term(q, -c2);
                for (int b = 0; b < m; ++b) {
                    std::vector<int> q4(m, 0);
                    q4[i] += 1;
                    q4[j] += 1;
                    q4[b] += 2;
                    p.add_term(q4, -c4);
                }
            }
            e.push_back(std::move(p));
        }
    const double radius = kappa != 0.0 ? std::min(1.0, 0.6 / std::sqrt(std::abs(kappa))) : 1.0;
    return PolynomialMetric(m, std::move(e), radius);
}

PolynomialMetric PolynomialMetric::random_perturbation(int m, double eps, std::uint64_t seed) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        Rng rng(seed, 0xbead00 + attempt);
        std::vector<Polynomial> e;
        e.reserve(upper_count(m));
        // all monomials of total degree 1..3
        std::vector<std::vector<int>> monos;
        std::vector<int> expo(m, 0);
        const auto gen = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == m) {
                int deg = 0;
                for (int v : expo) deg += v;
                if (deg >= 1) monos.push_back(expo);
                return;
            }
            for (int d = 0; d <= remaining; ++d) {
                expo[pos] = d;
                self(self, pos + 1, remaining - d);
            }
            expo[pos] = 0;
        };
        gen(gen, 0, 3);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                Polynomial p(m);
                p.add_term(std::vector<int>(m, 0), i == j ? 1.0 : 0.0);
                for (const auto& mono : monos) p.add_term(mono, eps * rng.normal());
                e.push_back(std::move(p));
            }
        try {
            return PolynomialMetric(m, std::move(e), 0.5);
        } catch (const decomposition_error&) {
            continue;  // draw again with the next substream
        }
    }
    throw decomposition_error("random_perturbation: could not draw an SPD metric");
}

// ------------------------------------------------------------ curvature at x

DenseTensor christoffel_at(const PolynomialMetric& pm, std::span<const double> x) {
    const int m = pm.dim();
    double r2 = 0;
    for (double v : x) r2 += v * v;
    if (std::sqrt(r2) >= pm.domain_radius())
        throw domain_error("christoffel_at: point outside the metric domain");

    const Matrix g = pm.metric_at(x);
    const Matrix ginv = spd_inverse(g);
    DenseTensor gamma(m, 3);  // (a, i, j)
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            std::vector<double> lower(m);
            for (int b = 0; b < m; ++b)
                lower[b] = 0.5 * (pm.d_entry(i, j, b).eval(x) + pm.d_entry(j, i, b).eval(x) -
                                  pm.d_entry(b, i, j).eval(x));
            for (int a = 0; a < m; ++a) {
                double s = 0;
                for (int b = 0; b < m; ++b) s += ginv(a, b) * lower[b];
                gamma.at(a, i, j) = s;
                gamma.at(a, j, i) = s;
            }
        }
    return gamma;
}

PointCurvature riemann_at(const PolynomialMetric& pm, std::span<const double> x) {
    const int m = pm.dim();
    double r2 = 0;
    for (double v : x) r2 += v * v;
    if (std::sqrt(r2) >= pm.domain_radius())
        throw domain_error("riemann_at: point outside the metric domain");

    const Matrix g = pm.metric_at(x);
    const Matrix ginv = spd_inverse(g);

    // dg[k](i,j) = d_k g_ij and second partials
    DenseTensor dg(m, 3);  // (k, i, j)
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double v = pm.d_entry(k, i, j).eval(x);
                dg.at(k, i, j) = v;
                dg.at(k, j, i) = v;
            }

    DenseTensor gamma(m, 3);  // (a, i, j), index raised
    DenseTensor gamma_l(m, 3);  // lowered: (b, i, j) = [ij, b]
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int b = 0; b < m; ++b)
                gamma_l.at(b, i, j) = 0.5 * (dg.at(i, j, b) + dg.at(j, i, b) - dg.at(b, i, j));
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0;
                for (int b = 0; b < m; ++b) s += ginv(a, b) * gamma_l.at(b, i, j);
                gamma.at(a, i, j) = s;
            }

    // d_k Gamma^a_{ij} = -g^{ac} d_k g_cd g^{db} [ij,b] + g^{ab} d_k [ij,b]
    // with d_k [ij,b] = (d_k d_i g_jb + d_k d_j g_ib - d_k d_b g_ij)/2.
    DenseTensor dgamma(m, 4);  // (k, a, i, j)
    for (int k = 0; k < m; ++k) {
        Matrix dginv(m);  // d_k g^{ab}
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double s = 0;
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) s += ginv(a, c) * dg.at(k, c, d) * ginv(d, b);
                dginv(a, b) = -s;
            }
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                std::vector<double> dlower(m);
                for (int b = 0; b < m; ++b)
                    dlower[b] = 0.5 * (pm.dd_entry(i, k, j, b).eval(x) +
                                       pm.dd_entry(j, k, i, b).eval(x) -
                                       pm.dd_entry(b, k, i, j).eval(x));
                for (int a = 0; a < m; ++a) {
                    double s = 0;
                    for (int b = 0; b < m; ++b)
                        s += dginv(a, b) * gamma_l.at(b, i, j) + ginv(a, b) * dlower[b];
                    dgamma.at(k, a, i, j) = s;
                    dgamma.at(k, a, j, i) = s;
                }
            }
    }

    // R_ijkt = g_ia ( d_k Gamma^a_{tj} - d_t Gamma^a_{kj}
    //                 + Gamma^b_{tj} Gamma^a_{kb} - Gamma^b_{kj} Gamma^a_{tb} )
    DenseTensor riem(m, 4);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t) {
                std::vector<double> up(m);
                for (int a = 0; a < m; ++a) {
                    double s = dgamma.at(k, a, t, j) - dgamma.at(t, a, k, j);
                    for (int b = 0; b < m; ++b)
                        s += gamma.at(b, t, j) * gamma.at(a, k, b) -
                             gamma.at(b, k, j) * gamma.at(a, t, b);
                    up[a] = s;
                }
                for (int i = 0; i < m; ++i) {
                    double s = 0;
                    for (int a = 0; a < m; ++a) s += g(i, a) * up[a];
                    riem.at(i, j, k, t) = s;
                }
            }
    return PointCurvature{Metric(g), CurvTensor::unchecked(std::move(riem))};
}

CurvTensor riemann_orthonormal_at(const PolynomialMetric& pm, std::span<const double> x) {
    const PointCurvature pc = riemann_at(pm, x);
    return orthonormalize(pc.riem, pc.g);
}

namespace {

// 4th-order central first-derivative stencil coefficients at offsets
// -2,-1,1,2 (the center point does not contribute).
struct Stencil1 {
    static constexpr std::array<int, 4> offsets{-2, -1, 1, 2};
    static constexpr std::array<double, 4> weights{1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
};

}  // namespace

CoordinateJet coordinate_jet(const PolynomialMetric& pm, std::span<const double> x, double h) {
    const int m = pm.dim();
    double r = 0;
    for (double v : x) r += v * v;
    if (std::sqrt(r) + 2 * h >= pm.domain_radius())
        throw domain_error("coordinate_jet: stencil leaves the metric domain");

    const PointCurvature base = riemann_at(pm, x);
    const DenseTensor gamma = christoffel_at(pm, x);

    DenseTensor d(m, 5);
    std::vector<double> y(x.begin(), x.end());
    for (int l = 0; l < m; ++l) {
        DenseTensor dl(m, 4);
        for (std::size_t s = 0; s < Stencil1::offsets.size(); ++s) {
            y[l] = x[l] + Stencil1::offsets[s] * h;
            const PointCurvature pc = riemann_at(pm, y);
            const double w = Stencil1::weights[s] / h;
            for (std::size_t idx = 0; idx < dl.size(); ++idx)
                dl.data()[idx] += w * pc.riem.tensor().data()[idx];
        }
        y[l] = x[l];
        // covariant corrections: T_ijkt,l = d_l T_ijkt - Gamma^a_{li} T_ajkt - ...
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        double corr = 0;
                        for (int a = 0; a < m; ++a)
                            corr += gamma.at(a, l, i) * base.riem.at(a, j, k, t) +
                                    gamma.at(a, l, j) * base.riem.at(i, a, k, t) +
                                    gamma.at(a, l, k) * base.riem.at(i, j, a, t) +
                                    gamma.at(a, l, t) * base.riem.at(i, j, k, a);
                        d.at(i, j, k, t, l) = dl.at(i, j, k, t) - corr;
                    }
    }
    return CoordinateJet{base.g, base.riem, std::move(d)};
}

CurvJet nabla_riemann_at(const PolynomialMetric& pm, std::span<const double> x, double h) {
    CoordinateJet cj = coordinate_jet(pm, x, h);
    const Matrix frame = invert_lower(cj.g.chol_lower());
    CurvJet jet;
    jet.T = CurvTensor::unchecked(transform_all_slots(cj.T.tensor(), frame));
    jet.D = transform_all_slots(cj.D, frame);
    const double b2 = second_bianchi(jet.D).norm();
    jet.satisfies_B2 = b2 < 1e-6 * std::max(jet.D.norm(), jet.T.norm());
    jet.satisfies_div0 = false;
    return jet;
}

// --------------------------------------------------------- Bochner residual

namespace {

double norm2_field(const PolynomialMetric& pm, std::span<const double> x) {
    const PointCurvature pc = riemann_at(pm, x);
    return inner(pc.riem.tensor(), pc.riem.tensor(), pc.g);
}

// Laplace-Beltrami of |Riem|^2 at x via 4th-order stencils.
double laplacian_norm2(const PolynomialMetric& pm, std::span<const double> x, double h) {
    const int m = pm.dim();
    const Matrix ginv = spd_inverse(pm.metric_at(x));
    const DenseTensor gamma = christoffel_at(pm, x);
    std::vector<double> y(x.begin(), x.end());

    const double f0 = norm2_field(pm, x);
    std::vector<double> grad(m, 0.0);
    Matrix hess(m);
    for (int i = 0; i < m; ++i) {
        std::array<double, 5> f{};  // offsets -2..2
        f[2] = f0;
        for (int s : {-2, -1, 1, 2}) {
            y[i] = x[i] + s * h;
            f[s + 2] = norm2_field(pm, y);
        }
        y[i] = x[i];
        grad[i] = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
        hess(i, i) = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double s = 0;
            for (std::size_t a = 0; a < Stencil1::offsets.size(); ++a)
                for (std::size_t b = 0; b < Stencil1::offsets.size(); ++b) {
                    y[i] = x[i] + Stencil1::offsets[a] * h;
                    y[j] = x[j] + Stencil1::offsets[b] * h;
                    s += Stencil1::weights[a] * Stencil1::weights[b] * norm2_field(pm, y);
                }
            y[i] = x[i];
            y[j] = x[j];
            hess(i, j) = hess(j, i) = s / (h * h);
        }

    double lap = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = hess(i, j);
            for (int k = 0; k < m; ++k) v -= gamma.at(k, i, j) * grad[k];
            lap += ginv(i, j) * v;
        }
    return lap;
}

// Coordinate components of X(T) = T^{sjkt} B(T)_{sjkt}^i + 2 T^{ijkt} (div T)_{jkt}.
std::vector<double> x_field(const PolynomialMetric& pm, std::span<const double> x, double h) {
    const int m = pm.dim();
    const CoordinateJet cj = coordinate_jet(pm, x, h);
    const Matrix ginv = cj.g.inverse();

    // raise all four tensor slots of T
    DenseTensor traised = cj.T.tensor();
    for (int s = 0; s < 4; ++s) traised = contract_slot(traised, ginv, s);

    // (div T)_{jkt} = g^{is} D[s,j,k,t,i]
    DenseTensor divt(m, 3);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int t = 0; t < m; ++t) {
                double s = 0;
                for (int i = 0; i < m; ++i)
                    for (int a = 0; a < m; ++a) s += ginv(i, a) * cj.D.at(a, j, k, t, i);
                divt.at(j, k, t) = s;
            }

    const DenseTensor b = second_bianchi(cj.D);
    std::vector<double> out(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double xb = 0;
        for (int s = 0; s < m; ++s)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int t = 0; t < m; ++t) {
                        double bl = 0;
                        for (int l = 0; l < m; ++l) bl += ginv(i, l) * b.at(s, j, k, t, l);
                        xb += traised.at(s, j, k, t) * bl;
                    }
        double xd = 0;
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int t = 0; t < m; ++t) xd += traised.at(i, j, k, t) * divt.at(j, k, t);
        out[i] = xb + 2.0 * xd;
    }
    return out;
}

// div X = (det g)^{-1/2} d_i ( (det g)^{1/2} X^i ), 4th-order stencils with
// the inner jets recomputed at each stencil point.
double div_x_field(const PolynomialMetric& pm, std::span<const double> x, double h) {
    const int m = pm.dim();
    const auto weighted = [&](std::span<const double> y) {
        const Matrix L = cholesky(pm.metric_at(y));
        double sqrt_det = 1.0;
        for (int i = 0; i < m; ++i) sqrt_det *= L(i, i);
        std::vector<double> xf = x_field(pm, y, h);
        for (double& v : xf) v *= sqrt_det;
        return xf;
    };

    std::vector<double> y(x.begin(), x.end());
    double div = 0;
    for (int i = 0; i < m; ++i) {
        for (std::size_t s = 0; s < Stencil1::offsets.size(); ++s) {
            y[i] = x[i] + Stencil1::offsets[s] * h;
            div += Stencil1::weights[s] / h * weighted(y)[i];
        }
        y[i] = x[i];
    }
    const Matrix L0 = cholesky(pm.metric_at(x));
    double sqrt_det0 = 1.0;
    for (int i = 0; i < m; ++i) sqrt_det0 *= L0(i, i);
    return div / sqrt_det0;
}

struct BochnerTerms {
    double lap = 0, grad2 = 0, gamma_tt = 0, div2 = 0, b2 = 0, divx = 0;
};

BochnerTerms bochner_terms(const PolynomialMetric& pm, std::span<const double> x, double h) {
    BochnerTerms t;
    const CurvJet jet = nabla_riemann_at(pm, x, h);
    t.grad2 = jet.D.norm2();
    t.div2 = divergence(jet).norm2();
    t.b2 = second_bianchi(jet.D).norm2();
    const SymTwoTensor ric = ricci_contraction(jet.T);
    t.gamma_tt = gamma_quadratic_curv(jet.T, jet.T, jet.T, ric);
    t.lap = laplacian_norm2(pm, x, h);
    t.divx = div_x_field(pm, x, h);
    return t;
}

}  // namespace

BochnerResiduals bochner_residual(const PolynomialMetric& pm, std::span<const double> x,
                                  double h) {
    const int m = pm.dim();
    double r = 0;
    for (double v : x) r += v * v;
    if (std::sqrt(r) + 4 * h >= pm.domain_radius())
        throw domain_error("bochner_residual: stencil leaves the metric domain");

    // one Richardson level on the 4th-order finite-difference terms
    const BochnerTerms c = bochner_terms(pm, x, h);
    const BochnerTerms f = bochner_terms(pm, x, 0.5 * h);
    const auto rich = [](double coarse, double fine) { return (16.0 * fine - coarse) / 15.0; };

    BochnerResiduals out;
    out.laplacian_T2 = rich(c.lap, f.lap);
    out.grad_T2 = rich(c.grad2, f.grad2);
    out.div_T2 = rich(c.div2, f.div2);
    out.b_T2 = rich(c.b2, f.b2);
    out.div_X = rich(c.divx, f.divx);
    out.gamma_TT = c.gamma_tt;  // algebraic, no extrapolation

    const double base = 0.5 * out.laplacian_T2 - out.grad_T2 - 0.5 * out.gamma_TT +
                        out.b_T2 / 3.0 + 2.0 * out.div_T2;
    out.residual_plus = base - out.div_X;
    out.residual_minus = base + out.div_X;
    out.scale = std::max({std::abs(0.5 * out.laplacian_T2), std::abs(out.grad_T2),
                          std::abs(0.5 * out.gamma_TT), std::abs(2.0 * out.div_T2),
                          std::abs(out.div_X), 1e-300});
    (void)m;
    return out;
}

// ------------------------------------------------- Gamma commutator witness

double gamma_commutator_residual(const PolynomialMetric& pm, std::span<const double> x,
                                 double h) {
    const int m = pm.dim();
    double r = 0;
    for (double v : x) r += v * v;
    if (std::sqrt(r) + 4 * h >= pm.domain_radius())
        throw domain_error("gamma_commutator_residual: stencil leaves the metric domain");

    const CoordinateJet base = coordinate_jet(pm, x, h);
    const Matrix ginv = base.g.inverse();
    const DenseTensor gamma_sym = christoffel_at(pm, x);

    // d2[I, s, t]: second covariant derivative, inner index s, outer t
    DenseTensor d2(m, 6);
    std::vector<double> y(x.begin(), x.end());
    for (int t = 0; t < m; ++t) {
        DenseTensor outer(m, 5);  // d_t of the jet components
        for (std::size_t st = 0; st < Stencil1::offsets.size(); ++st) {
            y[t] = x[t] + Stencil1::offsets[st] * h;
            const CoordinateJet cj = coordinate_jet(pm, y, h);
            const double w = Stencil1::weights[st] / h;
            for (std::size_t idx = 0; idx < outer.size(); ++idx)
                outer.data()[idx] += w * cj.D.data()[idx];
        }
        y[t] = x[t];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l)
                        for (int s = 0; s < m; ++s) {
                            double corr = 0;
                            for (int a = 0; a < m; ++a)
                                corr += gamma_sym.at(a, t, s) * base.D.at(i, j, k, l, a) +
                                        gamma_sym.at(a, t, i) * base.D.at(a, j, k, l, s) +
                                        gamma_sym.at(a, t, j) * base.D.at(i, a, k, l, s) +
                                        gamma_sym.at(a, t, k) * base.D.at(i, j, a, l, s) +
                                        gamma_sym.at(a, t, l) * base.D.at(i, j, k, a, s);
                            d2.at(i, j, k, l, s, t) = outer.at(i, j, k, l, s) - corr;
                        }
    }

    // commutator form: (Gamma Q)_I = sum_h g^{ta} [ d2(I[h->a], i_h, t) - d2(I[h->a], t, i_h) ]
    DenseTensor comm(m, 4);
    std::array<int, 4> idx{};
    for (idx[0] = 0; idx[0] < m; ++idx[0])
        for (idx[1] = 0; idx[1] < m; ++idx[1])
            for (idx[2] = 0; idx[2] < m; ++idx[2])
                for (idx[3] = 0; idx[3] < m; ++idx[3]) {
                    double val = 0;
                    for (int hh = 0; hh < 4; ++hh) {
                        const int ih = idx[hh];
                        std::array<int, 4> jdx = idx;
                        for (int a = 0; a < m; ++a) {
                            jdx[hh] = a;
                            for (int t = 0; t < m; ++t) {
                                const double w = ginv(t, a);
                                if (w == 0.0) continue;
                                val += w * (d2.at(jdx[0], jdx[1], jdx[2], jdx[3], ih, t) -
                                            d2.at(jdx[0], jdx[1], jdx[2], jdx[3], t, ih));
                            }
                        }
                    }
                    comm.at(idx[0], idx[1], idx[2], idx[3]) = val;
                }

    const Matrix frame = invert_lower(base.g.chol_lower());
    const DenseTensor comm_on = transform_all_slots(comm, frame);
    const CurvTensor riem_on = CurvTensor::unchecked(transform_all_slots(base.T.tensor(), frame));
    const DenseTensor gam = gamma(riem_on.tensor(), riem_on, ricci_contraction(riem_on));
    const double scale = std::max(gam.norm(), 1e-300);
    return (comm_on - gam).norm() / scale;
}

}  // namespace curvlab
