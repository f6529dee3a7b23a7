#include "curvlab/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

std::size_t pow_size(int m, int rank) {
    std::size_t s = 1;
    for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(m);
    return s;
}

}  // namespace

DenseTensor::DenseTensor(int m, int rank) : m_(m), rank_(rank) {
    if (m < 1 || m > 21) throw shape_error("DenseTensor: dimension out of range");
    if (rank < 1 || rank > 6) throw shape_error("DenseTensor: rank out of range");
    data_.assign(pow_size(m, rank), 0.0);
}

DenseTensor DenseTensor::from_data(int m, int rank, std::vector<double> data) {
    DenseTensor t(m, rank);
    if (data.size() != t.data_.size()) throw shape_error("DenseTensor: data length != m^q");
    t.data_ = std::move(data);
    return t;
}

std::size_t DenseTensor::flat_index(std::span<const int> idx) const {
    std::size_t off = 0;
    for (int v : idx) off = off * static_cast<std::size_t>(m_) + static_cast<std::size_t>(v);
    return off;
}

double DenseTensor::norm2() const {
    double s = 0;
    for (double v : data_) s += v * v;
    return s;
}

double DenseTensor::norm() const { return std::sqrt(norm2()); }

double DenseTensor::dot(const DenseTensor& other) const {
    if (m_ != other.m_ || rank_ != other.rank_) throw shape_error("dot: shape mismatch");
    double s = 0;
    for (std::size_t i = 0; i < data_.size(); ++i) s += data_[i] * other.data_[i];
    return s;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& rhs) {
    if (m_ != rhs.m_ || rank_ != rhs.rank_) throw shape_error("operator+=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& rhs) {
    if (m_ != rhs.m_ || rank_ != rhs.rank_) throw shape_error("operator-=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix Matrix::identity(int size) {
    Matrix I(size);
    for (int i = 0; i < size; ++i) I(i, i) = 1.0;
    return I;
}

double Matrix::frobenius_norm() const {
    double s = 0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double Matrix::trace() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
}

Matrix Matrix::transposed() const {
    Matrix t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.n != y.n) throw shape_error("Matrix multiply: size mismatch");
    Matrix z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < x.n; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

Matrix cholesky(const Matrix& g) {
    const int n = g.n;
    Matrix L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0) throw decomposition_error("cholesky: matrix not positive definite");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

Matrix invert_lower(const Matrix& L) {
    const int n = L.n;
    Matrix inv(n);
    for (int c = 0; c < n; ++c) {
        inv(c, c) = 1.0 / L(c, c);
        for (int r = c + 1; r < n; ++r) {
            double s = 0;
            for (int k = c; k < r; ++k) s += L(r, k) * inv(k, c);
            inv(r, c) = -s / L(r, r);
        }
    }
    return inv;
}

Matrix spd_inverse(const Matrix& g) {
    const Matrix Linv = invert_lower(cholesky(g));
    return Linv.transposed() * Linv;  // g^{-1} = L^{-T} L^{-1}
}

Metric::Metric(Matrix g) : m_(g.n) {
    if (m_ < 1) throw shape_error("Metric: empty matrix");
    // store symmetrized
    g_ = Matrix(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) g_(i, j) = 0.5 * (g(i, j) + g(j, i));
    chol_ = cholesky(g_);
    const Matrix Linv = invert_lower(chol_);
    inv_ = Linv.transposed() * Linv;
    identity_ = true;
    for (int i = 0; i < m_ && identity_; ++i)
        for (int j = 0; j < m_; ++j)
            if (std::abs(g_(i, j) - (i == j ? 1.0 : 0.0)) > 1e-14) {
                identity_ = false;
                break;
            }
}

Metric Metric::identity(int m) { return Metric(Matrix::identity(m)); }

SymTwoTensor::SymTwoTensor(const Matrix& raw) : m_(raw.n), data_(raw.a) {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * (raw(i, j) + raw(j, i));
            data_[static_cast<std::size_t>(i) * m_ + j] = v;
            data_[static_cast<std::size_t>(j) * m_ + i] = v;
        }
}

double SymTwoTensor::trace() const {
    double s = 0;
    for (int i = 0; i < m_; ++i) s += (*this)(i, i);
    return s;
}

double SymTwoTensor::norm2() const {
    double s = 0;
    for (double v : data_) s += v * v;
    return s;
}

Matrix SymTwoTensor::as_matrix() const {
    Matrix g(m_);
    g.a = data_;
    return g;
}

DenseTensor SymTwoTensor::as_tensor() const { return DenseTensor::from_data(m_, 2, data_); }

SymTwoTensor& SymTwoTensor::operator+=(const SymTwoTensor& rhs) {
    if (m_ != rhs.m_) throw shape_error("SymTwoTensor +=: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

SymTwoTensor& SymTwoTensor::operator-=(const SymTwoTensor& rhs) {
    if (m_ != rhs.m_) throw shape_error("SymTwoTensor -=: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

SymTwoTensor& SymTwoTensor::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

TwoForm::TwoForm(const Matrix& raw) : m_(raw.n), data_(static_cast<std::size_t>(raw.n) * raw.n) {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            data_[static_cast<std::size_t>(i) * m_ + j] = 0.5 * (raw(i, j) - raw(j, i));
}

TwoForm TwoForm::wedge(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw shape_error("wedge: length mismatch");
    const int m = static_cast<int>(u.size());
    TwoForm w(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) w.set(i, j, 0.5 * (u[i] * v[j] - u[j] * v[i]));
    return w;
}

double TwoForm::norm2() const {
    double s = 0;
    for (double v : data_) s += v * v;
    return s;
}

DenseTensor TwoForm::as_tensor() const { return DenseTensor::from_data(m_, 2, data_); }

CurvTensor::CurvTensor(DenseTensor t, double tol) : tensor_(std::move(t)) {
    if (tensor_.rank() != 4) throw shape_error("CurvTensor: rank must be 4");
    const double rs = symmetry_residual(tensor_);
    const double rb = bianchi_residual(tensor_);
    if (rs > tol || rb > tol)
        throw validation_error("CurvTensor: symmetry residual " + std::to_string(rs) +
                               ", Bianchi residual " + std::to_string(rb) + " exceed tolerance");
}

CurvTensor CurvTensor::unchecked(DenseTensor t) {
    if (t.rank() != 4) throw shape_error("CurvTensor: rank must be 4");
    CurvTensor c;
    c.tensor_ = std::move(t);
    return c;
}

CurvTensor CurvTensor::zero(int m) { return unchecked(DenseTensor(m, 4)); }

double symmetry_residual(const DenseTensor& t) {
    if (t.rank() != 4) throw shape_error("symmetry_residual: rank must be 4");
    const int m = t.dim();
    double worst = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    const double v = t.at(i, j, k, l);
                    worst = std::max(worst, std::abs(v + t.at(j, i, k, l)));
                    worst = std::max(worst, std::abs(v + t.at(i, j, l, k)));
                    worst = std::max(worst, std::abs(v - t.at(k, l, i, j)));
                }
    const double scale = t.norm();
    return scale > 0 ? worst / scale : worst;
}

double bianchi_residual(const DenseTensor& t) {
    if (t.rank() != 4) throw shape_error("bianchi_residual: rank must be 4");
    const int m = t.dim();
    double worst = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    worst = std::max(worst, std::abs(t.at(i, j, k, l) + t.at(i, k, l, j) +
                                                     t.at(i, l, j, k)));
    const double scale = t.norm();
    return scale > 0 ? worst / scale : worst;
}

double inner(const DenseTensor& a, const DenseTensor& b, const Metric& g) {
    if (a.dim() != b.dim() || a.rank() != b.rank()) throw shape_error("inner: shape mismatch");
    if (a.dim() != g.dim()) throw shape_error("inner: metric dimension mismatch");
    if (g.is_identity()) return a.dot(b);
    DenseTensor raised = b;
    for (int s = 0; s < b.rank(); ++s) raised = contract_slot(raised, g.inverse(), s);
    return a.dot(raised);
}

DenseTensor contract_slot(const DenseTensor& t, const Matrix& M, int slot) {
    if (M.n != t.dim()) throw shape_error("contract_slot: matrix dimension mismatch");
    if (slot < 0 || slot >= t.rank()) throw shape_error("contract_slot: slot out of range");
    const int m = t.dim();
    const int q = t.rank();
    std::size_t outer = 1, inner_stride = 1;
    for (int s = 0; s < slot; ++s) outer *= static_cast<std::size_t>(m);
    for (int s = slot + 1; s < q; ++s) inner_stride *= static_cast<std::size_t>(m);

    DenseTensor out(m, q);
    const auto& src = t.data();
    auto& dst = out.data();
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * static_cast<std::size_t>(m) * inner_stride;
        for (int a = 0; a < m; ++a) {
            const std::size_t dst_base = base + static_cast<std::size_t>(a) * inner_stride;
            for (int b = 0; b < m; ++b) {
                const double w = M(a, b);
                if (w == 0.0) continue;
                const std::size_t src_base = base + static_cast<std::size_t>(b) * inner_stride;
                for (std::size_t r = 0; r < inner_stride; ++r) dst[dst_base + r] += w * src[src_base + r];
            }
        }
    }
    return out;
}

DenseTensor transform_all_slots(const DenseTensor& t, const Matrix& M) {
    DenseTensor out = t;
    for (int s = 0; s < t.rank(); ++s) out = contract_slot(out, M, s);
    return out;
}

CurvTensor kulkarni_nomizu(const SymTwoTensor& e, const SymTwoTensor& f) {
    if (e.dim() != f.dim()) throw shape_error("kulkarni_nomizu: dimension mismatch");
    const int m = e.dim();
    DenseTensor t(m, 4);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    t.at(i, j, k, l) = e(i, k) * f(j, l) + e(j, l) * f(i, k) -
                                       e(i, l) * f(j, k) - e(j, k) * f(i, l);
    return CurvTensor::unchecked(std::move(t));
}

SymTwoTensor ricci_contraction(const DenseTensor& t) {
    if (t.rank() != 4) throw shape_error("ricci_contraction: rank must be 4");
    const int m = t.dim();
    SymTwoTensor e(m);
    for (int j = 0; j < m; ++j)
        for (int l = j; l < m; ++l) {
            double s = 0;
            for (int i = 0; i < m; ++i) s += t.at(i, j, i, l);
            e.set(j, l, s);
        }
    return e;
}

SymTwoTensor ricci_contraction(const CurvTensor& t) { return ricci_contraction(t.tensor()); }

DenseTensor project_curvature_symmetries_raw(const DenseTensor& d) {
    if (d.rank() != 4) throw shape_error("project_curvature_symmetries: rank must be 4");
    const int m = d.dim();
    DenseTensor p(m, 4);
    // antisymmetrize (i,j) and (k,t), then symmetrize pair exchange
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    const double aij = 0.125 * (d.at(i, j, k, l) - d.at(j, i, k, l) -
                                                d.at(i, j, l, k) + d.at(j, i, l, k));
                    const double akl = 0.125 * (d.at(k, l, i, j) - d.at(l, k, i, j) -
                                                d.at(k, l, j, i) + d.at(l, k, j, i));
                    p.at(i, j, k, l) = aij + akl;
                }
    // remove the Bianchi component: subtract the cyclic average over the
    // last three slots (an orthogonal projector on pair-symmetric tensors)
    DenseTensor out(m, 4);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    out.at(i, j, k, l) =
                        p.at(i, j, k, l) -
                        (p.at(i, j, k, l) + p.at(i, k, l, j) + p.at(i, l, j, k)) / 3.0;
    return out;
}

CurvTensor project_curvature_symmetries(const DenseTensor& d) {
    return CurvTensor::unchecked(project_curvature_symmetries_raw(d));
}

DenseTensor random_tensor(int m, int rank, std::uint64_t seed) {
    Rng rng(seed, 0x7e3a5c |  (static_cast<std::uint64_t>(rank) << 24));
    DenseTensor t(m, rank);
    for (double& v : t.data()) v = rng.normal();
    return t;
}

CurvTensor random_curvature_tensor(int m, std::uint64_t seed) {
    if (m < 3) throw domain_error("random_curvature_tensor: requires m >= 3");
    return project_curvature_symmetries(random_tensor(m, 4, seed));
}

SymTwoTensor random_sym_two_tensor(int m, std::uint64_t seed) {
    Rng rng(seed, 0x51f0a1);
    Matrix raw(m);
    for (double& v : raw.a) v = rng.normal();
    return SymTwoTensor(raw);
}

SymTwoTensor random_traceless_sym(int m, std::uint64_t seed) {
    SymTwoTensor e = random_sym_two_tensor(m, seed);
    const double mean = e.trace() / m;
    for (int i = 0; i < m; ++i) e.set(i, i, e(i, i) - mean);
    return e;
}

Matrix random_orthogonal(int m, std::uint64_t seed) {
    Rng rng(seed, 0x0a7b9d);
    Matrix q(m);
    for (double& v : q.a) v = rng.normal();
    // modified Gram-Schmidt on rows
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < i; ++k) {
            double dot = 0;
            for (int j = 0; j < m; ++j) dot += q(i, j) * q(k, j);
            for (int j = 0; j < m; ++j) q(i, j) -= dot * q(k, j);
        }
        double nrm = 0;
        for (int j = 0; j < m; ++j) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) throw numeric_error("random_orthogonal: degenerate draw");
        for (int j = 0; j < m; ++j) q(i, j) /= nrm;
    }
    return q;
}

DenseTensor orthonormalize(const DenseTensor& t, const Metric& g) {
    if (t.dim() != g.dim()) throw shape_error("orthonormalize: dimension mismatch");
    if (g.is_identity()) return t;
    const Matrix Linv = invert_lower(g.chol_lower());
    return transform_all_slots(t, Linv);
}

CurvTensor orthonormalize(const CurvTensor& t, const Metric& g) {
    if (g.is_identity()) return t;
    return CurvTensor::unchecked(orthonormalize(t.tensor(), g));
}

int binomial2(int m) { return m * (m - 1) / 2; }

}  // namespace curvlab
