#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

/// Dense rank-q tensor on an m-dimensional space, row-major flat storage
/// with 0-based indices (i1,...,iq).  Ranks 1..6 are supported (rank 6 only
/// appears as the image of the hat map on rank-4 tensors).
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(int m, int rank);
    static DenseTensor from_data(int m, int rank, std::vector<double> data);

    int dim() const { return m_; }
    int rank() const { return rank_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    template <typename... Is>
    double& at(Is... is) {
        static_assert((std::is_convertible_v<Is, int> && ...));
        return data_[offset(is...)];
    }
    template <typename... Is>
    double at(Is... is) const {
        return data_[offset(is...)];
    }

    std::size_t flat_index(std::span<const int> idx) const;

    double norm2() const;  // identity-metric squared norm
    double norm() const;
    double dot(const DenseTensor& other) const;  // identity-metric inner product

    DenseTensor& operator+=(const DenseTensor& rhs);
    DenseTensor& operator-=(const DenseTensor& rhs);
    DenseTensor& operator*=(double s);
    friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
    friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
    friend DenseTensor operator*(double s, DenseTensor t) { return t *= s; }

private:
    template <typename... Is>
    std::size_t offset(Is... is) const {
        const std::array<int, sizeof...(Is)> idx{static_cast<int>(is)...};
        std::size_t off = 0;
        for (int v : idx) off = off * static_cast<std::size_t>(m_) + static_cast<std::size_t>(v);
        return off;
    }

    int m_ = 0;
    int rank_ = 0;
    std::vector<double> data_;
};

/// Square matrix helper (plain row-major storage); used for metrics, frames
/// and the curvature operator, whose size C(m,2) exceeds the spatial dim.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    static Matrix identity(int size);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    double frobenius_norm() const;
    double trace() const;
    Matrix transposed() const;
    friend Matrix operator*(const Matrix& x, const Matrix& y);
};

/// Cholesky factorization g = L L^T; throws decomposition_error if a pivot
/// is not strictly positive.
Matrix cholesky(const Matrix& g);
/// Inverse of a lower-triangular matrix by forward substitution.
Matrix invert_lower(const Matrix& L);
/// Inverse of an SPD matrix via its Cholesky factor.
Matrix spd_inverse(const Matrix& g);

/// Riemannian metric at a point: symmetric positive definite matrix with
/// cached Cholesky factor and inverse.
class Metric {
public:
    explicit Metric(Matrix g);
    static Metric identity(int m);

    int dim() const { return m_; }
    bool is_identity() const { return identity_; }
    const Matrix& g() const { return g_; }
    const Matrix& inverse() const { return inv_; }
    const Matrix& chol_lower() const { return chol_; }

private:
    int m_ = 0;
    bool identity_ = false;
    Matrix g_, chol_, inv_;
};

/// Symmetric 2-tensor; symmetrized on construction.
class SymTwoTensor {
public:
    SymTwoTensor() = default;
    explicit SymTwoTensor(int m) : m_(m), data_(static_cast<std::size_t>(m) * m, 0.0) {
        if (m < 1) throw domain_error("SymTwoTensor: dimension must be >= 1");
    }
    explicit SymTwoTensor(const Matrix& raw);

    int dim() const { return m_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * m_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * m_ + j]; }
    void set(int i, int j, double v) {
        data_[static_cast<std::size_t>(i) * m_ + j] = v;
        data_[static_cast<std::size_t>(j) * m_ + i] = v;
    }

    double trace() const;
    double norm2() const;  // identity-metric contraction E_ij E_ij
    Matrix as_matrix() const;
    DenseTensor as_tensor() const;

    SymTwoTensor& operator+=(const SymTwoTensor& rhs);
    SymTwoTensor& operator-=(const SymTwoTensor& rhs);
    SymTwoTensor& operator*=(double s);
    friend SymTwoTensor operator-(SymTwoTensor a, const SymTwoTensor& b) { return a -= b; }
    friend SymTwoTensor operator*(double s, SymTwoTensor t) { return t *= s; }

private:
    int m_ = 0;
    std::vector<double> data_;
};

/// 2-form stored as a full antisymmetric matrix; |e_i ^ e_j|^2 = 2 in an
/// orthonormal frame (the full-contraction norm).
class TwoForm {
public:
    explicit TwoForm(int m) : m_(m), data_(static_cast<std::size_t>(m) * m, 0.0) {}
    explicit TwoForm(const Matrix& raw);  // antisymmetrized
    static TwoForm wedge(std::span<const double> u, std::span<const double> v);

    int dim() const { return m_; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * m_ + j]; }
    void set(int i, int j, double v) {
        data_[static_cast<std::size_t>(i) * m_ + j] = v;
        data_[static_cast<std::size_t>(j) * m_ + i] = -v;
    }

    double norm2() const;
    DenseTensor as_tensor() const;

private:
    int m_ = 0;
    std::vector<double> data_;
};

/// Algebraic curvature tensor: rank-4 with pair antisymmetry, pair-exchange
/// symmetry and the first Bianchi identity.  The checked constructor rejects
/// data whose relative residuals exceed `tol`; `unchecked` is for values
/// produced by constructions that guarantee the symmetries.
class CurvTensor {
public:
    CurvTensor() = default;
    explicit CurvTensor(DenseTensor t, double tol = 1e-6);
    static CurvTensor unchecked(DenseTensor t);
    static CurvTensor zero(int m);

    int dim() const { return tensor_.dim(); }
    const DenseTensor& tensor() const { return tensor_; }
    double at(int i, int j, int k, int t) const { return tensor_.at(i, j, k, t); }

    double norm2() const { return tensor_.norm2(); }
    double norm() const { return tensor_.norm(); }

private:
    DenseTensor tensor_;
};

/// Relative residual of the pair symmetries T_ijkt = -T_jikt = T_ktij.
double symmetry_residual(const DenseTensor& t);
/// Relative residual of the first Bianchi identity (cyclic sum over the
/// last three slots).
double bianchi_residual(const DenseTensor& t);

/// Full metric contraction <A, B> = A_{i1..iq} B^{i1..iq}.
double inner(const DenseTensor& a, const DenseTensor& b, const Metric& g);

/// Contract slot `slot` (0-based) of T with the matrix M: out_{..a..} =
/// sum_b M(a, b) T_{..b..}.
DenseTensor contract_slot(const DenseTensor& t, const Matrix& M, int slot);
/// Apply M to every slot of T (frame change).
DenseTensor transform_all_slots(const DenseTensor& t, const Matrix& M);

/// Kulkarni-Nomizu product of symmetric 2-tensors:
/// (E ^ F)_ijkt = E_ik F_jt + E_jt F_ik - E_it F_jk - E_jk F_it.
CurvTensor kulkarni_nomizu(const SymTwoTensor& e, const SymTwoTensor& f);

/// Ricci contraction E_jt = g^{ik} T_ijkt in an orthonormal frame.
SymTwoTensor ricci_contraction(const CurvTensor& t);
SymTwoTensor ricci_contraction(const DenseTensor& t);

/// Orthogonal projection of a rank-4 tensor onto the space of algebraic
/// curvature tensors: antisymmetrize both pairs, symmetrize pair exchange,
/// then remove the Bianchi component.
DenseTensor project_curvature_symmetries_raw(const DenseTensor& d);
CurvTensor project_curvature_symmetries(const DenseTensor& d);

/// Seeded random curvature tensor: i.i.d. standard normal entries projected
/// onto the curvature symmetries.  Requires m >= 3.
CurvTensor random_curvature_tensor(int m, std::uint64_t seed);
SymTwoTensor random_sym_two_tensor(int m, std::uint64_t seed);
SymTwoTensor random_traceless_sym(int m, std::uint64_t seed);
DenseTensor random_tensor(int m, int rank, std::uint64_t seed);
/// Haar-ish random orthogonal matrix (Gram-Schmidt on a Gaussian matrix).
Matrix random_orthogonal(int m, std::uint64_t seed);

/// Change T to the orthonormal frame determined by the Cholesky factor of g,
/// so that scalar invariants computed with the identity metric afterwards
/// match those computed with g before.
CurvTensor orthonormalize(const CurvTensor& t, const Metric& g);
DenseTensor orthonormalize(const DenseTensor& t, const Metric& g);

int binomial2(int m);  // C(m, 2)

}  // namespace curvlab
