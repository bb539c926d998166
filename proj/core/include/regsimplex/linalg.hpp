#pragma once

// Small dense real linear algebra: just enough for means, scatter matrices,
// Gram matrices, squared-distance matrices and orthonormal bases of point sets
// of modest size. Everything is double precision and value-semantic.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace regsimplex {

using Vector = std::vector<double>;

/// Dense row-major matrix with at least one row and one column.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transpose() const;
    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);
Vector subtract(std::span<const double> a, std::span<const double> b);
Matrix outer(std::span<const double> a, std::span<const double> b);

/// Determinant by partial-pivot elimination. Only used to fix rotation
/// handedness, so matrices are small and well conditioned.
double determinant(const Matrix& m);

/// Ordered set of n >= 1 points in R^p, all coordinates finite.
///
/// Points are stored contiguously, one after the other, so point i is the
/// i-th column of the p x n data matrix X.
class PointSet {
public:
    PointSet(std::size_t dim, std::vector<Vector> points);
    PointSet(std::size_t dim, std::size_t count, std::vector<double> coords);

    /// Columns of a p x n matrix become the points.
    static PointSet from_columns(const Matrix& x);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coords_.size() / dim_; }

    std::span<const double> point(std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> coords() const noexcept { return coords_; }

    /// The p x n matrix X = (x_1, ..., x_n).
    Matrix to_matrix() const;

    /// Copy without point i; requires size() >= 2.
    PointSet without(std::size_t i) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
};

/// Proper rigid motion x -> O x + t.
struct RigidMotion {
    Matrix rotation;
    Vector translation;

    static RigidMotion identity(std::size_t p);
    static RigidMotion translation_by(Vector t);

    std::size_t dim() const noexcept { return translation.size(); }

    /// Throws std::invalid_argument unless O is square with matching t,
    /// ||O^T O - I||_F <= tol and det(O) = +1 within tol.
    void validate(double tol = 1e-10) const;
};

Vector mean(const PointSet& u);
PointSet center(const PointSet& u);

/// B_u = sum over x of (x - mean)(x - mean)^T. Recenters internally.
Matrix scatter(const PointSet& u);

/// S_u = B_u / n.
Matrix covariance(const PointSet& u);

/// n x n matrix of squared distances ||x_i - x_j||^2.
Matrix distance_matrix(const PointSet& u);

/// n x n Gram matrix X^T X of the points as given (no centering).
Matrix gram(const PointSet& u);

/// Orthonormal basis of span(vectors), processed in input order. A vector
/// whose residual after projection falls below 1e-10 times the largest input
/// norm is dropped, so the basis size is the numerical rank.
std::vector<Vector> gram_schmidt(std::span<const Vector> vectors);

/// Haar-distributed proper rotation of R^p with zero translation. Bit
/// reproducible for a given (p, seed).
RigidMotion random_rotation(std::size_t p, std::uint64_t seed);

/// Proper rotation mapping the direction of `v` onto the standard axis `axis`.
/// For p = 1 only v > 0 can be mapped by a proper rotation; otherwise throws
/// std::domain_error.
Matrix rotation_to_axis(std::span<const double> v, std::size_t axis);

/// Points x_i -> O x_i + t.
PointSet apply_motion(const PointSet& u, const RigidMotion& m);

/// Relative comparison |a - b| <= rel * max(|a|, |b|), falling back to the
/// absolute floor 1e-12 when both operands are near zero.
bool close_rel(double a, double b, double rel) noexcept;

inline constexpr double kAbsoluteFloor = 1e-12;

}  // namespace regsimplex
