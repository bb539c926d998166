#include "regsimplex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "regsimplex/random.hpp"

namespace regsimplex {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shape mismatch");
    }
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector length mismatch");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix must have at least one row and one column");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix must have at least one row and one column");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix entry count does not match shape");
    }
    require_finite(data_, "matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("matrix must have at least one row and one column");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

double Matrix::trace() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        sum += (*this)(i, i);
    }
    return sum;
}

double Matrix::frobenius_norm() const { return norm(data_); }

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matrix product shape mismatch");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> v) {
    if (a.cols() != v.size()) {
        throw std::invalid_argument("matrix-vector shape mismatch");
    }
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = dot(a.row(i), v);
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

double norm(std::span<const double> v) {
    // Scaled to avoid overflow/underflow in the squares.
    double scale = 0.0;
    for (double x : v) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (double x : v) {
        const double y = x / scale;
        sum += y * y;
    }
    return scale * std::sqrt(sum);
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b);
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            m(i, j) = a[i] * b[j];
        }
    }
    return m;
}

double determinant(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("determinant of a non-square matrix");
    }
    const std::size_t n = m.rows();
    Matrix lu = m;
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) {
                pivot = i;
            }
        }
        if (lu(pivot, k) == 0.0) {
            return 0.0;
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(pivot, j));
            }
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            for (std::size_t j = k; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
        }
    }
    return det;
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::size_t dim, std::vector<Vector> points) : dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("point dimension must be at least 1");
    }
    if (points.empty()) {
        throw std::invalid_argument("empty input");
    }
    coords_.reserve(points.size() * dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) {
            throw std::invalid_argument("point " + std::to_string(i) + " has " +
                                        std::to_string(points[i].size()) + " coordinates, expected " +
                                        std::to_string(dim));
        }
        coords_.insert(coords_.end(), points[i].begin(), points[i].end());
    }
    require_finite(coords_, "point set");
}

PointSet::PointSet(std::size_t dim, std::size_t count, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim == 0) {
        throw std::invalid_argument("point dimension must be at least 1");
    }
    if (count == 0) {
        throw std::invalid_argument("empty input");
    }
    if (coords_.size() != dim * count) {
        throw std::invalid_argument("coordinate count does not match dim * count");
    }
    require_finite(coords_, "point set");
}

PointSet PointSet::from_columns(const Matrix& x) {
    const auto t = x.transpose().data();
    return PointSet(x.rows(), x.cols(), std::vector<double>(t.begin(), t.end()));
}

Matrix PointSet::to_matrix() const {
    Matrix x(dim_, size());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t d = 0; d < dim_; ++d) {
            x(d, i) = coords_[i * dim_ + d];
        }
    }
    return x;
}

PointSet PointSet::without(std::size_t i) const {
    if (size() < 2) {
        throw std::invalid_argument("cannot remove a point from a single-point set");
    }
    if (i >= size()) {
        throw std::out_of_range("point index out of range");
    }
    std::vector<double> rest;
    rest.reserve(coords_.size() - dim_);
    rest.insert(rest.end(), coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    rest.insert(rest.end(), coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_), coords_.end());
    return PointSet(dim_, size() - 1, std::move(rest));
}

// ---------------------------------------------------------------------------
// RigidMotion

RigidMotion RigidMotion::identity(std::size_t p) { return {Matrix::identity(p), Vector(p, 0.0)}; }

RigidMotion RigidMotion::translation_by(Vector t) {
    if (t.empty()) {
        throw std::invalid_argument("translation must have at least one component");
    }
    require_finite(t, "translation");
    Matrix o = Matrix::identity(t.size());
    return {std::move(o), std::move(t)};
}

void RigidMotion::validate(double tol) const {
    const std::size_t p = translation.size();
    if (rotation.rows() != p || rotation.cols() != p) {
        throw std::invalid_argument("rotation and translation dimensions disagree");
    }
    const double ortho = (rotation.transpose() * rotation - Matrix::identity(p)).frobenius_norm();
    if (ortho > tol) {
        throw std::invalid_argument("rotation is not orthogonal");
    }
    if (std::abs(determinant(rotation) - 1.0) > tol) {
        throw std::invalid_argument("rotation is not proper (det != +1)");
    }
}

// ---------------------------------------------------------------------------
// Statistics

Vector mean(const PointSet& u) {
    const std::size_t n = u.size();
    if (n == 0) {
        throw std::invalid_argument("empty input");
    }
    Vector m(u.dim(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = u.point(i);
        for (std::size_t d = 0; d < u.dim(); ++d) {
            m[d] += x[d];
        }
    }
    for (double& v : m) {
        v /= static_cast<double>(n);
    }
    return m;
}

PointSet center(const PointSet& u) {
    const Vector m = mean(u);
    std::vector<double> coords(u.coords().begin(), u.coords().end());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t d = 0; d < u.dim(); ++d) {
            coords[i * u.dim() + d] -= m[d];
        }
    }
    return PointSet(u.dim(), u.size(), std::move(coords));
}

Matrix scatter(const PointSet& u) {
    const PointSet c = center(u);
    const std::size_t p = c.dim();
    Matrix b(p, p);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto x = c.point(i);
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t s = r; s < p; ++s) {
                b(r, s) += x[r] * x[s];
            }
        }
    }
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = 0; s < r; ++s) {
            b(r, s) = b(s, r);
        }
    }
    return b;
}

Matrix covariance(const PointSet& u) { return scatter(u) * (1.0 / static_cast<double>(u.size())); }

Matrix distance_matrix(const PointSet& u) {
    const std::size_t n = u.size();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto a = u.point(i);
            const auto b = u.point(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < u.dim(); ++k) {
                const double diff = a[k] - b[k];
                sum += diff * diff;
            }
            d(i, j) = sum;
            d(j, i) = sum;
        }
    }
    return d;
}

Matrix gram(const PointSet& u) {
    const std::size_t n = u.size();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            g(i, j) = dot(u.point(i), u.point(j));
            g(j, i) = g(i, j);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Orthonormalization and rotations

std::vector<Vector> gram_schmidt(std::span<const Vector> vectors) {
    double max_norm = 0.0;
    for (const Vector& v : vectors) {
        max_norm = std::max(max_norm, norm(v));
    }
    const double drop = 1e-10 * max_norm;

    std::vector<Vector> basis;
    for (const Vector& v : vectors) {
        Vector w = v;
        // Modified Gram-Schmidt, applied twice; one pass loses orthogonality
        // once the inputs are nearly dependent.
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& q : basis) {
                const double c = dot(q, w);
                for (std::size_t k = 0; k < w.size(); ++k) {
                    w[k] -= c * q[k];
                }
            }
        }
        const double r = norm(w);
        if (max_norm == 0.0 || r <= drop) {
            continue;
        }
        for (double& x : w) {
            x /= r;
        }
        basis.push_back(std::move(w));
    }
    return basis;
}

RigidMotion random_rotation(std::size_t p, std::uint64_t seed) {
    if (p == 0) {
        throw std::invalid_argument("rotation dimension must be at least 1");
    }
    GaussianStream gauss(seed);
    std::vector<Vector> columns;
    // A Gaussian matrix is singular with probability zero; redraw if the
    // orthonormalization still came up short.
    do {
        std::vector<Vector> draw(p, Vector(p));
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) {
                draw[c][r] = gauss.next();
            }
        }
        columns = gram_schmidt(draw);
    } while (columns.size() != p);

    // Gram-Schmidt is the QR factorization with a positive diagonal in R, so
    // the column signs already match the Haar convention.
    Matrix o(p, p);
    for (std::size_t c = 0; c < p; ++c) {
        for (std::size_t r = 0; r < p; ++r) {
            o(r, c) = columns[c][r];
        }
    }
    if (determinant(o) < 0.0) {
        for (std::size_t r = 0; r < p; ++r) {
            o(r, p - 1) = -o(r, p - 1);
        }
    }
    return {std::move(o), Vector(p, 0.0)};
}

Matrix rotation_to_axis(std::span<const double> v, std::size_t axis) {
    const std::size_t p = v.size();
    if (p == 0 || axis >= p) {
        throw std::invalid_argument("axis out of range");
    }
    const double len = norm(v);
    if (len == 0.0) {
        throw std::domain_error("cannot align the zero vector");
    }
    Vector d(v.begin(), v.end());
    for (double& x : d) {
        x /= len;
    }
    if (p == 1) {
        if (d[0] < 0.0) {
            throw std::domain_error("no proper rotation of R^1 reverses direction");
        }
        return Matrix::identity(1);
    }

    // Householder reflection H sending d to e_axis, followed by the
    // reflection across a coordinate hyperplane that fixes e_axis. The
    // product of two reflections is a proper rotation.
    Vector w = d;
    w[axis] -= 1.0;
    Matrix h = Matrix::identity(p);
    const double ww = dot(w, w);
    if (ww > 0.0) {
        h -= outer(w, w) * (2.0 / ww);
    } else {
        // d already equals e_axis; H must still be a reflection fixing it.
        const std::size_t other = axis == 0 ? 1 : 0;
        h(other, other) = -1.0;
    }
    const std::size_t flip = axis == 0 ? 1 : 0;
    for (std::size_t c = 0; c < p; ++c) {
        h(flip, c) = -h(flip, c);
    }
    return h;
}

PointSet apply_motion(const PointSet& u, const RigidMotion& m) {
    if (m.rotation.rows() != u.dim() || m.rotation.cols() != u.dim() || m.translation.size() != u.dim()) {
        throw std::invalid_argument("rigid motion dimension does not match point set");
    }
    std::vector<double> coords;
    coords.reserve(u.coords().size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Vector y = m.rotation * u.point(i);
        for (std::size_t d = 0; d < u.dim(); ++d) {
            coords.push_back(y[d] + m.translation[d]);
        }
    }
    return PointSet(u.dim(), u.size(), std::move(coords));
}

bool close_rel(double a, double b, double rel) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < kAbsoluteFloor) {
        return std::abs(a - b) <= kAbsoluteFloor;
    }
    return std::abs(a - b) <= rel * scale;
}

}  // namespace regsimplex
