#include "regsimplex/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regsimplex {

namespace {

void require_pair(const PointSet& u) {
    if (u.size() < 2) {
        throw std::domain_error("need at least two points");
    }
}

void require_positive_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::domain_error("sigma2 must be positive and finite");
    }
}

double mean_off_diagonal(const Matrix& d) {
    const std::size_t n = d.rows();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += d(i, j);
        }
    }
    return sum / static_cast<double>(n * (n - 1) / 2);
}

double max_off_diagonal_deviation(const Matrix& d, double m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = i + 1; j < d.cols(); ++j) {
            worst = std::max(worst, std::abs(d(i, j) - m));
        }
    }
    return worst;
}

// A = X_c^T X_c / sigma2.
Matrix normalized_gram(const PointSet& u, double sigma2) { return gram(center(u)) * (1.0 / sigma2); }

}  // namespace

void ToleranceConfig::validate() const {
    for (double t : {equidist_rel, sphericity_rel, projection_rel, ortho_cos}) {
        if (!(t > 0.0 && t < 1.0)) {
            throw std::invalid_argument("tolerances must lie strictly between 0 and 1");
        }
    }
}

std::optional<double> is_equidistant(const PointSet& u, const ToleranceConfig& tol) {
    require_pair(u);
    const Matrix d = distance_matrix(u);
    const double m = mean_off_diagonal(d);
    if (!(m > 0.0)) {
        return std::nullopt;
    }
    if (max_off_diagonal_deviation(d, m) > tol.equidist_rel * m) {
        return std::nullopt;
    }
    return m / 2.0;
}

double equidistance_residual(const PointSet& u) {
    require_pair(u);
    const Matrix d = distance_matrix(u);
    const double m = mean_off_diagonal(d);
    if (m == 0.0) {
        return 0.0;
    }
    return max_off_diagonal_deviation(d, m) / m;
}

Sphericity sphericity(const PointSet& u) {
    const Matrix b = scatter(u);
    const double bnorm = b.frobenius_norm();
    const double sigma2_hat = b.trace() / static_cast<double>(u.dim());
    if (bnorm == 0.0) {
        return {0.0, 0.0};
    }
    const Matrix dev = b - Matrix::identity(u.dim()) * sigma2_hat;
    return {sigma2_hat, dev.frobenius_norm() / bnorm};
}

ProjectionReport projection_checks(const PointSet& u, double sigma2, const ToleranceConfig& tol) {
    require_positive_sigma2(sigma2);
    const std::size_t n = u.size();
    const std::size_t p = u.dim();
    const double nn = static_cast<double>(n);

    ProjectionReport r;
    r.n = n;
    r.p = p;
    r.a = normalized_gram(u, sigma2);
    const Matrix& a = r.a;

    r.symmetry = (a - a.transpose()).frobenius_norm();
    r.idempotence = (a * a - a).frobenius_norm();
    r.trace_deviation = std::abs(a.trace() - static_cast<double>(p));
    r.null_residual = norm(a * Vector(n, 1.0));

    Matrix centering = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            centering(i, j) -= 1.0 / nn;
        }
    }
    const Matrix diff = a - centering;
    r.centering_deviation = diff.frobenius_norm();
    r.centering_max_abs = diff.max_abs();

    const double limit = tol.projection_rel * std::max(1.0, a.frobenius_norm());
    r.symmetry_ok = r.symmetry <= limit;
    r.idempotence_ok = r.idempotence <= limit;
    r.trace_ok = r.trace_deviation <= limit;
    r.null_ok = r.null_residual <= limit;
    r.centering_ok = r.centering_deviation <= limit;
    return r;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::regular_simplex:
            return "regular_simplex";
        case Verdict::not_equidistant:
            return "not_equidistant";
        case Verdict::not_spherical:
            return "not_spherical";
        case Verdict::not_applicable:
            return "not_applicable";
    }
    return "not_applicable";
}

DiagnosticsReport classify(const PointSet& u, const ToleranceConfig& tol) {
    require_pair(u);
    DiagnosticsReport rep;
    rep.n = u.size();
    rep.p = u.dim();
    rep.theorem_applicable = rep.n == rep.p + 1;

    const Matrix d = distance_matrix(u);
    const double m = mean_off_diagonal(d);
    rep.sigma2_from_distances = m / 2.0;
    rep.equidist_residual = m > 0.0 ? max_off_diagonal_deviation(d, m) / m : 0.0;
    rep.equidistant = m > 0.0 && rep.equidist_residual <= tol.equidist_rel;

    const Sphericity sph = sphericity(u);
    rep.sigma2_from_trace = sph.sigma2_hat;
    rep.sphericity_residual = sph.residual;
    rep.spherical = sph.sigma2_hat > 0.0 && sph.residual <= tol.sphericity_rel;

    rep.inconsistent = rep.theorem_applicable && rep.equidistant != rep.spherical;

    if (!rep.theorem_applicable) {
        rep.verdict = Verdict::not_applicable;
    } else if (rep.spherical) {
        rep.verdict = Verdict::regular_simplex;
    } else if (sph.sigma2_hat == 0.0) {
        rep.verdict = Verdict::not_equidistant;
    } else {
        rep.verdict = Verdict::not_spherical;
    }
    return rep;
}

Matrix backward_distance_recovery(const PointSet& u, double sigma2, const ToleranceConfig& tol) {
    require_positive_sigma2(sigma2);
    const Sphericity sph = sphericity(u);
    if (!(sph.sigma2_hat > 0.0) || sph.residual > tol.sphericity_rel) {
        throw std::domain_error("distance recovery needs a spherical configuration");
    }
    const Matrix a = normalized_gram(u, sigma2);
    const std::size_t n = a.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                d(i, j) = sigma2 * (a(i, i) + a(j, j) - 2.0 * a(i, j));
            }
        }
    }
    return d;
}

}  // namespace regsimplex
