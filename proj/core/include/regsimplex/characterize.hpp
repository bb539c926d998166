#pragma once

// Numerical decision of the regular-simplex characterization: n = p + 1
// points are mutually equidistant (squared distance 2 sigma2) exactly when
// their scatter matrix equals sigma2 * I_p.
//
// Two routes are kept side by side. The distance route looks at the
// squared-distance matrix directly; the covariance route looks only at the
// scatter matrix. classify() runs both and flags any disagreement instead of
// picking a winner.

#include <cstddef>
#include <optional>
#include <string_view>

#include "regsimplex/linalg.hpp"

namespace regsimplex {

/// Tolerances are engineering defaults, not derived quantities.
struct ToleranceConfig {
    double equidist_rel = 1e-8;    // squared distances vs. their mean
    double sphericity_rel = 1e-8;  // ||B - sigma2_hat I||_F / ||B||_F
    double projection_rel = 1e-10; // projection-matrix residuals
    double ortho_cos = 1e-10;      // |cos| in orthogonality checks

    /// Throws std::invalid_argument unless every tolerance is in (0, 1).
    void validate() const;
};

/// Returns sigma2 = m / 2, where m is the mean off-diagonal squared distance,
/// when every off-diagonal entry is within equidist_rel * m of m and m > 0.
/// Throws std::domain_error for fewer than two points.
std::optional<double> is_equidistant(const PointSet& u, const ToleranceConfig& tol = {});

/// Largest relative deviation of an off-diagonal squared distance from the
/// off-diagonal mean; 0 when all points coincide. Requires n >= 2.
double equidistance_residual(const PointSet& u);

struct Sphericity {
    double sigma2_hat;  // tr(B) / p
    double residual;    // ||B - sigma2_hat I||_F / ||B||_F, or 0 when B = 0
};

/// Trace-matched sphericity of the scatter matrix. sigma2_hat is the
/// least-squares multiple of I closest to B.
Sphericity sphericity(const PointSet& u);

/// Properties of A = X_c^T X_c / sigma2 for centered data X_c.
struct ProjectionReport {
    std::size_t n = 0;
    std::size_t p = 0;
    Matrix a{1, 1};
    double symmetry = 0.0;            // ||A - A^T||_F
    double idempotence = 0.0;         // ||A^2 - A||_F
    double trace_deviation = 0.0;     // |tr(A) - p|
    double null_residual = 0.0;       // ||A 1_n||
    double centering_deviation = 0.0; // ||A - (I - 11^T/n)||_F
    double centering_max_abs = 0.0;   // max entrywise |A - (I - 11^T/n)|
    bool symmetry_ok = false;
    bool idempotence_ok = false;
    bool trace_ok = false;
    bool null_ok = false;
    bool centering_ok = false;

    bool all_passed() const noexcept {
        return symmetry_ok && idempotence_ok && trace_ok && null_ok && centering_ok;
    }
};

/// Each residual passes when it is at most projection_rel * max(1, ||A||_F).
/// Centers u first. Throws std::domain_error unless sigma2 > 0.
ProjectionReport projection_checks(const PointSet& u, double sigma2, const ToleranceConfig& tol = {});

enum class Verdict { regular_simplex, not_equidistant, not_spherical, not_applicable };

std::string_view to_string(Verdict v) noexcept;

struct DiagnosticsReport {
    std::size_t n = 0;
    std::size_t p = 0;
    double sigma2_from_distances = 0.0;
    double sigma2_from_trace = 0.0;
    double equidist_residual = 0.0;
    double sphericity_residual = 0.0;
    bool theorem_applicable = false;
    bool equidistant = false;  // distance route verdict
    bool spherical = false;    // covariance route verdict
    bool inconsistent = false; // routes disagree while n = p + 1
    Verdict verdict = Verdict::not_applicable;
};

/// Covariance-route classification with the distance route recorded
/// alongside.
///
/// verdict is regular_simplex iff n = p + 1, the sphericity residual is
/// within tolerance and sigma2_hat > 0. Otherwise: not_applicable when
/// n != p + 1, not_equidistant when the scatter vanishes (all points
/// coincide), not_spherical for everything else. Throws std::domain_error
/// for fewer than two points.
DiagnosticsReport classify(const PointSet& u, const ToleranceConfig& tol = {});

/// Squared interpoint distances recovered from inner products alone,
/// D_ij = sigma2 (A_ii + A_jj - 2 A_ij) with A = X_c^T X_c / sigma2. On a
/// spherical configuration A_ii = 1 - 1/n and A_ij = -1/n, so every entry is
/// 2 sigma2.
/// Throws std::domain_error unless sigma2 > 0 and the sphericity residual of
/// u is within tol.sphericity_rel.
Matrix backward_distance_recovery(const PointSet& u, double sigma2, const ToleranceConfig& tol = {});

}  // namespace regsimplex
