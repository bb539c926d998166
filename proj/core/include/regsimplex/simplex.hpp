#pragma once

// Regular simplices: n = p + 1 points in R^p with common squared edge 2*sigma2.
//
// Two independent constructors are provided. The incremental one stacks
// vertices axis by axis using the circumradius / apex-height recursion; the
// projection one factors sigma2 * (I - 11^T/n) through an orthonormal basis
// of the complement of the all-ones vector. Both return centered output by
// default and agree up to a rigid motion.

#include <cstddef>

#include "regsimplex/linalg.hpp"

namespace regsimplex {

/// Positive scale of a simplex, given either as sigma2 or as edge length L,
/// with L^2 = 2 * sigma2.
class Scale {
public:
    static Scale from_sigma2(double sigma2);
    static Scale from_edge(double edge);

    double sigma2() const noexcept { return sigma2_; }
    double edge() const noexcept;

private:
    explicit Scale(double sigma2) : sigma2_(sigma2) {}
    double sigma2_;
};

enum class Method { incremental, projection };

struct SimplexSpec {
    std::size_t dim = 1;
    Scale scale = Scale::from_sigma2(0.5);
    Method method = Method::incremental;
    bool centered = true;

    /// Throws std::domain_error when dim == 0.
    void validate() const;
};

/// Circumradius r, centroid shift s and apex height h = r + s of a regular
/// n-point simplex.
struct LemmaQuantities {
    std::size_t n;
    double r;
    double s;
    double h;
};

/// r^2 = sigma2 (n-1)/n, s^2 = sigma2 / (n(n-1)). Requires n >= 2 and
/// sigma2 > 0 (std::domain_error otherwise).
LemmaQuantities lemma_quantities(std::size_t n, double sigma2);

/// Height of vertex k above the centroid of the first k-1 vertices, computed
/// as sqrt(2 sigma2 - r_{k-1}^2). Equals r_k + s_k; requires k >= 3.
double apex_height(std::size_t k, double sigma2);

PointSet construct_incremental(const SimplexSpec& spec);
PointSet construct_projection(const SimplexSpec& spec);

/// Dispatches on spec.method.
PointSet construct(const SimplexSpec& spec);

/// Measurements around one vertex x of a point set u, as used by the
/// circumradius / centroid-shift / orthogonality properties.
struct VertexMeasure {
    double circumradius;    // ||x - mean(u)||
    double centroid_shift;  // ||mean(u) - mean(u - {x})||
    double apex_distance;   // beta = ||x - mean(u - {x})||
    double max_cosine;      // max |cos| between x - mean(u - {x}) and the
                            // centered points of u - {x}
};

/// Requires u.size() >= 2.
VertexMeasure measure_vertex(const PointSet& u, std::size_t vertex);

/// The rigid motion V carrying mean(u - {x}) to the origin and x onto
/// beta * e_p, together with the image V(u - {x}).
struct ApexFrame {
    RigidMotion motion;
    double beta;
    PointSet rest;
};

/// Requires u.size() >= 2. For p = 1 the vertex must lie on the positive
/// side of the remaining point (no proper rotation of the line flips it).
ApexFrame apex_frame(const PointSet& u, std::size_t vertex);

}  // namespace regsimplex
