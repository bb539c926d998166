#include "regsimplex/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace regsimplex {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

Scale Scale::from_sigma2(double sigma2) {
    require_positive(sigma2, "sigma2");
    return Scale(sigma2);
}

Scale Scale::from_edge(double edge) {
    require_positive(edge, "edge length");
    return Scale(edge * edge / 2.0);
}

double Scale::edge() const noexcept { return std::sqrt(2.0 * sigma2_); }

void SimplexSpec::validate() const {
    if (dim == 0) {
        throw std::domain_error("simplex dimension must be at least 1 (n = p + 1 >= 2)");
    }
}

LemmaQuantities lemma_quantities(std::size_t n, double sigma2) {
    if (n < 2) {
        throw std::domain_error("lemma quantities need n >= 2");
    }
    require_positive(sigma2, "sigma2");
    const double nn = static_cast<double>(n);
    const double r = std::sqrt(sigma2 * (nn - 1.0) / nn);
    const double s = std::sqrt(sigma2 / (nn * (nn - 1.0)));
    return {n, r, s, r + s};
}

double apex_height(std::size_t k, double sigma2) {
    if (k < 3) {
        throw std::domain_error("apex height is defined for k >= 3");
    }
    const double r_prev = lemma_quantities(k - 1, sigma2).r;
    return std::sqrt(2.0 * sigma2 - r_prev * r_prev);
}

PointSet construct_incremental(const SimplexSpec& spec) {
    spec.validate();
    const std::size_t p = spec.dim;
    const std::size_t n = p + 1;
    const double sigma2 = spec.scale.sigma2();

    // Vertex 1 at the origin, vertex 2 on the first axis.
    std::vector<Vector> points(n, Vector(p, 0.0));
    points[1][0] = std::sqrt(2.0 * sigma2);

    Vector centroid(p, 0.0);
    centroid[0] = points[1][0] / 2.0;
    for (std::size_t k = 3; k <= n; ++k) {
        // centroid holds the mean of the first k-1 vertices, which span
        // only the first k-2 axes; vertex k rises along axis k-1.
        Vector& x = points[k - 1];
        x = centroid;
        x[k - 2] = apex_height(k, sigma2);
        const double w = 1.0 / static_cast<double>(k);
        for (std::size_t d = 0; d < p; ++d) {
            centroid[d] += (x[d] - centroid[d]) * w;
        }
    }

    PointSet u(p, std::move(points));
    return spec.centered ? center(u) : u;
}

PointSet construct_projection(const SimplexSpec& spec) {
    spec.validate();
    const std::size_t p = spec.dim;
    const std::size_t n = p + 1;
    const double sigma = std::sqrt(spec.scale.sigma2());

    // Columns of the centering matrix I - 11^T/n, in order. The last one is
    // the negative sum of the others and drops out.
    std::vector<Vector> columns(n, Vector(n, -1.0 / static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
        columns[i][i] += 1.0;
    }
    const std::vector<Vector> q = gram_schmidt(columns);
    if (q.size() != p) {
        throw std::logic_error("centering matrix basis has unexpected rank " + std::to_string(q.size()));
    }

    // X = sigma * Q^T: point i collects the i-th entries of q_1..q_p.
    std::vector<double> coords(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            coords[i * p + j] = sigma * q[j][i];
        }
    }
    return PointSet(p, n, std::move(coords));
}

PointSet construct(const SimplexSpec& spec) {
    switch (spec.method) {
        case Method::incremental:
            return construct_incremental(spec);
        case Method::projection:
            return construct_projection(spec);
    }
    throw std::invalid_argument("unknown construction method");
}

VertexMeasure measure_vertex(const PointSet& u, std::size_t vertex) {
    const PointSet rest = u.without(vertex);
    const Vector m_all = mean(u);
    const Vector m_rest = mean(rest);
    const auto x = u.point(vertex);

    const Vector apex = subtract(x, m_rest);
    VertexMeasure out{};
    out.circumradius = norm(subtract(x, m_all));
    out.centroid_shift = norm(subtract(m_all, m_rest));
    out.apex_distance = norm(apex);

    // |cos| to the subspace spanned by the centered remaining points is
    // ||P apex|| / ||apex||, with P the orthogonal projector onto it.
    std::vector<Vector> spanning;
    spanning.reserve(rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i) {
        spanning.push_back(subtract(rest.point(i), m_rest));
    }
    const std::vector<Vector> basis = gram_schmidt(spanning);
    double proj2 = 0.0;
    for (const Vector& q : basis) {
        const double c = dot(q, apex);
        proj2 += c * c;
    }
    out.max_cosine = out.apex_distance > 0.0 ? std::sqrt(proj2) / out.apex_distance : 0.0;
    return out;
}

ApexFrame apex_frame(const PointSet& u, std::size_t vertex) {
    const std::size_t p = u.dim();
    const PointSet rest = u.without(vertex);
    const Vector c = mean(rest);
    const Vector d = subtract(u.point(vertex), c);

    Matrix o = rotation_to_axis(d, p - 1);
    Vector t = o * c;
    for (double& v : t) {
        v = -v;
    }
    RigidMotion motion{std::move(o), std::move(t)};
    PointSet moved = apply_motion(rest, motion);
    return {std::move(motion), norm(d), std::move(moved)};
}

}  // namespace regsimplex
