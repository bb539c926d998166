#include "cli/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

#include "regsimplex/simplex.hpp"

#ifndef REGSIMPLEX_VERSION
#define REGSIMPLEX_VERSION "0.0.0"
#endif

namespace regsimplex::cli {

using nlohmann::ordered_json;

std::string_view tool_version() noexcept { return REGSIMPLEX_VERSION; }

std::string input_digest(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out += fmt::format("{:02x}", md[i]);
    }
    return out;
}

ordered_json tolerances_json(const ToleranceConfig& tol) {
    return {{"equidist_rel", tol.equidist_rel},
            {"sphericity_rel", tol.sphericity_rel},
            {"projection_rel", tol.projection_rel},
            {"ortho_cos", tol.ortho_cos}};
}

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(ordered_json(std::vector<double>(row.begin(), row.end())));
    }
    return rows;
}

ordered_json diagnostics_json(const DiagnosticsReport& r) {
    return {{"n", r.n},
            {"p", r.p},
            {"sigma2_from_distances", r.sigma2_from_distances},
            {"sigma2_from_trace", r.sigma2_from_trace},
            {"equidist_residual", r.equidist_residual},
            {"sphericity_residual", r.sphericity_residual},
            {"theorem_applicable", r.theorem_applicable},
            {"equidistant", r.equidistant},
            {"spherical", r.spherical},
            {"inconsistent", r.inconsistent},
            {"verdict", std::string(to_string(r.verdict))}};
}

ordered_json report_header(std::string_view command, std::string_view digest, const ToleranceConfig& tol) {
    return {{"tool", std::string(kToolName)},
            {"version", std::string(tool_version())},
            {"command", std::string(command)},
            {"input_digest", std::string(digest)},
            {"tolerances", tolerances_json(tol)}};
}

namespace {

ordered_json projection_json(const ProjectionReport& r) {
    return {{"sigma2", nullptr},  // filled by caller
            {"symmetry", r.symmetry},
            {"idempotence", r.idempotence},
            {"trace_deviation", r.trace_deviation},
            {"null_residual", r.null_residual},
            {"centering_deviation", r.centering_deviation},
            {"centering_max_abs", r.centering_max_abs},
            {"symmetry_ok", r.symmetry_ok},
            {"idempotence_ok", r.idempotence_ok},
            {"trace_ok", r.trace_ok},
            {"null_ok", r.null_ok},
            {"centering_ok", r.centering_ok},
            {"all_passed", r.all_passed()},
            {"a", matrix_json(r.a)}};
}

ordered_json lemma_json(const PointSet& u, double sigma2, const ToleranceConfig& tol) {
    const LemmaQuantities q = lemma_quantities(u.size(), sigma2);
    ordered_json vertices = ordered_json::array();
    double worst_r = 0.0;
    double worst_s = 0.0;
    double worst_cos = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v) {
        const VertexMeasure m = measure_vertex(u, v);
        worst_r = std::max(worst_r, std::abs(m.circumradius - q.r) / q.r);
        worst_s = std::max(worst_s, std::abs(m.centroid_shift - q.s) / q.s);
        worst_cos = std::max(worst_cos, m.max_cosine);
        vertices.push_back({{"circumradius", m.circumradius},
                            {"centroid_shift", m.centroid_shift},
                            {"apex_distance", m.apex_distance},
                            {"max_cosine", m.max_cosine}});
    }
    return {{"sigma2", sigma2},
            {"r", q.r},
            {"s", q.s},
            {"h", q.h},
            {"max_rel_error_r", worst_r},
            {"max_rel_error_s", worst_s},
            {"max_cosine", worst_cos},
            {"orthogonality_ok", worst_cos <= tol.ortho_cos},
            {"vertices", vertices}};
}

}  // namespace

ordered_json analysis_json(const PointSet& u, const ToleranceConfig& tol) {
    ordered_json out;
    out["n"] = u.size();
    out["p"] = u.dim();
    out["theorem_applicable"] = u.size() == u.dim() + 1;
    out["mean"] = mean(u);
    out["scatter"] = matrix_json(scatter(u));
    out["covariance"] = matrix_json(covariance(u));
    out["distance_matrix"] = matrix_json(distance_matrix(u));

    const Sphericity sph = sphericity(u);
    out["sphericity"] = {{"sigma2_hat", sph.sigma2_hat}, {"residual", sph.residual}};
    out["diagnostics"] = u.size() >= 2 ? diagnostics_json(classify(u, tol)) : ordered_json(nullptr);

    if (sph.sigma2_hat > 0.0) {
        ordered_json proj = projection_json(projection_checks(u, sph.sigma2_hat, tol));
        proj["sigma2"] = sph.sigma2_hat;
        out["projection_checks"] = std::move(proj);
    } else {
        out["projection_checks"] = nullptr;
    }
    const bool lemma_applies = u.size() >= 2 && u.size() == u.dim() + 1 && sph.sigma2_hat > 0.0;
    out["lemma"] = lemma_applies ? lemma_json(u, sph.sigma2_hat, tol) : ordered_json(nullptr);
    return out;
}

std::string to_text(const ordered_json& report) {
    std::string out;
    for (const auto& [key, value] : report.items()) {
        out += key;
        out += ": ";
        out += value.is_string() ? value.get<std::string>() : value.dump();
        out += '\n';
    }
    return out;
}

}  // namespace regsimplex::cli
