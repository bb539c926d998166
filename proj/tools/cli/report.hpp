#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "regsimplex/characterize.hpp"

namespace regsimplex::cli {

inline constexpr std::string_view kToolName = "regsimplex";

std::string_view tool_version() noexcept;

/// "sha256:<hex>" of the raw input bytes.
std::string input_digest(std::string_view bytes);

nlohmann::ordered_json tolerances_json(const ToleranceConfig& tol);
nlohmann::ordered_json matrix_json(const Matrix& m);
nlohmann::ordered_json diagnostics_json(const DiagnosticsReport& r);

/// Header shared by every report: tool, version, command, digest, tolerances.
nlohmann::ordered_json report_header(std::string_view command, std::string_view digest, const ToleranceConfig& tol);

/// Full numeric dump for `analyze`. Classification fields are null for a
/// single point; projection and lemma blocks are null when they do not apply.
nlohmann::ordered_json analysis_json(const PointSet& u, const ToleranceConfig& tol);

/// "key: value" lines of a flat JSON object; nested values are dumped inline.
std::string to_text(const nlohmann::ordered_json& report);

}  // namespace regsimplex::cli
