#pragma once

// On-disk point sets.
//
// CSV: one point per line, coordinates separated by commas, no header; the
// dimension comes from the first line.
// JSON: {"p": int, "n": int, "points": [[...], ...], "meta": {...}} where p, n
// and meta are optional on input.
//
// Coordinates are written with 17 significant digits, so a file written by
// this tool reads back to the same doubles.

#include <json.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "regsimplex/linalg.hpp"

namespace regsimplex::cli {

enum class Format { csv, json };

std::string_view to_string(Format f) noexcept;

/// Malformed input. line() is 1-based, or 0 when no line applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct PointSetFile {
    PointSet points;
    Format format;
    nlohmann::ordered_json meta;  // null when absent
};

/// JSON when the first non-blank character is '{', CSV otherwise.
Format sniff_format(std::string_view text) noexcept;

PointSetFile parse_point_set(std::string_view text);
PointSetFile parse_csv(std::string_view text);
PointSetFile parse_json(std::string_view text);

std::string write_csv(const PointSet& u);
std::string write_json(const PointSet& u, const nlohmann::ordered_json& meta = nullptr);
std::string write_point_set(const PointSet& u, Format f, const nlohmann::ordered_json& meta = nullptr);

/// "%.17g"
std::string format_double(double x);

}  // namespace regsimplex::cli
