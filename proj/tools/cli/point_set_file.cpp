#include "cli/point_set_file.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace regsimplex::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
    const std::string_view t = trim(field);
    if (t.empty()) {
        throw ParseError(line, "empty coordinate");
    }
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    // from_chars rejects a leading '+', which is still a valid decimal.
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(line, "not a decimal number: '" + std::string(t) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(line, "non-finite coordinate: '" + std::string(t) + "'");
    }
    return value;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

std::string_view to_string(Format f) noexcept { return f == Format::json ? "json" : "csv"; }

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

Format sniff_format(std::string_view text) noexcept {
    const auto first = text.find_first_not_of(" \t\r\n");
    return first != std::string_view::npos && text[first] == '{' ? Format::json : Format::csv;
}

PointSetFile parse_point_set(std::string_view text) {
    return sniff_format(text) == Format::json ? parse_json(text) : parse_csv(text);
}

PointSetFile parse_csv(std::string_view text) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::size_t count = 0;
    std::size_t line_no = 0;
    std::size_t blank_run_start = 0;

    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty()) {
            if (blank_run_start == 0) {
                blank_run_start = line_no;
            }
            continue;
        }
        if (blank_run_start != 0) {
            throw ParseError(blank_run_start, "blank line inside point data");
        }

        std::size_t fields = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            coords.push_back(parse_number(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                               : comma - start),
                                          line_no));
            ++fields;
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (dim == 0) {
            dim = fields;
        } else if (fields != dim) {
            throw ParseError(line_no, "expected " + std::to_string(dim) + " coordinates, found " +
                                          std::to_string(fields));
        }
        ++count;
    }
    if (count == 0) {
        throw ParseError(0, "empty input");
    }
    return {PointSet(dim, count, std::move(coords)), Format::csv, nullptr};
}

PointSetFile parse_json(std::string_view text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
    }
    if (!doc.is_object()) {
        throw ParseError(1, "top-level JSON value must be an object");
    }
    if (!doc.contains("points") || !doc["points"].is_array()) {
        throw ParseError(0, "missing \"points\" array");
    }
    const auto& pts = doc["points"];
    if (pts.empty()) {
        throw ParseError(0, "empty input");
    }

    std::size_t dim = 0;
    std::vector<double> coords;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& row = pts[i];
        const std::string where = "points[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) {
            throw ParseError(0, where + " must be a non-empty array of numbers");
        }
        if (dim == 0) {
            dim = row.size();
        } else if (row.size() != dim) {
            throw ParseError(0, where + " has " + std::to_string(row.size()) + " coordinates, expected " +
                                    std::to_string(dim));
        }
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw ParseError(0, where + " contains a non-number");
            }
            const double x = v.get<double>();
            if (!std::isfinite(x)) {
                throw ParseError(0, where + " contains a non-finite value");
            }
            coords.push_back(x);
        }
    }

    auto check_count = [&](const char* key, std::size_t want) {
        if (!doc.contains(key)) {
            return;
        }
        const auto& v = doc[key];
        if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() != want) {
            throw ParseError(0, std::string("\"") + key + "\" does not match the points array (expected " +
                                    std::to_string(want) + ")");
        }
    };
    check_count("p", dim);
    check_count("n", pts.size());

    nlohmann::ordered_json meta = nullptr;
    if (doc.contains("meta")) {
        meta = doc["meta"];
        if (!meta.is_object() && !meta.is_null()) {
            throw ParseError(0, "\"meta\" must be an object");
        }
    }
    return {PointSet(dim, pts.size(), std::move(coords)), Format::json, std::move(meta)};
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string write_csv(const PointSet& u) {
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto x = u.point(i);
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (d > 0) {
                out += ',';
            }
            out += format_double(x[d]);
        }
        out += '\n';
    }
    return out;
}

std::string write_json(const PointSet& u, const nlohmann::ordered_json& meta) {
    std::string out = fmt::format("{{\n  \"p\": {},\n  \"n\": {},\n  \"points\": [\n", u.dim(), u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += "    [";
        const auto x = u.point(i);
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (d > 0) {
                out += ", ";
            }
            out += format_double(x[d]);
        }
        out += i + 1 < u.size() ? "],\n" : "]\n";
    }
    out += "  ]";
    if (!meta.is_null()) {
        out += ",\n  \"meta\": " + meta.dump();
    }
    out += "\n}\n";
    return out;
}

std::string write_point_set(const PointSet& u, Format f, const nlohmann::ordered_json& meta) {
    return f == Format::json ? write_json(u, meta) : write_csv(u);
}

}  // namespace regsimplex::cli
