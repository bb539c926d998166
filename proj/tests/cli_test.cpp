#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/point_set_file.hpp"
#include "regsimplex/characterize.hpp"
#include "regsimplex/random.hpp"
#include "test_util.hpp"

using namespace regsimplex;
using namespace regsimplex::cli;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args, const std::string& stdin_text = "") {
    args.insert(args.begin(), "regsimplex");
    std::istringstream in(stdin_text);
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, in, out, err);
    return {code, out.str(), err.str()};
}

/// Temporary directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("regsimplex_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(file(name), std::ios::binary) << text;
        return file(name);
    }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json verify_json(const std::string& text, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"verify", "-", "--report", "json"};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result r = call(args, text);
    INFO(r.err);
    REQUIRE((r.code == kExitOk || r.code == kExitVerifyFailed));
    return json::parse(r.out);
}

const std::string kSquare = "0,0\n1,0\n1,1\n0,1\n";

}  // namespace

TEST_CASE("point-set files: CSV parsing") {
    const PointSetFile f = parse_csv(" 1, 2.5 \r\n-3,+4e-1\n\n");
    CHECK(f.format == Format::csv);
    CHECK(f.points == PointSet(2, {{1.0, 2.5}, {-3.0, 0.4}}));

    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_csv(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 999;
    };
    CHECK(line_of("1,2\n3,4\n5,x\n") == 3);
    CHECK(line_of("1,2\n3\n") == 2);
    CHECK(line_of("1,2\n\n3,4\n") == 2);
    CHECK(line_of("1,nan\n") == 1);
    CHECK(line_of("1,inf\n") == 1);
    CHECK(line_of("1,,2\n") == 1);
    CHECK(line_of("1e999\n") == 1);
    CHECK(line_of("") == 0);
    CHECK_THROWS_WITH_AS(parse_csv("1,2\n3,4,5\n"), "line 2: expected 2 coordinates, found 3", ParseError);
}

TEST_CASE("point-set files: JSON parsing") {
    const PointSetFile f = parse_json(R"({"points": [[1, 2], [3, 4.5]], "meta": {"k": 1}})");
    CHECK(f.format == Format::json);
    CHECK(f.points == PointSet(2, {{1, 2}, {3, 4.5}}));
    CHECK(f.meta["k"] == 1);

    CHECK_NOTHROW(parse_json(R"({"p": 1, "n": 2, "points": [[1], [2]]})"));
    CHECK_THROWS_AS(parse_json(R"({"p": 2, "points": [[1], [2]]})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"n": 3, "points": [[1], [2]]})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"points": [[1], [2, 3]]})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"points": [[1], ["a"]]})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"points": []})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"pts": [[1]]})"), ParseError);
    CHECK_THROWS_AS(parse_json(R"({"points": [[1]], "meta": 3})"), ParseError);

    try {
        parse_json("{\n  \"points\": [\n    [1, 2],\n    [3 4]\n  ]\n}\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK(sniff_format("  \n {\"points\": []}") == Format::json);
    CHECK(sniff_format("1,2") == Format::csv);
}

TEST_CASE("point-set files: 17-digit output reads back bit-exactly") {
    GaussianStream g(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + static_cast<std::size_t>(trial % 6);
        std::vector<double> c(3 * p);
        for (double& x : c) {
            x = g.next() * std::pow(10.0, static_cast<double>(trial % 13 - 6));
        }
        const PointSet u(p, 3, c);
        CHECK(parse_csv(write_csv(u)).points == u);
        CHECK(parse_json(write_json(u)).points == u);
    }
}

TEST_CASE("generate") {
    const Result r = call({"generate", "--dim", "2", "--edge", "1", "--method", "projection", "--format", "csv"});
    CHECK(r.code == kExitOk);
    const PointSet u = parse_csv(r.out).points;
    CHECK(u.size() == 3);
    CHECK(u.dim() == 2);
    CHECK(call({"verify", "-"}, r.out).code == kExitOk);

    const PointSet pair = parse_csv(call({"generate", "--dim", "1", "--sigma2", "0.5"}).out).points;
    CHECK(distance_matrix(pair)(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

    const Result j = call({"generate", "--dim", "3", "--sigma2", "2", "--format", "json", "--method", "projection"});
    const json doc = json::parse(j.out);
    CHECK(doc["p"] == 3);
    CHECK(doc["n"] == 4);
    CHECK(doc["meta"]["method"] == "projection");
    CHECK(doc["meta"]["sigma2"] == 2.0);

    // Seeded rotation is still a simplex and reproducible.
    const Result s1 = call({"generate", "--dim", "5", "--sigma2", "1", "--seed", "9"});
    const Result s2 = call({"generate", "--dim", "5", "--sigma2", "1", "--seed", "9"});
    CHECK(s1.out == s2.out);
    CHECK(s1.out != call({"generate", "--dim", "5", "--sigma2", "1"}).out);
    CHECK(call({"verify", "-"}, s1.out).code == kExitOk);

    const PointSet raw = parse_csv(call({"generate", "--dim", "2", "--edge", "2", "--no-center"}).out).points;
    CHECK(raw.point(0)[0] == 0.0);
    CHECK(raw.point(1)[0] == 2.0);
}

TEST_CASE("generate usage errors exit 2") {
    CHECK(call({"generate", "--dim", "0", "--sigma2", "1"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "-3", "--sigma2", "1"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "two", "--sigma2", "1"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2", "--sigma2", "1", "--edge", "1"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2", "--sigma2", "0"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2", "--edge", "-1"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2", "--sigma2", "1", "--method", "magic"}).code == kExitUsage);
    CHECK(call({"generate", "--dim", "2", "--sigma2", "1", "--format", "xml"}).code == kExitUsage);
    CHECK(call({}).code == kExitUsage);
    CHECK(call({"frobnicate"}).code == kExitUsage);
    const Result e = call({"generate", "--dim", "0", "--sigma2", "1"});
    CHECK(e.out.empty());
    CHECK(e.err.find("--dim") != std::string::npos);
}

TEST_CASE("help and version exit 0") {
    CHECK(call({"--help"}).code == kExitOk);
    const Result v = call({"--version"});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("verify") {
    const std::string tetra = call({"generate", "--dim", "3", "--sigma2", "1.75", "--format", "json"}).out;
    const json ok = verify_json(tetra);
    CHECK(ok["verdict"] == "regular_simplex");
    CHECK(ok["passed"] == true);
    CHECK(close_rel(ok["sigma2_from_trace"].get<double>(), 1.75, 1e-8));
    CHECK(call({"verify", "-"}, tetra).code == kExitOk);

    const Result sq = call({"verify", "-"}, kSquare);
    CHECK(sq.code == kExitVerifyFailed);
    CHECK(sq.out.find("verdict: not_applicable") != std::string::npos);

    const std::string noisy =
        call({"perturb", "-", "--noise-sigma", std::to_string(1e-2 * std::sqrt(1.75)), "--seed", "4"}, tetra).out;
    const Result nr = call({"verify", "-", "--report", "json"}, noisy);
    CHECK(nr.code == kExitVerifyFailed);
    CHECK(json::parse(nr.out)["verdict"] == "not_spherical");
}

TEST_CASE("verify modes and tolerance override") {
    // The square's scatter is the identity, but its distances are unequal.
    CHECK(call({"verify", "-", "--mode", "sphericity"}, kSquare).code == kExitOk);
    CHECK(call({"verify", "-", "--mode", "distances"}, kSquare).code == kExitVerifyFailed);
    CHECK(call({"verify", "-", "--mode", "theorem"}, kSquare).code == kExitVerifyFailed);
    CHECK(call({"verify", "-", "--mode", "nope"}, kSquare).code == kExitUsage);

    const std::string tri = call({"generate", "--dim", "2", "--sigma2", "1"}).out;
    const std::string slightly = call({"perturb", "-", "--noise-sigma", "1e-6", "--seed", "1"}, tri).out;
    CHECK(call({"verify", "-"}, slightly).code == kExitVerifyFailed);
    CHECK(call({"verify", "-", "--tol", "1e-3"}, slightly).code == kExitOk);
    CHECK(verify_json(slightly, {"--tol", "1e-3"})["tolerances"]["sphericity_rel"] == 1e-3);
    CHECK(call({"verify", "-", "--tol", "0"}, tri).code == kExitUsage);
    CHECK(call({"verify", "-", "--tol", "2"}, tri).code == kExitUsage);

    // Duplicate points are rejected by both routes.
    CHECK(call({"verify", "-"}, "1,1\n1,1\n1,1\n").code == kExitVerifyFailed);
    CHECK(call({"verify", "-", "--mode", "distances"}, "4\n4\n").code == kExitVerifyFailed);
    const json dup = verify_json("4\n4\n");
    CHECK(dup["verdict"] == "not_equidistant");

    const Result single = call({"verify", "-", "--report", "json"}, "1,2\n");
    CHECK(single.code == kExitVerifyFailed);
    CHECK(json::parse(single.out)["verdict"] == "not_applicable");
}

TEST_CASE("verify parse errors exit 2 with a line number") {
    const Result r = call({"verify", "-"}, "1,2\n3,4\n5,oops\n");
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("line 3") != std::string::npos);

    const Result j = call({"verify", "-"}, "{\n \"points\": [[1,2],\n [3,]]\n}\n");
    CHECK(j.code == kExitUsage);
    CHECK(j.err.find("line 3") != std::string::npos);

    CHECK(call({"verify", "-"}, "").code == kExitUsage);
    CHECK(call({"verify", "-"}, "1,2\n3\n").code == kExitUsage);
    CHECK(call({"analyze", "-"}, "nan\n").code == kExitUsage);
    CHECK(call({"transform", "-"}, "a,b\n").code == kExitUsage);
    CHECK(call({"perturb", "-", "--noise-sigma", "1"}, "{").code == kExitUsage);
}

TEST_CASE("I/O failures exit 1") {
    TempDir dir;
    CHECK(call({"verify", dir.file("missing.csv")}).code == kExitIo);
    CHECK(call({"analyze", dir.file("missing.csv")}).code == kExitIo);
    CHECK(call({"transform", dir.file("missing.csv")}).code == kExitIo);
    CHECK(call({"perturb", dir.file("missing.csv"), "--noise-sigma", "0"}).code == kExitIo);

    const std::string unwritable = dir.file("no/such/dir/out.csv");
    CHECK(call({"generate", "--dim", "2", "--sigma2", "1", "--out", unwritable}).code == kExitIo);
    const std::string in = dir.write("in.csv", kSquare);
    CHECK(call({"transform", in, "--out", unwritable}).code == kExitIo);
    CHECK(call({"perturb", in, "--noise-sigma", "0", "--out", unwritable}).code == kExitIo);
}

TEST_CASE("files on disk and multiple verify inputs") {
    TempDir dir;
    const std::string a = dir.file("a.json");
    REQUIRE(call({"generate", "--dim", "4", "--edge", "3", "--format", "json", "--out", a}).code == kExitOk);
    const std::string b = dir.write("square.csv", kSquare);
    const std::string c = dir.file("c.csv");
    REQUIRE(call({"generate", "--dim", "7", "--sigma2", "2", "--out", c}).code == kExitOk);

    CHECK(call({"verify", a, c}).code == kExitOk);
    const Result mixed = call({"verify", a, b, c, "--report", "json"});
    CHECK(mixed.code == kExitVerifyFailed);
    const json reports = json::parse(mixed.out);
    REQUIRE(reports.is_array());
    REQUIRE(reports.size() == 3);
    CHECK(reports[0]["p"] == 4);
    CHECK(reports[1]["verdict"] == "not_applicable");
    CHECK(reports[2]["p"] == 7);
}

TEST_CASE("transform") {
    const std::string tri = call({"generate", "--dim", "3", "--sigma2", "0.8", "--format", "json"}).out;
    const json before = verify_json(tri);

    const Result moved = call({"transform", "-", "--rotate-seed", "11", "--translate=-1,2.5,3"}, tri);
    REQUIRE(moved.code == kExitOk);
    CHECK(sniff_format(moved.out) == Format::json);
    const json after = verify_json(moved.out);
    CHECK(after["verdict"] == before["verdict"]);
    CHECK(close_rel(after["sigma2_from_trace"].get<double>(), before["sigma2_from_trace"].get<double>(), 1e-8));

    // Translation only leaves the covariance untouched.
    const PointSet u = parse_json(tri).points;
    const PointSet shifted =
        parse_point_set(call({"transform", "-", "--translate", "10,20,30"}, tri).out).points;
    test::check_matrix_near(covariance(shifted), covariance(u), 1e-12);

    // Same seed, same bytes.
    CHECK(call({"transform", "-", "--rotate-seed", "5"}, tri).out ==
          call({"transform", "-", "--rotate-seed", "5"}, tri).out);
    CHECK(call({"transform", "-", "--rotate-seed", "5"}, tri).out !=
          call({"transform", "-", "--rotate-seed", "6"}, tri).out);

    CHECK(call({"transform", "-", "--translate", "1,2"}, tri).code == kExitUsage);
    CHECK(call({"transform", "-", "--translate", "1,x,2"}, tri).code == kExitUsage);
    CHECK(sniff_format(call({"transform", "-", "--format", "csv"}, tri).out) == Format::csv);

    // No motion requested: identity.
    CHECK(call({"transform", "-"}, tri).out == tri);
}

TEST_CASE("perturb") {
    const std::string csv = call({"generate", "--dim", "4", "--sigma2", "1"}).out;
    const std::string js = call({"generate", "--dim", "4", "--sigma2", "1", "--format", "json"}).out;
    CHECK(call({"perturb", "-", "--noise-sigma", "0"}, csv).out == csv);
    CHECK(call({"perturb", "-", "--noise-sigma", "0", "--seed", "3"}, js).out == js);
    // -0.0 coordinates survive a zero-noise pass unchanged.
    CHECK(call({"perturb", "-", "--noise-sigma", "0"}, "-0,1\n").out == "-0,1\n");

    const std::string a = call({"perturb", "-", "--noise-sigma", "0.01", "--seed", "8"}, csv).out;
    CHECK(a == call({"perturb", "-", "--noise-sigma", "0.01", "--seed", "8"}, csv).out);
    CHECK(a != call({"perturb", "-", "--noise-sigma", "0.01", "--seed", "9"}, csv).out);
    CHECK(a != csv);
    CHECK(call({"verify", "-"}, a).code == kExitVerifyFailed);

    CHECK(call({"perturb", "-", "--noise-sigma", "-1"}, csv).code == kExitUsage);
    CHECK(call({"perturb", "-"}, csv).code == kExitUsage);
}

TEST_CASE("analyze") {
    const std::string tri = call({"generate", "--dim", "2", "--sigma2", "0.5"}).out;
    const Result r = call({"analyze", "-", "--report", "json"}, tri);
    REQUIRE(r.code == kExitOk);
    const json a = json::parse(r.out);
    CHECK(a["command"] == "analyze");
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(close_rel(a["covariance"][i][j].get<double>(), a["scatter"][i][j].get<double>() / 3.0, 1e-15));
            CHECK(std::abs(a["covariance"][i][j].get<double>() - (i == j ? 0.5 / 3.0 : 0.0)) <= 1e-15);
        }
    }
    const json& proj = a["projection_checks"];
    CHECK(proj["all_passed"] == true);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(proj["a"][i][j].get<double>() - (i == j ? 2.0 / 3.0 : -1.0 / 3.0)) <= 1e-12);
        }
    }
    CHECK(a["diagnostics"]["verdict"] == "regular_simplex");
    CHECK(a["lemma"]["max_rel_error_r"].get<double>() <= 1e-10);
    CHECK(a["lemma"]["orthogonality_ok"] == true);
    CHECK(close_rel(a["lemma"]["r"].get<double>(), 1.0 / std::sqrt(3.0), 1e-12));

    const Result one = call({"analyze", "-"}, "3,4\n");
    REQUIRE(one.code == kExitOk);
    const json s = json::parse(one.out);
    CHECK(s["covariance"] == json::parse("[[0.0, 0.0], [0.0, 0.0]]"));
    CHECK(s["distance_matrix"] == json::parse("[[0.0]]"));
    CHECK(s["diagnostics"].is_null());
    CHECK(s["projection_checks"].is_null());

    const Result sq = call({"analyze", "-"}, kSquare);
    REQUIRE(sq.code == kExitOk);
    const json q = json::parse(sq.out);
    CHECK(q["theorem_applicable"] == false);
    CHECK(q["diagnostics"]["equidist_residual"].is_number());
    CHECK(q["diagnostics"]["sphericity_residual"].is_number());
    CHECK(q["lemma"].is_null());

    // Mathematically failing inputs still exit 0.
    CHECK(call({"analyze", "-"}, "0,0\n1,0\n0,3\n").code == kExitOk);
    CHECK(call({"analyze", "-", "--report", "text"}, tri).out.find("diagnostics: ") != std::string::npos);
}

TEST_CASE("CSV and JSON inputs give identical reports apart from the digest") {
    for (const char* dim : {"1", "3", "9"}) {
        const std::string csv = call({"generate", "--dim", dim, "--sigma2", "1.5", "--seed", "2"}).out;
        const std::string js = call({"transform", "-", "--format", "json"}, csv).out;
        REQUIRE(sniff_format(js) == Format::json);
        for (const char* cmd : {"verify", "analyze"}) {
            json a = json::parse(call({cmd, "-", "--report", "json"}, csv).out);
            json b = json::parse(call({cmd, "-", "--report", "json"}, js).out);
            CHECK(a["input_digest"] != b["input_digest"]);
            a.erase("input_digest");
            b.erase("input_digest");
            CHECK(a.dump() == b.dump());
        }
    }
}

TEST_CASE("round trip: generate then verify for p in 1..50") {
    for (int p = 1; p <= 50; ++p) {
        for (const char* method : {"incremental", "projection"}) {
            const std::string d = std::to_string(p);
            CHECK(call({"verify", "-"}, call({"generate", "--dim", d, "--sigma2", "2.5", "--method", method}).out).code ==
                  kExitOk);
            CHECK(call({"verify", "-"}, call({"generate", "--dim", d, "--edge", "0.7", "--method", method}).out).code ==
                  kExitOk);
        }
    }
}

TEST_CASE("pipeline: generate, transform, verify") {
    for (int p = 1; p <= 20; ++p) {
        const double sigma2 = 0.5 + 0.25 * p;
        const std::string gen = call({"generate", "--dim", std::to_string(p), "--sigma2", format_double(sigma2)}).out;
        for (int seed = 0; seed < 3; ++seed) {
            std::string shift;
            for (int k = 0; k < p; ++k) {
                shift += (k ? "," : "") + std::to_string(k * 1.5 - 4.0);
            }
            const std::string moved =
                call({"transform", "-", "--rotate-seed", std::to_string(seed), "--translate=" + shift}, gen).out;
            const Result v = call({"verify", "-", "--report", "json"}, moved);
            CHECK(v.code == kExitOk);
            CHECK(close_rel(json::parse(v.out)["sigma2_from_trace"].get<double>(), sigma2, 1e-8));
        }
    }
}
