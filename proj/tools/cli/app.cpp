#include "cli/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cli/point_set_file.hpp"
#include "cli/report.hpp"
#include "regsimplex/characterize.hpp"
#include "regsimplex/random.hpp"
#include "regsimplex/simplex.hpp"

namespace regsimplex::cli {

namespace {

using nlohmann::ordered_json;

/// Carries an exit code up to run().
struct CommandError : std::runtime_error {
    CommandError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

struct Io {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct LoadedInput {
    std::string name;
    std::string bytes;
    PointSetFile file;
};

std::string read_all(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(stdin_stream), std::istreambuf_iterator<char>()};
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw CommandError(kExitIo, "cannot open input '" + path + "'");
    }
    std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    if (f.bad()) {
        throw CommandError(kExitIo, "error reading input '" + path + "'");
    }
    return bytes;
}

LoadedInput load(const std::string& path, std::istream& stdin_stream) {
    std::string bytes = read_all(path, stdin_stream);
    const std::string name = path == "-" ? "<stdin>" : path;
    try {
        PointSetFile file = parse_point_set(bytes);
        return {name, std::move(bytes), std::move(file)};
    } catch (const ParseError& e) {
        throw CommandError(kExitUsage, name + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw CommandError(kExitUsage, name + ": " + e.what());
    }
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        out.flush();
        if (!out) {
            throw CommandError(kExitIo, "cannot write to standard output");
        }
        return;
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw CommandError(kExitIo, "cannot open output '" + out_path + "'");
    }
    f << text;
    f.close();
    if (!f) {
        throw CommandError(kExitIo, "error writing output '" + out_path + "'");
    }
}

Format parse_format(const std::string& s) { return s == "json" ? Format::json : Format::csv; }

ToleranceConfig tolerances_from(std::optional<double> tol) {
    ToleranceConfig cfg;
    if (tol) {
        cfg.equidist_rel = *tol;
        cfg.sphericity_rel = *tol;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw CommandError(kExitUsage, std::string("--tol: ") + e.what());
    }
    return cfg;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        std::string field = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto b = field.find_first_not_of(" \t");
        const auto e = field.find_last_not_of(" \t");
        field = b == std::string::npos ? std::string() : field.substr(b, e - b + 1);
        if (!field.empty() && field.front() == '+') {
            field.erase(0, 1);
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
            throw CommandError(kExitUsage, "--translate: not a finite number: '" + field + "'");
        }
        values.push_back(v);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    int dim = 0;
    std::optional<double> sigma2;
    std::optional<double> edge;
    std::string method = "incremental";
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out;
    bool no_center = false;
};

int cmd_generate(const GenerateArgs& a, Io io) {
    if (a.dim < 1) {
        throw CommandError(kExitUsage, "--dim must be at least 1 (a simplex needs n = p + 1 >= 2 points)");
    }
    if (a.sigma2.has_value() == a.edge.has_value()) {
        throw CommandError(kExitUsage, "give exactly one of --sigma2 or --edge");
    }
    SimplexSpec spec;
    spec.dim = static_cast<std::size_t>(a.dim);
    spec.method = a.method == "projection" ? Method::projection : Method::incremental;
    spec.centered = !a.no_center;
    try {
        spec.scale = a.sigma2 ? Scale::from_sigma2(*a.sigma2) : Scale::from_edge(*a.edge);
    } catch (const std::domain_error& e) {
        throw CommandError(kExitUsage, e.what());
    }

    PointSet u = construct(spec);
    if (a.seed) {
        u = apply_motion(u, random_rotation(spec.dim, *a.seed));
    }

    ordered_json meta = {{"generator", std::string(kToolName)},
                         {"version", std::string(tool_version())},
                         {"method", a.method},
                         {"sigma2", spec.scale.sigma2()},
                         {"edge", spec.scale.edge()},
                         {"centered", spec.centered}};
    meta["rotate_seed"] = a.seed ? ordered_json(*a.seed) : ordered_json(nullptr);
    emit(write_point_set(u, parse_format(a.format), meta), a.out, io.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> inputs;
    std::optional<double> tol;
    std::string mode = "theorem";
    std::string report = "text";
};

struct VerifyOutcome {
    ordered_json report;
    bool passed;
};

VerifyOutcome verify_one(const LoadedInput& in, const std::string& mode, const ToleranceConfig& tol) {
    const PointSet& u = in.file.points;
    ordered_json rep = report_header("verify", input_digest(in.bytes), tol);
    rep["mode"] = mode;
    if (u.size() < 2) {
        DiagnosticsReport empty;
        empty.n = u.size();
        empty.p = u.dim();
        rep.update(diagnostics_json(empty));
        rep["passed"] = false;
        return {std::move(rep), false};
    }
    const DiagnosticsReport d = classify(u, tol);
    rep.update(diagnostics_json(d));
    bool passed = false;
    if (mode == "distances") {
        passed = d.equidistant;
    } else if (mode == "sphericity") {
        passed = d.spherical;
    } else {
        passed = d.verdict == Verdict::regular_simplex;
    }
    rep["passed"] = passed;
    return {std::move(rep), passed};
}

int cmd_verify(const VerifyArgs& a, Io io) {
    const ToleranceConfig tol = tolerances_from(a.tol);
    std::vector<LoadedInput> inputs;
    for (const std::string& path : a.inputs) {
        inputs.push_back(load(path, io.in));
    }

    // Library calls are pure; classify in parallel, report in input order.
    std::vector<std::future<VerifyOutcome>> jobs;
    for (const LoadedInput& in : inputs) {
        jobs.push_back(std::async(std::launch::async, verify_one, std::cref(in), std::cref(a.mode), std::cref(tol)));
    }
    std::vector<VerifyOutcome> outcomes;
    for (auto& j : jobs) {
        outcomes.push_back(j.get());
    }

    bool all_passed = true;
    std::string text;
    ordered_json many = ordered_json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const VerifyOutcome& o = outcomes[i];
        all_passed = all_passed && o.passed;
        if (o.report.value("inconsistent", false)) {
            io.err << inputs[i].name << ": warning: distance and covariance routes disagree\n";
        }
        if (inputs[i].file.points.size() < 2) {
            io.err << inputs[i].name << ": need at least two points\n";
        }
        if (a.report == "json") {
            many.push_back(o.report);
        } else {
            if (outcomes.size() > 1) {
                text += "input: " + inputs[i].name + "\n";
            }
            text += to_text(o.report);
        }
    }
    if (a.report == "json") {
        text = (outcomes.size() == 1 ? many[0] : many).dump(2) + "\n";
    }
    emit(text, "", io.out);
    return all_passed ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::optional<double> tol;
    std::string report = "json";
};

int cmd_analyze(const AnalyzeArgs& a, Io io) {
    const ToleranceConfig tol = tolerances_from(a.tol);
    const LoadedInput in = load(a.input, io.in);
    ordered_json rep = report_header("analyze", input_digest(in.bytes), tol);
    rep.update(analysis_json(in.file.points, tol));
    emit(a.report == "text" ? to_text(rep) : rep.dump(2) + "\n", "", io.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TransformArgs {
    std::string input;
    std::optional<std::uint64_t> rotate_seed;
    std::optional<std::string> translate;
    std::optional<std::string> format;
    std::string out;
};

int cmd_transform(const TransformArgs& a, Io io) {
    const LoadedInput in = load(a.input, io.in);
    const std::size_t p = in.file.points.dim();

    RigidMotion motion = a.rotate_seed ? random_rotation(p, *a.rotate_seed) : RigidMotion::identity(p);
    if (a.translate) {
        std::vector<double> t = parse_vector(*a.translate);
        if (t.size() != p) {
            throw CommandError(kExitUsage, "--translate has " + std::to_string(t.size()) +
                                               " components but the points have dimension " + std::to_string(p));
        }
        motion.translation = std::move(t);
    }
    const PointSet moved = apply_motion(in.file.points, motion);
    const Format f = a.format ? parse_format(*a.format) : in.file.format;
    emit(write_point_set(moved, f, in.file.meta), a.out, io.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PerturbArgs {
    std::string input;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::string> format;
    std::string out;
};

int cmd_perturb(const PerturbArgs& a, Io io) {
    if (!(a.noise_sigma >= 0.0) || !std::isfinite(a.noise_sigma)) {
        throw CommandError(kExitUsage, "--noise-sigma must be a finite number >= 0");
    }
    const LoadedInput in = load(a.input, io.in);
    const PointSet& u = in.file.points;
    std::vector<double> coords(u.coords().begin(), u.coords().end());
    if (a.noise_sigma > 0.0) {
        GaussianStream g(a.seed);
        for (double& x : coords) {
            x += a.noise_sigma * g.next();
        }
    }
    const PointSet noisy(u.dim(), u.size(), std::move(coords));
    const Format f = a.format ? parse_format(*a.format) : in.file.format;
    emit(write_point_set(noisy, f, in.file.meta), a.out, io.out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construct regular simplices and test point sets for the regular-simplex property."};
    app.name(args.empty() ? std::string(kToolName) : args.front());
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    const std::vector<std::string> formats{"csv", "json"};

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a regular simplex with p + 1 vertices in R^p");
    g->add_option("--dim", gen.dim, "Dimension p (>= 1)")->required();
    auto* sigma2_opt = g->add_option("--sigma2", gen.sigma2, "Scale: squared edge is 2 * sigma2");
    auto* edge_opt = g->add_option("--edge", gen.edge, "Scale: edge length");
    sigma2_opt->excludes(edge_opt);
    g->add_option("--method", gen.method, "incremental | projection")
        ->check(CLI::IsMember({"incremental", "projection"}));
    g->add_option("--seed", gen.seed, "Apply a seeded random rotation to the output");
    g->add_option("--format", gen.format, "csv | json")->check(CLI::IsMember(formats));
    g->add_option("--out", gen.out, "Output file (default: stdout)");
    g->add_flag("--no-center", gen.no_center, "Keep the first vertex at the origin (incremental only)");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Decide whether point sets form a regular simplex");
    v->add_option("input", ver.inputs, "Point-set files ('-' for stdin)")->required();
    v->add_option("--tol", ver.tol, "Relative tolerance for the distance and sphericity checks");
    v->add_option("--mode", ver.mode, "theorem | distances | sphericity")
        ->check(CLI::IsMember({"theorem", "distances", "sphericity"}));
    v->add_option("--report", ver.report, "text | json")->check(CLI::IsMember({"text", "json"}));

    AnalyzeArgs ana;
    auto* an = app.add_subcommand("analyze", "Dump scatter, covariance, distances and projection diagnostics");
    an->add_option("input", ana.input, "Point-set file ('-' for stdin)")->required();
    an->add_option("--tol", ana.tol, "Relative tolerance for the distance and sphericity checks");
    an->add_option("--report", ana.report, "json | text")->check(CLI::IsMember({"json", "text"}));

    TransformArgs tr;
    auto* t = app.add_subcommand("transform", "Apply a seeded random rotation and/or a translation");
    t->add_option("input", tr.input, "Point-set file ('-' for stdin)")->required();
    t->add_option("--rotate-seed", tr.rotate_seed, "Seed of the random rotation");
    t->add_option("--translate", tr.translate, "Translation vector \"c1,c2,...\"");
    t->add_option("--format", tr.format, "csv | json (default: input format)")->check(CLI::IsMember(formats));
    t->add_option("--out", tr.out, "Output file (default: stdout)");

    PerturbArgs per;
    auto* pe = app.add_subcommand("perturb", "Add seeded iid Gaussian noise to every coordinate");
    pe->add_option("input", per.input, "Point-set file ('-' for stdin)")->required();
    pe->add_option("--noise-sigma", per.noise_sigma, "Noise standard deviation (>= 0)")->required();
    pe->add_option("--seed", per.seed, "Noise seed");
    pe->add_option("--format", per.format, "csv | json (default: input format)")->check(CLI::IsMember(formats));
    pe->add_option("--out", per.out, "Output file (default: stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) {
        argv.push_back(kToolName.data());
    }
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const Io io{in, out, err};
    try {
        if (g->parsed()) {
            return cmd_generate(gen, io);
        }
        if (v->parsed()) {
            return cmd_verify(ver, io);
        }
        if (an->parsed()) {
            return cmd_analyze(ana, io);
        }
        if (t->parsed()) {
            return cmd_transform(tr, io);
        }
        if (pe->parsed()) {
            return cmd_perturb(per, io);
        }
    } catch (const CommandError& e) {
        err << "error: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace regsimplex::cli
