#include "infharm/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "infharm/errors.hpp"
#include "infharm/export.hpp"
#include "infharm/game.hpp"
#include "infharm/iterate.hpp"
#include "infharm/problem.hpp"
#include "infharm/solver.hpp"

namespace infharm {

namespace {

constexpr const char* kVersion = "infharm 0.1.0";

using ordered_json = nlohmann::ordered_json;

// Options shared by every subcommand: where the problem comes from, where
// the result goes, an optional uniform-bias override, and an optional
// decimal rendering of the rational outputs.
struct Common {
    std::string input;
    std::string output;
    std::string r_override;
    unsigned decimals = 0;
    CLI::Option* decimals_opt = nullptr;

    bool want_decimals() const {
        return decimals_opt != nullptr && decimals_opt->count() > 0;
    }
};

void add_common(CLI::App* cmd, Common& c, bool with_decimals = true) {
    cmd->add_option("-i,--input", c.input, "problem file, or - for stdin")
        ->required();
    cmd->add_option("-o,--output", c.output,
                    "write the result here instead of stdout");
    cmd->add_option("--r", c.r_override,
                    "replace the problem's bias with this uniform ratio");
    if (with_decimals)
        c.decimals_opt = cmd->add_option(
            "--decimals", c.decimals,
            "also render rational results with this many decimal digits");
}

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BoundaryProblem load(const Common& c) {
    BoundaryProblem p = parse_problem(read_all(c.input));
    if (!c.r_override.empty()) {
        p.bias = Bias::uniform(Rational::parse(c.r_override));
        if (auto violations = validate(p); !violations.empty())
            throw ValidationError(std::move(violations));
    }
    return p;
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw Error("cannot open \"" + c.output + "\" for writing");
    out << text;
    if (!out) throw Error("cannot write \"" + c.output + "\"");
}

void emit(const Common& c, const ordered_json& doc) {
    emit(c, doc.dump(2) + "\n");
}

ordered_json value_table(const BoundaryProblem& p,
                         const std::vector<Rational>& values) {
    ordered_json j = ordered_json::object();
    for (int v = 0; v < p.graph.vertex_count(); ++v)
        j[p.graph.label(v)] = values[v].str();
    return j;
}

ordered_json decimal_table(const BoundaryProblem& p,
                           const std::vector<Rational>& values,
                           unsigned digits) {
    ordered_json j = ordered_json::object();
    for (int v = 0; v < p.graph.vertex_count(); ++v)
        j[p.graph.label(v)] = values[v].decimal(digits);
    return j;
}

ordered_json strategy_table(const BoundaryProblem& p, const Strategy& s) {
    ordered_json j = ordered_json::object();
    for (const auto& [v, c] : s) {
        ordered_json d = ordered_json::object();
        d["max"] = p.graph.label(c.max_to);
        d["min"] = p.graph.label(c.min_to);
        j[p.graph.label(v)] = std::move(d);
    }
    return j;
}

bool residuals_zero(const BoundaryProblem& p,
                    const std::vector<Rational>& values) {
    for (const auto& [v, res] : harmonic_residual(p, values))
        if (!res.is_zero()) return false;
    return true;
}

int vertex_named(const BoundaryProblem& p, const std::string& label) {
    auto v = p.graph.vertex_by_label(label);
    if (!v) throw Error("no vertex labeled \"" + label + "\"");
    return *v;
}

struct SolveOutcome {
    std::string method;
    std::vector<Rational> values;
    Strategy strategy;
    std::vector<ConnectingPath> trace;
    std::map<int, int> basin_anchor;
};

// The steepest-path solver handles the uniform bias; a per-vertex bias goes
// through the bracketed enumeration, falling back to full enumeration when
// the bracket leaves too many directions open.
SolveOutcome full_solve(const BoundaryProblem& p) {
    SolveOutcome out;
    if (p.bias.is_uniform()) {
        Solution s = solve_exact(p);
        out.method = "steepest-path";
        out.values = std::move(s.values);
        out.strategy = std::move(s.strategy);
        out.trace = std::move(s.trace);
        out.basin_anchor = std::move(s.basin_anchor);
        return out;
    }
    std::cerr << "per-vertex bias: solving by bracketed direction"
                 " enumeration\n";
    try {
        HybridSolve h = solve_hybrid(p);
        out.method = "bracketed-enumeration";
        out.values = std::move(h.values);
    } catch (const Error&) {
        std::cerr << "bracket left too many directions open; enumerating"
                     " them all\n";
        BruteForce b = brute_force_solve(p);
        out.method = "direction-enumeration";
        out.values = std::move(b.values);
    }
    out.strategy = extract_directions(p, out.values);
    return out;
}

void run_solve(const Common& c) {
    BoundaryProblem p = load(c);
    SolveOutcome s = full_solve(p);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["method"] = s.method;
    doc["values"] = value_table(p, s.values);
    if (c.want_decimals())
        doc["valuesDecimal"] = decimal_table(p, s.values, c.decimals);
    doc["residualsZero"] = residuals_zero(p, s.values);
    doc["strategy"] = strategy_table(p, s.strategy);
    ordered_json trace = ordered_json::array();
    for (const ConnectingPath& cp : s.trace) {
        ordered_json t;
        ordered_json labels = ordered_json::array();
        for (int v : cp.vertices) labels.push_back(p.graph.label(v));
        t["path"] = std::move(labels);
        t["length"] = cp.slope.length;
        t["slope"] = cp.slope.value.str();
        t["slopeApprox"] = cp.slope.value.approx();
        trace.push_back(std::move(t));
    }
    doc["trace"] = std::move(trace);
    ordered_json basins = ordered_json::object();
    for (const auto& [v, anchor] : s.basin_anchor)
        basins[p.graph.label(v)] = p.graph.label(anchor);
    doc["basinAnchors"] = std::move(basins);
    emit(c, doc);
}

void run_iterate(const Common& c, const std::string& tolerance,
                 unsigned long max_sweeps, bool max_sweeps_set) {
    BoundaryProblem p = load(c);
    Rational tol = tolerance.empty() ? default_tolerance()
                                     : Rational::parse(tolerance);
    if (tol.sign() < 0) throw Error("tolerance must be nonnegative");
    if (!max_sweeps_set) max_sweeps = default_max_sweeps(p);
    IterationResult res = value_iteration(p, tol, max_sweeps);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["sweeps"] = res.sweeps;
    doc["converged"] = res.converged;
    doc["maxGap"] = res.max_gap.str();
    doc["maxGapApprox"] = res.max_gap.approx();
    doc["lower"] = value_table(p, res.lower);
    doc["upper"] = value_table(p, res.upper);
    if (c.want_decimals()) {
        doc["lowerDecimal"] = decimal_table(p, res.lower, c.decimals);
        doc["upperDecimal"] = decimal_table(p, res.upper, c.decimals);
    }
    emit(c, doc);
}

void run_oracle(const Common& c, unsigned long cap) {
    BoundaryProblem p = load(c);
    BruteForce b = brute_force_solve(p, cap);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["values"] = value_table(p, b.values);
    if (c.want_decimals())
        doc["valuesDecimal"] = decimal_table(p, b.values, c.decimals);
    doc["residualsZero"] = residuals_zero(p, b.values);
    doc["enumerated"] = b.enumerated;
    doc["consistent"] = b.consistent;
    emit(c, doc);
}

void run_simulate(const Common& c, const std::string& start,
                  unsigned long trials, std::uint64_t seed,
                  unsigned long step_cap) {
    BoundaryProblem p = load(c);
    int at = vertex_named(p, start);
    SolveOutcome s = full_solve(p);
    GameEstimate est = simulate(p, s.strategy, at, trials, seed, step_cap);
    ordered_json doc;
    doc["version"] = kVersion;
    doc["start"] = start;
    doc["trials"] = est.trials;
    doc["seed"] = est.seed;
    doc["stepCap"] = step_cap;
    doc["censored"] = est.censored;
    doc["mean"] = est.mean.str();
    doc["meanApprox"] = est.mean.approx();
    doc["stdError"] = est.std_error;
    doc["exactValue"] = s.values[at].str();
    doc["exactApprox"] = s.values[at].approx();
    if (c.want_decimals()) {
        doc["meanDecimal"] = est.mean.decimal(c.decimals);
        doc["exactDecimal"] = s.values[at].decimal(c.decimals);
    }
    emit(c, doc);
}

void run_export(const Common& c, bool with_solution) {
    BoundaryProblem p = load(c);
    if (!with_solution) {
        emit(c, export_dot(p));
        return;
    }
    SolveOutcome s = full_solve(p);
    emit(c, export_dot(p, s.values, s.strategy));
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"exact solver, iterative bracketing, and game simulation "
                 "for biased infinity-harmonic boundary problems"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* solve_cmd =
        app.add_subcommand("solve", "compute the extension, the designated "
                                    "directions, and the selection trace");
    Common solve_c;
    add_common(solve_cmd, solve_c);
    solve_cmd->callback([&] { run_solve(solve_c); });

    auto* iter_cmd = app.add_subcommand(
        "iterate", "bracket the extension by monotone sweeps");
    Common iter_c;
    std::string iter_tol;
    unsigned long iter_sweeps = 0;
    add_common(iter_cmd, iter_c);
    iter_cmd->add_option("--tolerance", iter_tol,
                         "stop once the largest gap is at most this rational "
                         "(default 1/2^40)");
    auto* sweeps_opt = iter_cmd->add_option(
        "--max-sweeps", iter_sweeps,
        "sweep budget (default scales with size and value bit length)");
    iter_cmd->callback([&] {
        run_iterate(iter_c, iter_tol, iter_sweeps, sweeps_opt->count() > 0);
    });

    auto* oracle_cmd = app.add_subcommand(
        "oracle", "solve by enumerating every direction choice");
    Common oracle_c;
    unsigned long oracle_cap = 1000000;
    add_common(oracle_cmd, oracle_c);
    oracle_cmd->add_option("--cap", oracle_cap,
                           "largest number of choices to enumerate");
    oracle_cmd->callback([&] { run_oracle(oracle_c, oracle_cap); });

    auto* sim_cmd = app.add_subcommand(
        "simulate", "play the tug-of-war under the solved directions");
    Common sim_c;
    std::string sim_start;
    unsigned long sim_trials = 100000, sim_cap = 1000000;
    std::uint64_t sim_seed = 1;
    add_common(sim_cmd, sim_c);
    sim_cmd->add_option("--start", sim_start, "label of the starting vertex")
        ->required();
    sim_cmd->add_option("--trials", sim_trials, "number of plays");
    sim_cmd->add_option("--seed", sim_seed, "stream seed");
    sim_cmd->add_option("--step-cap", sim_cap,
                        "cut a play off after this many moves");
    sim_cmd->callback([&] {
        run_simulate(sim_c, sim_start, sim_trials, sim_seed, sim_cap);
    });

    auto* export_cmd =
        app.add_subcommand("export", "render the problem as Graphviz dot");
    Common export_c;
    bool export_solve = false;
    add_common(export_cmd, export_c, /*with_decimals=*/false);
    export_cmd->add_flag("--solve", export_solve,
                         "solve first and draw values and directions");
    export_cmd->callback([&] { run_export(export_c, export_solve); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace infharm
