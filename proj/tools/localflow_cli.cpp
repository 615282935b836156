// localflow: generate, solve, perturb, verify and sweep min-cost flow problems.
//
// Exit codes: 0 success, 1 tolerance failure, 2 invalid input, 3 numerical failure.

#include "localflow/analysis.hpp"
#include "localflow/errors.hpp"
#include "localflow/experiments.hpp"
#include "localflow/generators.hpp"
#include "localflow/io.hpp"
#include "localflow/solver.hpp"
#include "localflow/spectral.hpp"
#include "localflow/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace localflow;

namespace {

enum ExitCode { kOk = 0, kToleranceFailure = 1, kInvalidInput = 2, kNumericalFailure = 3 };

constexpr std::uint64_t kDefaultSeed = 20240917;

std::uint64_t seed_fallback() {
    if (const char* env = std::getenv("LOCALFLOW_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw InvalidInput(std::string("LOCALFLOW_SEED is not an unsigned integer: ") + env);
        }
    }
    return kDefaultSeed;
}

struct GenerateArgs {
    std::string family = "cycle";
    int size = 3;
    int rows = 0;
    int cols = 0;
    int k = 3;
    std::string cost = "quadratic";
    double a = 1.0;
    double alpha = 1.0;
    double beta = 2.0;
    std::string flow = "random";
};

struct Common {
    std::optional<std::uint64_t> seed;
    double tol = 1e-8;
    std::string output = "-";
    std::string input;
};

int cmd_generate(const GenerateArgs& args, const Common& common) {
    const std::uint64_t seed = common.seed.value_or(seed_fallback());
    std::shared_ptr<const DirectedGraph> g;
    if (args.family == "cycle") {
        g = cycle_graph(args.size);
    } else if (args.family == "path") {
        g = path_graph(args.size);
    } else if (args.family == "grid") {
        g = grid_graph(args.rows > 0 ? args.rows : args.size, args.cols > 0 ? args.cols : args.size);
    } else if (args.family == "random-regular") {
        g = random_regular_graph(args.size, args.k, seed);
    } else {
        throw InvalidInput("unknown family '" + args.family + "'");
    }

    const CostModel cost = args.cost == "logcosh" ? CostModel::logcosh(args.alpha, args.beta)
                           : args.cost == "quadratic"
                               ? CostModel::quadratic(args.a)
                               : throw InvalidInput("unknown cost '" + args.cost + "'");
    Vector b;
    if (args.flow == "random") {
        b = random_balanced_flow(g->num_vertices(), seed);
    } else if (args.flow == "dipole") {
        b = Vector::Zero(g->num_vertices());
        b(0) = 1.0;
        b(1) = -1.0;
    } else {
        throw InvalidInput("unknown flow '" + args.flow + "'");
    }
    write_json(problem_to_json(uniform_problem(g, cost, b)), common.output);
    return kOk;
}

int cmd_solve(const Common& common, int pgd_iters) {
    const FlowProblem problem = load_problem(common.input);
    const DirectedGraph& g = problem.graph();
    const Solution sol = solve_exact(problem);
    const SensitivityOperator s = sensitivity_operator(problem, sol);

    const ProjectedGradientDescent pgd(problem, PGDConfig{std::nullopt, pgd_iters, 1e-14});
    const PGDRun run = pgd.solve(Vector::Zero(g.num_edges()));

    Json out;
    out["objective"] = problem.objective(sol.x);
    out["x"] = edge_values_to_json(g, sol.x);
    out["dual"] = vertex_values_to_json(g, sol.dual);
    Json kkt;
    kkt["primal_residual"] = sol.residual;
    kkt["stationarity"] = sol.stationarity;
    kkt["newton_iterations"] = sol.iterations;
    out["kkt"] = std::move(kkt);
    out["spectral"] = spectral_report(problem, s);
    Json pgd_json;
    pgd_json["eta"] = pgd.eta();
    pgd_json["iterations"] = run.iterations;
    pgd_json["distance_to_exact"] = (run.x - sol.x).norm();
    pgd_json["contraction_rate"] = std::exp(-1.0 / (2.0 * problem.condition_number()));
    out["pgd"] = std::move(pgd_json);
    write_json(out, common.output);

    const double scale = std::max(1.0, problem.external_flow().norm());
    return std::max(sol.residual, sol.stationarity) <= common.tol * scale ? kOk : kToleranceFailure;
}

int cmd_perturb(const Common& common, const std::string& text, std::optional<long long> anchor_label, int radius,
                int iters, std::optional<double> epsilon, double omega) {
    const FlowProblem problem = load_problem(common.input);
    const DirectedGraph& g = problem.graph();
    const Vector p = parse_perturbation(g, text);
    require_balanced(p, "perturbation");
    const std::vector<Vertex> z_set = support(p);
    if (z_set.empty()) throw InvalidInput("perturbation is zero");

    Vertex anchor = z_set.front();
    if (anchor_label) {
        const auto v = g.find_vertex(*anchor_label);
        if (!v) throw InvalidInput("unknown anchor vertex " + std::to_string(*anchor_label));
        anchor = *v;
    }
    if (radius < 0 || iters < 0) throw InvalidInput("radius and iterations must be non-negative");

    const Solution sol = solve_exact(problem);
    const Subgraph sub = ball(g, anchor, radius);
    const ErrorReport rep = measure_decomposition(problem, sol, p, sub, iters);

    Json out;
    out["anchor"] = g.vertex_label(anchor);
    out["radius"] = radius;
    Json report = to_json(rep);
    for (auto& [key, value] : report.items()) out[key] = value;
    if (epsilon) {
        int z = 0;
        for (Vertex v : z_set) z = std::max(z, g.distances_from(anchor)[static_cast<std::size_t>(v)]);
        if (rep.guarantee)
            out["tuning"] = to_json(tune(*epsilon, rep.p_norm, rep.constants, z, g, anchor, omega));
        else
            out["tuning"] = nullptr;
    }
    write_json(out, common.output);
    return kOk;
}

int cmd_verify(const Common& common) {
    const FlowProblem problem = load_problem(common.input);
    VerifyOptions opts;
    opts.tol = common.tol;
    opts.seed = common.seed.value_or(seed_fallback());
    const VerifyReport report = verify_problem(problem, opts);
    write_json(to_json(report), common.output);
    return report.passed() ? kOk : kToleranceFailure;
}

int cmd_sweep(const Common& common, SweepConfig cfg) {
    cfg.seed = common.seed.value_or(seed_fallback());
    write_text(sweep_csv(run_sweep(cfg)), common.output);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local sensitivity analysis and localized solvers for min-cost network flow"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&common](CLI::App* sub, bool with_input) {
        sub->add_option("--seed", common.seed, "RNG seed (falls back to LOCALFLOW_SEED)");
        sub->add_option("--output,-o", common.output, "Output path, - for stdout");
        if (with_input) sub->add_option("input", common.input, "Graph JSON file")->required()->check(CLI::ExistingFile);
    };

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a generated problem as graph JSON");
    generate->add_option("--family", gen.family, "cycle | path | grid | random-regular")
        ->check(CLI::IsMember({"cycle", "path", "grid", "random-regular"}));
    generate->add_option("--size,-n", gen.size, "Number of vertices (grid side length)");
    generate->add_option("--rows", gen.rows, "Grid rows");
    generate->add_option("--cols", gen.cols, "Grid columns");
    generate->add_option("--degree,-k", gen.k, "Degree for random-regular");
    generate->add_option("--cost", gen.cost, "quadratic | logcosh")->check(CLI::IsMember({"quadratic", "logcosh"}));
    generate->add_option("--a", gen.a, "Quadratic curvature");
    generate->add_option("--alpha", gen.alpha, "Log-cosh lower curvature");
    generate->add_option("--beta", gen.beta, "Log-cosh upper curvature");
    generate->add_option("--flow", gen.flow, "random | dipole")->check(CLI::IsMember({"random", "dipole"}));
    add_common(generate, false);

    int pgd_iters = 1000;
    auto* solve = app.add_subcommand("solve", "Exact solution, KKT residuals, spectral report");
    solve->add_option("--tol", common.tol, "Relative KKT tolerance");
    solve->add_option("--iters", pgd_iters, "Iteration cap for the projected gradient comparison");
    add_common(solve, true);

    std::string perturbation;
    std::optional<long long> anchor;
    int radius = 1;
    int iters = 10;
    std::optional<double> epsilon;
    double omega = 3.0;
    auto* perturb = app.add_subcommand("perturb", "Localized re-solve after perturbing b");
    perturb->add_option("--perturb,-p", perturbation, "vertex:value,... (balanced)")->required();
    perturb->add_option("--anchor", anchor, "Ball centre (default: first perturbed vertex)");
    perturb->add_option("--radius,-r", radius, "Ball radius");
    perturb->add_option("--iters,-t", iters, "Localized iterations");
    perturb->add_option("--epsilon", epsilon, "Also report the (r, t) tuned for this accuracy");
    perturb->add_option("--omega", omega, "Exponent of the complexity model")->check(CLI::Range(2.0, 3.0));
    add_common(perturb, true);

    auto* verify = app.add_subcommand("verify", "Check every identity and bound on one graph");
    verify->add_option("--tol", common.tol, "Tolerance for algebraic and series identities");
    add_common(verify, true);

    SweepConfig sweep_cfg;
    auto* sweep = app.add_subcommand("sweep", "Bias/variance sweep over random regular graphs, as CSV");
    sweep->add_option("--sizes,-n", sweep_cfg.sizes, "Graph sizes")->delimiter(',');
    sweep->add_option("--radius,-r", sweep_cfg.radii, "Ball radii")->delimiter(',');
    sweep->add_option("--iters,-t", sweep_cfg.iterations, "Iteration counts")->delimiter(',');
    sweep->add_option("--degree,-k", sweep_cfg.degree, "Vertex degree");
    sweep->add_option("--epsilon", sweep_cfg.epsilon, "Target accuracy recorded in each row");
    add_common(sweep, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen, common);
        if (solve->parsed()) return cmd_solve(common, pgd_iters);
        if (perturb->parsed()) return cmd_perturb(common, perturbation, anchor, radius, iters, epsilon, omega);
        if (verify->parsed()) return cmd_verify(common);
        if (sweep->parsed()) return cmd_sweep(common, sweep_cfg);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const NoGuarantee& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kToleranceFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kInvalidInput;
}
