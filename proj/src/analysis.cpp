#include "localflow/analysis.hpp"

#include "localflow/errors.hpp"
#include "localflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace localflow {

BoundParams BoundParams::from_problem(const FlowProblem& problem) {
    const DirectedGraph& g = problem.graph();
    return BoundParams{problem.condition_number(), g.min_degree(), g.max_degree(), adjacency_spectrum(g).mu};
}

double BoundParams::rho() const { return interlacing_bound(k_minus, k_plus, 1.0, Q, mu); }

double BoundParams::c() const { return std::sqrt(2.0 * k_plus) / k_minus * Q; }

double BoundParams::gamma() const {
    const double cc = c();
    return cc * (1.0 + cc * std::sqrt(static_cast<double>(k_plus - 1)));
}

namespace {

ErrorBounds bounds_from(double rho, double c, double gamma, double q, double p_norm, int d_boundary, int t,
                           bool is_global) {
    if (!(rho < 1.0)) throw NoGuarantee(rho);
    if (p_norm < 0.0 || d_boundary < 0 || t < 0) throw InvalidInput("bounds need p_norm, d and t non-negative");
    ErrorBounds out;
    out.bias = is_global ? 0.0 : p_norm * gamma * std::pow(rho, d_boundary) / ((1.0 - rho) * (1.0 - rho));
    out.variance = p_norm * c * std::exp(-t / (2.0 * q)) / (1.0 - rho);
    return out;
}

}  // namespace

ErrorBounds error_bounds(const BoundParams& params, double p_norm, int d_boundary, int t, bool is_global) {
    return bounds_from(params.rho(), params.c(), params.gamma(), params.Q, p_norm, d_boundary, t, is_global);
}

Decomposition decomposition_points(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                                   const Subgraph& sub, int t, const PGDConfig& cfg, double solve_tol) {
    Decomposition d;
    const Vector b_new = problem.external_flow() + pert;
    d.x_target = solve_exact(problem.with_external_flow(b_new), solve_tol).x;

    d.x_limit = x_star_b.x;
    if (!sub.edges().empty()) {
        const Vector b_prime = reduced_external_flow(problem, sub, b_new, x_star_b.x);
        const Solution local = solve_exact(reduced_problem(problem, sub, b_prime), solve_tol);
        scatter(local.x, sub.edges(), d.x_limit);
    }

    d.x_hat = local_resolve(problem, x_star_b, pert, sub, t, cfg).x_hat;
    return d;
}

ErrorReport measure_decomposition(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                                  const Subgraph& sub, int t, const PGDConfig& cfg,
                                  std::optional<BoundParams> params) {
    const DirectedGraph& g = problem.graph();
    const Decomposition d = decomposition_points(problem, x_star_b, pert, sub, t, cfg);

    ErrorReport r;
    r.bias_measured = (d.x_target - d.x_limit).norm();
    r.variance_measured = (d.x_limit - d.x_hat).norm();
    r.error_measured = (d.x_target - d.x_hat).norm();
    r.constants = params ? *params : BoundParams::from_problem(problem);
    r.rho = r.constants.rho();
    r.c = r.constants.c();
    r.gamma = r.constants.gamma();
    r.p_norm = pert.norm();
    r.is_global = sub.is_whole();
    r.iterations = t;
    r.subgraph_vertices = static_cast<int>(sub.vertices().size());
    r.subgraph_edges = static_cast<int>(sub.edges().size());

    const std::vector<Vertex> z_set = support(pert);
    const std::vector<Vertex> boundary = inner_boundary(sub);
    r.d_boundary = (r.is_global || z_set.empty() || boundary.empty()) ? 0 : set_distance(g, boundary, z_set);

    r.guarantee = r.rho < 1.0;
    if (r.guarantee) {
        const ErrorBounds b = error_bounds(r.constants, r.p_norm, r.d_boundary, t, r.is_global);
        r.bias_bound = b.bias;
        r.variance_bound = b.variance;
    } else {
        r.bias_bound = r.variance_bound = std::numeric_limits<double>::infinity();
    }

    // Per-subgraph diagnostic constants.
    RefinedConstants& rc = r.refined;
    rc.k_minus = std::numeric_limits<int>::max();
    rc.k_plus = 0;
    for (Vertex v : sub.vertices()) {
        rc.k_minus = std::min(rc.k_minus, g.degree(v));
        rc.k_plus = std::max(rc.k_plus, g.degree(v));
    }
    const Matrix weights = edge_weight_matrix(g, problem.curvature(x_star_b.x).cwiseInverse());
    if (r.is_global) {
        rc.rho = walk_data(weights).lambda;
    } else {
        // same quantity the interlacing bound controls: lambda' = max(|lambda'_2|, |lambda'_m|)
        rc.rho = second_largest_magnitude(subgraph_walk_spectrum(weights, sub, SubgraphWalk::kKilled));
    }
    rc.c = std::sqrt(2.0 * rc.k_plus) / rc.k_minus * r.constants.Q;
    rc.gamma = rc.c * (1.0 + rc.c * std::sqrt(static_cast<double>(rc.k_plus - 1)));
    rc.valid = rc.rho < 1.0 - kContractiveSlack;
    if (rc.valid) {
        const ErrorBounds b =
            bounds_from(rc.rho, rc.c, rc.gamma, r.constants.Q, r.p_norm, r.d_boundary, t, r.is_global);
        rc.bias_bound = b.bias;
        rc.variance_bound = b.variance;
    } else {
        rc.bias_bound = rc.variance_bound = std::numeric_limits<double>::infinity();
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

TuningResult tune_radius_and_time(double epsilon, double p_norm, const BoundParams& params, int z,
                                  double omega) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive");
    if (!(p_norm >= 0.0) || !std::isfinite(p_norm)) throw InvalidInput("perturbation norm must be non-negative");
    if (z < 0) throw InvalidInput("z must be non-negative");
    complexity_estimate(1.0, 0, omega);  // validates omega

    const double rho = params.rho();
    if (!(rho < 1.0)) throw NoGuarantee(rho);
    const double c = params.c();
    const double gamma = params.gamma();
    const double half = epsilon / 2.0;

    TuningResult out;
    out.epsilon = epsilon;
    out.p_norm = p_norm;
    out.rho = rho;
    out.z = z;
    out.omega = omega;
    out.nu_bias = gamma / ((1.0 - rho) * (1.0 - rho) * std::pow(rho, z));
    out.xi_bias = rho > 0.0 ? -std::log(rho) : std::numeric_limits<double>::infinity();
    out.nu_var = c / (1.0 - rho);
    out.xi_var = 1.0 / (2.0 * params.Q);

    // nu_bias e^{-xi_bias r} = gamma rho^{r-z} / (1-rho)^2, evaluated without
    // forming rho^{-z}.
    auto bias_at = [&](int r) { return p_norm * gamma * std::pow(rho, r - z) / ((1.0 - rho) * (1.0 - rho)); };
    auto var_at = [&](int t) { return p_norm * out.nu_var * std::exp(-out.xi_var * t); };

    int r = z;
    if (rho > 0.0 && bias_at(z) > half)
        r = z + static_cast<int>(std::ceil(std::log(bias_at(z) / half) / out.xi_bias));
    while (r > z && bias_at(r - 1) <= half) --r;
    while (bias_at(r) > half) ++r;

    int t = 0;
    if (var_at(0) > half) t = static_cast<int>(std::ceil(std::log(var_at(0) / half) / out.xi_var));
    while (t > 0 && var_at(t - 1) <= half) --t;
    while (var_at(t) > half) ++t;

    out.radius = r;
    out.iterations = t;
    return out;
}

}  // namespace

TuningResult tune(double epsilon, double p_norm, const BoundParams& params, int z, double omega) {
    TuningResult out = tune_radius_and_time(epsilon, p_norm, params, z, omega);
    // |V_r| <= 1 + k+ sum_{i<r} (k+ - 1)^i
    double size = 1.0;
    double shell = params.k_plus;
    for (int i = 0; i < out.radius && std::isfinite(size); ++i) {
        size += shell;
        shell *= params.k_plus - 1;
    }
    out.ball_vertices = size;
    out.complexity_estimate = complexity_estimate(size, out.iterations, omega);
    return out;
}

TuningResult tune(double epsilon, double p_norm, const BoundParams& params, int z, const DirectedGraph& g,
                  Vertex anchor, double omega) {
    TuningResult out = tune_radius_and_time(epsilon, p_norm, params, z, omega);
    out.ball_vertices = static_cast<double>(ball(g, anchor, out.radius).vertices().size());
    out.complexity_estimate = complexity_estimate(out.ball_vertices, out.iterations, omega);
    return out;
}

double complexity_estimate(double n_r, int t, double omega) {
    if (!(omega >= 2.0 && omega <= 3.0)) throw InvalidInput("omega must lie in [2, 3]");
    if (n_r < 0.0 || t < 0) throw InvalidInput("complexity model needs non-negative sizes");
    return std::pow(n_r, omega) + n_r * n_r * t;
}

}  // namespace localflow
