#pragma once

#include "localflow/graph.hpp"
#include "localflow/sensitivity.hpp"
#include "localflow/solver.hpp"

#include <optional>

namespace localflow {

/// Graph-global constants entering the localized error bounds.
struct BoundParams {
    double Q = 1.0;
    int k_minus = 1;
    int k_plus = 1;
    double mu = 0.0;

    /// Q from the problem's costs, k-/k+ from the degrees, mu from the adjacency spectrum.
    static BoundParams from_problem(const FlowProblem& problem);

    double rho() const;    // Q k+/k- - 1 + (Q/k-) mu
    double c() const;      // sqrt(2 k+)/k- Q
    double gamma() const;  // c (1 + c sqrt(k+ - 1))
};

struct ErrorBounds {
    double bias = 0.0;
    double variance = 0.0;
};

/// bias <= ||p|| gamma rho^d / (1 - rho)^2 (zero for the whole graph),
/// variance <= ||p|| c e^{-t/(2Q)} / (1 - rho). Throws NoGuarantee if rho >= 1.
ErrorBounds error_bounds(const BoundParams& params, double p_norm, int d_boundary, int t, bool is_global);

/// Same formulas with constants measured on the subgraph: degrees of V' in
/// the full graph, and max(|lambda_2|, |lambda_m|) of the killed subgraph
/// walk at b in place of rho.
struct RefinedConstants {
    int k_minus = 0;
    int k_plus = 0;
    double rho = 0.0;
    double c = 0.0;
    double gamma = 0.0;
    bool valid = false;  // rho < 1
    double bias_bound = 0.0;
    double variance_bound = 0.0;
};

struct ErrorReport {
    double bias_measured = 0.0;
    double variance_measured = 0.0;
    double error_measured = 0.0;
    double bias_bound = 0.0;      // +inf when no guarantee
    double variance_bound = 0.0;  // +inf when no guarantee
    double rho = 0.0;
    bool guarantee = false;  // rho < 1
    BoundParams constants;
    double c = 0.0;
    double gamma = 0.0;
    double p_norm = 0.0;
    int d_boundary = 0;
    bool is_global = false;
    int iterations = 0;
    int subgraph_vertices = 0;
    int subgraph_edges = 0;
    RefinedConstants refined;
};

struct Decomposition {
    Vector x_target;  // x*(b + p)
    Vector x_limit;   // fixed point of the localized map
    Vector x_hat;     // t localized steps
};

/// The three flows whose differences define bias, variance and error. The
/// localized fixed point is solve_exact on the reduced problem.
Decomposition decomposition_points(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                                   const Subgraph& sub, int t, const PGDConfig& cfg = {}, double solve_tol = 1e-12);

/// Measured bias/variance/error next to the bounds. The bounds are taken from
/// params when given, otherwise from the problem itself.
ErrorReport measure_decomposition(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                                  const Subgraph& sub, int t, const PGDConfig& cfg = {},
                                  std::optional<BoundParams> params = std::nullopt);

struct TuningResult {
    int radius = 0;
    int iterations = 0;
    double epsilon = 0.0;
    double p_norm = 0.0;
    double nu_bias = 0.0;
    double xi_bias = 0.0;
    double nu_var = 0.0;
    double xi_var = 0.0;
    double rho = 0.0;
    int z = 0;
    double omega = 3.0;
    double ball_vertices = 0.0;
    double complexity_estimate = 0.0;
};

/// Smallest r >= z with ||p|| nu_bias e^{-xi_bias r} <= eps/2 and smallest
/// t >= 0 with ||p|| nu_var e^{-xi_var t} <= eps/2. z bounds the distance of
/// the perturbation from the ball centre. The complexity model sizes the
/// ball by the k+-ary tree bound on |V_r|. Throws NoGuarantee if rho >= 1
/// and InvalidInput for eps <= 0 or p_norm < 0.
TuningResult tune(double epsilon, double p_norm, const BoundParams& params, int z, double omega = 3.0);

/// As above, with |V_r| taken from the actual ball around anchor.
TuningResult tune(double epsilon, double p_norm, const BoundParams& params, int z, const DirectedGraph& g,
                  Vertex anchor, double omega = 3.0);

/// n_r^omega + n_r^2 t. Throws InvalidInput unless omega lies in [2, 3].
double complexity_estimate(double n_r, int t, double omega = 3.0);

}  // namespace localflow
