#pragma once

#include "localflow/graph.hpp"
#include "localflow/linalg.hpp"
#include "localflow/sensitivity.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace localflow {

/// Eigenvalue magnitudes within this distance of 1 count as 1.
inline constexpr double kContractiveSlack = 1e-10;

/// Diffusion walk P = Deg^{-1} W of a weighted graph.
struct WalkData {
    Matrix transition;    // P
    Vector degrees;       // d_v = sum_u W_vu
    Vector stationary;    // pi_v = d_v / sum d
    Vector eigenvalues;   // of Gamma = Deg^{1/2} P Deg^{-1/2}, descending
    Matrix eigenvectors;  // orthonormal, column k pairs with eigenvalues(k)
    double lambda = 0.0;  // max(|lambda_2|, |lambda_n|)

    bool contractive() const noexcept { return lambda < 1.0 - kContractiveSlack; }
};

WalkData walk_data(const Matrix& weights);
WalkData walk_data(const SensitivityOperator& s);

/// sum_{t>=0} (e_u - e_v)^T P^t g, truncated once the geometric tail
/// certificate drops below tail_tol. Throws NonContractiveWalk if lambda >= 1.
struct SeriesValue {
    double value = 0.0;
    int terms = 0;
    double tail_bound = 0.0;
};
SeriesValue green_series(const WalkData& walk, Vertex u, Vertex v, const Vector& g, double tail_tol = 1e-10);

/// (e_u - e_v)^T L^+ (e_w - e_z) two ways: from the pseudoinverse, and as
/// sum_t (e_u - e_v)^T P^t (e_w/d_w - e_z/d_z). The series side is NaN
/// (with series_available = false) when the walk is not contractive.
struct GreenDifference {
    double via_pinv = 0.0;
    double via_series = 0.0;
    bool series_available = false;
    int terms = 0;
    double tail_bound = 0.0;
};
GreenDifference green_difference(const SensitivityOperator& s, const WalkData& walk, Vertex u, Vertex v, Vertex w,
                                 Vertex z, double tail_tol = 1e-10);

/// Walk killed on entering z_bar, restricted to the remaining vertices.
struct KilledWalkData {
    Vertex z_bar = 0;
    std::vector<Vertex> vertices;  // V \ {z_bar}, ascending; row/column order below
    Matrix restricted_laplacian;   // L with row and column z_bar removed
    Matrix restricted_transition;  // Deg_bar^{-1} W_bar
    Vector restricted_degrees;
    Matrix green;                  // restricted_laplacian^{-1}

    /// Row of v in the restricted matrices. Throws InvalidInput for z_bar.
    int row(Vertex v) const;
};

/// Throws NumericalFailure if green * restricted_laplacian misses I by 1e-10.
KilledWalkData killed_walk(const Matrix& weights, Vertex z_bar);
KilledWalkData killed_walk(const SensitivityOperator& s, Vertex z_bar);

/// (I - P_bar)^{-1} Deg_bar^{-1}: the killed Green function from the Neumann series.
Matrix killed_green_neumann(const KilledWalkData& k);

/// P_v(T_w < T_zbar) = green(v, w) / green(w, w).
double hitting_probability(const KilledWalkData& k, Vertex v, Vertex w);

/// E_v[visits to w before absorption] = d_w green(v, w).
double expected_visits(const KilledWalkData& k, Vertex v, Vertex w);

/// (e_v - e_zbar)^T L^+ (e_w - e_zbar) over v, w != z_bar, in KilledWalkData order.
Matrix pinv_via_restricted(const Matrix& laplacian_pinv, Vertex z_bar);
Matrix pinv_via_restricted(const SensitivityOperator& s, Vertex z_bar);

struct KilledWalkEstimate {
    long walks = 0;
    double hit_probability = 0.0;
    double hit_stderr = 0.0;
    double mean_visits = 0.0;
    double visits_stderr = 0.0;
};

/// Monte Carlo estimate of P_start(T_target < T_zbar) and of the expected
/// number of visits to target before absorption.
KilledWalkEstimate simulate_killed_walk(const WalkData& walk, Vertex z_bar, Vertex start, Vertex target, long walks,
                                        std::uint64_t seed);

/// Both sides of sqrt(1/2 sum_{u,v in U, uv in E} g_uv^2) <= a lambda^d/(1-lambda) sqrt(sum_z f_z^2 d_z),
/// where g_uv = sum_z sum_t (P^t_uz - P^t_vz) f_z. f is indexed by vertex and
/// must vanish outside Z. Throws NonContractiveWalk if lambda >= 1.
struct SpectralSumBound {
    double lhs = 0.0;
    double rhs = 0.0;
    int distance = 0;
};
SpectralSumBound walk_sum_bound(const WalkData& walk, const DirectedGraph& g, std::span<const Vertex> u_set,
                                std::span<const Vertex> z_set, const Vector& f);

/// Decay-of-correlation bound on ||dx*/d eps||_F for the subgraph (U, F).
struct DecayBound {
    double at_b = 0.0;          // c(b) lambda(b)^d / (1 - lambda(b)) ||p||_Z
    double conservative = 0.0;  // weights bracketed by [1/beta, 1/alpha], lambda by rho; +inf if rho >= 1
    bool conservative_valid = false;
    double lambda = 0.0;
    double rho = 0.0;
    double c_at_b = 0.0;
    double c_conservative = 0.0;
    int distance = 0;
};

/// Throws NonContractiveWalk when lambda(b) >= 1.
DecayBound decay_bound(const SensitivityOperator& s, const WalkData& walk, double mu, const Subgraph& sub,
                       std::span<const Vertex> z_set, double p_norm_on_z, double cost_alpha, double cost_beta);
DecayBound decay_bound(const FlowProblem& problem, const SensitivityOperator& s, const Subgraph& sub,
                       std::span<const Vertex> z_set, double p_norm_on_z);

/// w+ k+ / (w- k-) - 1 + w+ / (w- k-) mu. Throws InvalidInput unless
/// 0 < w- <= w+ and 0 < k- <= k+.
double interlacing_bound(int k_minus, int k_plus, double w_minus, double w_plus, double mu);

/// Two-sided bounds on the i-th largest eigenvalue of a subgraph walk with
/// m vertices, from the descending adjacency spectrum of the full graph.
struct InterlacingInterval {
    Vector lower;
    Vector upper;
};
InterlacingInterval interlacing_interval(const Vector& adjacency_descending, int m, int k_minus, int k_plus,
                                         double w_minus, double w_plus);

/// How a subgraph walk normalises its rows.
enum class SubgraphWalk {
    /// Deg'_vv sums weights over all neighbours in the full graph, so the
    /// walk is sub-stochastic and leaks at the boundary.
    kKilled,
    /// Deg'_vv sums weights over neighbours inside the subgraph only.
    kFree,
};

/// Descending eigenvalues of Deg'^{-1} W' on the subgraph's vertices, with
/// W' the weights of the subgraph's edges.
Vector subgraph_walk_spectrum(const Matrix& weights, const Subgraph& sub, SubgraphWalk mode);

}  // namespace localflow
