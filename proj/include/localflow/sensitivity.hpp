#pragma once

#include "localflow/costs.hpp"
#include "localflow/graph.hpp"
#include "localflow/linalg.hpp"

#include <memory>
#include <vector>

namespace localflow {

/// Throws InvalidInput unless |sum(v)| <= 1e-12 * ||v||.
void require_balanced(const Vector& v, const char* what);

/// min sum_e f_e(x_e) subject to A x = b on a connected directed graph.
class FlowProblem {
public:
    /// Throws InvalidInput on size mismatches or unbalanced b.
    FlowProblem(std::shared_ptr<const DirectedGraph> graph, std::vector<CostModel> costs, Vector external_flow);

    const DirectedGraph& graph() const noexcept { return *graph_; }
    const std::shared_ptr<const DirectedGraph>& graph_ptr() const noexcept { return graph_; }
    const std::vector<CostModel>& costs() const noexcept { return costs_; }
    const Vector& external_flow() const noexcept { return b_; }
    const Matrix& incidence() const noexcept { return *incidence_; }

    /// Same graph and costs, different b.
    FlowProblem with_external_flow(Vector b) const;

    double objective(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    Vector curvature(const Vector& x) const;

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double condition_number() const noexcept { return beta_ / alpha_; }
    bool all_quadratic() const noexcept;

private:
    std::shared_ptr<const DirectedGraph> graph_;
    std::vector<CostModel> costs_;
    Vector b_;
    std::shared_ptr<const Matrix> incidence_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

struct Solution {
    Vector x;               // optimal flow, per edge
    Vector dual;            // multipliers nu with 1^T nu = 0
    double residual = 0.0;  // ||A x - b||
    double stationarity = 0.0;  // ||grad f(x) + A^T nu||
    int iterations = 0;
};

/// Exact optimum by damped Newton on the dual: x(nu)_e = (f_e')^{-1}(-(A^T nu)_e),
/// Newton on A x(nu) = b with Jacobian -L(nu), nu kept orthogonal to 1.
/// Throws NumericalFailure if ||A x - b|| does not reach tol.
Solution solve_exact(const FlowProblem& problem, double tol = 1e-12, int max_iters = 200);

/// Moore-Penrose pseudoinverse of a connected-graph Laplacian, computed as
/// (L + J/n)^{-1} - J/n. Falls back to eigendecomposition when 1 is not in
/// the kernel. Throws NumericalFailure if the kernel dimension is not 1.
Matrix laplacian_pseudoinverse(const Matrix& laplacian, double rel_tol = 1e-10);

/// Symmetric matrix W with W_uv = sigma_e for the edge e joining u and v.
Matrix edge_weight_matrix(const DirectedGraph& g, const Vector& sigma);

/// Deg - W for the weights above.
Matrix weighted_laplacian(const DirectedGraph& g, const Vector& sigma);

/// Linear response of the optimizer to admissible changes of b:
/// S = Sigma A^T L^+, with Sigma = diag(1/f_e''(x_e)) and L = A Sigma A^T.
struct SensitivityOperator {
    Matrix S;  // |E| x |V|
    Vector sigma;
    Matrix weights;  // W
    Vector degrees;  // diagonal of Deg
    Matrix laplacian;
    Matrix laplacian_pinv;
    std::shared_ptr<const DirectedGraph> graph;
};

/// Throws NumericalFailure if A Sigma A^T and Deg - W disagree beyond 1e-12.
SensitivityOperator sensitivity_operator(const FlowProblem& problem, const Solution& solution);

/// S * db. Throws InvalidInput if db is not balanced.
Vector directional_derivative(const SensitivityOperator& s, const Vector& db);

/// Sigma A^T (A Sigma A^T)^+ for an arbitrary constraint matrix.
Matrix sensitivity_matrix(const Matrix& a, const Vector& sigma, double rel_tol = 1e-10);

/// Sigma A^T (A Sigma A^T)^{-1} for a full-row-rank constraint matrix.
Matrix sensitivity_matrix_full_rank(const Matrix& a, const Vector& sigma);

struct QuadratureResult {
    Vector delta;                 // approximates x*(b + p) - x*(b)
    double error_estimate = 0.0;  // ||I_2m - I_m|| of the last refinement
    int nodes = 0;                // integrand evaluations spent
};

/// Integrates S(b + eps p) p over eps in [0, 1] with composite 4-point
/// Gauss-Legendre, doubling panels until successive estimates agree to
/// quad_tol. Throws NumericalFailure when the 1024-node budget runs out.
QuadratureResult finite_perturbation(const FlowProblem& problem, const Vector& perturbation, double quad_tol,
                                     double solve_tol = 1e-13);

}  // namespace localflow
