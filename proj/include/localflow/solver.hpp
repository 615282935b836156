#pragma once

#include "localflow/graph.hpp"
#include "localflow/linalg.hpp"
#include "localflow/sensitivity.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace localflow {

struct PGDConfig {
    std::optional<double> step;  // eta; 1/beta when unset
    int max_iters = 1000;
    double tol = 1e-12;  // stop once ||x_{k+1} - x_k|| <= tol
};

/// Throws InvalidInput for a non-positive or non-finite configured step.
double step_size(const FlowProblem& problem, const PGDConfig& cfg);

/// Euclidean projection onto {u : A u = b} for an incidence matrix A of a
/// connected graph. A^T (A A^T)^+ is formed once and reused; A A^T is the
/// unweighted Laplacian.
class AffineProjector {
public:
    explicit AffineProjector(Matrix incidence);

    /// Throws InvalidInput if b is not balanced or sizes disagree.
    Vector project(const Vector& x, const Vector& b) const;

    const Matrix& incidence() const noexcept { return a_; }

private:
    Matrix a_;
    Matrix pinv_map_;  // A^T (A A^T)^+
};

/// x - A^T (A A^T)^+ (A x - b).
Vector project_affine(const Matrix& incidence, const Vector& b, const Vector& x);

/// One step of projected gradient descent: Pi(x - eta grad f(x)).
Vector pgd_step(const FlowProblem& problem, const PGDConfig& cfg, const Vector& x);

struct PGDRun {
    Vector x;
    int iterations = 0;
    std::vector<double> trace;  // ||x_{k+1} - x_k|| per iteration
};

class ProjectedGradientDescent {
public:
    ProjectedGradientDescent(const FlowProblem& problem, PGDConfig cfg = {});

    Vector step(const Vector& x) const;
    /// Exactly t steps.
    PGDRun run(const Vector& x0, int t) const;
    /// Until the step length drops below cfg.tol or max_iters is reached.
    PGDRun solve(const Vector& x0) const;

    double eta() const noexcept { return eta_; }

private:
    const FlowProblem* problem_;
    PGDConfig cfg_;
    double eta_;
    AffineProjector projector_;
};

/// b' = b_new restricted to V' minus the flow the frozen edges carry into V'.
/// Throws InvalidInput if the frozen edges disagree with b_new on V'^c or if
/// b' is not balanced (both to 1e-8 relative); the result is recentred.
Vector reduced_external_flow(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new,
                             const Vector& x);

/// The subgraph as a flow problem: same costs on E', external flow b_prime.
FlowProblem reduced_problem(const FlowProblem& problem, const Subgraph& sub, const Vector& b_prime);

/// Projected gradient descent on the edges of a subgraph with every other
/// edge frozen at its value in the starting point.
class LocalizedGradientDescent {
public:
    /// frozen supplies the E'^c coordinates; throws as reduced_external_flow.
    LocalizedGradientDescent(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new,
                             const Vector& frozen, PGDConfig cfg = {});

    /// Updates E' only; E'^c entries of the result are copied from x.
    Vector step(const Vector& x) const;
    PGDRun run(const Vector& x0, int t) const;

    const Vector& reduced_flow() const noexcept { return b_prime_; }
    const std::vector<EdgeIndex>& frozen_edges() const noexcept { return frozen_; }
    double eta() const noexcept { return eta_; }

private:
    const FlowProblem* problem_;
    std::vector<EdgeIndex> active_;
    std::vector<EdgeIndex> frozen_;
    Vector b_prime_;
    double eta_;
    std::optional<AffineProjector> projector_;  // empty when E' is empty
};

Vector localized_step(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new, const Vector& x,
                      const PGDConfig& cfg = {});

struct LocalSolveResult {
    Vector x_hat;
    int iterations = 0;
    std::vector<double> trace;
    std::vector<EdgeIndex> frozen_edges;
};

/// t localized steps for b + pert on sub, started from x*(b).
/// Throws InvalidInput if pert is unbalanced or supported outside sub.
LocalSolveResult local_resolve(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                               const Subgraph& sub, int t, const PGDConfig& cfg = {});

/// Vertices where |pert| exceeds zero_tol, ascending.
std::vector<Vertex> support(const Vector& pert, double zero_tol = 0.0);

}  // namespace localflow
