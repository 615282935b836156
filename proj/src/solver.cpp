#include "localflow/solver.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace localflow {

double step_size(const FlowProblem& problem, const PGDConfig& cfg) {
    if (!cfg.step) return 1.0 / problem.beta();
    if (!(*cfg.step > 0.0) || !std::isfinite(*cfg.step)) throw InvalidInput("step size must be positive and finite");
    return *cfg.step;
}

AffineProjector::AffineProjector(Matrix incidence) : a_(std::move(incidence)) {
    if (a_.cols() == 0) {
        pinv_map_ = Matrix::Zero(0, a_.rows());
        return;
    }
    pinv_map_ = a_.transpose() * laplacian_pseudoinverse(a_ * a_.transpose());
}

Vector AffineProjector::project(const Vector& x, const Vector& b) const {
    if (x.size() != a_.cols() || b.size() != a_.rows()) throw InvalidInput("projection operands have wrong size");
    require_balanced(b, "constraint right-hand side");
    return x - pinv_map_ * (a_ * x - b);
}

Vector project_affine(const Matrix& incidence, const Vector& b, const Vector& x) {
    return AffineProjector(incidence).project(x, b);
}

Vector pgd_step(const FlowProblem& problem, const PGDConfig& cfg, const Vector& x) {
    return ProjectedGradientDescent(problem, cfg).step(x);
}

ProjectedGradientDescent::ProjectedGradientDescent(const FlowProblem& problem, PGDConfig cfg)
    : problem_(&problem), cfg_(cfg), eta_(step_size(problem, cfg)), projector_(problem.incidence()) {}

Vector ProjectedGradientDescent::step(const Vector& x) const {
    if (x.size() != problem_->graph().num_edges()) throw InvalidInput("iterate must have one entry per edge");
    return projector_.project(x - eta_ * problem_->gradient(x), problem_->external_flow());
}

PGDRun ProjectedGradientDescent::run(const Vector& x0, int t) const {
    if (t < 0) throw InvalidInput("iteration count must be non-negative");
    PGDRun out{x0, 0, {}};
    for (int k = 0; k < t; ++k) {
        Vector next = step(out.x);
        out.trace.push_back((next - out.x).norm());
        out.x = std::move(next);
        ++out.iterations;
    }
    return out;
}

PGDRun ProjectedGradientDescent::solve(const Vector& x0) const {
    PGDRun out{x0, 0, {}};
    while (out.iterations < cfg_.max_iters) {
        Vector next = step(out.x);
        const double moved = (next - out.x).norm();
        out.trace.push_back(moved);
        out.x = std::move(next);
        ++out.iterations;
        if (moved <= cfg_.tol) break;
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kConsistencyTol = 1e-8;

void check_sizes(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new, const Vector& x) {
    if (&sub.parent() != &problem.graph()) throw InvalidInput("subgraph belongs to a different graph");
    if (b_new.size() != problem.graph().num_vertices()) throw InvalidInput("external flow has wrong size");
    if (x.size() != problem.graph().num_edges()) throw InvalidInput("flow has wrong size");
}

}  // namespace

Vector reduced_external_flow(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new,
                             const Vector& x) {
    check_sizes(problem, sub, b_new, x);
    const DirectedGraph& g = problem.graph();

    // Net outflow of the frozen edges at every vertex.
    Vector frozen_out = Vector::Zero(g.num_vertices());
    for (EdgeIndex e : sub.complement_edges()) {
        frozen_out(g.edge(e).tail) += x(e);
        frozen_out(g.edge(e).head) -= x(e);
    }

    const double scale = std::max({1.0, b_new.lpNorm<Eigen::Infinity>(), frozen_out.lpNorm<Eigen::Infinity>()});
    for (Vertex v : sub.complement_vertices()) {
        if (std::abs(frozen_out(v) - b_new(v)) > kConsistencyTol * scale)
            throw InvalidInput("frozen edges do not carry the external flow at vertex " +
                               std::to_string(g.vertex_label(v)));
    }

    const auto vertices = sub.vertices();
    Vector b_prime(static_cast<Eigen::Index>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i)
        b_prime(static_cast<Eigen::Index>(i)) = b_new(vertices[i]) - frozen_out(vertices[i]);
    if (std::abs(b_prime.sum()) > kConsistencyTol * std::max(1.0, b_prime.norm()))
        throw InvalidInput("reduced external flow is not balanced");
    b_prime.array() -= b_prime.mean();
    return b_prime;
}

FlowProblem reduced_problem(const FlowProblem& problem, const Subgraph& sub, const Vector& b_prime) {
    if (&sub.parent() != &problem.graph()) throw InvalidInput("subgraph belongs to a different graph");
    std::vector<CostModel> costs;
    costs.reserve(sub.edges().size());
    for (EdgeIndex e : sub.edges()) costs.push_back(problem.costs()[static_cast<std::size_t>(e)]);
    return FlowProblem(std::make_shared<const DirectedGraph>(sub.as_graph()), std::move(costs), b_prime);
}

LocalizedGradientDescent::LocalizedGradientDescent(const FlowProblem& problem, const Subgraph& sub,
                                                   const Vector& b_new, const Vector& frozen, PGDConfig cfg)
    : problem_(&problem),
      active_(sub.edges().begin(), sub.edges().end()),
      frozen_(sub.complement_edges()),
      b_prime_(reduced_external_flow(problem, sub, b_new, frozen)),
      eta_(step_size(problem, cfg)) {
    if (!active_.empty()) {
        const Matrix& a = problem.incidence();
        std::vector<int> rows(sub.vertices().begin(), sub.vertices().end());
        projector_.emplace(submatrix(a, rows, active_));
    }
}

Vector LocalizedGradientDescent::step(const Vector& x) const {
    if (x.size() != problem_->graph().num_edges()) throw InvalidInput("iterate must have one entry per edge");
    Vector out = x;
    if (!projector_) return out;
    Vector moved(static_cast<Eigen::Index>(active_.size()));
    for (std::size_t i = 0; i < active_.size(); ++i) {
        const EdgeIndex e = active_[i];
        moved(static_cast<Eigen::Index>(i)) =
            x(e) - eta_ * problem_->costs()[static_cast<std::size_t>(e)].gradient(x(e));
    }
    scatter(projector_->project(moved, b_prime_), active_, out);
    return out;
}

PGDRun LocalizedGradientDescent::run(const Vector& x0, int t) const {
    if (t < 0) throw InvalidInput("iteration count must be non-negative");
    PGDRun out{x0, 0, {}};
    for (int k = 0; k < t; ++k) {
        Vector next = step(out.x);
        out.trace.push_back((next - out.x).norm());
        out.x = std::move(next);
        ++out.iterations;
    }
    return out;
}

Vector localized_step(const FlowProblem& problem, const Subgraph& sub, const Vector& b_new, const Vector& x,
                      const PGDConfig& cfg) {
    return LocalizedGradientDescent(problem, sub, b_new, x, cfg).step(x);
}

std::vector<Vertex> support(const Vector& pert, double zero_tol) {
    std::vector<Vertex> out;
    for (Eigen::Index v = 0; v < pert.size(); ++v)
        if (std::abs(pert(v)) > zero_tol) out.push_back(static_cast<Vertex>(v));
    return out;
}

LocalSolveResult local_resolve(const FlowProblem& problem, const Solution& x_star_b, const Vector& pert,
                               const Subgraph& sub, int t, const PGDConfig& cfg) {
    const DirectedGraph& g = problem.graph();
    if (pert.size() != g.num_vertices()) throw InvalidInput("perturbation must have one entry per vertex");
    require_balanced(pert, "perturbation");
    for (Vertex v : support(pert))
        if (!sub.contains_vertex(v))
            throw InvalidInput("perturbation is supported at vertex " + std::to_string(g.vertex_label(v)) +
                               " outside the subgraph");

    const Vector b_new = problem.external_flow() + pert;
    LocalizedGradientDescent lgd(problem, sub, b_new, x_star_b.x, cfg);
    PGDRun run = lgd.run(x_star_b.x, t);
    return LocalSolveResult{std::move(run.x), run.iterations, std::move(run.trace), lgd.frozen_edges()};
}

}  // namespace localflow
