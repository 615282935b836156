#include "localflow/sensitivity.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace localflow {

void require_balanced(const Vector& v, const char* what) {
    const double sum = v.sum();
    if (!std::isfinite(sum) || std::abs(sum) > 1e-12 * v.norm())
        throw InvalidInput(std::string(what) + " is not balanced (sum = " + std::to_string(sum) + ")");
}

FlowProblem::FlowProblem(std::shared_ptr<const DirectedGraph> graph, std::vector<CostModel> costs,
                         Vector external_flow)
    : graph_(std::move(graph)), costs_(std::move(costs)), b_(std::move(external_flow)) {
    if (!graph_) throw InvalidInput("flow problem needs a graph");
    if (static_cast<int>(costs_.size()) != graph_->num_edges())
        throw InvalidInput("one cost per edge is required");
    if (b_.size() != graph_->num_vertices()) throw InvalidInput("external flow must have one entry per vertex");
    require_balanced(b_, "external flow");
    incidence_ = std::make_shared<const Matrix>(incidence_matrix(*graph_));
    if (costs_.empty()) {
        alpha_ = beta_ = 1.0;
    } else {
        alpha_ = costs_.front().alpha();
        beta_ = costs_.front().beta();
        for (const CostModel& c : costs_) {
            alpha_ = std::min(alpha_, c.alpha());
            beta_ = std::max(beta_, c.beta());
        }
    }
}

FlowProblem FlowProblem::with_external_flow(Vector b) const {
    if (b.size() != graph_->num_vertices()) throw InvalidInput("external flow must have one entry per vertex");
    require_balanced(b, "external flow");
    FlowProblem copy = *this;
    copy.b_ = std::move(b);
    return copy;
}

double FlowProblem::objective(const Vector& x) const {
    double total = 0.0;
    for (std::size_t e = 0; e < costs_.size(); ++e) total += costs_[e].eval(x(static_cast<Eigen::Index>(e))).f;
    return total;
}

Vector FlowProblem::gradient(const Vector& x) const {
    Vector g(x.size());
    for (Eigen::Index e = 0; e < x.size(); ++e) g(e) = costs_[static_cast<std::size_t>(e)].gradient(x(e));
    return g;
}

Vector FlowProblem::curvature(const Vector& x) const {
    Vector h(x.size());
    for (Eigen::Index e = 0; e < x.size(); ++e) h(e) = costs_[static_cast<std::size_t>(e)].curvature(x(e));
    return h;
}

bool FlowProblem::all_quadratic() const noexcept {
    return std::all_of(costs_.begin(), costs_.end(), [](const CostModel& c) { return c.is_quadratic(); });
}

// ---------------------------------------------------------------------------

namespace {

struct DualPoint {
    Vector x;
    Vector residual;
    double value;
};

DualPoint evaluate_dual(const FlowProblem& p, const Vector& nu) {
    const Matrix& a = p.incidence();
    const Vector price = -(a.transpose() * nu);
    DualPoint out;
    out.x.resize(price.size());
    for (Eigen::Index e = 0; e < price.size(); ++e)
        out.x(e) = p.costs()[static_cast<std::size_t>(e)].inverse_gradient(price(e));
    out.residual = a * out.x - p.external_flow();
    out.value = p.objective(out.x) + nu.dot(out.residual);
    return out;
}

Vector centered(Vector v) {
    if (v.size() > 0) v.array() -= v.mean();
    return v;
}

}  // namespace

Solution solve_exact(const FlowProblem& problem, double tol, int max_iters) {
    if (!(tol > 0.0)) throw InvalidInput("solver tolerance must be positive");
    const Matrix& a = problem.incidence();
    const Eigen::Index n = a.rows();

    Vector nu = Vector::Zero(n);
    DualPoint current = evaluate_dual(problem, nu);
    int iter = 0;
    for (; current.residual.norm() > tol; ++iter) {
        if (iter >= max_iters)
            throw NumericalFailure("dual Newton did not converge (residual " +
                                   std::to_string(current.residual.norm()) + ")");
        Vector sigma = problem.curvature(current.x).cwiseInverse();
        Matrix shifted = a * sigma.asDiagonal() * a.transpose();
        shifted.array() += 1.0 / static_cast<double>(n);
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() != Eigen::Success) throw NumericalFailure("dual Newton system is singular");
        const Vector step = centered(llt.solve(centered(current.residual)));

        // Ascent on the concave dual; the residual norm is the fallback test
        // once the dual value stops resolving differences.
        const double slope = current.residual.dot(step);
        double s = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, s *= 0.5) {
            DualPoint trial = evaluate_dual(problem, nu + s * step);
            if (trial.value >= current.value + 1e-4 * s * slope ||
                trial.residual.norm() < current.residual.norm()) {
                nu += s * step;
                current = std::move(trial);
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw NumericalFailure("dual Newton line search stalled (residual " +
                                   std::to_string(current.residual.norm()) + ")");
    }

    Solution sol;
    sol.x = std::move(current.x);
    sol.dual = centered(nu);
    sol.residual = current.residual.norm();
    sol.stationarity = (problem.gradient(sol.x) + a.transpose() * sol.dual).norm();
    sol.iterations = iter;
    return sol;
}

Matrix laplacian_pseudoinverse(const Matrix& laplacian, double rel_tol) {
    const Eigen::Index n = laplacian.rows();
    if (laplacian.cols() != n) throw InvalidInput("Laplacian must be square");
    if (n == 0) return Matrix(0, 0);
    const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
    const bool ones_in_kernel = (laplacian * Vector::Ones(n)).cwiseAbs().maxCoeff() <= rel_tol * scale;
    if (ones_in_kernel) {
        const double inv_n = 1.0 / static_cast<double>(n);
        Matrix shifted = laplacian;
        shifted.array() += inv_n;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Matrix pinv = llt.solve(Matrix::Identity(n, n));
            pinv.array() -= inv_n;
            // A kernel larger than span{1} still factors in floating point;
            // the residual of L L^+ L exposes it.
            if ((laplacian * pinv * laplacian - laplacian).cwiseAbs().maxCoeff() <= 1e-8 * scale)
                return 0.5 * (pinv + pinv.transpose());
        }
        throw NumericalFailure("Laplacian kernel is larger than span{1} (disconnected graph?)");
    }
    if (symmetric_kernel_dimension(laplacian, rel_tol) != 1)
        throw NumericalFailure("Laplacian kernel dimension is not 1");
    return symmetric_pseudoinverse(laplacian, rel_tol);
}

Matrix edge_weight_matrix(const DirectedGraph& g, const Vector& sigma) {
    if (sigma.size() != g.num_edges()) throw InvalidInput("one weight per edge is required");
    Matrix w = Matrix::Zero(g.num_vertices(), g.num_vertices());
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        w(g.edge(e).tail, g.edge(e).head) = sigma(e);
        w(g.edge(e).head, g.edge(e).tail) = sigma(e);
    }
    return w;
}

Matrix weighted_laplacian(const DirectedGraph& g, const Vector& sigma) {
    Matrix w = edge_weight_matrix(g, sigma);
    Matrix l = -w;
    l.diagonal() = w.rowwise().sum();
    return l;
}

SensitivityOperator sensitivity_operator(const FlowProblem& problem, const Solution& solution) {
    const DirectedGraph& g = problem.graph();
    if (solution.x.size() != g.num_edges()) throw InvalidInput("solution does not match the problem");
    const Matrix& a = problem.incidence();

    SensitivityOperator s;
    s.graph = problem.graph_ptr();
    s.sigma = problem.curvature(solution.x).cwiseInverse();
    s.weights = edge_weight_matrix(g, s.sigma);
    s.degrees = s.weights.rowwise().sum();
    s.laplacian = a * s.sigma.asDiagonal() * a.transpose();

    Matrix deg_minus_w = -s.weights;
    deg_minus_w.diagonal() = s.degrees;
    const double scale = std::max(1.0, s.degrees.cwiseAbs().maxCoeff());
    if ((s.laplacian - deg_minus_w).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NumericalFailure("A Sigma A^T differs from Deg - W");

    s.laplacian_pinv = laplacian_pseudoinverse(s.laplacian);
    s.S = s.sigma.asDiagonal() * a.transpose() * s.laplacian_pinv;
    return s;
}

Vector directional_derivative(const SensitivityOperator& s, const Vector& db) {
    if (db.size() != s.S.cols()) throw InvalidInput("direction must have one entry per vertex");
    require_balanced(db, "perturbation direction");
    return s.S * db;
}

Matrix sensitivity_matrix(const Matrix& a, const Vector& sigma, double rel_tol) {
    const Matrix l = a * sigma.asDiagonal() * a.transpose();
    return sigma.asDiagonal() * a.transpose() * symmetric_pseudoinverse(l, rel_tol);
}

Matrix sensitivity_matrix_full_rank(const Matrix& a, const Vector& sigma) {
    const Matrix l = a * sigma.asDiagonal() * a.transpose();
    Eigen::LLT<Matrix> llt(l);
    if (llt.info() != Eigen::Success) throw NumericalFailure("A Sigma A^T is not positive definite");
    // Sigma A^T L^{-1} = (L^{-1} A Sigma)^T
    return llt.solve(a * sigma.asDiagonal()).transpose();
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                                 0.3478548451374538};
constexpr int kNodeBudget = 1 << 10;

Vector integrand(const FlowProblem& problem, const Vector& perturbation, double eps, double solve_tol) {
    FlowProblem shifted = problem.with_external_flow(problem.external_flow() + eps * perturbation);
    const Solution sol = solve_exact(shifted, solve_tol);
    return sensitivity_operator(shifted, sol).S * perturbation;
}

}  // namespace

QuadratureResult finite_perturbation(const FlowProblem& problem, const Vector& perturbation, double quad_tol,
                                     double solve_tol) {
    if (perturbation.size() != problem.graph().num_vertices())
        throw InvalidInput("perturbation must have one entry per vertex");
    require_balanced(perturbation, "perturbation");
    if (!(quad_tol > 0.0)) throw InvalidInput("quadrature tolerance must be positive");

    QuadratureResult out;
    const Eigen::Index m = problem.graph().num_edges();
    if (perturbation.norm() == 0.0) {
        out.delta = Vector::Zero(m);
        return out;
    }
    if (problem.all_quadratic()) {
        // S does not depend on b, so one evaluation is exact.
        out.delta = integrand(problem, perturbation, 0.5, solve_tol);
        out.nodes = 1;
        return out;
    }

    auto composite = [&](int panels) {
        Vector sum = Vector::Zero(m);
        const double h = 1.0 / panels;
        for (int k = 0; k < panels; ++k) {
            const double mid = (k + 0.5) * h;
            for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
                sum += kGaussWeights[i] * integrand(problem, perturbation, mid + 0.5 * h * kGaussNodes[i], solve_tol);
        }
        out.nodes += 4 * panels;
        return Vector(0.5 * h * sum);
    };

    Vector coarse = composite(1);
    for (int panels = 2; out.nodes + 4 * panels <= kNodeBudget; panels *= 2) {
        Vector fine = composite(panels);
        out.error_estimate = (fine - coarse).norm();
        out.delta = std::move(fine);
        if (out.error_estimate <= quad_tol) return out;
        coarse = out.delta;
    }
    throw NumericalFailure("quadrature did not reach tolerance within the node budget (estimate " +
                           std::to_string(out.error_estimate) + ")");
}

}  // namespace localflow
