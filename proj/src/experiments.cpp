#include "localflow/experiments.hpp"

#include "localflow/errors.hpp"
#include "localflow/generators.hpp"

#include <cmath>
#include <cstdio>

namespace localflow {

Vector anchored_perturbation(const DirectedGraph& g, Vertex anchor) {
    if (anchor < 0 || anchor >= g.num_vertices()) throw InvalidInput("anchor out of range");
    // Not e_anchor minus the neighbour average: for uniform quadratic costs
    // that is (1/deg) L e_anchor and its response never leaves the anchor's edges.
    Vector p = Vector::Zero(g.num_vertices());
    p(anchor) = 1.0 / std::sqrt(2.0);
    p(g.neighbors(anchor).front()) = -1.0 / std::sqrt(2.0);
    return p;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    std::vector<SweepRow> rows;
    for (int n : cfg.sizes) {
        const std::uint64_t graph_seed = cfg.seed + static_cast<std::uint64_t>(n);
        auto g = random_regular_graph(n, cfg.degree, graph_seed);
        const FlowProblem problem =
            uniform_problem(g, CostModel::quadratic(1.0), random_balanced_flow(n, graph_seed ^ 0x9e3779b97f4a7c15ULL));
        const Solution sol = solve_exact(problem);
        const Vector p = anchored_perturbation(*g, 0);
        for (int r : cfg.radii) {
            const Subgraph sub = ball(*g, 0, r);
            for (int t : cfg.iterations) {
                const ErrorReport rep = measure_decomposition(problem, sol, p, sub, t);
                rows.push_back(SweepRow{n, r, t, cfg.epsilon, rep.bias_measured, rep.bias_bound,
                                        rep.variance_measured, rep.variance_bound, rep.error_measured, rep.rho});
            }
        }
    }
    return rows;
}

namespace {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "n,r,t,epsilon,bias_meas,bias_bound,var_meas,var_bound,error,rho\n";
    for (const SweepRow& row : rows) {
        out += std::to_string(row.n) + ',' + std::to_string(row.r) + ',' + std::to_string(row.t) + ',';
        for (double v : {row.epsilon, row.bias_meas, row.bias_bound, row.var_meas, row.var_bound, row.error}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(row.rho);
        out += '\n';
    }
    return out;
}

}  // namespace localflow
