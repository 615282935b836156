#pragma once

#include "localflow/generators.hpp"
#include "localflow/sensitivity.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fixtures {

using namespace localflow;

inline std::shared_ptr<const DirectedGraph> make_graph(int n, std::vector<Arc> arcs) {
    return std::make_shared<const DirectedGraph>(n, std::move(arcs));
}

// e1 = (1,2), e2 = (2,3), e3 = (3,1)
inline std::shared_ptr<const DirectedGraph> triangle() { return make_graph(3, {{0, 1}, {1, 2}, {2, 0}}); }

inline std::shared_ptr<const DirectedGraph> two_node() { return make_graph(2, {{0, 1}}); }

inline std::shared_ptr<const DirectedGraph> star(int leaves) {
    std::vector<Arc> arcs;
    for (int i = 1; i <= leaves; ++i) arcs.push_back({0, i});
    return make_graph(leaves + 1, std::move(arcs));
}

inline std::shared_ptr<const DirectedGraph> complete(int n) {
    std::vector<Arc> arcs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) arcs.push_back({u, v});
    return make_graph(n, std::move(arcs));
}

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// b = e_u - e_v.
inline Vector dipole(int n, Vertex u, Vertex v) {
    Vector b = Vector::Zero(n);
    b(u) = 1.0;
    b(v) = -1.0;
    return b;
}

inline FlowProblem unit_quadratic(std::shared_ptr<const DirectedGraph> g, Vector b) {
    return uniform_problem(std::move(g), CostModel::quadratic(1.0), std::move(b));
}

enum class CostFamily { kQuadratic, kLogCosh };

/// Heterogeneous costs drawn from a seeded stream: quadratic with
/// a in [0.5, 2] and c in [-1, 1], or log-cosh with alpha in [0.5, 1] and
/// beta in [alpha, 2].
inline FlowProblem random_costs(std::shared_ptr<const DirectedGraph> g, CostFamily family, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CostModel> costs;
    for (int e = 0; e < g->num_edges(); ++e) {
        if (family == CostFamily::kQuadratic) {
            const double a = rng.uniform(0.5, 2.0);
            costs.push_back(CostModel::quadratic(a, rng.uniform(-1.0, 1.0)));
        } else {
            const double alpha = rng.uniform(0.5, 1.0);
            costs.push_back(CostModel::logcosh(alpha, rng.uniform(alpha, 2.0)));
        }
    }
    Vector b = random_balanced_flow(g->num_vertices(), seed + 1);
    b *= 2.0;
    return FlowProblem(std::move(g), std::move(costs), std::move(b));
}

struct CorpusGraph {
    std::string name;
    std::shared_ptr<const DirectedGraph> graph;
};

/// Triangle, paths, cycles up to n = 20, 3x3 to 6x6 grids, random 3-regular up to n = 50.
inline std::vector<CorpusGraph> corpus_graphs() {
    return {
        {"triangle", triangle()},
        {"path-5", path_graph(5)},
        {"path-12", path_graph(12)},
        {"cycle-5", cycle_graph(5)},
        {"cycle-8", cycle_graph(8)},
        {"cycle-13", cycle_graph(13)},
        {"cycle-20", cycle_graph(20)},
        {"grid-3x3", grid_graph(3, 3)},
        {"grid-4x4", grid_graph(4, 4)},
        {"grid-5x5", grid_graph(5, 5)},
        {"grid-6x6", grid_graph(6, 6)},
        {"regular3-20", random_regular_graph(20, 3, 11)},
        {"regular3-50", random_regular_graph(50, 3, 12)},
    };
}

struct CorpusProblem {
    std::string name;
    CostFamily family;
    FlowProblem problem;
};

inline std::vector<CorpusProblem> corpus(CostFamily family) {
    std::vector<CorpusProblem> out;
    std::uint64_t seed = family == CostFamily::kQuadratic ? 100 : 200;
    for (const CorpusGraph& g : corpus_graphs())
        out.push_back({g.name + (family == CostFamily::kQuadratic ? "/quadratic" : "/logcosh"), family,
                       random_costs(g.graph, family, seed++)});
    return out;
}

inline std::vector<CorpusProblem> full_corpus() {
    std::vector<CorpusProblem> out = corpus(CostFamily::kQuadratic);
    for (CorpusProblem& p : corpus(CostFamily::kLogCosh)) out.push_back(std::move(p));
    return out;
}

}  // namespace fixtures
