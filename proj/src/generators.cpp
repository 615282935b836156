#include "localflow/generators.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace localflow {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidInput("empty range");
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % n;
}

std::shared_ptr<const DirectedGraph> cycle_graph(int n) {
    if (n < 3) throw InvalidInput("a cycle needs at least 3 vertices");
    std::vector<Arc> arcs;
    for (int v = 0; v < n; ++v) arcs.push_back({v, (v + 1) % n});
    return std::make_shared<const DirectedGraph>(n, std::move(arcs));
}

std::shared_ptr<const DirectedGraph> path_graph(int n) {
    if (n < 2) throw InvalidInput("a path needs at least 2 vertices");
    std::vector<Arc> arcs;
    for (int v = 0; v + 1 < n; ++v) arcs.push_back({v, v + 1});
    return std::make_shared<const DirectedGraph>(n, std::move(arcs));
}

std::shared_ptr<const DirectedGraph> grid_graph(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2) throw InvalidInput("a grid needs at least 2 vertices");
    std::vector<Arc> arcs;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int v = r * cols + c;
            if (c + 1 < cols) arcs.push_back({v, v + 1});
            if (r + 1 < rows) arcs.push_back({v, v + cols});
        }
    }
    return std::make_shared<const DirectedGraph>(rows * cols, std::move(arcs));
}

namespace {

bool connected(int n, const std::vector<Arc>& arcs) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const Arc& a : arcs) {
        adj[static_cast<std::size_t>(a.tail)].push_back(a.head);
        adj[static_cast<std::size_t>(a.head)].push_back(a.tail);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int count = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                ++count;
                q.push(w);
            }
        }
    }
    return count == n;
}

}  // namespace

std::shared_ptr<const DirectedGraph> random_regular_graph(int n, int k, std::uint64_t seed, int max_attempts) {
    if (k < 1 || n < 2) throw InvalidInput("random regular graph needs n >= 2 and k >= 1");
    if ((static_cast<long>(n) * k) % 2 != 0) throw InvalidInput("k n must be even for a k-regular graph");
    if (k >= n) throw InvalidInput("k must be smaller than n");

    Rng rng(seed);
    std::vector<int> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<int>(i) / k;
        for (std::size_t i = points.size() - 1; i > 0; --i) std::swap(points[i], points[rng.below(i + 1)]);

        std::set<std::pair<int, int>> pairs;
        bool simple = true;
        for (std::size_t i = 0; i < points.size() && simple; i += 2) {
            const int u = std::min(points[i], points[i + 1]);
            const int v = std::max(points[i], points[i + 1]);
            simple = u != v && pairs.emplace(u, v).second;
        }
        if (!simple) continue;

        std::vector<Arc> arcs;
        arcs.reserve(pairs.size());
        for (const auto& [u, v] : pairs) arcs.push_back({u, v});
        if (!connected(n, arcs)) continue;
        return std::make_shared<const DirectedGraph>(n, std::move(arcs));
    }
    throw NumericalFailure("random regular graph: retry budget exhausted");
}

Vector random_balanced_flow(int n, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("flow needs at least one vertex");
    Rng rng(seed);
    Vector b(n);
    for (int v = 0; v < n; ++v) b(v) = rng.uniform(-1.0, 1.0);
    b.array() -= b.mean();
    return b;
}

FlowProblem uniform_problem(std::shared_ptr<const DirectedGraph> g, const CostModel& cost, Vector b) {
    std::vector<CostModel> costs(static_cast<std::size_t>(g->num_edges()), cost);
    return FlowProblem(std::move(g), std::move(costs), std::move(b));
}

}  // namespace localflow
