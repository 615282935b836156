#pragma once

#include "localflow/costs.hpp"
#include "localflow/graph.hpp"
#include "localflow/sensitivity.hpp"

#include <cstdint>
#include <memory>
#include <random>

namespace localflow {

/// mt19937_64 with distribution code that gives the same stream on every
/// standard library (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform on {0, ..., n-1}, n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// Cycle 1 -> 2 -> ... -> n -> 1, n >= 3.
std::shared_ptr<const DirectedGraph> cycle_graph(int n);

/// Path 1 -> 2 -> ... -> n, n >= 2.
std::shared_ptr<const DirectedGraph> path_graph(int n);

/// rows x cols grid, vertex (r, c) labelled r*cols + c + 1, edges oriented
/// rightwards and downwards.
std::shared_ptr<const DirectedGraph> grid_graph(int rows, int cols);

/// Simple connected k-regular graph from the pairing model, rejecting
/// self-loops, multi-edges and disconnected samples. Edges run from the
/// smaller to the larger label, sorted. Throws InvalidInput if k n is odd or
/// k >= n, and NumericalFailure once max_attempts samples have been rejected.
std::shared_ptr<const DirectedGraph> random_regular_graph(int n, int k, std::uint64_t seed,
                                                          int max_attempts = 10000);

/// Uniform entries on [-1, 1], recentred to sum to zero.
Vector random_balanced_flow(int n, std::uint64_t seed);

/// Same cost on every edge.
FlowProblem uniform_problem(std::shared_ptr<const DirectedGraph> g, const CostModel& cost, Vector b);

}  // namespace localflow
