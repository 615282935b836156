#pragma once

#include "localflow/analysis.hpp"
#include "localflow/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace localflow {

/// (e_anchor - e_w) / sqrt(2) with w the anchor's first neighbour.
/// Supported within distance 1 of the anchor.
Vector anchored_perturbation(const DirectedGraph& g, Vertex anchor);

struct SweepConfig {
    std::vector<int> sizes{50, 100, 200};
    std::vector<int> radii{1, 2, 3, 4, 5};
    std::vector<int> iterations{0, 1, 5, 20};
    int degree = 3;
    double epsilon = 1e-3;
    std::uint64_t seed = 20240917;
};

struct SweepRow {
    int n = 0;
    int r = 0;
    int t = 0;
    double epsilon = 0.0;
    double bias_meas = 0.0;
    double bias_bound = 0.0;
    double var_meas = 0.0;
    double var_bound = 0.0;
    double error = 0.0;
    double rho = 0.0;
};

/// For each size: a random degree-regular graph with unit quadratic costs
/// and a random balanced flow, perturbed at vertex 0 by
/// anchored_perturbation, localized on ball(0, r) for every (r, t).
/// Rows come out in (n, r, t) order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Header "n,r,t,epsilon,bias_meas,bias_bound,var_meas,var_bound,error,rho"
/// and one line per row, numbers with 17 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace localflow
