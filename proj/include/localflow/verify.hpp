#pragma once

#include "localflow/generators.hpp"
#include "localflow/io.hpp"
#include "localflow/sensitivity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace localflow {

enum class CheckStatus {
    kPass,
    kFail,
    kSkipped,  // not applicable, e.g. series checks on a bipartite graph
    kInfo,     // diagnostic only, never fails a run
};

const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::kPass;
    double residual = 0.0;   // worst case over the instances tried
    double tolerance = 0.0;  // pass iff residual <= tolerance
    int instances = 0;
    std::string note;
};

struct VerifyOptions {
    double tol = 1e-8;             // algebraic and series identities
    double restricted_tol = 1e-10;  // killed-walk identities, relative to max |L_bar^{-1}|
    double fd_step = 1e-4;
    long walks = 100000;
    double sigma_limit = 3.0;
    std::uint64_t seed = 20240917;
    int subgraph_samples = 20;
    int max_tuples = 200;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    const CheckResult& find(const std::string& name) const;
};

/// Runs every identity and bound check on one problem.
VerifyReport verify_problem(const FlowProblem& problem, const VerifyOptions& opts = {});

Json to_json(const VerifyReport& report);

/// Connected vertex sets grown by random frontier expansion, with sizes
/// drawn uniformly from [min_size, n]. Returned as induced subgraphs.
std::vector<Subgraph> sample_connected_subgraphs(const DirectedGraph& g, int count, int min_size, Rng& rng);

/// A balanced direction with unit norm, uniform entries before centring.
Vector random_direction(int n, Rng& rng);

}  // namespace localflow
