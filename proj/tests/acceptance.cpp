// Acceptance run: one PASS/FAIL line per criterion, indented notes below it.
// usage: acceptance <path to localflow CLI> <fixtures directory>

#include "localflow/analysis.hpp"
#include "localflow/errors.hpp"
#include "localflow/experiments.hpp"
#include "localflow/solver.hpp"
#include "localflow/spectral.hpp"
#include "localflow/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace localflow;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kFdStep = 1e-4;
constexpr double kFdTolQuadratic = 1e-6;
constexpr double kFdTolLogCosh = 1e-4;
constexpr double kFdTimeLimit = 60.0;
constexpr double kFtcTol = 1e-6;
constexpr double kGreenTol = 1e-8;
constexpr double kRestrictedTol = 1e-10;
constexpr long kWalks = 100000;
constexpr double kSigmas = 3.0;
constexpr double kHandTol = 1e-12;
constexpr double kRateSlack = 0.05;
constexpr double kEpsilon = 1e-3;
constexpr double kFamilyMu = 2.9;
constexpr double kDimFreeTimeLimit = 300.0;
constexpr double kSpectralTol = 1e-10;
constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SensitivityOperator operator_of(const FlowProblem& p) { return sensitivity_operator(p, solve_exact(p)); }

/// Dipoles at a spread of vertices plus one dense direction.
std::vector<Vector> probe_perturbations(const DirectedGraph& g, Rng& rng) {
    const int n = g.num_vertices();
    std::vector<Vector> out;
    for (Vertex v : {0, n / 3, (2 * n) / 3, n - 1}) {
        Vector p = Vector::Zero(n);
        p(v) = 1.0;
        p(g.neighbors(v).front()) = -1.0;
        out.push_back(p);
    }
    out.push_back(random_direction(n, rng));
    return out;
}

double localized_norm(const Vector& edge_values, std::span<const EdgeIndex> edges) {
    double s = 0.0;
    for (EdgeIndex e : edges) s += edge_values(e) * edge_values(e);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

Outcome sensitivity_fd() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(kSeed);
    double worst_q = 0.0, worst_l = 0.0;
    int instances = 0;
    for (const CorpusProblem& c : full_corpus()) {
        ++instances;
        const FlowProblem& p = c.problem;
        const SensitivityOperator s = operator_of(p);
        for (int k = 0; k < 5; ++k) {
            const Vector dir = random_direction(p.graph().num_vertices(), rng);
            const Vector sp = directional_derivative(s, dir);
            const Vector xp = solve_exact(p.with_external_flow(p.external_flow() + kFdStep * dir), 1e-13).x;
            const Vector xm = solve_exact(p.with_external_flow(p.external_flow() - kFdStep * dir), 1e-13).x;
            const double rel = ((xp - xm) / (2.0 * kFdStep) - sp).norm() / std::max(sp.norm(), 1e-300);
            (c.family == CostFamily::kQuadratic ? worst_q : worst_l) =
                std::max(c.family == CostFamily::kQuadratic ? worst_q : worst_l, rel);
        }
    }
    const double elapsed = seconds_since(t0);
    o.pass = instances >= 24 && worst_q <= kFdTolQuadratic && worst_l <= kFdTolLogCosh && elapsed < kFdTimeLimit;
    o.detail = "max rel err " + sci(worst_q) + " quadratic (tol " + sci(kFdTolQuadratic) + "), " + sci(worst_l) +
               " log-cosh (tol " + sci(kFdTolLogCosh) + "), " + std::to_string(instances) +
               " instances x 5 directions, h = " + sci(kFdStep) + ", " + fmt("%.2f", elapsed) + " s (limit 60 s)";
    return o;
}

Outcome finite_perturbation_identity() {
    Outcome o;
    Rng rng(kSeed + 1);
    double worst = 0.0;
    int runs = 0;
    for (const CorpusProblem& c : corpus(CostFamily::kLogCosh)) {
        const FlowProblem& p = c.problem;
        for (double scale : {0.5, 2.0, 5.0}) {
            const Vector pert = scale * random_direction(p.graph().num_vertices(), rng);
            const QuadratureResult q = finite_perturbation(p, pert, 1e-10);
            const Vector diff = solve_exact(p.with_external_flow(p.external_flow() + pert), 1e-13).x -
                                solve_exact(p, 1e-13).x;
            worst = std::max(worst, (q.delta - diff).norm() / pert.norm());
            ++runs;
        }
    }
    o.pass = worst <= kFtcTol;
    o.detail = "max ||int S p - dx*|| / ||p|| = " + sci(worst) + " (tol " + sci(kFtcTol) + ") over " +
               std::to_string(runs) + " log-cosh runs, ||p|| in {0.5, 2, 5}";
    return o;
}

Outcome walk_identities() {
    Outcome o;
    Rng rng(kSeed + 2);
    double green = 0.0, restricted = 0.0;
    long tuples = 0;
    int contractive = 0, skipped = 0;
    for (const CorpusProblem& c : full_corpus()) {
        const SensitivityOperator s = operator_of(c.problem);
        const WalkData w = walk_data(s);
        const int n = c.problem.graph().num_vertices();
        if (w.contractive()) {
            ++contractive;
            auto check = [&](Vertex a, Vertex b, Vertex cc, Vertex d) {
                const GreenDifference gd = green_difference(s, w, a, b, cc, d);
                green = std::max(green, std::abs(gd.via_pinv - gd.via_series));
                ++tuples;
            };
            if (n <= 8) {
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int cc = 0; cc < n; ++cc)
                            for (int d = 0; d < n; ++d) check(a, b, cc, d);
            } else {
                for (int k = 0; k < 300; ++k)
                    check(static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)),
                          static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)));
            }
        } else {
            ++skipped;
        }
        for (Vertex z : {0, n / 2, n - 1}) {
            const KilledWalkData k = killed_walk(s, z);
            restricted = std::max(restricted, (killed_green_neumann(k) - k.green).cwiseAbs().maxCoeff());
            restricted = std::max(restricted, (pinv_via_restricted(s, z) - k.green).cwiseAbs().maxCoeff());
            restricted =
                std::max(restricted, (k.restricted_laplacian.fullPivLu().inverse() - k.green).cwiseAbs().maxCoeff());
        }
    }

    // Monte Carlo against the closed forms
    struct McCase {
        std::string name;
        FlowProblem problem;
        Vertex z, start, target;
    };
    const std::vector<McCase> mc{
        {"triangle", unit_quadratic(triangle(), Vector::Zero(3)), 2, 1, 1},
        {"triangle", unit_quadratic(triangle(), Vector::Zero(3)), 2, 0, 1},
        {"grid-4x4/logcosh", random_costs(grid_graph(4, 4), CostFamily::kLogCosh, 31), 15, 0, 5},
        {"cycle-13/quadratic", random_costs(cycle_graph(13), CostFamily::kQuadratic, 32), 6, 0, 11},
        {"regular3-20/logcosh", random_costs(random_regular_graph(20, 3, 11), CostFamily::kLogCosh, 33), 19, 0, 7},
    };
    double worst_z = 0.0;
    std::uint64_t seed = kSeed;
    for (const McCase& m : mc) {
        const SensitivityOperator s = operator_of(m.problem);
        const KilledWalkData k = killed_walk(s, m.z);
        const KilledWalkEstimate est = simulate_killed_walk(walk_data(s), m.z, m.start, m.target, kWalks, seed++);
        auto zscore = [](double est_v, double exact, double se) {
            if (se > 0.0) return std::abs(est_v - exact) / se;
            return est_v == exact ? 0.0 : std::numeric_limits<double>::infinity();
        };
        worst_z = std::max(worst_z, zscore(est.hit_probability, hitting_probability(k, m.start, m.target), est.hit_stderr));
        worst_z = std::max(worst_z, zscore(est.mean_visits, expected_visits(k, m.start, m.target), est.visits_stderr));
    }

    // hand values on the unit triangle
    const SensitivityOperator tri = operator_of(unit_quadratic(triangle(), Vector::Zero(3)));
    const WalkData tw = walk_data(tri);
    const GreenDifference g23 = green_difference(tri, tw, 0, 1, 0, 1);
    const KilledWalkData tk = killed_walk(tri, 2);
    const double e_hit = std::abs(hitting_probability(tk, 0, 1) - 0.5);
    const double e_visits = std::abs(expected_visits(tk, 1, 1) - 4.0 / 3.0);
    const bool hand = std::abs(g23.via_pinv - 2.0 / 3.0) <= kHandTol && std::abs(g23.via_series - 2.0 / 3.0) <= kGreenTol &&
                      e_hit <= kHandTol && e_visits <= kHandTol;

    o.pass = green <= kGreenTol && restricted <= kRestrictedTol && worst_z <= kSigmas && hand && contractive > 0;
    o.detail = "green diff " + sci(green) + " (tol " + sci(kGreenTol) + ", " + std::to_string(tuples) + " tuples on " +
               std::to_string(contractive) + " contractive instances), restricted " + sci(restricted) + " (tol " +
               sci(kRestrictedTol) + "), MC max " + fmt("%.2f", worst_z) + " sigma (limit 3, " +
               std::to_string(mc.size()) + " cases x 1e5 walks), triangle 2/3, 1/2, 4/3 " + (hand ? "ok" : "WRONG");
    o.notes.push_back(std::to_string(skipped) + " instances have lambda = 1 (bipartite); series checks skipped there");
    return o;
}

/// smallest r with norm(d) <= norm(0) r^d for every d >= 1. Norms under
/// 1e-14 norm(0) are solver rounding and count as zero.
double empirical_rate(const std::vector<double>& norms) {
    double rate = 0.0;
    for (std::size_t d = 1; d < norms.size(); ++d) {
        if (norms[d] <= 1e-14 * norms[0]) continue;
        rate = std::max(rate, std::pow(norms[d] / norms[0], 1.0 / static_cast<double>(d)));
    }
    return rate;
}

/// ||S p|| on the edges with both endpoints at distance >= d from Z, for d = 0, 1, ...
std::vector<double> decay_profile(const FlowProblem& p, const Vector& pert) {
    const DirectedGraph& g = p.graph();
    const Vector sp = directional_derivative(operator_of(p), pert);
    const std::vector<Vertex> z = support(pert);
    const std::vector<int> dist = distances_from_set(g, z);
    const int far = *std::max_element(dist.begin(), dist.end());
    std::vector<double> out;
    for (int d = 0; d < far; ++d) {
        double s = 0.0;
        for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
            const Arc& a = g.edge(e);
            if (dist[static_cast<std::size_t>(a.tail)] >= d && dist[static_cast<std::size_t>(a.head)] >= d)
                s += sp(e) * sp(e);
        }
        out.push_back(std::sqrt(s));
    }
    return out;
}

Outcome decay_bound_check() {
    Outcome o;
    Rng rng(kSeed + 3);
    long pairs = 0, conservative_pairs = 0;
    double worst_ratio = 0.0, worst_cons = 0.0;
    int skipped = 0;
    for (const CorpusProblem& c : full_corpus()) {
        const FlowProblem& p = c.problem;
        const DirectedGraph& g = p.graph();
        const SensitivityOperator s = operator_of(p);
        const WalkData w = walk_data(s);
        if (!w.contractive()) {
            // lambda = 1 makes rho >= 1 as well (interlacing with V' = V), so neither mode says anything
            ++skipped;
            continue;
        }
        const double mu = adjacency_spectrum(g).mu;
        std::vector<Subgraph> subs;
        const int n = g.num_vertices();
        for (Vertex centre : {0, n / 2, n - 1})
            for (int r = 0; r <= g.eccentricity(centre); ++r) subs.push_back(ball(g, centre, r));
        for (Subgraph& sub : sample_connected_subgraphs(g, 20, 2, rng)) subs.push_back(std::move(sub));
        for (const Vector& pert : probe_perturbations(g, rng)) {
            const Vector sp = directional_derivative(s, pert);
            const std::vector<Vertex> z = support(pert);
            for (const Subgraph& sub : subs) {
                const DecayBound b = decay_bound(s, w, mu, sub, z, pert.norm(), p.alpha(), p.beta());
                const double measured = localized_norm(sp, sub.edges());
                worst_ratio = std::max(worst_ratio, measured / b.at_b);
                ++pairs;
                if (b.conservative_valid) {
                    worst_cons = std::max(worst_cons, measured / b.conservative);
                    ++conservative_pairs;
                }
            }
        }
    }

    // path of length 30, dipole at one end
    const FlowProblem path = unit_quadratic(path_graph(31), Vector::Zero(31));
    const std::vector<double> path_norms = decay_profile(path, dipole(31, 0, 1));
    const double path_lambda = walk_data(operator_of(path)).lambda;
    const double path_rate = empirical_rate(path_norms);
    const bool path_ok = path_rate <= path_lambda + kRateSlack;

    o.pass = worst_ratio <= 1.0 && worst_cons <= 1.0 && path_ok && pairs > 0;
    o.detail = "max measured/bound " + fmt("%.3f", worst_ratio) + " at b over " + std::to_string(pairs) +
               " (subgraph, perturbation) pairs, " + fmt("%.3f", worst_cons) + " conservative over " +
               std::to_string(conservative_pairs) + "; path-30 rate " + fmt("%.3f", path_rate) + " <= lambda + 0.05 = " +
               fmt("%.3f", path_lambda + kRateSlack);
    o.notes.push_back(std::to_string(skipped) + " bipartite instances skipped (lambda = 1, bound void)");
    o.notes.push_back("path-30 is a tree: the response to a dipole is confined to its own edge, so the rate is " +
                      fmt("%.3g", path_rate) + " while lambda = " + fmt("%.3f", path_lambda));

    // diagnostics with genuine geometric decay (not part of the criterion)
    for (const auto& [name, g] : std::vector<std::pair<std::string, std::shared_ptr<const DirectedGraph>>>{
             {"cycle-31", cycle_graph(31)}, {"regular3-200", random_regular_graph(200, 3, 7)}}) {
        const FlowProblem q = unit_quadratic(g, Vector::Zero(g->num_vertices()));
        const std::vector<double> norms = decay_profile(q, dipole(g->num_vertices(), 0, g->neighbors(0).front()));
        o.notes.push_back("diagnostic " + name + ": rate " + fmt("%.3f", empirical_rate(norms)) + ", lambda " +
                          fmt("%.3f", walk_data(operator_of(q)).lambda) + ", profile depth " +
                          std::to_string(norms.size()));
    }
    return o;
}

Outcome bias_variance_check() {
    Outcome o;
    long runs = 0;
    double worst_bias = 0.0, worst_var = 0.0, worst_tri = 0.0;
    for (int n : {50, 100, 200})
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto g = random_regular_graph(n, 3, seed);
            const FlowProblem p = unit_quadratic(g, random_balanced_flow(n, seed + 1000));
            const Solution s = solve_exact(p);
            const Vector pert = anchored_perturbation(*g, 0);
            for (int r = 1; r <= 5; ++r)
                for (int t : {0, 1, 5, 20}) {
                    const ErrorReport rep = measure_decomposition(p, s, pert, ball(*g, 0, r), t);
                    if (!rep.guarantee) {
                        o.pass = false;
                        o.notes.push_back("rho = " + fmt("%.4f", rep.rho) + " >= 1 on n = " + std::to_string(n));
                        continue;
                    }
                    worst_bias = std::max(worst_bias, rep.bias_measured / rep.bias_bound);
                    worst_var = std::max(worst_var, rep.variance_measured / rep.variance_bound);
                    worst_tri = std::max(worst_tri, rep.error_measured - rep.bias_measured - rep.variance_measured);
                    ++runs;
                }
        }

    // global PGD contraction from 20 random starts, t <= 200
    Rng rng(kSeed + 4);
    double worst_contraction = 0.0;
    for (const CorpusProblem& c : full_corpus()) {
        const FlowProblem& p = c.problem;
        const Vector xs = solve_exact(p).x;
        const ProjectedGradientDescent pgd(p);
        const double q = p.condition_number();
        for (int start = 0; start < 20; ++start) {
            Vector x = xs + 2.0 * random_direction(p.graph().num_edges(), rng);
            const double d0 = (x - xs).norm();
            for (int t = 1; t <= 200; ++t) {
                x = pgd.step(x);
                const double excess = (x - xs).norm() - std::exp(-t / (2.0 * q)) * d0;
                worst_contraction = std::max(worst_contraction, excess);
            }
        }
    }
    o.pass = o.pass && worst_bias <= 1.0 && worst_var <= 1.0 && worst_tri <= 1e-10 && worst_contraction <= 1e-12;
    o.detail = "max bias/bound " + fmt("%.3g", worst_bias) + ", variance/bound " + fmt("%.3g", worst_var) + " over " +
               std::to_string(runs) + " runs (n in {50,100,200} x 3 seeds, r 1..5, t {0,1,5,20}); PGD excess over e^{-t/2Q} " +
               sci(worst_contraction) + " (26 instances x 20 starts x 200 steps)";
    return o;
}

Outcome dimension_free() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const BoundParams family{1.0, 3, 3, kFamilyMu};
    const int z = 1;  // the anchored dipole sits within distance 1 of its anchor
    double worst_error = 0.0, worst_mu = 0.0;
    int empirical_r = 0, global_runs = 0;
    std::vector<std::pair<int, int>> tuned;
    for (int n : {50, 100, 200})
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto g = random_regular_graph(n, 3, seed);
            const double mu = adjacency_spectrum(*g).mu;
            worst_mu = std::max(worst_mu, mu);
            const FlowProblem p = unit_quadratic(g, random_balanced_flow(n, seed + 2000));
            const Solution s = solve_exact(p);
            const Vector pert = anchored_perturbation(*g, 0);
            const TuningResult tr = tune(kEpsilon, pert.norm(), family, z, *g, 0);
            tuned.emplace_back(tr.radius, tr.iterations);
            const ErrorReport rep =
                measure_decomposition(p, s, pert, ball(*g, 0, tr.radius), tr.iterations, {}, family);
            worst_error = std::max(worst_error, rep.error_measured);
            global_runs += rep.is_global ? 1 : 0;
            // smallest radius that would already have done, at the tuned t
            int r = z;
            while (measure_decomposition(p, s, pert, ball(*g, 0, r), tr.iterations, {}, family).error_measured >
                   kEpsilon)
                ++r;
            empirical_r = std::max(empirical_r, r);
        }
    const bool constant = std::all_of(tuned.begin(), tuned.end(), [&](const auto& rt) { return rt == tuned.front(); });
    const double elapsed = seconds_since(t0);
    o.pass = constant && worst_error <= kEpsilon && worst_mu <= kFamilyMu && elapsed < kDimFreeTimeLimit;
    o.detail = "tuned (r, t) = (" + std::to_string(tuned.front().first) + ", " + std::to_string(tuned.front().second) +
               ") " + (constant ? "for every n" : "VARIES with n") + ", max error " + sci(worst_error) + " <= eps " +
               sci(kEpsilon) + " over 15 runs, " + fmt("%.2f", elapsed) + " s (limit 300 s)";
    o.notes.push_back("family constant mu = " + fmt("%.2f", kFamilyMu) + " (largest instance mu " +
                      fmt("%.3f", worst_mu) + "), rho = " + fmt("%.4f", family.rho()) +
                      "; the tuned ball is the whole graph in " + std::to_string(global_runs) +
                      " of 15 runs, where bias is zero by construction");
    o.notes.push_back("empirical smallest radius reaching eps at the tuned t: " + std::to_string(empirical_r));
    return o;
}

Outcome interlacing_check() {
    Outcome o;
    Rng rng(kSeed + 5);
    double worst_interval = 0.0, worst_rho = -std::numeric_limits<double>::infinity();
    long subgraphs = 0, free_violations = 0;
    for (const CorpusProblem& c : full_corpus()) {
        const FlowProblem& p = c.problem;
        const DirectedGraph& g = p.graph();
        const SensitivityOperator s = operator_of(p);
        const double wm = s.sigma.minCoeff();
        const double wp = s.sigma.maxCoeff();
        const AdjacencySpectrum adj = adjacency_spectrum(g);
        const double rho = interlacing_bound(g.min_degree(), g.max_degree(), wm, wp, adj.mu);
        for (const Subgraph& sub : sample_connected_subgraphs(g, 20, 2, rng)) {
            const auto m = static_cast<int>(sub.vertices().size());
            const InterlacingInterval iv = interlacing_interval(adj.eigenvalues, m, g.min_degree(), g.max_degree(), wm, wp);
            const Vector ev = subgraph_walk_spectrum(s.weights, sub, SubgraphWalk::kKilled);
            for (int i = 0; i < m; ++i)
                worst_interval = std::max({worst_interval, iv.lower(i) - ev(i), ev(i) - iv.upper(i)});
            worst_rho = std::max(worst_rho, second_largest_magnitude(ev) - rho);
            const Vector fv = subgraph_walk_spectrum(s.weights, sub, SubgraphWalk::kFree);
            bool out = second_largest_magnitude(fv) > rho + kSpectralTol;
            for (int i = 0; i < m; ++i) out = out || fv(i) < iv.lower(i) - kSpectralTol || fv(i) > iv.upper(i) + kSpectralTol;
            free_violations += out ? 1 : 0;
            ++subgraphs;
        }
    }
    o.pass = worst_interval <= kSpectralTol && worst_rho <= kSpectralTol;
    o.detail = "largest excursion outside the interval " + sci(std::max(worst_interval, 0.0)) + ", max(lambda' - rho) " +
               fmt("%.3f", worst_rho) + " (tol " + sci(kSpectralTol) + ") over " + std::to_string(subgraphs) +
               " induced subgraphs, 20 per instance";
    o.notes.push_back("subgraph walk normalised by full-graph degrees (killed walk); with degrees counted inside the "
                      "subgraph only, " + std::to_string(free_violations) + " of " + std::to_string(subgraphs) +
                      " samples leave the interval or exceed rho");
    return o;
}

int run_status(const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return raw != -1 && WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_check(const std::string& cli, const std::string& fixture_dir) {
    Outcome o;
    std::vector<fs::path> fixtures;
    for (const auto& entry : fs::directory_iterator(fixture_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") fixtures.push_back(entry.path());
    std::sort(fixtures.begin(), fixtures.end());
    int ok = 0;
    for (const fs::path& f : fixtures) {
        const int code = run_status("'" + cli + "' verify '" + f.string() + "' -o /dev/null");
        if (code == 0) ++ok;
        else o.notes.push_back("verify " + f.filename().string() + " exited " + std::to_string(code));
    }
    const fs::path tmp = fs::temp_directory_path() / ("localflow_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(tmp);
    const fs::path a = tmp / "sweep_a.csv", b = tmp / "sweep_b.csv";
    const int ca = run_status("'" + cli + "' sweep --seed 20240917 -o '" + a.string() + "'");
    const int cb = run_status("'" + cli + "' sweep --seed 20240917 -o '" + b.string() + "'");
    const std::string sa = slurp(a), sb = slurp(b);
    const bool identical = ca == 0 && cb == 0 && !sa.empty() && sa == sb;
    fs::remove_all(tmp);
    o.pass = !fixtures.empty() && ok == static_cast<int>(fixtures.size()) && identical;
    o.detail = "verify exit 0 on " + std::to_string(ok) + "/" + std::to_string(fixtures.size()) + " fixtures; sweep " +
               (identical ? "byte-identical" : "DIFFERS") + " across two runs (" + std::to_string(sa.size()) + " bytes)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <localflow cli> <fixtures dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string fixture_dir = argv[2];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sensitivity matches finite differences", sensitivity_fd},
        {"finite perturbation integral", finite_perturbation_identity},
        {"Green function and killed-walk identities", walk_identities},
        {"decay of correlation bound", decay_bound_check},
        {"bias and variance bounds, PGD contraction", bias_variance_check},
        {"dimension-free tuning", dimension_free},
        {"eigenvalue interlacing", interlacing_check},
        {"CLI verify and sweep reproducibility", [&] { return cli_check(cli, fixture_dir); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << "  " << criteria[i].first << " | " << o.detail
                  << '\n';
        for (const std::string& n : o.notes) std::cout << "        " << n << '\n';
        std::cout.flush();
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
