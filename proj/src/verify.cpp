#include "localflow/verify.hpp"

#include "localflow/errors.hpp"
#include "localflow/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace localflow {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::kPass: return "pass";
        case CheckStatus::kFail: return "fail";
        case CheckStatus::kSkipped: return "skipped";
        case CheckStatus::kInfo: return "info";
    }
    return "unknown";
}

bool VerifyReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::kFail; });
}

const CheckResult& VerifyReport::find(const std::string& name) const {
    for (const CheckResult& c : checks)
        if (c.name == name) return c;
    throw InvalidInput("no check named '" + name + "'");
}

Json to_json(const VerifyReport& report) {
    Json out;
    out["passed"] = report.passed();
    Json checks = Json::array();
    for (const CheckResult& c : report.checks) {
        Json j;
        j["name"] = c.name;
        j["status"] = to_string(c.status);
        j["residual"] = number_to_json(c.residual);
        j["tolerance"] = c.tolerance;
        j["instances"] = c.instances;
        if (!c.note.empty()) j["note"] = c.note;
        checks.push_back(std::move(j));
    }
    out["checks"] = std::move(checks);
    return out;
}

Vector random_direction(int n, Rng& rng) {
    if (n < 2) throw InvalidInput("a balanced direction needs two vertices");
    Vector p(n);
    for (int v = 0; v < n; ++v) p(v) = rng.uniform(-1.0, 1.0);
    p.array() -= p.mean();
    return p / p.norm();
}

std::vector<Subgraph> sample_connected_subgraphs(const DirectedGraph& g, int count, int min_size, Rng& rng) {
    const int n = g.num_vertices();
    min_size = std::clamp(min_size, 1, n);
    std::vector<Subgraph> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int s = 0; s < count; ++s) {
        const int size = min_size + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - min_size + 1)));
        std::vector<bool> taken(static_cast<std::size_t>(n), false);
        std::vector<Vertex> chosen{static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)))};
        taken[static_cast<std::size_t>(chosen[0])] = true;
        std::vector<Vertex> frontier;
        auto extend = [&](Vertex v) {
            for (Vertex w : g.neighbors(v))
                if (!taken[static_cast<std::size_t>(w)]) frontier.push_back(w);
        };
        extend(chosen[0]);
        while (static_cast<int>(chosen.size()) < size) {
            // frontier may hold stale or repeated entries
            const auto pick = static_cast<std::size_t>(rng.below(frontier.size()));
            const Vertex v = frontier[pick];
            frontier[pick] = frontier.back();
            frontier.pop_back();
            if (taken[static_cast<std::size_t>(v)]) continue;
            taken[static_cast<std::size_t>(v)] = true;
            chosen.push_back(v);
            extend(v);
        }
        out.push_back(Subgraph::induced(g, std::move(chosen)));
    }
    return out;
}

namespace {

void settle(CheckResult& c) {
    if (c.status == CheckStatus::kSkipped || c.status == CheckStatus::kInfo) return;
    c.status = (std::isfinite(c.residual) && c.residual <= c.tolerance) ? CheckStatus::kPass : CheckStatus::kFail;
}

CheckResult skipped(std::string name, double tolerance, std::string note) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::kSkipped;
    c.tolerance = tolerance;
    c.note = std::move(note);
    return c;
}

std::string lambda_note(double lambda) { return "lambda = " + std::to_string(lambda) + " (walk not contractive)"; }

double ratio(double measured, double bound) {
    if (bound > 0.0) return measured / bound;
    return measured > 1e-14 ? std::numeric_limits<double>::infinity() : 0.0;
}

struct Context {
    const FlowProblem& problem;
    const DirectedGraph& g;
    const VerifyOptions& opts;
    Solution solution;
    SensitivityOperator s;
    WalkData walk;
};

CheckResult check_kkt(const Context& ctx) {
    CheckResult c{"kkt", CheckStatus::kPass, 0.0, ctx.opts.tol, 1, ""};
    const double scale = std::max(1.0, ctx.problem.external_flow().norm());
    c.residual = std::max(ctx.solution.residual, ctx.solution.stationarity) / scale;
    settle(c);
    return c;
}

CheckResult check_laplacian(const Context& ctx) {
    CheckResult c{"laplacian_factorization", CheckStatus::kPass, 0.0, 1e-12, 1, "A Sigma A^T against Deg - W"};
    const Matrix& a = ctx.problem.incidence();
    const Matrix l = a * ctx.s.sigma.asDiagonal() * a.transpose();
    const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    c.residual = (l - ctx.s.laplacian).cwiseAbs().maxCoeff() / scale;
    settle(c);
    return c;
}

CheckResult check_pseudoinverse(const Context& ctx) {
    CheckResult c{"pseudoinverse", CheckStatus::kPass, 0.0, ctx.opts.tol, 1, "Moore-Penrose conditions and L^+ 1 = 0"};
    const Matrix& l = ctx.s.laplacian;
    const Matrix& p = ctx.s.laplacian_pinv;
    const double ls = std::max(1.0, l.cwiseAbs().maxCoeff());
    const double ps = std::max(1.0, p.cwiseAbs().maxCoeff());
    c.residual = std::max({(l * p * l - l).cwiseAbs().maxCoeff() / ls, (p * l * p - p).cwiseAbs().maxCoeff() / ps,
                           (p - p.transpose()).cwiseAbs().maxCoeff() / ps,
                           (p * Vector::Ones(l.rows())).cwiseAbs().maxCoeff() / ps});
    settle(c);
    return c;
}

CheckResult check_finite_difference(const Context& ctx, Rng& rng) {
    const bool quadratic = ctx.problem.all_quadratic();
    CheckResult c{"sensitivity_finite_difference", CheckStatus::kPass, 0.0, quadratic ? 1e-6 : 1e-4, 0,
                  "central differences of solve_exact against S p"};
    const double h = ctx.opts.fd_step;
    const Vector& b = ctx.problem.external_flow();
    for (int k = 0; k < 3; ++k) {
        const Vector p = random_direction(ctx.g.num_vertices(), rng);
        const Vector xp = solve_exact(ctx.problem.with_external_flow(b + h * p), 1e-13).x;
        const Vector xm = solve_exact(ctx.problem.with_external_flow(b - h * p), 1e-13).x;
        const Vector fd = (xp - xm) / (2.0 * h);
        const Vector exact = directional_derivative(ctx.s, p);
        c.residual = std::max(c.residual, (fd - exact).norm() / std::max(exact.norm(), 1e-300));
        ++c.instances;
    }
    settle(c);
    return c;
}

CheckResult check_finite_perturbation(const Context& ctx, Rng& rng) {
    CheckResult c{"finite_perturbation", CheckStatus::kPass, 0.0, 1e-6, 0,
                  "integral of S(b + eps p) p against x*(b + p) - x*(b), relative to ||p||"};
    for (int k = 0; k < 2; ++k) {
        const Vector p = random_direction(ctx.g.num_vertices(), rng);
        const QuadratureResult q = finite_perturbation(ctx.problem, p, 1e-9);
        const Vector delta =
            solve_exact(ctx.problem.with_external_flow(ctx.problem.external_flow() + p), 1e-13).x - ctx.solution.x;
        c.residual = std::max(c.residual, (q.delta - delta).norm() / p.norm());
        ++c.instances;
    }
    settle(c);
    return c;
}

std::vector<std::array<Vertex, 4>> tuples(const Context& ctx, Rng& rng) {
    const int n = ctx.g.num_vertices();
    std::vector<std::array<Vertex, 4>> out;
    const long total = static_cast<long>(n) * n * n * n;
    if (total <= ctx.opts.max_tuples) {
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = 0; v < n; ++v)
                for (Vertex w = 0; w < n; ++w)
                    for (Vertex z = 0; z < n; ++z) out.push_back({u, v, w, z});
        return out;
    }
    const auto nn = static_cast<std::uint64_t>(n);
    for (int k = 0; k < ctx.opts.max_tuples; ++k)
        out.push_back({static_cast<Vertex>(rng.below(nn)), static_cast<Vertex>(rng.below(nn)),
                       static_cast<Vertex>(rng.below(nn)), static_cast<Vertex>(rng.below(nn))});
    return out;
}

std::vector<CheckResult> check_green(const Context& ctx, Rng& rng) {
    const double tol = ctx.opts.tol;
    if (!ctx.walk.contractive()) {
        return {skipped("green_difference", tol, lambda_note(ctx.walk.lambda)),
                skipped("green_difference_swapped", tol, lambda_note(ctx.walk.lambda)),
                skipped("green_sum_identity", tol, lambda_note(ctx.walk.lambda))};
    }
    CheckResult direct{"green_difference", CheckStatus::kPass, 0.0, tol, 0,
                       "(e_u - e_v)^T L^+ (e_w - e_z) against the truncated walk series"};
    CheckResult swapped{"green_difference_swapped", CheckStatus::kPass, 0.0, tol, 0,
                        "same identity with (u, v) and (w, z) exchanged"};
    const double tail_tol = tol * 1e-2;
    for (const auto& [u, v, w, z] : tuples(ctx, rng)) {
        const GreenDifference d = green_difference(ctx.s, ctx.walk, u, v, w, z, tail_tol);
        direct.residual = std::max(direct.residual, std::abs(d.via_pinv - d.via_series));
        ++direct.instances;
        const GreenDifference e = green_difference(ctx.s, ctx.walk, w, z, u, v, tail_tol);
        swapped.residual = std::max(swapped.residual, std::abs(d.via_pinv - e.via_series));
        ++swapped.instances;
    }
    settle(direct);
    settle(swapped);

    CheckResult sum{"green_sum_identity", CheckStatus::kPass, 0.0, tol, 0,
                    "(e_u - e_v)^T L^+ f against sum_t (e_u - e_v)^T P^t Deg^{-1} f for balanced f"};
    const int n = ctx.g.num_vertices();
    for (int k = 0; k < 20; ++k) {
        const Vector f = random_direction(n, rng);
        const auto u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
        const auto v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
        const double lhs = ctx.s.laplacian_pinv.row(u).dot(f) - ctx.s.laplacian_pinv.row(v).dot(f);
        const double rhs = green_series(ctx.walk, u, v, f.cwiseQuotient(ctx.walk.degrees), tail_tol).value;
        sum.residual = std::max(sum.residual, std::abs(lhs - rhs));
        ++sum.instances;
    }
    settle(sum);
    return {direct, swapped, sum};
}

std::vector<Vertex> absorbing_choices(const Context& ctx, Rng& rng) {
    const int n = ctx.g.num_vertices();
    std::vector<Vertex> out;
    if (n <= 10) {
        for (Vertex v = 0; v < n; ++v) out.push_back(v);
        return out;
    }
    std::set<Vertex> picked{0, n - 1};
    while (picked.size() < 5) picked.insert(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n))));
    return {picked.begin(), picked.end()};
}

std::vector<CheckResult> check_killed(const Context& ctx, Rng& rng) {
    const double tol = ctx.opts.restricted_tol;
    CheckResult neumann{"killed_green_neumann", CheckStatus::kPass, 0.0, tol, 0,
                        "L_bar^{-1} against (I - P_bar)^{-1} Deg_bar^{-1}"};
    CheckResult restricted{"pinv_via_restricted", CheckStatus::kPass, 0.0, tol, 0,
                           "L_bar^{-1} against (e_v - e_zbar)^T L^+ (e_w - e_zbar)"};
    CheckResult harmonic{"hitting_probability_harmonic", CheckStatus::kPass, 0.0, tol, 0,
                         "L_bar^{-1}_vw / L_bar^{-1}_ww against the harmonic-extension linear system"};
    const int n = ctx.g.num_vertices();
    for (Vertex z_bar : absorbing_choices(ctx, rng)) {
        const KilledWalkData k = killed_walk(ctx.s, z_bar);
        const double scale = std::max(1.0, k.green.cwiseAbs().maxCoeff());
        neumann.residual = std::max(neumann.residual, (killed_green_neumann(k) - k.green).cwiseAbs().maxCoeff() / scale);
        ++neumann.instances;
        restricted.residual =
            std::max(restricted.residual, (pinv_via_restricted(ctx.s, z_bar) - k.green).cwiseAbs().maxCoeff() / scale);
        ++restricted.instances;

        // h(x) = P_x(T_w < T_zbar): h(w) = 1, h(zbar) = 0, h = P h elsewhere.
        for (Vertex w : k.vertices) {
            Matrix m = Matrix::Identity(n, n) - ctx.walk.transition;
            Vector rhs = Vector::Zero(n);
            for (Vertex fixed : {w, z_bar}) {
                m.row(fixed).setZero();
                m(fixed, fixed) = 1.0;
            }
            rhs(w) = 1.0;
            const Vector h = m.partialPivLu().solve(rhs);
            for (Vertex v : k.vertices)
                harmonic.residual = std::max(harmonic.residual, std::abs(hitting_probability(k, v, w) - h(v)));
            ++harmonic.instances;
        }
    }
    settle(neumann);
    settle(restricted);
    settle(harmonic);
    return {neumann, restricted, harmonic};
}

CheckResult check_monte_carlo(const Context& ctx) {
    CheckResult c{"killed_walk_monte_carlo", CheckStatus::kPass, 0.0, ctx.opts.sigma_limit, 0,
                  "largest deviation of simulated hitting probability and visit count, in standard errors"};
    const int n = ctx.g.num_vertices();
    const Vertex z_bar = n - 1;
    const Vertex start = 0;
    Vertex target = start;
    for (Vertex w : ctx.g.neighbors(start)) {
        if (w != z_bar) {
            target = w;
            break;
        }
    }
    const KilledWalkData k = killed_walk(ctx.s, z_bar);
    const KilledWalkEstimate est = simulate_killed_walk(ctx.walk, z_bar, start, target, ctx.opts.walks, ctx.opts.seed);
    auto deviation = [](double estimate, double exact, double stderr_) {
        if (stderr_ > 0.0) return std::abs(estimate - exact) / stderr_;
        return std::abs(estimate - exact) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    c.residual = std::max(deviation(est.hit_probability, hitting_probability(k, start, target), est.hit_stderr),
                          deviation(est.mean_visits, expected_visits(k, start, target), est.visits_stderr));
    c.instances = 2;
    c.note += "; " + std::to_string(ctx.opts.walks) + " walks";
    settle(c);
    return c;
}

struct Probe {
    Subgraph sub;
    std::vector<Vertex> z_set;
    Vector p;
};

/// Balls around a few centres, each paired with a dipole at the far end of the graph.
std::vector<Probe> decay_probes(const Context& ctx) {
    const int n = ctx.g.num_vertices();
    std::set<Vertex> centres{0, n / 2, n - 1};
    std::vector<Probe> out;
    for (Vertex centre : centres) {
        const std::vector<int>& dist = ctx.g.distances_from(centre);
        const auto far = static_cast<Vertex>(std::max_element(dist.begin(), dist.end()) - dist.begin());
        const Vertex partner = ctx.g.neighbors(far).front();
        Vector p = Vector::Zero(n);
        p(far) = 1.0 / std::sqrt(2.0);
        p(partner) = -1.0 / std::sqrt(2.0);
        std::vector<Vertex> z_set{std::min(far, partner), std::max(far, partner)};
        for (int r = 0; r <= ctx.g.eccentricity(centre); ++r) out.push_back({ball(ctx.g, centre, r), z_set, p});
    }
    return out;
}

std::vector<CheckResult> check_decay(const Context& ctx, Rng& rng) {
    std::vector<CheckResult> out;
    const std::vector<Probe> probes = decay_probes(ctx);

    if (!ctx.walk.contractive()) {
        out.push_back(skipped("walk_sum_bound", 1.0, lambda_note(ctx.walk.lambda)));
    } else {
        CheckResult c{"walk_sum_bound", CheckStatus::kPass, 0.0, 1.0, 0,
                      "largest lhs / rhs of the localized walk-sum inequality"};
        for (const Probe& probe : probes) {
            Vector f = Vector::Zero(ctx.g.num_vertices());
            for (Vertex z : probe.z_set) f(z) = rng.uniform(-1.0, 1.0);
            const SpectralSumBound b = walk_sum_bound(ctx.walk, ctx.g, probe.sub.vertices(), probe.z_set, f);
            c.residual = std::max(c.residual, ratio(b.lhs, b.rhs));
            ++c.instances;
        }
        settle(c);
        out.push_back(c);
    }

    const double mu = adjacency_spectrum(ctx.g).mu;
    CheckResult at_b{"decay_bound_at_b", CheckStatus::kPass, 0.0, 1.0, 0,
                     "largest ||dx*/d eps||_F / bound, constants evaluated at b"};
    CheckResult cons{"decay_bound_conservative", CheckStatus::kPass, 0.0, 1.0, 0,
                     "largest ||dx*/d eps||_F / bound, weights bracketed by [1/beta, 1/alpha]"};
    DecayBound sample;
    bool contractive = ctx.walk.contractive();
    for (const Probe& probe : probes) {
        const Vector dx = directional_derivative(ctx.s, probe.p);
        const double measured = subset_norm(dx, probe.sub.edges());
        WalkData walk = ctx.walk;
        if (!contractive) walk.lambda = 0.0;  // only the conservative side is used below
        sample = decay_bound(ctx.s, walk, mu, probe.sub, probe.z_set, probe.p.norm(), ctx.problem.alpha(),
                             ctx.problem.beta());
        if (contractive) {
            at_b.residual = std::max(at_b.residual, ratio(measured, sample.at_b));
            ++at_b.instances;
        }
        if (sample.conservative_valid) {
            cons.residual = std::max(cons.residual, ratio(measured, sample.conservative));
            ++cons.instances;
        }
    }
    if (contractive) {
        settle(at_b);
        out.push_back(at_b);
    } else {
        out.push_back(skipped(at_b.name, 1.0, lambda_note(ctx.walk.lambda)));
    }
    if (!probes.empty() && sample.conservative_valid) {
        settle(cons);
        out.push_back(cons);
    } else {
        out.push_back(skipped(cons.name, 1.0, "rho = " + std::to_string(sample.rho) + " >= 1"));
    }
    return out;
}

std::vector<CheckResult> check_interlacing(const Context& ctx, Rng& rng) {
    const DirectedGraph& g = ctx.g;
    const AdjacencySpectrum adj = adjacency_spectrum(g);
    double w_minus = std::numeric_limits<double>::infinity();
    double w_plus = 0.0;
    for (Eigen::Index e = 0; e < ctx.s.sigma.size(); ++e) {
        w_minus = std::min(w_minus, ctx.s.sigma(e));
        w_plus = std::max(w_plus, ctx.s.sigma(e));
    }
    const double rho = interlacing_bound(g.min_degree(), g.max_degree(), w_minus, w_plus, adj.mu);

    CheckResult interval{"interlacing_interval", CheckStatus::kPass, 0.0, 1e-10, 0,
                         "largest excursion of a killed subgraph-walk eigenvalue outside its interval"};
    CheckResult bound{"interlacing_rho", CheckStatus::kPass, 0.0, 1e-10, 0,
                      "largest max(|lambda'_2|, |lambda'_m|) - rho over killed subgraph walks"};
    CheckResult free_walk{"interlacing_free_walk", CheckStatus::kInfo, 0.0, 1e-10, 0, ""};
    int free_violations = 0;
    for (const Subgraph& sub : sample_connected_subgraphs(g, ctx.opts.subgraph_samples, 2, rng)) {
        const auto m = static_cast<int>(sub.vertices().size());
        const InterlacingInterval iv =
            interlacing_interval(adj.eigenvalues, m, g.min_degree(), g.max_degree(), w_minus, w_plus);
        auto excursion = [&](const Vector& spectrum) {
            double worst = 0.0;
            for (int i = 0; i < m; ++i)
                worst = std::max({worst, iv.lower(i) - spectrum(i), spectrum(i) - iv.upper(i)});
            return worst;
        };
        const Vector killed = subgraph_walk_spectrum(ctx.s.weights, sub, SubgraphWalk::kKilled);
        interval.residual = std::max(interval.residual, excursion(killed));
        const double lambda_prime = std::max(std::abs(killed(1)), std::abs(killed(m - 1)));
        bound.residual = std::max(bound.residual, lambda_prime - rho);
        ++interval.instances;
        ++bound.instances;

        const Vector free = subgraph_walk_spectrum(ctx.s.weights, sub, SubgraphWalk::kFree);
        const double free_excursion = excursion(free);
        free_walk.residual = std::max(free_walk.residual, free_excursion);
        if (free_excursion > free_walk.tolerance) ++free_violations;
        ++free_walk.instances;
    }
    settle(interval);
    settle(bound);
    free_walk.note = "diagnostic: interval excursions when Deg' counts only subgraph edges; " +
                     std::to_string(free_violations) + " of " + std::to_string(free_walk.instances) +
                     " samples outside";
    return {interval, bound, free_walk};
}

}  // namespace

VerifyReport verify_problem(const FlowProblem& problem, const VerifyOptions& opts) {
    Context ctx{problem, problem.graph(), opts, solve_exact(problem), {}, {}};
    ctx.s = sensitivity_operator(problem, ctx.solution);
    ctx.walk = walk_data(ctx.s);
    Rng rng(opts.seed);

    VerifyReport report;
    auto add = [&report](std::vector<CheckResult> cs) {
        for (CheckResult& c : cs) report.checks.push_back(std::move(c));
    };
    add({check_kkt(ctx), check_laplacian(ctx), check_pseudoinverse(ctx)});
    if (ctx.g.num_vertices() >= 2) add({check_finite_difference(ctx, rng), check_finite_perturbation(ctx, rng)});
    add(check_green(ctx, rng));
    add(check_killed(ctx, rng));
    add({check_monte_carlo(ctx)});
    add(check_decay(ctx, rng));
    add(check_interlacing(ctx, rng));
    return report;
}

}  // namespace localflow
