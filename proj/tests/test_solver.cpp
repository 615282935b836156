#include "localflow/errors.hpp"
#include "localflow/solver.hpp"
#include "localflow/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace localflow;
using namespace fixtures;

TEST_CASE("affine projection") {
    SUBCASE("two nodes: the feasible set is a point") {
        const Matrix a = incidence_matrix(*two_node());
        CHECK(project_affine(a, vec({1, -1}), vec({3}))(0) == doctest::Approx(1.0));
    }
    SUBCASE("triangle from the origin gives the minimum-norm flow") {
        const Vector x = project_affine(incidence_matrix(*triangle()), vec({1, -1, 0}), Vector::Zero(3));
        CHECK(x(0) == doctest::Approx(2.0 / 3.0));
        CHECK(x(1) == doctest::Approx(-1.0 / 3.0));
        CHECK(x(2) == doctest::Approx(-1.0 / 3.0));
    }
    SUBCASE("unbalanced target") {
        CHECK_THROWS_AS(project_affine(incidence_matrix(*triangle()), vec({1, 0, 0}), Vector::Zero(3)), InvalidInput);
        const AffineProjector proj(incidence_matrix(*triangle()));
        CHECK_THROWS_AS(proj.project(Vector::Zero(2), vec({1, -1, 0})), InvalidInput);
    }
    SUBCASE("feasibility, idempotence, optimality, non-expansiveness") {
        Rng rng(3);
        for (const CorpusGraph& c : corpus_graphs()) {
            CAPTURE(c.name);
            const Matrix a = incidence_matrix(*c.graph);
            const AffineProjector proj(a);
            const int n = c.graph->num_vertices();
            const int m = c.graph->num_edges();
            const Vector b = random_balanced_flow(n, rng.below(1000));
            for (int k = 0; k < 5; ++k) {
                const Vector x = random_direction(m, rng) * 3.0;
                const Vector y = random_direction(m, rng) * 3.0;
                const Vector px = proj.project(x, b);
                const Vector py = proj.project(y, b);
                CHECK((a * px - b).norm() <= 1e-10);
                CHECK((proj.project(px, b) - px).norm() <= 1e-12);
                CHECK((px - project_affine(a, b, x)).norm() <= 1e-12);
                CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
                // x - px is orthogonal to the kernel of A, i.e. lies in the row space
                const Vector r = x - px;
                const Vector in_rowspace = a.transpose() * oracles::svd_pinv(a.transpose()) * r;
                CHECK((r - in_rowspace).norm() <= 1e-10 * std::max(1.0, r.norm()));
            }
        }
    }
}

TEST_CASE("projected gradient descent") {
    SUBCASE("step size") {
        const FlowProblem p = random_costs(triangle(), CostFamily::kLogCosh, 1);
        CHECK(step_size(p, {}) == doctest::Approx(1.0 / p.beta()));
        PGDConfig cfg;
        cfg.step = 0.25;
        CHECK(step_size(p, cfg) == 0.25);
        cfg.step = 0.0;
        CHECK_THROWS_AS(step_size(p, cfg), InvalidInput);
        cfg.step = std::nan("");
        CHECK_THROWS_AS(step_size(p, cfg), InvalidInput);
    }
    SUBCASE("unit quadratic: one step from anywhere") {
        const FlowProblem p = unit_quadratic(triangle(), vec({1, -1, 0}));
        const Vector x = pgd_step(p, {}, vec({5, -2, 7}));
        CHECK(x(0) == doctest::Approx(2.0 / 3.0));
        CHECK(x(1) == doctest::Approx(-1.0 / 3.0));
        CHECK(x(2) == doctest::Approx(-1.0 / 3.0));
    }
    SUBCASE("the optimum is a fixed point") {
        for (const CorpusProblem& c : full_corpus()) {
            CAPTURE(c.name);
            const Solution s = solve_exact(c.problem);
            CHECK((pgd_step(c.problem, {}, s.x) - s.x).norm() <= 1e-10);
        }
    }
    SUBCASE("solve reaches the optimum") {
        const FlowProblem p = random_costs(grid_graph(4, 4), CostFamily::kLogCosh, 3);
        const ProjectedGradientDescent pgd(p);
        const PGDRun run = pgd.solve(Vector::Zero(p.graph().num_edges()));
        CHECK(run.iterations < 1000);
        CHECK(run.trace.size() == static_cast<std::size_t>(run.iterations));
        CHECK((run.x - solve_exact(p).x).norm() <= 1e-9);
    }
    SUBCASE("contraction at rate exp(-t/2Q) from random starts") {
        Rng rng(17);
        for (const CorpusProblem& c : full_corpus()) {
            CAPTURE(c.name);
            const FlowProblem& p = c.problem;
            const Vector xs = solve_exact(p).x;
            const ProjectedGradientDescent pgd(p);
            const double q = p.condition_number();
            for (int start = 0; start < 20; ++start) {
                Vector x = xs + 2.0 * random_direction(p.graph().num_edges(), rng);
                const double d0 = (x - xs).norm();
                for (int t = 1; t <= 200; ++t) {
                    x = pgd.step(x);
                    const double bound = std::exp(-t / (2.0 * q)) * d0;
                    // iterates bottom out at rounding level
                    if (!((x - xs).norm() <= bound + 1e-12)) {
                        CHECK((x - xs).norm() <= bound + 1e-12);
                        break;
                    }
                }
            }
        }
    }
}

TEST_CASE("reduced external flow") {
    const FlowProblem p = unit_quadratic(triangle(), vec({1, -1, 0}));
    const Solution s = solve_exact(p);
    const Subgraph e1(p.graph(), {0, 1}, {0});
    SUBCASE("frozen flow is subtracted") {
        const Vector b_new = vec({1.5, -1.5, 0});
        const Vector bp = reduced_external_flow(p, e1, b_new, s.x);
        CHECK(bp(0) == doctest::Approx(1.5 + s.x(2)));
        CHECK(bp(1) == doctest::Approx(-1.5 - s.x(1)));
        CHECK(std::abs(bp.sum()) <= 1e-14);
    }
    SUBCASE("frozen edges inconsistent outside the subgraph") {
        CHECK_THROWS_AS(reduced_external_flow(p, e1, vec({1, -2, 1}), s.x), InvalidInput);
    }
    SUBCASE("reduced problem keeps the edge costs") {
        const FlowProblem big = random_costs(grid_graph(3, 3), CostFamily::kLogCosh, 8);
        const Subgraph sub = ball(big.graph(), 4, 1);
        const Solution sb = solve_exact(big);
        const Vector bp = reduced_external_flow(big, sub, big.external_flow(), sb.x);
        const FlowProblem red = reduced_problem(big, sub, bp);
        CHECK(red.graph().num_edges() == static_cast<int>(sub.edges().size()));
        for (int i = 0; i < red.graph().num_edges(); ++i) {
            const auto& a = std::get<LogCoshCost>(red.costs()[static_cast<std::size_t>(i)].params());
            const auto& b =
                std::get<LogCoshCost>(big.costs()[static_cast<std::size_t>(sub.edges()[static_cast<std::size_t>(i)])].params());
            CHECK(a.alpha == b.alpha);
            CHECK(a.beta == b.beta);
        }
        // without a perturbation the global optimum restricted to E' solves the reduced problem
        const Solution sr = solve_exact(red);
        for (int i = 0; i < red.graph().num_edges(); ++i)
            CHECK(sr.x(i) == doctest::Approx(sb.x(sub.edges()[static_cast<std::size_t>(i)])).epsilon(1e-9));
    }
}

TEST_CASE("localized gradient descent") {
    SUBCASE("whole graph matches the global step") {
        const FlowProblem p = random_costs(cycle_graph(9), CostFamily::kLogCosh, 2);
        const Subgraph whole = Subgraph::whole(p.graph());
        const Vector x = solve_exact(p).x;
        const Vector b_new = p.external_flow() + 0.3 * dipole(9, 0, 4);
        const FlowProblem pn = p.with_external_flow(b_new);
        CHECK((localized_step(p, whole, b_new, x) - pgd_step(pn, {}, x)).norm() <= 1e-12);
    }
    SUBCASE("no edges inside: identity") {
        const FlowProblem p = unit_quadratic(path_graph(4), dipole(4, 0, 3));
        const Subgraph single(p.graph(), {1}, {});
        const Vector x = solve_exact(p).x;
        const LocalizedGradientDescent lgd(p, single, p.external_flow(), x);
        CHECK(lgd.step(x) == x);
        CHECK(lgd.frozen_edges().size() == 3);
    }
    SUBCASE("triangle edge: one step reaches the frozen-boundary optimum") {
        const FlowProblem p = unit_quadratic(triangle(), vec({1, -1, 0}));
        const Solution s = solve_exact(p);
        const Subgraph e1(p.graph(), {0, 1}, {0});
        const Vector pert = vec({0.5, -0.5, 0});
        const LocalSolveResult r = local_resolve(p, s, pert, e1, 1);
        CHECK(r.x_hat(0) == doctest::Approx(7.0 / 6.0));
        CHECK(r.x_hat(1) == s.x(1));
        CHECK(r.x_hat(2) == s.x(2));
        CHECK(r.frozen_edges == std::vector<EdgeIndex>{1, 2});
        CHECK((p.incidence() * r.x_hat - p.external_flow() - pert).norm() <= 1e-14);
        // bias against the global re-solve x*(b+p) = 1.5 x*(b)
        CHECK((r.x_hat - 1.5 * s.x).norm() == doctest::Approx(std::sqrt(3.0) / 6.0));
    }
    SUBCASE("frozen coordinates are bit-identical, limit solves the reduced problem") {
        for (const CorpusProblem& c : full_corpus()) {
            CAPTURE(c.name);
            const FlowProblem& p = c.problem;
            const DirectedGraph& g = p.graph();
            const Solution s = solve_exact(p);
            const Vertex centre = g.num_vertices() / 2;
            const Subgraph sub = ball(g, centre, 1);
            const Vector pert = 0.7 * dipole(g.num_vertices(), centre, g.neighbors(centre).front());
            const Vector b_new = p.external_flow() + pert;
            const LocalizedGradientDescent lgd(p, sub, b_new, s.x);
            Vector x = s.x;
            bool frozen_ok = true;
            for (int t = 0; t < 600; ++t) {
                x = lgd.step(x);
                for (EdgeIndex e : lgd.frozen_edges()) frozen_ok = frozen_ok && x(e) == s.x(e);
            }
            CHECK(frozen_ok);
            CHECK(std::abs(lgd.reduced_flow().sum()) <= 1e-12);
            const Solution red = solve_exact(reduced_problem(p, sub, lgd.reduced_flow()));
            for (std::size_t i = 0; i < sub.edges().size(); ++i) CHECK(std::abs(x(sub.edges()[i]) - red.x(static_cast<Eigen::Index>(i))) <= 1e-8);
            CHECK((p.incidence() * x - b_new).norm() <= 1e-10);
        }
    }
}

TEST_CASE("local resolve") {
    const FlowProblem p = random_costs(grid_graph(5, 5), CostFamily::kQuadratic, 12);
    const Solution s = solve_exact(p);
    const Subgraph sub = ball(p.graph(), 12, 2);
    SUBCASE("zero perturbation leaves x*(b)") {
        const LocalSolveResult r = local_resolve(p, s, Vector::Zero(25), sub, 7);
        CHECK((r.x_hat - s.x).norm() <= 1e-12);
        CHECK(r.iterations == 7);
    }
    SUBCASE("whole graph converges to the global optimum") {
        const Vector pert = dipole(25, 0, 24);
        const LocalSolveResult r = local_resolve(p, s, pert, Subgraph::whole(p.graph()), 500);
        CHECK((r.x_hat - solve_exact(p.with_external_flow(p.external_flow() + pert)).x).norm() <= 1e-9);
        CHECK(r.frozen_edges.empty());
    }
    SUBCASE("input checks") {
        CHECK_THROWS_AS(local_resolve(p, s, dipole(25, 12, 0), sub, 1), InvalidInput);
        Vector bad = Vector::Zero(25);
        bad(12) = 1.0;
        CHECK_THROWS_AS(local_resolve(p, s, bad, sub, 1), InvalidInput);
    }
    SUBCASE("support") {
        CHECK(support(vec({0, 1e-3, 0, -2})) == std::vector<Vertex>{1, 3});
        CHECK(support(vec({0, 1e-3, 0, -2}), 1e-2) == std::vector<Vertex>{3});
    }
}
