#include "localflow/analysis.hpp"
#include "localflow/errors.hpp"
#include "localflow/experiments.hpp"
#include "localflow/generators.hpp"
#include "localflow/io.hpp"
#include "localflow/solver.hpp"
#include "localflow/spectral.hpp"
#include "localflow/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace localflow;

namespace {

// Subgraphs keep a raw pointer to their parent, so they are built per call
// and never handed to Python.
Subgraph make_subgraph(const FlowProblem& p, std::optional<std::vector<Vertex>> vertices, std::optional<Vertex> center,
                       std::optional<int> radius) {
    if (vertices) return Subgraph::induced(p.graph(), *vertices);
    if (center && radius) return ball(p.graph(), *center, *radius);
    if (!center && !radius) return Subgraph::whole(p.graph());
    throw InvalidInput("give either vertices, or both center and radius");
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_localflow, m) {
    m.doc() = "Sensitivity and localized re-solves for convex network flow";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
    py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());
    py::register_exception<NonContractiveWalk>(m, "NonContractiveWalk", error.ptr());
    py::register_exception<NoGuarantee>(m, "NoGuarantee", error.ptr());

    py::class_<CostModel>(m, "Cost")
        .def_static("quadratic", &CostModel::quadratic, py::arg("a") = 1.0, py::arg("c") = 0.0)
        .def_static("logcosh", &CostModel::logcosh, py::arg("alpha") = 1.0, py::arg("beta") = 2.0)
        .def("__call__", [](const CostModel& c, double x) { return c.eval(x).f; })
        .def("gradient", &CostModel::gradient)
        .def("curvature", &CostModel::curvature)
        .def("inverse_gradient", &CostModel::inverse_gradient)
        .def_property_readonly("alpha", &CostModel::alpha)
        .def_property_readonly("beta", &CostModel::beta)
        .def("__repr__", [](const CostModel& c) { return "Cost(" + cost_to_json(c).dump() + ")"; });

    py::class_<FlowProblem>(m, "Problem")
        .def(py::init([](int n, const std::vector<std::pair<Vertex, Vertex>>& arcs, const std::vector<CostModel>& costs,
                         const Vector& b) {
                 std::vector<Arc> a;
                 for (const auto& [t, h] : arcs) a.push_back({t, h});
                 return FlowProblem(std::make_shared<const DirectedGraph>(n, std::move(a)), costs, b);
             }),
             py::arg("num_vertices"), py::arg("arcs"), py::arg("costs"), py::arg("external_flow"))
        .def_static("from_dict", [](const py::object& doc) { return problem_from_json(from_python(doc)); })
        .def_static("load", &load_problem, py::arg("path"))
        .def("to_dict", [](const FlowProblem& p) { return to_python(problem_to_json(p)); })
        .def("with_external_flow", &FlowProblem::with_external_flow, py::arg("b"))
        .def_property_readonly("num_vertices", [](const FlowProblem& p) { return p.graph().num_vertices(); })
        .def_property_readonly("num_edges", [](const FlowProblem& p) { return p.graph().num_edges(); })
        .def_property_readonly("arcs",
                               [](const FlowProblem& p) {
                                   std::vector<std::pair<Vertex, Vertex>> out;
                                   for (const Arc& a : p.graph().edges()) out.emplace_back(a.tail, a.head);
                                   return out;
                               })
        .def_property_readonly("external_flow", &FlowProblem::external_flow)
        .def_property_readonly("incidence", &FlowProblem::incidence)
        .def_property_readonly("condition_number", &FlowProblem::condition_number)
        .def("objective", &FlowProblem::objective)
        .def("gradient", &FlowProblem::gradient);

    py::class_<Solution>(m, "Solution")
        .def_readonly("x", &Solution::x)
        .def_readonly("dual", &Solution::dual)
        .def_readonly("residual", &Solution::residual)
        .def_readonly("stationarity", &Solution::stationarity)
        .def_readonly("iterations", &Solution::iterations);

    py::class_<SensitivityOperator>(m, "Sensitivity")
        .def_readonly("S", &SensitivityOperator::S)
        .def_readonly("sigma", &SensitivityOperator::sigma)
        .def_readonly("weights", &SensitivityOperator::weights)
        .def_readonly("degrees", &SensitivityOperator::degrees)
        .def_readonly("laplacian", &SensitivityOperator::laplacian)
        .def_readonly("laplacian_pinv", &SensitivityOperator::laplacian_pinv);

    py::class_<WalkData>(m, "Walk")
        .def_readonly("transition", &WalkData::transition)
        .def_readonly("degrees", &WalkData::degrees)
        .def_readonly("stationary", &WalkData::stationary)
        .def_readonly("eigenvalues", &WalkData::eigenvalues)
        .def_readonly("lam", &WalkData::lambda)
        .def_property_readonly("contractive", &WalkData::contractive);

    py::class_<KilledWalkData>(m, "KilledWalk")
        .def_readonly("z_bar", &KilledWalkData::z_bar)
        .def_readonly("vertices", &KilledWalkData::vertices)
        .def_readonly("restricted_laplacian", &KilledWalkData::restricted_laplacian)
        .def_readonly("green", &KilledWalkData::green)
        .def("hitting_probability", [](const KilledWalkData& k, Vertex v, Vertex w) { return hitting_probability(k, v, w); })
        .def("expected_visits", [](const KilledWalkData& k, Vertex v, Vertex w) { return expected_visits(k, v, w); });

    m.def("solve", &solve_exact, py::arg("problem"), py::arg("tol") = 1e-12, py::arg("max_iters") = 200);
    m.def(
        "sensitivity", [](const FlowProblem& p) { return sensitivity_operator(p, solve_exact(p)); }, py::arg("problem"));
    m.def(
        "derivative",
        [](const FlowProblem& p, const Vector& db) {
            return directional_derivative(sensitivity_operator(p, solve_exact(p)), db);
        },
        py::arg("problem"), py::arg("db"));
    m.def(
        "finite_perturbation",
        [](const FlowProblem& p, const Vector& pert, double quad_tol) {
            return finite_perturbation(p, pert, quad_tol).delta;
        },
        py::arg("problem"), py::arg("perturbation"), py::arg("quad_tol") = 1e-10);
    m.def("laplacian_pinv", [](const Matrix& l) { return laplacian_pseudoinverse(l); }, py::arg("laplacian"));

    m.def(
        "walk", [](const FlowProblem& p) { return walk_data(sensitivity_operator(p, solve_exact(p))); },
        py::arg("problem"));
    m.def(
        "killed_walk",
        [](const FlowProblem& p, Vertex z) { return killed_walk(sensitivity_operator(p, solve_exact(p)), z); },
        py::arg("problem"), py::arg("z_bar"));
    m.def(
        "spectral_report",
        [](const FlowProblem& p) { return to_python(spectral_report(p, sensitivity_operator(p, solve_exact(p)))); },
        py::arg("problem"));
    m.def("interlacing_bound", &interlacing_bound, py::arg("k_minus"), py::arg("k_plus"), py::arg("w_minus"),
          py::arg("w_plus"), py::arg("mu"));

    m.def(
        "pgd",
        [](const FlowProblem& p, const Vector& x0, int t, std::optional<double> step) {
            PGDConfig cfg;
            cfg.step = step;
            return ProjectedGradientDescent(p, cfg).run(x0, t).x;
        },
        py::arg("problem"), py::arg("x0"), py::arg("t"), py::arg("step") = py::none());
    m.def(
        "local_resolve",
        [](const FlowProblem& p, const Vector& pert, int t, std::optional<std::vector<Vertex>> vertices,
           std::optional<Vertex> center, std::optional<int> radius) {
            const Subgraph sub = make_subgraph(p, vertices, center, radius);
            return local_resolve(p, solve_exact(p), pert, sub, t).x_hat;
        },
        py::arg("problem"), py::arg("perturbation"), py::arg("t"), py::kw_only(), py::arg("vertices") = py::none(),
        py::arg("center") = py::none(), py::arg("radius") = py::none());
    m.def(
        "measure",
        [](const FlowProblem& p, const Vector& pert, int t, std::optional<std::vector<Vertex>> vertices,
           std::optional<Vertex> center, std::optional<int> radius) {
            const Subgraph sub = make_subgraph(p, vertices, center, radius);
            return to_python(to_json(measure_decomposition(p, solve_exact(p), pert, sub, t)));
        },
        py::arg("problem"), py::arg("perturbation"), py::arg("t"), py::kw_only(), py::arg("vertices") = py::none(),
        py::arg("center") = py::none(), py::arg("radius") = py::none());
    m.def(
        "tune",
        [](double eps, double p_norm, double q, int k_minus, int k_plus, double mu, int z, double omega) {
            return to_python(to_json(tune(eps, p_norm, BoundParams{q, k_minus, k_plus, mu}, z, omega)));
        },
        py::arg("epsilon"), py::arg("p_norm"), py::arg("Q"), py::arg("k_minus"), py::arg("k_plus"), py::arg("mu"),
        py::arg("z") = 0, py::arg("omega") = 3.0);
    m.def(
        "verify",
        [](const FlowProblem& p, double tol, std::uint64_t seed) {
            VerifyOptions opts;
            opts.tol = tol;
            opts.seed = seed;
            return to_python(to_json(verify_problem(p, opts)));
        },
        py::arg("problem"), py::arg("tol") = 1e-8, py::arg("seed") = 20240917);
    m.def(
        "sweep",
        [](std::vector<int> sizes, std::vector<int> radii, std::vector<int> iterations, int degree, double epsilon,
           std::uint64_t seed) {
            SweepConfig cfg;
            cfg.sizes = std::move(sizes);
            cfg.radii = std::move(radii);
            cfg.iterations = std::move(iterations);
            cfg.degree = degree;
            cfg.epsilon = epsilon;
            cfg.seed = seed;
            return sweep_csv(run_sweep(cfg));
        },
        py::arg("sizes") = std::vector<int>{50, 100, 200}, py::arg("radii") = std::vector<int>{1, 2, 3, 4, 5},
        py::arg("iterations") = std::vector<int>{0, 1, 5, 20}, py::arg("degree") = 3, py::arg("epsilon") = 1e-3,
        py::arg("seed") = 20240917);

    auto uniform = [](std::shared_ptr<const DirectedGraph> g, std::optional<CostModel> cost, std::optional<Vector> b) {
        const int n = g->num_vertices();
        return uniform_problem(std::move(g), cost.value_or(CostModel::quadratic(1.0)), b.value_or(Vector::Zero(n)));
    };
    m.def(
        "cycle", [uniform](int n, std::optional<CostModel> c, std::optional<Vector> b) { return uniform(cycle_graph(n), c, b); },
        py::arg("n"), py::arg("cost") = py::none(), py::arg("external_flow") = py::none());
    m.def(
        "path", [uniform](int n, std::optional<CostModel> c, std::optional<Vector> b) { return uniform(path_graph(n), c, b); },
        py::arg("n"), py::arg("cost") = py::none(), py::arg("external_flow") = py::none());
    m.def(
        "grid",
        [uniform](int rows, int cols, std::optional<CostModel> c, std::optional<Vector> b) {
            return uniform(grid_graph(rows, cols), c, b);
        },
        py::arg("rows"), py::arg("cols"), py::arg("cost") = py::none(), py::arg("external_flow") = py::none());
    m.def(
        "random_regular",
        [uniform](int n, int k, std::uint64_t seed, std::optional<CostModel> c, std::optional<Vector> b) {
            return uniform(random_regular_graph(n, k, seed), c, b);
        },
        py::arg("n"), py::arg("k"), py::arg("seed"), py::arg("cost") = py::none(), py::arg("external_flow") = py::none());
    m.def("random_balanced_flow", &random_balanced_flow, py::arg("n"), py::arg("seed"));
}
