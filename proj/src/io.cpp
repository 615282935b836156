#include "localflow/io.hpp"

#include "localflow/errors.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace localflow {

namespace {

double number_field(const Json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number()) throw InvalidInput(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

Label label_field(const Json& v, const char* what) {
    if (!v.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
    return v.get<Label>();
}

}  // namespace

Json cost_to_json(const CostModel& cost) {
    Json out;
    if (const auto* q = std::get_if<QuadraticCost>(&cost.params())) {
        out["kind"] = "quadratic";
        out["a"] = q->a;
        out["c"] = q->c;
    } else {
        const auto& l = std::get<LogCoshCost>(cost.params());
        out["kind"] = "logcosh";
        out["alpha"] = l.alpha;
        out["beta"] = l.beta;
    }
    return out;
}

CostModel cost_from_json(const Json& doc) {
    if (!doc.is_object()) throw InvalidInput("cost must be an object");
    if (doc.contains("kind") && !doc.at("kind").is_string()) throw InvalidInput("cost kind must be a string");
    const std::string kind = doc.value("kind", std::string("quadratic"));
    if (kind == "quadratic") return CostModel::quadratic(number_field(doc, "a", 1.0), number_field(doc, "c", 0.0));
    if (kind == "logcosh") return CostModel::logcosh(number_field(doc, "alpha", 1.0), number_field(doc, "beta", 2.0));
    throw InvalidInput("unknown cost kind '" + kind + "'");
}

FlowProblem problem_from_json(const Json& doc) {
    if (!doc.is_object()) throw InvalidInput("graph document must be an object");
    if (!doc.contains("vertices") || !doc.at("vertices").is_array()) throw InvalidInput("missing 'vertices' array");
    if (!doc.contains("edges") || !doc.at("edges").is_array()) throw InvalidInput("missing 'edges' array");

    std::vector<Label> vertex_labels;
    std::unordered_map<Label, Vertex> index;
    for (const Json& v : doc.at("vertices")) {
        const Label label = label_field(v, "vertex id");
        if (!index.emplace(label, static_cast<Vertex>(vertex_labels.size())).second)
            throw InvalidInput("duplicate vertex id " + std::to_string(label));
        vertex_labels.push_back(label);
    }
    auto lookup = [&index](Label label) {
        auto it = index.find(label);
        if (it == index.end()) throw InvalidInput("edge refers to unknown vertex " + std::to_string(label));
        return it->second;
    };

    std::vector<Arc> arcs;
    std::vector<Label> edge_labels;
    std::vector<CostModel> costs;
    for (const Json& e : doc.at("edges")) {
        if (!e.is_object() || !e.contains("tail") || !e.contains("head"))
            throw InvalidInput("each edge needs 'tail' and 'head'");
        arcs.push_back({lookup(label_field(e.at("tail"), "edge tail")), lookup(label_field(e.at("head"), "edge head"))});
        edge_labels.push_back(e.contains("id") ? label_field(e.at("id"), "edge id")
                                               : static_cast<Label>(edge_labels.size() + 1));
        costs.push_back(e.contains("cost") ? cost_from_json(e.at("cost")) : CostModel::quadratic(1.0));
    }

    const auto n = static_cast<int>(vertex_labels.size());
    auto graph = std::make_shared<const DirectedGraph>(n, std::move(arcs), vertex_labels, std::move(edge_labels));

    Vector b = Vector::Zero(n);
    if (doc.contains("external_flow")) {
        const Json& flow = doc.at("external_flow");
        if (!flow.is_object()) throw InvalidInput("'external_flow' must be an object");
        for (const auto& [key, value] : flow.items()) {
            Label label = 0;
            try {
                std::size_t used = 0;
                label = std::stoll(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::logic_error&) {
                throw InvalidInput("external_flow key '" + key + "' is not a vertex id");
            }
            if (!value.is_number()) throw InvalidInput("external_flow values must be numbers");
            b(lookup(label)) = value.get<double>();
        }
    }
    return FlowProblem(std::move(graph), std::move(costs), std::move(b));
}

Json problem_to_json(const FlowProblem& problem) {
    const DirectedGraph& g = problem.graph();
    Json doc;
    Json vertices = Json::array();
    for (Vertex v = 0; v < g.num_vertices(); ++v) vertices.push_back(g.vertex_label(v));
    doc["vertices"] = std::move(vertices);
    Json edges = Json::array();
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        Json edge;
        edge["id"] = g.edge_label(e);
        edge["tail"] = g.vertex_label(g.edge(e).tail);
        edge["head"] = g.vertex_label(g.edge(e).head);
        edge["cost"] = cost_to_json(problem.costs()[static_cast<std::size_t>(e)]);
        edges.push_back(std::move(edge));
    }
    doc["edges"] = std::move(edges);
    doc["external_flow"] = vertex_values_to_json(g, problem.external_flow());
    return doc;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
}

FlowProblem load_problem(const std::string& path) {
    try {
        return problem_from_json(load_json(path));
    } catch (const Json::exception& e) {
        throw InvalidInput("malformed graph document '" + path + "': " + e.what());
    }
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

void write_json(const Json& doc, const std::string& path) { write_text(doc.dump(2) + "\n", path); }

Vector parse_perturbation(const DirectedGraph& g, const std::string& text) {
    Vector p = Vector::Zero(g.num_vertices());
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw InvalidInput("perturbation entries look like vertex:value");
        Label label = 0;
        double value = 0.0;
        try {
            std::size_t used = 0;
            label = std::stoll(item.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument(item);
            const std::string rest = item.substr(colon + 1);
            value = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InvalidInput("cannot parse perturbation entry '" + item + "'");
        }
        const auto v = g.find_vertex(label);
        if (!v) throw InvalidInput("perturbation names unknown vertex " + std::to_string(label));
        p(*v) += value;
    }
    return p;
}

Json number_to_json(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
    return out;
}

Json edge_values_to_json(const DirectedGraph& g, const Vector& x) {
    Json out = Json::object();
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) out[std::to_string(g.edge_label(e))] = number_to_json(x(e));
    return out;
}

Json vertex_values_to_json(const DirectedGraph& g, const Vector& v) {
    Json out = Json::object();
    for (Vertex i = 0; i < g.num_vertices(); ++i) out[std::to_string(g.vertex_label(i))] = number_to_json(v(i));
    return out;
}

Json to_json(const BoundParams& p) {
    Json out;
    out["Q"] = p.Q;
    out["k_minus"] = p.k_minus;
    out["k_plus"] = p.k_plus;
    out["mu"] = p.mu;
    out["c"] = p.c();
    out["gamma"] = p.gamma();
    out["rho"] = p.rho();
    return out;
}

Json to_json(const ErrorReport& r) {
    Json out;
    out["bias_measured"] = r.bias_measured;
    out["variance_measured"] = r.variance_measured;
    out["error_measured"] = r.error_measured;
    out["bias_bound"] = number_to_json(r.bias_bound);
    out["variance_bound"] = number_to_json(r.variance_bound);
    out["rho"] = r.rho;
    out["guarantee"] = r.guarantee;
    out["p_norm"] = r.p_norm;
    out["d_boundary"] = r.d_boundary;
    out["is_global"] = r.is_global;
    out["iterations"] = r.iterations;
    out["subgraph_vertices"] = r.subgraph_vertices;
    out["subgraph_edges"] = r.subgraph_edges;
    out["constants"] = to_json(r.constants);
    Json refined;
    refined["k_minus"] = r.refined.k_minus;
    refined["k_plus"] = r.refined.k_plus;
    refined["rho"] = r.refined.rho;
    refined["c"] = r.refined.c;
    refined["gamma"] = r.refined.gamma;
    refined["valid"] = r.refined.valid;
    refined["bias_bound"] = number_to_json(r.refined.bias_bound);
    refined["variance_bound"] = number_to_json(r.refined.variance_bound);
    out["refined"] = std::move(refined);
    return out;
}

Json to_json(const TuningResult& r) {
    Json out;
    out["radius"] = r.radius;
    out["iterations"] = r.iterations;
    out["epsilon"] = r.epsilon;
    out["p_norm"] = r.p_norm;
    out["nu_bias"] = number_to_json(r.nu_bias);
    out["xi_bias"] = number_to_json(r.xi_bias);
    out["nu_var"] = r.nu_var;
    out["xi_var"] = r.xi_var;
    out["rho"] = r.rho;
    out["z"] = r.z;
    out["omega"] = r.omega;
    out["ball_vertices"] = number_to_json(r.ball_vertices);
    out["complexity_estimate"] = number_to_json(r.complexity_estimate);
    return out;
}

Json spectral_report(const FlowProblem& problem, const SensitivityOperator& s) {
    const DirectedGraph& g = problem.graph();
    const WalkData walk = walk_data(s);
    const AdjacencySpectrum adj = adjacency_spectrum(g);
    const BoundParams params = BoundParams::from_problem(problem);
    Json out;
    out["lambda"] = walk.lambda;
    out["contractive"] = walk.contractive();
    out["mu"] = adj.mu;
    out["rho"] = params.rho();
    out["Q"] = params.Q;
    out["k_minus"] = params.k_minus;
    out["k_plus"] = params.k_plus;
    out["stationary"] = vertex_values_to_json(g, walk.stationary);
    out["walk_eigenvalues"] = vector_to_json(walk.eigenvalues);
    out["adjacency_eigenvalues"] = vector_to_json(adj.eigenvalues);
    return out;
}

}  // namespace localflow
