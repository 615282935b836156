#pragma once

#include "localflow/analysis.hpp"
#include "localflow/sensitivity.hpp"
#include "localflow/spectral.hpp"

#include <json.hpp>

#include <string>

namespace localflow {

using Json = nlohmann::ordered_json;

/// {"vertices": [ids], "edges": [{"id", "tail", "head", "cost": {...}}],
///  "external_flow": {"<vertex id>": value}}. Vertices absent from
/// external_flow get 0. Throws InvalidInput on malformed documents.
FlowProblem problem_from_json(const Json& doc);
Json problem_to_json(const FlowProblem& problem);

Json cost_to_json(const CostModel& cost);
CostModel cost_from_json(const Json& doc);

/// Throws InvalidInput if the file cannot be read or parsed.
FlowProblem load_problem(const std::string& path);
Json load_json(const std::string& path);

/// Two-space indented JSON plus a trailing newline; "-" or "" means stdout.
void write_json(const Json& doc, const std::string& path);
void write_text(const std::string& text, const std::string& path);

/// "v:val,v:val,..." with vertex labels, as a vector over the problem's vertices.
Vector parse_perturbation(const DirectedGraph& g, const std::string& text);

/// Per-edge values keyed by edge label.
Json edge_values_to_json(const DirectedGraph& g, const Vector& x);
/// Per-vertex values keyed by vertex label.
Json vertex_values_to_json(const DirectedGraph& g, const Vector& v);

Json vector_to_json(const Vector& v);

/// Non-finite numbers become null.
Json number_to_json(double value);

Json to_json(const ErrorReport& r);
Json to_json(const TuningResult& r);
Json to_json(const BoundParams& p);

/// lambda, mu, rho, pi and both spectra for the walk at the given solution.
Json spectral_report(const FlowProblem& problem, const SensitivityOperator& s);

}  // namespace localflow
