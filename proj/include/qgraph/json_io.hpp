#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qgraph/fermion.hpp"
#include "qgraph/operators.hpp"
#include "qgraph/simplicial.hpp"
#include "qgraph/tail_solution.hpp"

namespace qgraph {

using json = nlohmann::json;

// Graph schema:
// {"vertices":[{"id":..,"potential":..}],
//  "edges":[{"id":..,"u":..,"v":..,"b":..,"V_R":..}],
//  "tails":[{"attach":..,"free_from":1}],
//  "pairs":[{"p":..,"q":..,"b":..}],                 (optional, long range)
//  "d":[{"r1":..,"r2":..,"p":..,"value":..}]}        (optional, edge couplings)
struct ParsedInstance {
    GraphWithTails g;
    TailVertexOperator vertex_op;
    std::optional<EdgeOperator> edge_op;  // present when any V_R or d table given
};

ParsedInstance parse_instance(const json& j);
json instance_to_json(const TailVertexOperator& op);
/// Adds V_R and the explicit d table onto an instance document.
json merge_edge_operator(json instance, const EdgeOperator& op);

/// Edge operator on the core graph from the same schema; when no "d" table
/// is present, couplings default to 1 per shared endpoint.
EdgeOperator parse_edge_operator(const json& j, const Graph& core);

json fermion_to_json(const FermionicQuadraticForm& f);
FermionicQuadraticForm parse_fermion(const json& j);
Eigen::MatrixXd parse_matrix_json(const json& j, const char* name);

json simplicial_to_json(const SimplicialComplex& K);
SimplicialComplex parse_simplicial(const json& j);

/// {"core":{"<id>":[re,im],...},"tails":[[re,im],[re,im],...]} per solution.
TailSolution parse_solution(const json& j, const GraphWithTails& g, cplx lambda);
json solution_to_json(const TailSolution& s, const GraphWithTails& g);

std::string format_double(double v);

}  // namespace qgraph
