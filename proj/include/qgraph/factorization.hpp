#pragma once

#include <map>
#include <optional>

#include "qgraph/operators.hpp"

namespace qgraph {

struct CompatibilityEntry {
    int vertex = -1;
    double residual = 0.0;  // worst |c_i c_j - d_ij| at an overdetermined vertex
};

struct CompatibilityReport {
    std::vector<CompatibilityEntry> entries;
    double max_residual = 0.0;
};

struct FactorizationResult {
    bool success = false;
    // c_{R:P} keyed by (edge index, vertex id); complex for formal factorizations
    std::map<std::pair<int, int>, cplx> c;
    double C = 0.0;
    std::vector<double> U;   // residual edge potential U_R (edge case)
    bool real = true;
    bool special = false;    // U_R constant across edges
    bool positive = false;   // all c^2 real and positive
    double special_spread = 0.0;
    CompatibilityReport compatibility;
    std::string failure;

    cplx c_at(int edge_index, int vertex_id) const;
    cplx c2_at(int edge_index, int vertex_id) const;
};

/// Solve d_{R:R'} = c_{R:P} c_{R':P} per vertex (purely local); degree-3
/// vertices use the closed form, higher degrees are checked for
/// compatibility. U_R = V_R + C - c^2 - c'^2.
FactorizationResult factorize_edge(const EdgeOperator& op, double C, bool require_special,
                                   double tol = 1e-8);

struct BoundaryDatum {
    int vertex;      // boundary leaf
    cplx c;          // c_{R:P} on its unique tree edge
};

/// Leaf-to-root sweep on a tree subgraph: boundary data (or the leaf's own
/// potential equation when absent) starts the recursion; each vertex's
/// potential equation fixes the inward c^2, each edge's product equation
/// crosses over. The root's potential row is the one left unenforced.
FactorizationResult factorize_vertex_tree(const VertexOperator& op,
                                          const std::vector<int>& subtree_vertices, int root,
                                          const std::vector<BoundaryDatum>& boundary, double C);

struct PositiveCResult {
    bool found = false;
    double certificate = 0.0;   // first doubling success
    double refined = 0.0;       // bisected-down positive C
    FactorizationResult factorization;
};

/// Doubles C from max|V|+1 with the large-boundary ansatz c^2 = C until the
/// sweep is all-positive, then bisects down.
PositiveCResult find_positive_C(const VertexOperator& op,
                                const std::vector<int>& subtree_vertices, int root,
                                double cap_factor = double(1ULL << 40));

struct ReconstructionReport {
    double max_residual = 0.0;       // entrywise |QQ+ - (L + C)| on enforced rows
    Eigen::MatrixXcd composed;
    double root_row_residual = 0.0;  // vertex case: the unenforced root diagonal
};

/// Compose Q Q+ (vertex side) or Q+ Q + U (edge side) and compare with L + C.
ReconstructionReport reconstruct_edge(const EdgeOperator& op, const FactorizationResult& f);
ReconstructionReport reconstruct_vertex(const VertexOperator& op, const FactorizationResult& f,
                                        const std::vector<int>& subtree_vertices, int root,
                                        const std::vector<int>& boundary_vertices);

}  // namespace qgraph
