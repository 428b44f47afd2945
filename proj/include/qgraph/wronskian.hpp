#pragma once

#include <map>

#include "qgraph/chain.hpp"
#include "qgraph/operators.hpp"
#include "qgraph/simplicial.hpp"
#include "qgraph/tail_solution.hpp"

namespace qgraph {

// Deterministic simple-path choice for spreading long-range Wronskian
// contributions: BFS shortest path, ties broken by vertex id. The memo table
// fills lazily: warm it single-threaded before sharing across threads.
class PathSelector {
public:
    enum class TieBreak { ascending, descending };

    explicit PathSelector(const Graph& g, TieBreak tb = TieBreak::ascending)
        : g_(&g), tie_(tb) {}

    struct Step {
        int edge_index;
        int from, to;  // vertex ids, traversal direction
    };
    /// Simple path from p to q; memoized per source.
    const std::vector<Step>& path(int p, int q) const;

private:
    const Graph* g_;
    TieBreak tie_;
    mutable std::map<std::pair<int, int>, std::vector<Step>> memo_;
};

struct WronskianResult {
    Chain1 chain;
    double residual_phi = 0.0;  // max |(L - lambda) phi| / max |phi|
    double residual_psi = 0.0;
};

struct EdgeWronskianResult {
    Chain1 chain;                   // coefficient on R oriented u -> v equals W_{R,v}
    double identity_residual = 0.0; // max |W_{R,u} + W_{R,v}| relative
    double residual_phi = 0.0;
    double residual_psi = 0.0;
};

struct TailWronskianResult {
    TailChain chain;
    double residual_phi = 0.0;
    double residual_psi = 0.0;
};

/// Second-order vertex Wronskian: per edge R = PP' the coefficient
/// b_R (phi_P psi_P' - psi_P phi_P') on the orientation P -> P'.
WronskianResult wronskian_vertex(const VertexOperator& op, const Eigen::VectorXcd& phi,
                                 const Eigen::VectorXcd& psi, cplx lambda);

TailWronskianResult wronskian_vertex(const TailVertexOperator& op, const TailSolution& phi,
                                     const TailSolution& psi);

/// Edge Wronskian W_{R,P}; well-definedness (W_{R,P} = -W_{R,P'}) is checked
/// numerically and reported.
EdgeWronskianResult wronskian_edge(const EdgeOperator& op, const Eigen::VectorXcd& phi,
                                   const Eigen::VectorXcd& psi, cplx lambda);

/// Any-order vertex Wronskian: edge terms plus long-range terms spread along
/// selector paths.
WronskianResult wronskian_higher(const VertexOperator& op, const Eigen::VectorXcd& phi,
                                 const Eigen::VectorXcd& psi, cplx lambda,
                                 const PathSelector& selector);

/// W(psi, conj psi); a cycle for real lambda (Kirchhoff law).
WronskianResult quantum_current(const VertexOperator& op, const Eigen::VectorXcd& psi,
                                cplx lambda);
TailWronskianResult quantum_current(const TailVertexOperator& op, const TailSolution& psi);

// Wronskian table W_{S_k, S_{k-1}} for face-interaction operators on
// k-chains of a simplicial complex.
struct KWronskianTable {
    int dim = 1;
    // values(s, f) for k-simplex s and its f-th face (local index)
    Eigen::MatrixXcd values;
    double residual_phi = 0.0;
    double residual_psi = 0.0;

    /// max over simplices of |sum of W over its faces|
    double max_simplex_sum(const SimplicialComplex& K) const;
    /// max over (k-1)-faces of |sum of W over incident simplices|
    double max_face_sum(const SimplicialComplex& K) const;
};

KWronskianTable simplicial_wronskian(const SimplicialComplex& K, const SimplicialOperator& op,
                                     const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                                     cplx lambda);

}  // namespace qgraph
