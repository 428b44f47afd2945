#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/chain.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

// Real self-adjoint operator on vertex functions:
//   (L psi)_P = V_P psi_P + sum over edges R=PP' of b_R psi_{P'}
//             + sum over extra pairs b_{P:P''} psi_{P''}.
// Couplings supported on edges make the operator second order; extra pairs
// raise the order.
class VertexOperator {
public:
    struct Pair {
        int p, q;   // vertex ids, p != q
        double b;
    };

    VertexOperator() = default;
    explicit VertexOperator(const Graph& g)
        : g_(g),
          potential_(Eigen::VectorXd::Zero(g.num_vertices())),
          edge_b_(Eigen::VectorXd::Zero(g.num_edges())) {}

    const Graph& graph() const { return g_; }

    double potential(int vertex_id) const { return potential_(g_.vertex_index(vertex_id)); }
    void set_potential(int vertex_id, double v) { potential_(g_.vertex_index(vertex_id)) = v; }
    double edge_coupling(int edge_index) const { return edge_b_(edge_index); }
    void set_edge_coupling(int edge_index, double b) { edge_b_(edge_index) = b; }
    void add_pair(int p, int q, double b);
    const std::vector<Pair>& extra_pairs() const { return pairs_; }

    /// Aggregate b_{P:P'} over all edges and extra pairs joining the two vertices.
    double pair_coupling(int p, int q) const;
    bool second_order() const { return pairs_.empty(); }

    Eigen::MatrixXd matrix() const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
    VertexOperator shifted(double c) const;

private:
    Graph g_;
    Eigen::VectorXd potential_;
    Eigen::VectorXd edge_b_;
    std::vector<Pair> pairs_;
};

// Real self-adjoint operator on edge functions; couplings are stored per
// (edge pair, shared vertex) so parallel edges contribute once per shared
// endpoint.
class EdgeOperator {
public:
    struct Coupling {
        int r1, r2;         // edge indices, r1 < r2
        int shared_vertex;  // vertex id
        double d;
    };

    EdgeOperator() = default;
    explicit EdgeOperator(const Graph& g)
        : g_(g), potential_(Eigen::VectorXd::Zero(g.num_edges())) {}

    const Graph& graph() const { return g_; }

    double potential(int edge_index) const { return potential_(edge_index); }
    void set_potential(int edge_index, double v) { potential_(edge_index) = v; }
    void add_coupling(int r1, int r2, int shared_vertex, double d);
    const std::vector<Coupling>& couplings() const { return couplings_; }

    /// Total d_{R:R'} summed over shared vertices.
    double pair_coupling(int r1, int r2) const;
    /// Couplings of edge r hinged at the given endpoint.
    std::vector<Coupling> couplings_at(int r, int vertex_id) const;

    Eigen::MatrixXd matrix() const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
    EdgeOperator shifted(double c) const;

private:
    Graph g_;
    Eigen::VectorXd potential_;
    std::vector<Coupling> couplings_;
};

/// Eq-style combinatorial Laplace-Beltrami on vertices: b = 1 per edge,
/// V_P = -m_P. Equals minus the boundary/coboundary composition.
VertexOperator laplace_beltrami_vertex(const Graph& g);
/// Edge version: d = 1 per shared endpoint of distinct edges, V_R = -2.
EdgeOperator laplace_beltrami_edge(const Graph& g);

struct OrderReport {
    int max_path_edges = 0;     // BFS distance between farthest interacting pair
    int order = 0;              // vertex-count convention: 0 diagonal, d+1 otherwise
    bool finite_order = true;   // per-site interaction counts all equal
};

OrderReport classify_order(const VertexOperator& op);
OrderReport classify_order(const EdgeOperator& op);

struct DeltaNormReport {
    double M_L = 0.0;
    int attained_at = -1;  // vertex or edge id
    bool discrete_spectrum_guaranteed = false;  // M_L >= 4
};

/// max_P ||L delta_P||^2; the caller shifts the operator to the Delta+2
/// normalization before calling.
DeltaNormReport delta_norm_bound(const VertexOperator& op);
DeltaNormReport delta_norm_bound(const EdgeOperator& op);

// Second-order vertex operator on a graph with tails: explicit data on the
// core, unit couplings and the stated constant potential on tail sites n>=1.
// Scattering requires tail_potential == 0 (shift first if needed).
struct TailVertexOperator {
    GraphWithTails g;
    VertexOperator core_op;
    double tail_potential = 0.0;

    TailVertexOperator shifted(double c) const;
    void require_free_tails() const;
};

/// Laplace-Beltrami of the full infinite graph: core degrees count tails;
/// tail_potential comes out -2 (shift by +2 for scattering).
TailVertexOperator laplace_beltrami_vertex(const GraphWithTails& g);

/// max over all sites, including a generic free tail site.
DeltaNormReport delta_norm_bound(const TailVertexOperator& op);

}  // namespace qgraph
