#pragma once

#include <complex>
#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

using cplx = std::complex<double>;

// 0-chain: scalar per vertex of a bound graph.
class Chain0 {
public:
    Chain0() = default;
    explicit Chain0(const Graph& g) : g_(g), values_(Eigen::VectorXcd::Zero(g.num_vertices())) {}

    const Graph& graph() const { return g_; }
    cplx at(int vertex_id) const { return values_(g_.vertex_index(vertex_id)); }
    void set(int vertex_id, cplx v) { values_(g_.vertex_index(vertex_id)) = v; }
    Eigen::VectorXcd& values() { return values_; }
    const Eigen::VectorXcd& values() const { return values_; }

    static Chain0 delta(const Graph& g, int vertex_id);

private:
    Graph g_;
    Eigen::VectorXcd values_;
};

// 1-chain: scalar per oriented edge. The stored coefficient refers to the
// canonical orientation u -> v (u < v); reading against orientation negates.
class Chain1 {
public:
    Chain1() = default;
    explicit Chain1(const Graph& g) : g_(g), values_(Eigen::VectorXcd::Zero(g.num_edges())) {}

    const Graph& graph() const { return g_; }

    /// Coefficient for the oriented edge from -> to; throws if the pair is
    /// not the edge's endpoint set.
    cplx get(int edge_id, int from, int to) const;
    void set(int edge_id, int from, int to, cplx v);
    /// Coefficient in canonical orientation, by edge index.
    cplx canonical(int edge_index) const { return values_(edge_index); }
    void set_canonical(int edge_index, cplx v) { values_(edge_index) = v; }

    Eigen::VectorXcd& values() { return values_; }
    const Eigen::VectorXcd& values() const { return values_; }
    double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

private:
    int orient_sign(int edge_index, int from, int to) const;
    Graph g_;
    Eigen::VectorXcd values_;
};

// 1-chain on a graph with tails: explicit core part plus one constant per
// tail (coefficient of the outward-oriented tail edges). Eventually-constant
// by construction.
struct TailChain {
    Chain1 core;
    std::vector<cplx> tail_constants;

    double max_abs() const;
};

/// (dW)_P = sum over incident edges, +1 where the edge ends, -1 where it starts.
Chain0 boundary(const Chain1& w);
/// Core-vertex boundary of a tail chain; deep tail vertices vanish identically.
Chain0 boundary(const TailChain& w, const GraphWithTails& g);

/// Adjoint of boundary under the delta-function pairing: (d* f)_{u->v} = f_v - f_u.
Chain1 coboundary(const Chain0& f);

struct CycleReport {
    bool is_cycle = false;
    double max_residual = 0.0;  // max |dW| over vertices
    double scale = 0.0;         // max |W|
};

CycleReport is_cycle(const Chain1& w, double tol = 1e-10);
CycleReport is_cycle(const TailChain& w, const GraphWithTails& g, double tol = 1e-10);

struct HomologyClass {
    std::vector<cplx> alphas;  // per-tail coefficient, outward orientation
    cplx alpha_sum;
    Chain1 finite_part;        // chain on the core edges
    double cycle_residual = 0.0;
};

/// Read off the tail coefficients and the finite remainder of a cycle.
HomologyClass homology_class(const TailChain& w, const GraphWithTails& g);

/// Build a TailChain from explicit per-tail edge coefficients (outward
/// orientation, index n = coefficient of edge (n, n+1)); rejects tails whose
/// coefficients are not eventually constant.
TailChain tail_chain_from_samples(const GraphWithTails& g, Chain1 core,
                                  const std::vector<std::vector<cplx>>& tail_samples,
                                  double tol = 1e-10);

}  // namespace qgraph
