#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

/// Thrown on malformed inputs (bad graph data, unknown ids, schema violations).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    int id = -1;
    int u = -1;  // endpoints by vertex id, normalized u < v at construction
    int v = -1;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<int> loop_edges;
    std::vector<int> end_vertices;  // vertices with m_P <= 1
    bool valid() const { return violations.empty(); }
};

// Finite graph: no loops allowed for operations, parallel edges accepted.
// Edges are stored with u < v; chain coefficients refer to that orientation.
class Graph {
public:
    Graph() = default;
    Graph(std::vector<int> vertex_ids, std::vector<Edge> edges);

    int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<int>& vertex_ids() const { return vertex_ids_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int index) const { return edges_.at(index); }

    bool has_vertex(int id) const { return vindex_.count(id) > 0; }
    int vertex_index(int id) const;
    int vertex_id(int index) const { return vertex_ids_.at(index); }
    int edge_index(int edge_id) const;

    /// Degree m_P counting parallel edges.
    int degree(int vertex_id) const;
    /// Edge indices incident to the vertex.
    const std::vector<int>& incident_edges(int vertex_id) const;
    /// Neighbor vertex across an incident edge.
    int other_endpoint(int edge_index, int vertex_id) const;

    /// BFS edge distance between two vertices; -1 if disconnected.
    int distance(int id_a, int id_b) const;
    bool connected() const;

    ValidationReport validate() const;
    void require_valid() const;

private:
    std::vector<int> vertex_ids_;
    std::vector<Edge> edges_;
    std::map<int, int> vindex_;
    std::map<int, int> eindex_;
    std::vector<std::vector<int>> incident_;  // per vertex index
};

struct Tail {
    int attach = -1;     // core vertex id the half line hangs from (tail site n = 0)
    int free_from = 1;   // n0: operator is free at tail sites n >= n0
};

// Finite core plus k semi-infinite free tails. Tail sites are implicit:
// site 0 is the attach vertex, sites 1,2,... extend outward with unit
// couplings. Operators with a non-free tail prefix are modeled by putting
// the prefix chain into the core.
class GraphWithTails {
public:
    GraphWithTails() = default;
    GraphWithTails(Graph core, std::vector<Tail> tails);

    const Graph& core() const { return core_; }
    const std::vector<Tail>& tails() const { return tails_; }
    int num_tails() const { return static_cast<int>(tails_.size()); }

    /// Tails attached at the given core vertex (tail indices).
    std::vector<int> tails_at(int vertex_id) const;
    /// Degree in the full infinite graph (core degree + attached tails).
    int full_degree(int vertex_id) const;

    ValidationReport validate() const;
    void require_valid() const;

private:
    Graph core_;
    std::vector<Tail> tails_;
};

struct EdgeNest {
    enum class Kind { core_edge, tail_edge };
    Kind kind = Kind::core_edge;
    int edge_index = -1;  // pruned core edge (by index in the original core)
    int tail_index = -1;  // first tail edge of this tail
    int nest_vertex = -1; // the nest it touches
};

struct BasisDecomposition {
    Graph basis;                       // the end-free subgraph Gamma'
    std::vector<int> nests;            // vertex ids in Gamma'
    std::vector<int> removed_vertices; // pruned vertex ids, in removal order
    std::vector<std::vector<int>> removal_rounds; // audit trail of pruning
    std::vector<EdgeNest> edge_nests;
    bool topologically_trivial = false; // Gamma' is a single vertex
};

/// Prune trees (and tails) off a graph-with-tails; the survivor is the
/// basis Gamma', nests are the attachment vertices.
BasisDecomposition compute_basis(const GraphWithTails& g);

}  // namespace qgraph
