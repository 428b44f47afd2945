#include "qgraph/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace qgraph {

Graph::Graph(std::vector<int> vertex_ids, std::vector<Edge> edges)
    : vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
    std::sort(vertex_ids_.begin(), vertex_ids_.end());
    for (std::size_t i = 0; i < vertex_ids_.size(); ++i) {
        if (i > 0 && vertex_ids_[i] == vertex_ids_[i - 1])
            throw input_error("duplicate vertex id " + std::to_string(vertex_ids_[i]));
        vindex_[vertex_ids_[i]] = static_cast<int>(i);
    }
    incident_.resize(vertex_ids_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        Edge& ed = edges_[e];
        if (ed.u > ed.v) std::swap(ed.u, ed.v);
        if (!vindex_.count(ed.u) || !vindex_.count(ed.v))
            throw input_error("edge " + std::to_string(ed.id) + " references unknown vertex");
        if (eindex_.count(ed.id))
            throw input_error("duplicate edge id " + std::to_string(ed.id));
        eindex_[ed.id] = static_cast<int>(e);
        incident_[vindex_[ed.u]].push_back(static_cast<int>(e));
        if (ed.v != ed.u) incident_[vindex_[ed.v]].push_back(static_cast<int>(e));
    }
}

int Graph::vertex_index(int id) const {
    auto it = vindex_.find(id);
    if (it == vindex_.end()) throw input_error("unknown vertex id " + std::to_string(id));
    return it->second;
}

int Graph::edge_index(int edge_id) const {
    auto it = eindex_.find(edge_id);
    if (it == eindex_.end()) throw input_error("unknown edge id " + std::to_string(edge_id));
    return it->second;
}

int Graph::degree(int vertex_id) const {
    return static_cast<int>(incident_[vertex_index(vertex_id)].size());
}

const std::vector<int>& Graph::incident_edges(int vertex_id) const {
    return incident_[vertex_index(vertex_id)];
}

int Graph::other_endpoint(int edge_index, int vertex_id) const {
    const Edge& e = edges_.at(edge_index);
    if (e.u == vertex_id) return e.v;
    if (e.v == vertex_id) return e.u;
    throw input_error("vertex " + std::to_string(vertex_id) + " not on edge");
}

int Graph::distance(int id_a, int id_b) const {
    int a = vertex_index(id_a), b = vertex_index(id_b);
    if (a == b) return 0;
    std::vector<int> dist(num_vertices(), -1);
    std::queue<int> q;
    dist[a] = 0;
    q.push(a);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int e : incident_[x]) {
            int y = vindex_.at(other_endpoint(e, vertex_ids_[x]));
            if (dist[y] < 0) {
                dist[y] = dist[x] + 1;
                if (y == b) return dist[y];
                q.push(y);
            }
        }
    }
    return -1;
}

bool Graph::connected() const {
    if (num_vertices() <= 1) return true;
    std::vector<char> seen(num_vertices(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int e : incident_[x]) {
            int y = vindex_.at(other_endpoint(e, vertex_ids_[x]));
            if (!seen[y]) {
                seen[y] = 1;
                ++count;
                q.push(y);
            }
        }
    }
    return count == num_vertices();
}

ValidationReport Graph::validate() const {
    ValidationReport r;
    for (const Edge& e : edges_) {
        if (e.u == e.v) {
            r.loop_edges.push_back(e.id);
            r.violations.push_back("edge " + std::to_string(e.id) + " is a loop");
        }
    }
    for (int id : vertex_ids_) {
        if (degree(id) <= 1) {
            r.end_vertices.push_back(id);
            r.violations.push_back("vertex " + std::to_string(id) + " has m_P = " +
                                   std::to_string(degree(id)) + " <= 1 (graph has an end)");
        }
    }
    return r;
}

void Graph::require_valid() const {
    ValidationReport r = validate();
    if (!r.valid()) throw input_error("invalid graph: " + r.violations.front());
}

GraphWithTails::GraphWithTails(Graph core, std::vector<Tail> tails)
    : core_(std::move(core)), tails_(std::move(tails)) {}

std::vector<int> GraphWithTails::tails_at(int vertex_id) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < tails_.size(); ++j)
        if (tails_[j].attach == vertex_id) out.push_back(static_cast<int>(j));
    return out;
}

int GraphWithTails::full_degree(int vertex_id) const {
    return core_.degree(vertex_id) + static_cast<int>(tails_at(vertex_id).size());
}

ValidationReport GraphWithTails::validate() const {
    ValidationReport r;
    for (const Edge& e : core_.edges()) {
        if (e.u == e.v) {
            r.loop_edges.push_back(e.id);
            r.violations.push_back("edge " + std::to_string(e.id) + " is a loop");
        }
    }
    for (const Tail& t : tails_) {
        if (!core_.has_vertex(t.attach))
            r.violations.push_back("tail attaches to unknown vertex " + std::to_string(t.attach));
        if (t.free_from != 1)
            r.violations.push_back("tail free_from must be 1; model a non-free prefix as core "
                                   "chain vertices");
    }
    for (int id : core_.vertex_ids()) {
        if (full_degree(id) <= 1) {
            r.end_vertices.push_back(id);
            r.violations.push_back("vertex " + std::to_string(id) + " has m_P = " +
                                   std::to_string(full_degree(id)) + " <= 1 (graph has an end)");
        }
    }
    return r;
}

void GraphWithTails::require_valid() const {
    ValidationReport r = validate();
    if (!r.valid()) throw input_error("invalid graph with tails: " + r.violations.front());
}

BasisDecomposition compute_basis(const GraphWithTails& g) {
    g.require_valid();
    const Graph& core = g.core();
    BasisDecomposition out;

    std::set<int> alive(core.vertex_ids().begin(), core.vertex_ids().end());
    auto live_degree = [&](int id) {
        int d = 0;
        for (int e : core.incident_edges(id)) {
            int o = core.other_endpoint(e, id);
            if (alive.count(o)) ++d;
        }
        return d;
    };

    // Iteratively delete degree-1 vertices of the finite part (tails do not
    // count), ascending id per round for a reproducible audit trail.
    while (true) {
        std::vector<int> round;
        for (int id : alive)
            if (live_degree(id) <= 1) round.push_back(id);
        if (round.empty()) break;
        if (round.size() == alive.size()) {
            // Contractible remainder: keep the lowest id as the one-point basis.
            round.erase(round.begin());
            for (int id : round) alive.erase(id);
            out.removal_rounds.push_back(round);
            out.removed_vertices.insert(out.removed_vertices.end(), round.begin(), round.end());
            break;
        }
        for (int id : round) alive.erase(id);
        out.removal_rounds.push_back(round);
        out.removed_vertices.insert(out.removed_vertices.end(), round.begin(), round.end());
        if (alive.size() <= 1) break;
    }

    std::vector<int> basis_vertices(alive.begin(), alive.end());
    std::vector<Edge> basis_edges;
    std::vector<int> pruned_edge_indices;
    for (int e = 0; e < core.num_edges(); ++e) {
        const Edge& ed = core.edge(e);
        if (alive.count(ed.u) && alive.count(ed.v))
            basis_edges.push_back(ed);
        else
            pruned_edge_indices.push_back(e);
    }
    out.basis = Graph(basis_vertices, basis_edges);
    out.topologically_trivial = (out.basis.num_vertices() == 1);

    std::set<int> nests;
    for (int e : pruned_edge_indices) {
        const Edge& ed = core.edge(e);
        int inside = alive.count(ed.u) ? ed.u : (alive.count(ed.v) ? ed.v : -1);
        if (inside >= 0) {
            nests.insert(inside);
            out.edge_nests.push_back({EdgeNest::Kind::core_edge, e, -1, inside});
        }
    }
    for (int j = 0; j < g.num_tails(); ++j) {
        int at = g.tails()[j].attach;
        if (alive.count(at)) {
            nests.insert(at);
            out.edge_nests.push_back({EdgeNest::Kind::tail_edge, -1, j, at});
        }
    }
    // Tails hanging from pruned trees reach Gamma' through the tree's
    // attachment edge, already covered by pruned_edge_indices above.
    out.nests.assign(nests.begin(), nests.end());
    return out;
}

}  // namespace qgraph
