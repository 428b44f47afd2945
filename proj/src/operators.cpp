#include "qgraph/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qgraph {

void VertexOperator::add_pair(int p, int q, double b) {
    if (p == q) throw input_error("pair coupling needs distinct vertices");
    g_.vertex_index(p);
    g_.vertex_index(q);
    pairs_.push_back({std::min(p, q), std::max(p, q), b});
}

double VertexOperator::pair_coupling(int p, int q) const {
    double b = 0.0;
    for (int e : g_.incident_edges(p))
        if (g_.other_endpoint(e, p) == q) b += edge_b_(e);
    for (const Pair& pr : pairs_)
        if ((pr.p == p && pr.q == q) || (pr.p == q && pr.q == p)) b += pr.b;
    return b;
}

Eigen::MatrixXd VertexOperator::matrix() const {
    int n = g_.num_vertices();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = potential_(i);
    for (int e = 0; e < g_.num_edges(); ++e) {
        int iu = g_.vertex_index(g_.edge(e).u), iv = g_.vertex_index(g_.edge(e).v);
        M(iu, iv) += edge_b_(e);
        M(iv, iu) += edge_b_(e);
    }
    for (const Pair& pr : pairs_) {
        int ip = g_.vertex_index(pr.p), iq = g_.vertex_index(pr.q);
        M(ip, iq) += pr.b;
        M(iq, ip) += pr.b;
    }
    return M;
}

Eigen::VectorXcd VertexOperator::apply(const Eigen::VectorXcd& psi) const {
    if (psi.size() != g_.num_vertices()) throw input_error("function not defined on all sites");
    return matrix() * psi;
}

VertexOperator VertexOperator::shifted(double c) const {
    VertexOperator out = *this;
    out.potential_.array() += c;
    return out;
}

void EdgeOperator::add_coupling(int r1, int r2, int shared_vertex, double d) {
    if (r1 == r2) throw input_error("edge coupling needs distinct edges");
    const Edge& e1 = g_.edge(r1);
    const Edge& e2 = g_.edge(r2);
    if ((e1.u != shared_vertex && e1.v != shared_vertex) ||
        (e2.u != shared_vertex && e2.v != shared_vertex))
        throw input_error("edges do not share the stated vertex");
    couplings_.push_back({std::min(r1, r2), std::max(r1, r2), shared_vertex, d});
}

double EdgeOperator::pair_coupling(int r1, int r2) const {
    double d = 0.0;
    int a = std::min(r1, r2), b = std::max(r1, r2);
    for (const Coupling& c : couplings_)
        if (c.r1 == a && c.r2 == b) d += c.d;
    return d;
}

std::vector<EdgeOperator::Coupling> EdgeOperator::couplings_at(int r, int vertex_id) const {
    std::vector<Coupling> out;
    for (const Coupling& c : couplings_)
        if ((c.r1 == r || c.r2 == r) && c.shared_vertex == vertex_id) out.push_back(c);
    return out;
}

Eigen::MatrixXd EdgeOperator::matrix() const {
    int n = g_.num_edges();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = potential_(i);
    for (const Coupling& c : couplings_) {
        M(c.r1, c.r2) += c.d;
        M(c.r2, c.r1) += c.d;
    }
    return M;
}

Eigen::VectorXcd EdgeOperator::apply(const Eigen::VectorXcd& psi) const {
    if (psi.size() != g_.num_edges()) throw input_error("function not defined on all edges");
    return matrix() * psi;
}

EdgeOperator EdgeOperator::shifted(double c) const {
    EdgeOperator out = *this;
    out.potential_.array() += c;
    return out;
}

VertexOperator laplace_beltrami_vertex(const Graph& g) {
    VertexOperator op(g);
    for (int e = 0; e < g.num_edges(); ++e) op.set_edge_coupling(e, 1.0);
    for (int id : g.vertex_ids()) op.set_potential(id, -double(g.degree(id)));
    return op;
}

EdgeOperator laplace_beltrami_edge(const Graph& g) {
    EdgeOperator op(g);
    for (int e = 0; e < g.num_edges(); ++e) op.set_potential(e, -2.0);
    for (int id : g.vertex_ids()) {
        const auto& inc = g.incident_edges(id);
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j)
                op.add_coupling(inc[i], inc[j], id, 1.0);
    }
    return op;
}

OrderReport classify_order(const VertexOperator& op) {
    const Graph& g = op.graph();
    OrderReport r;
    std::map<int, int> counts;
    int dmax = 0;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (op.edge_coupling(e) == 0.0) continue;
        dmax = std::max(dmax, 1);
        counts[g.edge(e).u]++;
        counts[g.edge(e).v]++;
    }
    for (const auto& pr : op.extra_pairs()) {
        if (pr.b == 0.0) continue;
        int d = g.distance(pr.p, pr.q);
        if (d < 0) throw input_error("interacting pair in disconnected components");
        dmax = std::max(dmax, d);
        counts[pr.p]++;
        counts[pr.q]++;
    }
    r.max_path_edges = dmax;
    r.order = dmax == 0 ? 0 : dmax + 1;
    int lo = -1, hi = -1;
    for (int id : g.vertex_ids()) {
        int c = counts.count(id) ? counts[id] : 0;
        lo = (lo < 0) ? c : std::min(lo, c);
        hi = std::max(hi, c);
    }
    r.finite_order = (lo == hi);
    return r;
}

OrderReport classify_order(const EdgeOperator& op) {
    const Graph& g = op.graph();
    OrderReport r;
    // line-graph BFS over "edges sharing a vertex"
    int n = g.num_edges();
    std::vector<std::vector<int>> adj(n);
    for (int id : g.vertex_ids()) {
        const auto& inc = g.incident_edges(id);
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                adj[inc[i]].push_back(inc[j]);
                adj[inc[j]].push_back(inc[i]);
            }
    }
    auto line_dist = [&](int a, int b) {
        if (a == b) return 0;
        std::vector<int> dist(n, -1);
        std::vector<int> q{a};
        dist[a] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) {
            for (int y : adj[q[h]]) {
                if (dist[y] < 0) {
                    dist[y] = dist[q[h]] + 1;
                    q.push_back(y);
                }
            }
        }
        return dist[b];
    };
    std::map<int, int> counts;
    int dmax = 0;
    for (const auto& c : op.couplings()) {
        if (c.d == 0.0) continue;
        int d = line_dist(c.r1, c.r2);
        if (d < 0) throw input_error("interacting edge pair in disconnected components");
        dmax = std::max(dmax, d);
        counts[c.r1]++;
        counts[c.r2]++;
    }
    r.max_path_edges = dmax;
    r.order = dmax == 0 ? 0 : dmax + 1;
    int lo = -1, hi = -1;
    for (int e = 0; e < n; ++e) {
        int c = counts.count(e) ? counts[e] : 0;
        lo = (lo < 0) ? c : std::min(lo, c);
        hi = std::max(hi, c);
    }
    r.finite_order = (lo == hi);
    return r;
}

static DeltaNormReport delta_norm_from_matrix(const Eigen::MatrixXd& M,
                                              const std::vector<int>& ids) {
    DeltaNormReport r;
    for (int i = 0; i < M.rows(); ++i) {
        double s = M.col(i).squaredNorm();
        if (s > r.M_L) {
            r.M_L = s;
            r.attained_at = ids[i];
        }
    }
    r.discrete_spectrum_guaranteed = r.M_L >= 4.0;
    return r;
}

DeltaNormReport delta_norm_bound(const VertexOperator& op) {
    return delta_norm_from_matrix(op.matrix(), op.graph().vertex_ids());
}

DeltaNormReport delta_norm_bound(const EdgeOperator& op) {
    std::vector<int> ids;
    for (const Edge& e : op.graph().edges()) ids.push_back(e.id);
    return delta_norm_from_matrix(op.matrix(), ids);
}

TailVertexOperator TailVertexOperator::shifted(double c) const {
    TailVertexOperator out = *this;
    out.core_op = core_op.shifted(c);
    out.tail_potential += c;
    return out;
}

void TailVertexOperator::require_free_tails() const {
    if (g.num_tails() == 0)
        throw input_error("scattering needs at least one tail");
    if (std::abs(tail_potential) > 1e-14)
        throw input_error("operator is not free on tails; apply a spectral shift first");
    if (!core_op.second_order())
        throw input_error("scattering requires a second-order operator");
}

TailVertexOperator laplace_beltrami_vertex(const GraphWithTails& g) {
    TailVertexOperator out;
    out.g = g;
    out.core_op = VertexOperator(out.g.core());
    for (int e = 0; e < out.g.core().num_edges(); ++e) out.core_op.set_edge_coupling(e, 1.0);
    for (int id : out.g.core().vertex_ids())
        out.core_op.set_potential(id, -double(out.g.full_degree(id)));
    out.tail_potential = -2.0;
    return out;
}

DeltaNormReport delta_norm_bound(const TailVertexOperator& op) {
    // core sites: off-diagonal contributions include the unit tail couplings
    DeltaNormReport r;
    const Graph& g = op.g.core();
    Eigen::MatrixXd M = op.core_op.matrix();
    for (int i = 0; i < M.rows(); ++i) {
        int id = g.vertex_id(i);
        double s = M.col(i).squaredNorm() + double(op.g.tails_at(id).size());
        if (s > r.M_L) {
            r.M_L = s;
            r.attained_at = id;
        }
    }
    // generic free tail site: two unit couplings plus the tail potential
    double tail_site = 2.0 + op.tail_potential * op.tail_potential;
    if (tail_site > r.M_L) {
        r.M_L = tail_site;
        r.attained_at = -1;
    }
    r.discrete_spectrum_guaranteed = r.M_L >= 4.0;
    return r;
}

}  // namespace qgraph
