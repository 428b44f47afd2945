#include "qgraph/wronskian.hpp"

#include <algorithm>
#include <cmath>

namespace qgraph {

double TailSolution::equation_residual(const TailVertexOperator& op, int tail_depth) const {
    const Graph& g = op.g.core();
    double scale = core.size() ? core.cwiseAbs().maxCoeff() : 0.0;
    for (int j = 0; j < op.g.num_tails(); ++j)
        for (int n = 1; n <= tail_depth; ++n) scale = std::max(scale, std::abs(tail_value(j, n)));
    if (scale == 0.0) return 0.0;

    double worst = 0.0;
    Eigen::VectorXcd lcore = op.core_op.apply(core);
    for (int i = 0; i < g.num_vertices(); ++i) {
        cplx r = lcore(i) - lambda * core(i);
        for (int j : op.g.tails_at(g.vertex_id(i))) r += tail_value(j, 1);
        worst = std::max(worst, std::abs(r));
    }
    for (int j = 0; j < op.g.num_tails(); ++j) {
        for (int n = 1; n <= tail_depth; ++n) {
            cplx below = (n == 1) ? core(g.vertex_index(op.g.tails()[j].attach))
                                  : tail_value(j, n - 1);
            cplx r = below + tail_value(j, n + 1) + op.tail_potential * tail_value(j, n) -
                     lambda * tail_value(j, n);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst / scale;
}

const std::vector<PathSelector::Step>& PathSelector::path(int p, int q) const {
    auto key = std::make_pair(p, q);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    // BFS from q so parent pointers lead toward q; neighbor scan order fixes ties.
    int n = g_->num_vertices();
    std::vector<int> dist(n, -1), parent_edge(n, -1), parent_vertex(n, -1);
    std::vector<int> queue{g_->vertex_index(q)};
    dist[g_->vertex_index(q)] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int xi = queue[h];
        int xid = g_->vertex_id(xi);
        std::vector<std::pair<std::pair<int, int>, int>> nbrs;  // ((other id, edge id), edge idx)
        for (int e : g_->incident_edges(xid)) {
            int o = g_->other_endpoint(e, xid);
            nbrs.push_back({{o, g_->edge(e).id}, e});
        }
        std::sort(nbrs.begin(), nbrs.end());
        if (tie_ == TieBreak::descending) std::reverse(nbrs.begin(), nbrs.end());
        for (const auto& [k, e] : nbrs) {
            int oi = g_->vertex_index(k.first);
            if (dist[oi] < 0) {
                dist[oi] = dist[xi] + 1;
                parent_edge[oi] = e;
                parent_vertex[oi] = xid;
                queue.push_back(oi);
            }
        }
    }
    int pi = g_->vertex_index(p);
    if (dist[pi] < 0) throw input_error("no path between interacting vertices");
    std::vector<Step> steps;
    int cur = p;
    while (cur != q) {
        int ci = g_->vertex_index(cur);
        steps.push_back({parent_edge[ci], cur, parent_vertex[ci]});
        cur = parent_vertex[ci];
    }
    return memo_.emplace(key, std::move(steps)).first->second;
}

static double relative_residual(const Eigen::MatrixXd& M, const Eigen::VectorXcd& f,
                                cplx lambda) {
    double scale = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) return 0.0;
    return (M * f - lambda * f).cwiseAbs().maxCoeff() / scale;
}

WronskianResult wronskian_vertex(const VertexOperator& op, const Eigen::VectorXcd& phi,
                                 const Eigen::VectorXcd& psi, cplx lambda) {
    const Graph& g = op.graph();
    WronskianResult out;
    out.chain = Chain1(g);
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        cplx pu = phi(g.vertex_index(ed.u)), pv = phi(g.vertex_index(ed.v));
        cplx qu = psi(g.vertex_index(ed.u)), qv = psi(g.vertex_index(ed.v));
        out.chain.set_canonical(e, op.edge_coupling(e) * (pu * qv - qu * pv));
    }
    Eigen::MatrixXd M = op.matrix();
    out.residual_phi = relative_residual(M, phi, lambda);
    out.residual_psi = relative_residual(M, psi, lambda);
    return out;
}

TailWronskianResult wronskian_vertex(const TailVertexOperator& op, const TailSolution& phi,
                                     const TailSolution& psi) {
    if (std::abs(phi.lambda - psi.lambda) > 1e-12)
        throw input_error("Wronskian needs two solutions at the same lambda");
    const Graph& g = op.g.core();
    TailWronskianResult out;
    out.chain.core = Chain1(g);
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        cplx pu = phi.core(g.vertex_index(ed.u)), pv = phi.core(g.vertex_index(ed.v));
        cplx qu = psi.core(g.vertex_index(ed.u)), qv = psi.core(g.vertex_index(ed.v));
        out.chain.core.set_canonical(e, op.core_op.edge_coupling(e) * (pu * qv - qu * pv));
    }
    for (int j = 0; j < op.g.num_tails(); ++j) {
        cplx p0 = phi.core(g.vertex_index(op.g.tails()[j].attach));
        cplx q0 = psi.core(g.vertex_index(op.g.tails()[j].attach));
        cplx p1 = phi.tail_value(j, 1), q1 = psi.tail_value(j, 1);
        out.chain.tail_constants.push_back(p0 * q1 - q0 * p1);
    }
    out.residual_phi = phi.equation_residual(op);
    out.residual_psi = psi.equation_residual(op);
    return out;
}

EdgeWronskianResult wronskian_edge(const EdgeOperator& op, const Eigen::VectorXcd& phi,
                                   const Eigen::VectorXcd& psi, cplx lambda) {
    const Graph& g = op.graph();
    EdgeWronskianResult out;
    out.chain = Chain1(g);
    auto w_at = [&](int r, int vertex_id) {
        cplx w = 0.0;
        for (const auto& c : op.couplings_at(r, vertex_id)) {
            int other = (c.r1 == r) ? c.r2 : c.r1;
            w += c.d * (phi(r) * psi(other) - psi(r) * phi(other));
        }
        return w;
    };
    double scale = 0.0, ident = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        cplx wu = w_at(e, ed.u), wv = w_at(e, ed.v);
        out.chain.set_canonical(e, wv);
        scale = std::max({scale, std::abs(wu), std::abs(wv)});
        ident = std::max(ident, std::abs(wu + wv));
    }
    // an identically vanishing Wronskian (skew-degenerate pair) is not a
    // well-definedness failure: floor the scale at roundoff level of the data
    double dmax = 0.0;
    for (const auto& c : op.couplings()) dmax = std::max(dmax, std::abs(c.d));
    double input_scale = dmax * phi.cwiseAbs().maxCoeff() * psi.cwiseAbs().maxCoeff();
    scale = std::max(scale, 1e-5 * input_scale);
    out.identity_residual = scale > 0 ? ident / scale : 0.0;
    Eigen::MatrixXd M = op.matrix();
    out.residual_phi = relative_residual(M, phi, lambda);
    out.residual_psi = relative_residual(M, psi, lambda);
    return out;
}

WronskianResult wronskian_higher(const VertexOperator& op, const Eigen::VectorXcd& phi,
                                 const Eigen::VectorXcd& psi, cplx lambda,
                                 const PathSelector& selector) {
    const Graph& g = op.graph();
    WronskianResult out = wronskian_vertex(op, phi, psi, lambda);
    for (const auto& pr : op.extra_pairs()) {
        if (pr.b == 0.0) continue;
        cplx w = pr.b * (phi(g.vertex_index(pr.p)) * psi(g.vertex_index(pr.q)) -
                         psi(g.vertex_index(pr.p)) * phi(g.vertex_index(pr.q)));
        for (const auto& step : selector.path(pr.p, pr.q)) {
            const Edge& ed = g.edge(step.edge_index);
            double sign = (step.from == ed.u) ? 1.0 : -1.0;
            out.chain.set_canonical(step.edge_index,
                                    out.chain.canonical(step.edge_index) + sign * w);
        }
    }
    return out;
}

WronskianResult quantum_current(const VertexOperator& op, const Eigen::VectorXcd& psi,
                                cplx lambda) {
    return wronskian_vertex(op, psi, psi.conjugate(), lambda);
}

TailWronskianResult quantum_current(const TailVertexOperator& op, const TailSolution& psi) {
    if (std::abs(psi.lambda.imag()) > 1e-12)
        throw input_error("quantum current is defined for real lambda");
    return wronskian_vertex(op, psi, psi.conjugate());
}

double KWronskianTable::max_simplex_sum(const SimplicialComplex& K) const {
    double worst = 0.0;
    for (int s = 0; s < K.count(dim); ++s) worst = std::max(worst, std::abs(values.row(s).sum()));
    return worst;
}

double KWronskianTable::max_face_sum(const SimplicialComplex& K) const {
    Eigen::VectorXcd sums = Eigen::VectorXcd::Zero(K.count(dim - 1));
    for (int s = 0; s < K.count(dim); ++s) {
        auto faces = K.faces(dim, s);
        for (std::size_t f = 0; f < faces.size(); ++f)
            sums(faces[f].index) += values(s, static_cast<int>(f));
    }
    return sums.size() ? sums.cwiseAbs().maxCoeff() : 0.0;
}

KWronskianTable simplicial_wronskian(const SimplicialComplex& K, const SimplicialOperator& op,
                                     const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi,
                                     cplx lambda) {
    op.require_face_interaction_class(K);
    int k = op.dim;
    KWronskianTable out;
    out.dim = k;
    out.values = Eigen::MatrixXcd::Zero(K.count(k), k + 1);

    auto local_face = [&](int s, int face_index) {
        auto faces = K.faces(k, s);
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (faces[f].index == face_index) return static_cast<int>(f);
        throw input_error("face not incident to simplex");
    };

    for (const auto& [pq, b] : op.couplings) {
        if (b == 0.0) continue;
        const auto& a = K.simplices(k)[pq.first];
        const auto& c = K.simplices(k)[pq.second];
        std::vector<int> common;
        std::set_intersection(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(common));
        int face = K.index_of(k - 1, common);
        cplx w = b * (phi(pq.first) * psi(pq.second) - psi(pq.first) * phi(pq.second));
        out.values(pq.first, local_face(pq.first, face)) += w;
        out.values(pq.second, local_face(pq.second, face)) -= w;
    }
    Eigen::MatrixXd M = op.matrix(K);
    out.residual_phi = relative_residual(M, phi, lambda);
    out.residual_psi = relative_residual(M, psi, lambda);
    return out;
}

}  // namespace qgraph
