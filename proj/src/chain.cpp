#include "qgraph/chain.hpp"

#include <algorithm>

namespace qgraph {

Chain0 Chain0::delta(const Graph& g, int vertex_id) {
    Chain0 c(g);
    c.set(vertex_id, 1.0);
    return c;
}

int Chain1::orient_sign(int edge_index, int from, int to) const {
    const Edge& e = g_.edge(edge_index);
    if (e.u == from && e.v == to) return 1;
    if (e.u == to && e.v == from) return -1;
    throw input_error("edge does not join the given vertices");
}

cplx Chain1::get(int edge_id, int from, int to) const {
    int e = g_.edge_index(edge_id);
    return double(orient_sign(e, from, to)) * values_(e);
}

void Chain1::set(int edge_id, int from, int to, cplx v) {
    int e = g_.edge_index(edge_id);
    values_(e) = double(orient_sign(e, from, to)) * v;
}

double TailChain::max_abs() const {
    double m = core.max_abs();
    for (cplx a : tail_constants) m = std::max(m, std::abs(a));
    return m;
}

Chain0 boundary(const Chain1& w) {
    const Graph& g = w.graph();
    Chain0 out(g);
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        out.values()(g.vertex_index(ed.v)) += w.canonical(e);
        out.values()(g.vertex_index(ed.u)) -= w.canonical(e);
    }
    return out;
}

Chain0 boundary(const TailChain& w, const GraphWithTails& g) {
    Chain0 out = boundary(w.core);
    // The first tail edge (attach -> site 1) starts at the attach vertex.
    for (int j = 0; j < g.num_tails(); ++j) {
        int idx = g.core().vertex_index(g.tails()[j].attach);
        out.values()(idx) -= w.tail_constants[j];
    }
    return out;
}

Chain1 coboundary(const Chain0& f) {
    const Graph& g = f.graph();
    Chain1 out(g);
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        out.set_canonical(e, f.values()(g.vertex_index(ed.v)) - f.values()(g.vertex_index(ed.u)));
    }
    return out;
}

static CycleReport cycle_report(const Eigen::VectorXcd& dW, double scale, double tol) {
    CycleReport r;
    r.scale = scale;
    r.max_residual = dW.size() ? dW.cwiseAbs().maxCoeff() : 0.0;
    r.is_cycle = r.max_residual <= tol * std::max(scale, 1e-300);
    return r;
}

CycleReport is_cycle(const Chain1& w, double tol) {
    return cycle_report(boundary(w).values(), w.max_abs(), tol);
}

CycleReport is_cycle(const TailChain& w, const GraphWithTails& g, double tol) {
    return cycle_report(boundary(w, g).values(), w.max_abs(), tol);
}

HomologyClass homology_class(const TailChain& w, const GraphWithTails& g) {
    HomologyClass h;
    h.alphas = w.tail_constants;
    h.alpha_sum = 0.0;
    for (cplx a : h.alphas) h.alpha_sum += a;
    h.finite_part = w.core;
    h.cycle_residual = is_cycle(w, g).max_residual;
    return h;
}

TailChain tail_chain_from_samples(const GraphWithTails& g, Chain1 core,
                                  const std::vector<std::vector<cplx>>& tail_samples,
                                  double tol) {
    if (static_cast<int>(tail_samples.size()) != g.num_tails())
        throw input_error("tail sample count does not match tail count");
    TailChain out;
    out.core = std::move(core);
    double scale = out.core.max_abs();
    for (const auto& s : tail_samples)
        for (cplx v : s) scale = std::max(scale, std::abs(v));
    for (const auto& s : tail_samples) {
        if (s.empty()) throw input_error("empty tail sample");
        cplx last = s.back();
        for (cplx v : s)
            if (std::abs(v - last) > tol * std::max(scale, 1.0))
                throw input_error("tail chain coefficients are not eventually constant");
        out.tail_constants.push_back(last);
    }
    return out;
}

}  // namespace qgraph
