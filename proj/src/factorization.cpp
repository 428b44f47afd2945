#include "qgraph/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qgraph {

cplx FactorizationResult::c_at(int edge_index, int vertex_id) const {
    auto it = c.find({edge_index, vertex_id});
    if (it == c.end()) throw input_error("no factorization coefficient for that edge/vertex");
    return it->second;
}

cplx FactorizationResult::c2_at(int edge_index, int vertex_id) const {
    cplx v = c_at(edge_index, vertex_id);
    return v * v;
}

FactorizationResult factorize_edge(const EdgeOperator& op, double C, bool require_special,
                                   double tol) {
    const Graph& g = op.graph();
    FactorizationResult out;
    out.C = C;
    out.positive = true;

    for (int id : g.vertex_ids()) {
        const auto& inc = g.incident_edges(id);
        int m = static_cast<int>(inc.size());
        auto d = [&](int i, int j) {
            double v = 0.0;
            for (const auto& cp : op.couplings_at(inc[i], id))
                if (cp.r1 == std::min(inc[i], inc[j]) && cp.r2 == std::max(inc[i], inc[j]))
                    v += cp.d;
            return v;
        };
        std::vector<cplx> cv(m);
        if (m == 1) {
            out.failure = "vertex " + std::to_string(id) + " has a single edge";
            return out;
        } else if (m == 2) {
            double d01 = d(0, 1);
            cv[0] = cv[1] = std::sqrt(cplx(d01));
        } else {
            // closed form on the first usable triple, then divide across
            int i0 = 0, i1 = 1, i2 = 2;
            double d01 = d(i0, i1), d02 = d(i0, i2), d12 = d(i1, i2);
            if (d01 == 0.0 || d02 == 0.0 || d12 == 0.0) {
                out.failure = "zero coupling in the degree-" + std::to_string(m) +
                              " closed form at vertex " + std::to_string(id);
                return out;
            }
            cplx c0 = std::sqrt(cplx(d01 * d02 / d12));
            cv[i0] = c0;
            for (int j = 1; j < m; ++j) cv[j] = cplx(d(0, j)) / c0;
            if (m > 3) {
                // overdetermined vertex: keep the phases fixed by the triple
                // gauge, refit the magnitudes by least squares in log scale
                // over the nonzero pairs, then measure the incompatibility
                std::vector<int> active;
                for (int i = 0; i < m; ++i)
                    if (std::abs(cv[i]) > 0.0) active.push_back(i);
                int na = static_cast<int>(active.size());
                Eigen::MatrixXd G = Eigen::MatrixXd::Zero(na, na);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(na);
                for (int a = 0; a < na; ++a) {
                    for (int b2 = a + 1; b2 < na; ++b2) {
                        double dij = d(active[a], active[b2]);
                        if (dij == 0.0) continue;
                        G(a, a) += 1.0;
                        G(b2, b2) += 1.0;
                        G(a, b2) += 1.0;
                        G(b2, a) += 1.0;
                        double L = std::log(std::abs(dij));
                        rhs(a) += L;
                        rhs(b2) += L;
                    }
                }
                Eigen::VectorXd x = G.ldlt().solve(rhs);
                for (int a = 0; a < na; ++a)
                    cv[active[a]] = std::polar(std::exp(x(a)), std::arg(cv[active[a]]));

                double worst = 0.0, scale = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = i + 1; j < m; ++j) {
                        worst = std::max(worst, std::abs(cv[i] * cv[j] - cplx(d(i, j))));
                        scale = std::max(scale, std::abs(d(i, j)));
                    }
                if (worst > tol * std::max(scale, 1.0)) {
                    out.compatibility.entries.push_back({id, worst});
                    out.compatibility.max_residual =
                        std::max(out.compatibility.max_residual, worst);
                }
            }
        }
        for (int i = 0; i < m; ++i) {
            out.c[{inc[i], id}] = cv[i];
            if (std::abs(cv[i].imag()) > 1e-12) out.real = false;
            if ((cv[i] * cv[i]).real() <= 0.0) out.positive = false;
        }
    }
    if (!out.compatibility.entries.empty()) {
        out.failure = "overdetermined vertex equations are incompatible";
        return out;
    }

    out.U.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        cplx u = cplx(op.potential(e) + C) - out.c2_at(e, ed.u) - out.c2_at(e, ed.v);
        if (std::abs(u.imag()) > 1e-10) out.real = false;
        out.U[e] = u.real();
    }
    double umin = *std::min_element(out.U.begin(), out.U.end());
    double umax = *std::max_element(out.U.begin(), out.U.end());
    out.special_spread = umax - umin;
    out.special = out.special_spread <= tol * std::max(1.0, std::abs(umax));
    if (require_special && !out.special) {
        out.failure = "residual potential U_R is not constant";
        return out;
    }
    out.success = true;
    return out;
}

namespace {

struct TreeShape {
    std::vector<int> order;                 // leaf-to-root processing order
    std::map<int, int> parent;              // vertex -> parent vertex (root absent)
    std::map<int, int> parent_edge;         // vertex -> edge index toward parent
    std::map<int, std::vector<int>> edges;  // vertex -> incident tree edge indices
    std::vector<int> leaves;                // non-root degree-1 vertices
};

TreeShape analyze_tree(const Graph& g, const std::vector<int>& vertices, int root) {
    std::set<int> inside(vertices.begin(), vertices.end());
    if (!inside.count(root)) throw input_error("root is not in the subtree");
    TreeShape t;
    int edge_count = 0;
    for (int id : vertices) {
        for (int e : g.incident_edges(id)) {
            int o = g.other_endpoint(e, id);
            if (inside.count(o)) {
                t.edges[id].push_back(e);
                if (o > id) ++edge_count;
            }
        }
    }
    if (edge_count != static_cast<int>(vertices.size()) - 1)
        throw input_error("subgraph is not a tree (factorization needs a contractible subgraph)");
    // BFS from root, then reverse for leaf-to-root order
    std::vector<int> bfs{root};
    std::set<int> seen{root};
    for (std::size_t h = 0; h < bfs.size(); ++h) {
        int x = bfs[h];
        for (int e : t.edges[x]) {
            int o = g.other_endpoint(e, x);
            if (!seen.count(o)) {
                seen.insert(o);
                t.parent[o] = x;
                t.parent_edge[o] = e;
                bfs.push_back(o);
            }
        }
    }
    if (seen.size() != vertices.size()) throw input_error("subtree is not connected");
    t.order.assign(bfs.rbegin(), bfs.rend());
    for (int id : vertices)
        if (id != root && t.edges[id].size() == 1) t.leaves.push_back(id);
    return t;
}

}  // namespace

FactorizationResult factorize_vertex_tree(const VertexOperator& op,
                                          const std::vector<int>& subtree_vertices, int root,
                                          const std::vector<BoundaryDatum>& boundary, double C) {
    const Graph& g = op.graph();
    TreeShape t = analyze_tree(g, subtree_vertices, root);
    FactorizationResult out;
    out.C = C;
    out.positive = true;
    out.special = true;  // vertex factorizations carry no U remainder

    std::map<int, cplx> given;
    for (const auto& bd : boundary) given[bd.vertex] = bd.c;

    for (int id : t.order) {
        if (id == root) break;  // root has no inward edge; its row stays free
        int pe = t.parent_edge.at(id);
        int parent = t.parent.at(id);
        cplx c_in;
        if (given.count(id)) {
            if (t.edges.at(id).size() != 1)
                throw input_error("boundary data given at a non-leaf vertex");
            c_in = given[id];
        } else {
            cplx sum_known = 0.0;
            for (int e : t.edges.at(id)) {
                if (e == pe) continue;
                auto it = out.c.find({e, id});
                if (it == out.c.end()) throw input_error("sweep order broke: child edge unsolved");
                sum_known += it->second * it->second;
            }
            cplx c2 = cplx(op.potential(id) + C) - sum_known;
            c_in = std::sqrt(c2);
        }
        if (std::abs(c_in) < 1e-300) {
            out.failure = "vanishing coefficient on edge toward vertex " + std::to_string(parent);
            return out;
        }
        out.c[{pe, id}] = c_in;
        double b = op.edge_coupling(pe);
        if (b == 0.0) {
            out.failure = "zero coupling b on a tree edge makes the product equation unsolvable";
            return out;
        }
        out.c[{pe, parent}] = cplx(b) / c_in;
    }
    for (const auto& [key, v] : out.c) {
        if (std::abs(v.imag()) > 1e-12) out.real = false;
        if ((v * v).real() <= 0.0) out.positive = false;
    }
    out.success = true;
    return out;
}

PositiveCResult find_positive_C(const VertexOperator& op,
                                const std::vector<int>& subtree_vertices, int root,
                                double cap_factor) {
    const Graph& g = op.graph();
    TreeShape t = analyze_tree(g, subtree_vertices, root);

    double vmax = 0.0;
    for (int id : subtree_vertices) vmax = std::max(vmax, std::abs(op.potential(id)));
    double C0 = vmax + 1.0;

    auto attempt = [&](double C) {
        std::vector<BoundaryDatum> bd;
        for (int leaf : t.leaves) bd.push_back({leaf, std::sqrt(cplx(C))});
        FactorizationResult f = factorize_vertex_tree(op, subtree_vertices, root, bd, C);
        return f;
    };

    PositiveCResult out;
    double C = C0;
    double last_fail = 0.0;
    while (C <= C0 * cap_factor) {
        FactorizationResult f = attempt(C);
        if (f.success && f.positive && f.real) {
            out.found = true;
            out.certificate = C;
            out.factorization = std::move(f);
            break;
        }
        last_fail = C;
        C *= 2.0;
    }
    if (!out.found) return out;

    double lo = last_fail, hi = out.certificate;
    for (int it = 0; it < 60 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= 0.0) break;
        FactorizationResult f = attempt(mid);
        if (f.success && f.positive && f.real)
            hi = mid;
        else
            lo = mid;
    }
    out.refined = hi;
    out.factorization = attempt(out.certificate);
    return out;
}

ReconstructionReport reconstruct_edge(const EdgeOperator& op, const FactorizationResult& f) {
    const Graph& g = op.graph();
    int n = g.num_edges();
    ReconstructionReport rep;
    rep.composed = Eigen::MatrixXcd::Zero(n, n);
    // (Q+ Q phi)_R = sum_{P in dR} c_{R:P} sum_{R' at P} c_{R':P} phi_{R'}
    for (int id : g.vertex_ids()) {
        const auto& inc = g.incident_edges(id);
        for (int a : inc)
            for (int b : inc) rep.composed(a, b) += f.c_at(a, id) * f.c_at(b, id);
    }
    for (int e = 0; e < n; ++e) rep.composed(e, e) += f.U[e];
    Eigen::MatrixXcd target = op.matrix().cast<cplx>() +
                              f.C * Eigen::MatrixXcd::Identity(n, n);
    rep.max_residual = (rep.composed - target).cwiseAbs().maxCoeff();
    return rep;
}

ReconstructionReport reconstruct_vertex(const VertexOperator& op, const FactorizationResult& f,
                                        const std::vector<int>& subtree_vertices, int root,
                                        const std::vector<int>& boundary_vertices) {
    const Graph& g = op.graph();
    TreeShape t = analyze_tree(g, subtree_vertices, root);
    std::map<int, int> vi;
    for (std::size_t i = 0; i < subtree_vertices.size(); ++i)
        vi[subtree_vertices[i]] = static_cast<int>(i);
    int n = static_cast<int>(subtree_vertices.size());

    ReconstructionReport rep;
    rep.composed = Eigen::MatrixXcd::Zero(n, n);
    // (Q Q+ psi)_P = sum_{R at P} c_{R:P} sum_{P' in dR} c_{R:P'} psi_{P'}
    for (int id : subtree_vertices) {
        for (int e : t.edges.at(id)) {
            int o = g.other_endpoint(e, id);
            rep.composed(vi[id], vi[id]) += f.c_at(e, id) * f.c_at(e, id);
            rep.composed(vi[id], vi[o]) += f.c_at(e, id) * f.c_at(e, o);
        }
    }
    std::set<int> skip(boundary_vertices.begin(), boundary_vertices.end());
    for (int id : subtree_vertices) {
        cplx diag_target = cplx(op.potential(id) + f.C);
        cplx r = rep.composed(vi[id], vi[id]) - diag_target;
        if (id == root)
            rep.root_row_residual = std::abs(r);
        else if (!skip.count(id))
            rep.max_residual = std::max(rep.max_residual, std::abs(r));
        for (int e : t.edges.at(id)) {
            int o = g.other_endpoint(e, id);
            cplx off = rep.composed(vi[id], vi[o]) - cplx(op.edge_coupling(e));
            rep.max_residual = std::max(rep.max_residual, std::abs(off));
        }
    }
    return rep;
}

}  // namespace qgraph
