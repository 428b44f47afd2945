#include "qgraph/json_io.hpp"

#include <cstdio>

namespace qgraph {

static void require_field(const json& j, const char* field, const char* where) {
    if (!j.contains(field))
        throw input_error(std::string("missing field '") + field + "' in " + where);
}

ParsedInstance parse_instance(const json& j) {
    require_field(j, "vertices", "instance");
    require_field(j, "edges", "instance");

    std::vector<int> vids;
    std::vector<std::pair<int, double>> potentials;
    for (const auto& v : j.at("vertices")) {
        require_field(v, "id", "vertex");
        vids.push_back(v.at("id").get<int>());
        potentials.push_back({vids.back(), v.value("potential", 0.0)});
    }
    std::vector<Edge> edges;
    std::vector<double> bs;
    for (const auto& e : j.at("edges")) {
        require_field(e, "id", "edge");
        require_field(e, "u", "edge");
        require_field(e, "v", "edge");
        edges.push_back({e.at("id").get<int>(), e.at("u").get<int>(), e.at("v").get<int>()});
        bs.push_back(e.value("b", 1.0));
    }
    std::vector<Tail> tails;
    if (j.contains("tails"))
        for (const auto& t : j.at("tails")) {
            require_field(t, "attach", "tail");
            tails.push_back({t.at("attach").get<int>(), t.value("free_from", 1)});
        }

    ParsedInstance out{GraphWithTails(Graph(vids, edges), tails), TailVertexOperator{}, {}};
    out.vertex_op.g = out.g;
    out.vertex_op.core_op = VertexOperator(out.vertex_op.g.core());
    for (const auto& [id, pot] : potentials) out.vertex_op.core_op.set_potential(id, pot);
    for (std::size_t i = 0; i < edges.size(); ++i)
        out.vertex_op.core_op.set_edge_coupling(
            out.vertex_op.g.core().edge_index(edges[i].id), bs[i]);
    if (j.contains("pairs"))
        for (const auto& p : j.at("pairs"))
            out.vertex_op.core_op.add_pair(p.at("p").get<int>(), p.at("q").get<int>(),
                                           p.at("b").get<double>());

    bool has_edge_data = j.contains("d");
    for (const auto& e : j.at("edges"))
        if (e.contains("V_R")) has_edge_data = true;
    if (has_edge_data) out.edge_op = parse_edge_operator(j, out.vertex_op.g.core());
    return out;
}

EdgeOperator parse_edge_operator(const json& j, const Graph& core) {
    EdgeOperator op(core);
    for (const auto& e : j.at("edges")) {
        int idx = core.edge_index(e.at("id").get<int>());
        op.set_potential(idx, e.value("V_R", 0.0));
    }
    if (j.contains("d")) {
        for (const auto& c : j.at("d")) {
            int r1 = core.edge_index(c.at("r1").get<int>());
            int r2 = core.edge_index(c.at("r2").get<int>());
            int shared = -1;
            if (c.contains("p")) {
                shared = c.at("p").get<int>();
            } else {
                const Edge& a = core.edge(r1);
                const Edge& b = core.edge(r2);
                std::vector<int> common;
                for (int x : {a.u, a.v})
                    if (x == b.u || x == b.v) common.push_back(x);
                if (common.size() != 1)
                    throw input_error("ambiguous shared vertex for edge coupling; give 'p'");
                shared = common[0];
            }
            op.add_coupling(r1, r2, shared, c.at("value").get<double>());
        }
    } else {
        for (int id : core.vertex_ids()) {
            const auto& inc = core.incident_edges(id);
            for (std::size_t a = 0; a < inc.size(); ++a)
                for (std::size_t b = a + 1; b < inc.size(); ++b)
                    op.add_coupling(inc[a], inc[b], id, 1.0);
        }
    }
    return op;
}

json instance_to_json(const TailVertexOperator& op) {
    const Graph& g = op.g.core();
    json j;
    j["vertices"] = json::array();
    for (int id : g.vertex_ids())
        j["vertices"].push_back({{"id", id}, {"potential", op.core_op.potential(id)}});
    j["edges"] = json::array();
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        j["edges"].push_back(
            {{"id", ed.id}, {"u", ed.u}, {"v", ed.v}, {"b", op.core_op.edge_coupling(e)}});
    }
    j["tails"] = json::array();
    for (const Tail& t : op.g.tails())
        j["tails"].push_back({{"attach", t.attach}, {"free_from", t.free_from}});
    if (!op.core_op.extra_pairs().empty()) {
        j["pairs"] = json::array();
        for (const auto& p : op.core_op.extra_pairs())
            j["pairs"].push_back({{"p", p.p}, {"q", p.q}, {"b", p.b}});
    }
    return j;
}

json merge_edge_operator(json instance, const EdgeOperator& op) {
    const Graph& g = op.graph();
    for (auto& e : instance.at("edges"))
        e["V_R"] = op.potential(g.edge_index(e.at("id").get<int>()));
    instance["d"] = json::array();
    for (const auto& c : op.couplings())
        instance["d"].push_back({{"r1", g.edge(c.r1).id},
                                 {"r2", g.edge(c.r2).id},
                                 {"p", c.shared_vertex},
                                 {"value", c.d}});
    return instance;
}

json fermion_to_json(const FermionicQuadraticForm& f) {
    json j;
    auto mat = [](const Eigen::MatrixXd& M) {
        json rows = json::array();
        for (int i = 0; i < M.rows(); ++i) {
            json row = json::array();
            for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
            rows.push_back(row);
        }
        return rows;
    };
    j["A"] = mat(f.A);
    j["B"] = mat(f.B);
    j["const"] = f.constant;
    return j;
}

Eigen::MatrixXd parse_matrix_json(const json& j, const char* name) {
    if (!j.is_array() || j.empty()) throw input_error(std::string(name) + " must be a nonempty array");
    int n = static_cast<int>(j.size());
    Eigen::MatrixXd M(n, static_cast<int>(j.at(0).size()));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(j.at(i).size()) != M.cols())
            throw input_error(std::string(name) + " has ragged rows");
        for (int k = 0; k < M.cols(); ++k) M(i, k) = j.at(i).at(k).get<double>();
    }
    return M;
}

FermionicQuadraticForm parse_fermion(const json& j) {
    FermionicQuadraticForm f;
    require_field(j, "A", "fermionic form");
    require_field(j, "B", "fermionic form");
    f.A = parse_matrix_json(j.at("A"), "A");
    f.B = parse_matrix_json(j.at("B"), "B");
    f.constant = j.value("const", 0.0);
    f.require_valid();
    return f;
}

json simplicial_to_json(const SimplicialComplex& K) {
    json j;
    j["simplices"] = json::array();
    int top = K.top_dimension();
    for (const auto& s : K.simplices(top)) j["simplices"].push_back(s);
    return j;
}

SimplicialComplex parse_simplicial(const json& j) {
    require_field(j, "simplices", "complex");
    std::vector<std::vector<int>> maximal;
    for (const auto& s : j.at("simplices")) maximal.push_back(s.get<std::vector<int>>());
    return SimplicialComplex(maximal);
}

static cplx parse_cplx(const json& v) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2)
        return cplx(v.at(0).get<double>(), v.at(1).get<double>());
    throw input_error("complex values are a number or an [re, im] pair");
}

TailSolution parse_solution(const json& j, const GraphWithTails& g, cplx lambda) {
    TailSolution s;
    s.lambda = lambda;
    s.core = Eigen::VectorXcd::Zero(g.core().num_vertices());
    require_field(j, "core", "solution");
    for (const auto& [key, v] : j.at("core").items())
        s.core(g.core().vertex_index(std::stoi(key))) = parse_cplx(v);
    require_field(j, "tails", "solution");
    for (const auto& t : j.at("tails")) {
        if (!t.is_array() || t.size() != 2)
            throw input_error("each tail asymptotic is an [alpha, beta] pair");
        s.asym.push_back({parse_cplx(t.at(0)), parse_cplx(t.at(1))});
    }
    if (static_cast<int>(s.asym.size()) != g.num_tails())
        throw input_error("solution tail count does not match the graph");
    return s;
}

json solution_to_json(const TailSolution& s, const GraphWithTails& g) {
    json j;
    for (int i = 0; i < g.core().num_vertices(); ++i)
        j["core"][std::to_string(g.core().vertex_id(i))] = {s.core(i).real(), s.core(i).imag()};
    j["tails"] = json::array();
    for (const auto& ab : s.asym)
        j["tails"].push_back({{ab[0].real(), ab[0].imag()}, {ab[1].real(), ab[1].imag()}});
    return j;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace qgraph
