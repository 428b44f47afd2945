#include "qgraph/fixtures.hpp"

namespace qgraph::fixtures {

std::vector<FixtureInfo> list() {
    return {
        {"free_line", "graph", "one vertex with two free tails (the lattice line)"},
        {"triangle_tail_generic", "graph", "triangle + tail, generic coefficients"},
        {"triangle_tail_exceptional", "graph",
         "triangle + tail tuned for a tail-vanishing eigenvalue at -1/2"},
        {"triangle_tail_z2", "graph",
         "swap-symmetric triangle + tail, tail-vanishing eigenvalue at -1"},
        {"example3_case1", "graph", "triangle with two tails at one vertex; "
                                    "monodromy degenerates at (1 +- sqrt 2)/2"},
        {"example3_case2", "graph",
         "triangle with tails at two vertices; monodromy degenerates at 1/2"},
        {"k5_tail", "graph", "K5 plus a tail, Laplace-Beltrami shifted by +2"},
        {"tetrahedron_boundary", "simplicial",
         "boundary complex of the 3-simplex with a symmetric face operator"},
        {"fermion_n1", "fermion", "one-mode quadratic form, spectrum {0, 2}"},
        {"fermion_n2", "fermion", "two-mode quadratic form with pairing terms"},
        {"fermion_n3", "fermion", "three-mode quadratic form"},
        {"fermion_n4", "fermion", "four-mode quadratic form"},
    };
}

TailVertexOperator free_line() {
    Graph core({0}, {});
    GraphWithTails g(core, {{0, 1}, {0, 1}});
    TailVertexOperator op;
    op.g = g;
    op.core_op = VertexOperator(op.g.core());
    return op;
}

TailVertexOperator triangle_tail(double a, double b, double c, double u, double v, double w) {
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    GraphWithTails g(core, {{0, 1}});
    TailVertexOperator op;
    op.g = g;
    op.core_op = VertexOperator(op.g.core());
    op.core_op.set_edge_coupling(0, a);
    op.core_op.set_edge_coupling(1, b);
    op.core_op.set_edge_coupling(2, c);
    op.core_op.set_potential(0, u);
    op.core_op.set_potential(1, v);
    op.core_op.set_potential(2, w);
    return op;
}

TailVertexOperator triangle_tail_generic() {
    return triangle_tail(1.0, 0.7, 0.4, 0.3, -0.2, 0.5);
}

TailVertexOperator triangle_tail_exceptional() {
    // w - bc/a = 1.5 - 2 = -0.5 = v - ac/b
    return triangle_tail(1.0, 2.0, 1.0, 0.0, 0.0, 1.5);
}

TailVertexOperator triangle_tail_z2() {
    // a = b, v = w: eigenvalue v - c = -1 with eigenfunction (0, 1, -1)
    return triangle_tail(1.0, 1.0, 2.0, 0.0, 1.0, 1.0);
}

TailVertexOperator example3_case1() {
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    GraphWithTails g(core, {{0, 1}, {0, 1}});
    TailVertexOperator op;
    op.g = g;
    op.core_op = VertexOperator(op.g.core());
    op.core_op.set_edge_coupling(0, 1.0);   // b_{0:A}
    op.core_op.set_edge_coupling(1, 1.0);   // b_{0:B}
    op.core_op.set_edge_coupling(2, 0.5);   // c = b_{A:B}
    op.core_op.set_potential(0, 0.0);       // w
    op.core_op.set_potential(1, 0.0);       // u at A
    op.core_op.set_potential(2, 1.0);       // v at B
    return op;
}

TailVertexOperator example3_case2() {
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    GraphWithTails g(core, {{0, 1}, {1, 1}});
    TailVertexOperator op;
    op.g = g;
    op.core_op = VertexOperator(op.g.core());
    op.core_op.set_edge_coupling(0, 1.0);   // a = b_{01:02}
    op.core_op.set_edge_coupling(1, 1.0);   // b = b_{01:A}
    op.core_op.set_edge_coupling(2, 0.5);   // c = b_{02:A}
    op.core_op.set_potential(0, 0.0);       // u
    op.core_op.set_potential(1, 0.0);       // v
    op.core_op.set_potential(2, 1.0);       // w = 2bc/a
    return op;
}

TailVertexOperator k5_tail() {
    std::vector<Edge> edges;
    int id = 0;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) edges.push_back({id++, u, v});
    GraphWithTails g(Graph({0, 1, 2, 3, 4}, edges), {{0, 1}});
    return laplace_beltrami_vertex(g).shifted(2.0);
}

SimplicialComplex tetrahedron_boundary() {
    return SimplicialComplex({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

SimplicialOperator tetrahedron_face_operator() {
    SimplicialComplex K = tetrahedron_boundary();
    SimplicialOperator op;
    op.dim = 2;
    int n = K.count(2);
    op.potential.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) op.couplings[{i, j}] = 1.0;
    return op;
}

FermionicQuadraticForm fermion_form(int n) {
    FermionicQuadraticForm f;
    f.A = Eigen::MatrixXd::Zero(n, n);
    f.B = Eigen::MatrixXd::Zero(n, n);
    switch (n) {
        case 1:
            f.B << 2.0;
            break;
        case 2:
            f.A << 0.0, 0.5, -0.5, 0.0;
            f.B << 1.0, 0.3, 0.3, 2.0;
            break;
        case 3:
            f.A << 0.0, 0.4, -0.2, -0.4, 0.0, 0.7, 0.2, -0.7, 0.0;
            f.B << 1.2, 0.1, -0.3, 0.1, 0.8, 0.5, -0.3, 0.5, -0.6;
            break;
        case 4:
            f.A << 0.0, 0.3, -0.1, 0.6, -0.3, 0.0, 0.2, -0.5, 0.1, -0.2, 0.0, 0.4, -0.6, 0.5,
                -0.4, 0.0;
            f.B << 0.9, 0.2, 0.0, -0.1, 0.2, -1.1, 0.3, 0.0, 0.0, 0.3, 0.7, 0.2, -0.1, 0.0, 0.2,
                1.4;
            break;
        default:
            throw input_error("fermion fixtures are provided for n = 1..4");
    }
    return f;
}

}  // namespace qgraph::fixtures
