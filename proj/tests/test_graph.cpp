#include <doctest.h>

#include <random>

#include "qgraph/chain.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/operators.hpp"
#include "qgraph/simplicial.hpp"
#include "support/random_instances.hpp"

using namespace qgraph;

static Graph triangle() { return Graph({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}}); }

TEST_CASE("validate accepts the triangle and rejects ends") {
    CHECK(triangle().validate().valid());

    Graph single({0, 1}, {{0, 0, 1}});
    auto r = single.validate();
    CHECK_FALSE(r.valid());
    CHECK(r.end_vertices == std::vector<int>{0, 1});

    Graph path4({0, 1, 2, 3}, {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}});
    auto r4 = path4.validate();
    CHECK(r4.end_vertices == std::vector<int>{0, 3});
}

TEST_CASE("validate reports loops") {
    Graph g({0, 1, 2}, {{0, 0, 1}, {1, 1, 2}, {2, 0, 2}, {3, 1, 1}});
    auto r = g.validate();
    CHECK(r.loop_edges == std::vector<int>{3});
}

TEST_CASE("boundary of elementary chains") {
    Graph g = triangle();
    Chain1 w(g);
    w.set(0, 0, 1, 1.0);  // oriented 0 -> 1
    Chain0 b = boundary(w);
    CHECK(b.at(1) == cplx(1.0));
    CHECK(b.at(0) == cplx(-1.0));
    CHECK(b.at(2) == cplx(0.0));

    // oriented triangle cycle 0 -> 1 -> 2 -> 0
    Chain1 cyc(g);
    cyc.set(0, 0, 1, 1.0);
    cyc.set(2, 1, 2, 1.0);
    cyc.set(1, 2, 0, 1.0);
    CHECK(boundary(cyc).values().cwiseAbs().maxCoeff() == 0.0);

    // telescoping path 0 -> 1 -> 2
    Chain1 path(g);
    path.set(0, 0, 1, 1.0);
    path.set(2, 1, 2, 1.0);
    Chain0 bp = boundary(path);
    CHECK(bp.at(0) == cplx(-1.0));
    CHECK(bp.at(2) == cplx(1.0));
    CHECK(bp.at(1) == cplx(0.0));
}

TEST_CASE("chains reject unknown edges and vertices") {
    Graph g = triangle();
    Chain1 w(g);
    CHECK_THROWS_AS(w.set(7, 0, 1, 1.0), input_error);
    CHECK_THROWS_AS(w.get(0, 0, 7), input_error);
    Chain0 f(g);
    CHECK_THROWS_AS(f.set(9, 1.0), input_error);
}

TEST_CASE("chain coefficients flip sign under reorientation") {
    Graph g = triangle();
    Chain1 w(g);
    w.set(0, 1, 0, cplx(2.0, -1.0));
    CHECK(w.get(0, 0, 1) == cplx(-2.0, 1.0));
    CHECK(w.get(0, 1, 0) == cplx(2.0, -1.0));
}

TEST_CASE("coboundary is the adjoint of boundary") {
    Graph g = triangle();
    Chain1 d0 = coboundary(Chain0::delta(g, 0));
    CHECK(d0.get(0, 0, 1) == cplx(-1.0));  // f_head - f_tail = 0 - 1
    CHECK(d0.get(1, 0, 2) == cplx(-1.0));
    CHECK(d0.get(2, 1, 2) == cplx(0.0));

    Chain0 zero(g);
    CHECK(coboundary(zero).max_abs() == 0.0);

    // adjointness on a random graph, direct double loop oracle
    std::mt19937_64 rng(7);
    Graph rg = testsupport::random_graph(rng, 8, 14);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Chain0 f(rg);
    Chain1 h(rg);
    for (int i = 0; i < rg.num_vertices(); ++i) f.values()(i) = cplx(uni(rng), uni(rng));
    for (int e = 0; e < rg.num_edges(); ++e) h.values()(e) = cplx(uni(rng), uni(rng));
    cplx lhs = 0.0, rhs = 0.0;
    Chain1 cf = coboundary(f);
    for (int e = 0; e < rg.num_edges(); ++e) lhs += cf.canonical(e) * h.canonical(e);
    Chain0 bh = boundary(h);
    for (int i = 0; i < rg.num_vertices(); ++i) rhs += f.values()(i) * bh.values()(i);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("boundary(coboundary(delta_P)) carries m_P at P") {
    std::mt19937_64 rng(11);
    Graph g = testsupport::random_graph(rng, 6, 12);
    for (int id : g.vertex_ids()) {
        Chain0 composed = boundary(coboundary(Chain0::delta(g, id)));
        CHECK(composed.at(id).real() == doctest::Approx(g.degree(id)).epsilon(1e-14));
    }
}

TEST_CASE("boundary/coboundary composition equals minus the Laplace-Beltrami matrix") {
    std::mt19937_64 rng(23);
    Graph g = testsupport::random_graph(rng, 10, 12);
    Eigen::MatrixXd lb = laplace_beltrami_vertex(g).matrix();
    for (int i = 0; i < g.num_vertices(); ++i) {
        Chain0 col = boundary(coboundary(Chain0::delta(g, g.vertex_id(i))));
        for (int j = 0; j < g.num_vertices(); ++j)
            CHECK(std::abs(col.values()(j).real() + lb(j, i)) <= 1e-12);
    }
}

TEST_CASE("compute_basis on the triangle-with-tail geometry") {
    auto op = fixtures::triangle_tail_generic();
    BasisDecomposition bd = compute_basis(op.g);
    CHECK(bd.basis.num_vertices() == 3);
    CHECK(bd.basis.num_edges() == 3);
    CHECK(bd.nests == std::vector<int>{0});
    CHECK_FALSE(bd.topologically_trivial);
    REQUIRE(bd.edge_nests.size() == 1);
    CHECK(bd.edge_nests[0].kind == EdgeNest::Kind::tail_edge);
}

TEST_CASE("compute_basis prunes a tree-with-tail to one point") {
    // path 0-1-2 with a tail at 0: contractible
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 1, 2}});
    GraphWithTails g(core, {{2, 1}});
    CHECK(g.validate().valid() == false);  // vertex 0 has degree 1
    GraphWithTails g2(core, {{2, 1}, {0, 1}});
    REQUIRE(g2.validate().valid());
    BasisDecomposition bd = compute_basis(g2);
    CHECK(bd.topologically_trivial);
    CHECK(bd.basis.num_vertices() == 1);
}

TEST_CASE("compute_basis finds both nests in the two-tail triangle") {
    auto op = fixtures::example3_case2();
    BasisDecomposition bd = compute_basis(op.g);
    CHECK(bd.nests == std::vector<int>{0, 1});
    CHECK(bd.basis.num_edges() == 3);
}

TEST_CASE("compute_basis records pruned-tree attachment edges as edge-nests") {
    // triangle 0AB with a pendant path 0-3-4 whose end carries the tail
    Graph core({0, 1, 2, 3, 4},
               {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}, {3, 0, 3}, {4, 3, 4}});
    GraphWithTails g(core, {{4, 1}});
    REQUIRE(g.validate().valid());
    BasisDecomposition bd = compute_basis(g);
    CHECK(bd.basis.num_vertices() == 3);
    CHECK(bd.nests == std::vector<int>{0});
    CHECK(bd.removed_vertices == std::vector<int>{4, 3});
    REQUIRE(bd.edge_nests.size() == 1);
    CHECK(bd.edge_nests[0].kind == EdgeNest::Kind::core_edge);
    CHECK(core.edge(bd.edge_nests[0].edge_index).id == 3);
}

TEST_CASE("compute_basis is idempotent on its own output") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto op = testsupport::random_tail_instance(rng, 5, 12, 2);
        BasisDecomposition bd = compute_basis(op.g);
        if (bd.topologically_trivial) continue;
        GraphWithTails again(bd.basis, {});
        BasisDecomposition bd2 = compute_basis(again);
        CHECK(bd2.basis.num_vertices() == bd.basis.num_vertices());
        CHECK(bd2.basis.num_edges() == bd.basis.num_edges());
        CHECK(bd2.nests.empty());
        CHECK(static_cast<int>(bd.nests.size()) <= op.g.num_tails());
    }
}

TEST_CASE("is_cycle on elementary chains") {
    Graph g = triangle();
    Chain1 cyc(g);
    cyc.set(0, 0, 1, 1.0);
    cyc.set(2, 1, 2, 1.0);
    cyc.set(1, 2, 0, 1.0);
    CHECK(is_cycle(cyc).is_cycle);

    Chain1 single(g);
    single.set(0, 0, 1, 1.0);
    auto rep = is_cycle(single);
    CHECK_FALSE(rep.is_cycle);
    CHECK(rep.max_residual == doctest::Approx(1.0));
}

TEST_CASE("tail chains require eventually constant samples") {
    auto op = fixtures::triangle_tail_generic();
    Chain1 core(op.g.core());
    CHECK_THROWS_AS(tail_chain_from_samples(op.g, core, {{1.0, 1.0, 0.5}}), input_error);
    TailChain ok = tail_chain_from_samples(op.g, core, {{cplx(0.5), cplx(0.5), cplx(0.5)}});
    CHECK(ok.tail_constants[0] == cplx(0.5));
}

TEST_CASE("simplicial complexes close downward and satisfy dd = 0") {
    SimplicialComplex K({{0, 1, 2, 3}, {2, 3, 4}});
    CHECK(K.count(0) == 5);
    CHECK(K.count(1) == 8);  // 6 tetrahedron edges plus {24, 34}
    CHECK(K.count(2) == 5);  // 4 tetra faces + 234
    CHECK(K.count(3) == 1);
    for (int dim = 2; dim <= K.top_dimension(); ++dim) {
        Eigen::MatrixXd dd = K.boundary_matrix(dim - 1) * K.boundary_matrix(dim);
        CHECK(dd.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("parallel edges are accepted and contribute with multiplicity") {
    Graph g({0, 1, 2}, {{0, 0, 1}, {1, 0, 1}, {2, 1, 2}, {3, 0, 2}});
    CHECK(g.validate().valid());
    CHECK(g.degree(0) == 3);
    CHECK(g.degree(1) == 3);

    VertexOperator lb = laplace_beltrami_vertex(g);
    CHECK(lb.pair_coupling(0, 1) == 2.0);
    Eigen::MatrixXd M = lb.matrix();
    CHECK(M(0, 1) == 2.0);
    CHECK(M(0, 0) == -3.0);

    // the composition identity survives multiplicities
    for (int i = 0; i < 3; ++i) {
        Chain0 col = boundary(coboundary(Chain0::delta(g, g.vertex_id(i))));
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(col.values()(j).real() + M(j, i)) <= 1e-12);
    }
}

TEST_CASE("graphs with tails validate through full degrees") {
    auto free_line = fixtures::free_line();
    CHECK(free_line.g.validate().valid());
    CHECK(free_line.g.full_degree(0) == 2);

    auto c1 = fixtures::example3_case1();
    CHECK(c1.g.validate().valid());
    CHECK(c1.g.full_degree(0) == 4);  // two triangle edges + two tails
}
