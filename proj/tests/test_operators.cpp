#include <doctest.h>

#include <random>

#include "qgraph/chain.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/free_basis.hpp"
#include "qgraph/operators.hpp"
#include "support/random_instances.hpp"

using namespace qgraph;

static Graph path_graph(int n) {
    std::vector<int> vids(n);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) vids[i] = i;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i, i + 1});
    return Graph(vids, edges);
}

static Graph k5() {
    std::vector<Edge> edges;
    int id = 0;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) edges.push_back({id++, u, v});
    return Graph({0, 1, 2, 3, 4}, edges);
}

static Eigen::MatrixXd boundary_matrix(const Graph& g) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(g.num_vertices(), g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        B(g.vertex_index(g.edge(e).v), e) += 1.0;
        B(g.vertex_index(g.edge(e).u), e) -= 1.0;
    }
    return B;
}

TEST_CASE("vertex Laplace-Beltrami has the lattice row pattern") {
    Graph g = path_graph(7);
    Eigen::MatrixXd M = laplace_beltrami_vertex(g).matrix();
    for (int i = 1; i < 6; ++i) {
        CHECK(M(i, i) == -2.0);
        CHECK(M(i, i - 1) == 1.0);
        CHECK(M(i, i + 1) == 1.0);
    }

    Graph tri({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    Eigen::MatrixXd T = laplace_beltrami_vertex(tri).matrix();
    CHECK(T.diagonal().isApproxToConstant(-2.0));
    CHECK(T(0, 1) == 1.0);
    CHECK(T(1, 2) == 1.0);
}

TEST_CASE("vertex Laplace-Beltrami equals minus the composition on a random graph") {
    std::mt19937_64 rng(3);
    Graph g = testsupport::random_graph(rng, 10, 12);
    Eigen::MatrixXd B = boundary_matrix(g);
    Eigen::MatrixXd composition = B * B.transpose();  // boundary after coboundary
    Eigen::MatrixXd M = laplace_beltrami_vertex(g).matrix();
    CHECK((composition + M).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("edge and vertex Laplace-Beltrami coincide on the lattice line") {
    int n = 9;
    Graph g = path_graph(n);
    Eigen::MatrixXd Mv = laplace_beltrami_vertex(g).matrix();
    Eigen::MatrixXd Me = laplace_beltrami_edge(g).matrix();
    // edge i <-> vertex i away from the truncation boundary
    for (int i = 1; i < n - 2; ++i)
        for (int j = 1; j < n - 2; ++j) CHECK(Me(i, j) == Mv(i, j));
}

TEST_CASE("edge Laplace-Beltrami on the triangle matches the composition up to gauge") {
    Graph tri({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    Eigen::MatrixXd Me = laplace_beltrami_edge(tri).matrix();
    CHECK(Me.diagonal().isApproxToConstant(-2.0));
    CHECK(Me(0, 1) == 1.0);
    CHECK(Me(0, 2) == 1.0);
    CHECK(Me(1, 2) == 1.0);

    Eigen::MatrixXd B = boundary_matrix(tri);
    Eigen::MatrixXd T = B.transpose() * B;  // coboundary after boundary on 1-chains
    bool found = false;
    for (int mask = 0; mask < 8 && !found; ++mask) {
        Eigen::Vector3d eps((mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1, (mask & 4) ? -1 : 1);
        Eigen::MatrixXd gauged = eps.asDiagonal() * (-Me) * eps.asDiagonal();
        if ((gauged - T).cwiseAbs().maxCoeff() <= 1e-12) found = true;
    }
    CHECK(found);
}

TEST_CASE("edge Laplace-Beltrami is block diagonal over components") {
    Graph two({0, 1, 2, 10, 11, 12},
              {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}, {3, 10, 11}, {4, 10, 12}, {5, 11, 12}});
    Eigen::MatrixXd M = laplace_beltrami_edge(two).matrix();
    CHECK(M.block(0, 3, 3, 3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary compositions are positive semidefinite") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        Graph g = testsupport::random_graph(rng, 10, 25);
        Eigen::MatrixXd B = boundary_matrix(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(B * B.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(B.transpose() * B);
        CHECK(e0.eigenvalues().minCoeff() >= -1e-10);
        CHECK(e1.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("apply reproduces the free equation on a line window") {
    Graph g = path_graph(12);
    VertexOperator op(g);
    for (int e = 0; e < g.num_edges(); ++e) op.set_edge_coupling(e, 1.0);
    cplx lambda(2.7, 0.0);
    FreeSolutionBasis fb = free_basis(lambda);
    Eigen::VectorXcd psi(12);
    for (int n = 0; n < 12; ++n) psi(n) = fb.psi_plus(n);
    Eigen::VectorXcd lp = op.apply(psi);
    for (int n = 1; n < 11; ++n) CHECK(std::abs(lp(n) - lambda * psi(n)) <= 1e-12);

    CHECK(op.apply(Eigen::VectorXcd::Zero(12)).cwiseAbs().maxCoeff() == 0.0);

    Graph tri({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(3);
    CHECK(laplace_beltrami_vertex(tri).apply(ones).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator application is symmetric") {
    std::mt19937_64 rng(29);
    Graph g = testsupport::random_graph(rng, 8, 14);
    VertexOperator op = testsupport::random_vertex_operator(rng, g);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXcd f(g.num_vertices()), h(g.num_vertices());
    for (int i = 0; i < g.num_vertices(); ++i) {
        f(i) = cplx(uni(rng), uni(rng));
        h(i) = cplx(uni(rng), uni(rng));
    }
    cplx lhs = (op.apply(f).transpose() * h)(0);
    cplx rhs = (f.transpose() * op.apply(h))(0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("free basis roots and recurrences") {
    FreeSolutionBasis deg = free_basis(2.0);
    CHECK(deg.degenerate);
    CHECK(std::abs(deg.a_plus - 1.0) <= 1e-12);

    FreeSolutionBasis b52 = free_basis(2.5);
    CHECK(std::abs(b52.a_plus - 2.0) <= 1e-12);
    CHECK(std::abs(b52.a_minus - 0.5) <= 1e-12);

    FreeSolutionBasis b0 = free_basis(0.0);
    CHECK(std::abs(b0.a_plus - cplx(0.0, 1.0)) <= 1e-12);
    // C pattern from the three-term recurrence: 1, 0, -1, 0, 1, ...
    int expect[8] = {1, 0, -1, 0, 1, 0, -1, 0};
    for (int n = 0; n < 8; ++n) CHECK(std::abs(b0.C(n) - double(expect[n])) <= 1e-12);

    for (cplx lambda : {cplx(1.3, 0.0), cplx(3.1, 0.0), cplx(0.4, 0.8), cplx(-2.6, 0.0)}) {
        FreeSolutionBasis fb = free_basis(lambda);
        CHECK(std::abs(fb.a_plus * fb.a_minus - 1.0) <= 1e-10);
        CHECK(std::abs(fb.a_plus + fb.a_minus - lambda) <= 1e-10);
        CHECK(std::abs(fb.a_plus) >= std::abs(fb.a_minus) - 1e-12);
        double scale = 0.0;
        for (int n = 0; n <= 21; ++n)
            scale = std::max({scale, std::abs(fb.psi_plus(n)), std::abs(fb.psi_minus(n))});
        for (int n = 1; n <= 20; ++n) {
            CHECK(std::abs(fb.psi_plus(n - 1) + fb.psi_plus(n + 1) - lambda * fb.psi_plus(n)) <=
                  1e-10 * scale);
            CHECK(std::abs(fb.C(n - 1) + fb.C(n + 1) - lambda * fb.C(n)) <= 1e-10 * scale);
            CHECK(std::abs(fb.psi_plus(n) - (fb.C(n) + fb.a_plus * fb.S(n))) <= 1e-10 * scale);
            CHECK(std::abs(fb.psi_minus(n) - (fb.C(n) + fb.a_minus * fb.S(n))) <= 1e-10 * scale);
        }
    }

    // scattering zone: unit modulus, conjugate pair, Im a+ >= 0
    FreeSolutionBasis zone = free_basis(1.2);
    CHECK(std::abs(std::abs(zone.a_plus) - 1.0) <= 1e-12);
    CHECK(std::abs(zone.a_minus - std::conj(zone.a_plus)) <= 1e-12);
    CHECK(zone.a_plus.imag() >= 0.0);
}

TEST_CASE("order classification") {
    Graph g = path_graph(6);
    VertexOperator lb = laplace_beltrami_vertex(g);
    OrderReport r = classify_order(lb);
    CHECK(r.order == 2);
    CHECK(r.max_path_edges == 1);

    VertexOperator diag(g);
    for (int id : g.vertex_ids()) diag.set_potential(id, 1.0);
    CHECK(classify_order(diag).order == 0);

    VertexOperator far(g);
    far.add_pair(0, 3, 0.5);
    OrderReport rf = classify_order(far);
    CHECK(rf.max_path_edges == 3);  // BFS distance oracle
    CHECK_FALSE(rf.finite_order);

    EdgeOperator elb = laplace_beltrami_edge(k5());
    CHECK(classify_order(elb).order == 2);
}

TEST_CASE("delta norm closed forms") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        Graph g = testsupport::random_graph(rng, 6, 16);
        DeltaNormReport rv = delta_norm_bound(laplace_beltrami_vertex(g).shifted(2.0));
        double expect_v = 0.0;
        for (int id : g.vertex_ids()) {
            double m = g.degree(id);
            expect_v = std::max(expect_v, m + (m - 2.0) * (m - 2.0));
        }
        CHECK(rv.M_L == doctest::Approx(expect_v).epsilon(1e-12));

        DeltaNormReport re = delta_norm_bound(laplace_beltrami_edge(g).shifted(2.0));
        double expect_e = 0.0;
        for (const Edge& ed : g.edges())
            expect_e = std::max(expect_e, double(g.degree(ed.u) + g.degree(ed.v) - 2));
        CHECK(re.M_L == doctest::Approx(expect_e).epsilon(1e-12));
    }

    DeltaNormReport r4 = delta_norm_bound(laplace_beltrami_vertex(k5()).shifted(2.0));
    CHECK(r4.M_L == doctest::Approx(8.0));
    CHECK(r4.discrete_spectrum_guaranteed);

    DeltaNormReport rt = delta_norm_bound(fixtures::k5_tail());
    CHECK(rt.M_L == doctest::Approx(14.0));
    CHECK(rt.discrete_spectrum_guaranteed);
}

TEST_CASE("apply rejects vectors defined on the wrong site set") {
    Graph tri({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    VertexOperator op = laplace_beltrami_vertex(tri);
    CHECK_THROWS_AS(op.apply(Eigen::VectorXcd::Zero(2)), input_error);
    EdgeOperator eop = laplace_beltrami_edge(tri);
    CHECK_THROWS_AS(eop.apply(Eigen::VectorXcd::Zero(5)), input_error);
}

TEST_CASE("shift moves only the diagonal") {
    auto op = fixtures::triangle_tail_generic();
    auto shifted = op.shifted(2.0);
    CHECK(shifted.core_op.potential(0) == doctest::Approx(op.core_op.potential(0) + 2.0));
    CHECK(shifted.tail_potential == doctest::Approx(2.0));
    CHECK_THROWS_AS(shifted.require_free_tails(), input_error);
    CHECK_NOTHROW(op.require_free_tails());
}
