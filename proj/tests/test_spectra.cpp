#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "qgraph/fixtures.hpp"
#include "qgraph/spectra.hpp"
#include "support/random_instances.hpp"

using namespace qgraph;

TEST_CASE("free line has no normal spectrum and no crossings") {
    auto op = fixtures::free_line();
    NormalSpectrumReport rep = normal_spectrum(op, 2.05, 6.0, 80);
    CHECK(rep.eigenvalues.empty());
    CHECK(rep.sign_changes == 0);
    MaslovReport mr = maslov_crossings(op, -6.0, -2.05, 80);
    CHECK(mr.crossings == 0);
}

TEST_CASE("large potential pushes an eigenvalue above the band") {
    auto op = fixtures::triangle_tail_generic();
    op.core_op.set_potential(0, 10.0);
    NormalSpectrumReport rep = normal_spectrum(op, 2.05, 12.0, 300);
    REQUIRE(rep.eigenvalues.size() >= 1);
    const NormalEigenvalue& ev = rep.eigenvalues.back();
    CHECK(ev.eq_residual <= 1e-9);
    CHECK(ev.decay_ratio < 1.0);
    CHECK(ev.max_tail_amp > 1e-10);

    // truncated dense oracle: 60 explicit tail sites
    Eigen::MatrixXd M = testsupport::truncated_matrix(op, 60);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    double best = 1e9;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        best = std::min(best, std::abs(es.eigenvalues()(i) - ev.lambda));
    CHECK(best <= 1e-6);

    // the analytically continued one-channel coefficient has a pole: the
    // plane collapses onto the decaying direction, psi+ content ~ 0
    LagrangianPlane plane = scattering_data(op, ev.lambda);
    REQUIRE(plane.plane_dim == 1);
    FreeSolutionBasis fb = free_basis(ev.lambda);
    cplx alpha = plane.basis(0, 0), beta = plane.basis(1, 0);
    cplx a_content = (beta - fb.a_minus * alpha) / (fb.a_plus - fb.a_minus);
    CHECK(std::abs(a_content) <= 1e-7);

    MaslovReport mr = maslov_crossings(op, 2.05, 12.0, 300);
    CHECK(mr.crossings >= static_cast<int>(rep.eigenvalues.size()));
    CHECK(mr.crossings == rep.sign_changes);
}

TEST_CASE("normal spectrum agrees with the truncated oracle on the K5 fixture") {
    auto op = fixtures::k5_tail();
    NormalSpectrumReport low = normal_spectrum(op, -8.0, -2.05, 250);
    NormalSpectrumReport high = normal_spectrum(op, 2.05, 8.0, 250);
    int found = static_cast<int>(low.eigenvalues.size() + high.eigenvalues.size());
    CHECK(found >= 1);

    Eigen::MatrixXd M = testsupport::truncated_matrix(op, 60);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    for (const auto& list : {low.eigenvalues, high.eigenvalues}) {
        for (const auto& ev : list) {
            double best = 1e9;
            for (int i = 0; i < es.eigenvalues().size(); ++i)
                best = std::min(best, std::abs(es.eigenvalues()(i) - ev.lambda));
            CHECK(best <= 1e-6);
        }
    }
}

TEST_CASE("windows touching the scattering zone are rejected") {
    auto op = fixtures::free_line();
    CHECK_THROWS_AS(normal_spectrum(op, 1.0, 3.0, 10), input_error);
    CHECK_THROWS_AS(maslov_crossings(op, -1.0, 1.0, 10), input_error);
}

TEST_CASE("exceptional spectrum of the tuned asymmetric triangle") {
    auto op = fixtures::triangle_tail_exceptional();
    auto evs = exceptional_spectrum(op);
    REQUIRE(evs.size() == 1);
    // lambda_ex = w - bc/a with a=1, b=2, c=1, w=3/2
    CHECK(std::abs(evs[0].lambda - (-0.5)) <= 1e-10);
    CHECK(evs[0].nest_residual <= 1e-12);
    CHECK(evs[0].full_residual <= 1e-12);
    CHECK(evs[0].drowned);
    // eigenfunction proportional to (0, 1, -1/2) on (0, A, B)
    const Graph& gp = op.g.core();
    Eigen::VectorXcd f = evs[0].on_basis;
    CHECK(std::abs(f(gp.vertex_index(0))) <= 1e-14);
    cplx ratio = f(gp.vertex_index(2)) / f(gp.vertex_index(1));
    CHECK(std::abs(ratio - cplx(-0.5)) <= 1e-10);
}

TEST_CASE("swap-symmetric triangle: eigenvalue v - c with the odd eigenfunction") {
    auto op = fixtures::triangle_tail_z2();
    auto evs = exceptional_spectrum(op);
    REQUIRE(evs.size() == 1);
    CHECK(std::abs(evs[0].lambda - (-1.0)) <= 1e-12);
    cplx ratio = evs[0].on_basis(2) / evs[0].on_basis(1);
    CHECK(std::abs(ratio + 1.0) <= 1e-12);

    // brute-force 3x3 bordered oracle: rows of the triangle system with
    // psi_0 = psi_1 = 0, so the free 2x2 block must be singular and the
    // nest row a psi_A + b psi_B must vanish
    double a = 1.0, b = 1.0, c = 2.0, v = 1.0, w = 1.0;
    Eigen::Matrix2d block;
    block << v, c, c, w;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
    bool matched = false;
    for (int i = 0; i < 2; ++i) {
        Eigen::Vector2d vec = es.eigenvectors().col(i);
        if (std::abs(a * vec(0) + b * vec(1)) <= 1e-12) {
            matched = true;
            CHECK(std::abs(es.eigenvalues()(i) - evs[0].lambda) <= 1e-12);
        }
    }
    CHECK(matched);

    // a 60-site truncation keeps the tail-vanishing eigenvalue exactly
    Eigen::MatrixXd M = testsupport::truncated_matrix(op, 60);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(M);
    double best = 1e9;
    for (int i = 0; i < ms.eigenvalues().size(); ++i)
        best = std::min(best, std::abs(ms.eigenvalues()(i) - evs[0].lambda));
    CHECK(best <= 1e-8);
}

TEST_CASE("no exceptional spectrum for generic coefficients or the two-nest triangle") {
    CHECK(exceptional_spectrum(fixtures::triangle_tail_generic()).empty());
    CHECK(exceptional_spectrum(fixtures::example3_case2()).empty());

    // contractible graph: the basis is one point
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 1, 2}});
    GraphWithTails g(core, {{0, 1}, {2, 1}});
    TailVertexOperator op;
    op.g = g;
    op.core_op = VertexOperator(core);
    op.core_op.set_edge_coupling(0, 1.0);
    op.core_op.set_edge_coupling(1, 1.0);
    CHECK(exceptional_spectrum(op).empty());
}

TEST_CASE("edge-operator exceptional spectrum through edge-nests") {
    // triangle + tail; edge operator with couplings g between the two
    // nest edges and c from each to the far edge, potentials v on the nest
    // edges: the odd vector (1, -1, 0) is exceptional at v - g
    Graph core({0, 1, 2}, {{0, 0, 1}, {1, 0, 2}, {2, 1, 2}});
    GraphWithTails g(core, {{0, 1}});
    EdgeOperator eop(core);
    double v = 1.0, gg = 2.0, cc = 0.7;
    eop.set_potential(0, v);
    eop.set_potential(1, v);
    eop.set_potential(2, -0.3);
    eop.add_coupling(0, 1, 0, gg);
    eop.add_coupling(0, 2, 1, cc);
    eop.add_coupling(1, 2, 2, cc);
    auto evs = exceptional_spectrum_edge(g, eop);
    REQUIRE(evs.size() >= 1);
    bool found = false;
    for (const auto& ev : evs)
        if (std::abs(ev.lambda - (v - gg)) <= 1e-10) {
            found = true;
            CHECK(ev.nest_residual <= 1e-10);
            CHECK(ev.full_residual <= 1e-10);
        }
    CHECK(found);
}

TEST_CASE("monodromy-degenerate lambdas of the shared-nest triangle") {
    auto op = fixtures::example3_case1();
    SingularScanReport rep = singular_lambda_scan(op, -1.95, 1.95, 200);
    REQUIRE(rep.points.size() == 2);
    // (u - l)(v - l) = c^2 with u = 0, v = 1, c = 1/2: roots (1 +- sqrt 2)/2
    double u = 0.0, v = 1.0, c = 0.5;
    for (const auto& pt : rep.points) {
        CHECK(std::abs((u - pt.lambda) * (v - pt.lambda) - c * c) <= 1e-10);
        CHECK(pt.residual1 <= 1e-9);
        CHECK(pt.residual2 <= 1e-9);
        CHECK(std::abs(pt.other_det) <= 1e-8);  // both tails degenerate together
        // finite Wronskian class vanishes: the two witnesses share the
        // triangle block
        CHECK(std::abs(pt.wronskian_class.alpha_sum) <= 1e-10);
        double wmax = 0.0;
        for (int e = 0; e < 3; ++e)
            wmax = std::max(wmax, std::abs(pt.wronskian_class.finite_part.canonical(e)));
        CHECK(wmax <= 1e-9);
    }
}

TEST_CASE("two-nest triangle: lambda* = bc/a with the triangle-cycle class") {
    auto op = fixtures::example3_case2();
    double a = 1.0, b = 1.0, c = 0.5;
    SingularScanReport rep = singular_lambda_scan(op, -1.9, 1.9, 150);
    REQUIRE(rep.points.size() == 1);
    const SingularLambda& pt = rep.points[0];
    CHECK(std::abs(pt.lambda - b * c / a) <= 1e-10);

    // normalize the witnesses by their value at A (vertex id 2)
    const Graph& gp = op.g.core();
    cplx f1A = pt.vanishing_on_tail1.core(gp.vertex_index(2));
    cplx f2A = pt.vanishing_on_tail2.core(gp.vertex_index(2));
    REQUIRE(std::abs(f1A) > 1e-12);
    REQUIRE(std::abs(f2A) > 1e-12);
    TailSolution w1 = pt.vanishing_on_tail1, w2 = pt.vanishing_on_tail2;
    w1.core /= f1A;
    for (auto& ab : w1.asym) { ab[0] /= f1A; ab[1] /= f1A; }
    w2.core /= f2A;
    for (auto& ab : w2.asym) { ab[0] /= f2A; ab[1] /= f2A; }
    TailWronskianResult w = wronskian_vertex(op, w1, w2);
    HomologyClass h = homology_class(w.chain, op.g);
    CHECK(std::abs(h.alphas[0]) <= 1e-10);
    CHECK(std::abs(h.alphas[1]) <= 1e-10);
    // class = (bc/a) x the cycle 0 -> A -> 0_2 -> 0 (vertices 0, 2, 1)
    double kappa = b * c / a;
    CHECK(std::abs(w.chain.core.get(1, 0, 2) - cplx(kappa)) <= 1e-9);
    CHECK(std::abs(w.chain.core.get(2, 2, 1) - cplx(kappa)) <= 1e-9);
    CHECK(std::abs(w.chain.core.get(0, 1, 0) - cplx(kappa)) <= 1e-9);
}

TEST_CASE("free line has no singular lambda; scan needs two tails") {
    auto line = fixtures::free_line();
    SingularScanReport rep = singular_lambda_scan(line, -1.9, 1.9, 100);
    CHECK(rep.points.empty());
    CHECK_THROWS_AS(singular_lambda_scan(fixtures::triangle_tail_generic(), -1.0, 1.0, 50),
                    input_error);
}

TEST_CASE("perturbation experiment: generic kills, symmetry protects") {
    auto op = fixtures::triangle_tail_z2();

    PerturbationStats zero = perturbation_experiment(op, 0.0, 20, 1);
    CHECK(zero.survived == 20);

    PerturbationStats generic = perturbation_experiment(op, 1e-2, 40, 2);
    CHECK(generic.survived == 0);

    std::map<int, int> swap_ab{{1, 2}, {2, 1}};
    PerturbationStats sym = perturbation_experiment(op, 1e-2, 40, 3, swap_ab);
    CHECK(sym.survived == 40);

    CHECK_THROWS_AS(perturbation_experiment(fixtures::triangle_tail_generic(), 1e-2, 5, 0),
                    input_error);
}
