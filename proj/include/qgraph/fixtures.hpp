#pragma once

#include <string>
#include <vector>

#include "qgraph/fermion.hpp"
#include "qgraph/operators.hpp"
#include "qgraph/simplicial.hpp"

namespace qgraph::fixtures {

struct FixtureInfo {
    std::string name;
    std::string kind;  // graph | simplicial | fermion
    std::string description;
};

std::vector<FixtureInfo> list();

/// One core vertex with two free tails: the bare lattice line.
TailVertexOperator free_line();

/// Triangle 0AB with a tail at 0; coefficients a, b, c on edges 0A, 0B, AB,
/// potentials u, v, w at 0, A, B.
TailVertexOperator triangle_tail(double a, double b, double c, double u, double v, double w);
TailVertexOperator triangle_tail_generic();
/// Tuned so w - bc/a = v - ac/b: one tail-vanishing eigenvalue at -1/2.
TailVertexOperator triangle_tail_exceptional();
/// Swap-symmetric coefficients (v = w, a = b): exceptional eigenvalue v - c = -1.
TailVertexOperator triangle_tail_z2();

/// Triangle 0AB with both tails at 0; tail-vanishing solutions occur at the
/// roots of (u - lambda)(v - lambda) = c^2, here (1 +- sqrt 2)/2.
TailVertexOperator example3_case1();
/// Triangle 0_1 0_2 A with a tail at each 0_i and v_A = 2bc/a, so the
/// monodromy degenerates at lambda = bc/a = 1/2.
TailVertexOperator example3_case2();

/// K5 core (every vertex degree 4) with one tail, Laplace-Beltrami shifted
/// by +2 so the tails are free.
TailVertexOperator k5_tail();

SimplicialComplex tetrahedron_boundary();
/// Swap-invariant face operator on the tetrahedron boundary 2-simplices:
/// unit couplings give a threefold-degenerate eigenvalue.
SimplicialOperator tetrahedron_face_operator();

FermionicQuadraticForm fermion_form(int n);

}  // namespace qgraph::fixtures
