#pragma once

#include <array>

#include <Eigen/Dense>

#include "qgraph/free_basis.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/operators.hpp"

namespace qgraph {

// Solution of L psi = lambda psi on a graph with tails: explicit values on
// the core, tail values given by alpha C_n + beta S_n for n >= 0 (the value
// at n = 0 coincides with the core value at the attach vertex).
struct TailSolution {
    cplx lambda;
    Eigen::VectorXcd core;                       // per core vertex index
    std::vector<std::array<cplx, 2>> asym;       // (alpha_j, beta_j) per tail

    cplx tail_value(int tail, int n) const {
        FreeSolutionBasis fb = free_basis(lambda);
        return asym.at(tail)[0] * fb.C(n) + asym.at(tail)[1] * fb.S(n);
    }

    TailSolution conjugate() const {
        TailSolution out = *this;
        out.lambda = std::conj(lambda);
        out.core = core.conjugate();
        for (auto& ab : out.asym) {
            ab[0] = std::conj(ab[0]);
            ab[1] = std::conj(ab[1]);
        }
        return out;
    }

    /// Max residual of the eigenvalue equation over core sites and the first
    /// few tail sites, relative to the solution's sup norm.
    double equation_residual(const TailVertexOperator& op, int tail_depth = 3) const;
};

}  // namespace qgraph
