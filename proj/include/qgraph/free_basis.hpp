#pragma once

#include <complex>
#include <vector>

namespace qgraph {

using cplx = std::complex<double>;

// Solutions of the free lattice equation psi_{n-1} + psi_{n+1} = lambda psi_n.
// Branch convention: |a_plus| >= 1, and on the real scattering zone
// Im a_plus >= 0, which makes psi_plus the growing (resp. e^{+in theta})
// solution.
struct FreeSolutionBasis {
    cplx lambda;
    cplx a_plus;
    cplx a_minus;
    bool degenerate = false;  // lambda = +-2, a_plus = a_minus

    cplx C(int n) const;
    cplx S(int n) const;
    cplx psi_plus(int n) const;
    cplx psi_minus(int n) const;
};

FreeSolutionBasis free_basis(cplx lambda);

}  // namespace qgraph
