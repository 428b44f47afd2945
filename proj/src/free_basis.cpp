#include "qgraph/free_basis.hpp"

#include <cmath>

namespace qgraph {

static cplx recurrence(cplx lambda, cplx f0, cplx f1, int n) {
    if (n == 0) return f0;
    if (n == 1) return f1;
    if (n < 0) {
        // run the recurrence backwards: f_{n-1} = lambda f_n - f_{n+1}
        cplx hi = f1, lo = f0;
        for (int k = 0; k > n; --k) {
            cplx prev = lambda * lo - hi;
            hi = lo;
            lo = prev;
        }
        return lo;
    }
    cplx lo = f0, hi = f1;
    for (int k = 1; k < n; ++k) {
        cplx next = lambda * hi - lo;
        lo = hi;
        hi = next;
    }
    return hi;
}

cplx FreeSolutionBasis::C(int n) const { return recurrence(lambda, 1.0, 0.0, n); }
cplx FreeSolutionBasis::S(int n) const { return recurrence(lambda, 0.0, 1.0, n); }
cplx FreeSolutionBasis::psi_plus(int n) const { return std::pow(a_plus, n); }
cplx FreeSolutionBasis::psi_minus(int n) const { return std::pow(a_minus, n); }

FreeSolutionBasis free_basis(cplx lambda) {
    FreeSolutionBasis b;
    b.lambda = lambda;
    cplx s = std::sqrt(lambda * lambda - 4.0);
    cplx r1 = (lambda + s) / 2.0;
    cplx r2 = (lambda - s) / 2.0;
    if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
    if (std::abs(std::abs(r1) - std::abs(r2)) < 1e-14 && r1.imag() < r2.imag()) std::swap(r1, r2);
    b.a_plus = r1;
    b.a_minus = r2;
    b.degenerate = std::abs(r1 - r2) < 1e-12;
    return b;
}

}  // namespace qgraph
