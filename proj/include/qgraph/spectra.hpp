#pragma once

#include <map>
#include <optional>

#include "qgraph/scattering.hpp"
#include "qgraph/wronskian.hpp"

namespace qgraph {

struct NormalEigenvalue {
    double lambda = 0.0;
    double eq_residual = 0.0;
    double decay_ratio = 0.0;    // |a_minus| < 1
    double max_tail_amp = 0.0;   // largest |gamma_j|; ~0 means tail-vanishing
    TailSolution fn;
};

struct NormalSpectrumReport {
    std::vector<NormalEigenvalue> eigenvalues;
    std::vector<double> tail_vanishing_hits;  // roots whose eigenfunction dies on all tails
    std::vector<double> skipped;              // grid points where dim T != k
    std::vector<int> det_signs;
    std::vector<double> grid;
    int sign_changes = 0;
};

/// Scan det of the decaying-closure system over a real window disjoint from
/// [-2, 2]; sign changes refine to eigenvalues, each verified by residual and
/// tail decay.
NormalSpectrumReport normal_spectrum(const TailVertexOperator& op, double lo, double hi,
                                     int grid, const ScatteringOptions& opts = {});

struct MaslovReport {
    int crossings = 0;
    std::vector<int> signs;
    std::vector<double> grid;
};

/// Sign-change tally of the same determinant: crossings of T_lambda with the
/// cycle of planes meeting span{psi-}.
MaslovReport maslov_crossings(const TailVertexOperator& op, double lo, double hi, int grid);

struct ExceptionalEigenvalue {
    double lambda = 0.0;
    Eigen::VectorXcd on_basis;   // indexed like the basis graph's vertices
    double nest_residual = 0.0;
    double full_residual = 0.0;
    bool drowned = false;        // |lambda| <= 2
};

/// Dirichlet-at-nests eigenproblem on the basis Gamma', filtered by the nest
/// equations, each survivor verified as a zero-extended eigenfunction.
std::vector<ExceptionalEigenvalue> exceptional_spectrum(const TailVertexOperator& op,
                                                        double nest_tol = 1e-8);

/// Edge-operator variant: eigenproblem on the Gamma' edges, filtered by the
/// edge-nest equations (tail junction couplings are unit).
std::vector<ExceptionalEigenvalue> exceptional_spectrum_edge(const GraphWithTails& g,
                                                             const EdgeOperator& core_op,
                                                             double nest_tol = 1e-8);

struct SingularLambda {
    double lambda = 0.0;
    TailSolution vanishing_on_tail1;  // zero on tail 1
    TailSolution vanishing_on_tail2;
    HomologyClass wronskian_class;    // finite cycle; alphas ~ 0
    double other_det = 0.0;           // det of the complementary system at the root
    double residual1 = 0.0, residual2 = 0.0;
};

struct SingularScanReport {
    std::vector<SingularLambda> points;
    std::vector<int> det_signs;
    std::vector<double> grid;
    std::vector<cplx> complex_candidates;  // optional off-axis probe
};

/// k = 2 only: locate lambda in the scattering zone where the tail-to-tail
/// monodromy degenerates, witnessed by per-tail-vanishing solutions.
SingularScanReport singular_lambda_scan(const TailVertexOperator& op, double lo, double hi,
                                        int grid, bool complex_probe = false);

struct PerturbationStats {
    int trials = 0;
    int survived = 0;
    double survival_fraction = 0.0;
};

/// Randomly perturbs finite-part coefficients and reruns the exceptional
/// detector; an optional vertex permutation symmetrizes every perturbation.
PerturbationStats perturbation_experiment(const TailVertexOperator& op, double magnitude,
                                          int trials, unsigned seed,
                                          const std::map<int, int>& symmetry = {},
                                          double nest_tol = 1e-8);

}  // namespace qgraph
