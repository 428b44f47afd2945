#pragma once

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

// L = sum_{pq} A_pq a_p a_q + B_pq a*_p a_q + C_pq a*_p a*_q + const,
// with A antisymmetric, B symmetric, C = -A, all real. a_p creates, a*_p
// annihilates; sums run over all ordered pairs.
struct FermionicQuadraticForm {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    double constant = 0.0;

    int n() const { return static_cast<int>(B.rows()); }
    void require_valid() const;
};

struct FockMatrix {
    Eigen::MatrixXd L;                       // 2^n x 2^n in the ordered subset basis
    std::vector<Eigen::MatrixXd> create;     // creation matrices a_p
    std::vector<Eigen::MatrixXd> annihilate; // a*_p = a_p^t

    /// worst anticommutator violation of the canonical relations
    double canonical_residual() const;
    Eigen::VectorXd spectrum() const;
};

/// Explicit exterior-algebra representation; n <= 12.
FockMatrix build_fock(const FermionicQuadraticForm& form);

struct DMatrixResult {
    Eigen::MatrixXd D;            // 2A + B: the matrix whose a+a- rewriting reproduces L
    double rewriting_constant = 0.0;  // trace of D
    double identity_residual = 0.0;   // || sum D a+a- + 2 L0 - tr(D) Id ||_max
};

/// Returns D and certifies the rewriting against the Fock oracle:
/// sum_pq D_pq a+_p a-_q = -2 L0 + tr(D) Id for L0 = L with const = 0.
DMatrixResult d_matrix(const FermionicQuadraticForm& form);

struct PredictedSpectrum {
    Eigen::VectorXd mu;      // singular values of D, descending
    std::vector<double> values;  // sorted subset sums plus shift
    double shift = 0.0;
};

/// Subset sums of the singular values of D, shifted by trace matching.
PredictedSpectrum predicted_spectrum(const FermionicQuadraticForm& form);

struct BogolyubovTransform {
    Eigen::MatrixXd P;
    Eigen::MatrixXd Q;

    Eigen::MatrixXd O_plus() const { return P + Q; }
    Eigen::MatrixXd O_minus() const { return P - Q; }
    double orthogonality_residual() const;
};

struct invalid_transform_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BogolyubovApplied {
    FermionicQuadraticForm transformed;
    Eigen::MatrixXd D_prime;      // O+^t D O-^t, so D = O+ D' O-
    double rule_residual = 0.0;   // ||D - O+ D' O-||
    double spectrum_deviation = 0.0;  // Fock spectra of the two forms (n <= 10)
};

BogolyubovApplied bogolyubov_apply(const FermionicQuadraticForm& form,
                                   const BogolyubovTransform& t, bool check_spectrum = true);

struct DiagonalizationResult {
    BogolyubovTransform transform;
    Eigen::VectorXd mu;           // diagonal of D', nonnegative descending
    Eigen::MatrixXd D_prime;
    double offdiag_residual = 0.0;
};

/// SVD route: D = O+ Sigma O- with orthogonal factors.
DiagonalizationResult diagonalize(const FermionicQuadraticForm& form);

}  // namespace qgraph
