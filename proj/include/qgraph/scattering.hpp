#pragma once

#include <optional>

#include <Eigen/Dense>

#include "qgraph/chain.hpp"
#include "qgraph/operators.hpp"
#include "qgraph/tail_solution.hpp"

namespace qgraph {

/// Skew product on the asymptotic space H^{2k}, coordinates ordered
/// (alpha_1, beta_1, ..., alpha_k, beta_k): <C_j, S_p> = delta_{jp},
/// extended bilinearly (no conjugation).
cplx skew_product(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

struct ScatteringOptions {
    double rank_tol = 1e-10;       // relative SVD threshold for null spaces
    double ambiguity_band = 1e-7;  // singular values in (rank_tol, band) flag the plane
    int extra_truncation = 0;      // additional free tail sites kept explicit
};

// Space of symplectic scattering data T_lambda, realized as the projection
// of the truncated-system null space to asymptotic coordinates.
struct LagrangianPlane {
    cplx lambda;
    int k = 0;
    Eigen::MatrixXcd basis;       // 2k x plane_dim, orthonormal columns
    Eigen::MatrixXcd full_basis;  // every unknown x solution_dim (core, tail sites, asym)
    int solution_dim = 0;         // null-space dimension of the truncated system
    int plane_dim = 0;            // rank of the asymptotic projection
    bool flagged = false;         // rank decision fell in the ambiguity band
    int dim_strict = 0, dim_loose = 0;
    double rank_tol_used = 0.0;

    /// Asymptotic coordinates of a full-system null vector.
    Eigen::VectorXcd asym_of_full(int col) const;
};

LagrangianPlane scattering_data(const TailVertexOperator& op, cplx lambda,
                                const ScatteringOptions& opts = {});

/// Full solution attached to a null-space column of the truncated system.
TailSolution solution_from_full(const TailVertexOperator& op, const LagrangianPlane& plane,
                                int col);

struct LagrangianCheck {
    double max_skew = 0.0;
    int plane_dim = 0;
    bool dimension_is_k = false;
};

LagrangianCheck check_lagrangian(const LagrangianPlane& plane);

struct singular_lambda_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScatteringMatrix {
    Eigen::MatrixXcd S;  // e_l = psi+_l + sum_j S_{jl} psi-_j
    cplx lambda;
    double unitarity_residual = 0.0;  // ||S* S - I||
    double symmetry_residual = 0.0;   // ||S - S^t||
    // k = 2 diagnostic: smallest relative singular value over per-tail blocks
    // of the plane; ~0 means the tail-to-tail monodromy map does not exist.
    double monodromy_defect = 1.0;
    bool monodromy_singular = false;
};

/// Rewrites the plane over the (psi+, psi-) half-bases and solves for the
/// graph map. Throws singular_lambda_error when the psi+ block is singular
/// or the plane dimension is not k; domain error outside |lambda| < 2.
ScatteringMatrix scattering_matrix(const LagrangianPlane& plane);

struct SOfAForm {
    Eigen::MatrixXcd A;  // unitary with S = A A^t
    double residual = 0.0;
    double unitarity_residual = 0.0;
};

SOfAForm s_of_a_form(const ScatteringMatrix& sm);

namespace detail {

// Truncated linear system over [core values | tail sites 1..m+1 | closure
// unknowns]; shared by the plane, decay-determinant and tail-vanishing paths.
enum class TailClosure {
    asymptotic,  // psi_{j,n} = alpha_j C_n + beta_j S_n at n = m, m+1
    decaying,    // psi_{j,n} = gamma_j a_minus^n
};

struct TailSystem {
    Eigen::MatrixXcd M;
    int n_core = 0, k = 0, m = 0;
    int col_core(int i) const { return i; }
    int col_tail(int j, int n) const { return n_core + j * (m + 1) + (n - 1); }
    int col_closure(int j, int comp) const;  // comp 0,1 for (alpha,beta); 0 for gamma
    int closure_width() const;
    TailClosure closure = TailClosure::asymptotic;
};

TailSystem build_tail_system(const TailVertexOperator& op, cplx lambda, TailClosure closure,
                             int extra_truncation);

/// Square system whose null vectors are solutions vanishing identically on
/// the given tail (defined for k = 2).
TailSystem build_vanishing_system(const TailVertexOperator& op, cplx lambda, int vanish_tail,
                                  int extra_truncation);

TailSolution solution_from_vector(const TailVertexOperator& op, cplx lambda,
                                  const TailSystem& sys, const Eigen::VectorXcd& vec,
                                  int vanish_tail = -1);

}  // namespace detail

}  // namespace qgraph
