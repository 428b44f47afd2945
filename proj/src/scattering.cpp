#include "qgraph/scattering.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qgraph {

cplx skew_product(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    if (u.size() != v.size() || u.size() % 2 != 0)
        throw input_error("asymptotic vectors must have equal even dimension");
    cplx s = 0.0;
    for (int j = 0; j < u.size() / 2; ++j)
        s += u(2 * j) * v(2 * j + 1) - u(2 * j + 1) * v(2 * j);
    return s;
}

namespace detail {

int TailSystem::col_closure(int j, int comp) const {
    int base = n_core + k * (m + 1);
    return closure == TailClosure::asymptotic ? base + 2 * j + comp : base + j;
}

int TailSystem::closure_width() const { return closure == TailClosure::asymptotic ? 2 * k : k; }

TailSystem build_tail_system(const TailVertexOperator& op, cplx lambda, TailClosure closure,
                             int extra) {
    op.require_free_tails();
    op.g.require_valid();
    const Graph& g = op.g.core();
    FreeSolutionBasis fb = free_basis(lambda);

    TailSystem sys;
    sys.n_core = g.num_vertices();
    sys.k = op.g.num_tails();
    sys.m = 1 + extra;
    sys.closure = closure;
    int cols = sys.n_core + sys.k * (sys.m + 1) + sys.closure_width();
    int rows = sys.n_core + sys.k * sys.m + 2 * sys.k;
    sys.M = Eigen::MatrixXcd::Zero(rows, cols);

    int row = 0;
    for (int i = 0; i < g.num_vertices(); ++i, ++row) {
        int id = g.vertex_id(i);
        sys.M(row, sys.col_core(i)) = op.core_op.potential(id) - lambda;
        for (int e : g.incident_edges(id)) {
            int o = g.vertex_index(g.other_endpoint(e, id));
            sys.M(row, sys.col_core(o)) += op.core_op.edge_coupling(e);
        }
        for (int j : op.g.tails_at(id)) sys.M(row, sys.col_tail(j, 1)) += 1.0;
    }
    for (int j = 0; j < sys.k; ++j) {
        int attach = g.vertex_index(op.g.tails()[j].attach);
        for (int n = 1; n <= sys.m; ++n, ++row) {
            if (n == 1)
                sys.M(row, sys.col_core(attach)) += 1.0;
            else
                sys.M(row, sys.col_tail(j, n - 1)) += 1.0;
            sys.M(row, sys.col_tail(j, n + 1)) += 1.0;
            sys.M(row, sys.col_tail(j, n)) -= lambda;
        }
        for (int n = sys.m; n <= sys.m + 1; ++n, ++row) {
            sys.M(row, sys.col_tail(j, n)) = 1.0;
            if (closure == TailClosure::asymptotic) {
                sys.M(row, sys.col_closure(j, 0)) = -fb.C(n);
                sys.M(row, sys.col_closure(j, 1)) = -fb.S(n);
            } else {
                sys.M(row, sys.col_closure(j, 0)) = -std::pow(fb.a_minus, n);
            }
        }
    }
    return sys;
}

TailSystem build_vanishing_system(const TailVertexOperator& op, cplx lambda, int vanish_tail,
                                  int extra) {
    op.require_free_tails();
    op.g.require_valid();
    if (op.g.num_tails() != 2)
        throw input_error("tail-vanishing systems are square only for k = 2");
    const Graph& g = op.g.core();
    FreeSolutionBasis fb = free_basis(lambda);

    TailSystem sys;
    sys.n_core = g.num_vertices();
    sys.k = 1;  // one surviving tail
    sys.m = 1 + extra;
    sys.closure = TailClosure::asymptotic;
    int live = 1 - vanish_tail;
    int cols = sys.n_core + (sys.m + 1) + 2;
    int rows = sys.n_core + 1 + sys.m + 2;
    sys.M = Eigen::MatrixXcd::Zero(rows, cols);

    int row = 0;
    for (int i = 0; i < g.num_vertices(); ++i, ++row) {
        int id = g.vertex_id(i);
        sys.M(row, sys.col_core(i)) = op.core_op.potential(id) - lambda;
        for (int e : g.incident_edges(id)) {
            int o = g.vertex_index(g.other_endpoint(e, id));
            sys.M(row, sys.col_core(o)) += op.core_op.edge_coupling(e);
        }
        for (int j : op.g.tails_at(id))
            if (j == live) sys.M(row, sys.col_tail(0, 1)) += 1.0;
    }
    // vanish-tail site-1 equation reduces to psi(attach) = 0
    sys.M(row++, sys.col_core(g.vertex_index(op.g.tails()[vanish_tail].attach))) = 1.0;
    int attach = g.vertex_index(op.g.tails()[live].attach);
    for (int n = 1; n <= sys.m; ++n, ++row) {
        if (n == 1)
            sys.M(row, sys.col_core(attach)) += 1.0;
        else
            sys.M(row, sys.col_tail(0, n - 1)) += 1.0;
        sys.M(row, sys.col_tail(0, n + 1)) += 1.0;
        sys.M(row, sys.col_tail(0, n)) -= lambda;
    }
    for (int n = sys.m; n <= sys.m + 1; ++n, ++row) {
        sys.M(row, sys.col_tail(0, n)) = 1.0;
        sys.M(row, sys.col_closure(0, 0)) = -fb.C(n);
        sys.M(row, sys.col_closure(0, 1)) = -fb.S(n);
    }
    return sys;
}

TailSolution solution_from_vector(const TailVertexOperator& op, cplx lambda,
                                  const TailSystem& sys, const Eigen::VectorXcd& vec,
                                  int vanish_tail) {
    TailSolution sol;
    sol.lambda = lambda;
    sol.core = vec.head(sys.n_core);
    int k_full = op.g.num_tails();
    sol.asym.assign(k_full, {cplx(0.0), cplx(0.0)});
    if (vanish_tail < 0) {
        for (int j = 0; j < sys.k; ++j) {
            if (sys.closure == TailClosure::asymptotic) {
                sol.asym[j] = {vec(sys.col_closure(j, 0)), vec(sys.col_closure(j, 1))};
            } else {
                FreeSolutionBasis fb = free_basis(lambda);
                cplx gamma = vec(sys.col_closure(j, 0));
                sol.asym[j] = {gamma, gamma * fb.a_minus};
            }
        }
    } else {
        int live = 1 - vanish_tail;
        sol.asym[live] = {vec(sys.col_closure(0, 0)), vec(sys.col_closure(0, 1))};
    }
    return sol;
}

}  // namespace detail

Eigen::VectorXcd LagrangianPlane::asym_of_full(int col) const {
    return full_basis.col(col).tail(2 * k);
}

LagrangianPlane scattering_data(const TailVertexOperator& op, cplx lambda,
                                const ScatteringOptions& opts) {
    using detail::TailClosure;
    detail::TailSystem sys =
        detail::build_tail_system(op, lambda, TailClosure::asymptotic, opts.extra_truncation);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.M, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    double smax = sigma.size() ? sigma(0) : 0.0;
    int nsv = static_cast<int>(sigma.size());
    int cols = static_cast<int>(sys.M.cols());

    LagrangianPlane plane;
    plane.lambda = lambda;
    plane.k = op.g.num_tails();
    plane.rank_tol_used = opts.rank_tol;

    int strict = 0, loose = 0;
    bool band = false;
    for (int i = 0; i < nsv; ++i) {
        double rel = smax > 0 ? sigma(i) / smax : 0.0;
        if (rel <= opts.rank_tol) ++strict;
        if (rel <= opts.ambiguity_band) ++loose;
        if (rel > opts.rank_tol && rel <= opts.ambiguity_band) band = true;
    }
    int extra = cols - nsv;  // structurally null directions (cols > rows)
    plane.dim_strict = strict + extra;
    plane.dim_loose = loose + extra;
    plane.flagged = band;
    plane.solution_dim = plane.dim_strict;

    // null basis: matched near-zero singular directions plus the overflow block
    Eigen::MatrixXcd null_basis(cols, plane.solution_dim);
    int c = 0;
    for (int i = 0; i < nsv; ++i) {
        double rel = smax > 0 ? sigma(i) / smax : 0.0;
        if (rel <= opts.rank_tol) null_basis.col(c++) = svd.matrixV().col(i);
    }
    for (int i = nsv; i < cols; ++i) null_basis.col(c++) = svd.matrixV().col(i);
    plane.full_basis = null_basis;

    Eigen::MatrixXcd proj(2 * plane.k, plane.solution_dim);
    for (int j = 0; j < plane.solution_dim; ++j) proj.col(j) = null_basis.col(j).tail(2 * plane.k);
    if (plane.solution_dim > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> psvd(proj, Eigen::ComputeThinU);
        const auto& ps = psvd.singularValues();
        double pmax = ps.size() ? ps(0) : 0.0;
        int r = 0;
        for (int i = 0; i < ps.size(); ++i)
            if (pmax > 0 && ps(i) > 1e-10 * pmax) ++r;
        plane.plane_dim = r;
        plane.basis = psvd.matrixU().leftCols(r);
    } else {
        plane.plane_dim = 0;
        plane.basis = Eigen::MatrixXcd::Zero(2 * plane.k, 0);
    }
    return plane;
}

TailSolution solution_from_full(const TailVertexOperator& op, const LagrangianPlane& plane,
                                int col) {
    TailSolution sol;
    sol.lambda = plane.lambda;
    int n = op.g.core().num_vertices();
    sol.core = plane.full_basis.col(col).head(n);
    for (int j = 0; j < plane.k; ++j)
        sol.asym.push_back({plane.full_basis.col(col)(plane.full_basis.rows() - 2 * plane.k + 2 * j),
                            plane.full_basis.col(col)(plane.full_basis.rows() - 2 * plane.k + 2 * j + 1)});
    return sol;
}

LagrangianCheck check_lagrangian(const LagrangianPlane& plane) {
    LagrangianCheck out;
    out.plane_dim = plane.plane_dim;
    out.dimension_is_k = (plane.plane_dim == plane.k);
    for (int i = 0; i < plane.basis.cols(); ++i)
        for (int j = i + 1; j < plane.basis.cols(); ++j)
            out.max_skew =
                std::max(out.max_skew, std::abs(skew_product(plane.basis.col(i), plane.basis.col(j))));
    return out;
}

static double monodromy_defect_of(const LagrangianPlane& plane) {
    // smallest relative singular value over the per-tail 2 x d blocks
    double worst = 1.0;
    for (int j = 0; j < plane.k; ++j) {
        Eigen::MatrixXcd blk = plane.basis.middleRows(2 * j, 2);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk);
        const auto& s = svd.singularValues();
        if (s.size() == 0 || s(0) == 0.0) return 0.0;
        worst = std::min(worst, s(s.size() - 1) / s(0));
    }
    return worst;
}

ScatteringMatrix scattering_matrix(const LagrangianPlane& plane) {
    if (std::abs(plane.lambda.imag()) > 1e-12 || std::abs(plane.lambda.real()) >= 2.0)
        throw input_error("scattering matrix is defined for real lambda strictly inside (-2, 2)");
    if (plane.plane_dim != plane.k)
        throw singular_lambda_error("plane dimension differs from tail count");

    FreeSolutionBasis fb = free_basis(plane.lambda);
    cplx denom = fb.a_plus - fb.a_minus;
    int k = plane.k;
    Eigen::MatrixXcd X(k, k), Y(k, k);
    for (int j = 0; j < k; ++j) {
        for (int l = 0; l < k; ++l) {
            cplx alpha = plane.basis(2 * j, l), beta = plane.basis(2 * j + 1, l);
            X(j, l) = (beta - fb.a_minus * alpha) / denom;
            Y(j, l) = (fb.a_plus * alpha - beta) / denom;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> xsvd(X);
    const auto& xs = xsvd.singularValues();
    if (xs(0) == 0.0 || xs(xs.size() - 1) / xs(0) < 1e-10)
        throw singular_lambda_error("psi+ block of the scattering data is singular");

    ScatteringMatrix out;
    out.lambda = plane.lambda;
    out.S = Y * X.inverse();
    out.unitarity_residual =
        (out.S.adjoint() * out.S - Eigen::MatrixXcd::Identity(k, k)).norm();
    out.symmetry_residual = (out.S - out.S.transpose()).norm();
    out.monodromy_defect = monodromy_defect_of(plane);
    out.monodromy_singular = out.monodromy_defect < 1e-8;
    return out;
}

SOfAForm s_of_a_form(const ScatteringMatrix& sm) {
    const Eigen::MatrixXcd& S = sm.S;
    int k = static_cast<int>(S.rows());
    Eigen::MatrixXd Sr = S.real(), Si = S.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Sr + Sr.transpose()));
    Eigen::MatrixXd Q = es.eigenvectors();
    Eigen::VectorXd ev = es.eigenvalues();

    // rotate within eigenvalue clusters of Re S to diagonalize Im S as well
    int start = 0;
    while (start < k) {
        int end = start + 1;
        while (end < k && std::abs(ev(end) - ev(start)) < 1e-8 * (1.0 + std::abs(ev(start))))
            ++end;
        if (end - start > 1) {
            Eigen::MatrixXd blk =
                Q.middleCols(start, end - start).transpose() * Si * Q.middleCols(start, end - start);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(0.5 * (blk + blk.transpose()));
            Q.middleCols(start, end - start) = Q.middleCols(start, end - start) * bs.eigenvectors();
        }
        start = end;
    }

    SOfAForm out;
    out.A = Eigen::MatrixXcd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        double dx = Q.col(j).dot(Sr * Q.col(j));
        double dy = Q.col(j).dot(Si * Q.col(j));
        double phi = std::atan2(dy, dx);
        out.A.col(j) = Q.col(j) * std::polar(1.0, phi / 2.0);
    }
    out.residual = (out.A * out.A.transpose() - S).norm();
    out.unitarity_residual =
        (out.A.adjoint() * out.A - Eigen::MatrixXcd::Identity(k, k)).norm();
    return out;
}

}  // namespace qgraph
