#include "qgraph/fermion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>

namespace qgraph {

void FermionicQuadraticForm::require_valid() const {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw input_error("A and B must be square of the same size");
    if ((A + A.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw input_error("A must be exactly antisymmetric");
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw input_error("B must be exactly symmetric");
}

namespace {

constexpr int kMaxModes = 12;

// a_p on the ordered basis a_{j1}...a_{jk}(eta): sign counts the creators
// with smaller index that a_p moves past.
Eigen::MatrixXd creation_matrix(int n, int p) {
    int dim = 1 << n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    for (int mask = 0; mask < dim; ++mask) {
        if (mask & (1 << p)) continue;
        int below = std::popcount(static_cast<unsigned>(mask & ((1 << p) - 1)));
        M(mask | (1 << p), mask) = (below % 2 == 0) ? 1.0 : -1.0;
    }
    return M;
}

}  // namespace

double FockMatrix::canonical_residual() const {
    double worst = 0.0;
    int n = static_cast<int>(create.size());
    int dim = static_cast<int>(L.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            worst = std::max(worst,
                             (create[p] * create[q] + create[q] * create[p]).cwiseAbs().maxCoeff());
            Eigen::MatrixXd anti = annihilate[p] * create[q] + create[q] * annihilate[p];
            if (p == q) anti -= I;
            worst = std::max(worst, anti.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

Eigen::VectorXd FockMatrix::spectrum() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    return es.eigenvalues();
}

FockMatrix build_fock(const FermionicQuadraticForm& form) {
    form.require_valid();
    int n = form.n();
    if (n > kMaxModes) throw input_error("Fock representation capped at 12 modes");
    FockMatrix out;
    for (int p = 0; p < n; ++p) {
        out.create.push_back(creation_matrix(n, p));
        out.annihilate.push_back(out.create.back().transpose());
    }
    int dim = 1 << n;
    out.L = form.constant * Eigen::MatrixXd::Identity(dim, dim);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (form.A(p, q) != 0.0) {
                out.L += form.A(p, q) * out.create[p] * out.create[q];
                out.L -= form.A(p, q) * out.annihilate[p] * out.annihilate[q];  // C = -A
            }
            if (form.B(p, q) != 0.0) out.L += form.B(p, q) * out.annihilate[p] * out.create[q];
        }
    }
    return out;
}

DMatrixResult d_matrix(const FermionicQuadraticForm& form) {
    form.require_valid();
    DMatrixResult out;
    out.D = 2.0 * form.A + form.B;
    out.rewriting_constant = out.D.trace();

    int n = form.n();
    if (n <= 10) {
        FermionicQuadraticForm base = form;
        base.constant = 0.0;
        FockMatrix fock = build_fock(base);
        int dim = 1 << n;
        Eigen::MatrixXd composed = Eigen::MatrixXd::Zero(dim, dim);
        for (int p = 0; p < n; ++p) {
            Eigen::MatrixXd aplus = fock.annihilate[p] + fock.create[p];
            for (int q = 0; q < n; ++q) {
                if (out.D(p, q) == 0.0) continue;
                Eigen::MatrixXd aminus = fock.annihilate[q] - fock.create[q];
                composed += out.D(p, q) * aplus * aminus;
            }
        }
        Eigen::MatrixXd diff = composed + 2.0 * fock.L -
                               out.rewriting_constant * Eigen::MatrixXd::Identity(dim, dim);
        out.identity_residual = diff.cwiseAbs().maxCoeff();
    }
    return out;
}

PredictedSpectrum predicted_spectrum(const FermionicQuadraticForm& form) {
    form.require_valid();
    int n = form.n();
    if (n > 20) throw input_error("subset-sum enumeration capped at 20 modes");
    Eigen::MatrixXd D = 2.0 * form.A + form.B;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
    PredictedSpectrum out;
    out.mu = svd.singularValues();  // descending

    // trace matching: tr L = 2^{n-1} tr B + 2^n const; tr of the raw subset
    // multiset is 2^{n-1} sum mu
    double sum_mu = out.mu.sum();
    out.shift = 0.5 * (form.B.trace() - sum_mu) + form.constant;

    out.values.reserve(1u << n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) s += out.mu(j);
        out.values.push_back(s + out.shift);
    }
    std::sort(out.values.begin(), out.values.end());
    return out;
}

double BogolyubovTransform::orthogonality_residual() const {
    int n = static_cast<int>(P.rows());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    return std::max((O_plus().transpose() * O_plus() - I).cwiseAbs().maxCoeff(),
                    (O_minus().transpose() * O_minus() - I).cwiseAbs().maxCoeff());
}

BogolyubovApplied bogolyubov_apply(const FermionicQuadraticForm& form,
                                   const BogolyubovTransform& t, bool check_spectrum) {
    form.require_valid();
    if (t.orthogonality_residual() > 1e-10)
        throw invalid_transform_error("O+ = P + Q and O- = P - Q must be orthogonal");

    Eigen::MatrixXd D = 2.0 * form.A + form.B;
    Eigen::MatrixXd Op = t.O_plus(), Om = t.O_minus();
    BogolyubovApplied out;
    out.D_prime = Op.transpose() * D * Om.transpose();
    out.rule_residual = (D - Op * out.D_prime * Om).cwiseAbs().maxCoeff();

    // invert D' = 2A' + B' and keep the Fock spectrum by adjusting the constant
    out.transformed.A = 0.25 * (out.D_prime - out.D_prime.transpose());
    out.transformed.B = 0.5 * (out.D_prime + out.D_prime.transpose());
    out.transformed.constant = form.constant + 0.5 * (D.trace() - out.D_prime.trace());

    if (check_spectrum && form.n() <= 10) {
        Eigen::VectorXd s0 = build_fock(form).spectrum();
        Eigen::VectorXd s1 = build_fock(out.transformed).spectrum();
        out.spectrum_deviation = (s0 - s1).cwiseAbs().maxCoeff();
    }
    return out;
}

DiagonalizationResult diagonalize(const FermionicQuadraticForm& form) {
    form.require_valid();
    Eigen::MatrixXd D = 2.0 * form.A + form.B;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullU | Eigen::ComputeFullV);

    DiagonalizationResult out;
    Eigen::MatrixXd Op = svd.matrixU();
    Eigen::MatrixXd Om = svd.matrixV().transpose();
    out.transform.P = 0.5 * (Op + Om);
    out.transform.Q = 0.5 * (Op - Om);
    out.mu = svd.singularValues();
    out.D_prime = Op.transpose() * D * Om.transpose();
    out.offdiag_residual =
        (out.D_prime - Eigen::MatrixXd(out.mu.asDiagonal())).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace qgraph
