// spin_ops.cpp — Collective spin operator construction and symmetry checks

#include "collspin/spin_ops.hpp"

#include <cmath>
#include <complex>

#include "collspin/errors.hpp"

namespace collspin {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

Eigen::VectorXcd SpinOperators::sz_state(double m) const {
    const int idx = static_cast<int>(std::lround(J - m));
    if (idx < 0 || idx >= dim) {
        throw ValidationError("Sz eigenvalue m out of range: m=" + std::to_string(m));
    }
    VectorXcd v = VectorXcd::Zero(dim);
    v(idx) = 1.0;
    return v;
}

SpinOperators build_spin_operators(const ModelParams& params) {
    params.validate();
    SpinOperators ops;
    ops.J = params.J;
    ops.theta = params.theta;
    ops.dim = params.dim();
    const int d = ops.dim;
    const double J = params.J;

    ops.Sz = MatrixXcd::Zero(d, d);
    ops.Sp = MatrixXcd::Zero(d, d);
    ops.Sm = MatrixXcd::Zero(d, d);
    // Basis index i holds m = J - i. Ladder elements are closed-form:
    // <m+1|S+|m> = sqrt(J(J+1) - m(m+1)).
    for (int i = 0; i < d; ++i) {
        const double m = J - i;
        ops.Sz(i, i) = m;
        if (i > 0) ops.Sp(i - 1, i) = std::sqrt(J * (J + 1.0) - m * (m + 1.0));
        if (i < d - 1) ops.Sm(i + 1, i) = std::sqrt(J * (J + 1.0) - m * (m - 1.0));
    }
    ops.Sx = 0.5 * (ops.Sp + ops.Sm);
    ops.Sy = std::complex<double>(0.0, -0.5) * (ops.Sp - ops.Sm);
    ops.Dtheta = std::cos(params.theta) * ops.Sm + std::sin(params.theta) * ops.Sp;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ops.Sx);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Sx eigendecomposition failed");
    }
    ops.sxEigs = es.eigenvalues();
    ops.sxBasis = es.eigenvectors();

    // The Sx spectrum -J..J is simple; a collision means the solver went
    // wrong and downstream indexing by m would be meaningless.
    for (int k = 1; k < d; ++k) {
        if (ops.sxEigs(k) - ops.sxEigs(k - 1) < 1e-8) {
            throw NumericalError("degenerate Sx eigenvalues at index " + std::to_string(k));
        }
    }

    // Phase convention: make the largest-magnitude component of each
    // eigenvector real positive, so outputs reproduce across platforms.
    for (int k = 0; k < d; ++k) {
        int imax = 0;
        double best = -1.0;
        for (int i = 0; i < d; ++i) {
            const double a = std::abs(ops.sxBasis(i, k));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        const std::complex<double> z = ops.sxBasis(imax, k);
        if (std::abs(z) > 0.0) ops.sxBasis.col(k) *= std::conj(z) / std::abs(z);
    }
    return ops;
}

Eigen::MatrixXcd jump_operator(const ModelParams& params, const SpinOperators& ops) {
    if (ops.J != params.J || ops.theta != params.theta) {
        throw ValidationError("SpinOperators were built for different (J, theta)");
    }
    return std::sqrt(params.Gamma / (2.0 * params.J)) * ops.Dtheta;
}

SymmetryCheck check_strong_symmetry(const ModelParams& params, const Eigen::MatrixXcd& candidate) {
    params.validate();
    const SpinOperators ops = build_spin_operators(params);
    if (candidate.rows() != ops.dim || candidate.cols() != ops.dim) {
        throw ValidationError("candidate dimension mismatch: expected " + std::to_string(ops.dim));
    }
    const MatrixXcd H = params.Omega * ops.Sx;
    const MatrixXcd L = jump_operator(params, ops);

    SymmetryCheck result;
    result.hCommNorm = (H * candidate - candidate * H).norm();
    result.lCommNorm = (L * candidate - candidate * L).norm();
    result.tol = 1e-10 * candidate.norm() * std::max(H.norm(), L.norm());
    result.symmetric = result.hCommNorm < result.tol && result.lCommNorm < result.tol;
    return result;
}

std::vector<double> eigenspace_labels(double J) {
    std::vector<double> labels;
    const bool integerJ = std::abs(J - std::round(J)) < 1e-9;
    for (double m = integerJ ? 0.0 : 0.5; m <= J + 1e-9; m += 1.0) labels.push_back(m);
    return labels;
}

Eigen::VectorXd fold_eigenspaces(const Eigen::VectorXd& bySignedM, double J) {
    const std::vector<double> labels = eigenspace_labels(J);
    VectorXd folded = VectorXd::Zero(static_cast<int>(labels.size()));
    for (int i = 0; i < bySignedM.size(); ++i) {
        const double m = -J + i;
        const double am = std::abs(m);
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (std::abs(labels[k] - am) < 1e-9) {
                folded(static_cast<int>(k)) += bySignedM(i);
                break;
            }
        }
    }
    return folded;
}

} // namespace collspin
