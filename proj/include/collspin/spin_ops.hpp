// spin_ops.hpp — Collective spin operators, the squeezed jump operator and
// the Sx eigenbasis

#pragma once

#include <Eigen/Dense>

#include "collspin/model.hpp"

namespace collspin {

// Dense collective-spin operators in the Sz basis. Basis index i runs over
// m_z = J, J-1, ..., -J (highest weight first). All matrices are immutable
// after construction and safe to share across threads.
struct SpinOperators {
    double J = 0.0;
    double theta = 0.0;          // angle Dtheta was built with
    int dim = 0;                 // 2J + 1
    Eigen::MatrixXcd Sz;
    Eigen::MatrixXcd Sp;         // S+
    Eigen::MatrixXcd Sm;         // S-
    Eigen::MatrixXcd Sx;         // (S+ + S-)/2
    Eigen::MatrixXcd Sy;         // (S+ - S-)/(2i)
    Eigen::MatrixXcd Dtheta;     // cos(theta) S- + sin(theta) S+

    // Sx eigendecomposition, columns ordered by ascending eigenvalue
    // m = -J..J. Each eigenvector is phase-fixed: its largest-magnitude
    // component is real positive.
    Eigen::MatrixXcd sxBasis;
    Eigen::VectorXd sxEigs;

    // Column index of the Sx eigenstate |m>.
    int sx_index(double m) const { return static_cast<int>(std::lround(m + J)); }
    // Sx eigenstate |m> as a column vector in the Sz basis.
    Eigen::VectorXcd sx_state(double m) const { return sxBasis.col(sx_index(m)); }
    // Sz basis vector |J, m>_z.
    Eigen::VectorXcd sz_state(double m) const;
};

// Builds all operators for the given parameters. The Sx diagonalization is
// asserted to be non-degenerate (its spectrum -J..J is simple); eigenvalues
// colliding within 1e-8 raise NumericalError.
SpinOperators build_spin_operators(const ModelParams& params);

// Effective jump operator L = sqrt(Gamma/(2J)) * D_theta.
Eigen::MatrixXcd jump_operator(const ModelParams& params, const SpinOperators& ops);

struct SymmetryCheck {
    bool symmetric = false;
    double hCommNorm = 0.0;  // ||[H, A]||_F
    double lCommNorm = 0.0;  // ||[L, A]||_F
    double tol = 0.0;        // 1e-10 ||A|| max(||H||, ||L||)
};

// Tests whether `candidate` commutes with both H = Omega Sx and the jump
// operator L, i.e. whether it generates a strong symmetry of the dynamics.
SymmetryCheck check_strong_symmetry(const ModelParams& params, const Eigen::MatrixXcd& candidate);

// Distinct |m| labels of the Sx spectrum, ascending (the eigenspaces of
// Sx^2). Integer J: {0, 1, .., J}; half-integer J: {1/2, 3/2, .., J}.
std::vector<double> eigenspace_labels(double J);

// Folds a vector indexed by signed m (ascending -J..J) into eigenspace
// totals indexed like eigenspace_labels(J).
Eigen::VectorXd fold_eigenspaces(const Eigen::VectorXd& bySignedM, double J);

} // namespace collspin
