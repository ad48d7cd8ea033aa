// liouvillian.hpp — Dense superoperator assembly, spectra, steady states and
// master-equation propagation

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "collspin/model.hpp"
#include "collspin/spin_ops.hpp"

namespace collspin {

// Column-stacking vectorization: vec(A X B) = kron(B^T, A) vec(X).
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int n);
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

enum class SuperopKind { Liouvillian, Tilted };

// Dense superoperator of dimension (2J+1)^2 acting on column-vectorized
// density matrices.
struct Superoperator {
    int dim = 0;              // (2J+1)^2
    Eigen::MatrixXcd mat;
    SuperopKind kind = SuperopKind::Liouvillian;
    ModelParams params;
};

// Assembles the Liouvillian
//   mat = -i (kron(I,H) - kron(H^T,I))
//         + kron(conj(L),L) - (1/2)(kron(I,L^dag L) + kron((L^dag L)^T, I))
// with H = Omega Sx and L = sqrt(Gamma/(2J)) D_theta. Trace preservation
// (vec(I) is a left null vector) is asserted at construction.
Superoperator build_liouvillian(const ModelParams& params, const SpinOperators& ops);

struct SpectrumResult {
    // All eigenvalues, sorted by descending real part (ties by ascending
    // |Im|, then ascending Im).
    std::vector<std::complex<double>> eigenvalues;
    std::complex<double> adr;   // second entry of the sorted list (lambda_2)
    double tau = 0.0;           // -Re(1/lambda_2); +inf when the gap is closed
    int nullDim = 0;            // # eigenvalues with |lambda| < nullTol
};

// Full dense eigendecomposition. `nullTol` is absolute (a natural choice is
// 1e-8 * Gamma). Throws NumericalError if the eigensolver fails.
SpectrumResult spectrum(const Superoperator& superop, double nullTol);

// Orthonormal null-space basis of the Liouvillian, post-processed into
// Hermitian, unit-trace, positive-semidefinite states when possible.
// Singular values below nullTolRel * sigma_max count as null. When the null
// space is degenerate it is rotated to diagonalize the left-multiplication
// action of `symmetryOp` (pass Sx to recover the |m><m| family, ordered by
// ascending m). Throws NumericalError when positivization fails.
std::vector<Eigen::MatrixXcd> steady_states(const Superoperator& superop,
                                            double nullTolRel,
                                            const Eigen::MatrixXcd& symmetryOp);
std::vector<Eigen::MatrixXcd> steady_states(const Superoperator& superop,
                                            double nullTolRel = 1e-8);

enum class EvolveMethod { MatrixExp, RK4 };

// Propagates rho0 to time t. MatrixExp (default) applies exp(mat*t) and is
// exact at these dimensions; RK4 is a fixed-step integrator kept for
// cross-validation (step `dt`, trace drift beyond 1e-8 raises
// NumericalError). rho0 must be Hermitian, unit trace, PSD within 1e-10.
Eigen::MatrixXcd evolve_density(const Superoperator& superop, const Eigen::MatrixXcd& rho0,
                                double t, EvolveMethod method = EvolveMethod::MatrixExp,
                                double dt = 1e-3);

// One analytically known eigenvalue, indexed by quantum numbers (q, k) and
// the sign of the imaginary part (sign = +1 only for q = 0).
struct AnalyticEigenvalue {
    int q = 0;
    int k = 0;
    int sign = +1;
    std::complex<double> value;
};

// Large-driving spectrum of the thermal phase,
//   lambda_{q,k}^{+-} = +-i q Omega - GammaTheta q^2/(4J)
//                       - chiTheta [q + k(1+k+2q)]/(8J),
// q = 0..2J, k = 0..2J-q, enumerated so the entry count is (2J+1)^2.
// Exact on the strong-symmetry line; asymptotic (Omega >> Gamma) elsewhere.
struct AnalyticSpectrum {
    std::vector<AnalyticEigenvalue> entries;
    double gammaTheta = 0.0;  // Gamma (cos theta + sin theta)^2
    double chiTheta = 0.0;    // Gamma (cos theta - sin theta)^2
};

AnalyticSpectrum analytic_spectrum(const ModelParams& params);

struct MatchedPair {
    AnalyticEigenvalue analytic;
    std::complex<double> numeric;
    double distance = 0.0;
};

struct MatchReport {
    std::vector<MatchedPair> pairs;
    double maxDistance = 0.0;
};

// Greedy nearest-neighbour pairing of the analytic entries against the
// numeric spectrum. Large mismatch is data (the analytic form is
// asymptotic), not an error.
MatchReport match_analytic(const SpectrumResult& numeric, const AnalyticSpectrum& analytic);

} // namespace collspin
