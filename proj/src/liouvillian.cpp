// liouvillian.cpp — Superoperator assembly, spectra, steady states, propagation

#include "collspin/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "collspin/errors.hpp"

namespace collspin {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {
const complex<double> kI(0.0, 1.0);
} // namespace

Eigen::VectorXcd vectorize(const MatrixXcd& m) {
    return Eigen::Map<const VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvectorize(const VectorXcd& v, int n) {
    return Eigen::Map<const MatrixXcd>(v.data(), n, n);
}

Eigen::MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Superoperator build_liouvillian(const ModelParams& params, const SpinOperators& ops) {
    params.validate();
    const int d = ops.dim;
    const MatrixXcd I = MatrixXcd::Identity(d, d);
    const MatrixXcd H = params.Omega * ops.Sx;
    const MatrixXcd L = jump_operator(params, ops);
    const MatrixXcd LdL = L.adjoint() * L;

    Superoperator s;
    s.dim = d * d;
    s.kind = SuperopKind::Liouvillian;
    s.params = params;
    s.mat = -kI * (kron(I, H) - kron(H.transpose(), I)) + kron(L.conjugate(), L) -
            0.5 * (kron(I, LdL) + kron(LdL.transpose(), I));

    // Trace preservation: vec(I) must be a left null vector.
    const VectorXcd one = vectorize(MatrixXcd::Identity(d, d));
    const double residual = (one.adjoint() * s.mat).norm();
    if (residual > 1e-10 * s.mat.norm()) {
        throw NumericalError("Liouvillian violates trace preservation, residual " +
                             std::to_string(residual));
    }
    return s;
}

SpectrumResult spectrum(const Superoperator& superop, double nullTol) {
    if (superop.kind != SuperopKind::Liouvillian) {
        throw ValidationError("spectrum requires kind=liouvillian (tilted generators have "
                              "no trace-preservation structure)");
    }
    Eigen::ComplexEigenSolver<MatrixXcd> es(superop.mat, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Liouvillian eigensolver did not converge");
    }
    SpectrumResult result;
    result.eigenvalues.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(result.eigenvalues.begin(), result.eigenvalues.end(),
              [](const complex<double>& a, const complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  if (std::abs(a.imag()) != std::abs(b.imag()))
                      return std::abs(a.imag()) < std::abs(b.imag());
                  return a.imag() < b.imag();
              });
    result.adr = result.eigenvalues.size() > 1 ? result.eigenvalues[1] : complex<double>(0.0);
    if (result.adr.real() < -std::numeric_limits<double>::min()) {
        result.tau = -(1.0 / result.adr).real();
    } else {
        result.tau = std::numeric_limits<double>::infinity();
    }
    result.nullDim = 0;
    for (const auto& ev : result.eigenvalues) {
        if (std::abs(ev) < nullTol) ++result.nullDim;
    }
    return result;
}

namespace {

// Phase-fix, Hermitize and trace-normalize one null vector into a density
// matrix; returns false when it cannot represent a state.
bool positivize(const VectorXcd& nullVec, int d, MatrixXcd& rhoOut) {
    MatrixXcd X = unvectorize(nullVec, d);
    const complex<double> tr = X.trace();
    if (std::abs(tr) < 1e-12 * X.norm()) return false;
    X *= std::conj(tr) / std::abs(tr);  // rotate the global phase so trace > 0
    MatrixXcd rho = 0.5 * (X + X.adjoint());
    rho /= rho.trace().real();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-8) return false;
    rhoOut = rho;
    return true;
}

} // namespace

std::vector<Eigen::MatrixXcd> steady_states(const Superoperator& superop, double nullTolRel,
                                            const Eigen::MatrixXcd& symmetryOp) {
    if (superop.kind != SuperopKind::Liouvillian) {
        throw ValidationError("steady_states requires kind=liouvillian");
    }
    const int d2 = superop.dim;
    const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));

    Eigen::BDCSVD<MatrixXcd> svd(superop.mat, Eigen::ComputeThinV);
    const VectorXd sv = svd.singularValues();
    const double cutoff = nullTolRel * sv(0);
    int nullDim = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) < cutoff) ++nullDim;
    }
    if (nullDim == 0) {
        throw NumericalError("no null space found (smallest singular value " +
                             std::to_string(sv(sv.size() - 1)) + ")");
    }
    MatrixXcd basis = svd.matrixV().rightCols(nullDim);  // orthonormal

    std::vector<MatrixXcd> states;
    if (nullDim == 1) {
        MatrixXcd rho;
        if (!positivize(basis.col(0), d, rho)) {
            throw NumericalError("steady-state positivization failed (null vector is traceless)");
        }
        states.push_back(rho);
        return states;
    }

    // Degenerate manifold: raw null vectors are arbitrary combinations.
    // Left multiplication by the symmetry operator preserves the null space
    // and acts Hermitianly on it, so diagonalizing its projection separates
    // the symmetry sectors (the |m><m| family for Sx).
    if (symmetryOp.rows() != d || symmetryOp.cols() != d) {
        throw ValidationError("symmetry operator dimension mismatch");
    }
    const MatrixXcd superSym = kron(MatrixXcd::Identity(d, d), symmetryOp);
    MatrixXcd projected = basis.adjoint() * superSym * basis;
    projected = 0.5 * (projected + projected.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(projected);
    if (es.info() != Eigen::Success) {
        throw NumericalError("null-space rotation failed");
    }
    const MatrixXcd rotated = basis * es.eigenvectors();
    for (int k = 0; k < nullDim; ++k) {
        MatrixXcd rho;
        if (!positivize(rotated.col(k), d, rho)) {
            throw NumericalError("steady-state positivization failed in sector " +
                                 std::to_string(k));
        }
        states.push_back(rho);
    }
    return states;
}

std::vector<Eigen::MatrixXcd> steady_states(const Superoperator& superop, double nullTolRel) {
    const int d = static_cast<int>(std::lround(std::sqrt(double(superop.dim))));
    return steady_states(superop, nullTolRel, MatrixXcd::Identity(d, d));
}

Eigen::MatrixXcd evolve_density(const Superoperator& superop, const Eigen::MatrixXcd& rho0,
                                double t, EvolveMethod method, double dt) {
    const int d = static_cast<int>(std::lround(std::sqrt(double(superop.dim))));
    if (rho0.rows() != d || rho0.cols() != d) {
        throw ValidationError("rho0 dimension mismatch");
    }
    if ((rho0 - rho0.adjoint()).norm() > 1e-10 ||
        std::abs(rho0.trace().real() - 1.0) > 1e-10) {
        throw ValidationError("rho0 must be Hermitian with unit trace");
    }
    {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho0 + rho0.adjoint()));
        if (es.eigenvalues().minCoeff() < -1e-10) {
            throw ValidationError("rho0 must be positive semidefinite");
        }
    }
    if (t < 0.0) throw ValidationError("negative evolution time");
    if (t == 0.0) return rho0;

    VectorXcd v = vectorize(rho0);
    if (method == EvolveMethod::MatrixExp) {
        const MatrixXcd prop = (superop.mat * t).exp();
        v = prop * v;
    } else {
        const long nSteps = std::max(1L, std::lround(t / dt));
        const double h = t / static_cast<double>(nSteps);
        for (long k = 0; k < nSteps; ++k) {
            const VectorXcd k1 = superop.mat * v;
            const VectorXcd k2 = superop.mat * (v + 0.5 * h * k1);
            const VectorXcd k3 = superop.mat * (v + 0.5 * h * k2);
            const VectorXcd k4 = superop.mat * (v + h * k3);
            v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        MatrixXcd rho = unvectorize(v, d);
        const double drift = std::abs(rho.trace() - complex<double>(1.0));
        if (!(drift <= 1e-8)) {  // negated form catches NaN from divergence
            throw NumericalError("integrator trace drift " + std::to_string(drift) +
                                 " exceeds 1e-8; reduce dt");
        }
    }
    MatrixXcd rho = unvectorize(v, d);
    const double drift = std::abs(rho.trace() - complex<double>(1.0));
    const double hermResidual = (rho - rho.adjoint()).norm();
    if (!(drift <= 1e-8) || !(hermResidual <= 1e-8)) {
        throw NumericalError("evolved state lost trace or Hermiticity");
    }
    return rho;
}

AnalyticSpectrum analytic_spectrum(const ModelParams& params) {
    params.validate();
    AnalyticSpectrum result;
    const double c = std::cos(params.theta);
    const double s = std::sin(params.theta);
    result.gammaTheta = params.Gamma * (c + s) * (c + s);
    result.chiTheta = params.Gamma * (c - s) * (c - s);
    const int twoJ = static_cast<int>(std::lround(2.0 * params.J));
    const double J = params.J;

    // Real parts carry the jump-operator normalization L = sqrt(Gamma/2J) D,
    // half the rate of a bare D dissipator; hence the 4J and 8J denominators.
    for (int q = 0; q <= twoJ; ++q) {
        for (int k = 0; k <= twoJ - q; ++k) {
            const double re = -result.gammaTheta * q * q / (4.0 * J) -
                              result.chiTheta * (q + k * (1.0 + k + 2.0 * q)) / (8.0 * J);
            for (int sign : {+1, -1}) {
                if (q == 0 && sign < 0) continue;  // q=0 towers are not doubled
                AnalyticEigenvalue e;
                e.q = q;
                e.k = k;
                e.sign = sign;
                e.value = complex<double>(re, sign * q * params.Omega);
                result.entries.push_back(e);
            }
        }
    }
    return result;
}

MatchReport match_analytic(const SpectrumResult& numeric, const AnalyticSpectrum& analytic) {
    MatchReport report;
    std::vector<complex<double>> pool = numeric.eigenvalues;
    std::vector<bool> used(pool.size(), false);

    // Pair in order of descending |value| so the well-separated towers
    // claim their partners before the crowded region near zero.
    std::vector<const AnalyticEigenvalue*> order;
    for (const auto& e : analytic.entries) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const AnalyticEigenvalue* a,
                                             const AnalyticEigenvalue* b) {
        return std::abs(a->value) > std::abs(b->value);
    });

    for (const AnalyticEigenvalue* e : order) {
        int best = -1;
        double bestDist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            const double dist = std::abs(pool[i] - e->value);
            if (dist < bestDist) {
                bestDist = dist;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break;
        used[best] = true;
        MatchedPair pair;
        pair.analytic = *e;
        pair.numeric = pool[best];
        pair.distance = bestDist;
        report.pairs.push_back(pair);
        report.maxDistance = std::max(report.maxDistance, bestDist);
    }
    return report;
}

} // namespace collspin
