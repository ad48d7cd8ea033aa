// phase_scan.cpp — Steady-state observables over the (Omega, theta) plane

#include "collspin/phase_scan.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "collspin/errors.hpp"

namespace collspin {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

double magnetization(const Eigen::MatrixXcd& rho, const SpinOperators& ops) {
    return (rho * ops.Sz).trace().real() / ops.J;
}

SqueezingResult spin_squeezing(const Eigen::MatrixXcd& rho, const SpinOperators& ops,
                               const ModelParams& params) {
    SqueezingResult out;
    const double sx = (rho * ops.Sx).trace().real();
    const double sy = (rho * ops.Sy).trace().real();
    const double sz = (rho * ops.Sz).trace().real();
    const double meanSpinSq = sx * sx + sy * sy + sz * sz;
    if (meanSpinSq < 1e-8 * params.J * params.J) {
        out.defined = false;
        return out;
    }
    const double sx2 = (rho * ops.Sx * ops.Sx).trace().real();
    out.value = params.N() * (sx2 - sx * sx) / meanSpinSq;
    out.defined = true;
    return out;
}

double critical_line(double theta, double Gamma) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return Gamma * (c * c - s * s);
}

namespace {

PhasePoint scan_point(double omega, double theta, const ModelParams& tmpl,
                      const Eigen::MatrixXcd& initialState) {
    PhasePoint pt;
    pt.omega = omega;
    pt.theta = theta;
    ModelParams params = tmpl;
    params.Omega = omega;
    params.theta = theta;
    params.validate();

    const SpinOperators ops = build_spin_operators(params);
    const Superoperator liouv = build_liouvillian(params, ops);
    pt.degenerateLine = params.on_symmetry_line();

    MatrixXcd rho;
    if (pt.degenerateLine) {
        // Degenerate manifold: the steady state is set by the initial
        // conditions. On the exact line the Sx-basis populations are
        // conserved and every coherence decays, so the t -> infinity limit
        // is the diagonal projection of the initial state.
        pt.fallback = true;
        const MatrixXcd inSx = ops.sxBasis.adjoint() * initialState * ops.sxBasis;
        rho = ops.sxBasis * inSx.diagonal().asDiagonal().toDenseMatrix() *
              ops.sxBasis.adjoint();
    } else {
        Eigen::BDCSVD<MatrixXcd> svd(liouv.mat, Eigen::ComputeThinV);
        const VectorXd sv = svd.singularValues();
        const double sigma2 = sv.size() > 1 ? sv(sv.size() - 2) : 0.0;
        int nullCount = 0;
        for (int i = 0; i < sv.size(); ++i) {
            if (sv(i) < 1e-8 * sv(0)) ++nullCount;
        }
        if (nullCount > 1 || sigma2 < 1e-6 * params.Gamma) {
            // Null-space extraction is ill-conditioned this close to
            // degeneracy; fall back to long-time evolution and flag it.
            pt.fallback = true;
            rho = evolve_density(liouv, initialState, 40.0 * params.J / params.Gamma);
        } else {
            const int d = ops.dim;
            MatrixXcd x = unvectorize(svd.matrixV().col(svd.matrixV().cols() - 1), d);
            const std::complex<double> tr = x.trace();
            if (std::abs(tr) < 1e-12 * x.norm()) {
                throw NumericalError("traceless null vector");
            }
            x *= std::conj(tr) / std::abs(tr);
            rho = 0.5 * (x + x.adjoint());
            rho /= rho.trace().real();
        }
    }

    pt.magnetization = magnetization(rho, ops);
    const SqueezingResult sq = spin_squeezing(rho, ops, params);
    pt.squeezing = sq.value;
    pt.squeezingDefined = sq.defined;
    pt.purity = (rho * rho).trace().real();
    const double sx = (rho * ops.Sx).trace().real();
    const double sy = (rho * ops.Sy).trace().real();
    const double sz = (rho * ops.Sz).trace().real();
    pt.meanSpinNorm = std::sqrt(sx * sx + sy * sy + sz * sz);
    return pt;
}

} // namespace

std::vector<PhasePoint> scan(const ScanGrid& grid, const ModelParams& tmpl,
                             const Eigen::MatrixXcd& initialState, int threads) {
    if (grid.omegas.empty() || grid.thetas.empty()) {
        throw ValidationError("scan grid is empty");
    }
    const int nPts = static_cast<int>(grid.omegas.size() * grid.thetas.size());
    std::vector<PhasePoint> points(nPts);

    int nThreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nThreads < 1) nThreads = 1;
    nThreads = std::min(nThreads, nPts);

    std::atomic<int> next(0);
    const auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= nPts) return;
            const double omega = grid.omegas[idx / grid.thetas.size()];
            const double theta = grid.thetas[idx % grid.thetas.size()];
            try {
                points[idx] = scan_point(omega, theta, tmpl, initialState);
            } catch (const std::exception& e) {
                points[idx].omega = omega;
                points[idx].theta = theta;
                points[idx].failed = true;
                points[idx].error = e.what();
            }
        }
    };
    if (nThreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nThreads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return points;
}

} // namespace collspin
