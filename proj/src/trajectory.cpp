// trajectory.cpp — Quantum-jump Monte Carlo engine with reproducible
// parallel ensembles

#include "collspin/trajectory.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "collspin/errors.hpp"
#include "collspin/rng.hpp"

namespace collspin {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

void TrajectoryConfig::validate() const {
    params.validate();
    if (!(tFinal >= 0.0)) throw ValidationError("tFinal must be non-negative");
    if (dt < 0.0) throw ValidationError("dt must be positive (or 0 for automatic)");
    if (!(maxJumpProb > 0.0 && maxJumpProb <= 0.1)) {
        throw ValidationError("maxJumpProb must lie in (0, 0.1]");
    }
    if (sampleEvery < 1) throw ValidationError("sampleEvery must be >= 1");
    if (threads < 0) throw ValidationError("threads must be >= 0");
}

Eigen::MatrixXcd effective_hamiltonian(const ModelParams& params, const SpinOperators& ops) {
    const MatrixXcd L = jump_operator(params, ops);
    return params.Omega * ops.Sx - complex<double>(0.0, 0.5) * (L.adjoint() * L);
}

double max_jump_rate(const ModelParams& params, const SpinOperators& ops) {
    const MatrixXcd L = jump_operator(params, ops);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(L.adjoint() * L);
    return es.eigenvalues().maxCoeff();
}

TrajectoryEngine::TrajectoryEngine(const TrajectoryConfig& config, const SpinOperators& ops)
    : config_(config), ops_(ops) {
    config.validate();
    double dt = config.dt;
    if (dt == 0.0) {
        // Keep the worst-case per-step probability at half the cap so the
        // loud-failure guard never trips on a valid run.
        const double rate = max_jump_rate(config.params, ops);
        dt = rate > 0.0 ? 0.5 * config.maxJumpProb / rate : config.tFinal;
        if (dt <= 0.0) dt = 1e-3;
    }
    nSteps_ = config.tFinal > 0.0 ? std::max(1L, std::lround(config.tFinal / dt)) : 0;
    dt_ = nSteps_ > 0 ? config.tFinal / static_cast<double>(nSteps_) : dt;

    jumpOp_ = jump_operator(config.params, ops);
    jumpRate_ = jumpOp_.adjoint() * jumpOp_;
    const MatrixXcd Heff = effective_hamiltonian(config.params, ops);
    stepProp_ = (complex<double>(0.0, -1.0) * Heff * dt_).exp();
    sxAdjoint_ = ops.sxBasis.adjoint();
}

TrajectoryRecord TrajectoryEngine::run(const Eigen::VectorXcd& psi0,
                                       std::uint64_t childSeed) const {
    if (psi0.size() != ops_.dim) throw ValidationError("psi0 dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ValidationError("psi0 must have unit norm");

    std::mt19937_64 rng(childSeed);
    TrajectoryRecord rec;
    rec.seed = childSeed;
    VectorXcd psi = psi0;

    const auto snapshot = [&](double time) {
        rec.snapshotTimes.push_back(time);
        if (config_.snapshotKind == SnapshotKind::SxPopulations) {
            rec.populations.push_back((sxAdjoint_ * psi).cwiseAbs2());
        } else {
            rec.states.push_back(psi);
        }
    };

    snapshot(0.0);
    for (long step = 0; step < nSteps_; ++step) {
        const double rate = std::real(psi.dot(jumpRate_ * psi));
        const double dp = dt_ * rate;
        if (dp > config_.maxJumpProb) {
            throw NumericalError("per-step jump probability " + std::to_string(dp) +
                                 " exceeds cap " + std::to_string(config_.maxJumpProb) +
                                 "; reduce dt");
        }
        const double t = (step + 1) * dt_;
        if (uniform01(rng) < dp) {
            psi = jumpOp_ * psi;
            rec.jumpTimes.push_back(t);
        } else {
            psi = stepProp_ * psi;
        }
        const double norm = psi.norm();
        if (!std::isfinite(norm) || norm <= 0.0) {
            throw NumericalError("state norm diverged at t=" + std::to_string(t));
        }
        psi /= norm;
        if ((step + 1) % config_.sampleEvery == 0 || step + 1 == nSteps_) snapshot(t);
    }
    rec.n = static_cast<long>(rec.jumpTimes.size());
    rec.finalState = psi;
    return rec;
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& config, const SpinOperators& ops,
                                const Eigen::VectorXcd& psi0) {
    const TrajectoryEngine engine(config, ops);
    return engine.run(psi0, child_seed(config.seed, 0));
}

namespace {

EnsembleResult run_ensemble_impl(const TrajectoryConfig& config, const SpinOperators& ops,
                                 const InitialMixture& initial, int nTraj) {
    if (nTraj < 1) throw ValidationError("nTraj must be >= 1");
    if (initial.components.empty() || initial.components.size() != initial.weights.size()) {
        throw ValidationError("initial mixture is empty or mismatched");
    }
    double wsum = 0.0;
    for (double w : initial.weights) {
        if (w < 0.0) throw ValidationError("mixture weights must be non-negative");
        wsum += w;
    }
    if (wsum <= 0.0) throw ValidationError("mixture weights sum to zero");

    const TrajectoryEngine engine(config, ops);
    const bool mixed = initial.components.size() > 1;

    EnsembleResult result;
    result.records.resize(nTraj);
    std::vector<std::string> failures(nTraj);

    int nThreads = config.threads > 0 ? config.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    if (nThreads < 1) nThreads = 1;
    nThreads = std::min<int>(nThreads, nTraj);

    std::atomic<int> next(0);
    const auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= nTraj) return;
            const std::uint64_t seed = child_seed(config.seed, static_cast<std::uint64_t>(i));
            try {
                int component = 0;
                if (mixed) {
                    // The component draw must come from the child stream so
                    // the assignment is independent of everything else.
                    std::mt19937_64 pick(seed);
                    const double u = uniform01(pick) * wsum;
                    double acc = 0.0;
                    for (std::size_t c = 0; c < initial.weights.size(); ++c) {
                        acc += initial.weights[c];
                        if (u < acc) {
                            component = static_cast<int>(c);
                            break;
                        }
                    }
                    result.records[i] = engine.run(initial.components[component],
                                                   splitmix64(seed));
                } else {
                    result.records[i] = engine.run(initial.components[0], seed);
                }
            } catch (const std::exception& e) {
                failures[i] = e.what();
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
    for (int i = 0; i < nTraj; ++i) {
        if (!failures[i].empty()) {
            throw NumericalError("trajectory " + std::to_string(i) + ": " + failures[i]);
        }
    }

    result.times = result.records[0].snapshotTimes;
    const int nT = static_cast<int>(result.times.size());
    const int d = ops.dim;

    if (config.snapshotKind == SnapshotKind::SxPopulations) {
        MatrixXd sum = MatrixXd::Zero(nT, d);
        MatrixXd sumSq = MatrixXd::Zero(nT, d);
        VectorXd sxSum = VectorXd::Zero(nT);
        VectorXd sxSumSq = VectorXd::Zero(nT);
        VectorXd mvals(d);
        for (int k = 0; k < d; ++k) mvals(k) = ops.sxEigs(k);
        for (const auto& rec : result.records) {
            for (int t = 0; t < nT; ++t) {
                const VectorXd& p = rec.populations[t];
                sum.row(t) += p.transpose();
                sumSq.row(t) += p.cwiseAbs2().transpose();
                const double sx = p.dot(mvals);
                sxSum(t) += sx;
                sxSumSq(t) += sx * sx;
            }
        }
        const double n = static_cast<double>(nTraj);
        result.meanPopulations = sum / n;
        result.meanSx = sxSum / n;
        result.sePopulations = MatrixXd::Zero(nT, d);
        result.seSx = VectorXd::Zero(nT);
        if (nTraj > 1) {
            result.sePopulations =
                ((sumSq / n - result.meanPopulations.cwiseAbs2()).cwiseMax(0.0) / (n - 1.0))
                    .cwiseSqrt();
            result.seSx =
                ((sxSumSq / n - result.meanSx.cwiseAbs2()).cwiseMax(0.0) / (n - 1.0)).cwiseSqrt();
        }
    } else {
        result.meanRho.assign(nT, MatrixXcd::Zero(d, d));
        for (const auto& rec : result.records) {
            for (int t = 0; t < nT; ++t) {
                result.meanRho[t] += rec.states[t] * rec.states[t].adjoint();
            }
        }
        for (auto& rho : result.meanRho) rho /= static_cast<double>(nTraj);
    }
    return result;
}

} // namespace

EnsembleResult run_ensemble(const TrajectoryConfig& config, const SpinOperators& ops,
                            const Eigen::VectorXcd& psi0, int nTraj) {
    InitialMixture mix;
    mix.components.push_back(psi0);
    mix.weights.push_back(1.0);
    return run_ensemble_impl(config, ops, mix, nTraj);
}

EnsembleResult run_ensemble(const TrajectoryConfig& config, const SpinOperators& ops,
                            const InitialMixture& initial, int nTraj) {
    return run_ensemble_impl(config, ops, initial, nTraj);
}

} // namespace collspin
