// trajectory.hpp — Quantum-jump Monte Carlo unraveling of the master equation

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "collspin/model.hpp"
#include "collspin/spin_ops.hpp"

namespace collspin {

enum class SnapshotKind { SxPopulations, FullState };

struct TrajectoryConfig {
    ModelParams params;
    double tFinal = 1.0;        // units of 1/Gamma
    double dt = 0.0;            // integration step; 0 = choose from maxJumpProb
    int sampleEvery = 1;        // snapshot stride in steps
    std::uint64_t seed = 0;     // master seed of the ensemble
    double maxJumpProb = 0.01;  // per-step jump-probability cap
    SnapshotKind snapshotKind = SnapshotKind::SxPopulations;
    int threads = 0;            // ensemble workers; 0 = hardware concurrency

    void validate() const;
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;          // per-trajectory child seed
    std::vector<double> jumpTimes;   // strictly increasing, <= tFinal
    long n = 0;                      // jump count
    std::vector<double> snapshotTimes;
    std::vector<Eigen::VectorXd> populations;  // SxPopulations mode: |<m|psi>|^2, m ascending
    std::vector<Eigen::VectorXcd> states;      // FullState mode: normalized states, Sz basis
    Eigen::VectorXcd finalState;               // normalized, Sz basis
};

// Non-Hermitian drift generator H_eff = Omega Sx - (i/2) L^dag L with
// L = sqrt(Gamma/(2J)) D_theta. Its anti-Hermitian part is negative
// semidefinite for every theta.
Eigen::MatrixXcd effective_hamiltonian(const ModelParams& params, const SpinOperators& ops);

// Precomputed propagation machinery shared (read-only) by all trajectories
// of an ensemble.
class TrajectoryEngine {
public:
    TrajectoryEngine(const TrajectoryConfig& config, const SpinOperators& ops);

    // Runs one trajectory from `psi0` (unit norm within 1e-10) with its own
    // RNG seeded by `childSeed`. First-order scheme: per step of size dt,
    // jump with probability dp = dt <psi|L^dag L|psi>; on jump apply L,
    // otherwise the precomputed exp(-i H_eff dt); renormalize either way.
    // dp exceeding maxJumpProb or a non-finite norm raises NumericalError.
    TrajectoryRecord run(const Eigen::VectorXcd& psi0, std::uint64_t childSeed) const;

    double dt() const { return dt_; }
    long steps() const { return nSteps_; }
    const SpinOperators& ops() const { return ops_; }

private:
    TrajectoryConfig config_;
    SpinOperators ops_;
    Eigen::MatrixXcd stepProp_;   // exp(-i H_eff dt)
    Eigen::MatrixXcd jumpOp_;     // L
    Eigen::MatrixXcd jumpRate_;   // L^dag L
    Eigen::MatrixXcd sxAdjoint_;  // sxBasis^dag, for population snapshots
    double dt_ = 0.0;
    long nSteps_ = 0;
};

TrajectoryRecord run_trajectory(const TrajectoryConfig& config, const SpinOperators& ops,
                                const Eigen::VectorXcd& psi0);

// Pure initial states with sampling weights; ensembles draw one component
// per trajectory (single draw from the child RNG before propagation).
struct InitialMixture {
    std::vector<Eigen::VectorXcd> components;
    std::vector<double> weights;  // non-negative, normalized internally
};

struct EnsembleResult {
    std::vector<TrajectoryRecord> records;   // by trajectory index
    std::vector<double> times;               // common snapshot times
    // SxPopulations mode summaries: ensemble mean and standard error of the
    // Sx populations and of <Sx>(t), accumulated in trajectory-index order.
    Eigen::MatrixXd meanPopulations;         // times x dim
    Eigen::MatrixXd sePopulations;           // times x dim
    Eigen::VectorXd meanSx;
    Eigen::VectorXd seSx;
    // FullState mode summary: trajectory-averaged density matrix per time.
    std::vector<Eigen::MatrixXcd> meanRho;
};

// Runs nTraj trajectories with child seeds child_seed(config.seed, i).
// Results are identical for identical inputs regardless of thread count.
// Per-trajectory failures are rethrown with the trajectory index attached.
EnsembleResult run_ensemble(const TrajectoryConfig& config, const SpinOperators& ops,
                            const Eigen::VectorXcd& psi0, int nTraj);
EnsembleResult run_ensemble(const TrajectoryConfig& config, const SpinOperators& ops,
                            const InitialMixture& initial, int nTraj);

// Largest possible per-step jump probability per unit dt, i.e. the top
// eigenvalue of L^dag L. Used to pick dt = maxJumpProb / (2 * rate).
double max_jump_rate(const ModelParams& params, const SpinOperators& ops);

} // namespace collspin
