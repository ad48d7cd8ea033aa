// freezing.hpp — Dissipative-freezing statistics: the analytic trajectory
// distribution, per-trajectory verdicts and ensemble selection fractions

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "collspin/model.hpp"
#include "collspin/trajectory.hpp"

namespace collspin {

// p(m; t, n) over the Sx eigenstates m = -J..J for a trajectory that ran
// for time t and recorded n jumps:
//   p(m; t, n) ∝ exp(-m^2 t Gamma / J) |m|^(2n) |c0_m|^2,
// the Bayesian posterior of a Poisson record with per-state rate
// Gamma m^2 / J. Evaluated in log space with subtract-max normalization.
struct FreezingDistribution {
    double t = 0.0;
    long n = 0;
    double alpha = 0.0;       // n J / (t Gamma)
    Eigen::VectorXd probs;    // over m ascending, sums to 1
    double mTilde = 0.0;      // |m| ladder value closest to sqrt(alpha), clamped to <= J
};

// c0: amplitude vector over m ascending (-J..J), unit norm. Throws
// ValidationError when every weight vanishes (e.g. n > 0 with support only
// on m = 0).
FreezingDistribution freezing_probability(const Eigen::VectorXcd& c0, double t, long n,
                                          const ModelParams& params);

struct FreezingVerdict {
    double selectedEigenspace = 0.0;  // |m| with dominant population at tFinal
    double freezeTime = 0.0;          // first snapshot where it exceeds threshold
    double decayRate = 0.0;           // fitted rate of the largest competing population
    bool frozen = false;
};

// Classifies one population-snapshot record. frozen means the combined
// population of a single Sx^2 eigenspace {+|m|,-|m|} exceeds `threshold`
// (in (0.5, 1)) at the final snapshot. The decay rate is a least-squares
// fit of log(competing population) over the final half of the record; it is
// +inf when every competitor is exactly zero there.
FreezingVerdict detect_freezing(const TrajectoryRecord& record, double threshold,
                                const ModelParams& params);

struct SelectionStatistics {
    std::vector<double> eigenspaces;      // |m| labels, ascending
    Eigen::VectorXd initialPopulation;    // per eigenspace, from psi0
    Eigen::VectorXi frozenCount;
    Eigen::VectorXd frozenFraction;
    Eigen::VectorXd fractionSE;           // binomial standard error
    long notFrozen = 0;
    std::vector<FreezingVerdict> verdicts;
    std::vector<double> times;            // ensemble <Sx>(t) series
    Eigen::VectorXd meanSx;
    Eigen::VectorXd seSx;
    Eigen::VectorXd finalSx;              // per trajectory
    double finalSxMean = 0.0;
    double finalSxStd = 0.0;
};

// Per-eigenspace frozen fractions with binomial errors plus the
// conservation-law report: the ensemble-averaged <Sx>(t) stays put while
// the per-trajectory final <Sx> spreads over the selected sectors.
SelectionStatistics selection_statistics(const std::vector<TrajectoryRecord>& records,
                                         const Eigen::VectorXcd& psi0InSxBasis,
                                         const ModelParams& params, double threshold);

} // namespace collspin
