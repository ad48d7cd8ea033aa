// activity.hpp — Jump-counting statistics, the tilted generator, the scaled
// cumulant generating function and Legendre transforms

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "collspin/liouvillian.hpp"
#include "collspin/model.hpp"
#include "collspin/trajectory.hpp"

namespace collspin {

struct Peak {
    long K = 0;               // location on the count axis
    double height = 0.0;
    double prominence = 0.0;
    double nearestCenter = 0.0;  // closest predicted K_m (NaN when none)
    double m = 0.0;              // its |m| label
};

struct CountingDistribution {
    double T = 0.0;             // observation window
    Eigen::VectorXd probs;      // p_T(K), K = 0..Kmax (index = K)
    Eigen::VectorXd se;         // standard errors (MC histograms; empty otherwise)
    std::vector<double> modeCenters;  // K_m = T Gamma |m|^2 / J per supported |m|
    std::vector<double> modeLabels;   // the |m| values
    std::vector<Peak> peaks;
    long nSamples = 0;          // MC only
};

// Eq.-of-motion-free counting distribution on the strong-symmetry line:
//   p_T(K) = sum_m Pois(K; T Gamma m^2 / J) c0diag_m,
// evaluated with log-gamma in log space. c0diag holds populations over m
// ascending (diagonal initial state in the Sx basis, non-negative, sums to
// one). Kmax covers the largest mode mean plus ten standard deviations.
// Throws ValidationError off the line (|theta - pi/4| >= 1e-12) or for
// non-diagonal input.
CountingDistribution counting_distribution_analytic(const Eigen::VectorXd& c0diag, double T,
                                                    const ModelParams& params,
                                                    double prominence = 1e-3);

// Normalized histogram of per-trajectory jump counts with multinomial
// standard errors. Mode centers/labels are copied from `predicted` when
// given (for peak matching and binned comparisons).
CountingDistribution counting_distribution_mc(const std::vector<TrajectoryRecord>& records,
                                              const CountingDistribution* predicted = nullptr,
                                              double prominence = 1e-3);

// Local maxima of `probs` exceeding `prominence` (absolute, topographic,
// no smoothing), matched to the nearest predicted center.
std::vector<Peak> multimodality(const CountingDistribution& dist, double prominence = 1e-3);

// Total variation distance after aggregating both distributions into basins
// around the predicted mode centers (boundaries halfway between consecutive
// K_m). With ~10^3 trajectories the raw per-K distance is dominated by
// sampling noise; the basin weights are the physically meaningful content.
double counting_tv_mode_binned(const CountingDistribution& analytic,
                               const CountingDistribution& mc);

// Plain per-K total variation distance (padded with zeros to equal length).
double counting_tv_raw(const CountingDistribution& a, const CountingDistribution& b);

// W_s = L + (e^s - 1) kron(conj(L), L): the generator tilted by e^{sK}.
// s > 0 rewards jumps.
Superoperator tilted_liouvillian(const ModelParams& params, const SpinOperators& ops, double s);

struct LargeDeviationCurve {
    Eigen::VectorXd sGrid;
    Eigen::VectorXd lambda;        // largest-real-part eigenvalue of W_s (real branch)
    Eigen::VectorXd activity;      // d lambda/ds: central differences inside, one-sided at ends
    std::vector<bool> nearDegenerate;  // leading eigenvalue gap < 1e-6 Gamma
    // Second-order one-sided derivatives at s = 0 (internal stencil step
    // 5e-4), reported separately because the strong-symmetry point carries a
    // genuine first-order discontinuity that a centered stencil would
    // average away. NaN when 0 is not on the grid.
    double activityLeft0 = 0.0;
    double activityRight0 = 0.0;
};

// Evaluates lambda(s) over a sorted grid containing 0. Each lambda is
// checked real within 1e-9 Gamma; violations and eigensolver failures raise
// NumericalError naming the offending s.
LargeDeviationCurve scgf(const ModelParams& params, const SpinOperators& ops,
                         const Eigen::VectorXd& sGrid);

struct LegendrePoint {
    double k = 0.0;
    double phi = 0.0;         // max_s [k s - lambda(s)] over the grid
    bool extrapolated = false;  // maximizer hit the grid boundary
};

std::vector<LegendrePoint> legendre(const LargeDeviationCurve& curve,
                                    const Eigen::VectorXd& kGrid);

// Forward transform for round-trip checks: max_k [k s - phi(k)].
double lambda_from_phi(const std::vector<LegendrePoint>& phi, double s);

} // namespace collspin
