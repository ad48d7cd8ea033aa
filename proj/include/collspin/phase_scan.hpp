// phase_scan.hpp — Steady-state observables over the (Omega, theta) plane

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collspin/liouvillian.hpp"
#include "collspin/model.hpp"
#include "collspin/spin_ops.hpp"

namespace collspin {

struct SqueezingResult {
    double value = 0.0;
    bool defined = false;  // false when |<S>|^2 < 1e-8 J^2
};

// M = tr(rho Sz)/J.
double magnetization(const Eigen::MatrixXcd& rho, const SpinOperators& ops);

// xi_perp^2 = N (<Sx^2> - <Sx>^2) / |<S>|^2 with <S> = (<Sx>,<Sy>,<Sz>).
// Undefined (flagged, not an error) when the mean spin length vanishes.
SqueezingResult spin_squeezing(const Eigen::MatrixXcd& rho, const SpinOperators& ops,
                               const ModelParams& params);

// Critical driving Omega_c(theta) = Gamma (cos^2 theta - sin^2 theta).
double critical_line(double theta, double Gamma);

struct PhasePoint {
    double omega = 0.0;
    double theta = 0.0;
    double magnetization = 0.0;
    double squeezing = 0.0;
    bool squeezingDefined = false;
    double purity = 0.0;
    double meanSpinNorm = 0.0;
    bool degenerateLine = false;   // theta on the strong-symmetry line
    bool fallback = false;         // steady state from long-time evolution
    bool failed = false;
    std::string error;
};

struct ScanGrid {
    std::vector<double> omegas;
    std::vector<double> thetas;
};

// Steady-state observables per grid point, row-major over (omega, theta),
// computed concurrently over `threads` workers (0 = hardware concurrency).
// Unique steady states come from the SVD null space. Points exactly on the
// symmetry line use the initial-state-selected infinite-time limit (the
// Sx-diagonal projection of `initialState`); near-degenerate points off the
// line (second singular value < 1e-6 Gamma) evolve `initialState` to
// t = 40 J / Gamma. Both fallbacks are flagged. Per-point failures are
// recorded in-row; the scan continues.
std::vector<PhasePoint> scan(const ScanGrid& grid, const ModelParams& tmpl,
                             const Eigen::MatrixXcd& initialState, int threads = 0);

} // namespace collspin
