// model.hpp — Model parameters for the driven collective spin with squeezed decay
//
// The dynamics used throughout is the Lindblad master equation
//   d(rho)/dt = -i Omega [Sx, rho] + L rho L^dag - (1/2){L^dag L, rho}
// with the single effective jump operator
//   L = sqrt(Gamma/(2J)) * D_theta,   D_theta = cos(theta) S- + sin(theta) S+.
// At theta = pi/4 this makes L = sqrt(Gamma/J) * Sx, so the quantum-jump rate
// from an Sx eigenstate |m> is exactly Gamma m^2 / J. Every counting and
// freezing formula in the toolkit is anchored to that normalization.

#pragma once

#include <cmath>
#include <string>

#include "collspin/errors.hpp"

namespace collspin {

inline constexpr double kPi = 3.14159265358979323846;

// Tolerance for matching theta to the strong-symmetry point pi/4. The
// physics is discontinuous exactly there, so angle flags accept symbolic
// "pi/4" and the match window is kept at rounding-noise scale.
inline constexpr double kSymmetryLineTol = 1e-12;

struct ModelParams {
    double J = 0.5;      // total angular momentum, half-integer (J = N/2)
    double Omega = 0.0;  // drive amplitude, units of Gamma
    double Gamma = 1.0;  // quantum-jump rate, sets the time unit
    double theta = 0.0;  // squeezing angle, radians in [0, pi/2]

    int dim() const { return static_cast<int>(std::lround(2.0 * J)) + 1; }
    double N() const { return 2.0 * J; }

    bool on_symmetry_line() const { return std::abs(theta - kPi / 4.0) < kSymmetryLineTol; }

    // Throws ValidationError unless 2J is a positive integer, Gamma > 0,
    // Omega >= 0 and theta lies in [0, pi/2].
    void validate() const;
};

inline void ModelParams::validate() const {
    const double twoJ = 2.0 * J;
    if (!(J > 0.0) || std::abs(twoJ - std::lround(twoJ)) > 1e-9) {
        throw ValidationError("J must be a positive half-integer, got J=" + std::to_string(J));
    }
    if (!(Gamma > 0.0)) {
        throw ValidationError("Gamma must be positive, got Gamma=" + std::to_string(Gamma));
    }
    if (!(Omega >= 0.0)) {
        throw ValidationError("Omega must be non-negative, got Omega=" + std::to_string(Omega));
    }
    if (!(theta >= 0.0 && theta <= kPi / 2.0 + 1e-15)) {
        throw ValidationError("theta must lie in [0, pi/2], got theta=" + std::to_string(theta));
    }
}

} // namespace collspin
