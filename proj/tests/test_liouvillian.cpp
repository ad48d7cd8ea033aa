// test_liouvillian.cpp — Superoperator conventions, spectra, steady states,
// propagation, analytic spectrum matching

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "collspin/liouvillian.hpp"

using namespace collspin;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

namespace {

ModelParams make(double J, double omega, double theta, double gamma = 1.0) {
    ModelParams p;
    p.J = J;
    p.Omega = omega;
    p.Gamma = gamma;
    p.theta = theta;
    return p;
}

// Direct matrix-form action of the generator, the oracle for the
// vectorization convention.
MatrixXcd lindblad_rhs(const ModelParams& p, const SpinOperators& ops, const MatrixXcd& rho) {
    const MatrixXcd H = p.Omega * ops.Sx;
    const MatrixXcd L = jump_operator(p, ops);
    const complex<double> I(0.0, 1.0);
    return -I * (H * rho - rho * H) + L * rho * L.adjoint() -
           0.5 * (L.adjoint() * L * rho + rho * L.adjoint() * L);
}

MatrixXcd random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    MatrixXcd A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = complex<double>(gauss(rng), gauss(rng));
    MatrixXcd rho = A * A.adjoint();
    return rho / rho.trace().real();
}

} // namespace

TEST_CASE("column-stacking convention against direct matrix action (2x2 and 5x5)") {
    std::mt19937_64 rng(42);
    for (double J : {0.5, 2.0}) {
        const ModelParams p = make(J, 0.3, 0.2);
        const SpinOperators ops = build_spin_operators(p);
        const Superoperator liouv = build_liouvillian(p, ops);
        for (int rep = 0; rep < 5; ++rep) {
            const MatrixXcd rho = random_density(ops.dim, rng);
            const MatrixXcd direct = lindblad_rhs(p, ops, rho);
            const MatrixXcd viaSuperop = unvectorize(liouv.mat * vectorize(rho), ops.dim);
            CHECK((direct - viaSuperop).norm() < 1e-12);
        }
    }
}

TEST_CASE("two-level amplitude damping: hand-built superoperator and spectrum") {
    // J=1/2, Omega=0, theta=0: L = sqrt(Gamma) S-, plain amplitude damping
    // at rate Gamma. Basis (ee, ge, eg, gg) under column stacking with
    // |e> first.
    const double gamma = 1.3;
    const ModelParams p = make(0.5, 0.0, 0.0, gamma);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);

    MatrixXcd expected = MatrixXcd::Zero(4, 4);
    expected(0, 0) = -gamma;        // d rho_ee = -Gamma rho_ee
    expected(3, 0) = gamma;         // d rho_gg = +Gamma rho_ee
    expected(1, 1) = -0.5 * gamma;  // coherences decay at Gamma/2
    expected(2, 2) = -0.5 * gamma;
    CHECK((liouv.mat - expected).norm() < 1e-13);

    const SpectrumResult spec = spectrum(liouv, 1e-8 * gamma);
    REQUIRE(spec.eigenvalues.size() == 4);
    CHECK(std::abs(spec.eigenvalues[0]) < 1e-12);
    CHECK(std::abs(spec.eigenvalues[1] + 0.5 * gamma) < 1e-12);
    CHECK(std::abs(spec.eigenvalues[2] + 0.5 * gamma) < 1e-12);
    CHECK(std::abs(spec.eigenvalues[3] + gamma) < 1e-12);
    CHECK(spec.nullDim == 1);
    CHECK(std::abs(spec.tau - 2.0 / gamma) < 1e-9);
}

TEST_CASE("strong-symmetry line: |m><m'| are exact eigenvectors") {
    const ModelParams p = make(2.0, 0.9, kPi / 4.0);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);
    for (int a = 0; a < ops.dim; ++a) {
        for (int b = 0; b < ops.dim; ++b) {
            const double m = ops.sxEigs(a), mp = ops.sxEigs(b);
            const MatrixXcd basisEl = ops.sxBasis.col(a) * ops.sxBasis.col(b).adjoint();
            const complex<double> lambda(-p.Gamma * (m - mp) * (m - mp) / (2.0 * p.J),
                                         -p.Omega * (m - mp));
            const VectorXcd v = vectorize(basisEl);
            CHECK((liouv.mat * v - lambda * v).norm() < 1e-10 * p.Gamma);
        }
    }
}

TEST_CASE("null dimension: 2J+1 on the line, 1 off it") {
    for (double J : {1.0, 1.5, 2.0, 5.0}) {
        const ModelParams onLine = make(J, 0.7, kPi / 4.0);
        const SpinOperators ops = build_spin_operators(onLine);
        const SpectrumResult specOn = spectrum(build_liouvillian(onLine, ops), 1e-8);
        CHECK(specOn.nullDim == static_cast<int>(2 * J + 1));
        CHECK(std::abs(specOn.adr.real()) < 1e-8);

        const ModelParams offLine = make(J, 0.5, 0.0);
        const SpectrumResult specOff =
            spectrum(build_liouvillian(offLine, build_spin_operators(offLine)), 1e-8);
        CHECK(specOff.nullDim == 1);
    }
}

TEST_CASE("no growing modes and steady state at zero") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        const double J = 0.5 * (1 + static_cast<int>(uni(rng) * 5));
        const ModelParams p = make(J, 2.0 * uni(rng), uni(rng) * kPi / 2.0);
        const SpectrumResult spec =
            spectrum(build_liouvillian(p, build_spin_operators(p)), 1e-8);
        CHECK(spec.eigenvalues.front().real() <= 1e-9);
        CHECK(std::abs(spec.eigenvalues.front()) < 1e-8);
        CHECK(spec.nullDim >= 1);
    }
}

TEST_CASE("steady states on the line are the Sx projectors") {
    const ModelParams p = make(1.0, 0.6, kPi / 4.0);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);
    const auto states = steady_states(liouv, 1e-8, ops.Sx);
    REQUIRE(states.size() == 3);
    for (int k = 0; k < 3; ++k) {
        const MatrixXcd proj = ops.sxBasis.col(k) * ops.sxBasis.col(k).adjoint();
        CHECK((states[k] - proj).norm() < 1e-7);
    }
}

TEST_CASE("steady state of pure decay is the ground state") {
    const ModelParams p = make(1.5, 0.0, 0.0);
    const SpinOperators ops = build_spin_operators(p);
    const auto states = steady_states(build_liouvillian(p, ops), 1e-8);
    REQUIRE(states.size() == 1);
    const VectorXcd ground = ops.sz_state(-1.5);
    CHECK((states[0] - ground * ground.adjoint()).norm() < 1e-9);
}

TEST_CASE("thermal-phase steady state approaches maximal mixing") {
    const ModelParams p = make(5.0, 2.0, 0.0);
    const SpinOperators ops = build_spin_operators(p);
    const auto states = steady_states(build_liouvillian(p, ops), 1e-8);
    REQUIRE(states.size() == 1);
    const MatrixXcd mixed = MatrixXcd::Identity(11, 11) / 11.0;
    CHECK((states[0] - mixed).norm() < 0.2);
    CHECK((states[0] * states[0]).trace().real() < 0.15);  // purity near 1/11
}

TEST_CASE("evolution: identity at t=0, stationary projectors, decay endpoint") {
    const ModelParams p = make(1.0, 0.8, kPi / 4.0);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);

    const MatrixXcd proj = ops.sxBasis.col(1) * ops.sxBasis.col(1).adjoint();
    CHECK((evolve_density(liouv, proj, 0.0) - proj).norm() == 0.0);
    CHECK((evolve_density(liouv, proj, 3.7) - proj).norm() < 1e-10);

    const ModelParams decay = make(1.0, 0.0, 0.0);
    const SpinOperators dops = build_spin_operators(decay);
    const Superoperator dliouv = build_liouvillian(decay, dops);
    const VectorXcd top = dops.sz_state(1.0);
    const VectorXcd bottom = dops.sz_state(-1.0);
    const MatrixXcd rhoT = evolve_density(dliouv, top * top.adjoint(), 60.0);
    CHECK((rhoT - bottom * bottom.adjoint()).norm() < 1e-9);
}

TEST_CASE("trace, Hermiticity, positivity preserved for random params") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double J = 0.5 * (1 + static_cast<int>(uni(rng) * 6));
        const ModelParams p = make(J, 2.0 * uni(rng), uni(rng) * kPi / 2.0);
        const SpinOperators ops = build_spin_operators(p);
        const Superoperator liouv = build_liouvillian(p, ops);
        const MatrixXcd rho0 = random_density(ops.dim, rng);
        const double t = 10.0 * uni(rng);
        const MatrixXcd rho = evolve_density(liouv, rho0, t);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-9);
        CHECK((rho - rho.adjoint()).norm() < 1e-10);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
    }
}

TEST_CASE("semigroup property of the propagator") {
    std::mt19937_64 rng(11);
    const ModelParams p = make(1.5, 1.1, 0.9);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);
    const MatrixXcd rho0 = random_density(ops.dim, rng);
    const MatrixXcd oneShot = evolve_density(liouv, rho0, 2.9);
    const MatrixXcd twoStep = evolve_density(liouv, evolve_density(liouv, rho0, 1.2), 1.7);
    CHECK((oneShot - twoStep).norm() < 1e-9);
}

TEST_CASE("RK4 cross-validates the exponential propagator") {
    std::mt19937_64 rng(5);
    const ModelParams p = make(1.0, 0.7, 0.4);
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);
    const MatrixXcd rho0 = random_density(ops.dim, rng);
    const MatrixXcd viaExp = evolve_density(liouv, rho0, 1.5);
    const MatrixXcd viaRk4 = evolve_density(liouv, rho0, 1.5, EvolveMethod::RK4, 1e-3);
    CHECK((viaExp - viaRk4).norm() < 1e-8);
    CHECK_THROWS_AS(evolve_density(liouv, MatrixXcd::Identity(3, 3), 1.0), ValidationError);

    // a step far outside the stability region trips the drift guard
    const ModelParams stiff = make(5.0, 2.0, 0.2);
    const SpinOperators sops = build_spin_operators(stiff);
    const Superoperator sliouv = build_liouvillian(stiff, sops);
    const Eigen::VectorXcd top = sops.sz_state(5.0);
    CHECK_THROWS_AS(
        evolve_density(sliouv, top * top.adjoint(), 60.0, EvolveMethod::RK4, 1.0),
        NumericalError);
}

TEST_CASE("analytic spectrum: enumeration, special angles") {
    const ModelParams p = make(1.5, 0.9, kPi / 4.0);
    const AnalyticSpectrum as = analytic_spectrum(p);
    CHECK(as.entries.size() == 16);  // (2J+1)^2
    CHECK(std::abs(as.chiTheta) < 1e-15);
    CHECK(std::abs(as.gammaTheta - 2.0) < 1e-14);
    bool sawZero = false;
    for (const auto& e : as.entries) {
        if (e.q == 0 && e.k == 0) {
            CHECK(std::abs(e.value) < 1e-15);
            sawZero = true;
        }
        if (e.q > 0) {
            // chi = 0: towers collapse to +-iq Omega - Gamma q^2 / (2J)
            CHECK(std::abs(e.value -
                           std::complex<double>(-p.Gamma * e.q * e.q / (2.0 * p.J),
                                                e.sign * e.q * p.Omega)) < 1e-14);
        }
    }
    CHECK(sawZero);

    const AnalyticSpectrum at0 = analytic_spectrum(make(2.0, 1.0, 0.0));
    CHECK(std::abs(at0.gammaTheta - 1.0) < 1e-14);
    CHECK(std::abs(at0.chiTheta - 1.0) < 1e-14);
    for (const auto& e : at0.entries) {
        if (e.q == 1 && e.k == 0) {
            CHECK(std::abs(e.value.real() - (-1.0 / (4.0 * 2.0) - 1.0 / (8.0 * 2.0))) < 1e-14);
            CHECK(std::abs(e.value.imag() - e.sign * 1.0) < 1e-14);
        }
    }
}

TEST_CASE("matching: exact on the line, bijection at J=1/2") {
    const ModelParams p = make(2.0, 0.7, kPi / 4.0);
    const SpinOperators ops = build_spin_operators(p);
    const SpectrumResult numeric = spectrum(build_liouvillian(p, ops), 1e-8);
    const MatchReport report = match_analytic(numeric, analytic_spectrum(p));
    CHECK(report.pairs.size() == 25);
    CHECK(report.maxDistance < 1e-8 * p.Gamma);

    const ModelParams tiny = make(0.5, 0.4, 0.8);
    const SpectrumResult numTiny =
        spectrum(build_liouvillian(tiny, build_spin_operators(tiny)), 1e-8);
    const MatchReport repTiny = match_analytic(numTiny, analytic_spectrum(tiny));
    CHECK(repTiny.pairs.size() == 4);
}

TEST_CASE("matching converges toward the analytic spectrum at large driving") {
    for (double theta : {0.0, 0.6}) {
        double prev = -1.0;
        for (double omega : {10.0, 20.0, 40.0}) {
            const ModelParams p = make(3.0, omega, theta);
            const SpinOperators ops = build_spin_operators(p);
            const SpectrumResult numeric = spectrum(build_liouvillian(p, ops), 1e-8);
            const MatchReport report = match_analytic(numeric, analytic_spectrum(p));
            if (prev >= 0.0) CHECK(report.maxDistance < prev);
            prev = report.maxDistance;
        }
        CHECK(prev < 0.1);  // the Omega=40 match is already tight
    }
}
