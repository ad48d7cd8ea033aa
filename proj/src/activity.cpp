// activity.cpp — Counting statistics, tilted generator, SCGF, Legendre transforms

#include "collspin/activity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collspin/errors.hpp"

namespace collspin {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// log Pois(K; mu) with the mu = 0 limit handled exactly.
double log_poisson(long K, double mu) {
    if (mu <= 0.0) return K == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return static_cast<double>(K) * std::log(mu) - mu - std::lgamma(static_cast<double>(K) + 1.0);
}

void attach_peaks(CountingDistribution& dist, double prominence) {
    dist.peaks = multimodality(dist, prominence);
}

} // namespace

CountingDistribution counting_distribution_analytic(const Eigen::VectorXd& c0diag, double T,
                                                    const ModelParams& params,
                                                    double prominence) {
    params.validate();
    if (!params.on_symmetry_line()) {
        throw ValidationError("analytic counting distribution requires theta = pi/4 "
                              "(strong-symmetry line)");
    }
    const int d = params.dim();
    if (c0diag.size() != d) throw ValidationError("c0diag dimension mismatch");
    double sum = 0.0;
    for (int i = 0; i < d; ++i) {
        if (c0diag(i) < -1e-12) throw ValidationError("c0diag must be non-negative");
        sum += c0diag(i);
    }
    if (std::abs(sum - 1.0) > 1e-8) throw ValidationError("c0diag must sum to one");
    if (!(T > 0.0)) throw ValidationError("T must be positive");

    CountingDistribution dist;
    dist.T = T;

    // Mode centers K_m = T Gamma m^2 / J per supported |m|.
    const std::vector<double> labels = eigenspace_labels(params.J);
    VectorXd espWeight = fold_eigenspaces(c0diag, params.J);
    double maxCenter = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (espWeight(static_cast<int>(k)) > 0.0) {
            const double Km = T * params.Gamma * labels[k] * labels[k] / params.J;
            dist.modeCenters.push_back(Km);
            dist.modeLabels.push_back(labels[k]);
            maxCenter = std::max(maxCenter, Km);
        }
    }
    const long Kmax = static_cast<long>(std::ceil(maxCenter + 10.0 * std::sqrt(maxCenter))) + 1;

    dist.probs = VectorXd::Zero(Kmax + 1);
    for (int i = 0; i < d; ++i) {
        if (c0diag(i) <= 0.0) continue;
        const double m = -params.J + i;
        const double mu = T * params.Gamma * m * m / params.J;
        for (long K = 0; K <= Kmax; ++K) {
            dist.probs(K) += c0diag(i) * std::exp(log_poisson(K, mu));
        }
    }
    attach_peaks(dist, prominence);
    return dist;
}

CountingDistribution counting_distribution_mc(const std::vector<TrajectoryRecord>& records,
                                              const CountingDistribution* predicted,
                                              double prominence) {
    if (records.empty()) throw ValidationError("empty ensemble");
    long Kmax = 0;
    for (const auto& rec : records) Kmax = std::max(Kmax, rec.n);

    CountingDistribution dist;
    dist.nSamples = static_cast<long>(records.size());
    dist.probs = VectorXd::Zero(Kmax + 1);
    for (const auto& rec : records) dist.probs(rec.n) += 1.0;
    dist.probs /= static_cast<double>(dist.nSamples);
    dist.se = VectorXd::Zero(Kmax + 1);
    for (long K = 0; K <= Kmax; ++K) {
        const double p = dist.probs(K);
        dist.se(K) = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(dist.nSamples)));
    }
    if (predicted) {
        dist.T = predicted->T;
        dist.modeCenters = predicted->modeCenters;
        dist.modeLabels = predicted->modeLabels;
    }
    attach_peaks(dist, prominence);
    return dist;
}

std::vector<Peak> multimodality(const CountingDistribution& dist, double prominence) {
    const VectorXd& p = dist.probs;
    const long n = p.size();
    std::vector<Peak> peaks;
    for (long k = 0; k < n; ++k) {
        const double left = k > 0 ? p(k - 1) : -std::numeric_limits<double>::infinity();
        const double right = k + 1 < n ? p(k + 1) : -std::numeric_limits<double>::infinity();
        if (!(p(k) > left && p(k) >= right)) continue;

        // Topographic prominence: on each side, track the lowest valley
        // until a strictly higher point appears; the border counts as an
        // unbounded drop.
        double leftBase = p(k), rightBase = p(k);
        bool higherLeft = false, higherRight = false;
        for (long i = k - 1; i >= 0; --i) {
            if (p(i) > p(k)) {
                higherLeft = true;
                break;
            }
            leftBase = std::min(leftBase, p(i));
        }
        for (long i = k + 1; i < n; ++i) {
            if (p(i) > p(k)) {
                higherRight = true;
                break;
            }
            rightBase = std::min(rightBase, p(i));
        }
        double base;
        if (higherLeft && higherRight) {
            base = std::max(leftBase, rightBase);
        } else if (higherLeft) {
            base = leftBase;
        } else if (higherRight) {
            base = rightBase;
        } else {
            base = std::min(leftBase, rightBase);
        }
        const double prom = p(k) - base;
        if (prom <= prominence) continue;

        Peak peak;
        peak.K = k;
        peak.height = p(k);
        peak.prominence = prom;
        peak.nearestCenter = kNaN;
        peak.m = kNaN;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < dist.modeCenters.size(); ++c) {
            const double dd = std::abs(dist.modeCenters[c] - static_cast<double>(k));
            if (dd < best) {
                best = dd;
                peak.nearestCenter = dist.modeCenters[c];
                peak.m = dist.modeLabels[c];
            }
        }
        peaks.push_back(peak);
    }
    return peaks;
}

double counting_tv_mode_binned(const CountingDistribution& analytic,
                               const CountingDistribution& mc) {
    if (analytic.modeCenters.empty()) {
        throw ValidationError("analytic distribution carries no mode centers");
    }
    std::vector<double> centers = analytic.modeCenters;
    std::sort(centers.begin(), centers.end());
    std::vector<double> edges;  // basin boundaries halfway between centers
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
        edges.push_back(0.5 * (centers[i] + centers[i + 1]));
    }
    const auto basin = [&](long K) {
        std::size_t b = 0;
        while (b < edges.size() && static_cast<double>(K) >= edges[b]) ++b;
        return b;
    };
    const std::size_t nBins = centers.size();
    std::vector<double> wa(nBins, 0.0), wm(nBins, 0.0);
    for (long K = 0; K < analytic.probs.size(); ++K) wa[basin(K)] += analytic.probs(K);
    for (long K = 0; K < mc.probs.size(); ++K) wm[basin(K)] += mc.probs(K);
    double tv = 0.0;
    for (std::size_t b = 0; b < nBins; ++b) tv += std::abs(wa[b] - wm[b]);
    return 0.5 * tv;
}

double counting_tv_raw(const CountingDistribution& a, const CountingDistribution& b) {
    const long n = std::max(a.probs.size(), b.probs.size());
    double tv = 0.0;
    for (long K = 0; K < n; ++K) {
        const double pa = K < a.probs.size() ? a.probs(K) : 0.0;
        const double pb = K < b.probs.size() ? b.probs(K) : 0.0;
        tv += std::abs(pa - pb);
    }
    return 0.5 * tv;
}

Superoperator tilted_liouvillian(const ModelParams& params, const SpinOperators& ops, double s) {
    Superoperator tilted = build_liouvillian(params, ops);
    const MatrixXcd L = jump_operator(params, ops);
    tilted.mat += (std::exp(s) - 1.0) * kron(L.conjugate(), L);
    tilted.kind = SuperopKind::Tilted;
    return tilted;
}

namespace {

struct LeadingEig {
    double lambda = 0.0;
    bool nearDegenerate = false;
};

LeadingEig leading_eigenvalue(const ModelParams& params, const SpinOperators& ops, double s) {
    const Superoperator w = tilted_liouvillian(params, ops, s);
    Eigen::ComplexEigenSolver<MatrixXcd> es(w.mat, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("tilted eigensolver failed at s=" + std::to_string(s));
    }
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    complex<double> lead(0.0);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const complex<double> ev = es.eigenvalues()(i);
        if (ev.real() > best) {
            second = best;
            best = ev.real();
            lead = ev;
        } else if (ev.real() > second) {
            second = ev.real();
        }
    }
    if (std::abs(lead.imag()) > 1e-9 * params.Gamma) {
        throw NumericalError("leading tilted eigenvalue is not real at s=" + std::to_string(s) +
                             " (imag " + std::to_string(lead.imag()) + ")");
    }
    LeadingEig out;
    out.lambda = lead.real();
    out.nearDegenerate = (best - second) < 1e-6 * params.Gamma;
    return out;
}

} // namespace

LargeDeviationCurve scgf(const ModelParams& params, const SpinOperators& ops,
                         const Eigen::VectorXd& sGrid) {
    params.validate();
    const int n = static_cast<int>(sGrid.size());
    if (n < 2) throw ValidationError("sGrid needs at least two points");
    int zeroIdx = -1;
    for (int i = 0; i < n; ++i) {
        if (i > 0 && !(sGrid(i) > sGrid(i - 1))) {
            throw ValidationError("sGrid must be strictly increasing");
        }
        if (std::abs(sGrid(i)) < 1e-15) zeroIdx = i;
    }
    if (zeroIdx < 0) throw ValidationError("sGrid must contain s = 0");

    LargeDeviationCurve curve;
    curve.sGrid = sGrid;
    curve.lambda = VectorXd::Zero(n);
    curve.nearDegenerate.assign(n, false);
    for (int i = 0; i < n; ++i) {
        const LeadingEig e = leading_eigenvalue(params, ops, sGrid(i));
        curve.lambda(i) = e.lambda;
        curve.nearDegenerate[i] = e.nearDegenerate;
    }

    curve.activity = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            curve.activity(i) = (curve.lambda(1) - curve.lambda(0)) / (sGrid(1) - sGrid(0));
        } else if (i == n - 1) {
            curve.activity(i) =
                (curve.lambda(i) - curve.lambda(i - 1)) / (sGrid(i) - sGrid(i - 1));
        } else {
            curve.activity(i) =
                (curve.lambda(i + 1) - curve.lambda(i - 1)) / (sGrid(i + 1) - sGrid(i - 1));
        }
    }

    // Refined one-sided derivatives at s = 0: second-order three-point
    // stencils at step h. A first-order quotient cannot reach 1e-6 Gamma
    // accuracy on the exp-shaped branch; a centered one would average the
    // discontinuity away. h must sit below the finite-size crossover width
    // (~1e-4 in s for N=20 at theta = pi/4 +- 0.05) so that a smooth
    // crossover reports a small jump while the strong-symmetry point keeps
    // its full Gamma*J discontinuity.
    const double h = 3e-5;
    const double l0 = curve.lambda(zeroIdx);
    const double lp1 = leading_eigenvalue(params, ops, h).lambda;
    const double lp2 = leading_eigenvalue(params, ops, 2.0 * h).lambda;
    const double lm1 = leading_eigenvalue(params, ops, -h).lambda;
    const double lm2 = leading_eigenvalue(params, ops, -2.0 * h).lambda;
    curve.activityRight0 = (-3.0 * l0 + 4.0 * lp1 - lp2) / (2.0 * h);
    curve.activityLeft0 = (3.0 * l0 - 4.0 * lm1 + lm2) / (2.0 * h);
    return curve;
}

std::vector<LegendrePoint> legendre(const LargeDeviationCurve& curve,
                                    const Eigen::VectorXd& kGrid) {
    const int n = static_cast<int>(curve.sGrid.size());
    std::vector<LegendrePoint> out;
    out.reserve(kGrid.size());
    for (int j = 0; j < kGrid.size(); ++j) {
        LegendrePoint pt;
        pt.k = kGrid(j);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            best = std::max(best, pt.k * curve.sGrid(i) - curve.lambda(i));
        }
        pt.phi = best;
        // extrapolated unless some interior point attains the maximum
        // (flat ties count as interior)
        pt.extrapolated = true;
        const double tol = 1e-12 * (1.0 + std::abs(best));
        for (int i = 1; i + 1 < n; ++i) {
            if (pt.k * curve.sGrid(i) - curve.lambda(i) >= best - tol) {
                pt.extrapolated = false;
                break;
            }
        }
        out.push_back(pt);
    }
    return out;
}

double lambda_from_phi(const std::vector<LegendrePoint>& phi, double s) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& pt : phi) best = std::max(best, pt.k * s - pt.phi);
    return best;
}

} // namespace collspin
