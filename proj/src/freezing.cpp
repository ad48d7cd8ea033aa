// freezing.cpp — Freezing distribution, per-trajectory verdicts, selection stats

#include "collspin/freezing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "collspin/errors.hpp"

namespace collspin {

using Eigen::VectorXcd;
using Eigen::VectorXd;

FreezingDistribution freezing_probability(const Eigen::VectorXcd& c0, double t, long n,
                                          const ModelParams& params) {
    params.validate();
    const int d = params.dim();
    if (c0.size() != d) throw ValidationError("c0 dimension mismatch");
    if (std::abs(c0.squaredNorm() - 1.0) > 1e-8) {
        throw ValidationError("c0 must be normalized");
    }
    if (!(t > 0.0)) throw ValidationError("t must be positive");
    if (n < 0) throw ValidationError("n must be non-negative");

    FreezingDistribution dist;
    dist.t = t;
    dist.n = n;
    dist.alpha = static_cast<double>(n) * params.J / (t * params.Gamma);

    // log weight = log|c0_m|^2 - m^2 t Gamma / J + 2 n log|m|; the |m|^(2n)
    // factor is identically (|m|^(2 alpha))^(t Gamma / J). All work stays in
    // log space: the raw factors underflow catastrophically for
    // t Gamma / J of a few hundred.
    const double minusInf = -std::numeric_limits<double>::infinity();
    VectorXd logw(d);
    for (int i = 0; i < d; ++i) {
        const double m = -params.J + i;
        const double am = std::abs(m);
        const double c2 = std::norm(c0(i));
        if (c2 <= 0.0) {
            logw(i) = minusInf;
            continue;
        }
        double jumpTerm = 0.0;
        if (n > 0) {
            if (am == 0.0) {
                logw(i) = minusInf;  // a jump annihilates the m=0 component
                continue;
            }
            jumpTerm = 2.0 * static_cast<double>(n) * std::log(am);
        }
        logw(i) = std::log(c2) - m * m * t * params.Gamma / params.J + jumpTerm;
    }

    const double maxLog = logw.maxCoeff();
    if (maxLog == minusInf) {
        throw ValidationError("freezing probability has all-zero weight (n=" +
                              std::to_string(n) + " with support only on m=0?)");
    }
    dist.probs = VectorXd::Zero(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        if (logw(i) == minusInf) continue;
        dist.probs(i) = std::exp(logw(i) - maxLog);
        total += dist.probs(i);
    }
    dist.probs /= total;

    // |m| ladder value closest to sqrt(alpha); ties resolve upward, matching
    // the likelihood comparison at the boundary.
    const std::vector<double> labels = eigenspace_labels(params.J);
    const double target = std::sqrt(dist.alpha);
    double best = labels.front();
    double bestDist = std::numeric_limits<double>::infinity();
    for (double lab : labels) {
        const double dd = std::abs(lab - target);
        if (dd < bestDist || (dd == bestDist && lab > best)) {
            bestDist = dd;
            best = lab;
        }
    }
    dist.mTilde = best;
    return dist;
}

FreezingVerdict detect_freezing(const TrajectoryRecord& record, double threshold,
                                const ModelParams& params) {
    if (!(threshold > 0.5 && threshold < 1.0)) {
        throw ValidationError("threshold must lie in (0.5, 1)");
    }
    if (record.populations.empty()) {
        throw ValidationError("record has no Sx-population snapshots");
    }
    const std::vector<double> labels = eigenspace_labels(params.J);
    const int nEsp = static_cast<int>(labels.size());
    const int nT = static_cast<int>(record.populations.size());

    // Eigenspace populations per snapshot.
    Eigen::MatrixXd esp(nT, nEsp);
    for (int t = 0; t < nT; ++t) {
        esp.row(t) = fold_eigenspaces(record.populations[t], params.J).transpose();
    }

    FreezingVerdict verdict;
    int sel = 0;
    esp.row(nT - 1).maxCoeff(&sel);
    verdict.selectedEigenspace = labels[sel];
    verdict.frozen = esp(nT - 1, sel) >= threshold;

    verdict.freezeTime = record.snapshotTimes.back();
    for (int t = 0; t < nT; ++t) {
        if (esp(t, sel) >= threshold) {
            verdict.freezeTime = record.snapshotTimes[t];
            break;
        }
    }

    // Largest competing population per snapshot, i.e. the slowest-decaying
    // rival. Populations below kPopFloor are treated as gone: basis
    // projection round-off sits near 1e-30 and random-walks a few decades
    // under the jump noise, so the floor must sit well above it. Genuine
    // amplitudes at the floor (1e-9) are still far above round-off. The fit
    // uses the final half of the above-floor window.
    const double kPopFloor = 1e-18;
    std::vector<int> window;
    std::vector<double> series;
    for (int t = 0; t < nT; ++t) {
        double q = 0.0;
        for (int k = 0; k < nEsp; ++k) {
            if (k != sel) q = std::max(q, esp(t, k));
        }
        if (q > kPopFloor) {
            window.push_back(t);
            series.push_back(q);
        }
    }
    verdict.decayRate = std::numeric_limits<double>::infinity();
    if (!window.empty() && window.back() == nT - 1 && window.size() < 2) {
        // A competitor is still alive at the end but there is nothing to
        // fit against.
        throw NumericalError("insufficient snapshots for the decay fit");
    }
    if (window.size() >= 2) {
        const std::size_t start = std::min(window.size() / 2, window.size() - 2);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double n = 0;
        for (std::size_t i = start; i < window.size(); ++i) {
            const double x = record.snapshotTimes[window[i]];
            const double y = std::log(series[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
        if (n < 2.0) {
            throw NumericalError("insufficient snapshots for the decay fit");
        }
        const double denom = n * sxx - sx * sx;
        if (denom <= 0.0) {
            throw NumericalError("insufficient snapshot spread for the decay fit");
        }
        verdict.decayRate = -(n * sxy - sx * sy) / denom;
    }
    return verdict;
}

SelectionStatistics selection_statistics(const std::vector<TrajectoryRecord>& records,
                                         const Eigen::VectorXcd& psi0InSxBasis,
                                         const ModelParams& params, double threshold) {
    if (records.empty()) throw ValidationError("empty ensemble");
    SelectionStatistics stats;
    stats.eigenspaces = eigenspace_labels(params.J);
    const int nEsp = static_cast<int>(stats.eigenspaces.size());
    const int nRec = static_cast<int>(records.size());
    const int d = params.dim();

    stats.initialPopulation = fold_eigenspaces(psi0InSxBasis.cwiseAbs2(), params.J);

    stats.frozenCount = Eigen::VectorXi::Zero(nEsp);
    stats.verdicts.reserve(nRec);
    for (const auto& rec : records) {
        const FreezingVerdict v = detect_freezing(rec, threshold, params);
        stats.verdicts.push_back(v);
        if (v.frozen) {
            for (int k = 0; k < nEsp; ++k) {
                if (std::abs(stats.eigenspaces[k] - v.selectedEigenspace) < 1e-9) {
                    ++stats.frozenCount(k);
                    break;
                }
            }
        } else {
            ++stats.notFrozen;
        }
    }
    const double n = static_cast<double>(nRec);
    stats.frozenFraction = stats.frozenCount.cast<double>() / n;
    stats.fractionSE = VectorXd::Zero(nEsp);
    for (int k = 0; k < nEsp; ++k) {
        const double p = stats.frozenFraction(k);
        stats.fractionSE(k) = std::sqrt(std::max(0.0, p * (1.0 - p) / n));
    }

    // Conservation report: <Sx>(t) ensemble series plus per-trajectory
    // final values.
    stats.times = records[0].snapshotTimes;
    const int nT = static_cast<int>(stats.times.size());
    VectorXd mvals(d);
    for (int i = 0; i < d; ++i) mvals(i) = -params.J + i;
    VectorXd sum = VectorXd::Zero(nT), sumSq = VectorXd::Zero(nT);
    stats.finalSx = VectorXd::Zero(nRec);
    for (int r = 0; r < nRec; ++r) {
        for (int t = 0; t < nT; ++t) {
            const double sx = records[r].populations[t].dot(mvals);
            sum(t) += sx;
            sumSq(t) += sx * sx;
            if (t == nT - 1) stats.finalSx(r) = sx;
        }
    }
    stats.meanSx = sum / n;
    stats.seSx = VectorXd::Zero(nT);
    if (nRec > 1) {
        stats.seSx = ((sumSq / n - stats.meanSx.cwiseAbs2()).cwiseMax(0.0) / (n - 1.0)).cwiseSqrt();
    }
    stats.finalSxMean = stats.finalSx.mean();
    double var = 0.0;
    for (int r = 0; r < nRec; ++r) {
        var += (stats.finalSx(r) - stats.finalSxMean) * (stats.finalSx(r) - stats.finalSxMean);
    }
    stats.finalSxStd = nRec > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return stats;
}

} // namespace collspin
