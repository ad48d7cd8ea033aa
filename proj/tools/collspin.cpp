// collspin.cpp — command-line front end: spectra, trajectories, counting
// statistics, s-ensembles and phase diagrams as plain CSV plus a manifest

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "collspin/activity.hpp"
#include "collspin/freezing.hpp"
#include "collspin/io.hpp"
#include "collspin/liouvillian.hpp"
#include "collspin/phase_scan.hpp"
#include "collspin/trajectory.hpp"

using namespace collspin;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    double J = 0.0;
    double N = 0.0;
    double gamma = 1.0;
    std::uint64_t seed = 12345;
    int threads = 0;
    std::string outDir = ".";

    double resolveJ() const {
        if (J > 0.0 && N > 0.0) throw ValidationError("give either --J or --N, not both");
        if (J > 0.0) return J;
        if (N > 0.0) return N / 2.0;
        throw ValidationError("one of --J or --N is required");
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--J", opts.J, "total angular momentum (half-integer)");
    cmd->add_option("--N", opts.N, "number of spins (N = 2J)");
    cmd->add_option("--gamma", opts.gamma, "jump rate Gamma (sets the unit)")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "64-bit master seed")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)")
        ->capture_default_str();
    cmd->add_option("--out", opts.outDir, "output directory")->capture_default_str();
}

// All output files of one run, assembled in memory and flushed together so
// a failure never leaves partial files behind.
class RunOutput {
public:
    RunOutput(const std::string& command, const std::string& outDir,
              std::map<std::string, std::string> params, std::uint64_t seed)
        : outDir_(outDir) {
        manifest_.command = command;
        manifest_.version = kToolVersion;
        manifest_.parameters = std::move(params);
        manifest_.seed = seed;
        manifest_.startedAt = iso8601_utc_now();
    }

    CsvWriter make_csv() const {
        CsvWriter csv;
        csv.comment("collspin " + manifest_.command + " v" + manifest_.version);
        csv.comment("manifest-digest: " + hex64(manifest_.paramsDigest()));
        std::string line = "seed=" + std::to_string(manifest_.seed);
        for (const auto& [k, v] : manifest_.parameters) line += " " + k + "=" + v;
        csv.comment(line);
        return csv;
    }

    void add(const std::string& name, const CsvWriter& csv) { files_.emplace_back(name, csv); }

    void flush() {
        std::filesystem::create_directories(outDir_);
        for (const auto& [name, csv] : files_) {
            csv.write((std::filesystem::path(outDir_) / name).string());
            manifest_.outputs.emplace_back(name, csv.digest());
        }
        manifest_.finishedAt = iso8601_utc_now();
        const std::string mname = manifest_.command + "_manifest.json";
        manifest_.write((std::filesystem::path(outDir_) / mname).string());
    }

private:
    std::string outDir_;
    RunManifest manifest_;
    std::vector<std::pair<std::string, CsvWriter>> files_;
};

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

ModelParams make_params(const CommonOpts& common, double omega, const std::string& thetaText) {
    ModelParams p;
    p.J = common.resolveJ();
    p.Omega = omega;
    p.Gamma = common.gamma;
    p.theta = parse_angle(thetaText);
    p.validate();
    return p;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const CommonOpts& common, double omega, const std::string& thetaText,
                 double nullTol) {
    const ModelParams p = make_params(common, omega, thetaText);
    if (nullTol <= 0.0) nullTol = 1e-8 * p.Gamma;
    const SpinOperators ops = build_spin_operators(p);
    const Superoperator liouv = build_liouvillian(p, ops);
    const SpectrumResult numeric = spectrum(liouv, nullTol);
    const AnalyticSpectrum analytic = analytic_spectrum(p);
    const MatchReport match = match_analytic(numeric, analytic);

    RunOutput out("spectrum", common.outDir,
                  {{"J", g17(p.J)},
                   {"omega", g17(p.Omega)},
                   {"theta", g17(p.theta)},
                   {"gamma", g17(p.Gamma)},
                   {"null_tol", g17(nullTol)}},
                  common.seed);

    CsvWriter num = out.make_csv();
    num.header({"index", "re", "im"});
    for (std::size_t i = 0; i < numeric.eigenvalues.size(); ++i) {
        num.row({std::to_string(i), g17(numeric.eigenvalues[i].real()),
                 g17(numeric.eigenvalues[i].imag())});
    }
    out.add("spectrum_numeric.csv", num);

    CsvWriter ana = out.make_csv();
    ana.header({"q", "k", "sign", "re", "im"});
    for (const auto& e : analytic.entries) {
        ana.row({std::to_string(e.q), std::to_string(e.k), std::to_string(e.sign),
                 g17(e.value.real()), g17(e.value.imag())});
    }
    out.add("spectrum_analytic.csv", ana);

    CsvWriter mat = out.make_csv();
    mat.header({"q", "k", "sign", "analytic_re", "analytic_im", "numeric_re", "numeric_im",
                "distance"});
    for (const auto& pair : match.pairs) {
        mat.row({std::to_string(pair.analytic.q), std::to_string(pair.analytic.k),
                 std::to_string(pair.analytic.sign), g17(pair.analytic.value.real()),
                 g17(pair.analytic.value.imag()), g17(pair.numeric.real()),
                 g17(pair.numeric.imag()), g17(pair.distance)});
    }
    out.add("spectrum_match.csv", mat);

    CsvWriter sum = out.make_csv();
    sum.header({"null_dim", "adr_re", "adr_im", "tau", "gamma_theta", "chi_theta",
                "max_match_distance"});
    sum.row({std::to_string(numeric.nullDim), g17(numeric.adr.real()), g17(numeric.adr.imag()),
             g17(numeric.tau), g17(analytic.gammaTheta), g17(analytic.chiTheta),
             g17(match.maxDistance)});
    out.add("spectrum_summary.csv", sum);

    out.flush();
    return 0;
}

// -------------------------------------------------------------- trajectory

int cmd_trajectory(const CommonOpts& common, double omega, const std::string& thetaText,
                   const std::string& initialText, int nTraj, double tFinal, double dt,
                   long sampleEvery, double maxJumpProb, double threshold) {
    const ModelParams p = make_params(common, omega, thetaText);
    if (nTraj < 1) throw ValidationError("--ntraj must be >= 1");
    const InitialStateSpec spec = parse_initial_state(initialText);
    const SpinOperators ops = build_spin_operators(p);

    TrajectoryConfig cfg;
    cfg.params = p;
    cfg.tFinal = tFinal > 0.0 ? tFinal : 50.0 * p.J / p.Gamma;
    cfg.dt = dt;
    cfg.seed = common.seed;
    cfg.maxJumpProb = maxJumpProb;
    cfg.threads = common.threads;
    cfg.snapshotKind = SnapshotKind::SxPopulations;
    {
        // resolve dt and the snapshot stride (aim ~400 snapshots) up front
        // so the manifest carries the values actually used
        const TrajectoryEngine probe(cfg, ops);
        cfg.dt = probe.dt();
        cfg.sampleEvery = sampleEvery > 0 ? static_cast<int>(sampleEvery)
                                          : static_cast<int>(std::max(1L, probe.steps() / 400));
    }
    cfg.validate();

    EnsembleResult ens;
    Eigen::VectorXcd amps;  // Sx-basis amplitudes for the selection report
    if (spec.kind == InitialStateSpec::Kind::UniformDiag) {
        InitialMixture mix;
        for (int i = 0; i < ops.dim; ++i) {
            mix.components.push_back(ops.sxBasis.col(i));
            mix.weights.push_back(1.0);
        }
        amps = Eigen::VectorXcd::Constant(ops.dim, std::sqrt(1.0 / ops.dim));
        ens = run_ensemble(cfg, ops, mix, nTraj);
    } else if (spec.kind == InitialStateSpec::Kind::SxSuperposition) {
        amps = initial_sx_amplitudes(spec, ops);
        ens = run_ensemble(cfg, ops, ops.sxBasis * amps, nTraj);
    } else {
        const Eigen::VectorXcd psi0 = initial_pure_state(spec, ops);
        amps = ops.sxBasis.adjoint() * psi0;
        ens = run_ensemble(cfg, ops, psi0, nTraj);
    }
    const SelectionStatistics stats = selection_statistics(ens.records, amps, p, threshold);

    RunOutput out("trajectory", common.outDir,
                  {{"J", g17(p.J)},
                   {"omega", g17(p.Omega)},
                   {"theta", g17(p.theta)},
                   {"gamma", g17(p.Gamma)},
                   {"initial", spec.text},
                   {"ntraj", std::to_string(nTraj)},
                   {"t_final", g17(cfg.tFinal)},
                   {"dt", g17(cfg.dt)},
                   {"sample_every", std::to_string(cfg.sampleEvery)},
                   {"max_jump_prob", g17(cfg.maxJumpProb)},
                   {"threshold", g17(threshold)}},
                  common.seed);

    CsvWriter pops = out.make_csv();
    std::vector<std::string> head = {"traj", "time"};
    for (int i = 0; i < ops.dim; ++i) head.push_back("pop_m" + g17(-p.J + i));
    pops.header(head);
    for (std::size_t r = 0; r < ens.records.size(); ++r) {
        const auto& rec = ens.records[r];
        for (std::size_t t = 0; t < rec.snapshotTimes.size(); ++t) {
            std::vector<std::string> row = {std::to_string(r), g17(rec.snapshotTimes[t])};
            for (int i = 0; i < ops.dim; ++i) row.push_back(g17(rec.populations[t](i)));
            pops.row(row);
        }
    }
    out.add("trajectory_populations.csv", pops);

    CsvWriter recs = out.make_csv();
    recs.header({"traj", "child_seed", "n_jumps", "frozen", "eigenspace", "freeze_time",
                 "decay_rate", "final_sx"});
    for (std::size_t r = 0; r < ens.records.size(); ++r) {
        const auto& v = stats.verdicts[r];
        recs.row({std::to_string(r), std::to_string(ens.records[r].seed),
                  std::to_string(ens.records[r].n), fmt_bool(v.frozen),
                  g17(v.selectedEigenspace), g17(v.freezeTime), g17(v.decayRate),
                  g17(stats.finalSx(static_cast<int>(r)))});
    }
    out.add("trajectory_records.csv", recs);

    CsvWriter sel = out.make_csv();
    sel.header({"eigenspace", "initial_population", "frozen_count", "fraction", "se"});
    for (std::size_t k = 0; k < stats.eigenspaces.size(); ++k) {
        const int ki = static_cast<int>(k);
        sel.row({g17(stats.eigenspaces[k]), g17(stats.initialPopulation(ki)),
                 std::to_string(stats.frozenCount(ki)), g17(stats.frozenFraction(ki)),
                 g17(stats.fractionSE(ki))});
    }
    out.add("trajectory_selection.csv", sel);

    CsvWriter ensCsv = out.make_csv();
    ensCsv.header({"time", "mean_sx", "se_sx"});
    for (std::size_t t = 0; t < stats.times.size(); ++t) {
        const int ti = static_cast<int>(t);
        ensCsv.row({g17(stats.times[t]), g17(stats.meanSx(ti)), g17(stats.seSx(ti))});
    }
    out.add("trajectory_ensemble.csv", ensCsv);

    out.flush();
    return 0;
}

// ---------------------------------------------------------------- counting

int cmd_counting(const CommonOpts& common, double omega, const std::string& thetaText,
                 double T, const std::string& initialText, const std::string& mode,
                 int nTraj, double dt, double prominence) {
    const ModelParams p = make_params(common, omega, thetaText);
    if (!(T > 0.0)) throw ValidationError("--T must be positive");
    const bool wantAnalytic = mode == "analytic" || mode == "both";
    const bool wantMc = mode == "mc" || mode == "both";
    if (!wantAnalytic && !wantMc) {
        throw ValidationError("--mode must be analytic, mc or both");
    }
    if (wantAnalytic && !p.on_symmetry_line()) {
        throw ValidationError("analytic counting mode requires theta = pi/4; "
                              "use --mode mc off the symmetry line");
    }
    const InitialStateSpec spec = parse_initial_state(initialText);
    if (!spec.diagonal()) {
        throw ValidationError("counting requires a diagonal initial state in the Sx basis "
                              "(uniform-diag or a single sx eigenstate)");
    }
    const SpinOperators ops = build_spin_operators(p);
    const Eigen::VectorXd c0diag = initial_diag_populations(spec, p);

    CountingDistribution analytic;
    if (wantAnalytic) analytic = counting_distribution_analytic(c0diag, T, p, prominence);

    CountingDistribution mc;
    if (wantMc) {
        if (nTraj < 1) throw ValidationError("--ntraj must be >= 1");
        InitialMixture mix;
        for (int i = 0; i < ops.dim; ++i) {
            if (c0diag(i) > 0.0) {
                mix.components.push_back(ops.sxBasis.col(i));
                mix.weights.push_back(c0diag(i));
            }
        }
        TrajectoryConfig cfg;
        cfg.params = p;
        cfg.tFinal = T;
        cfg.dt = dt;
        cfg.seed = common.seed;
        cfg.threads = common.threads;
        cfg.sampleEvery = 1 << 30;  // counting needs jump totals only
        const TrajectoryEngine probe(cfg, ops);
        cfg.dt = probe.dt();
        dt = cfg.dt;
        const EnsembleResult ens = run_ensemble(cfg, ops, mix, nTraj);
        mc = counting_distribution_mc(ens.records, wantAnalytic ? &analytic : nullptr,
                                      prominence);
    }

    RunOutput out("counting", common.outDir,
                  {{"J", g17(p.J)},
                   {"omega", g17(p.Omega)},
                   {"theta", g17(p.theta)},
                   {"gamma", g17(p.Gamma)},
                   {"T", g17(T)},
                   {"initial", spec.text},
                   {"mode", mode},
                   {"ntraj", std::to_string(wantMc ? nTraj : 0)},
                   {"dt", g17(wantMc ? dt : 0.0)},
                   {"prominence", g17(prominence)}},
                  common.seed);

    if (wantAnalytic) {
        CsvWriter csv = out.make_csv();
        csv.header({"K", "p"});
        for (long K = 0; K < analytic.probs.size(); ++K) {
            csv.row({std::to_string(K), g17(analytic.probs(K))});
        }
        out.add("counting_analytic.csv", csv);
    }
    if (wantMc) {
        CsvWriter csv = out.make_csv();
        csv.header({"K", "p", "se"});
        for (long K = 0; K < mc.probs.size(); ++K) {
            csv.row({std::to_string(K), g17(mc.probs(K)), g17(mc.se(K))});
        }
        out.add("counting_mc.csv", csv);
    }

    CsvWriter peaks = out.make_csv();
    peaks.header({"source", "K", "height", "prominence", "nearest_center", "m"});
    const auto emitPeaks = [&](const char* src, const CountingDistribution& dist) {
        for (const auto& peak : dist.peaks) {
            peaks.row({src, std::to_string(peak.K), g17(peak.height), g17(peak.prominence),
                       g17(peak.nearestCenter), g17(peak.m)});
        }
    };
    if (wantAnalytic) emitPeaks("analytic", analytic);
    if (wantMc) emitPeaks("mc", mc);
    out.add("counting_peaks.csv", peaks);

    CsvWriter sum = out.make_csv();
    sum.header({"n_modes", "n_peaks_analytic", "n_peaks_mc", "tv_mode_binned", "tv_raw"});
    double tvBinned = std::nan(""), tvRaw = std::nan("");
    if (wantAnalytic && wantMc) {
        tvBinned = counting_tv_mode_binned(analytic, mc);
        tvRaw = counting_tv_raw(analytic, mc);
    }
    sum.row({std::to_string(wantAnalytic ? analytic.modeCenters.size() : mc.modeCenters.size()),
             std::to_string(wantAnalytic ? analytic.peaks.size() : 0),
             std::to_string(wantMc ? mc.peaks.size() : 0), g17(tvBinned), g17(tvRaw)});
    out.add("counting_summary.csv", sum);

    out.flush();
    return 0;
}

// --------------------------------------------------------------- sensemble

int cmd_sensemble(const CommonOpts& common, double omega, const std::string& thetaGridText,
                  double sMin, double sMax, double ds) {
    if (!(ds > 0.0) || !(sMax > sMin)) throw ValidationError("invalid s grid");
    const std::vector<double> thetas = parse_grid(thetaGridText);
    std::vector<double> svals;
    bool hasZero = false;
    for (double s = sMin; s <= sMax + 0.5 * ds; s += ds) {
        if (std::abs(s) < 1e-12) {
            s = 0.0;
            hasZero = true;
        }
        svals.push_back(s);
    }
    if (!hasZero) throw ValidationError("the s grid must contain s = 0");
    Eigen::VectorXd sGrid(static_cast<int>(svals.size()));
    for (std::size_t i = 0; i < svals.size(); ++i) sGrid(static_cast<int>(i)) = svals[i];

    RunOutput out("sensemble", common.outDir,
                  {{"J", g17(common.resolveJ())},
                   {"omega", g17(omega)},
                   {"theta_grid", thetaGridText},
                   {"gamma", g17(common.gamma)},
                   {"smin", g17(sMin)},
                   {"smax", g17(sMax)},
                   {"ds", g17(ds)}},
                  common.seed);

    CsvWriter curveCsv = out.make_csv();
    curveCsv.header({"theta", "s", "lambda", "activity", "near_degenerate"});
    CsvWriter zeroCsv = out.make_csv();
    zeroCsv.header({"theta", "lambda0", "activity_left", "activity_right", "jump_estimate"});

    for (double theta : thetas) {
        ModelParams p;
        p.J = common.resolveJ();
        p.Omega = omega;
        p.Gamma = common.gamma;
        p.theta = theta;
        p.validate();
        const SpinOperators ops = build_spin_operators(p);
        const LargeDeviationCurve curve = scgf(p, ops, sGrid);
        int zeroIdx = 0;
        for (int i = 0; i < sGrid.size(); ++i) {
            if (sGrid(i) == 0.0) zeroIdx = i;
            curveCsv.row({g17(theta), g17(sGrid(i)), g17(curve.lambda(i)),
                          g17(curve.activity(i)), fmt_bool(curve.nearDegenerate[i])});
        }
        zeroCsv.row({g17(theta), g17(curve.lambda(zeroIdx)), g17(curve.activityLeft0),
                     g17(curve.activityRight0),
                     g17(std::abs(curve.activityRight0 - curve.activityLeft0))});
    }
    out.add("sensemble.csv", curveCsv);
    out.add("sensemble_szero.csv", zeroCsv);
    out.flush();
    return 0;
}

// ----------------------------------------------------------- phase diagram

int cmd_phase_diagram(const CommonOpts& common, const std::string& omegaGridText,
                      const std::string& thetaGridText, const std::string& initialText) {
    ScanGrid grid;
    grid.omegas = parse_grid(omegaGridText);
    grid.thetas = parse_grid(thetaGridText);
    ModelParams tmpl;
    tmpl.J = common.resolveJ();
    tmpl.Gamma = common.gamma;
    tmpl.Omega = 0.0;
    tmpl.theta = 0.0;
    tmpl.validate();
    const InitialStateSpec spec = parse_initial_state(initialText);

    const SpinOperators initOps = build_spin_operators(tmpl);
    const Eigen::MatrixXcd init = initial_density_matrix(spec, initOps);

    const auto points = scan(grid, tmpl, init, common.threads);

    RunOutput out("phase", common.outDir,
                  {{"J", g17(tmpl.J)},
                   {"gamma", g17(tmpl.Gamma)},
                   {"omega_grid", omegaGridText},
                   {"theta_grid", thetaGridText},
                   {"initial", spec.text}},
                  common.seed);

    CsvWriter csv = out.make_csv();
    csv.header({"omega", "theta", "M", "xi2", "xi2_defined", "purity", "mean_spin_norm",
                "degenerate_line", "fallback", "failed", "error"});
    for (const auto& pt : points) {
        csv.row({g17(pt.omega), g17(pt.theta), g17(pt.magnetization),
                 pt.squeezingDefined ? g17(pt.squeezing) : "",
                 fmt_bool(pt.squeezingDefined), g17(pt.purity), g17(pt.meanSpinNorm),
                 fmt_bool(pt.degenerateLine), fmt_bool(pt.fallback), fmt_bool(pt.failed),
                 pt.error});
    }
    out.add("phase_diagram.csv", csv);

    CsvWriter crit = out.make_csv();
    crit.header({"theta", "omega_c"});
    for (double theta : grid.thetas) {
        crit.row({g17(theta), g17(critical_line(theta, tmpl.Gamma))});
    }
    out.add("critical_line.csv", crit);
    out.flush();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collspin: driven-dissipative collective-spin simulator"};
    app.require_subcommand(1);
    // flat key=value config (dotted keys, e.g. "spectrum.J=2"); flags
    // override file values
    app.set_config("--config", "", "flat key=value config file; flags override");

    CommonOpts cSpec, cTraj, cCount, cSens, cPhase;

    auto* spec = app.add_subcommand("spectrum", "Liouvillian spectrum vs analytic eigenvalues");
    add_common(spec, cSpec);
    double specOmega = 0.0, specNullTol = 0.0;
    std::string specTheta = "0";
    spec->add_option("--omega", specOmega, "drive amplitude")->capture_default_str();
    spec->add_option("--theta", specTheta, "squeezing angle (accepts pi expressions)")
        ->capture_default_str();
    spec->add_option("--null-tol", specNullTol, "null-space tolerance (0 = 1e-8 Gamma)");

    auto* traj = app.add_subcommand("trajectory", "quantum-jump trajectories and freezing");
    add_common(traj, cTraj);
    double trajOmega = 0.0, trajTFinal = 0.0, trajDt = 0.0, trajMaxJump = 0.01,
           trajThreshold = 0.999;
    long trajSampleEvery = 0;
    int trajN = 0;
    std::string trajTheta = "pi/4", trajInitial;
    traj->add_option("--omega", trajOmega, "drive amplitude")->capture_default_str();
    traj->add_option("--theta", trajTheta, "squeezing angle")->capture_default_str();
    traj->add_option("--initial", trajInitial, "initial state (sx:..., sz:..., uniform-diag)")
        ->required();
    traj->add_option("--ntraj", trajN, "number of trajectories")->required();
    traj->add_option("--t-final", trajTFinal, "final time (0 = 50 J/Gamma)");
    traj->add_option("--dt", trajDt, "step size (0 = auto from --max-jump-prob)");
    traj->add_option("--sample-every", trajSampleEvery, "snapshot stride (0 = auto)");
    traj->add_option("--max-jump-prob", trajMaxJump, "per-step jump probability cap")
        ->capture_default_str();
    traj->add_option("--threshold", trajThreshold, "freezing detection threshold")
        ->capture_default_str();

    auto* count = app.add_subcommand("counting", "jump-counting distribution p_T(K)");
    add_common(count, cCount);
    double countOmega = 0.0, countT = 0.0, countDt = 0.0, countProm = 1e-3;
    int countN = 2000;
    std::string countTheta = "pi/4", countInitial = "uniform-diag", countMode = "both";
    count->add_option("--omega", countOmega, "drive amplitude")->capture_default_str();
    count->add_option("--theta", countTheta, "squeezing angle")->capture_default_str();
    count->add_option("--T", countT, "counting window")->required();
    count->add_option("--initial", countInitial, "diagonal initial state")
        ->capture_default_str();
    count->add_option("--mode", countMode, "analytic | mc | both")->capture_default_str();
    count->add_option("--ntraj", countN, "trajectories for mc mode")->capture_default_str();
    count->add_option("--dt", countDt, "step size (0 = auto)");
    count->add_option("--prominence", countProm, "peak prominence threshold")
        ->capture_default_str();

    auto* sens = app.add_subcommand("sensemble", "tilted-generator SCGF and activity");
    add_common(sens, cSens);
    double sensOmega = 0.0, sensSmin = -1.0, sensSmax = 1.0, sensDs = 0.01;
    std::string sensThetaGrid = "0.6:1.0:0.01";
    sens->add_option("--omega", sensOmega, "drive amplitude")->capture_default_str();
    sens->add_option("--theta-grid", sensThetaGrid, "theta grid (value, list or a:b:step)")
        ->capture_default_str();
    sens->add_option("--smin", sensSmin, "tilt grid start")->capture_default_str();
    sens->add_option("--smax", sensSmax, "tilt grid end")->capture_default_str();
    sens->add_option("--ds", sensDs, "tilt grid step")->capture_default_str();

    auto* phase =
        app.add_subcommand("phase-diagram", "steady-state observables over (Omega, theta)");
    add_common(phase, cPhase);
    std::string phaseOmegaGrid, phaseThetaGrid, phaseInitial = "sz:-J";
    phase->add_option("--omega-grid", phaseOmegaGrid, "omega grid (a:b:step or list)")
        ->required();
    phase->add_option("--theta-grid", phaseThetaGrid, "theta grid (a:b:step or list)")
        ->required();
    phase->add_option("--initial", phaseInitial, "declared initial state for degenerate points")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (spec->parsed()) return cmd_spectrum(cSpec, specOmega, specTheta, specNullTol);
        if (traj->parsed()) {
            return cmd_trajectory(cTraj, trajOmega, trajTheta, trajInitial, trajN, trajTFinal,
                                  trajDt, trajSampleEvery, trajMaxJump, trajThreshold);
        }
        if (count->parsed()) {
            return cmd_counting(cCount, countOmega, countTheta, countT, countInitial,
                                countMode, countN, countDt, countProm);
        }
        if (sens->parsed()) {
            return cmd_sensemble(cSens, sensOmega, sensThetaGrid, sensSmin, sensSmax, sensDs);
        }
        if (phase->parsed()) {
            return cmd_phase_diagram(cPhase, phaseOmegaGrid, phaseThetaGrid, phaseInitial);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
