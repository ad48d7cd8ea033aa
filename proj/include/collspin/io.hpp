// io.hpp — CLI support: angle and initial-state parsing, CSV emission,
// content digests and run manifests

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collspin/model.hpp"
#include "collspin/spin_ops.hpp"

namespace collspin {

// Parses an angle that may contain a symbolic pi: "0.5", "pi", "pi/4",
// "3*pi/8", "0.25pi". Keeping pi symbolic avoids decimal drift exactly at
// the strong-symmetry point.
double parse_angle(const std::string& text);

// Grid spec: "start:end:step" (end included within half a step), a comma
// list, or a single value. Entries go through parse_angle.
std::vector<double> parse_grid(const std::string& text);

// Initial-state mini-language:
//   sx:m1,m2,...        equal-amplitude superposition of Sx eigenstates
//   sx:m1*w1,m2*w2      amplitude weights (non-negative), normalized
//   sz:m | sz:-J | sz:J Sz basis state
//   uniform-diag        equal-population diagonal mixture in the Sx basis
struct InitialStateSpec {
    enum class Kind { SxSuperposition, SzState, UniformDiag } kind = Kind::UniformDiag;
    std::vector<double> ms;       // Sx eigenvalues (SxSuperposition)
    std::vector<double> weights;  // amplitude weights, same length as ms
    double mz = 0.0;              // SzState
    bool mzIsPlusJ = false, mzIsMinusJ = false;
    std::string text;

    bool diagonal() const { return kind != Kind::SxSuperposition || ms.size() == 1; }
};

InitialStateSpec parse_initial_state(const std::string& text);

// Realizations of a spec for a concrete J. All throw ValidationError when
// the spec does not fit the ladder.
Eigen::VectorXcd initial_pure_state(const InitialStateSpec& spec, const SpinOperators& ops);
Eigen::VectorXd initial_diag_populations(const InitialStateSpec& spec, const ModelParams& params);
Eigen::MatrixXcd initial_density_matrix(const InitialStateSpec& spec, const SpinOperators& ops);
Eigen::VectorXcd initial_sx_amplitudes(const InitialStateSpec& spec, const SpinOperators& ops);

// FNV-1a 64-bit content digest.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// Doubles formatted with "%.17g": shortest form that round-trips, stable
// across runs on one platform.
std::string g17(double v);

// Minimal RFC-4180-style CSV assembly: fields containing comma, quote, CR
// or LF are quoted, embedded quotes doubled. Rows accumulate in memory and
// are flushed to disk in one shot so failed runs never leave partial files.
class CsvWriter {
public:
    // Lines prefixed with "# " above the header row.
    void comment(const std::string& line);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);
    const std::string& content() const { return buf_; }
    std::uint64_t digest() const { return fnv1a64(buf_); }
    void write(const std::string& path) const;

    static std::string escape(const std::string& field);

private:
    std::string buf_;
};

// Record of one CLI invocation. `paramsDigest` (FNV over the canonical
// parameter serialization) is embedded in every CSV header block; the
// manifest itself carries timestamps and per-file content digests.
struct RunManifest {
    std::string command;
    std::string version;
    std::map<std::string, std::string> parameters;  // fully resolved
    std::uint64_t seed = 0;
    std::string startedAt;   // ISO-8601 UTC
    std::string finishedAt;
    std::vector<std::pair<std::string, std::uint64_t>> outputs;  // (file, digest)

    std::uint64_t paramsDigest() const;
    std::string to_json() const;
    void write(const std::string& path) const;
};

std::string iso8601_utc_now();

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace collspin
