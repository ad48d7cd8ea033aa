// io.cpp — Parsing, CSV emission, digests, run manifests

#include "collspin/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "collspin/errors.hpp"

namespace collspin {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number: '" + text + "'");
    }
    if (pos != t.size()) throw ValidationError("trailing junk in number: '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

double parse_angle(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw ValidationError("empty angle");
    const auto pipos = t.find("pi");
    if (pipos == std::string::npos) return parse_double(t);

    // <coeff> [*] pi [/ <den>]
    std::string pre = trim(t.substr(0, pipos));
    std::string post = trim(t.substr(pipos + 2));
    double coeff = 1.0;
    if (!pre.empty()) {
        if (pre == "-") {
            coeff = -1.0;
        } else if (pre == "+") {
            coeff = 1.0;
        } else {
            if (pre.back() == '*') pre = trim(pre.substr(0, pre.size() - 1));
            if (pre.empty()) throw ValidationError("malformed angle: '" + text + "'");
            coeff = parse_double(pre);
        }
    }
    double den = 1.0;
    if (!post.empty()) {
        if (post.front() != '/') throw ValidationError("malformed angle: '" + text + "'");
        den = parse_double(post.substr(1));
        if (den == 0.0) throw ValidationError("division by zero in angle: '" + text + "'");
    }
    return coeff * kPi / den;
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ValidationError("empty grid spec");
    if (t.find(',') != std::string::npos) {
        std::vector<double> values;
        for (const auto& part : split(t, ',')) values.push_back(parse_angle(part));
        return values;
    }
    const auto parts = split(t, ':');
    if (parts.size() == 1) return {parse_angle(parts[0])};
    if (parts.size() != 3) {
        throw ValidationError("grid spec must be value, comma list or start:end:step");
    }
    const double start = parse_angle(parts[0]);
    const double end = parse_angle(parts[1]);
    const double step = parse_angle(parts[2]);
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    if (end < start) throw ValidationError("grid end before start");
    std::vector<double> values;
    for (double v = start; v <= end + 0.5 * step; v += step) values.push_back(v);
    return values;
}

InitialStateSpec parse_initial_state(const std::string& text) {
    InitialStateSpec spec;
    spec.text = trim(text);
    const std::string t = spec.text;
    if (t == "uniform-diag") {
        spec.kind = InitialStateSpec::Kind::UniformDiag;
        return spec;
    }
    if (t.rfind("sx:", 0) == 0) {
        spec.kind = InitialStateSpec::Kind::SxSuperposition;
        const std::string body = t.substr(3);
        if (trim(body).empty()) throw ValidationError("empty sx state list");
        for (const auto& part : split(body, ',')) {
            const auto starPos = part.find('*');
            double m, w = 1.0;
            if (starPos == std::string::npos) {
                m = parse_double(part);
            } else {
                m = parse_double(part.substr(0, starPos));
                w = parse_double(part.substr(starPos + 1));
                if (w < 0.0) throw ValidationError("amplitude weights must be non-negative");
            }
            spec.ms.push_back(m);
            spec.weights.push_back(w);
        }
        return spec;
    }
    if (t.rfind("sz:", 0) == 0) {
        spec.kind = InitialStateSpec::Kind::SzState;
        const std::string body = trim(t.substr(3));
        if (body == "J" || body == "+J") {
            spec.mzIsPlusJ = true;
        } else if (body == "-J") {
            spec.mzIsMinusJ = true;
        } else {
            spec.mz = parse_double(body);
        }
        return spec;
    }
    throw ValidationError("unrecognized initial state '" + text +
                          "' (expected sx:..., sz:..., or uniform-diag)");
}

Eigen::VectorXcd initial_sx_amplitudes(const InitialStateSpec& spec, const SpinOperators& ops) {
    if (spec.kind != InitialStateSpec::Kind::SxSuperposition) {
        throw ValidationError("initial state '" + spec.text + "' is not an sx superposition");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(ops.dim);
    for (std::size_t i = 0; i < spec.ms.size(); ++i) {
        const double m = spec.ms[i];
        if (std::abs(m) > ops.J + 1e-9 ||
            std::abs(m + ops.J - std::round(m + ops.J)) > 1e-9) {
            throw ValidationError("sx eigenvalue out of ladder: m=" + std::to_string(m));
        }
        const int idx = ops.sx_index(m);
        if (std::abs(amps(idx)) > 0.0) {
            throw ValidationError("duplicate sx eigenvalue in initial state");
        }
        amps(idx) = spec.weights[i];
    }
    const double norm = amps.norm();
    if (norm <= 0.0) throw ValidationError("initial state has zero norm");
    return amps / norm;
}

Eigen::VectorXcd initial_pure_state(const InitialStateSpec& spec, const SpinOperators& ops) {
    switch (spec.kind) {
        case InitialStateSpec::Kind::SxSuperposition: {
            return ops.sxBasis * initial_sx_amplitudes(spec, ops);
        }
        case InitialStateSpec::Kind::SzState: {
            double m = spec.mz;
            if (spec.mzIsPlusJ) m = ops.J;
            if (spec.mzIsMinusJ) m = -ops.J;
            return ops.sz_state(m);
        }
        case InitialStateSpec::Kind::UniformDiag:
            throw ValidationError("uniform-diag is a mixture, not a pure state");
    }
    throw ValidationError("unreachable initial state kind");
}

Eigen::VectorXd initial_diag_populations(const InitialStateSpec& spec,
                                         const ModelParams& params) {
    const int d = params.dim();
    if (spec.kind == InitialStateSpec::Kind::UniformDiag) {
        return Eigen::VectorXd::Constant(d, 1.0 / d);
    }
    if (spec.kind == InitialStateSpec::Kind::SxSuperposition) {
        Eigen::VectorXd pops = Eigen::VectorXd::Zero(d);
        double total = 0.0;
        for (std::size_t i = 0; i < spec.ms.size(); ++i) {
            const int idx = static_cast<int>(std::lround(spec.ms[i] + params.J));
            if (idx < 0 || idx >= d) {
                throw ValidationError("sx eigenvalue out of ladder: m=" +
                                      std::to_string(spec.ms[i]));
            }
            pops(idx) += spec.weights[i] * spec.weights[i];
            total += spec.weights[i] * spec.weights[i];
        }
        if (total <= 0.0) throw ValidationError("initial state has zero weight");
        return pops / total;
    }
    throw ValidationError("initial state '" + spec.text +
                          "' has no diagonal Sx representation");
}

Eigen::MatrixXcd initial_density_matrix(const InitialStateSpec& spec, const SpinOperators& ops) {
    if (spec.kind == InitialStateSpec::Kind::UniformDiag) {
        return Eigen::MatrixXcd::Identity(ops.dim, ops.dim) / static_cast<double>(ops.dim);
    }
    const Eigen::VectorXcd psi = initial_pure_state(spec, ops);
    return psi * psi.adjoint();
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string CsvWriter::escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::comment(const std::string& line) {
    buf_ += "# ";
    buf_ += line;
    buf_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += escape(fields[i]);
    }
    buf_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open output file " + path);
    out << buf_;
    if (!out) throw NumericalError("write failed for " + path);
}

std::uint64_t RunManifest::paramsDigest() const {
    std::string canon = command;
    canon += '\n';
    for (const auto& [key, value] : parameters) {
        canon += key;
        canon += '=';
        canon += value;
        canon += '\n';
    }
    canon += "seed=" + std::to_string(seed);
    return fnv1a64(canon);
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["parameters_digest"] = hex64(paramsDigest());
    j["started_at"] = startedAt;
    j["finished_at"] = finishedAt;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [file, digest] : outputs) {
        outs.push_back({{"file", file}, {"fnv1a64", hex64(digest)}});
    }
    j["outputs"] = outs;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open manifest file " + path);
    out << to_json();
}

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

} // namespace collspin
