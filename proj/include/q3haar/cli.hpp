// Copyright 2026 The q3haar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// \file cli.hpp
/// Command implementations behind the q3haar executable. Each command reads
/// a RunConfig and explicit streams and returns a process exit code, so the
/// commands can be driven from tests without spawning processes.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "q3haar/angles.hpp"
#include "q3haar/circuits.hpp"
#include "q3haar/density.hpp"
#include "q3haar/extract.hpp"
#include "q3haar/fsmetric.hpp"
#include "q3haar/io.hpp"
#include "q3haar/random.hpp"
#include "q3haar/sampler.hpp"
#include "q3haar/stats.hpp"

namespace q3haar {

enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitIo = 2,
    kExitUsage = 64,
    kExitData = 65,
};

class UsageError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultSampleCount = 1000;
inline constexpr std::size_t kDefaultHaarBatch = 100'000;

struct RunConfig {
    std::string command;
    std::optional<std::size_t> n;      // unset: per-command default
    std::uint64_t seed = 1;
    int qubits = 3;
    std::string format = "jsonl";  // jsonl | csv
    double bound = kDefaultEnvelope;
    bool angles_only = false;
    std::string input = "-";
    std::string output = "-";
    bool check = false;
    std::string branch = "canonical";  // canonical | uniform
    double min_fidelity = 1 - 1e-8;
    std::string angles;                // density: comma-separated radians
    std::size_t points = 100;
    double tol = 1e-8;
    std::string template_name = "both";  // two | three | both
    bool json = false;
    std::string mutant = "none";  // none | uniform-theta8 | swap-theta7-theta8
    unsigned workers = 1;

    void validate() const {
        if (n && *n == 0) {
            throw UsageError("--n must be positive");
        }
        if (!(bound > 0 && bound <= 1)) {
            throw UsageError("--bound must lie in (0, 1]");
        }
        if (format != "jsonl" && format != "csv") {
            throw UsageError("--format must be jsonl or csv");
        }
        if (qubits != 2 && qubits != 3) {
            throw UsageError("--qubits must be 2 or 3");
        }
        if (branch != "canonical" && branch != "uniform") {
            throw UsageError("--branch must be canonical or uniform");
        }
        if (template_name != "two" && template_name != "three" && template_name != "both") {
            throw UsageError("--template must be two, three or both");
        }
        if (mutant != "none" && mutant != "uniform-theta8" && mutant != "swap-theta7-theta8") {
            throw UsageError("--mutant must be none, uniform-theta8 or swap-theta7-theta8");
        }
        if (!(tol > 0)) {
            throw UsageError("--tol must be positive");
        }
    }

    Mutant mutant_kind() const {
        if (mutant == "uniform-theta8") {
            return Mutant::UniformTheta8;
        }
        if (mutant == "swap-theta7-theta8") {
            return Mutant::SwapTheta7Theta8;
        }
        return Mutant::None;
    }
};

/// Applies a JSON object whose keys mirror the long flag names.
inline void apply_config_json(RunConfig& cfg, const Json& j) {
    if (!j.is_object()) {
        throw UsageError("config file must hold a JSON object");
    }
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "n") {
                cfg.n = v.get<std::size_t>();
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "qubits") {
                cfg.qubits = v.get<int>();
            } else if (key == "format") {
                cfg.format = v.get<std::string>();
            } else if (key == "bound") {
                cfg.bound = v.get<double>();
            } else if (key == "angles-only") {
                cfg.angles_only = v.get<bool>();
            } else if (key == "in") {
                cfg.input = v.get<std::string>();
            } else if (key == "out") {
                cfg.output = v.get<std::string>();
            } else if (key == "check") {
                cfg.check = v.get<bool>();
            } else if (key == "branch") {
                cfg.branch = v.get<std::string>();
            } else if (key == "min-fidelity") {
                cfg.min_fidelity = v.get<double>();
            } else if (key == "angles") {
                cfg.angles = v.is_array() ? v.dump() : v.get<std::string>();
            } else if (key == "points") {
                cfg.points = v.get<std::size_t>();
            } else if (key == "tol") {
                cfg.tol = v.get<double>();
            } else if (key == "template") {
                cfg.template_name = v.get<std::string>();
            } else if (key == "json") {
                cfg.json = v.get<bool>();
            } else if (key == "mutant") {
                cfg.mutant = v.get<std::string>();
            } else if (key == "workers") {
                cfg.workers = v.get<unsigned>();
            } else {
                throw UsageError("unknown config key \"" + key + "\"");
            }
        } catch (const Json::exception& e) {
            throw UsageError("config key \"" + key + "\": " + e.what());
        }
    }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot open config file " + path);
    }
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    apply_config_json(base, j);
    return base;
}

struct Streams {
    std::istream* in = &std::cin;
    std::ostream* out = &std::cout;
    std::ostream* log = &std::cerr;
};

namespace detail {

/// Output sink: the given stream for "-", else a file.
class Sink {
 public:
    Sink(const std::string& path, std::ostream* fallback) {
        if (path.empty() || path == "-") {
            os_ = fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw IoError("cannot open " + path + " for writing");
            }
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }
    void finish() {
        os_->flush();
        if (!*os_) {
            throw IoError("write failed");
        }
    }

 private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

class Source {
 public:
    Source(const std::string& path, std::istream* fallback) {
        if (path.empty() || path == "-") {
            is_ = fallback;
        } else {
            file_ = std::make_unique<std::ifstream>(path);
            if (!*file_) {
                throw IoError("cannot open " + path + " for reading");
            }
            is_ = file_.get();
        }
    }
    std::istream& operator*() { return *is_; }

 private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* is_ = nullptr;
};

/// Comma-separated radians, a JSON array, or a JSON object {"theta": [...]}.
inline std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> out;
    const auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
        try {
            Json j = Json::parse(text);
            if (j.is_object()) {
                j = j.at("theta");
            }
            for (const Json& x : j) {
                out.push_back(x.get<double>());
            }
        } catch (const Json::exception& e) {
            throw UsageError(std::string("--angles: ") + e.what());
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string tok = text.substr(pos, end - pos);
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        double x = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size()) {
            throw UsageError("--angles: cannot parse \"" + tok + "\"");
        }
        out.push_back(x);
        pos = end + 1;
    }
    return out;
}

inline void write_reports(std::ostream& os, const std::string& command,
                          std::vector<GoFReport> reports, bool json) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const GoFReport& a, const GoFReport& b) { return a.name < b.name; });
    const bool ok = all_passed(reports);
    if (json) {
        Json arr = Json::array();
        for (const auto& r : reports) {
            arr.push_back(report_to_json(r));
        }
        os << Json{{"schema", kSchema}, {"command", command}, {"passed", ok}, {"reports", arr}}.dump()
           << '\n';
        return;
    }
    for (const auto& r : reports) {
        os << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(44) << r.name << ' '
           << to_string(r.kind) << " stat=" << format_double(r.statistic);
        if (r.p_value) {
            os << " p=" << format_double(*r.p_value);
        }
        if (r.kind == TestKind::Moment || r.kind == TestKind::Deviation) {
            os << " value=" << format_double(r.value) << " target=" << format_double(r.target);
        }
        os << '\n';
    }
    os << (ok ? "all checks passed" : "some checks FAILED") << '\n';
}

/// Angles drawn uniformly from the fundamental box (used as metric probe
/// points; the box law is irrelevant there).
template <std::size_t N>
Angles<N> uniform_box_point(RandomStream& rng) {
    const auto& r = ranges_for<N>();
    Angles<N> a;
    for (std::size_t k = 0; k < N; ++k) {
        a.theta[k] = rng.uniform(r[k].lo, r[k].hi);
    }
    return a;
}

/// Draws box points until `count` of them carry density above 1e-3 of the
/// largest density seen, and returns those in draw order.
template <std::size_t N, class Density>
std::vector<std::vector<double>> supported_box_points(RandomStream& rng, std::size_t count,
                                                      Density density) {
    std::vector<std::vector<double>> pts;
    std::vector<double> dens;
    const std::size_t cap = 1000 * count;
    while (pts.size() < cap) {
        const Angles<N> a = uniform_box_point<N>(rng);
        dens.push_back(density(a));
        pts.emplace_back(a.theta.begin(), a.theta.end());
        if (pts.size() < count) {
            continue;
        }
        const double max_density = *std::max_element(dens.begin(), dens.end());
        std::vector<std::vector<double>> kept;
        for (std::size_t i = 0; i < pts.size() && kept.size() < count; ++i) {
            if (dens[i] > 1e-3 * max_density) {
                kept.push_back(pts[i]);
            }
        }
        if (kept.size() == count) {
            return kept;
        }
    }
    throw std::runtime_error("supported_box_points: density support too thin");
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_sample(const RunConfig& cfg, Streams io) {
    cfg.validate();
    detail::Sink sink(cfg.output, io.out);
    std::ostream& os = *sink;
    const bool csv = cfg.format == "csv";
    const RandomStream base(cfg.seed, 0);
    const std::size_t n_angles = cfg.qubits == 3 ? 14 : 6;
    const std::size_t dim = cfg.qubits == 3 ? 8 : 4;
    if (csv) {
        os << csv_header(n_angles, dim, !cfg.angles_only) << '\n';
    }
    std::uint64_t proposals = 0;
    double max_density = 0;
    constexpr std::size_t kChunk = 4096;
    SamplerConfig scfg;
    scfg.bound = cfg.bound;
    scfg.mutant = cfg.mutant_kind();
    const std::size_t total = cfg.n.value_or(kDefaultSampleCount);
    try {
        for (std::size_t start = 0; start < total; start += kChunk) {
            const std::size_t count = std::min(kChunk, total - start);
            if (cfg.qubits == 3) {
                const auto batch = sample_batch_3q(base, count, scfg, cfg.workers, start);
                for (std::size_t i = 0; i < count; ++i) {
                    const SampleRecord& r = batch[i];
                    proposals += r.proposals_used;
                    max_density = std::max(max_density, r.max_density_seen);
                    if (csv) {
                        os << csv_row(start + i, r.angles.span(), cfg.angles_only ? nullptr : &r.state)
                           << '\n';
                        continue;
                    }
                    Json j = {{"schema", kSchema}, {"index", start + i},     {"seed", r.seed},
                              {"stream", r.stream_id}, {"qubits", 3},       {"theta", angles_to_json(r.angles)},
                              {"proposals", r.proposals_used}};
                    if (!cfg.angles_only) {
                        j["state"] = state_to_json(r.state);
                    }
                    os << j.dump() << '\n';
                }
            } else {
                for (std::size_t i = 0; i < count; ++i) {
                    RandomStream rng = base.substream(start + i);
                    const AngleSet6 a = sample_angles_2q(rng);
                    const StateVector s = build_state_2q(a);
                    if (csv) {
                        os << csv_row(start + i, a.span(), cfg.angles_only ? nullptr : &s) << '\n';
                        continue;
                    }
                    Json j = {{"schema", kSchema}, {"index", start + i}, {"seed", rng.seed()},
                              {"stream", rng.stream_id()}, {"qubits", 2}, {"theta", angles_to_json(a)}};
                    if (!cfg.angles_only) {
                        j["state"] = state_to_json(s);
                    }
                    os << j.dump() << '\n';
                }
            }
        }
    } catch (const EnvelopeViolation& e) {
        *io.log << "error: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
    sink.finish();
    if (cfg.qubits == 3) {
        const double rate = static_cast<double>(total) / static_cast<double>(proposals);
        *io.log << "joint theta3..theta6 block: accepted " << total << " of " << proposals
                << " proposals (" << std::fixed << std::setprecision(2) << 100 * rate
                << "%), max density seen " << std::setprecision(4) << max_density << ", bound "
                << cfg.bound << '\n';
        io.log->unsetf(std::ios::floatfield);
    }
    return kExitOk;
}

inline int cmd_extract(const RunConfig& cfg, Streams io) {
    detail::Source source(cfg.input, io.in);
    detail::Sink sink(cfg.output, io.out);
    std::ostream& os = *sink;
    const RandomStream base(cfg.seed, 0xE7);
    std::string line;
    std::size_t line_no = 0, index = 0, degenerate = 0;
    double min_fid = 1;
    while (std::getline(*source, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        StateVector psi(3);
        try {
            const Json j = Json::parse(line);
            psi = state_from_json(j.contains("state") ? j.at("state") : j);
            if (psi.n_qubits() != 3) {
                throw DataError("extraction needs a 3-qubit state");
            }
            const double nrm = psi.norm();
            if (!std::isfinite(nrm) || nrm == 0) {
                throw DataError("state is zero or not finite");
            }
            psi = psi.normalized();
        } catch (const Json::exception& e) {
            *io.log << "line " << line_no << ": malformed JSON: " << e.what() << '\n';
            return kExitData;
        } catch (const DataError& e) {
            *io.log << "line " << line_no << ": " << e.what() << '\n';
            return kExitData;
        }
        RandomStream rng = base.substream(index);
        const BranchChoice choice =
            cfg.branch == "uniform" ? BranchChoice::uniform(rng) : BranchChoice::canonical();
        const ExtractionResult r = extract_angles_detailed(psi, choice);
        min_fid = std::min(min_fid, r.fidelity);
        degenerate += r.degenerate ? 1 : 0;
        if (cfg.format == "csv") {
            if (index == 0) {
                os << csv_header(14, 0, false) << ",fidelity,degenerate\n";
            }
            os << csv_row(index, r.angles.span(), nullptr) << ',' << format_double(r.fidelity) << ','
               << (r.degenerate ? 1 : 0) << '\n';
        } else {
            os << Json{{"schema", kSchema},           {"index", index},
                       {"theta", angles_to_json(r.angles)}, {"fidelity", r.fidelity},
                       {"degenerate", r.degenerate},  {"branches", r.branches.size()}}
                      .dump()
               << '\n';
        }
        ++index;
    }
    sink.finish();
    if (degenerate > 0) {
        *io.log << degenerate << " degenerate state(s) resolved by convention\n";
    }
    if (cfg.check) {
        *io.log << "extracted " << index << " state(s), min rebuild fidelity "
                << format_double(min_fid) << '\n';
        if (index > 0 && min_fid < cfg.min_fidelity) {
            *io.log << "rebuild check FAILED (threshold " << format_double(cfg.min_fidelity) << ")\n";
            return kExitVerificationFailed;
        }
    }
    return kExitOk;
}

inline int cmd_density(const RunConfig& cfg, Streams io) {
    const std::vector<double> v = detail::parse_angle_list(cfg.angles);
    Json j = {{"schema", kSchema}, {"theta", v}};
    if (v.size() == 14) {
        AngleSet14 a;
        std::copy(v.begin(), v.end(), a.theta.begin());
        const DensityBreakdown d = density_breakdown(a);
        const double vol = volume_density(three_qubit_template(), a.span());
        j["qubits"] = 3;
        j["density"] = d.total;
        j["factors"] = {{"theta1", d.theta1}, {"theta2", d.theta2}, {"joint_3456", d.joint_3456},
                        {"tail", d.tail}};
        j["volume_density"] = vol;
        j["in_range"] = in_range(a);
        if (d.total > 0) {
            j["ratio"] = vol / d.total;
        }
    } else if (v.size() == 6) {
        AngleSet6 a;
        std::copy(v.begin(), v.end(), a.theta.begin());
        const double p = density_2q(a);
        const double vol = volume_density(two_qubit_template(), a.span());
        j["qubits"] = 2;
        j["density"] = p;
        j["volume_density"] = vol;
        j["in_range"] = in_range(a);
        if (p > 0) {
            j["ratio"] = vol / p;
        }
    } else {
        throw UsageError("--angles needs 14 (three qubits) or 6 (two qubits) values, got " +
                         std::to_string(v.size()));
    }
    *io.out << j.dump() << '\n';
    return kExitOk;
}

struct MetricCheck {
    ProportionalityReport report;
    bool passed = false;
};

/// sqrt(det g) against the analytic density at `points` uniform box points.
inline std::vector<MetricCheck> verify_metric(std::size_t points, std::uint64_t seed, double tol,
                                              const std::string& which) {
    std::vector<MetricCheck> out;
    if (which == "two" || which == "both") {
        RandomStream rng(seed, 2);
        const auto pts = detail::supported_box_points<6>(
            rng, points, [](const AngleSet6& a) { return density_2q(a); });
        MetricCheck c;
        c.report = check_proportionality(
            two_qubit_template(),
            [](std::span<const double> p) {
                AngleSet6 a;
                std::copy(p.begin(), p.end(), a.theta.begin());
                return density_2q(a);
            },
            pts);
        c.passed = c.report.ratio_rel_spread < tol;
        out.push_back(c);
    }
    if (which == "three" || which == "both") {
        RandomStream rng(seed, 3);
        const auto pts = detail::supported_box_points<14>(
            rng, points, [](const AngleSet14& a) { return density_full_14(a); });
        MetricCheck c;
        c.report = check_proportionality(
            three_qubit_template(),
            [](std::span<const double> p) {
                AngleSet14 a;
                std::copy(p.begin(), p.end(), a.theta.begin());
                return density_full_14(a);
            },
            pts);
        c.passed = c.report.ratio_rel_spread < tol;
        out.push_back(c);
    }
    return out;
}

inline int cmd_verify_metric(const RunConfig& cfg, Streams io) {
    cfg.validate();
    if (cfg.points < 10) {
        throw UsageError("--points must be at least 10");
    }
    const auto checks = verify_metric(cfg.points, cfg.seed, cfg.tol, cfg.template_name);
    bool ok = true;
    Json arr = Json::array();
    for (const auto& c : checks) {
        ok = ok && c.passed;
        arr.push_back({{"template", c.report.template_name},
                       {"n_points", c.report.n_points},
                       {"ratio_mean", c.report.ratio_mean},
                       {"rel_spread", c.report.ratio_rel_spread},
                       {"worst_point", c.report.worst_point},
                       {"worst_rel_deviation", c.report.worst_rel_deviation},
                       {"tolerance", cfg.tol},
                       {"passed", c.passed}});
    }
    if (cfg.json) {
        *io.out << Json{{"schema", kSchema}, {"command", "verify-metric"}, {"passed", ok},
                        {"checks", arr}}
                       .dump()
                << '\n';
    } else {
        for (const auto& c : checks) {
            *io.out << (c.passed ? "PASS " : "FAIL ") << c.report.template_name << ": "
                    << c.report.n_points << " points, sqrt(det g)/P mean "
                    << format_double(c.report.ratio_mean) << ", relative spread "
                    << format_double(c.report.ratio_rel_spread) << " (tol " << format_double(cfg.tol)
                    << ")\n";
        }
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

/// Haar checks on a circuit-sampled batch: moments and component KS against
/// a Gaussian-oracle batch; for three qubits also the angle-law and
/// invariance suites, for two qubits the Schmidt eigenvalue law.
inline std::vector<GoFReport> verify_haar(std::size_t n, std::uint64_t seed, int qubits,
                                          Mutant mutant, unsigned workers,
                                          const StatsConfig& scfg = {}) {
    std::vector<GoFReport> reports;
    auto append = [&](std::vector<GoFReport> more) {
        reports.insert(reports.end(), more.begin(), more.end());
    };
    const std::vector<StateVector> oracle =
        haar_reference_batch(qubits, RandomStream(seed, 0x0AC1E), n, workers);
    if (qubits == 3) {
        SamplerConfig c;
        c.mutant = mutant;
        const auto states = sample_states_3q(RandomStream(seed, 0x5A3), n, c, workers);
        append(haar_moment_suite(states, scfg));
        append(component_distribution_test(states, oracle, scfg));
        append(marginal_angle_suite(extract_batch_uniform(states, RandomStream(seed, 0xB4), workers),
                                    scfg));
        append(invariance_and_jacobian_suite(seed, scfg));
    } else {
        const auto states = sample_states_2q(RandomStream(seed, 0x5A2), n, workers);
        append(haar_moment_suite(states, scfg));
        append(component_distribution_test(states, oracle, scfg));
        reports.push_back(schmidt_lambda_test_2q(states, scfg));
    }
    return reports;
}

inline int cmd_verify_haar(const RunConfig& cfg, Streams io) {
    cfg.validate();
    if (cfg.qubits == 2 && cfg.mutant != "none") {
        throw UsageError("--mutant applies to the three-qubit sampler only");
    }
    const std::size_t n = cfg.n.value_or(kDefaultHaarBatch);
    if (n < StatsConfig{}.min_states) {
        throw UsageError("--n must be at least " + std::to_string(StatsConfig{}.min_states));
    }
    const auto reports = verify_haar(n, cfg.seed, cfg.qubits, cfg.mutant_kind(), cfg.workers);
    detail::write_reports(*io.out, "verify-haar", reports, cfg.json);
    return all_passed(reports) ? kExitOk : kExitVerificationFailed;
}

/// Dispatches on cfg.command and maps exceptions to exit codes.
inline int run_command(const RunConfig& cfg, Streams io = {}) {
    try {
        if (cfg.command == "sample") {
            return cmd_sample(cfg, io);
        }
        if (cfg.command == "extract") {
            cfg.validate();
            return cmd_extract(cfg, io);
        }
        if (cfg.command == "density") {
            return cmd_density(cfg, io);
        }
        if (cfg.command == "verify-metric") {
            return cmd_verify_metric(cfg, io);
        }
        if (cfg.command == "verify-haar") {
            return cmd_verify_haar(cfg, io);
        }
        throw UsageError("unknown command \"" + cfg.command + "\"");
    } catch (const UsageError& e) {
        *io.log << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        *io.log << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DataError& e) {
        *io.log << "data error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace q3haar
