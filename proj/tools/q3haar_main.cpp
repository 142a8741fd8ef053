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

#include <iostream>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "q3haar/cli.hpp"

namespace {

// --config is read before the real parse so that flags given on the command
// line override values from the file.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string_view a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            return argv[i + 1];
        }
        if (a.substr(0, 9) == "--config=") {
            return std::string(a.substr(9));
        }
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    using namespace q3haar;
    RunConfig cfg;
    try {
        const std::string config_path = find_config_path(argc, argv);
        if (!config_path.empty()) {
            cfg = load_config_file(config_path);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }

    CLI::App app{"Haar-random two- and three-qubit states from a 3-CNOT circuit"};
    app.require_subcommand(1);
    std::string config_unused;
    app.add_option("--config", config_unused, "JSON file with default flag values");

    auto* sample = app.add_subcommand("sample", "Sample circuit angles and states");
    sample->add_option("--n", cfg.n, "Number of records");
    sample->add_option("--seed", cfg.seed, "Seed");
    sample->add_option("--qubits", cfg.qubits, "2 or 3");
    sample->add_option("--format", cfg.format, "jsonl or csv");
    sample->add_option("--bound", cfg.bound, "Rejection envelope for the theta3..theta6 block");
    sample->add_flag("--angles-only", cfg.angles_only, "Omit state amplitudes");
    sample->add_option("--out", cfg.output, "Output path (- for stdout)");
    sample->add_option("--mutant", cfg.mutant, "Deliberately wrong sampler (testing only)");
    sample->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");

    auto* extract = app.add_subcommand("extract", "Recover circuit angles from states");
    extract->add_option("--in", cfg.input, "States JSONL (- for stdin)");
    extract->add_option("--out", cfg.output, "Angles output (- for stdout)");
    extract->add_flag("--check", cfg.check, "Rebuild every state and report the worst fidelity");
    extract->add_option("--min-fidelity", cfg.min_fidelity, "Failure threshold for --check");
    extract->add_option("--branch", cfg.branch, "canonical or uniform");
    extract->add_option("--seed", cfg.seed, "Seed for --branch uniform");
    extract->add_option("--format", cfg.format, "jsonl or csv");

    auto* density = app.add_subcommand("density", "Evaluate the angle density at a point");
    density->add_option("--angles", cfg.angles, "14 or 6 radians: comma list or JSON array")
        ->required();

    auto* vmetric = app.add_subcommand("verify-metric", "Compare sqrt(det g) with the density");
    vmetric->add_option("--points", cfg.points, "Random points per template");
    vmetric->add_option("--tol", cfg.tol, "Allowed relative spread of the ratio");
    vmetric->add_option("--seed", cfg.seed, "Seed");
    vmetric->add_option("--template", cfg.template_name, "two, three or both");
    vmetric->add_flag("--json", cfg.json, "Machine-readable report");

    auto* vhaar = app.add_subcommand("verify-haar", "Statistical Haar checks of the sampler");
    vhaar->add_option("--n", cfg.n, "Batch size");
    vhaar->add_option("--seed", cfg.seed, "Seed");
    vhaar->add_option("--qubits", cfg.qubits, "2 or 3");
    vhaar->add_option("--mutant", cfg.mutant, "none, uniform-theta8 or swap-theta7-theta8");
    vhaar->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
    vhaar->add_flag("--json", cfg.json, "Machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return run_command(cfg);
}
