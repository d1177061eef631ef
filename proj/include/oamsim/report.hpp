// Copyright 2026 The oamsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file report.hpp
 * Subcommand logic behind the `sim` CLI, kept in the library so reports are
 * unit-testable. Every report renders both as TSV and as JSON with the same
 * numeric values; identical (config, seed) pairs produce identical bytes.
 *
 * Noise model of `table1` and simulated `tomo` runs, applied at the analysis
 * stage of an otherwise exact pipeline:
 *  - dgamma: Dove prism angle offset. Writes the relative phase error
 *    eps = 2 (l1 - l2) dgamma between the two transferred components, i.e. a
 *    rotation of the output qubit about the circular axis; eigenstate inputs
 *    are immune.
 *  - ddelta: q-plate retardation detuning. The conversion fraction drops to
 *    w = sin^2((pi + ddelta)/2) and the unconverted fraction reaches the
 *    detectors as an unpolarized 50/50 contribution.
 *  - bg: flat background rate; each counter gains an independent
 *    Poisson(N * bg) term.
 * With all three at zero the counts follow the exact transfer probabilities.
 */

#pragma once

#include <cstdint>

#include "json.hpp"
#include "oamsim/bench.hpp"
#include "oamsim/measure.hpp"

namespace oamsim {

/// %.12g formatting used for every number in TSV output.
std::string fmt_g(double v);

struct Report {
    std::string tsv;
    nlohmann::json json;

    std::string render(const std::string& format) const;
};

struct NoiseParams {
    double dgamma = 0.0;
    double ddelta = 0.0;
    double bg = 0.0;
};

/// Parses "dgamma=..,ddelta=..,bg=.." (any subset, any order).
NoiseParams parse_noise(const std::string& text);

struct TransferConfig {
    std::string preset = "det-transferrer";  // or "prob-transferrer"
    std::optional<std::string> bench_path;
    std::string input = "h";
    int l1 = 2;
    int l2 = -2;
    double q = 1.0;
    std::optional<std::string> tuning_path;  // with voltage: overrides delta
    std::optional<double> voltage;
    std::string format = "tsv";
};

Report cmd_transfer(const TransferConfig& cfg);

struct Table1Config {
    int l1 = 2;
    int l2 = -2;
    double q = 1.0;
    double pairs = 1e6;
    double eta_det = 1.0;
    std::uint64_t seed = 1;
    NoiseParams noise;
    bool compare_paper = false;
    int jobs = 1;
    std::string format = "tsv";
};

struct Table1Row {
    std::string state;
    double f = 0.0;
    double sigma = 0.0;
};

/// The six per-state rows of a table1 run (no average row).
std::array<Table1Row, 6> simulate_table1(const Table1Config& cfg);

Report cmd_table1(const Table1Config& cfg);

struct BudgetConfig {
    std::optional<std::string> path;
    bool paper = false;  // {optics: 0.648, fiber: 0.5}
    std::string format = "tsv";
};

Report cmd_budget(const BudgetConfig& cfg);

struct TomoConfig {
    std::optional<std::string> counts_path;  // reconstruct from a file
    std::optional<std::string> target;       // H V A D L R
    // simulation-mode parameters:
    std::string input = "h";
    int l1 = 2;
    int l2 = -2;
    double q = 1.0;
    double pairs = 1e4;
    double eta_det = 1.0;
    std::uint64_t seed = 1;
    NoiseParams noise;
    std::string format = "tsv";
};

Report cmd_tomo(const TomoConfig& cfg);

/// Loads and lowers a bench file; diagnostics are returned instead of a
/// circuit when the file does not parse cleanly.
struct BenchLoad {
    std::optional<Circuit> circuit;
    std::vector<Diagnostic> diagnostics;
    std::string file;
};

BenchLoad load_bench(const std::string& path);

/// Thrown by subcommands when a bench file fails to parse or lower; carries
/// the positioned diagnostics for `file:line:col:` reporting.
class BenchError : public std::runtime_error {
  public:
    BenchError(std::string file, std::vector<Diagnostic> diagnostics)
        : std::runtime_error("bench file has errors: " + file),
          file_(std::move(file)),
          diagnostics_(std::move(diagnostics)) {}

    const std::string& file() const { return file_; }
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  private:
    std::string file_;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace oamsim
