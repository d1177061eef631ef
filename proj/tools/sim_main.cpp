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

// `sim` - command line front end.
//
// Exit codes: 0 success, 1 domain error, 2 configuration or parse error.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "oamsim/report.hpp"

namespace {

void add_pair_options(CLI::App* cmd, int* l1, int* l2, double* q) {
    cmd->add_option("--l1", *l1, "first OAM value of the transferred pair");
    cmd->add_option("--l2", *l2, "second OAM value of the transferred pair");
    cmd->add_option("--q", *q, "q-plate topological charge");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sim - single-photon OAM/polarization qubit transfer simulator"};
    app.require_subcommand(1);

    oamsim::TransferConfig transfer_cfg;
    std::string transfer_noise;
    auto* transfer = app.add_subcommand(
        "transfer", "run a qubit through a transferrer circuit");
    auto* preset_opt =
        transfer->add_option("--preset", transfer_cfg.preset,
                             "det-transferrer or prob-transferrer");
    transfer->add_option("--bench", transfer_cfg.bench_path,
                         "bench file describing the circuit")
        ->excludes(preset_opt);
    transfer->add_option("--input", transfer_cfg.input,
                         "input state label or re,im,re,im amplitudes");
    add_pair_options(transfer, &transfer_cfg.l1, &transfer_cfg.l2,
                     &transfer_cfg.q);
    transfer->add_option("--tuning", transfer_cfg.tuning_path,
                         "tuning curve JSON for the q-plates");
    transfer->add_option("--voltage", transfer_cfg.voltage,
                         "q-plate drive voltage, used with --tuning");
    transfer->add_option("--format", transfer_cfg.format, "tsv or json");

    oamsim::Table1Config table1_cfg;
    std::string table1_noise;
    auto* table1 = app.add_subcommand(
        "table1", "per-state transfer fidelities from sampled counts");
    add_pair_options(table1, &table1_cfg.l1, &table1_cfg.l2, &table1_cfg.q);
    table1->add_option("--pairs", table1_cfg.pairs, "expected photon pairs");
    table1->add_option("--eta", table1_cfg.eta_det, "detection efficiency");
    table1->add_option("--seed", table1_cfg.seed, "master RNG seed");
    table1->add_option("--noise", table1_noise, "dgamma=..,ddelta=..,bg=..");
    table1->add_flag("--compare-paper", table1_cfg.compare_paper,
                     "print the published fidelity column alongside");
    table1->add_option("--jobs", table1_cfg.jobs,
                       "parallel workers for independent states");
    table1->add_option("--format", table1_cfg.format, "tsv or json");

    oamsim::BudgetConfig budget_cfg;
    std::string budget_path;
    auto* budget =
        app.add_subcommand("budget", "optical efficiency budget product");
    budget->add_option("file", budget_path, "budget JSON file");
    budget->add_flag("--paper", budget_cfg.paper,
                     "use the built-in {optics 0.648, fiber 0.5} budget");
    budget->add_option("--format", budget_cfg.format, "tsv or json");

    oamsim::TomoConfig tomo_cfg;
    std::string tomo_noise;
    auto* tomo = app.add_subcommand(
        "tomo", "reconstruct the output qubit from three-basis counts");
    tomo->add_option("--counts", tomo_cfg.counts_path,
                     "counts JSON file (skips simulation)");
    tomo->add_option("--target", tomo_cfg.target,
                     "declared target ket: H V A D L R");
    tomo->add_option("--input", tomo_cfg.input, "input state to simulate");
    add_pair_options(tomo, &tomo_cfg.l1, &tomo_cfg.l2, &tomo_cfg.q);
    tomo->add_option("--pairs", tomo_cfg.pairs, "expected photon pairs");
    tomo->add_option("--eta", tomo_cfg.eta_det, "detection efficiency");
    tomo->add_option("--seed", tomo_cfg.seed, "master RNG seed");
    tomo->add_option("--noise", tomo_noise, "dgamma=..,ddelta=..,bg=..");
    tomo->add_option("--format", tomo_cfg.format, "tsv or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        oamsim::Report report;
        std::string format = "tsv";
        if (*transfer) {
            format = transfer_cfg.format;
            report = oamsim::cmd_transfer(transfer_cfg);
        } else if (*table1) {
            table1_cfg.noise = oamsim::parse_noise(table1_noise);
            format = table1_cfg.format;
            report = oamsim::cmd_table1(table1_cfg);
        } else if (*budget) {
            if (!budget_path.empty()) budget_cfg.path = budget_path;
            format = budget_cfg.format;
            report = oamsim::cmd_budget(budget_cfg);
        } else if (*tomo) {
            tomo_cfg.noise = oamsim::parse_noise(tomo_noise);
            format = tomo_cfg.format;
            report = oamsim::cmd_tomo(tomo_cfg);
        }
        std::cout << report.render(format);
        return 0;
    } catch (const oamsim::BenchError& e) {
        for (const oamsim::Diagnostic& d : e.diagnostics()) {
            std::cerr << oamsim::format_diagnostic(d, e.file()) << "\n";
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
