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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oamsim/report.hpp"

using namespace oamsim;

namespace {

const std::string kDataDir = OAMSIM_DATA_DIR;

/// key -> numeric columns of a TSV report.
std::map<std::string, std::vector<double>> tsv_numbers(const std::string& tsv) {
    std::map<std::string, std::vector<double>> out;
    std::istringstream in(tsv);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream cols(line);
        std::string key, cell;
        std::getline(cols, key, '\t');
        while (std::getline(cols, cell, '\t')) {
            try {
                size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used == cell.size()) out[key].push_back(v);
            } catch (const std::exception&) {
            }
        }
    }
    return out;
}

bool close12(double a, double b) {
    return std::abs(a - b) <= 1e-11 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path =
        (std::filesystem::temp_directory_path() / ("oamsim_" + name))
            .string();
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("transfer report: ideal preset run") {
    TransferConfig cfg;
    cfg.input = "h";
    const Report rep = cmd_transfer(cfg);
    CHECK(rep.json["success"].get<double>() == doctest::Approx(1.0));
    CHECK(rep.json["survival"].get<double>() == doctest::Approx(1.0));
    CHECK(rep.json["fidelity"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.tsv.find("input\th") != std::string::npos);
}

TEST_CASE("transfer report: probabilistic preset on circular input") {
    TransferConfig cfg;
    cfg.preset = "prob-transferrer";
    cfg.input = "L-pol";
    const Report rep = cmd_transfer(cfg);
    CHECK(rep.json["success"].get<double>() == doctest::Approx(0.5));
    CHECK(rep.json["fidelity"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bench file report matches the preset report") {
    TransferConfig preset_cfg;
    preset_cfg.input = "a";
    TransferConfig bench_cfg = preset_cfg;
    bench_cfg.bench_path = kDataDir + "/transferrer.bench";

    const Report from_preset = cmd_transfer(preset_cfg);
    const Report from_bench = cmd_transfer(bench_cfg);

    std::istringstream a(from_preset.tsv), b(from_bench.tsv);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb)) {
        if (la.rfind("circuit\t", 0) == 0) continue;  // label differs
        CHECK(la == lb);
    }
}

TEST_CASE("bench errors carry diagnostics") {
    const std::string path =
        write_temp("broken.bench", "dove gamma=pi/0\n");
    TransferConfig cfg;
    cfg.bench_path = path;
    CHECK_THROWS_AS(cmd_transfer(cfg), BenchError);
    try {
        cmd_transfer(cfg);
    } catch (const BenchError& e) {
        REQUIRE(e.diagnostics().size() == 1);
        CHECK(e.diagnostics()[0].line == 1);
    }
}

TEST_CASE("tuning override detunes the transfer") {
    TransferConfig cfg;
    cfg.input = "h";
    cfg.tuning_path = kDataDir + "/qp1_tuning.json";
    cfg.voltage = 4.5;
    const Report rep = cmd_transfer(cfg);
    const double f = rep.json["fidelity"].get<double>();
    CHECK(f > 0.99);
    CHECK(f < 1.0 - 1e-4);  // eff 0.995 at 4.5 V, not a perfect half wave
    CHECK_THROWS_AS(
        [&] {
            TransferConfig half = cfg;
            half.voltage.reset();
            return cmd_transfer(half);
        }(),
        std::invalid_argument);
}

TEST_CASE("table1 with no noise reports unit fidelities") {
    Table1Config cfg;
    cfg.pairs = 1e6;
    cfg.seed = 7;
    const auto rows = simulate_table1(cfg);
    for (const Table1Row& r : rows) {
        CHECK(r.f > 0.999);
    }
    const Report rep = cmd_table1(cfg);
    CHECK(rep.json["average"]["f"].get<double>() > 0.999);
}

TEST_CASE("table1 states are labeled by the transferred pair") {
    Table1Config cfg;
    cfg.pairs = 1000;
    const auto rows = simulate_table1(cfg);
    CHECK(rows[0].state == "+2");
    CHECK(rows[1].state == "-2");
    CHECK(rows[2].state == "h");
    CHECK(rows[5].state == "d");
}

TEST_CASE("table1 --compare-paper attaches the published column") {
    Table1Config cfg;
    cfg.pairs = 1e5;
    cfg.compare_paper = true;
    const Report rep = cmd_table1(cfg);
    CHECK(rep.json["states"][0]["paper_f"].get<double>() == 0.994);
    CHECK(rep.json["average"]["paper_f"].get<double>() == 0.980);
    CHECK(rep.json["average"]["paper_sigma"].get<double>() == 0.002);
    CHECK(rep.tsv.find("paper_F") != std::string::npos);
}

TEST_CASE("q-plate detuning degrades fidelity monotonically") {
    // the largest detuning leaves a conversion efficiency of 0.98
    const double worst_case = 2.0 * std::asin(std::sqrt(0.02));
    double prev_super = 1.1;
    for (double ddelta : {0.0, worst_case / 3, 2 * worst_case / 3,
                          worst_case}) {
        Table1Config cfg;
        cfg.pairs = 4e6;
        cfg.seed = 11;
        cfg.noise.ddelta = ddelta;
        const auto rows = simulate_table1(cfg);
        const double eigen = 0.5 * (rows[0].f + rows[1].f);
        const double super =
            0.25 * (rows[2].f + rows[3].f + rows[4].f + rows[5].f);
        CHECK(super < prev_super);
        prev_super = super;
        if (ddelta > 0.0) CHECK(rows[2].f < 0.9999);
        // eigenstates stay near unity throughout the sweep
        CHECK(eigen > 0.985);
    }
}

TEST_CASE("dove angle offset spares the eigenstates") {
    Table1Config cfg;
    cfg.pairs = 4e6;
    cfg.seed = 13;
    cfg.noise.dgamma = 0.03;
    const auto rows = simulate_table1(cfg);
    CHECK(rows[0].f > 0.9999);  // +2
    CHECK(rows[1].f > 0.9999);  // -2
    for (int i = 2; i < 6; ++i) {
        CHECK(rows[i].f < 0.995);
    }
}

TEST_CASE("table1 is deterministic and --jobs does not change the bytes") {
    Table1Config cfg;
    cfg.pairs = 1e5;
    cfg.seed = 99;
    cfg.noise = parse_noise("dgamma=0.02,ddelta=0.1,bg=0.001");
    const Report a = cmd_table1(cfg);
    const Report b = cmd_table1(cfg);
    Table1Config par = cfg;
    par.jobs = 4;
    const Report c = cmd_table1(par);
    CHECK(a.render("tsv") == b.render("tsv"));
    CHECK(a.render("json") == b.render("json"));
    CHECK(a.render("tsv") == c.render("tsv"));

    TomoConfig tomo;
    tomo.input = "v";
    tomo.pairs = 5000;
    tomo.seed = 31;
    CHECK(cmd_tomo(tomo).render("json") == cmd_tomo(tomo).render("json"));
}

TEST_CASE("json numbers match the tsv columns to 12 digits") {
    Table1Config t1;
    t1.pairs = 1e5;
    t1.seed = 3;
    t1.noise.ddelta = 0.2;
    const Report rep = cmd_table1(t1);
    const auto cols = tsv_numbers(rep.tsv);
    for (const auto& js : rep.json["states"]) {
        const auto& row = cols.at(js["state"].get<std::string>());
        CHECK(close12(row[0], js["f"].get<double>()));
        CHECK(close12(row[1], js["sigma"].get<double>()));
    }
    CHECK(close12(cols.at("average")[0],
                  rep.json["average"]["f"].get<double>()));

    TransferConfig tc;
    tc.input = "v";
    const Report tr = cmd_transfer(tc);
    const auto tcols = tsv_numbers(tr.tsv);
    for (const char* key : {"success", "survival", "fidelity"}) {
        CHECK(close12(tcols.at(key)[0], tr.json[key].get<double>()));
    }

    BudgetConfig bc;
    bc.paper = true;
    const Report br = cmd_budget(bc);
    const auto bcols = tsv_numbers(br.tsv);
    CHECK(close12(bcols.at("overall")[0], br.json["overall"].get<double>()));

    TomoConfig cfg;
    cfg.input = "a";
    cfg.seed = 21;
    const Report to = cmd_tomo(cfg);
    const auto ocols = tsv_numbers(to.tsv);
    for (int i = 0; i < 3; ++i) {
        CHECK(close12(ocols.at("bloch")[i],
                      to.json["bloch"][i].get<double>()));
    }
    CHECK(close12(ocols.at("fidelity")[0],
                  to.json["fidelity"].get<double>()));
}

TEST_CASE("json output is valid json") {
    BudgetConfig cfg;
    cfg.paper = true;
    const Report rep = cmd_budget(cfg);
    const auto parsed = nlohmann::json::parse(rep.render("json"));
    CHECK(parsed["overall"].get<double>() == 0.324);
    CHECK_THROWS_AS(rep.render("xml"), std::invalid_argument);
}

TEST_CASE("budget reports") {
    BudgetConfig paper;
    paper.paper = true;
    CHECK(cmd_budget(paper).json["overall"].get<double>() == 0.324);

    BudgetConfig from_file;
    from_file.path = kDataDir + "/paper_budget.json";
    CHECK(cmd_budget(from_file).json["overall"].get<double>() == 0.324);

    BudgetConfig empty;
    empty.path = write_temp("empty_budget.json", "{\"components\": {}}");
    CHECK(cmd_budget(empty).json["overall"].get<double>() == 1.0);

    BudgetConfig none;
    CHECK_THROWS_AS(cmd_budget(none), std::invalid_argument);
}

TEST_CASE("tomo from an ideal counts file") {
    const std::string path = write_temp(
        "r_counts.json",
        "{\"bases\": {\"RL\": [100000, 0], \"HV\": [50000, 50000],"
        " \"AD\": [50000, 50000]}}");
    TomoConfig cfg;
    cfg.counts_path = path;
    cfg.target = "R";
    const Report rep = cmd_tomo(cfg);
    CHECK(rep.json["bloch"][0].get<double>() == doctest::Approx(0.0));
    CHECK(rep.json["bloch"][1].get<double>() == doctest::Approx(0.0));
    CHECK(rep.json["bloch"][2].get<double>() == doctest::Approx(1.0));
    CHECK(rep.json["fidelity"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tomo of balanced counts lands on the fully mixed state") {
    const std::string path = write_temp(
        "mixed_counts.json",
        "{\"bases\": {\"RL\": [500, 500], \"HV\": [500, 500],"
        " \"AD\": [500, 500]}}");
    TomoConfig cfg;
    cfg.counts_path = path;
    const Report rep = cmd_tomo(cfg);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep.json["bloch"][i].get<double>() == 0.0);
    }
}

TEST_CASE("simulated tomography reconstructs the transfer output") {
    TomoConfig cfg;
    cfg.input = "a";
    cfg.pairs = 1e4;
    cfg.seed = 5;
    const Report rep = cmd_tomo(cfg);
    CHECK(rep.json["fidelity"].get<double>() >= 0.99);
    CHECK(rep.json["source"].get<std::string>() == "simulated:a");
}

TEST_CASE("noise string parsing") {
    const NoiseParams n = parse_noise("dgamma=0.01,ddelta=-0.2,bg=0.001");
    CHECK(n.dgamma == 0.01);
    CHECK(n.ddelta == -0.2);
    CHECK(n.bg == 0.001);
    CHECK(parse_noise("").dgamma == 0.0);
    CHECK(parse_noise("bg=0.5").bg == 0.5);
    CHECK_THROWS_AS(parse_noise("dgamma"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise("foo=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise("bg=x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_noise("bg=-1"), std::invalid_argument);
}

TEST_CASE("input state parsing errors are configuration errors") {
    TransferConfig cfg;
    cfg.input = "nonsense";
    CHECK_THROWS_AS(cmd_transfer(cfg), std::invalid_argument);
    cfg.preset = "mystery";
    CHECK_THROWS_AS(cmd_transfer(cfg), std::invalid_argument);
}

TEST_CASE("explicit amplitude inputs are normalized and accepted") {
    TransferConfig cfg;
    cfg.input = "0.6,0,0,0.8";
    const Report rep = cmd_transfer(cfg);
    CHECK(rep.json["fidelity"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.json["alpha"][0].get<double>() == doctest::Approx(0.6));
    CHECK(rep.json["beta"][1].get<double>() == doctest::Approx(0.8));
}
