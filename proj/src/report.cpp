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

#include "oamsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace oamsim {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string Report::render(const std::string& format) const {
    if (format == "json") return json.dump(2) + "\n";
    if (format == "tsv") return tsv;
    throw std::invalid_argument("unknown output format: " + format);
}

NoiseParams parse_noise(const std::string& text) {
    NoiseParams n;
    if (text.empty()) return n;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("noise: expected key=value, got '" +
                                        item + "'");
        }
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("noise: bad number in '" + item + "'");
        }
        if (key == "dgamma") n.dgamma = value;
        else if (key == "ddelta") n.ddelta = value;
        else if (key == "bg") n.bg = value;
        else throw std::invalid_argument("noise: unknown key '" + key + "'");
    }
    if (n.bg < 0.0) throw std::invalid_argument("noise: bg must be >= 0");
    return n;
}

namespace {

std::string fmt_l(int l) {
    return (l >= 0 ? "+" : "") + std::to_string(l);
}

struct QubitSpec {
    cxd alpha;
    cxd beta;
    std::string label;
    std::optional<Mub> mub;
};

std::optional<Mub> mub_from_label(const std::string& s) {
    if (s == "h") return Mub::h;
    if (s == "v") return Mub::v;
    if (s == "a") return Mub::a;
    if (s == "d") return Mub::d;
    return std::nullopt;
}

bool parse_custom_amplitudes(const std::string& s, cxd* alpha, cxd* beta) {
    double vals[4];
    int at = 0;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (at >= 4) return false;
        try {
            size_t used = 0;
            vals[at] = std::stod(item, &used);
            if (used != item.size()) return false;
        } catch (const std::exception&) {
            return false;
        }
        ++at;
    }
    if (at != 4) return false;
    *alpha = cxd{vals[0], vals[1]};
    *beta = cxd{vals[2], vals[3]};
    const double n2 = std::norm(*alpha) + std::norm(*beta);
    if (n2 <= 0.0) return false;
    const double inv = 1.0 / std::sqrt(n2);
    *alpha *= inv;
    *beta *= inv;
    return true;
}

/// Input qubit over the {|l1>, |l2>} OAM pair.
QubitSpec parse_oam_input(const std::string& s, int l1, int l2) {
    QubitSpec spec;
    spec.label = s;
    if (s == fmt_l(l1) || s == std::to_string(l1)) {
        spec.alpha = 1.0;
        spec.beta = 0.0;
        spec.mub = Mub::plus;
        return spec;
    }
    if (s == fmt_l(l2) || s == std::to_string(l2)) {
        spec.alpha = 0.0;
        spec.beta = 1.0;
        spec.mub = Mub::minus;
        return spec;
    }
    if (auto m = mub_from_label(s)) {
        const auto c = mub_coefficients(*m);
        spec.alpha = c[0];
        spec.beta = c[1];
        spec.mub = m;
        return spec;
    }
    if (parse_custom_amplitudes(s, &spec.alpha, &spec.beta)) return spec;
    throw std::invalid_argument(
        "input state '" + s + "' not recognized; expected " + fmt_l(l1) +
        ", " + fmt_l(l2) + ", h, v, a, d or re,im,re,im amplitudes");
}

/// Input polarization qubit over {|L>, |R>}.
QubitSpec parse_pol_input(const std::string& s) {
    QubitSpec spec;
    spec.label = s;
    static const std::pair<const char*, PolKet> named[] = {
        {"H-pol", PolKet::H}, {"V-pol", PolKet::V}, {"A-pol", PolKet::A},
        {"D-pol", PolKet::D}, {"L-pol", PolKet::L}, {"R-pol", PolKet::R},
    };
    for (const auto& [name, ket] : named) {
        if (s == name) {
            const auto [ch, cv] = jones(ket);
            // decompose over the circular pair
            const cxd i{0.0, 1.0};
            spec.alpha = (ch - i * cv) / std::sqrt(2.0);
            spec.beta = (ch + i * cv) / std::sqrt(2.0);
            return spec;
        }
    }
    if (parse_custom_amplitudes(s, &spec.alpha, &spec.beta)) return spec;
    throw std::invalid_argument("input state '" + s +
                                "' not recognized; expected one of H-pol, "
                                "V-pol, A-pol, D-pol, L-pol, R-pol or "
                                "re,im,re,im amplitudes over L/R");
}

std::string amp_label(const ModeLabel& m) {
    return std::string(1, pol_char(m.pol)) + "," + fmt_l(m.oam) + ",p" +
           std::to_string(m.path);
}

void emit_state(std::ostringstream& tsv, nlohmann::json& j,
                const std::string& key, const PhotonState& s) {
    auto& obj = j[key] = nlohmann::json::object();
    for (const auto& [label, a] : s.amp) {
        const std::string name = amp_label(label);
        tsv << key << '\t' << name << '\t' << fmt_g(a.real()) << '\t'
            << fmt_g(a.imag()) << '\n';
        obj[name] = {a.real(), a.imag()};
    }
}

/// Rotates the polarization qubit at (oam, path) about the circular axis:
/// the |L> amplitude gains e^{-i eps/2}, the |R> amplitude e^{+i eps/2}.
PhotonState rotate_about_circular(const PhotonState& s, double eps, int oam,
                                  int path) {
    if (eps == 0.0) return s;
    PhotonState out = s;
    const ModeLabel lh{Pol::H, oam, path};
    const ModeLabel lv{Pol::V, oam, path};
    cxd ch{0.0, 0.0}, cv{0.0, 0.0};
    if (auto it = out.amp.find(lh); it != out.amp.end()) ch = it->second;
    if (auto it = out.amp.find(lv); it != out.amp.end()) cv = it->second;
    const cxd i{0.0, 1.0};
    const double rt = std::sqrt(0.5);
    cxd al = (ch - i * cv) * rt;
    cxd ar = (ch + i * cv) * rt;
    al *= std::polar(1.0, -eps / 2.0);
    ar *= std::polar(1.0, eps / 2.0);
    out.amp[lh] = (al + ar) * rt;
    out.amp[lv] = i * (al - ar) * rt;
    return out;
}

PolBasis target_basis(Mub m) {
    switch (m) {
        case Mub::plus:
        case Mub::minus: return PolBasis::RL;
        case Mub::h:
        case Mub::v: return PolBasis::HV;
        case Mub::a:
        case Mub::d: return PolBasis::AD;
    }
    throw std::logic_error("target_basis: bad state");
}

/// First-outcome probability of `basis` behind the effective noise channel.
double noisy_p_first(const PhotonState& ideal, PolBasis basis,
                     const NoiseParams& noise, int l1, int l2, int oam,
                     int path) {
    const double eps = 2.0 * (l1 - l2) * noise.dgamma;
    const double w = qplate_efficiency(kPi + noise.ddelta);
    const PhotonState rotated = rotate_about_circular(ideal, eps, oam, path);
    const double p = project_probability(rotated, {basis, oam, path}, 0);
    // roundoff can push a certain outcome a few ulp past 1
    return std::min(1.0, std::max(0.0, w * p + (1.0 - w) / 2.0));
}

void apply_tuning_override(Circuit& circuit, const TransferConfig& cfg) {
    if (!cfg.tuning_path && !cfg.voltage) return;
    if (!cfg.tuning_path || !cfg.voltage) {
        throw std::invalid_argument(
            "transfer: --tuning and --voltage must be given together");
    }
    const TuningCurve curve = load_tuning_curve(*cfg.tuning_path);
    const double delta = voltage_to_delta(curve, *cfg.voltage);
    for (OpticalElement& e : circuit.elements) {
        if (auto* qp = std::get_if<QPlate>(&e.kind)) qp->delta = delta;
    }
}

}  // namespace

BenchLoad load_bench(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open bench file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    BenchLoad out;
    out.file = path;
    BenchSpec spec = parse(text);
    if (!spec.diagnostics.empty()) {
        out.diagnostics = std::move(spec.diagnostics);
        return out;
    }
    LowerResult lowered = lower(spec);
    out.diagnostics = std::move(lowered.diagnostics);
    out.circuit = std::move(lowered.circuit);
    return out;
}

Report cmd_transfer(const TransferConfig& cfg) {
    Circuit circuit;
    std::string circuit_label;
    const bool prob = cfg.preset == "prob-transferrer";
    if (cfg.bench_path) {
        BenchLoad loaded = load_bench(*cfg.bench_path);
        if (!loaded.circuit) {
            throw BenchError(loaded.file, std::move(loaded.diagnostics));
        }
        circuit = std::move(*loaded.circuit);
        circuit_label = "bench:" + *cfg.bench_path;
    } else if (cfg.preset == "det-transferrer") {
        circuit = deterministic_transferrer(cfg.l1, cfg.l2, cfg.q);
        circuit_label = cfg.preset;
    } else if (prob) {
        circuit = probabilistic_transferrer_pi_to_oam(cfg.q);
        circuit_label = cfg.preset;
    } else {
        throw std::invalid_argument("unknown preset '" + cfg.preset +
                                    "'; use det-transferrer or "
                                    "prob-transferrer");
    }
    apply_tuning_override(circuit, cfg);

    PhotonState input;
    PhotonState expected;
    QubitSpec spec;
    if (prob) {
        spec = parse_pol_input(cfg.input);
        input = pol_qubit_state(circuit.space, spec.alpha, spec.beta, 0, 0);
        const int shift = static_cast<int>(std::llround(2.0 * cfg.q));
        expected = oam_qubit_state(circuit.space, shift, -shift, spec.alpha,
                                   spec.beta);
    } else {
        spec = parse_oam_input(cfg.input, cfg.l1, cfg.l2);
        input = oam_qubit_state(circuit.space, cfg.l1, cfg.l2, spec.alpha,
                                spec.beta);
        if ((cfg.l1 + cfg.l2) % 2 != 0) {
            throw std::invalid_argument(
                "transfer: l1 + l2 must be even for a single-q-plate "
                "transferrer");
        }
        expected = pol_qubit_state(circuit.space, spec.alpha, spec.beta,
                                   (cfg.l1 + cfg.l2) / 2, 0);
    }

    const TransferResult result = run_transfer(circuit, input);
    double fidelity = 0.0;
    if (result.output.norm2() > 1e-30) {
        fidelity = state_fidelity(normalized(result.output), expected);
    }

    Report rep;
    std::ostringstream tsv;
    tsv << "circuit\t" << circuit_label << '\n';
    tsv << "input\t" << spec.label << '\n';
    tsv << "alpha\t" << fmt_g(spec.alpha.real()) << '\t'
        << fmt_g(spec.alpha.imag()) << '\n';
    tsv << "beta\t" << fmt_g(spec.beta.real()) << '\t'
        << fmt_g(spec.beta.imag()) << '\n';
    tsv << "success\t" << fmt_g(result.success) << '\n';
    tsv << "survival\t" << fmt_g(result.survival) << '\n';
    tsv << "fidelity\t" << fmt_g(fidelity) << '\n';
    rep.json["circuit"] = circuit_label;
    rep.json["input"] = spec.label;
    rep.json["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
    rep.json["beta"] = {spec.beta.real(), spec.beta.imag()};
    rep.json["success"] = result.success;
    rep.json["survival"] = result.survival;
    rep.json["fidelity"] = fidelity;
    emit_state(tsv, rep.json, "output", result.output);
    rep.tsv = tsv.str();
    return rep;
}

std::array<Table1Row, 6> simulate_table1(const Table1Config& cfg) {
    if (!(cfg.pairs > 0.0)) {
        throw std::invalid_argument("table1: pairs must be positive");
    }
    const Circuit circuit = deterministic_transferrer(cfg.l1, cfg.l2, cfg.q);
    const TransferrerInfo info =
        deterministic_transferrer_info(cfg.l1, cfg.l2, cfg.q);
    static const Mub order[6] = {Mub::plus, Mub::minus, Mub::h,
                                 Mub::v,    Mub::a,     Mub::d};

    auto simulate_one = [&](int i) {
        const Mub m = order[i];
        const auto c = mub_coefficients(m);
        const PhotonState input =
            oam_qubit_state(circuit.space, cfg.l1, cfg.l2, c[0], c[1]);
        const PhotonState ideal =
            normalized(run_transfer(circuit, input).output);
        const PolBasis basis = target_basis(m);
        const double p_first = noisy_p_first(ideal, basis, cfg.noise, cfg.l1,
                                             cfg.l2, info.l_final, 0);
        const CountTable counts = sample_counts(
            to_string(basis), p_first, cfg.pairs, cfg.eta_det,
            derive_seed(cfg.seed, static_cast<std::uint64_t>(i)), cfg.noise.bg);
        const FidelityEstimate est = fidelity_from_counts(counts);
        Table1Row row;
        switch (m) {
            case Mub::plus: row.state = fmt_l(cfg.l1); break;
            case Mub::minus: row.state = fmt_l(cfg.l2); break;
            default: row.state = to_string(m); break;
        }
        row.f = est.f;
        row.sigma = est.sigma;
        return row;
    };

    std::array<Table1Row, 6> rows;
    if (cfg.jobs > 1) {
        std::array<std::future<Table1Row>, 6> futures;
        for (int i = 0; i < 6; ++i) {
            futures[i] =
                std::async(std::launch::async, simulate_one, i);
        }
        for (int i = 0; i < 6; ++i) rows[i] = futures[i].get();
    } else {
        for (int i = 0; i < 6; ++i) rows[i] = simulate_one(i);
    }
    return rows;
}

Report cmd_table1(const Table1Config& cfg) {
    const auto rows = simulate_table1(cfg);

    double f_sum = 0.0, var_sum = 0.0;
    for (const Table1Row& r : rows) {
        f_sum += r.f;
        var_sum += r.sigma * r.sigma;
    }
    const double f_avg = f_sum / 6.0;
    const double sigma_avg = std::sqrt(var_sum) / 6.0;

    // Published reference column (coincidence-count fidelities).
    static const std::pair<double, double> paper[6] = {
        {0.994, 0.003}, {0.992, 0.003}, {0.982, 0.005},
        {0.944, 0.008}, {0.992, 0.003}, {0.980, 0.005}};
    static const std::pair<double, double> paper_avg = {0.980, 0.002};

    Report rep;
    std::ostringstream tsv;
    tsv << "state\tF\tsigma";
    if (cfg.compare_paper) tsv << "\tpaper_F\tpaper_sigma";
    tsv << '\n';
    auto& jstates = rep.json["states"] = nlohmann::json::array();
    for (int i = 0; i < 6; ++i) {
        tsv << rows[i].state << '\t' << fmt_g(rows[i].f) << '\t'
            << fmt_g(rows[i].sigma);
        nlohmann::json js{{"state", rows[i].state},
                          {"f", rows[i].f},
                          {"sigma", rows[i].sigma}};
        if (cfg.compare_paper) {
            tsv << '\t' << fmt_g(paper[i].first) << '\t'
                << fmt_g(paper[i].second);
            js["paper_f"] = paper[i].first;
            js["paper_sigma"] = paper[i].second;
        }
        tsv << '\n';
        jstates.push_back(std::move(js));
    }
    tsv << "average\t" << fmt_g(f_avg) << '\t' << fmt_g(sigma_avg);
    rep.json["average"] = {{"f", f_avg}, {"sigma", sigma_avg}};
    if (cfg.compare_paper) {
        tsv << '\t' << fmt_g(paper_avg.first) << '\t'
            << fmt_g(paper_avg.second);
        rep.json["average"]["paper_f"] = paper_avg.first;
        rep.json["average"]["paper_sigma"] = paper_avg.second;
    }
    tsv << '\n';
    rep.tsv = tsv.str();
    return rep;
}

Report cmd_budget(const BudgetConfig& cfg) {
    EfficiencyBudget budget;
    if (cfg.paper) {
        budget.components = {{"optics", 0.648}, {"fiber", 0.5}};
    } else if (cfg.path) {
        budget = load_budget(*cfg.path);
    } else {
        throw std::invalid_argument("budget: give a budget file or --paper");
    }
    const double overall = overall_efficiency(budget);

    Report rep;
    std::ostringstream tsv;
    tsv << "component\teta\n";
    auto& jc = rep.json["components"] = nlohmann::json::object();
    for (const auto& [name, eta] : budget.components) {
        tsv << name << '\t' << fmt_g(eta) << '\n';
        jc[name] = eta;
    }
    tsv << "overall\t" << fmt_g(overall) << '\n';
    rep.json["overall"] = overall;
    rep.tsv = tsv.str();
    return rep;
}

Report cmd_tomo(const TomoConfig& cfg) {
    DensityMatrix2 rho;
    std::optional<std::array<cxd, 2>> target_ket;
    std::string source;

    if (cfg.target) {
        bool found = false;
        for (PolKet k : {PolKet::H, PolKet::V, PolKet::A, PolKet::D,
                         PolKet::L, PolKet::R}) {
            if (*cfg.target == to_string(k)) {
                target_ket = jones(k);
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("tomo: unknown target '" +
                                        *cfg.target + "'");
        }
    }

    if (cfg.counts_path) {
        const CountsFile counts = load_counts(*cfg.counts_path);
        rho = tomography(counts.rl, counts.hv, counts.ad);
        source = "counts:" + *cfg.counts_path;
    } else {
        if (!(cfg.pairs > 0.0)) {
            throw std::invalid_argument("tomo: pairs must be positive");
        }
        const Circuit circuit =
            deterministic_transferrer(cfg.l1, cfg.l2, cfg.q);
        const TransferrerInfo info =
            deterministic_transferrer_info(cfg.l1, cfg.l2, cfg.q);
        const QubitSpec spec = parse_oam_input(cfg.input, cfg.l1, cfg.l2);
        const PhotonState input = oam_qubit_state(
            circuit.space, cfg.l1, cfg.l2, spec.alpha, spec.beta);
        const PhotonState ideal =
            normalized(run_transfer(circuit, input).output);
        CountTable tables[3];
        const PolBasis bases[3] = {PolBasis::RL, PolBasis::HV, PolBasis::AD};
        for (int b = 0; b < 3; ++b) {
            const double p = noisy_p_first(ideal, bases[b], cfg.noise, cfg.l1,
                                           cfg.l2, info.l_final, 0);
            tables[b] = sample_counts(
                to_string(bases[b]), p, cfg.pairs, cfg.eta_det,
                derive_seed(cfg.seed, static_cast<std::uint64_t>(b)),
                cfg.noise.bg);
        }
        rho = tomography(tables[0], tables[1], tables[2]);
        source = "simulated:" + spec.label;
        if (!target_ket) {
            // declared target defaults to the ideal transfer output
            const cxd ch = (spec.alpha + spec.beta) / std::sqrt(2.0);
            const cxd cv =
                cxd{0.0, 1.0} * (spec.alpha - spec.beta) / std::sqrt(2.0);
            target_ket = std::array<cxd, 2>{ch, cv};
        }
    }

    const auto bloch = rho.bloch();
    Report rep;
    std::ostringstream tsv;
    tsv << "source\t" << source << '\n';
    tsv << "bloch\t" << fmt_g(bloch[0]) << '\t' << fmt_g(bloch[1]) << '\t'
        << fmt_g(bloch[2]) << '\n';
    const char* names[4] = {"rho00", "rho01", "rho10", "rho11"};
    int at = 0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j, ++at) {
            tsv << names[at] << '\t' << fmt_g(rho.m[i][j].real()) << '\t'
                << fmt_g(rho.m[i][j].imag()) << '\n';
            rep.json[names[at]] = {rho.m[i][j].real(), rho.m[i][j].imag()};
        }
    }
    rep.json["source"] = source;
    rep.json["bloch"] = {bloch[0], bloch[1], bloch[2]};
    if (target_ket) {
        const double f = rho.fidelity_with(*target_ket);
        tsv << "fidelity\t" << fmt_g(f) << '\n';
        rep.json["fidelity"] = f;
    }
    rep.tsv = tsv.str();
    return rep;
}

}  // namespace oamsim
