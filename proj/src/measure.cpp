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

#include "oamsim/measure.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace oamsim {

const char* to_string(PolBasis b) {
    switch (b) {
        case PolBasis::RL: return "RL";
        case PolBasis::HV: return "HV";
        case PolBasis::AD: return "AD";
    }
    return "?";
}

std::array<PolKet, 2> basis_outcomes(PolBasis b) {
    switch (b) {
        case PolBasis::RL: return {PolKet::R, PolKet::L};
        case PolBasis::HV: return {PolKet::H, PolKet::V};
        case PolBasis::AD: return {PolKet::A, PolKet::D};
    }
    throw std::logic_error("basis_outcomes: bad basis");
}

double project_probability(const PhotonState& s, const Analyzer& analyzer,
                           int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("project_probability: outcome is 0 or 1");
    }
    if (std::abs(s.norm2() - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "project_probability: state must be normalized");
    }
    const PolKet ket = basis_outcomes(analyzer.basis)[outcome];
    const auto [ch, cv] = jones(ket);
    cxd amp{0.0, 0.0};
    auto ith = s.amp.find(ModeLabel{Pol::H, analyzer.oam, analyzer.path});
    auto itv = s.amp.find(ModeLabel{Pol::V, analyzer.oam, analyzer.path});
    if (ith != s.amp.end()) amp += std::conj(ch) * ith->second;
    if (itv != s.amp.end()) amp += std::conj(cv) * itv->second;
    return std::norm(amp);
}

namespace {

/// log Gamma(x) for x > 0 via the asymptotic Bernoulli series with argument
/// shifting below 7. Self-contained so sampling is thread-safe (std::lgamma
/// writes the global signgam on glibc) and bit-stable across libm versions.
double log_gamma(double x) {
    static const double coeff[10] = {
        1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188,
        -691.0 / 360360, 1.0 / 156, -3617.0 / 122400, 43867.0 / 244188,
        -174611.0 / 125400};
    if (x == 1.0 || x == 2.0) return 0.0;
    double shift = 0.0;
    double x0 = x;
    while (x0 < 7.0) {
        shift += std::log(x0);
        x0 += 1.0;
    }
    const double inv2 = 1.0 / (x0 * x0);
    double series = coeff[9];
    for (int k = 8; k >= 0; --k) series = series * inv2 + coeff[k];
    return (x0 - 0.5) * std::log(x0) - x0 +
           0.5 * std::log(2.0 * kPi) + series / x0 - shift;
}

}  // namespace

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0)) {
        throw std::invalid_argument("poisson: mean must be non-negative");
    }
    if (mean == 0.0) return 0;
    if (mean < 64.0) {
        // Knuth's product method
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }
    // PTRS transformed rejection (Hoermann), exact for mean >= 10.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = 1.0 - uniform();  // (0, 1]
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) -
                std::log(a / (us * us) + b) <=
            kf * loglam - mean - log_gamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 over the combined word
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CountTable sample_counts(const std::string& basis, double p_plus,
                         double n_pairs, double eta_det, std::uint64_t seed,
                         double bg) {
    if (p_plus < 0.0 || p_plus > 1.0) {
        throw std::invalid_argument("sample_counts: p_plus outside [0, 1]");
    }
    if (!(n_pairs > 0.0)) {
        throw std::invalid_argument("sample_counts: N must be positive");
    }
    if (eta_det < 0.0 || eta_det > 1.0) {
        throw std::invalid_argument("sample_counts: eta outside [0, 1]");
    }
    if (bg < 0.0) {
        throw std::invalid_argument("sample_counts: negative background");
    }
    Rng rng(seed);
    CountTable t;
    t.basis = basis;
    t.c_plus = rng.poisson(n_pairs * eta_det * p_plus);
    t.c_minus = rng.poisson(n_pairs * eta_det * (1.0 - p_plus));
    if (bg > 0.0) {
        t.c_plus += rng.poisson(n_pairs * bg);
        t.c_minus += rng.poisson(n_pairs * bg);
    }
    return t;
}

FidelityEstimate fidelity_from_counts(const CountTable& t) {
    const double total = static_cast<double>(t.c_plus + t.c_minus);
    if (total <= 0.0) {
        throw std::invalid_argument("fidelity_from_counts: zero total counts");
    }
    const double cmax = static_cast<double>(std::max(t.c_plus, t.c_minus));
    const double f = cmax / total;
    return {f, std::sqrt(f * (1.0 - f) / total)};
}

std::array<double, 3> DensityMatrix2::bloch() const {
    return {std::real(m[0][0] - m[1][1]), 2.0 * std::real(m[0][1]),
            2.0 * std::imag(m[0][1])};
}

DensityMatrix2 DensityMatrix2::from_bloch(double s1, double s2, double s3) {
    DensityMatrix2 rho;
    rho.m[0][0] = cxd{0.5 * (1.0 + s1), 0.0};
    rho.m[1][1] = cxd{0.5 * (1.0 - s1), 0.0};
    rho.m[0][1] = cxd{0.5 * s2, 0.5 * s3};
    rho.m[1][0] = std::conj(rho.m[0][1]);
    return rho;
}

double DensityMatrix2::fidelity_with(const std::array<cxd, 2>& ket) const {
    cxd acc{0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            acc += std::conj(ket[i]) * m[i][j] * ket[j];
        }
    }
    return std::real(acc);
}

std::array<double, 2> DensityMatrix2::eigenvalues() const {
    const auto [s1, s2, s3] = bloch();
    const double r = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    const double tr = std::real(trace());
    return {0.5 * (tr + r), 0.5 * (tr - r)};
}

DensityMatrix2 tomography_from_stokes(double s_hv, double s_ad, double s_rl) {
    return physical_projection(DensityMatrix2::from_bloch(s_hv, s_ad, s_rl));
}

namespace {

double stokes_of(const CountTable& t) {
    const double total = static_cast<double>(t.c_plus + t.c_minus);
    if (total <= 0.0) {
        throw std::invalid_argument("tomography: zero counts in basis " +
                                    t.basis);
    }
    return (static_cast<double>(t.c_plus) - static_cast<double>(t.c_minus)) /
           total;
}

}  // namespace

DensityMatrix2 tomography(const CountTable& a, const CountTable& b,
                          const CountTable& c) {
    const CountTable* by_basis[3] = {nullptr, nullptr, nullptr};
    for (const CountTable* t : {&a, &b, &c}) {
        if (t->basis == "RL") by_basis[0] = t;
        else if (t->basis == "HV") by_basis[1] = t;
        else if (t->basis == "AD") by_basis[2] = t;
    }
    if (!by_basis[0] || !by_basis[1] || !by_basis[2]) {
        throw std::invalid_argument(
            "tomography: need one table per basis RL, HV, AD");
    }
    return tomography_from_stokes(stokes_of(*by_basis[1]),
                                  stokes_of(*by_basis[2]),
                                  stokes_of(*by_basis[0]));
}

DensityMatrix2 physical_projection(const DensityMatrix2& raw) {
    const cxd offdiag_err = raw.m[1][0] - std::conj(raw.m[0][1]);
    if (std::abs(offdiag_err) > 1e-9 || std::abs(std::imag(raw.m[0][0])) > 1e-9 ||
        std::abs(std::imag(raw.m[1][1])) > 1e-9) {
        throw std::invalid_argument("physical_projection: matrix not Hermitian");
    }
    if (std::abs(raw.trace() - 1.0) > 1e-9) {
        throw std::invalid_argument("physical_projection: trace must be 1");
    }
    const auto [s1, s2, s3] = raw.bloch();
    const double r = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    if (r <= 1.0) return raw;
    return DensityMatrix2::from_bloch(s1 / r, s2 / r, s3 / r);
}

double overall_efficiency(const EfficiencyBudget& b) {
    double eta = 1.0;
    for (const auto& [name, t] : b.components) {
        if (t < 0.0 || t > 1.0) {
            throw std::invalid_argument("efficiency budget: component '" +
                                        name + "' outside [0, 1]");
        }
        eta *= t;
    }
    return eta;
}

namespace {

CountTable table_from_json(const nlohmann::json& j, const std::string& basis) {
    if (!j.contains(basis)) {
        throw std::invalid_argument("counts file: missing basis " + basis);
    }
    const auto& row = j.at(basis);
    if (!row.is_array() || row.size() != 2) {
        throw std::invalid_argument("counts file: basis " + basis +
                                    " must be a [c_plus, c_minus] pair");
    }
    CountTable t;
    t.basis = basis;
    t.c_plus = row.at(0).get<std::uint64_t>();
    t.c_minus = row.at(1).get<std::uint64_t>();
    return t;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

CountsFile parse_counts(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const auto& bases = j.at("bases");
    return {table_from_json(bases, "RL"), table_from_json(bases, "HV"),
            table_from_json(bases, "AD")};
}

CountsFile load_counts(const std::string& path) {
    return parse_counts(slurp(path));
}

EfficiencyBudget parse_budget(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    EfficiencyBudget b;
    for (const auto& [name, v] : j.at("components").items()) {
        b.components[name] = v.get<double>();
    }
    overall_efficiency(b);  // validates ranges
    return b;
}

EfficiencyBudget load_budget(const std::string& path) {
    return parse_budget(slurp(path));
}

}  // namespace oamsim
