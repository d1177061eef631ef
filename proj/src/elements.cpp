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

#include "oamsim/elements.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace oamsim {

namespace {

constexpr cxd kI{0.0, 1.0};

bool is_half_integer_charge(double q) {
    const double twice = 2.0 * q;
    return std::abs(twice - std::round(twice)) < 1e-12 &&
           std::round(twice) != 0.0;
}

/// Applies a 2x2 Jones matrix [[hh, hv], [vh, vv]] (H/V basis) identically
/// on every (oam, path) sector.
ModeOperator from_jones(const Space& space, int extra_band, cxd hh, cxd hv,
                        cxd vh, cxd vv) {
    ModeOperator op;
    op.space = space;
    op.unitary_flag = true;
    for (const ModeLabel& m : space.labels(extra_band)) {
        if (m.pol == Pol::V) continue;
        const ModeLabel h = m;
        const ModeLabel v{Pol::V, m.oam, m.path};
        auto& ch = op.cols[h];
        auto& cv = op.cols[v];
        if (hh != cxd{}) ch[h] = hh;
        if (vh != cxd{}) ch[v] = vh;
        if (hv != cxd{}) cv[h] = hv;
        if (vv != cxd{}) cv[v] = vv;
    }
    return op;
}

ModeOperator dove_like(const Space& space, int extra_band, double gamma) {
    ModeOperator op;
    op.space = space;
    op.unitary_flag = true;
    for (const ModeLabel& m : space.labels(extra_band)) {
        const double sign = m.pol == Pol::H ? 1.0 : -1.0;
        op.cols[m][m] = std::polar(1.0, sign * 2.0 * m.oam * gamma);
    }
    return op;
}

}  // namespace

ModeOperator lower(const OpticalElement& e, const Space& space,
                   int extra_band) {
    ModeOperator op;
    op.space = space;
    op.unitary_flag = true;

    if (const auto* w = std::get_if<Hwp>(&e.kind)) {
        const double c = std::cos(2 * w->theta);
        const double s = std::sin(2 * w->theta);
        return from_jones(space, extra_band, c, s, s, -c);
    }
    if (const auto* w = std::get_if<Qwp>(&e.kind)) {
        // R(-theta) diag(1, i) R(theta)
        const double c = std::cos(w->theta);
        const double s = std::sin(w->theta);
        return from_jones(space, extra_band, cxd{c * c, s * s},
                          cxd{-s * c, s * c}, cxd{-s * c, s * c},
                          cxd{s * s, c * c});
    }
    if (const auto* d = std::get_if<DovePrism>(&e.kind)) {
        return dove_like(space, extra_band, d->gamma);
    }
    if (const auto* d = std::get_if<SagnacPsi>(&e.kind)) {
        return dove_like(space, extra_band, d->gamma);
    }
    if (const auto* qp = std::get_if<QPlate>(&e.kind)) {
        if (!is_half_integer_charge(qp->q)) {
            throw std::invalid_argument(
                "qplate: charge q must be a nonzero half-integer");
        }
        const int shift = static_cast<int>(std::llround(2.0 * qp->q));
        const cxd cv{std::cos(qp->delta / 2.0), 0.0};
        const cxd sv = kI * std::sin(qp->delta / 2.0);
        // U = cos(delta/2) I + i sin(delta/2) C with the converter C acting
        // in the circular basis: |L,l> -> |R,l+2q>, |R,l> -> |L,l-2q>.
        // On the H/V columns, using |H,l> = (|L,l>+|R,l>)/sqrt2 and
        // |V,l> = -i(|L,l>-|R,l>)/sqrt2:
        for (const ModeLabel& m : space.labels(extra_band)) {
            if (m.pol == Pol::V) continue;
            const int l = m.oam;
            const int p = m.path;
            const ModeLabel h = m;
            const ModeLabel v{Pol::V, l, p};
            auto& ch = op.cols[h];
            auto& cvv = op.cols[v];
            ch[h] += cv;
            cvv[v] += cv;
            if (sv == cxd{}) continue;
            const ModeLabel h_up{Pol::H, l + shift, p};
            const ModeLabel v_up{Pol::V, l + shift, p};
            const ModeLabel h_dn{Pol::H, l - shift, p};
            const ModeLabel v_dn{Pol::V, l - shift, p};
            // C|H,l> = (|R,l+2q> + |L,l-2q>)/sqrt2
            ch[h_up] += sv * 0.5;
            ch[v_up] += sv * cxd{0.0, -0.5};
            ch[h_dn] += sv * 0.5;
            ch[v_dn] += sv * cxd{0.0, 0.5};
            // C|V,l> = -i(|R,l+2q> - |L,l-2q>)/sqrt2
            cvv[h_up] += sv * cxd{0.0, -0.5};
            cvv[v_up] += sv * cxd{-0.5, 0.0};
            cvv[h_dn] += sv * cxd{0.0, 0.5};
            cvv[v_dn] += sv * cxd{-0.5, 0.0};
        }
        return op;
    }
    if (const auto* b = std::get_if<Pbs>(&e.kind)) {
        if (b->path_a == b->path_b || b->path_a < 0 || b->path_b < 0 ||
            b->path_a >= space.n_paths || b->path_b >= space.n_paths) {
            throw std::invalid_argument(
                "pbs: wiring must be a bijection over two distinct paths");
        }
        for (const ModeLabel& m : space.labels(extra_band)) {
            if (m.pol == Pol::H ||
                (m.path != b->path_a && m.path != b->path_b)) {
                op.cols[m][m] = cxd{1.0, 0.0};
            } else if (m.path == b->path_a) {
                op.cols[m][ModeLabel{m.pol, m.oam, b->path_b}] = kI;
            } else {
                op.cols[m][ModeLabel{m.pol, m.oam, b->path_a}] = -kI;
            }
        }
        return op;
    }
    if (std::get_if<Mirror>(&e.kind)) {
        for (const ModeLabel& m : space.labels(extra_band)) {
            op.cols[m][ModeLabel{m.pol, -m.oam, m.path}] = cxd{1.0, 0.0};
        }
        return op;
    }
    if (const auto* ps = std::get_if<PhaseShift>(&e.kind)) {
        const cxd ph = std::polar(1.0, ps->phi);
        for (const ModeLabel& m : space.labels(extra_band)) {
            op.cols[m][m] = ps->filter.matches(m) ? ph : cxd{1.0, 0.0};
        }
        return op;
    }
    if (const auto* at = std::get_if<Attenuator>(&e.kind)) {
        if (at->eta < 0.0 || at->eta > 1.0) {
            throw std::invalid_argument("attenuator: eta must be in [0, 1]");
        }
        op.unitary_flag = false;
        const double a = std::sqrt(at->eta);
        for (const ModeLabel& m : space.labels(extra_band)) {
            op.cols[m][m] = cxd{a, 0.0};
        }
        return op;
    }
    throw std::logic_error("lower: unhandled element kind");
}

ModeOperator hwp(const Space& space, double theta) {
    return lower({Hwp{theta}}, space);
}

ModeOperator qwp(const Space& space, double theta) {
    return lower({Qwp{theta}}, space);
}

ModeOperator dove_prism(const Space& space, double gamma) {
    return lower({DovePrism{gamma}}, space);
}

ModeOperator qplate(const Space& space, double q, double delta) {
    return lower({QPlate{q, delta}}, space);
}

ModeOperator pbs(const Space& space, int path_a, int path_b) {
    return lower({Pbs{path_a, path_b}}, space);
}

ModeOperator mirror(const Space& space) { return lower({Mirror{}}, space); }

ModeOperator phase_shift(const Space& space, double phi,
                         const ModeFilter& filter) {
    return lower({PhaseShift{phi, filter}}, space);
}

ModeOperator attenuator(const Space& space, double eta) {
    return lower({Attenuator{eta}}, space);
}

ModeOperator sagnac_psi(const Space& space, double gamma) {
    return lower({SagnacPsi{gamma}}, space);
}

double qplate_efficiency(double delta) {
    const double s = std::sin(delta / 2.0);
    return s * s;
}

void validate(const TuningCurve& curve) {
    if (curve.samples.empty()) {
        throw std::invalid_argument("tuning curve: no samples");
    }
    for (size_t i = 0; i < curve.samples.size(); ++i) {
        const auto& [v, eff] = curve.samples[i];
        if (eff < 0.0 || eff > 1.0) {
            throw std::invalid_argument(
                "tuning curve: efficiency outside [0, 1]");
        }
        if (i > 0 && v <= curve.samples[i - 1].first) {
            throw std::invalid_argument(
                "tuning curve: voltages must be strictly increasing");
        }
    }
}

double voltage_to_delta(const TuningCurve& curve, double volts) {
    validate(curve);
    const double v_lo = curve.samples.front().first;
    const double v_hi = curve.samples.back().first;
    if (volts < v_lo || volts > v_hi) {
        throw std::out_of_range(
            "voltage_to_delta: voltage outside sampled range; no "
            "extrapolation");
    }
    auto delta_at = [](double eff) { return 2.0 * std::asin(std::sqrt(eff)); };
    if (volts <= curve.threshold_volts) {
        return delta_at(curve.samples.front().second);
    }
    for (size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const auto& [v0, e0] = curve.samples[i];
        const auto& [v1, e1] = curve.samples[i + 1];
        if (volts == v0) return delta_at(e0);
        if (volts > v0 && volts < v1) {
            const double t = (volts - v0) / (v1 - v0);
            const double d0 = delta_at(e0);
            const double d1 = delta_at(e1);
            return d0 + t * (d1 - d0);
        }
    }
    return delta_at(curve.samples.back().second);
}

TuningCurve parse_tuning_curve(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    TuningCurve curve;
    curve.threshold_volts = j.value("threshold_volts", 0.0);
    for (const auto& row : j.at("samples")) {
        curve.samples.emplace_back(row.at(0).get<double>(),
                                   row.at(1).get<double>());
    }
    validate(curve);
    return curve;
}

TuningCurve load_tuning_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open tuning curve file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_tuning_curve(text);
}

}  // namespace oamsim
