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

#include "oamsim/circuit.hpp"

#include <cmath>

namespace oamsim {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

double wrap_phase(double phi) {
    const double r = std::remainder(phi, 2.0 * kPi);
    return r;
}

bool phase_is_trivial(double phi) {
    return std::abs(wrap_phase(phi)) < 1e-15;
}

ModeOperator compose_impl(const Circuit& c, bool unitary_only) {
    const int band = qplate_band(c);
    ModeOperator acc = identity_operator(c.space);
    for (const OpticalElement& e : c.elements) {
        if (unitary_only && std::holds_alternative<Attenuator>(e.kind)) {
            continue;
        }
        acc = operator_product(lower(e, c.space, band), acc);
    }
    return acc;
}

}  // namespace

double transmittance_ledger(const Circuit& c) {
    double t = 1.0;
    for (const OpticalElement& e : c.elements) t *= e.transmittance;
    return t;
}

int qplate_band(const Circuit& c) {
    int band = 0;
    for (const OpticalElement& e : c.elements) {
        if (const auto* qp = std::get_if<QPlate>(&e.kind)) {
            band += std::abs(static_cast<int>(std::llround(2.0 * qp->q)));
        }
    }
    return band;
}

ModeOperator compose(const Circuit& c) { return compose_impl(c, false); }

ModeOperator compose_unitary(const Circuit& c) {
    return compose_impl(c, true);
}

double dove_angle(int l1, int l2) {
    if (l1 == l2) {
        throw std::invalid_argument(
            "dove_angle: degenerate OAM subspace (l1 == l2)");
    }
    return kPi / (4.0 * (l1 - l2));
}

TransferrerInfo deterministic_transferrer_info(int l1, int l2, double q) {
    const double gamma = dove_angle(l1, l2);  // also rejects l1 == l2
    const double twice_q = 2.0 * q;
    if (std::abs(twice_q - std::round(twice_q)) > 1e-9 ||
        std::round(twice_q) == 0.0) {
        throw std::invalid_argument(
            "deterministic_transferrer: q must be a nonzero half-integer");
    }
    if (std::abs(4.0 * q - (l1 - l2)) > 1e-9) {
        throw std::invalid_argument(
            "deterministic_transferrer: incompatible (l1, l2, q); the "
            "q-plate merges the pair only when 4q = l1 - l2");
    }
    TransferrerInfo info;
    info.l1 = l1;
    info.l2 = l2;
    info.q = q;
    info.gamma = gamma;
    info.l_final = (l1 + l2) / 2;
    return info;
}

Circuit deterministic_transferrer(int l1, int l2, double q) {
    const TransferrerInfo info = deterministic_transferrer_info(l1, l2, q);
    const int shift = static_cast<int>(std::llround(2.0 * q));

    Circuit c;
    c.space = Space{std::max(std::abs(l1), std::abs(l2)) + std::abs(shift), 1};

    // Compensation stage: phi1 is the Sagnac phase picked up by the l1
    // branch; psi_v rotates both output polarizations onto the circular
    // pair, chi levels the branch phases and lambda cancels what is left.
    const double phi1 = 2.0 * l1 * info.gamma;
    const double psi_v = 2.0 * phi1 - kPi / 2.0;
    const double chi = kPi / 2.0;
    const double lambda = -(phi1 + kPi / 2.0);

    c.elements.push_back({Hwp{kPi / 8.0}});
    c.elements.push_back({SagnacPsi{info.gamma}});
    if (!phase_is_trivial(psi_v)) {
        ModeFilter v_only;
        v_only.pol = Pol::V;
        c.elements.push_back({PhaseShift{wrap_phase(psi_v), v_only}});
    }
    ModeFilter l2_only;
    l2_only.oam = l2;
    c.elements.push_back({PhaseShift{chi, l2_only}});
    if (!phase_is_trivial(lambda)) {
        c.elements.push_back({PhaseShift{wrap_phase(lambda), ModeFilter{}}});
    }
    c.elements.push_back({QPlate{q, kPi}});
    return c;
}

Circuit probabilistic_transferrer_pi_to_oam(double q) {
    const double twice_q = 2.0 * q;
    if (std::abs(twice_q - std::round(twice_q)) > 1e-9 ||
        std::round(twice_q) == 0.0) {
        throw std::invalid_argument(
            "probabilistic_transferrer: q must be a nonzero half-integer");
    }
    Circuit c;
    c.space = Space{std::abs(static_cast<int>(std::llround(twice_q))), 2};
    c.elements.push_back({QPlate{q, kPi}});
    c.elements.push_back({Pbs{0, 1}});
    c.postselect = Postselection{Pol::H, 0};
    return c;
}

Circuit inverse(const Circuit& c) {
    if (c.postselect) {
        throw std::invalid_argument("inverse: circuit has postselection");
    }
    Circuit out;
    out.space = c.space;
    double phase_acc = 0.0;
    for (auto it = c.elements.rbegin(); it != c.elements.rend(); ++it) {
        OpticalElement inv = *it;
        if (std::get_if<Hwp>(&it->kind) || std::get_if<Pbs>(&it->kind) ||
            std::get_if<Mirror>(&it->kind)) {
            // self-adjoint
        } else if (const auto* w = std::get_if<Qwp>(&it->kind)) {
            // QWP(theta)^dagger = e^{-i pi/2} QWP(theta + pi/2)
            inv.kind = Qwp{w->theta + kPi / 2.0};
            phase_acc -= kPi / 2.0;
        } else if (const auto* d = std::get_if<DovePrism>(&it->kind)) {
            inv.kind = DovePrism{-d->gamma};
        } else if (const auto* d = std::get_if<SagnacPsi>(&it->kind)) {
            inv.kind = SagnacPsi{-d->gamma};
        } else if (const auto* qp = std::get_if<QPlate>(&it->kind)) {
            double delta = std::fmod(qp->delta, 2.0 * kPi);
            if (delta < 0.0) delta += 2.0 * kPi;
            if (delta != 0.0) {
                // U(q, delta)^dagger = e^{i pi} U(q, 2 pi - delta)
                inv.kind = QPlate{qp->q, 2.0 * kPi - delta};
                phase_acc += kPi;
            }
        } else if (const auto* ps = std::get_if<PhaseShift>(&it->kind)) {
            inv.kind = PhaseShift{-ps->phi, ps->filter};
        } else if (std::get_if<Attenuator>(&it->kind)) {
            throw std::invalid_argument(
                "inverse: attenuator is not invertible");
        }
        out.elements.push_back(std::move(inv));
    }
    if (!phase_is_trivial(phase_acc)) {
        out.elements.push_back(
            {PhaseShift{wrap_phase(phase_acc), ModeFilter{}}});
    }
    return out;
}

const char* to_string(Mub m) {
    switch (m) {
        case Mub::plus: return "+l";
        case Mub::minus: return "-l";
        case Mub::h: return "h";
        case Mub::v: return "v";
        case Mub::a: return "a";
        case Mub::d: return "d";
    }
    return "?";
}

std::array<cxd, 2> mub_coefficients(Mub which) {
    switch (which) {
        case Mub::plus: return {cxd{1.0, 0.0}, cxd{0.0, 0.0}};
        case Mub::minus: return {cxd{0.0, 0.0}, cxd{1.0, 0.0}};
        case Mub::h: return {cxd{kSqrtHalf, 0.0}, cxd{kSqrtHalf, 0.0}};
        case Mub::v: return {cxd{0.0, -kSqrtHalf}, cxd{0.0, kSqrtHalf}};
        case Mub::a: return {cxd{0.5, -0.5}, cxd{0.5, 0.5}};
        case Mub::d: return {cxd{0.5, 0.5}, cxd{0.5, -0.5}};
    }
    throw std::logic_error("mub_coefficients: bad state");
}

PhotonState mub_state(const Space& space, int l, Mub which) {
    if (l <= 0) throw std::invalid_argument("mub_state: l must be positive");
    const auto c = mub_coefficients(which);
    return oam_qubit_state(space, l, -l, c[0], c[1]);
}

std::array<PhotonState, 6> mub_states(const Space& space, int l) {
    return {mub_state(space, l, Mub::plus), mub_state(space, l, Mub::minus),
            mub_state(space, l, Mub::h),    mub_state(space, l, Mub::v),
            mub_state(space, l, Mub::a),    mub_state(space, l, Mub::d)};
}

PhotonState oam_qubit_state(const Space& space, int l1, int l2, cxd alpha,
                            cxd beta, int path) {
    return make_state({{ModeLabel{Pol::H, l1, path}, alpha},
                       {ModeLabel{Pol::H, l2, path}, beta}},
                      space);
}

const char* to_string(PolKet k) {
    switch (k) {
        case PolKet::H: return "H";
        case PolKet::V: return "V";
        case PolKet::A: return "A";
        case PolKet::D: return "D";
        case PolKet::L: return "L";
        case PolKet::R: return "R";
    }
    return "?";
}

std::array<cxd, 2> jones(PolKet k) {
    switch (k) {
        case PolKet::H: return {cxd{1.0, 0.0}, cxd{0.0, 0.0}};
        case PolKet::V: return {cxd{0.0, 0.0}, cxd{1.0, 0.0}};
        case PolKet::A: return {cxd{kSqrtHalf, 0.0}, cxd{kSqrtHalf, 0.0}};
        case PolKet::D: return {cxd{kSqrtHalf, 0.0}, cxd{-kSqrtHalf, 0.0}};
        case PolKet::L: return {cxd{kSqrtHalf, 0.0}, cxd{0.0, kSqrtHalf}};
        case PolKet::R: return {cxd{kSqrtHalf, 0.0}, cxd{0.0, -kSqrtHalf}};
    }
    throw std::logic_error("jones: bad ket");
}

PhotonState pol_ket_state(const Space& space, PolKet k, int oam, int path) {
    const auto [ch, cv] = jones(k);
    std::vector<std::pair<ModeLabel, cxd>> entries;
    if (ch != cxd{}) entries.push_back({ModeLabel{Pol::H, oam, path}, ch});
    if (cv != cxd{}) entries.push_back({ModeLabel{Pol::V, oam, path}, cv});
    return make_state(entries, space);
}

PhotonState pol_qubit_state(const Space& space, cxd alpha, cxd beta, int oam,
                            int path) {
    // alpha|L> + beta|R> expanded over H/V
    const cxd ch = (alpha + beta) * kSqrtHalf;
    const cxd cv = cxd{0.0, 1.0} * (alpha - beta) * kSqrtHalf;
    std::vector<std::pair<ModeLabel, cxd>> entries;
    if (ch != cxd{}) entries.push_back({ModeLabel{Pol::H, oam, path}, ch});
    if (cv != cxd{}) entries.push_back({ModeLabel{Pol::V, oam, path}, cv});
    return make_state(entries, space);
}

PolKet transfer_target(Mub m) {
    switch (m) {
        case Mub::plus: return PolKet::L;
        case Mub::minus: return PolKet::R;
        case Mub::h: return PolKet::H;
        case Mub::v: return PolKet::V;
        case Mub::a: return PolKet::A;
        case Mub::d: return PolKet::D;
    }
    throw std::logic_error("transfer_target: bad state");
}

TransferResult run_transfer(const Circuit& c, const PhotonState& input) {
    if (!(input.space == c.space)) {
        throw std::invalid_argument("run_transfer: input space mismatch");
    }
    if (std::abs(input.norm2() - 1.0) > 1e-9) {
        throw std::invalid_argument("run_transfer: input must be normalized");
    }
    PhotonState out = apply(compose_unitary(c), input);
    if (c.postselect) {
        for (auto it = out.amp.begin(); it != out.amp.end();) {
            if (it->first.pol != c.postselect->pol ||
                it->first.path != c.postselect->path) {
                it = out.amp.erase(it);
            } else {
                ++it;
            }
        }
    }
    TransferResult r;
    r.success = out.norm2();
    const double ledger = transmittance_ledger(c);
    r.survival = r.success * ledger;
    const double a = std::sqrt(ledger);
    for (auto& [label, v] : out.amp) v *= a;
    r.output = std::move(out);
    return r;
}

}  // namespace oamsim
