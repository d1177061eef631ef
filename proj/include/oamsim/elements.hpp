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
 * @file elements.hpp
 * Catalog of optical elements lowered to ModeOperators.
 *
 * Fixed phase conventions (any consistent choice reproduces the published
 * behaviour once the compensation stage is applied; these are ours):
 *  - HWP(theta):  [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on (H, V).
 *  - QWP(theta):  fast axis horizontal at theta = 0, Jones matrix diag(1, i);
 *                 rotated as R(-t) diag(1,i) R(t), so QWP(pi/4)|H> = |L> up
 *                 to a global phase.
 *  - Dove prism:  effective in-interferometer model, diagonal phases
 *                 e^{+2il*gamma} on |H,l> and e^{-2il*gamma} on |V,l>.
 *                 (The standalone geometric prism with its OAM flip is
 *                 mirror() composed with this.)
 *  - Q-plate:     U = cos(delta/2) I + i sin(delta/2) C with
 *                 C|L,l> = |R,l+2q>, C|R,l> = |L,l-2q>; no extra l phase.
 *  - PBS:         H transmits (path kept), V reflects with phase +i on the
 *                 a->b pass and -i on the b->a pass, so a double pass is
 *                 phase-free. Paths outside the wired pair are untouched.
 *  - Mirror:      |pol, l> -> |pol, -l>; identity on polarization (net
 *                 polarization flips from fold mirrors belong to the
 *                 compensation stage).
 *
 * Every element lowers to a unitary except Attenuator, which scales by
 * sqrt(eta). Element transmittances other than the attenuator's live in the
 * circuit loss ledger, not in the operator.
 */

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "oamsim/hilbert.hpp"

namespace oamsim {

struct Hwp {
    double theta;
};

struct Qwp {
    double theta;
};

struct DovePrism {
    double gamma;
};

struct QPlate {
    double q;      // topological charge; 2q must be an integer
    double delta;  // birefringence retardation in [0, 2pi)
};

struct Pbs {
    int path_a = 0;
    int path_b = 1;
};

struct Mirror {};

/// Matches a mode when every set field agrees.
struct ModeFilter {
    std::optional<Pol> pol;
    std::optional<int> oam;
    std::optional<int> path;

    bool matches(const ModeLabel& m) const {
        return (!pol || *pol == m.pol) && (!oam || *oam == m.oam) &&
               (!path || *path == m.path);
    }
};

struct PhaseShift {
    double phi;
    ModeFilter filter;  // default: all modes
};

struct Attenuator {
    double eta;  // power transmittance in [0, 1]
};

/// Effective single-path polarizing Sagnac interferometer: same operator as
/// DovePrism(gamma), kept distinct so circuits can attach loop-specific
/// transmittance and the presets read like the bench layout.
struct SagnacPsi {
    double gamma;
};

using ElementKind = std::variant<Hwp, Qwp, DovePrism, QPlate, Pbs, Mirror,
                                 PhaseShift, Attenuator, SagnacPsi>;

struct OpticalElement {
    ElementKind kind;
    double transmittance = 1.0;
};

/// Lowers an element over `space` widened by `extra_band` OAM units.
/// Throws std::invalid_argument for bad parameters (non-half-integer q-plate
/// charge, eta outside [0,1], degenerate PBS wiring).
ModeOperator lower(const OpticalElement& e, const Space& space,
                   int extra_band = 0);

// Direct operator constructors for the individual elements.
ModeOperator hwp(const Space& space, double theta);
ModeOperator qwp(const Space& space, double theta);
ModeOperator dove_prism(const Space& space, double gamma);
ModeOperator qplate(const Space& space, double q, double delta);
ModeOperator pbs(const Space& space, int path_a = 0, int path_b = 1);
ModeOperator mirror(const Space& space);
ModeOperator phase_shift(const Space& space, double phi,
                         const ModeFilter& filter = {});
ModeOperator attenuator(const Space& space, double eta);
ModeOperator sagnac_psi(const Space& space, double gamma);

/// Conversion efficiency of a q-plate at retardation delta: sin^2(delta/2).
double qplate_efficiency(double delta);

/// Empirical voltage -> conversion-efficiency calibration of an electrically
/// tuned q-plate. Below the threshold voltage the retardation is flat at the
/// first sample's value.
struct TuningCurve {
    double threshold_volts = 0.0;
    std::vector<std::pair<double, double>> samples;  // (volts, efficiency)
};

/// Validates monotone voltages and efficiencies in [0, 1].
void validate(const TuningCurve& curve);

/// Retardation delta at voltage V: piecewise-linear interpolation of the
/// arcsin-transformed samples, delta_i = 2 asin(sqrt(eff_i)). Sample points
/// are returned exactly. V outside the sampled range is a range error; no
/// extrapolation.
double voltage_to_delta(const TuningCurve& curve, double volts);

/// Reads `{"threshold_volts": .., "samples": [[v, eff], ..]}`.
TuningCurve load_tuning_curve(const std::string& path);
TuningCurve parse_tuning_curve(const std::string& json_text);

}  // namespace oamsim
