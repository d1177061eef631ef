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
 * @file circuit.hpp
 * Circuit composition, the loss ledger, and the transferrer presets.
 *
 * The deterministic transferrer moves a qubit from the {|l1>, |l2>} OAM
 * subspace onto polarization: half-wave plate at pi/8, polarizing Sagnac
 * loop with the Dove prism at gamma = pi/(4(l1-l2)), a fixed compensation
 * stage, and a tuned q-plate with 4q = l1 - l2. The compensation phases are
 * computed at construction so that the composed operator maps
 * alpha|H,l1> + beta|H,l2>  ->  alpha|L> + beta|R> at l_final = (l1+l2)/2
 * with no residual global phase.
 *
 * Losses: every element carries a power transmittance (default 1) that goes
 * into the circuit ledger; only attenuators additionally scale the lowered
 * operator. Postselection losses live in the success probability. The two
 * multiply only in the survival probability, keeping the scheme's ideal
 * success probability separate from engineering losses.
 */

#pragma once

#include <array>
#include <optional>

#include "oamsim/elements.hpp"

namespace oamsim {

struct Postselection {
    Pol pol;
    int path;
};

struct Circuit {
    Space space{0, 1};
    std::vector<OpticalElement> elements;
    std::optional<Postselection> postselect;
};

/// Product of all element transmittances (attenuator eta included once).
double transmittance_ledger(const Circuit& c);

/// Sum of |2q| over the circuit's q-plates: the OAM band headroom needed so
/// that intermediate products never fall off the represented space.
int qplate_band(const Circuit& c);

/// Product of the lowered element operators in order (first element applied
/// first). Attenuators contribute their sqrt(eta) scaling.
ModeOperator compose(const Circuit& c);

/// Same product with attenuators replaced by identity: the unitary part.
ModeOperator compose_unitary(const Circuit& c);

/// Dove prism angle completing the transfer for the OAM pair (l1, l2):
/// gamma = pi / (4 (l1 - l2)). Throws on l1 == l2.
double dove_angle(int l1, int l2);

struct TransferrerInfo {
    int l1;
    int l2;
    double q;
    double gamma;
    int l_final;
    // basis mapping achieved by the preset: |H,l1> -> |L,l_final>,
    // |H,l2> -> |R,l_final>, exact including phase.
};

/// Reports the geometry the preset will realize; throws on incompatible
/// (l1, l2, q) triples (l1 == l2, or 4q != l1 - l2, or q not half-integer).
TransferrerInfo deterministic_transferrer_info(int l1, int l2, double q);

/// Lossless OAM -> polarization transferrer preset. Success probability 1.
Circuit deterministic_transferrer(int l1, int l2, double q);

/// Polarization -> OAM transferrer: tuned q-plate followed by a PBS with
/// postselection on |H> at the transmitted path. Success probability 0.5 on
/// any input polarization qubit at l = 0.
Circuit probabilistic_transferrer_pi_to_oam(double q);

/// Reversed circuit with every element replaced by its adjoint, so that
/// compose(inverse(c)) * compose(c) is the identity (including phase).
/// Throws if the circuit contains postselection or attenuators.
Circuit inverse(const Circuit& c);

/// The three mutually unbiased bases of the {|+l>, |-l>} OAM subspace, all
/// with polarization |H> on path 0:
///   {|+l>, |-l>},
///   |h> = (|+l>+|-l>)/sqrt2,   |v> = (|+l>-|-l>)/(i sqrt2),
///   |a> = (|h>+|v>)/sqrt2,     |d> = (|h>-|v>)/sqrt2.
enum class Mub { plus = 0, minus, h, v, a, d };

const char* to_string(Mub m);

/// Coefficients of each MUB state over the ordered eigenstate pair.
std::array<cxd, 2> mub_coefficients(Mub which);

PhotonState mub_state(const Space& space, int l, Mub which);
std::array<PhotonState, 6> mub_states(const Space& space, int l);

/// alpha|H,l1> + beta|H,l2> on the given path.
PhotonState oam_qubit_state(const Space& space, int l1, int l2, cxd alpha,
                            cxd beta, int path = 0);

enum class PolKet { H = 0, V, A, D, L, R };

const char* to_string(PolKet k);

/// Jones coefficients (c_H, c_V) of the named polarization ket.
std::array<cxd, 2> jones(PolKet k);

PhotonState pol_ket_state(const Space& space, PolKet k, int oam = 0,
                          int path = 0);

/// alpha|L> + beta|R> at the given (oam, path).
PhotonState pol_qubit_state(const Space& space, cxd alpha, cxd beta,
                            int oam = 0, int path = 0);

/// Polarization ket the ideal transferrer maps each MUB input onto
/// (exactly, including phase): plus->L, minus->R, h->H, v->V, a->A, d->D.
PolKet transfer_target(Mub m);

struct TransferResult {
    PhotonState output;  // sub-normalized; squared norm equals survival
    double success = 1.0;
    double survival = 1.0;
};

/// Applies the circuit to a normalized input. Success is the postselection
/// probability of the unitary part; survival additionally carries the loss
/// ledger; the output state is scaled so its squared norm equals survival.
TransferResult run_transfer(const Circuit& c, const PhotonState& input);

}  // namespace oamsim
