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
 * @file hilbert.hpp
 * State-vector and operator algebra over the truncated
 * polarization x OAM x path space of a single photon.
 *
 * States are sparse maps from mode labels to complex amplitudes and are in
 * general sub-normalized: the squared norm of a PhotonState is the survival
 * probability of the photon. Operators are sparse column maps; their columns
 * always lie inside the declared space, but rows are allowed to point at
 * modes beyond the OAM truncation bound (a q-plate acting on an edge mode is
 * an isometry into the larger space). Amplitude actually landing outside the
 * declared space is an error, never a silent drop.
 *
 * Basis conventions used throughout:
 *   |L> = (|H> + i|V>)/sqrt(2),  |R> = (|H> - i|V>)/sqrt(2)
 *   |A> = (|H> + |V>)/sqrt(2),   |D> = (|H> - |V>)/sqrt(2)
 * Global phase is physically irrelevant; state_fidelity is phase-insensitive
 * and exact-amplitude comparisons are reserved for operator-level tests.
 */

#pragma once

#include <complex>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oamsim {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Linear polarization basis index.
enum class Pol : int { H = 0, V = 1 };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

/// One basis mode of the truncated single-photon space.
struct ModeLabel {
    Pol pol;
    int oam;   // topological charge l, in hbar units per photon
    int path;  // spatial path index

    auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(const ModeLabel& m);

/// Truncation bounds: |oam| <= l_max and path < n_paths.
struct Space {
    int l_max;
    int n_paths = 1;

    bool operator==(const Space&) const = default;

    bool contains(const ModeLabel& m) const {
        return m.oam >= -l_max && m.oam <= l_max && m.path >= 0 &&
               m.path < n_paths;
    }

    int dim() const { return 2 * (2 * l_max + 1) * n_paths; }

    /// All labels with |oam| <= l_max + extra_band, in deterministic order.
    std::vector<ModeLabel> labels(int extra_band = 0) const;
};

/// Sparse amplitude vector. Squared norm is the survival probability and
/// must never exceed 1 (up to rounding).
struct PhotonState {
    Space space{0, 1};
    std::map<ModeLabel, cxd> amp;

    double norm2() const;
};

/// Builds a state from explicit (label, amplitude) entries. Duplicate labels
/// accumulate. The state is not auto-normalized.
///
/// Throws std::out_of_range for labels outside the space and
/// std::invalid_argument for an empty entry list or squared norm > 1 + 1e-12.
PhotonState make_state(const std::vector<std::pair<ModeLabel, cxd>>& entries,
                       const Space& space);

/// <a|b> with conjugation on the first argument. Spaces must match.
cxd inner_product(const PhotonState& a, const PhotonState& b);

/// Returns a/|a|. Throws on zero norm.
PhotonState normalized(const PhotonState& s);

/// |<a|b>|^2 for states normalized within 1e-9.
double state_fidelity(const PhotonState& a, const PhotonState& b);

/// Sparse operator in column-major form: cols[input][output] = entry.
/// Columns cover every label of `space` (possibly widened by a band, see
/// Circuit composition); rows may exceed the OAM bound.
struct ModeOperator {
    Space space{0, 1};
    std::map<ModeLabel, std::map<ModeLabel, cxd>> cols;

    bool unitary_flag = false;  // set by element constructors
};

ModeOperator identity_operator(const Space& space, int extra_band = 0);

/// Matrix-vector product. Every populated input label must be a column of
/// `op`; output amplitude landing outside the declared space raises
/// std::out_of_range (OAM truncation overflow).
PhotonState apply(const ModeOperator& op, const PhotonState& s);

/// A after B (apply B first). B's rows must be covered by A's columns
/// wherever B has nonzero entries; a miss raises std::out_of_range.
ModeOperator operator_product(const ModeOperator& a, const ModeOperator& b);

ModeOperator adjoint(const ModeOperator& op);

ModeOperator scale(const ModeOperator& op, cxd factor);

/// True iff max-abs entry of U^dagger U - I over the column set is < tol.
/// Operators whose rows extend past the truncation bound are accepted when
/// they are isometries into the larger space.
bool check_unitary(const ModeOperator& op, double tol);

/// Largest |a - b| over the union of populated entries (columns must agree).
double max_abs_diff(const ModeOperator& a, const ModeOperator& b);

}  // namespace oamsim
