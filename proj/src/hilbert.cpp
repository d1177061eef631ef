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

#include "oamsim/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace oamsim {

std::string to_string(const ModeLabel& m) {
    std::ostringstream os;
    os << '|' << pol_char(m.pol) << ',' << (m.oam >= 0 ? "+" : "") << m.oam
       << ",p" << m.path << '>';
    return os.str();
}

std::vector<ModeLabel> Space::labels(int extra_band) const {
    std::vector<ModeLabel> out;
    const int band = l_max + extra_band;
    out.reserve(static_cast<size_t>(2 * (2 * band + 1) * n_paths));
    for (Pol pol : {Pol::H, Pol::V}) {
        for (int l = -band; l <= band; ++l) {
            for (int p = 0; p < n_paths; ++p) {
                out.push_back({pol, l, p});
            }
        }
    }
    return out;
}

double PhotonState::norm2() const {
    double n = 0.0;
    for (const auto& [label, a] : amp) n += std::norm(a);
    return n;
}

PhotonState make_state(const std::vector<std::pair<ModeLabel, cxd>>& entries,
                       const Space& space) {
    if (entries.empty()) {
        throw std::invalid_argument("make_state: empty entry list");
    }
    PhotonState s;
    s.space = space;
    for (const auto& [label, a] : entries) {
        if (!space.contains(label)) {
            throw std::out_of_range("make_state: label " + to_string(label) +
                                    " outside space (l_max=" +
                                    std::to_string(space.l_max) + ", paths=" +
                                    std::to_string(space.n_paths) + ")");
        }
        s.amp[label] += a;
    }
    if (s.norm2() > 1.0 + 1e-12) {
        throw std::invalid_argument(
            "make_state: squared norm exceeds 1 (survival probability)");
    }
    return s;
}

cxd inner_product(const PhotonState& a, const PhotonState& b) {
    if (!(a.space == b.space)) {
        throw std::invalid_argument("inner_product: space mismatch");
    }
    cxd acc{0.0, 0.0};
    // iterate the smaller map
    const auto& lhs = a.amp.size() <= b.amp.size() ? a.amp : b.amp;
    const bool lhs_is_a = a.amp.size() <= b.amp.size();
    const auto& rhs = lhs_is_a ? b.amp : a.amp;
    for (const auto& [label, v] : lhs) {
        auto it = rhs.find(label);
        if (it == rhs.end()) continue;
        acc += lhs_is_a ? std::conj(v) * it->second : std::conj(it->second) * v;
    }
    return acc;
}

PhotonState normalized(const PhotonState& s) {
    const double n2 = s.norm2();
    if (n2 <= 0.0) throw std::invalid_argument("normalized: zero state");
    PhotonState out = s;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& [label, a] : out.amp) a *= inv;
    return out;
}

double state_fidelity(const PhotonState& a, const PhotonState& b) {
    if (std::abs(a.norm2() - 1.0) > 1e-9 || std::abs(b.norm2() - 1.0) > 1e-9) {
        throw std::invalid_argument("state_fidelity: states must be normalized");
    }
    return std::norm(inner_product(a, b));
}

ModeOperator identity_operator(const Space& space, int extra_band) {
    ModeOperator op;
    op.space = space;
    op.unitary_flag = true;
    for (const ModeLabel& m : space.labels(extra_band)) {
        op.cols[m][m] = cxd{1.0, 0.0};
    }
    return op;
}

PhotonState apply(const ModeOperator& op, const PhotonState& s) {
    if (!(op.space == s.space)) {
        throw std::invalid_argument("apply: operator/state space mismatch");
    }
    PhotonState out;
    out.space = s.space;
    for (const auto& [label, a] : s.amp) {
        if (a == cxd{0.0, 0.0}) continue;
        auto col = op.cols.find(label);
        if (col == op.cols.end()) {
            throw std::out_of_range("apply: no operator column for mode " +
                                    to_string(label));
        }
        for (const auto& [row, e] : col->second) {
            out.amp[row] += e * a;
        }
    }
    // prune exact zeros, then enforce the truncation bound on real amplitude
    for (auto it = out.amp.begin(); it != out.amp.end();) {
        if (std::norm(it->second) < 1e-28) {
            it = out.amp.erase(it);
        } else if (!s.space.contains(it->first)) {
            throw std::out_of_range(
                "apply: amplitude left the truncated space at mode " +
                to_string(it->first) + " (raise l_max)");
        } else {
            ++it;
        }
    }
    return out;
}

ModeOperator operator_product(const ModeOperator& a, const ModeOperator& b) {
    if (!(a.space == b.space)) {
        throw std::invalid_argument("operator_product: space mismatch");
    }
    ModeOperator out;
    out.space = b.space;
    out.unitary_flag = a.unitary_flag && b.unitary_flag;
    for (const auto& [c, bcol] : b.cols) {
        auto& ocol = out.cols[c];
        for (const auto& [mid, bv] : bcol) {
            if (bv == cxd{0.0, 0.0}) continue;
            auto acol = a.cols.find(mid);
            if (acol == a.cols.end()) {
                throw std::out_of_range(
                    "operator_product: intermediate mode " + to_string(mid) +
                    " outside left operand domain (OAM overflow mid-circuit)");
            }
            for (const auto& [row, av] : acol->second) {
                ocol[row] += av * bv;
            }
        }
        // drop entries that cancelled exactly
        for (auto it = ocol.begin(); it != ocol.end();) {
            if (std::norm(it->second) < 1e-28) {
                it = ocol.erase(it);
            } else {
                ++it;
            }
        }
    }
    return out;
}

ModeOperator adjoint(const ModeOperator& op) {
    ModeOperator out;
    out.space = op.space;
    out.unitary_flag = op.unitary_flag;
    for (const auto& [c, col] : op.cols) {
        for (const auto& [r, v] : col) {
            out.cols[r][c] = std::conj(v);
        }
    }
    return out;
}

ModeOperator scale(const ModeOperator& op, cxd factor) {
    ModeOperator out = op;
    out.unitary_flag = op.unitary_flag && std::abs(std::abs(factor) - 1.0) < 1e-15;
    for (auto& [c, col] : out.cols) {
        for (auto& [r, v] : col) v *= factor;
    }
    return out;
}

bool check_unitary(const ModeOperator& op, double tol) {
    // Gram matrix of the columns: U^dagger U restricted to the column set.
    for (auto it1 = op.cols.begin(); it1 != op.cols.end(); ++it1) {
        for (auto it2 = it1; it2 != op.cols.end(); ++it2) {
            cxd dot{0.0, 0.0};
            const auto& c1 = it1->second;
            const auto& c2 = it2->second;
            const auto& small = c1.size() <= c2.size() ? c1 : c2;
            const auto& large = c1.size() <= c2.size() ? c2 : c1;
            const bool small_is_c1 = c1.size() <= c2.size();
            for (const auto& [r, v] : small) {
                auto jt = large.find(r);
                if (jt == large.end()) continue;
                dot += small_is_c1 ? std::conj(v) * jt->second
                                   : std::conj(jt->second) * v;
            }
            const cxd expect =
                it1 == it2 ? cxd{1.0, 0.0} : cxd{0.0, 0.0};
            if (std::abs(dot - expect) >= tol) return false;
        }
    }
    return true;
}

double max_abs_diff(const ModeOperator& a, const ModeOperator& b) {
    double worst = 0.0;
    auto scan = [&worst](const ModeOperator& x, const ModeOperator& y) {
        for (const auto& [c, col] : x.cols) {
            auto yc = y.cols.find(c);
            for (const auto& [r, v] : col) {
                cxd other{0.0, 0.0};
                if (yc != y.cols.end()) {
                    auto it = yc->second.find(r);
                    if (it != yc->second.end()) other = it->second;
                }
                worst = std::max(worst, std::abs(v - other));
            }
        }
    };
    scan(a, b);
    scan(b, a);
    return worst;
}

}  // namespace oamsim
