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

#include "doctest.h"
#include "oamsim/circuit.hpp"
#include "oamsim/elements.hpp"
#include "test_util.hpp"

using namespace oamsim;

namespace {

const Space kSpace{2, 1};

cxd amp_of(const PhotonState& s, Pol pol, int oam, int path = 0) {
    auto it = s.amp.find(ModeLabel{pol, oam, path});
    return it == s.amp.end() ? cxd{0.0, 0.0} : it->second;
}

}  // namespace

TEST_CASE("hwp at pi/8 rotates H onto the diagonal state") {
    const PhotonState out =
        apply(hwp(kSpace, kPi / 8), pol_ket_state(kSpace, PolKet::H));
    CHECK(state_fidelity(out, pol_ket_state(kSpace, PolKet::A)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // exact amplitudes, not just the ray
    CHECK(std::abs(amp_of(out, Pol::H, 0) - cxd{std::sqrt(0.5), 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(out, Pol::V, 0) - cxd{std::sqrt(0.5), 0.0}) < 1e-15);
}

TEST_CASE("hwp convention-defining cases") {
    const ModeOperator w0 = hwp(kSpace, 0.0);
    const PhotonState h = pol_ket_state(kSpace, PolKet::H);
    const PhotonState v = pol_ket_state(kSpace, PolKet::V);
    CHECK(std::abs(amp_of(apply(w0, h), Pol::H, 0) - cxd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(apply(w0, v), Pol::V, 0) - cxd{-1.0, 0.0}) < 1e-15);

    // evaluating the matrix at 2*theta = pi/2 sends H to V
    const PhotonState flipped = apply(hwp(kSpace, kPi / 4), h);
    CHECK(std::abs(amp_of(flipped, Pol::V, 0) - cxd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(flipped, Pol::H, 0)) < 1e-15);
}

TEST_CASE("qwp convention: diag(1, i) at zero, H -> L at pi/4") {
    const PhotonState h = pol_ket_state(kSpace, PolKet::H);
    const PhotonState v = pol_ket_state(kSpace, PolKet::V);
    const ModeOperator q0 = qwp(kSpace, 0.0);
    CHECK(std::abs(amp_of(apply(q0, h), Pol::H, 0) - cxd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(apply(q0, v), Pol::V, 0) - cxd{0.0, 1.0}) < 1e-15);

    const PhotonState circ = apply(qwp(kSpace, kPi / 4), h);
    CHECK(state_fidelity(circ, pol_ket_state(kSpace, PolKet::L)) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("waveplates are unitary at random angles") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        CHECK(check_unitary(qwp(kSpace, test::runif(rng) * 2 * kPi), 1e-10));
        CHECK(check_unitary(hwp(kSpace, test::runif(rng) * 2 * kPi), 1e-10));
    }
}

TEST_CASE("dove prism writes counter-propagating phases") {
    const ModeOperator dp = dove_prism(kSpace, kPi / 16);
    const PhotonState hp2 =
        make_state({{ModeLabel{Pol::H, 2, 0}, cxd{1.0, 0.0}}}, kSpace);
    const PhotonState vm2 =
        make_state({{ModeLabel{Pol::V, -2, 0}, cxd{1.0, 0.0}}}, kSpace);
    CHECK(std::abs(amp_of(apply(dp, hp2), Pol::H, 2) -
                   std::polar(1.0, kPi / 4)) < 1e-14);
    // substituting l = -2 into the V branch gives the same +pi/4 phase
    CHECK(std::abs(amp_of(apply(dp, vm2), Pol::V, -2) -
                   std::polar(1.0, kPi / 4)) < 1e-14);

    CHECK(test::diff_from_identity(dove_prism(kSpace, 0.0)) < 1e-15);
}

TEST_CASE("dove prism is periodic in gamma for integer OAM") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const double gamma = test::runif(rng) * 2 * kPi;
        CHECK(max_abs_diff(dove_prism(kSpace, gamma),
                           dove_prism(kSpace, gamma + 2 * kPi)) < 1e-12);
        CHECK(max_abs_diff(dove_prism(kSpace, gamma),
                           dove_prism(kSpace, gamma + kPi)) < 1e-12);
    }
}

TEST_CASE("sagnac loop on the diagonal-polarization OAM qubit") {
    // (alpha|+2> + beta|-2>)(|H> + |V>)/sqrt2 picks up e^{+/- i pi/4} phases
    // branch by branch, regrouping into alpha e^{i pi/4}|R,+2> +
    // beta e^{-i pi/4}|L,-2>.
    const cxd alpha{0.6, 0.0}, beta{0.0, 0.8};
    const double rt = std::sqrt(0.5);
    const PhotonState in = normalized(make_state(
        {{ModeLabel{Pol::H, 2, 0}, alpha * rt},
         {ModeLabel{Pol::V, 2, 0}, alpha * rt},
         {ModeLabel{Pol::H, -2, 0}, beta * rt},
         {ModeLabel{Pol::V, -2, 0}, beta * rt}},
        kSpace));
    const PhotonState out = apply(sagnac_psi(kSpace, kPi / 16), in);

    const cxd ph = std::polar(1.0, kPi / 4);
    CHECK(std::abs(amp_of(out, Pol::H, 2) - alpha * rt * ph) < 1e-14);
    CHECK(std::abs(amp_of(out, Pol::V, 2) - alpha * rt * std::conj(ph)) <
          1e-14);
    CHECK(std::abs(amp_of(out, Pol::H, -2) - beta * rt * std::conj(ph)) <
          1e-14);
    CHECK(std::abs(amp_of(out, Pol::V, -2) - beta * rt * ph) < 1e-14);

    // same state, written over the circular pair
    PhotonState regrouped;
    regrouped.space = kSpace;
    const auto [rh, rv] = jones(PolKet::R);
    const auto [lh, lv] = jones(PolKet::L);
    regrouped.amp[ModeLabel{Pol::H, 2, 0}] = alpha * ph * rh;
    regrouped.amp[ModeLabel{Pol::V, 2, 0}] = alpha * ph * rv;
    regrouped.amp[ModeLabel{Pol::H, -2, 0}] = beta * std::conj(ph) * lh;
    regrouped.amp[ModeLabel{Pol::V, -2, 0}] = beta * std::conj(ph) * lv;
    CHECK(state_fidelity(out, regrouped) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sagnac_psi equals the dove prism operator") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i) {
        const double gamma = test::runif(rng) * 2 * kPi;
        CHECK(max_abs_diff(sagnac_psi(kSpace, gamma),
                           dove_prism(kSpace, gamma)) == 0.0);
    }
}

TEST_CASE("tuned q-plate completes the transfer on circular kets") {
    const Space space{4, 1};
    const ModeOperator qp = qplate(space, 1.0, kPi);
    const PhotonState r2 = pol_ket_state(space, PolKet::R, 2);
    const PhotonState lm2 = pol_ket_state(space, PolKet::L, -2);
    // |R,+2> -> |L,0> and |L,-2> -> |R,0>, up to the global phase i
    CHECK(state_fidelity(apply(qp, r2), pol_ket_state(space, PolKet::L, 0)) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(state_fidelity(apply(qp, lm2), pol_ket_state(space, PolKet::R, 0)) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("q-plate at zero retardation is the identity") {
    CHECK(test::diff_from_identity(qplate(kSpace, 1.0, 0.0)) == 0.0);
}

TEST_CASE("half-tuned q-plate splits the state evenly") {
    const Space space{2, 1};
    const PhotonState out =
        apply(qplate(space, 1.0, kPi / 2), pol_ket_state(space, PolKet::L, 0));
    // (|L,0> + i|R,+2>)/sqrt2
    const double rt = std::sqrt(0.5);
    CHECK(std::abs(amp_of(out, Pol::H, 0) - cxd{rt, 0.0} * rt) < 1e-14);
    CHECK(std::abs(amp_of(out, Pol::V, 0) - cxd{0.0, rt} * rt) < 1e-14);
    CHECK(std::abs(amp_of(out, Pol::H, 2) - cxd{0.0, rt} * rt) < 1e-14);
    CHECK(std::abs(amp_of(out, Pol::V, 2) - cxd{rt, 0.0} * rt) < 1e-14);
}

TEST_CASE("q-plate conversion probability equals its efficiency") {
    std::mt19937_64 rng(13);
    const Space space{6, 1};
    for (int i = 0; i < 40; ++i) {
        const double delta = test::runif(rng) * 2 * kPi;
        const double q = (rng() % 2) ? 1.0 : 0.5;
        const PhotonState psi = test::random_state(rng, space, 2);
        const PhotonState out = apply(qplate(space, q, delta), psi);
        // converted component = out - cos(delta/2) * in, orthogonal to in
        PhotonState conv = out;
        const double c = std::cos(delta / 2.0);
        for (const auto& [label, v] : psi.amp) conv.amp[label] -= c * v;
        CHECK(std::abs(conv.norm2() - qplate_efficiency(delta)) < 1e-12);
    }
}

TEST_CASE("q-plate shifts OAM by 2q and flips the circular basis") {
    const Space space{3, 1};
    for (double q : {0.5, 1.0, -0.5}) {
        const int shift = static_cast<int>(std::llround(2.0 * q));
        const PhotonState out =
            apply(qplate(space, q, kPi), pol_ket_state(space, PolKet::L, 1));
        CHECK(state_fidelity(out,
                             pol_ket_state(space, PolKet::R, 1 + shift)) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("q-plate rejects non-half-integer charge") {
    CHECK_THROWS_AS(qplate(kSpace, 0.3, kPi), std::invalid_argument);
    CHECK_THROWS_AS(qplate(kSpace, 0.0, kPi), std::invalid_argument);
}

TEST_CASE("q-plate is unitary at random parameters") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 30; ++i) {
        const double charges[4] = {0.5, -0.5, 1.0, 1.5};
        CHECK(check_unitary(
            qplate(kSpace, charges[rng() % 4], test::runif(rng) * 2 * kPi),
            1e-10));
    }
}

TEST_CASE("qplate_efficiency pinned points") {
    CHECK(qplate_efficiency(kPi) == 1.0);
    CHECK(qplate_efficiency(0.0) == 0.0);
    CHECK(qplate_efficiency(kPi / 2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("pbs routes polarizations across paths") {
    const Space space{2, 2};
    const ModeOperator b = pbs(space);
    const PhotonState h = pol_ket_state(space, PolKet::H, 0, 0);
    const PhotonState v = pol_ket_state(space, PolKet::V, 0, 0);
    CHECK(std::abs(amp_of(apply(b, h), Pol::H, 0, 0) - cxd{1.0, 0.0}) <
          1e-15);
    CHECK(std::abs(amp_of(apply(b, v), Pol::V, 0, 1) - cxd{0.0, 1.0}) <
          1e-15);

    // linearity on |A>: (|H>_path0 + i|V>_path1)/sqrt2
    const PhotonState a = apply(b, pol_ket_state(space, PolKet::A, 0, 0));
    const double rt = std::sqrt(0.5);
    CHECK(std::abs(amp_of(a, Pol::H, 0, 0) - cxd{rt, 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(a, Pol::V, 0, 1) - cxd{0.0, rt}) < 1e-15);

    CHECK(check_unitary(b, 1e-10));
    CHECK(test::diff_from_identity(operator_product(b, b)) < 1e-15);
}

TEST_CASE("pbs rejects degenerate wiring") {
    const Space space{2, 2};
    CHECK_THROWS_AS(pbs(space, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(pbs(space, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(pbs(kSpace), std::invalid_argument);  // single path
}

TEST_CASE("mirror flips the OAM sign and squares to identity") {
    const ModeOperator m = mirror(kSpace);
    const PhotonState hp2 =
        make_state({{ModeLabel{Pol::H, 2, 0}, cxd{1.0, 0.0}}}, kSpace);
    CHECK(std::abs(amp_of(apply(m, hp2), Pol::H, -2) - cxd{1.0, 0.0}) <
          1e-15);
    const PhotonState h0 = pol_ket_state(kSpace, PolKet::H, 0);
    CHECK(std::abs(amp_of(apply(m, h0), Pol::H, 0) - cxd{1.0, 0.0}) < 1e-15);
    CHECK(test::diff_from_identity(operator_product(m, m)) == 0.0);
}

TEST_CASE("phase_shift honors its mode filter") {
    const Space space{2, 2};
    ModeFilter v_only;
    v_only.pol = Pol::V;
    const ModeOperator ps = phase_shift(space, kPi / 3, v_only);
    const PhotonState a = apply(ps, pol_ket_state(space, PolKet::A, 1, 0));
    CHECK(std::abs(amp_of(a, Pol::H, 1, 0) - cxd{std::sqrt(0.5), 0.0}) <
          1e-15);
    CHECK(std::abs(amp_of(a, Pol::V, 1, 0) -
                   std::polar(std::sqrt(0.5), kPi / 3)) < 1e-15);

    ModeFilter oam2;
    oam2.oam = 2;
    const ModeOperator ps2 = phase_shift(space, kPi, oam2);
    const PhotonState s = apply(
        ps2, normalized(make_state({{ModeLabel{Pol::H, 2, 0}, cxd{0.6, 0.0}},
                                    {ModeLabel{Pol::H, 0, 0}, cxd{0.8, 0.0}}},
                                   space)));
    CHECK(std::abs(amp_of(s, Pol::H, 2) - cxd{-0.6, 0.0}) < 1e-15);
    CHECK(std::abs(amp_of(s, Pol::H, 0) - cxd{0.8, 0.0}) < 1e-15);
}

TEST_CASE("attenuator range checking") {
    CHECK_THROWS_AS(attenuator(kSpace, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(attenuator(kSpace, 1.1), std::invalid_argument);
}

TEST_CASE("voltage_to_delta follows the calibration curve") {
    TuningCurve curve;
    curve.threshold_volts = 2.2;
    curve.samples = {{2.2, 0.02}, {2.6, 0.15}, {3.0, 0.40}, {3.4, 0.65},
                     {3.8, 0.85}, {4.2, 0.96}, {4.5, 0.995}};
    // optimal conversion around 4.5 V
    CHECK(std::abs(voltage_to_delta(curve, 4.5) - kPi) < 0.15);
    CHECK(qplate_efficiency(voltage_to_delta(curve, 4.5)) ==
          doctest::Approx(0.995).epsilon(1e-12));

    // sample points are returned exactly
    for (const auto& [v, eff] : curve.samples) {
        CHECK(voltage_to_delta(curve, v) == 2.0 * std::asin(std::sqrt(eff)));
    }

    // midpoints sit between their neighbors (linear interpolation oracle)
    for (size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const double vm =
            0.5 * (curve.samples[i].first + curve.samples[i + 1].first);
        const double d0 =
            2.0 * std::asin(std::sqrt(curve.samples[i].second));
        const double d1 =
            2.0 * std::asin(std::sqrt(curve.samples[i + 1].second));
        const double dm = voltage_to_delta(curve, vm);
        CHECK(dm >= std::min(d0, d1));
        CHECK(dm <= std::max(d0, d1));
        CHECK(dm == doctest::Approx(0.5 * (d0 + d1)).epsilon(1e-12));
    }

    // monotone table -> monotone retardation
    double prev = -1.0;
    for (double v = 2.2; v <= 4.5; v += 0.01) {
        const double d = voltage_to_delta(curve, v);
        CHECK(d >= prev);
        prev = d;
    }

    CHECK_THROWS_AS(voltage_to_delta(curve, 1.0), std::out_of_range);
    CHECK_THROWS_AS(voltage_to_delta(curve, 5.0), std::out_of_range);
}

TEST_CASE("voltage below threshold pins the first sample") {
    TuningCurve curve;
    curve.threshold_volts = 2.5;
    curve.samples = {{2.0, 0.05}, {2.5, 0.05}, {3.0, 0.5}, {4.0, 0.9}};
    CHECK(voltage_to_delta(curve, 2.1) ==
          2.0 * std::asin(std::sqrt(0.05)));
}

TEST_CASE("tuning curve validation") {
    TuningCurve bad;
    bad.samples = {{2.0, 0.1}, {1.5, 0.2}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.samples = {{2.0, 1.2}};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad.samples.clear();
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("tuning curve JSON round trip") {
    const std::string text =
        "{\"threshold_volts\": 2.2, \"samples\": [[2.2, 0.02], [4.5, 0.99]]}";
    const TuningCurve curve = parse_tuning_curve(text);
    CHECK(curve.threshold_volts == 2.2);
    REQUIRE(curve.samples.size() == 2);
    CHECK(curve.samples[1].first == 4.5);
    CHECK(curve.samples[1].second == 0.99);
    CHECK_THROWS(parse_tuning_curve("{\"samples\": [[2.0, 2.0]]}"));
    CHECK_THROWS(parse_tuning_curve("not json"));
}

TEST_CASE("every unitary element passes check_unitary at random parameters") {
    std::mt19937_64 rng(29);
    const Space space{4, 2};
    for (int i = 0; i < 100; ++i) {
        const OpticalElement e = test::random_unitary_element(rng, space);
        const ModeOperator op = lower(e, space);
        CHECK(check_unitary(op, 1e-10));
        CHECK(op.unitary_flag);
    }
    CHECK_FALSE(lower({Attenuator{0.7}}, space).unitary_flag);
}
