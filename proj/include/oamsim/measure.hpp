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
 * @file measure.hpp
 * Projective polarization analysis, photon-counting statistics, the
 * count-ratio fidelity estimator, and linear-inversion qubit tomography.
 *
 * Axis convention (Poincare sphere): s1 = P(H)-P(V), s2 = P(A)-P(D),
 * s3 = P(R)-P(L); circular states sit at the poles, |R> at (0,0,+1).
 *
 * All sampling takes an explicit seed; there is no global RNG. Error bars
 * are Poissonian: sigma_F = sqrt(F(1-F)/(C_max+C_min)).
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "oamsim/circuit.hpp"

namespace oamsim {

/// The three polarization analysis bases; the first-named outcome of each
/// (R, H, A) is the "plus" detector.
enum class PolBasis { RL = 0, HV, AD };

const char* to_string(PolBasis b);

/// Outcome kets of a basis, plus first.
std::array<PolKet, 2> basis_outcomes(PolBasis b);

/// Polarization analyzer at a fixed output OAM and path.
struct Analyzer {
    PolBasis basis;
    int oam = 0;
    int path = 0;
};

/// |<outcome|s>|^2 for a normalized state; outcome 0 is the first-named ket.
double project_probability(const PhotonState& s, const Analyzer& analyzer,
                           int outcome);

/// Coincidence counts recorded behind one analysis basis.
struct CountTable {
    std::string basis;  // "RL", "HV", "AD" or an OAM analogue label
    std::uint64_t c_plus = 0;
    std::uint64_t c_minus = 0;
};

/// Deterministic random source. Poisson draws use exact inversion for small
/// means and the PTRS transformed-rejection sampler for large ones.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();  // [0, 1)
    std::uint64_t poisson(double mean);

  private:
    std::mt19937_64 eng_;
};

/// Per-trial seed derived from a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Two independent Poisson draws with means N*eta*p_plus and
/// N*eta*(1-p_plus); an optional flat background rate bg adds an independent
/// Poisson(N*bg) to each counter. Reproducible for a fixed seed.
CountTable sample_counts(const std::string& basis, double p_plus, double n_pairs,
                         double eta_det, std::uint64_t seed, double bg = 0.0);

struct FidelityEstimate {
    double f;
    double sigma;
};

/// F = C_max / (C_max + C_min) with Poissonian error propagation.
FidelityEstimate fidelity_from_counts(const CountTable& t);

/// 2x2 density matrix in the (H, V) basis.
struct DensityMatrix2 {
    std::array<std::array<cxd, 2>, 2> m{};

    cxd trace() const { return m[0][0] + m[1][1]; }

    /// (s1, s2, s3) = (P(H)-P(V), P(A)-P(D), P(R)-P(L)).
    std::array<double, 3> bloch() const;

    static DensityMatrix2 from_bloch(double s1, double s2, double s3);

    /// <psi|rho|psi> for a normalized Jones vector.
    double fidelity_with(const std::array<cxd, 2>& ket) const;

    /// Eigenvalues in descending order (real; matrix must be Hermitian).
    std::array<double, 2> eigenvalues() const;
};

/// Linear-inversion reconstruction from exact outcome asymmetries, followed
/// by the physical projection. This is the infinite-count limit of
/// tomography().
DensityMatrix2 tomography_from_stokes(double s_hv, double s_ad, double s_rl);

/// Reconstruction from one count table per basis (labels "RL", "HV", "AD",
/// any order). Throws on a missing basis or zero totals.
DensityMatrix2 tomography(const CountTable& a, const CountTable& b,
                          const CountTable& c);

/// Nearest (Frobenius) unit-trace PSD matrix: the Bloch vector is clipped to
/// the unit ball, r -> r / max(1, |r|). Idempotent.
DensityMatrix2 physical_projection(const DensityMatrix2& raw);

/// Named optical loss budget; overall efficiency is the plain product.
struct EfficiencyBudget {
    std::map<std::string, double> components;  // each in [0, 1]
};

double overall_efficiency(const EfficiencyBudget& b);

// File formats:
//   counts: {"bases": {"RL": [c1, c2], "HV": [c1, c2], "AD": [c1, c2]}}
//   budget: {"components": {"name": eta, ...}}
struct CountsFile {
    CountTable rl, hv, ad;
};

CountsFile parse_counts(const std::string& json_text);
CountsFile load_counts(const std::string& path);

EfficiencyBudget parse_budget(const std::string& json_text);
EfficiencyBudget load_budget(const std::string& path);

}  // namespace oamsim
