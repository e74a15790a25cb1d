#pragma once

#include <array>
#include <complex>
#include <vector>

#include "optokerr/params.hpp"

namespace optokerr {

// One fixed point of the driven Kerr optomechanical cavity.
// n_s solves eps^2 = n [kappa^2 + (Delta0 + (2 eta - G) n)^2] with
// G = hbar g_m^2 / (m omega_m^2); the effective detuning is
// Delta = Delta0 - G n and a_s = eps / (kappa + i(Delta + 2 eta n)).
struct SteadyState {
    int branch_index = 0;
    double n_s = 0.0;
    std::complex<double> a_s{0.0, 0.0};
    double q_s = 0.0;
    double p_s = 0.0;  // identically zero
    double delta_eff = 0.0;
    double residual = 0.0;  // |n (kappa^2 + (Delta + 2 eta n)^2) - eps^2|
    std::array<bool, 3> rh_verdict{false, false, false};
    bool eig_stable = false;
    bool fold = false;
};

// All fixed points, sorted ascending by n_s, with both stability verdicts
// filled in. 1 to 3 entries; a fold-doubled root is reported once with the
// fold flag set.
std::vector<SteadyState> solve_branches(const SystemParams& p);

// The three printed Routh-Hurwitz inequalities, evaluated verbatim as the
// real expressions they algebraically are. Reported as the "paper verdict";
// stability ground truth is eigen_stability.
std::array<double, 3> routh_hurwitz_values(const SystemParams& p, const SteadyState& s);
std::array<bool, 3> routh_hurwitz(const SystemParams& p, const SteadyState& s);

// True iff every eigenvalue of the 4x4 drift matrix has real part below
// -1e-12 * omega_m.
bool eigen_stability(const SystemParams& p, const SteadyState& s);

// Branch used by spectrum/modes runs: requested index, or the smallest-n_s
// stable branch when requested < 0. Throws NoStableBranch / InvalidConfig.
const SteadyState& select_branch(const std::vector<SteadyState>& branches, int requested);

DerivedQuantities derive_quantities(const SystemParams& p, const SteadyState& s);

}  // namespace optokerr
