#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "optokerr/steady_state.hpp"

namespace optokerr {

// Real 4x4 generator of the linearized fluctuation dynamics over
// (dq, dp, dx, dy) with dx = da + da^dag, dy = i(da^dag - da), plus the
// noise input map for (xi, dx_in, dy_in).
struct DriftMatrix {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    Eigen::Matrix<double, 4, 3> b = Eigen::Matrix<double, 4, 3>::Zero();
};

// Exact Jacobian of the nonlinear Langevin drift at the fixed point. With
// u = Re(a_s^2), v = Im(a_s^2), Delta' = Delta + 4 eta n_s the field block is
//   dx' = -2 g Im(a_s) dq + (-kappa + 2 eta v) dx + (Delta' - 2 eta u) dy
//   dy' =  2 g Re(a_s) dq - (Delta' + 2 eta u) dx + (-kappa - 2 eta v) dy.
// (The published linearization flips the sign of the a_s^2 da^dag term; the
// finite-difference Jacobian test pins the version implemented here.)
DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& s);

// Eigenvalues of the drift generator, sorted by |Im|. Retries with diagonal
// balancing before reporting EigenFailure.
std::array<std::complex<double>, 4> numeric_modes(const DriftMatrix& drift);

// Delta_eta entering the closed-form eigenfrequencies: the text prints
// Omega_m + 6 eta' yet places NMS at Delta = Omega_m - 6 eta', which matches
// Delta + 6 eta'. Detuning is the default; Literal reproduces the printed
// form for audits.
enum class DeltaEtaConvention { Detuning, Literal };

struct NmsReport {
    std::complex<double> omega_plus{0.0, 0.0};
    std::complex<double> omega_minus{0.0, 0.0};
    std::array<std::complex<double>, 4> eigenvalues{};
    int underdamped_pairs = 0;
    double closed_separation = 0.0;   // |Re w+ - Re w-|
    double numeric_separation = 0.0;  // separation of the two underdamped Im's
    bool splitting_closed = false;
    bool splitting_numeric = false;
    double g_m_eff = 0.0;
    double delta_eta = 0.0;
    double threshold = 0.0;  // max(tolerance, (gamma_m + kappa)/2)
    DeltaEtaConvention convention = DeltaEtaConvention::Detuning;
};

// Closed-form eigenfrequencies
//   w_pm = (Delta_eta + Omega_m - i kappa - i Gamma_m)/2
//          +- sqrt(g_eff^2 - (i(Delta_eta - Omega_m) + (kappa - Gamma_m))^2/4)
// with the principal square root; the conjugate pair is -conj(w_pm).
NmsReport closed_form_modes(const SystemParams& p, const SteadyState& s,
                            DeltaEtaConvention conv = DeltaEtaConvention::Detuning);

// Full report with both closed-form and numeric splitting flags. Peaks
// closer than their mean linewidth (gamma_m + kappa)/2 count as unsplit.
NmsReport classify_nms(const SystemParams& p, const SteadyState& s,
                       double tolerance = 0.0,
                       DeltaEtaConvention conv = DeltaEtaConvention::Detuning);

}  // namespace optokerr
