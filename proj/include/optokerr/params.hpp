#pragma once

#include <complex>
#include <string>

#include "optokerr/errors.hpp"

#include <nlohmann/json_fwd.hpp>

namespace optokerr {

// CODATA 2018 values, used when ingesting SI parameter sets.
inline constexpr double kHbarSI = 1.054571817e-34;   // J s
inline constexpr double kBoltzmannSI = 1.380649e-23; // J/K

enum class UnitMode { Reduced, SI };

// All physical constants and rates of the driven Kerr cavity with a movable
// mirror. In Reduced mode the inputs are interpreted in units of the
// mechanical frequency (hbar = k_b = mass = omega_m = 1); the "temperature"
// field is then the dimensionless thermal energy k_B T / (hbar Omega_m).
struct SystemParams {
    UnitMode unit_mode = UnitMode::Reduced;

    double omega_c = 0.0;      // cavity resonance
    double omega_l = 0.0;      // drive laser frequency
    double kappa = 0.0;        // cavity amplitude decay rate
    double omega_m = 1.0;      // mechanical frequency
    double gamma_m = 0.0;      // mechanical damping
    double mass = 1.0;         // effective mirror mass
    double g_m = 0.0;          // optomechanical coupling, frequency per length
    double eta = 0.0;          // Kerr anharmonicity
    double eps_drive = 0.0;    // drive amplitude, real >= 0
    double temperature = 0.0;  // bath temperature (K in SI, k_B T/hbar Omega_m reduced)
    double hbar = 1.0;
    double k_b = 1.0;

    double delta0() const { return omega_c - omega_l; }
};

// Scale factors relating an SI parameter set to its reduced counterpart.
struct UnitScales {
    double omega = 1.0;   // rad/s per reduced frequency unit
    double mass = 1.0;    // kg per reduced mass unit
    double length = 1.0;  // m per reduced length unit, sqrt(hbar/(m omega_m))
};

// Validate a parameter set against the model invariants. Throws
// NonPositiveRate / NegativeValue / InconsistentUnits.
void validate(const SystemParams& p);

// Parse and validate a flat JSON config. Recognized keys are exactly the
// SystemParams field names plus "unit_mode" and (optionally) "cavity_length";
// anything else is an UnknownKey error. g_m may be given directly or derived
// from the cavity length via g_m = omega_c / L (direct entry wins).
SystemParams make_params(const nlohmann::json& config);

// Canonical internal unit system is Reduced; SI inputs are converted on
// ingestion. to_reduced on an already-reduced set is the identity.
SystemParams to_reduced(const SystemParams& p, UnitScales* scales = nullptr);
SystemParams to_si(const SystemParams& reduced, const UnitScales& scales);

// eta = 3 hbar omega_c^2 Re[chi3] / (2 eps_0 V_c)
double eta_from_susceptibility(double omega_c, double re_chi3, double eps_0,
                               double v_c, double hbar);

// Symmetrized thermal kernel f(w) = w coth(hbar w / 2 k_B T). Even in w;
// f -> |w| for T = 0 and f(0) = 2 k_B T / hbar for T > 0. Near w = 0 the
// Laurent expansion 2kT/(hbar w) + hbar w/(6kT) of coth is substituted to
// avoid cancellation.
double thermal_kernel(double omega, double temperature, double hbar = 1.0,
                      double k_b = 1.0);

// Shorthand quantities entering every closed-form expression, evaluated on a
// steady-state branch (n_s, a_s).
struct DerivedQuantities {
    double n_s = 0.0;
    std::complex<double> a_s{0.0, 0.0};
    double q_s = 0.0;
    double delta_0 = 0.0;          // bare detuning omega_c - omega_l
    double delta_eff = 0.0;        // Delta = delta_0 - g_m q_s
    double eta_p = 0.0;            // eta' = eta n_s
    double delta_cap_prime = 0.0;  // Delta' = Delta + 4 eta'
    double delta_prime_sq = 0.0;   // delta'^2 = Delta'^2 - 4 eta'^2
    double small_delta = 0.0;      // delta = Delta + 2 eta'
    double delta_dprime = 0.0;     // delta'' = Delta' - eta'
    double g_prime = 0.0;          // g'_m = g_m |a_s|
    double g_m_eff = 0.0;          // 2 g_m |a_s| sqrt(hbar/(m omega_m))
    double delta_eta_detuning = 0.0;  // Delta + 6 eta'
    double delta_eta_literal = 0.0;   // Omega_m + 6 eta'
};

DerivedQuantities derive_quantities(const SystemParams& p, double n_s,
                                    std::complex<double> a_s);

// Variant trusting an externally supplied mirror displacement and effective
// detuning (the steady-state branch is the authority on both).
DerivedQuantities derive_quantities(const SystemParams& p, double n_s,
                                    std::complex<double> a_s, double q_s,
                                    double delta_eff);

// Derived-pinned construction: the Fig. 2 caption fixes post-steady-state
// quantities (g'_m, eta', Delta), so presets back-solve the primitive
// parameters (eta, g_m, eps, omega_c) that place a branch with photon number
// n_s at exactly those targets. Reduced units.
struct PinnedTargets {
    double gamma_m = 0.01;
    double kappa = 0.1;
    double g_prime = 0.1;
    double delta_eff = 1.0;
    double eta_prime = 0.0;
    double temperature = 50.0;
    double n_s = 1.0;
};

SystemParams materialize_pinned(const PinnedTargets& t);

}  // namespace optokerr
