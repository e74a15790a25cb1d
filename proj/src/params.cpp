#include "optokerr/params.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace optokerr {

void validate(const SystemParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    for (double x : {p.omega_c, p.omega_l, p.kappa, p.omega_m, p.gamma_m, p.mass,
                     p.g_m, p.eta, p.eps_drive, p.temperature, p.hbar, p.k_b}) {
        if (!finite(x)) throw Error(ErrorKind::InvalidConfig, "non-finite parameter value");
    }
    if (p.kappa <= 0.0) throw Error(ErrorKind::NonPositiveRate, "kappa must be > 0");
    if (p.omega_m <= 0.0) throw Error(ErrorKind::NonPositiveRate, "omega_m must be > 0");
    if (p.mass <= 0.0) throw Error(ErrorKind::NonPositiveRate, "mass must be > 0");
    if (p.gamma_m < 0.0) throw Error(ErrorKind::NegativeValue, "gamma_m must be >= 0");
    if (p.eta < 0.0) throw Error(ErrorKind::NegativeValue, "eta must be >= 0");
    if (p.eps_drive < 0.0) throw Error(ErrorKind::NegativeValue, "eps_drive must be >= 0");
    if (p.temperature < 0.0) throw Error(ErrorKind::NegativeValue, "temperature must be >= 0");
    if (p.hbar <= 0.0 || p.k_b <= 0.0)
        throw Error(ErrorKind::NonPositiveRate, "hbar and k_b must be > 0");

    if (p.unit_mode == UnitMode::Reduced) {
        if (p.mass != 1.0)
            throw Error(ErrorKind::InconsistentUnits, "Reduced mode requires mass = 1");
        if (p.omega_m != 1.0)
            throw Error(ErrorKind::InconsistentUnits, "Reduced mode requires omega_m = 1");
        if (p.hbar != 1.0 || p.k_b != 1.0)
            throw Error(ErrorKind::InconsistentUnits, "Reduced mode requires hbar = k_b = 1");
    }
}

SystemParams make_params(const nlohmann::json& config) {
    if (!config.is_object())
        throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");

    static const std::set<std::string> known = {
        "omega_c", "omega_l", "kappa", "omega_m", "gamma_m", "mass", "g_m",
        "eta", "eps_drive", "temperature", "hbar", "k_b", "unit_mode",
        "cavity_length"};
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (!known.count(it.key()))
            throw Error(ErrorKind::UnknownKey, "unknown config key '" + it.key() + "'");
    }

    SystemParams p;
    if (config.contains("unit_mode")) {
        const std::string m = config.at("unit_mode").get<std::string>();
        if (m == "reduced" || m == "Reduced") p.unit_mode = UnitMode::Reduced;
        else if (m == "si" || m == "SI") p.unit_mode = UnitMode::SI;
        else throw Error(ErrorKind::InvalidConfig, "unit_mode must be 'reduced' or 'si'");
    }
    if (p.unit_mode == UnitMode::SI) {
        p.hbar = kHbarSI;
        p.k_b = kBoltzmannSI;
    }

    auto need = [&](const char* key) -> double {
        if (!config.contains(key))
            throw Error(ErrorKind::InvalidConfig, std::string("missing config key '") + key + "'");
        if (!config.at(key).is_number())
            throw Error(ErrorKind::InvalidConfig, std::string("config key '") + key + "' must be numeric");
        return config.at(key).get<double>();
    };
    auto opt = [&](const char* key, double fallback) -> double {
        if (!config.contains(key)) return fallback;
        if (!config.at(key).is_number())
            throw Error(ErrorKind::InvalidConfig, std::string("config key '") + key + "' must be numeric");
        return config.at(key).get<double>();
    };

    p.omega_c = need("omega_c");
    p.omega_l = need("omega_l");
    p.kappa = need("kappa");
    p.omega_m = need("omega_m");
    p.gamma_m = need("gamma_m");
    p.mass = opt("mass", p.unit_mode == UnitMode::Reduced ? 1.0 : 0.0);
    p.eta = need("eta");
    p.eps_drive = need("eps_drive");
    p.temperature = need("temperature");
    p.hbar = opt("hbar", p.hbar);
    p.k_b = opt("k_b", p.k_b);

    if (config.contains("g_m")) {
        p.g_m = need("g_m");
    } else if (config.contains("cavity_length")) {
        const double length = need("cavity_length");
        if (length <= 0.0)
            throw Error(ErrorKind::NonPositiveRate, "cavity_length must be > 0");
        p.g_m = p.omega_c / length;
    } else {
        throw Error(ErrorKind::InvalidConfig, "either g_m or cavity_length is required");
    }

    validate(p);
    return p;
}

SystemParams to_reduced(const SystemParams& p, UnitScales* scales) {
    validate(p);
    if (p.unit_mode == UnitMode::Reduced) {
        if (scales) *scales = UnitScales{};
        return p;
    }
    UnitScales s;
    s.omega = p.omega_m;
    s.mass = p.mass;
    s.length = std::sqrt(p.hbar / (p.mass * p.omega_m));

    SystemParams r;
    r.unit_mode = UnitMode::Reduced;
    r.omega_c = p.omega_c / s.omega;
    r.omega_l = p.omega_l / s.omega;
    r.kappa = p.kappa / s.omega;
    r.omega_m = 1.0;
    r.gamma_m = p.gamma_m / s.omega;
    r.mass = 1.0;
    r.g_m = p.g_m * s.length / s.omega;
    r.eta = p.eta / s.omega;
    r.eps_drive = p.eps_drive / s.omega;
    r.temperature = p.k_b * p.temperature / (p.hbar * s.omega);
    r.hbar = 1.0;
    r.k_b = 1.0;
    if (scales) *scales = s;
    return r;
}

SystemParams to_si(const SystemParams& r, const UnitScales& s) {
    SystemParams p;
    p.unit_mode = UnitMode::SI;
    p.omega_c = r.omega_c * s.omega;
    p.omega_l = r.omega_l * s.omega;
    p.kappa = r.kappa * s.omega;
    p.omega_m = r.omega_m * s.omega;
    p.gamma_m = r.gamma_m * s.omega;
    p.mass = r.mass * s.mass;
    p.g_m = r.g_m * s.omega / s.length;
    p.eta = r.eta * s.omega;
    p.eps_drive = r.eps_drive * s.omega;
    p.hbar = kHbarSI;
    p.k_b = kBoltzmannSI;
    p.temperature = r.temperature * p.hbar * s.omega / p.k_b;
    return p;
}

double eta_from_susceptibility(double omega_c, double re_chi3, double eps_0,
                               double v_c, double hbar) {
    if (v_c <= 0.0) throw Error(ErrorKind::ZeroVolume, "cavity volume must be > 0");
    if (eps_0 <= 0.0) throw Error(ErrorKind::ZeroVolume, "eps_0 must be > 0");
    return 3.0 * hbar * omega_c * omega_c * re_chi3 / (2.0 * eps_0 * v_c);
}

double thermal_kernel(double omega, double temperature, double hbar, double k_b) {
    if (temperature <= 0.0) return std::abs(omega);
    const double kt = k_b * temperature;
    const double x = hbar * omega / (2.0 * kt);
    if (std::abs(x) < 1e-6)
        return 2.0 * kt / hbar + hbar * omega * omega / (6.0 * kt);
    return omega / std::tanh(x);
}

DerivedQuantities derive_quantities(const SystemParams& p, double n_s,
                                    std::complex<double> a_s) {
    const double q_s = p.hbar * p.g_m * n_s / (p.mass * p.omega_m * p.omega_m);
    const double delta_eff =
        p.delta0() - p.hbar * p.g_m * p.g_m / (p.mass * p.omega_m * p.omega_m) * n_s;
    return derive_quantities(p, n_s, a_s, q_s, delta_eff);
}

DerivedQuantities derive_quantities(const SystemParams& p, double n_s,
                                    std::complex<double> a_s, double q_s,
                                    double delta_eff) {
    DerivedQuantities d;
    d.n_s = n_s;
    d.a_s = a_s;
    d.q_s = q_s;
    d.delta_0 = p.delta0();
    d.delta_eff = delta_eff;
    d.eta_p = p.eta * n_s;
    d.delta_cap_prime = d.delta_eff + 4.0 * d.eta_p;
    d.delta_prime_sq = d.delta_cap_prime * d.delta_cap_prime - 4.0 * d.eta_p * d.eta_p;
    d.small_delta = d.delta_eff + 2.0 * d.eta_p;
    d.delta_dprime = d.delta_cap_prime - d.eta_p;
    d.g_prime = p.g_m * std::abs(a_s);
    d.g_m_eff = 2.0 * d.g_prime * std::sqrt(p.hbar / (p.mass * p.omega_m));
    d.delta_eta_detuning = d.delta_eff + 6.0 * d.eta_p;
    d.delta_eta_literal = p.omega_m + 6.0 * d.eta_p;
    return d;
}

SystemParams materialize_pinned(const PinnedTargets& t) {
    if (t.n_s <= 0.0)
        throw Error(ErrorKind::InvalidConfig, "pinned n_s must be > 0");
    if (t.g_prime < 0.0 || t.eta_prime < 0.0)
        throw Error(ErrorKind::NegativeValue, "pinned g_prime and eta_p must be >= 0");

    SystemParams p;
    p.unit_mode = UnitMode::Reduced;
    p.kappa = t.kappa;
    p.gamma_m = t.gamma_m;
    p.temperature = t.temperature;
    p.g_m = t.g_prime / std::sqrt(t.n_s);
    p.eta = t.eta_prime / t.n_s;
    // Eq.(10) with real eps pins |a_s| = sqrt(n_s) at detuning
    // delta = Delta + 2 eta'; the bare detuning restores the static
    // radiation-pressure shift g_m q_s = g_m^2 n_s (reduced units).
    const double small_delta = t.delta_eff + 2.0 * t.eta_prime;
    p.eps_drive = std::sqrt(t.n_s * (t.kappa * t.kappa + small_delta * small_delta));
    p.omega_l = 0.0;
    p.omega_c = t.delta_eff + p.g_m * p.g_m * t.n_s;
    validate(p);
    return p;
}

}  // namespace optokerr
