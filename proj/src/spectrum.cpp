#include "optokerr/spectrum.hpp"

#include <cmath>

#include "optokerr/quadrature.hpp"

namespace optokerr {

namespace {

// (kappa^2 + delta'^2 - w^2)^2 + 4 kappa^2 w^2, the shared field-response
// denominator of Eqs. for Omega_eff, Gamma_eff and the radiation term.
double field_denominator(const SystemParams& p, const DerivedQuantities& d, double omega) {
    const double t = p.kappa * p.kappa + d.delta_prime_sq - omega * omega;
    return t * t + 4.0 * p.kappa * p.kappa * omega * omega;
}

}  // namespace

EffectiveResponse effective_response(const SystemParams& p, const DerivedQuantities& d,
                                     double omega) {
    const double om2 = p.omega_m * p.omega_m;
    const double gp2 = d.g_prime * d.g_prime;
    const double denom = field_denominator(p, d, omega);
    const double lor = (p.kappa * p.kappa + d.delta_prime_sq - omega * omega) / denom;

    EffectiveResponse r;
    r.omega_eff_sq_normalized = om2 - 2.0 * p.hbar * gp2 * d.delta_dprime * lor / p.mass;
    r.gamma_eff_normalized =
        p.gamma_m + 4.0 * p.hbar * gp2 * d.delta_dprime * p.kappa / (p.mass * denom);
    r.omega_eff_sq_literal = om2 - 4.0 * p.hbar * gp2 * d.delta_dprime * lor;
    r.gamma_eff_literal =
        p.mass * p.gamma_m + 4.0 * p.hbar * gp2 * d.delta_dprime * p.kappa / denom;
    return r;
}

double s_q_closed_form(const SystemParams& p, const DerivedQuantities& d, double omega,
                       Normalization mode) {
    const auto r = effective_response(p, d, omega);
    const double gp2 = d.g_prime * d.g_prime;
    const double denom = field_denominator(p, d, omega);
    const double rad_shape =
        p.kappa * gp2 * (omega * omega + p.kappa * p.kappa + d.small_delta * d.small_delta) /
        denom;
    const double f = thermal_kernel(omega, p.temperature, p.hbar, p.k_b);

    double chi_inv_re, chi_inv_im, radiation;
    if (mode == Normalization::Normalized) {
        chi_inv_re = p.mass * (r.omega_eff_sq_normalized - omega * omega);
        chi_inv_im = -omega * p.mass * r.gamma_eff_normalized;
        radiation = 2.0 * p.hbar * rad_shape;
    } else {
        chi_inv_re = p.mass * (r.omega_eff_sq_literal - omega * omega);
        chi_inv_im = -omega * r.gamma_eff_literal;
        radiation = 4.0 * rad_shape;
    }
    const double chi2 = 1.0 / (chi_inv_re * chi_inv_re + chi_inv_im * chi_inv_im);
    return p.hbar * chi2 * (p.mass * p.gamma_m * f + radiation);
}

std::vector<Peak> find_peaks(std::span<const double> omega, std::span<const double> s) {
    if (omega.size() != s.size() || omega.size() < 3)
        throw Error(ErrorKind::GridTooCoarse, "need at least 3 grid points");

    std::vector<Peak> peaks;
    long last_idx = -100;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        if (!(s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
        if (s[i] == s[i + 1]) continue;  // plateau: report at the falling edge only
        if (static_cast<long>(i) - last_idx <= 5)
            throw Error(ErrorKind::GridTooCoarse,
                        "adjacent spectral peaks within 5 grid steps; refine the grid");
        last_idx = static_cast<long>(i);

        const double y0 = s[i - 1], y1 = s[i], y2 = s[i + 1];
        const double h = omega[i + 1] - omega[i];
        const double curve = y0 - 2.0 * y1 + y2;
        const double dx = (curve != 0.0) ? 0.5 * (y0 - y2) / curve : 0.0;
        Peak pk;
        pk.omega = omega[i] + dx * h;
        pk.height = y1 - 0.25 * (y0 - y2) * dx;

        // half-width on each side, walking to the half-height crossing
        const double half = 0.5 * pk.height;
        double left = 0.0, right = 0.0;
        for (size_t j = i; j-- > 0;) {
            if (s[j] <= half) {
                const double frac = (s[j + 1] - half) / (s[j + 1] - s[j]);
                left = omega[i] - (omega[j + 1] - frac * (omega[j + 1] - omega[j]));
                break;
            }
            if (j > 0 && s[j] > s[j + 1] && s[j] > pk.height) break;
        }
        for (size_t j = i + 1; j < s.size(); ++j) {
            if (s[j] <= half) {
                const double frac = (s[j - 1] - half) / (s[j - 1] - s[j]);
                right = (omega[j - 1] + frac * (omega[j] - omega[j - 1])) - omega[i];
                break;
            }
        }
        if (left == 0.0) left = right;
        if (right == 0.0) right = left;
        pk.fwhm = left + right;
        peaks.push_back(pk);
    }
    return peaks;
}

double peak_separation(const std::vector<Peak>& peaks) {
    if (peaks.size() < 2) return 0.0;
    double lo = peaks.front().omega, hi = peaks.front().omega;
    for (const auto& p : peaks) {
        lo = std::min(lo, p.omega);
        hi = std::max(hi, p.omega);
    }
    return hi - lo;
}

std::vector<double> make_grid(const Grid& g, double omega_m) {
    if (g.count < 2) throw Error(ErrorKind::InvalidConfig, "grid count must be >= 2");
    if (!(g.stop > g.start)) throw Error(ErrorKind::InvalidConfig, "grid stop must exceed start");
    std::vector<double> w(static_cast<size_t>(g.count));
    const double step = (g.stop - g.start) / (g.count - 1);
    for (int i = 0; i < g.count; ++i)
        w[static_cast<size_t>(i)] = (g.start + step * i) * omega_m;
    return w;
}

TemperatureResult effective_temperature_result(const SystemParams& p, const SteadyState& s,
                                               Normalization mode) {
    const auto d = derive_quantities(p, s);
    const auto drift = build_drift_matrix(p, s);
    const auto modes = numeric_modes(drift);

    std::vector<double> resonances;
    for (const auto& lam : modes)
        if (lam.imag() > 0.0) resonances.push_back(lam.imag());
    resonances.push_back(std::sqrt(p.kappa * p.kappa + std::max(d.delta_prime_sq, 0.0)));
    resonances.push_back(p.omega_m);

    const auto sq = [&](double w) { return s_q_closed_form(p, d, w, mode); };
    const auto sp = [&](double w) { return p.mass * p.mass * w * w * sq(w); };

    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-14;

    TemperatureResult r;
    const double om = p.omega_m;
    double q2 = 0.0, p2 = 0.0;   // one-sided integrals over [0, omega_max]
    double lo = 0.0;
    double t_prev = 0.0;
    const int max_doublings = 8;  // omega_max up to 1280 omega_m
    for (int k = 0; k <= max_doublings; ++k) {
        const double hi = 10.0 * om * std::pow(2.0, k);
        q2 += adaptive_simpson_segmented(sq, lo, hi, resonances, opt);
        p2 += adaptive_simpson_segmented(sp, lo, hi, resonances, opt);
        lo = hi;

        // spectra are even: <q^2> = (1/pi) * one-sided integral
        const double q2m = q2 / M_PI, p2m = p2 / M_PI;
        const double t = (0.5 * p.mass * om * om * q2m + 0.5 * p2m / p.mass) / p.k_b;
        r.q2_mean = q2m;
        r.p2_mean = p2m;
        r.t_eff = t;
        r.omega_max = hi;
        if (k > 0) {
            r.t_eff_prev = t_prev;
            r.rel_change = std::abs(t - t_prev) / std::max(std::abs(t), 1e-300);
            if (r.rel_change < 1e-4) {
                r.converged = true;
                break;
            }
        }
        t_prev = t;
    }
    return r;
}

TemperatureResult effective_temperature(const SystemParams& p, const SteadyState& s,
                                        Normalization mode) {
    TemperatureResult r = effective_temperature_result(p, s, mode);
    if (!r.converged)
        throw QuadratureNotConvergedError(
            r.t_eff_prev, r.t_eff, r.omega_max,
            "T_eff doubling test stalled: " + std::to_string(r.t_eff_prev) + " -> " +
                std::to_string(r.t_eff) + " at omega_max = " + std::to_string(r.omega_max));
    return r;
}

}  // namespace optokerr
