#include "optokerr/steady_state.hpp"

#include <cmath>

#include "optokerr/linear_dynamics.hpp"
#include "optokerr/roots.hpp"

namespace optokerr {

namespace {

// Defining equation for the intracavity photon number.
double photon_residual(const SystemParams& p, double n) {
    const double big_g = p.hbar * p.g_m * p.g_m / (p.mass * p.omega_m * p.omega_m);
    const double det = p.delta0() + (2.0 * p.eta - big_g) * n;
    return n * (p.kappa * p.kappa + det * det) - p.eps_drive * p.eps_drive;
}

SteadyState make_branch(const SystemParams& p, double n, bool fold) {
    const double big_g = p.hbar * p.g_m * p.g_m / (p.mass * p.omega_m * p.omega_m);
    SteadyState s;
    s.n_s = n;
    s.fold = fold;
    s.delta_eff = p.delta0() - big_g * n;
    const double small_delta = s.delta_eff + 2.0 * p.eta * n;
    if (p.eps_drive == 0.0) {
        s.a_s = {0.0, 0.0};
    } else {
        s.a_s = p.eps_drive / std::complex<double>(p.kappa, small_delta);
    }
    s.q_s = p.hbar * p.g_m * n / (p.mass * p.omega_m * p.omega_m);
    s.p_s = 0.0;
    s.residual = std::abs(photon_residual(p, n));
    return s;
}

}  // namespace

std::vector<SteadyState> solve_branches(const SystemParams& p) {
    validate(p);
    std::vector<SteadyState> out;

    if (p.eps_drive == 0.0) {
        out.push_back(make_branch(p, 0.0, false));
    } else {
        const double big_g = p.hbar * p.g_m * p.g_m / (p.mass * p.omega_m * p.omega_m);
        const double c = 2.0 * p.eta - big_g;
        const double d0 = p.delta0();
        // eps^2 = n [kappa^2 + (Delta0 + c n)^2] expands to the real cubic
        // c^2 n^3 + 2 Delta0 c n^2 + (kappa^2 + Delta0^2) n - eps^2 = 0.
        // A vanishing leading coefficient (eta = g_m = 0, or exact
        // cancellation) degrades it to the linear equation.
        const std::vector<double> coeffs = {
            -p.eps_drive * p.eps_drive,
            p.kappa * p.kappa + d0 * d0,
            2.0 * d0 * c,
            c * c,
        };
        const auto roots = real_polynomial_roots(coeffs);
        for (const auto& r : roots) {
            if (r.x < -1e-12) continue;  // cannot occur: LHS < 0 for n < 0
            out.push_back(make_branch(p, std::max(r.x, 0.0), r.multiplicity > 1));
        }
        if (out.empty())
            throw Error(ErrorKind::NoPhysicalRoot, "no nonnegative real root of the photon-number cubic");
    }

    for (size_t i = 0; i < out.size(); ++i) {
        out[i].branch_index = static_cast<int>(i);
        out[i].rh_verdict = routh_hurwitz(p, out[i]);
        out[i].eig_stable = eigen_stability(p, out[i]);
    }
    return out;
}

std::array<double, 3> routh_hurwitz_values(const SystemParams& p, const SteadyState& s) {
    const double kappa = p.kappa, gamma = p.gamma_m, eta = p.eta;
    const double om2 = p.omega_m * p.omega_m;
    const double n = s.n_s;
    const std::complex<double> a2 = s.a_s * s.a_s;
    const double u = a2.real(), v = a2.imag();
    const double dp = s.delta_eff + 4.0 * eta * n;  // Delta'
    // 2i eta (a^2 - a*^2) = -4 eta Im(a^2);  a^4 + a*^4 = 2 Re(a^4);
    // (a^2 + a*^2)^2 = 4 Re(a^2)^2.
    const double re_a4 = (a2 * a2).real();
    const double hg2_m = p.hbar * p.g_m * p.g_m / p.mass;

    const double cond1 = dp * dp + kappa * kappa + om2 + 2.0 * gamma * kappa
                         - 4.0 * eta * v * (kappa + gamma) - 4.0 * eta * eta * re_a4;
    const double cond2 = gamma * dp * dp + 2.0 * om2 * (kappa - 2.0 * eta * v)
                         - 4.0 * gamma * eta * eta * u * u;
    const double cond3 = om2 * ((kappa - 2.0 * eta * v) * (kappa - 2.0 * eta * v) + dp * dp)
                         + 4.0 * hg2_m * eta * u * u
                         - 4.0 * om2 * eta * eta * u * u
                         - 2.0 * hg2_m * n * dp;
    return {cond1, cond2, cond3};
}

std::array<bool, 3> routh_hurwitz(const SystemParams& p, const SteadyState& s) {
    const auto v = routh_hurwitz_values(p, s);
    return {v[0] > 0.0, v[1] > 0.0, v[2] > 0.0};
}

bool eigen_stability(const SystemParams& p, const SteadyState& s) {
    const auto drift = build_drift_matrix(p, s);
    const auto modes = numeric_modes(drift);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& lam : modes) max_re = std::max(max_re, lam.real());
    return max_re < -1e-12 * p.omega_m;
}

const SteadyState& select_branch(const std::vector<SteadyState>& branches, int requested) {
    if (requested >= 0) {
        if (requested >= static_cast<int>(branches.size()))
            throw Error(ErrorKind::InvalidConfig,
                        "branch index " + std::to_string(requested) + " out of range (" +
                            std::to_string(branches.size()) + " branches)");
        return branches[static_cast<size_t>(requested)];
    }
    for (const auto& b : branches)
        if (b.eig_stable) return b;
    throw Error(ErrorKind::NoStableBranch, "no stable branch at these parameters");
}

DerivedQuantities derive_quantities(const SystemParams& p, const SteadyState& s) {
    return derive_quantities(p, s.n_s, s.a_s, s.q_s, s.delta_eff);
}

}  // namespace optokerr
