#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "optokerr/steady_state.hpp"

namespace testutil {

using optokerr::PinnedTargets;
using optokerr::SteadyState;
using optokerr::SystemParams;

inline SystemParams pinned(double g_prime, double eta_p, double delta,
                           double kappa = 0.1, double gamma = 0.01,
                           double temperature = 50.0, double n_s = 1.0) {
    PinnedTargets t;
    t.g_prime = g_prime;
    t.eta_prime = eta_p;
    t.delta_eff = delta;
    t.kappa = kappa;
    t.gamma_m = gamma;
    t.temperature = temperature;
    t.n_s = n_s;
    return optokerr::materialize_pinned(t);
}

inline SteadyState branch_near(const SystemParams& p, double n_target) {
    const auto branches = optokerr::solve_branches(p);
    const SteadyState* best = &branches.front();
    for (const auto& b : branches)
        if (std::abs(b.n_s - n_target) < std::abs(best->n_s - n_target)) best = &b;
    return *best;
}

// Nonlinear Langevin drift field of the full equations of motion, recast in
// (q, p, x, y) with a = (x + i y)/2. Reference for the Jacobian test.
inline Eigen::Vector4d nonlinear_drift(const SystemParams& p, const Eigen::Vector4d& s) {
    const double q = s(0), mom = s(1);
    const std::complex<double> a(0.5 * s(2), 0.5 * s(3));
    const double qdot = mom / p.mass;
    const double pdot = -p.mass * p.omega_m * p.omega_m * q - p.gamma_m * mom +
                        p.hbar * p.g_m * std::norm(a);
    const std::complex<double> adot =
        -std::complex<double>(p.kappa, p.delta0()) * a +
        std::complex<double>(0.0, p.g_m * q) * a + p.eps_drive -
        std::complex<double>(0.0, 2.0 * p.eta * std::norm(a)) * a;
    return {qdot, pdot, 2.0 * adot.real(), 2.0 * adot.imag()};
}

inline Eigen::Vector4d fixed_point_state(const SteadyState& b) {
    return {b.q_s, b.p_s, 2.0 * b.a_s.real(), 2.0 * b.a_s.imag()};
}

// Central-difference Jacobian of the nonlinear drift at the fixed point.
inline Eigen::Matrix4d fd_jacobian(const SystemParams& p, const SteadyState& b,
                                   double h = 1e-6) {
    const Eigen::Vector4d s0 = fixed_point_state(b);
    Eigen::Matrix4d j;
    for (int k = 0; k < 4; ++k) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e(k) = h * std::max(1.0, std::abs(s0(k)));
        j.col(k) = (nonlinear_drift(p, s0 + e) - nonlinear_drift(p, s0 - e)) / (2.0 * e(k));
    }
    return j;
}

inline double max_real_part(const std::array<std::complex<double>, 4>& modes) {
    double m = -1e300;
    for (const auto& lam : modes) m = std::max(m, lam.real());
    return m;
}

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
};

}  // namespace testutil
