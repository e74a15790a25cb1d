#include "optokerr/linear_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace optokerr {

DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& s) {
    const double kappa = p.kappa, gamma = p.gamma_m, g = p.g_m, eta = p.eta;
    const double mass = p.mass, om = p.omega_m, hbar = p.hbar;
    const std::complex<double> a2 = s.a_s * s.a_s;
    const double u = a2.real(), v = a2.imag();
    const double dp = s.delta_eff + 4.0 * eta * s.n_s;
    const double ar = s.a_s.real(), ai = s.a_s.imag();

    DriftMatrix d;
    d.a(0, 1) = 1.0 / mass;
    d.a(1, 0) = -mass * om * om;
    d.a(1, 1) = -gamma;
    d.a(1, 2) = hbar * g * ar;
    d.a(1, 3) = hbar * g * ai;
    d.a(2, 0) = -2.0 * g * ai;
    d.a(2, 2) = -kappa + 2.0 * eta * v;
    d.a(2, 3) = dp - 2.0 * eta * u;
    d.a(3, 0) = 2.0 * g * ar;
    d.a(3, 2) = -(dp + 2.0 * eta * u);
    d.a(3, 3) = -kappa - 2.0 * eta * v;

    d.b(1, 0) = 1.0;
    d.b(2, 1) = std::sqrt(2.0 * kappa);
    d.b(3, 2) = std::sqrt(2.0 * kappa);
    return d;
}

namespace {

// Crude two-sided diagonal balancing (powers of 2), used only on the retry
// path when the plain eigensolver does not converge.
Eigen::Matrix4d balance(const Eigen::Matrix4d& a, Eigen::Vector4d& scale) {
    Eigen::Matrix4d m = a;
    scale.setOnes();
    for (int sweep = 0; sweep < 8; ++sweep) {
        bool changed = false;
        for (int i = 0; i < 4; ++i) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                row += std::abs(m(i, j));
                col += std::abs(m(j, i));
            }
            if (row == 0.0 || col == 0.0) continue;
            double f = 1.0;
            while (col * 2.0 < row) { col *= 2.0; row /= 2.0; f *= 2.0; }
            while (col > row * 2.0) { col /= 2.0; row *= 2.0; f /= 2.0; }
            if (f != 1.0) {
                changed = true;
                scale(i) *= f;
                for (int j = 0; j < 4; ++j) { m(i, j) /= f; m(j, i) *= f; }
            }
        }
        if (!changed) break;
    }
    return m;
}

}  // namespace

std::array<std::complex<double>, 4> numeric_modes(const DriftMatrix& drift) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(drift.a, /*computeEigenvectors=*/false);
    Eigen::Vector4cd lam;
    if (es.info() == Eigen::Success) {
        lam = es.eigenvalues();
    } else {
        Eigen::Vector4d scale;
        const Eigen::Matrix4d balanced = balance(drift.a, scale);
        Eigen::EigenSolver<Eigen::Matrix4d> es2(balanced, false);
        if (es2.info() != Eigen::Success)
            throw Error(ErrorKind::EigenFailure, "drift-matrix eigen solve failed after balancing");
        lam = es2.eigenvalues();
    }

    std::array<std::complex<double>, 4> out;
    for (int i = 0; i < 4; ++i) out[static_cast<size_t>(i)] = lam(i);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::abs(x.imag()) < std::abs(y.imag());
    });
    return out;
}

namespace {

NmsReport make_report(const SystemParams& p, const SteadyState& s, double tolerance,
                      DeltaEtaConvention conv, bool with_numeric) {
    const auto d = derive_quantities(p, s);
    NmsReport r;
    r.convention = conv;
    r.g_m_eff = d.g_m_eff;
    r.delta_eta = (conv == DeltaEtaConvention::Detuning) ? d.delta_eta_detuning
                                                         : d.delta_eta_literal;
    r.threshold = std::max(tolerance, 0.5 * (p.gamma_m + p.kappa));

    const double om = p.omega_m;
    const std::complex<double> half_sum =
        0.5 * std::complex<double>(r.delta_eta + om, -(p.kappa + p.gamma_m));
    const std::complex<double> z(p.kappa - p.gamma_m, r.delta_eta - om);
    const std::complex<double> root = std::sqrt(r.g_m_eff * r.g_m_eff - 0.25 * z * z);
    r.omega_plus = half_sum + root;
    r.omega_minus = half_sum - root;
    r.closed_separation = std::abs(r.omega_plus.real() - r.omega_minus.real());
    r.splitting_closed = r.closed_separation > r.threshold;

    if (with_numeric) {
        r.eigenvalues = numeric_modes(build_drift_matrix(p, s));
        double freqs[2] = {0.0, 0.0};
        int count = 0;
        for (const auto& lam : r.eigenvalues) {
            if (lam.imag() > 1e-9 * om) {
                if (count < 2) freqs[count] = lam.imag();
                ++count;
            }
        }
        r.underdamped_pairs = count;
        if (count == 2) {
            r.numeric_separation = std::abs(freqs[1] - freqs[0]);
            r.splitting_numeric = r.numeric_separation > r.threshold;
        }
    }
    return r;
}

}  // namespace

NmsReport closed_form_modes(const SystemParams& p, const SteadyState& s,
                            DeltaEtaConvention conv) {
    return make_report(p, s, 0.0, conv, /*with_numeric=*/true);
}

NmsReport classify_nms(const SystemParams& p, const SteadyState& s, double tolerance,
                       DeltaEtaConvention conv) {
    return make_report(p, s, tolerance, conv, /*with_numeric=*/true);
}

}  // namespace optokerr
