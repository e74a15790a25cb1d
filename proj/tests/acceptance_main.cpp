// Acceptance suite: one pass/fail line per criterion, with the measured
// numbers printed so a failure is diagnosable from the log alone. Exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "optokerr/verification.hpp"

using namespace optokerr;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& title) {
    std::printf("criterion %2d [%s] %s\n", criterion, pass ? "PASS" : "FAIL",
                title.c_str());
    if (!pass) ++g_failures;
}

void detail(const char* fmt, ...) {
    std::printf("              ");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
}

double max_of(const std::vector<double>& v) {
    double m = -1e300;
    for (double x : v) m = std::max(m, x);
    return m;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();

    const auto p0 = testutil::pinned(0.1, 0.0, 1.0);
    const auto b0 = testutil::branch_near(p0, 1.0);
    const auto s0 = compute_spectrum(p0, b0, Grid{}, Normalization::Normalized, false);

    const auto p4 = testutil::pinned(0.1, 0.04, 1.0);
    const auto b4 = testutil::branch_near(p4, 1.0);
    const auto s4 = compute_spectrum(p4, b4, Grid{}, Normalization::Normalized, false);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool two_peaks = s0.peaks.size() == 2;
    const double sep0 = peak_separation(s0.peaks);
    const double sep4 = peak_separation(s4.peaks);
    const bool kerr_suppressed = (s4.peaks.size() == 1) || (sep4 < sep0);
    const double max0 = max_of(s0.s_q_closed);
    const double max4 = max_of(s4.s_q_closed);
    const bool higher = max4 > max0;
    const bool fast = elapsed < 1.0;

    report(1, two_peaks && kerr_suppressed && higher && fast,
           "Fig. 2 reproduction (2 peaks without Kerr, suppressed splitting and "
           "higher maximum with)");
    detail("eta'=0: %zu peaks, separation %.5f; eta'=0.04: %zu peaks, separation %.5f",
           s0.peaks.size(), sep0, s4.peaks.size(), sep4);
    detail("max S_q: eta'=0.04 %.4f vs eta'=0 %.4f (ratio %.2f); runtime %.3f s",
           max4, max0, max4 / max0, elapsed);
}

void criterion_2() {
    const auto p = testutil::pinned(0.1, 0.0, 1.0);
    const auto b = testutil::branch_near(p, 1.0);
    const auto nms = classify_nms(p, b);

    const double split_expect = std::sqrt(0.04 - 0.002025);  // 0.19487...
    const bool closed_arithmetic =
        std::abs(nms.omega_plus.real() - (1.0 + split_expect)) < 1e-10 &&
        std::abs(nms.omega_minus.real() - (1.0 - split_expect)) < 1e-10;

    double numeric[2] = {0.0, 0.0};
    int k = 0;
    for (const auto& lam : nms.eigenvalues)
        if (lam.imag() > 1e-9 && k < 2) numeric[k++] = lam.imag();
    const double dev_minus = std::abs(nms.omega_minus.real() - numeric[0]) / numeric[0];
    const double dev_plus = std::abs(nms.omega_plus.real() - numeric[1]) / numeric[1];
    const bool closed_vs_numeric = dev_minus <= 0.02 && dev_plus <= 0.02;

    const auto spec = compute_spectrum(p, b, Grid{}, Normalization::Normalized, false);
    double peak_dev = 1e300;
    bool peaks_match = false;
    if (spec.peaks.size() == 2) {
        const double d0 = std::abs(spec.peaks[0].omega - numeric[0]);
        const double d1 = std::abs(spec.peaks[1].omega - numeric[1]);
        peak_dev = std::max(d0, d1);
        peaks_match = peak_dev <= 0.01;
    }

    report(2, closed_arithmetic && closed_vs_numeric && peaks_match,
           "mode-frequency consistency of Eq.-(25)-form closed modes vs the drift "
           "matrix");
    detail("closed Re(w_pm) = 1 -+ %.5f (matches the stated arithmetic: %s)",
           split_expect, closed_arithmetic ? "yes" : "no");
    detail("numeric |Im lambda| = (%.5f, %.5f); closed-vs-numeric rel dev = "
           "(%.3f, %.3f), bound 0.02 -> %s",
           numeric[0], numeric[1], dev_minus, dev_plus,
           closed_vs_numeric ? "ok" : "FAIL");
    detail("spectral peaks vs numeric eigenfrequencies: max |dw| = %.4f, bound 0.01 "
           "-> %s",
           peak_dev, peaks_match ? "ok" : "FAIL");
    if (!(closed_vs_numeric && peaks_match))
        detail("note: the closed form's g_m_eff = 2 g' sqrt(hbar/m omega_m) is 2*sqrt(2) "
               "times the hybridization coupling implied by the linearized equations; "
               "see the decisions ledger");
}

void criterion_3() {
    testutil::Draw draw(42);
    double worst = 0.0;
    int draws = 0;
    while (draws < 20) {
        const auto p = testutil::pinned(
            draw.uniform(0.01, 0.2), 0.0, draw.uniform(0.3, 1.5),
            draw.uniform(0.05, 0.5), draw.uniform(1e-3, 0.05), draw.uniform(0.0, 100.0));
        const auto branches = solve_branches(p);
        const SteadyState* stable = nullptr;
        for (const auto& b : branches)
            if (b.eig_stable && std::abs(b.n_s - 1.0) < 1e-6) stable = &b;
        if (!stable) continue;
        ++draws;
        const auto spec = compute_spectrum(p, *stable, Grid{}, Normalization::Normalized,
                                           /*with_oracle=*/true);
        for (size_t i = 0; i < spec.omega.size(); ++i) {
            const double a = spec.s_q_closed[i], o = spec.s_q_oracle[i];
            worst = std::max(worst, std::abs(a - o) / std::max({a, o, 1e-300}));
        }
    }
    const bool eta0_agree = worst <= 1e-8;

    // eta != 0: audit artifact generated; Fig. 2 claims hold for BOTH columns
    const auto p0 = testutil::pinned(0.1, 0.0, 1.0);
    const auto b0 = testutil::branch_near(p0, 1.0);
    const auto s0 = compute_spectrum(p0, b0, Grid{}, Normalization::Normalized, true);
    const auto p4 = testutil::pinned(0.1, 0.04, 1.0);
    const auto b4 = testutil::branch_near(p4, 1.0);
    const auto s4 = compute_spectrum(p4, b4, Grid{}, Normalization::Normalized, true);
    const auto audit = audit_report(p4, b4, Grid{}, Normalization::Normalized);

    auto fig2_claims = [](const std::vector<Peak>& pk0, const std::vector<double>& sq0,
                          const std::vector<Peak>& pk4, const std::vector<double>& sq4) {
        const bool two = pk0.size() == 2;
        const bool suppressed =
            (pk4.size() == 1) || (peak_separation(pk4) < peak_separation(pk0));
        const bool higher = max_of(sq4) > max_of(sq0);
        return two && suppressed && higher;
    };
    const bool closed_ok = fig2_claims(s0.peaks, s0.s_q_closed, s4.peaks, s4.s_q_closed);
    const bool oracle_ok =
        fig2_claims(s0.peaks_oracle, s0.s_q_oracle, s4.peaks_oracle, s4.s_q_oracle);

    report(3, eta0_agree && closed_ok && oracle_ok,
           "closed form vs frequency-domain oracle: <= 1e-8 at eta = 0; Fig. 2 claims "
           "hold on both spectra at eta' = 0.04");
    detail("worst rel dev over 20 stable draws x 4001 points: %.3g (bound 1e-8)", worst);
    detail("eta' = 0.04 audit: max dev %.3g, median %.3g (emitted, not asserted)",
           audit.spectrum_max_rel_dev, audit.spectrum_median_rel_dev);
    detail("Fig. 2 claims: closed %s, oracle %s", closed_ok ? "hold" : "FAIL",
           oracle_ok ? "hold" : "FAIL");
}

void criterion_4() {
    // eta = 0, Delta = Omega_m, Gamma_m = 0: the square root turns real at
    // g_eff = kappa/2 = 0.05, swept at step 1e-3
    const double kappa = 0.1;
    double first_real = -1.0, last_imag = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double g_eff = 0.0 + 1e-3 * i;
        const auto p = testutil::pinned(0.5 * g_eff, 0.0, 1.0, kappa, 0.0);
        const auto b = testutil::branch_near(p, 1.0);
        const auto nms = closed_form_modes(p, b);
        const std::complex<double> root =
            0.5 * (nms.omega_plus - nms.omega_minus);  // the sqrt term
        const bool real_dominated = root.real() > std::abs(root.imag());
        if (real_dominated && first_real < 0.0) first_real = g_eff;
        if (!real_dominated) last_imag = g_eff;
    }
    const bool pass = first_real > 0.0 && std::abs(first_real - 0.5 * kappa) <= 1e-3 &&
                      std::abs(last_imag - 0.5 * kappa) <= 1e-3;
    report(4, pass, "NMS threshold: closed-form square root turns real at g_m,eff = "
                    "kappa/2 within one 1e-3 sweep step");
    detail("last imaginary-dominated g_eff = %.4f, first real = %.4f, kappa/2 = %.4f",
           last_imag, first_real, 0.5 * kappa);
}

void criterion_5() {
    const auto p1 = testutil::pinned(0.1, 0.04, 1.0);
    const auto b1 = testutil::branch_near(p1, 1.0);
    const auto p76 = testutil::pinned(0.1, 0.04, 0.76);
    const auto b76 = testutil::branch_near(p76, 1.0);

    const auto nms1 = classify_nms(p1, b1);
    const auto nms76 = classify_nms(p76, b76);
    const bool restored_flag = nms76.splitting_numeric;
    const double ratio_eig = nms76.numeric_separation / nms1.numeric_separation;
    const bool ratio_ok = ratio_eig >= 1.5;

    const auto s1 = compute_spectrum(p1, b1, Grid{}, Normalization::Normalized, true);
    const auto s76 = compute_spectrum(p76, b76, Grid{}, Normalization::Normalized, true);

    report(5, restored_flag && ratio_ok,
           "Kerr-shifted NMS restored at Delta = Omega_m - 6 eta' = 0.76 (numeric "
           "eigenvalue separation ratio >= 1.5)");
    detail("numeric separation: %.5f at Delta=0.76 vs %.5f at Delta=1 (ratio %.3f, "
           "need >= 1.5)",
           nms76.numeric_separation, nms1.numeric_separation, ratio_eig);
    detail("splitting_numeric flags: Delta=0.76 %s, Delta=1 %s",
           nms76.splitting_numeric ? "true" : "false",
           nms1.splitting_numeric ? "true" : "false");
    detail("visible spectral peaks (closed/oracle): Delta=0.76 %zu/%zu, Delta=1 %zu/%zu",
           s76.peaks.size(), s76.peaks_oracle.size(), s1.peaks.size(),
           s1.peaks_oracle.size());
    if (!ratio_ok)
        detail("note: the corrected linearization places the avoided crossing at "
               "Delta = sqrt(Omega_m^2 + 4 eta'^2) - 4 eta' ~= %.4f, not at 0.76; "
               "see the decisions ledger",
               std::sqrt(1.0 + 4.0 * 0.04 * 0.04) - 4.0 * 0.04);
}

void criterion_6() {
    const auto p0 = testutil::pinned(0.1, 0.0, 1.0, 0.1, 0.01, 50.0);
    const auto b0 = testutil::branch_near(p0, 1.0);
    const auto p4 = testutil::pinned(0.1, 0.04, 1.0, 0.1, 0.01, 50.0);
    const auto b4 = testutil::branch_near(p4, 1.0);
    const auto t0 = effective_temperature_result(p0, b0);
    const auto t4 = effective_temperature_result(p4, b4);

    const bool ordering = t4.t_eff > t0.t_eff && t4.t_eff_prev > t0.t_eff_prev;
    const bool converged = t0.converged && t4.converged;

    report(6, ordering && converged,
           "heating claim: T_eff(eta'=0.04) > T_eff(eta'=0) at k_B T = 50, quadrature "
           "converged per contract");
    detail("T_eff: eta'=0.04 %.6f vs eta'=0 %.6f (both at omega_max %.0f / %.0f)",
           t4.t_eff, t0.t_eff, t4.omega_max, t0.omega_max);
    detail("ordering %s; doubling convergence: eta'=0 %s (rel %.3g), eta'=0.04 %s "
           "(rel %.3g), bound 1e-4",
           ordering ? "holds" : "FAIL", t0.converged ? "ok" : "FAIL", t0.rel_change,
           t4.converged ? "ok" : "FAIL", t4.rel_change);
    if (!converged)
        detail("note: the quantum momentum integrand carries an hbar*Gamma_m/(2 pi) "
               "log tail (~%.2g relative per doubling at the cooled branch), so the "
               "1e-4 doubling test cannot terminate; see the decisions ledger",
               0.5 * p0.gamma_m * std::log(2.0) / M_PI / t0.t_eff);
}

void criterion_7() {
    SystemParams p;
    p.unit_mode = UnitMode::Reduced;
    p.kappa = 1.0;
    p.gamma_m = 0.01;
    p.g_m = 0.0;
    p.eta = 0.5;
    p.eps_drive = 2.0;
    p.omega_c = -3.0;
    p.omega_l = 0.0;
    p.temperature = 50.0;

    const auto branches = solve_branches(p);
    const double expect[3] = {2.0 - std::sqrt(2.0), 2.0, 2.0 + std::sqrt(2.0)};
    bool pass = branches.size() == 3;
    double max_root_err = 0.0, max_resid = 0.0;
    if (pass) {
        for (int i = 0; i < 3; ++i) {
            max_root_err = std::max(
                max_root_err, std::abs(branches[static_cast<size_t>(i)].n_s - expect[i]));
            max_resid = std::max(max_resid, branches[static_cast<size_t>(i)].residual);
        }
        pass = max_root_err < 1e-9 && max_resid < 1e-10 && branches[0].eig_stable &&
               !branches[1].eig_stable && branches[2].eig_stable;
    }
    report(7, pass, "multistability: analytic triple roots {2-sqrt2, 2, 2+sqrt2} with "
                    "unstable middle branch");
    if (branches.size() == 3) {
        detail("roots (%.12f, %.12f, %.12f), max |err| %.2g, max residual %.2g",
               branches[0].n_s, branches[1].n_s, branches[2].n_s, max_root_err,
               max_resid);
        detail("stability (eig): (%d, %d, %d); expected (1, 0, 1)",
               branches[0].eig_stable, branches[1].eig_stable, branches[2].eig_stable);
    } else {
        detail("expected 3 branches, got %zu", branches.size());
    }
}

void criterion_8() {
    testutil::Draw draw(1001);
    double worst = 0.0;
    int count = 0;
    while (count < 100) {
        const auto p = testutil::pinned(draw.uniform(0.0, 0.4), draw.uniform(0.0, 0.12),
                                        draw.uniform(-1.5, 1.8), draw.uniform(0.05, 0.8),
                                        draw.uniform(1e-4, 0.08), 50.0,
                                        draw.uniform(0.2, 4.0));
        const auto branches = solve_branches(p);
        for (const auto& b : branches) {
            const auto drift = build_drift_matrix(p, b);
            const auto fd = testutil::fd_jacobian(p, b);
            const double dev = (drift.a - fd).cwiseAbs().maxCoeff() /
                               drift.a.cwiseAbs().maxCoeff();
            worst = std::max(worst, dev);
        }
        ++count;
    }
    report(8, worst < 1e-6, "drift matrix matches the finite-difference Jacobian of "
                            "the nonlinear equations on 100 random draws");
    detail("worst relative deviation %.3g (bound 1e-6)", worst);
}

void criterion_9() {
    const auto p = testutil::pinned(0.0, 0.0, 1.0, 0.1, 0.01, 50.0);
    const auto b = testutil::branch_near(p, 1.0);
    const auto d = derive_quantities(p, b);

    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double w = -3.0 + 6.0 * i / 2000.0;
        const double re = 1.0 - w * w;
        const double im = w * p.gamma_m;
        const double ref = p.gamma_m * thermal_kernel(w, 50.0) / (re * re + im * im);
        const double got = s_q_closed_form(p, d, w, Normalization::Normalized);
        worst = std::max(worst, std::abs(got - ref) / std::max({ref, got, 1e-300}));
    }
    const bool brownian = worst <= 1e-10;

    const auto t = effective_temperature_result(p, b);
    const bool equip = t.converged && std::abs(t.t_eff - 50.0) / 50.0 < 0.01;

    report(9, brownian && equip, "Brownian limit: analytic damped-oscillator spectrum "
                                 "to 1e-10 and classical equipartition within 1%");
    detail("spectrum worst rel dev %.3g; T_eff = %.6f (target 50, converged %s, "
           "omega_max %.0f)",
           worst, t.t_eff, t.converged ? "yes" : "no", t.omega_max);
}

void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = testutil::pinned(0.1, 0.0, 1.0, 0.1, 0.01, 50.0);
    const auto b = testutil::branch_near(p, 1.0);

    SdeOptions opt;
    opt.n_realizations = 64;
    opt.seed = 20260810;
    const auto res = sde_simulate(p, b, opt);

    const auto oracle = compute_spectrum(p, b, Grid{}, Normalization::Normalized, true);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool within = !res.peaks.empty();
    double worst_dev = 0.0;
    for (const auto& pk : res.peaks) {
        double best = 1e300;
        for (const auto& opk : oracle.peaks_oracle)
            best = std::min(best, std::abs(pk.omega - opk.omega) / opk.omega);
        worst_dev = std::max(worst_dev, best);
        within = within && best <= 0.05;
    }
    const bool fast = elapsed < 60.0;

    report(10, within && fast, "SDE cross-check: ensemble periodogram peaks within 5% "
                               "of the oracle's, under 60 s");
    std::string sde_peaks, oracle_peaks;
    for (const auto& pk : res.peaks) sde_peaks += " " + std::to_string(pk.omega);
    for (const auto& pk : oracle.peaks_oracle)
        oracle_peaks += " " + std::to_string(pk.omega);
    detail("sde peaks:%s | oracle peaks:%s | worst dev %.2f%%", sde_peaks.c_str(),
           oracle_peaks.c_str(), 100.0 * worst_dev);
    detail("%d segments averaged, step-halving discrepancy %.3g, runtime %.1f s",
           res.segments_averaged, res.step_halving_discrepancy, elapsed);
    detail("Parseval: var(q) time %.4f vs integrated periodogram %.4f",
           res.q_variance_time, res.q_variance_psd);
}

}  // namespace

int main() {
    std::printf("optokerr acceptance suite\n");
    std::printf("=========================\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("=========================\n");
    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
