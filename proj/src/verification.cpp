#include "optokerr/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <thread>

#include <Eigen/Dense>

namespace optokerr {

OraclePoint oracle_point(const DriftMatrix& drift, double omega, double thermal_psd) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * std::complex<double>(0.0, -omega);
    m -= drift.a.cast<std::complex<double>>();
    const Eigen::Matrix<std::complex<double>, 4, 3> b =
        drift.b.cast<std::complex<double>>();

    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(m);
    const Eigen::Matrix<std::complex<double>, 4, 3> x = lu.solve(b);

    const double rhs_norm = drift.b.norm();
    const double resid = (m * x - b).norm();
    if (!(resid <= 1e-12 * std::max(rhs_norm, 1.0) * 1e3) || !std::isfinite(resid))
        throw Error(ErrorKind::SingularSystem,
                    "linear solve residual " + std::to_string(resid) + " at omega = " +
                        std::to_string(omega));

    OraclePoint pt;
    pt.t_xi_sq = std::norm(x(0, 0));
    pt.t_x_sq = std::norm(x(0, 1));
    pt.t_y_sq = std::norm(x(0, 2));
    pt.s_q = pt.t_xi_sq * thermal_psd + pt.t_x_sq + pt.t_y_sq;
    return pt;
}

OracleSpectrum oracle_spectrum(const SystemParams& p, const SteadyState& s,
                               std::span<const double> grid) {
    if (!s.eig_stable)
        throw Error(ErrorKind::SingularSystem,
                    "oracle spectrum refused for an unstable branch");
    const auto drift = build_drift_matrix(p, s);
    const double force_scale = p.hbar * p.mass * p.gamma_m;

    OracleSpectrum out;
    out.omega.assign(grid.begin(), grid.end());
    out.s_q_exact.resize(grid.size());
    out.t_xi_sq.resize(grid.size());
    out.t_x_sq.resize(grid.size());
    out.t_y_sq.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        const double f = thermal_kernel(grid[i], p.temperature, p.hbar, p.k_b);
        const auto pt = oracle_point(drift, grid[i], force_scale * f);
        out.s_q_exact[i] = pt.s_q;
        out.t_xi_sq[i] = pt.t_xi_sq;
        out.t_x_sq[i] = pt.t_x_sq;
        out.t_y_sq[i] = pt.t_y_sq;
    }
    return out;
}

SpectrumResult compute_spectrum(const SystemParams& p, const SteadyState& s,
                                const Grid& grid, Normalization mode, bool with_oracle) {
    const auto d = derive_quantities(p, s);
    SpectrumResult r;
    r.mode = mode;
    r.omega = make_grid(grid, p.omega_m);
    const size_t n = r.omega.size();
    r.s_q_closed.resize(n);
    r.s_p.resize(n);
    r.omega_eff.resize(n);
    r.gamma_eff.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double w = r.omega[i];
        r.s_q_closed[i] = s_q_closed_form(p, d, w, mode);
        r.s_p[i] = p.mass * p.mass * w * w * r.s_q_closed[i];
        const auto resp = effective_response(p, d, w);
        const double w2 = (mode == Normalization::Normalized) ? resp.omega_eff_sq_normalized
                                                              : resp.omega_eff_sq_literal;
        r.omega_eff[i] = std::copysign(std::sqrt(std::abs(w2)), w2);
        r.gamma_eff[i] = (mode == Normalization::Normalized) ? resp.gamma_eff_normalized
                                                             : resp.gamma_eff_literal;
    }
    r.peaks = find_peaks(r.omega, r.s_q_closed);
    if (with_oracle) {
        const auto oracle = oracle_spectrum(p, s, r.omega);
        r.s_q_oracle = oracle.s_q_exact;
        r.peaks_oracle = find_peaks(r.omega, r.s_q_oracle);
    }
    return r;
}

AuditReport audit_report(const SystemParams& p, const SteadyState& s, const Grid& grid,
                         Normalization mode) {
    AuditReport rep;
    rep.rh_all_true = s.rh_verdict[0] && s.rh_verdict[1] && s.rh_verdict[2];
    rep.eig_stable = s.eig_stable;
    rep.rh_matches_eigen = (rep.rh_all_true == rep.eig_stable);

    const auto d = derive_quantities(p, s);
    const auto drift = build_drift_matrix(p, s);
    const auto spec = compute_spectrum(p, s, grid, mode, /*with_oracle=*/true);

    std::vector<double> devs(spec.omega.size());
    double max_dev = 0.0;
    for (size_t i = 0; i < spec.omega.size(); ++i) {
        const double a = spec.s_q_closed[i], b = spec.s_q_oracle[i];
        const double dev = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        devs[i] = dev;
        max_dev = std::max(max_dev, dev);
    }
    std::nth_element(devs.begin(), devs.begin() + devs.size() / 2, devs.end());
    rep.spectrum_max_rel_dev = max_dev;
    rep.spectrum_median_rel_dev = devs[devs.size() / 2];
    rep.eq21_verdict = (max_dev <= 1e-8) ? "agree<=1e-8"
                                         : "deviates(max=" + std::to_string(max_dev) + ")";

    // static-response audit of the Omega_eff^2 constant
    {
        const auto pt0 = oracle_point(drift, 0.0, 0.0);
        Eigen::Matrix4cd m = -drift.a.cast<std::complex<double>>();
        const Eigen::Matrix<std::complex<double>, 4, 3> bc =
            drift.b.cast<std::complex<double>>();
        const std::complex<double> chi0 =
            Eigen::PartialPivLU<Eigen::Matrix4cd>(m).solve(bc)(0, 0);
        (void)pt0;
        const auto resp0 = effective_response(p, d, 0.0);
        const std::complex<double> chi_n = 1.0 / (p.mass * resp0.omega_eff_sq_normalized);
        const std::complex<double> chi_l = 1.0 / (p.mass * resp0.omega_eff_sq_literal);
        rep.chi0_dev_normalized = std::abs(chi_n - chi0) / std::abs(chi0);
        rep.chi0_dev_literal = std::abs(chi_l - chi0) / std::abs(chi0);
        rep.elected_constant = (rep.chi0_dev_normalized <= rep.chi0_dev_literal) ? 2 : 4;
        rep.eq23_verdict = "elected_constant=" + std::to_string(rep.elected_constant) +
                           " dev2=" + std::to_string(rep.chi0_dev_normalized) +
                           " dev4=" + std::to_string(rep.chi0_dev_literal);
    }

    // chi at the mechanical frequency: Gamma_eff consistency
    {
        const double w = p.omega_m;
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * std::complex<double>(0.0, -w);
        m -= drift.a.cast<std::complex<double>>();
        const Eigen::Matrix<std::complex<double>, 4, 3> bc =
            drift.b.cast<std::complex<double>>();
        const std::complex<double> chi_o =
            Eigen::PartialPivLU<Eigen::Matrix4cd>(m).solve(bc)(0, 0);
        const auto resp = effective_response(p, d, w);
        const std::complex<double> chi_c =
            1.0 / std::complex<double>(p.mass * (resp.omega_eff_sq_normalized - w * w),
                                       -w * p.mass * resp.gamma_eff_normalized);
        rep.gamma_eff_rel_dev = std::abs(chi_c - chi_o) / std::abs(chi_o);
        rep.eq24_verdict = (rep.gamma_eff_rel_dev <= 1e-8)
                               ? "agree<=1e-8"
                               : "deviates(rel=" + std::to_string(rep.gamma_eff_rel_dev) + ")";
    }

    // Eq. (25) closed modes vs numeric eigenfrequencies, both conventions
    {
        auto dev_for = [&](DeltaEtaConvention conv) {
            const auto nms = classify_nms(p, s, 0.0, conv);
            if (nms.underdamped_pairs != 2) return -1.0;
            double closed[2] = {nms.omega_minus.real(), nms.omega_plus.real()};
            double numeric[2] = {0.0, 0.0};
            int k = 0;
            for (const auto& lam : nms.eigenvalues)
                if (lam.imag() > 1e-9 * p.omega_m && k < 2) numeric[k++] = lam.imag();
            std::sort(std::begin(closed), std::end(closed));
            std::sort(std::begin(numeric), std::end(numeric));
            double dev = 0.0;
            for (int i = 0; i < 2; ++i)
                dev = std::max(dev, std::abs(closed[i] - numeric[i]) /
                                        std::max(std::abs(numeric[i]), 1e-300));
            return dev;
        };
        rep.eq25_dev_detuning = dev_for(DeltaEtaConvention::Detuning);
        rep.eq25_dev_literal = dev_for(DeltaEtaConvention::Literal);
        rep.eq25_verdict = "dev_detuning=" + std::to_string(rep.eq25_dev_detuning) +
                           " dev_literal=" + std::to_string(rep.eq25_dev_literal);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// stochastic integration
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct SdeState {
    double q, p;
    std::complex<double> a;
};

struct SdeSystem {
    double mass, om2, gamma, g, kappa, eta, eps, delta0, hbar;

    SdeState drift(const SdeState& y) const {
        SdeState f;
        f.q = y.p / mass;
        f.p = -mass * om2 * y.q - gamma * y.p + hbar * g * std::norm(y.a);
        f.a = -(std::complex<double>(kappa, delta0)) * y.a +
              std::complex<double>(0.0, g * y.q) * y.a + eps -
              std::complex<double>(0.0, 2.0 * eta * std::norm(y.a)) * y.a;
        return f;
    }
};

SdeState step_euler(const SdeSystem& sys, const SdeState& y, double dt, double kick) {
    const SdeState f = sys.drift(y);
    SdeState out;
    out.q = y.q + f.q * dt;
    out.p = y.p + f.p * dt + kick;
    out.a = y.a + f.a * dt;
    return out;
}

SdeState step_midpoint(const SdeSystem& sys, const SdeState& y, double dt, double kick) {
    SdeState z = step_euler(sys, y, dt, kick);
    for (int it = 0; it < 3; ++it) {
        SdeState mid{0.5 * (y.q + z.q), 0.5 * (y.p + z.p), 0.5 * (y.a + z.a)};
        const SdeState f = sys.drift(mid);
        z.q = y.q + f.q * dt;
        z.p = y.p + f.p * dt + kick;
        z.a = y.a + f.a * dt;
    }
    return z;
}

SdeSystem make_system(const SystemParams& p) {
    SdeSystem s;
    s.mass = p.mass;
    s.om2 = p.omega_m * p.omega_m;
    s.gamma = p.gamma_m;
    s.g = p.g_m;
    s.kappa = p.kappa;
    s.eta = p.eta;
    s.eps = p.eps_drive;
    s.delta0 = p.delta0();
    s.hbar = p.hbar;
    return s;
}

// in-place radix-2 FFT, n a power of two
void fft_radix2(std::vector<std::complex<double>>& x) {
    const size_t n = x.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

SdeTrajectory sde_trajectory(const SystemParams& p, const SteadyState& s,
                             const SdeOptions& opt, int realization) {
    if (p.k_b * p.temperature < 10.0 * p.hbar * p.omega_m)
        throw Error(ErrorKind::InvalidConfig,
                    "sde_simulate claims validity only for k_B T >= 10 hbar omega_m");
    if (opt.dt <= 0.0 || opt.duration <= 0.0)
        throw Error(ErrorKind::InvalidConfig, "sde step and duration must be > 0");

    const SdeSystem sys = make_system(p);
    const double noise_amp =
        std::sqrt(2.0 * p.mass * p.gamma_m * p.k_b * p.temperature * opt.dt);

    std::mt19937_64 rng(splitmix64(opt.seed ^ splitmix64(static_cast<std::uint64_t>(
                            realization) + 0x517cc1b727220a95ULL)));
    std::normal_distribution<double> normal(0.0, 1.0);

    SdeState y{s.q_s, s.p_s, s.a_s};
    const double scale0 =
        std::max({1.0, std::abs(y.q), std::abs(y.p), std::abs(y.a)});

    const long burn_steps = std::lround(opt.burn_in / opt.dt);
    const long total_steps = burn_steps + std::lround(opt.duration / opt.dt);

    SdeTrajectory traj;
    traj.seed = opt.seed;
    traj.realization = realization;

    for (long step = 0; step < total_steps; ++step) {
        const double kick = noise_amp * normal(rng);
        y = (opt.scheme == SdeOptions::Scheme::EulerMaruyama)
                ? step_euler(sys, y, opt.dt, kick)
                : step_midpoint(sys, y, opt.dt, kick);
        const double mag = std::max({std::abs(y.q), std::abs(y.p), std::abs(y.a)});
        if (!(mag < 1e6 * scale0))
            throw Error(ErrorKind::UnstableBlowup,
                        "trajectory diverged at t = " +
                            std::to_string((step + 1) * opt.dt));
        if (step >= burn_steps && (step - burn_steps) % opt.record_stride == 0) {
            traj.t.push_back((step + 1) * opt.dt);
            traj.q.push_back(y.q);
            traj.p.push_back(y.p);
            traj.re_a.push_back(y.a.real());
            traj.im_a.push_back(y.a.imag());
        }
    }
    return traj;
}

namespace {

// step-halving comparison on a shared Brownian path
double halving_discrepancy(const SystemParams& p, const SteadyState& s,
                           const SdeOptions& opt) {
    const SdeSystem sys = make_system(p);
    const double span = std::min(opt.duration, 200.0);
    const long n_coarse = std::lround(span / opt.dt);
    const double amp_fine =
        std::sqrt(2.0 * p.mass * p.gamma_m * p.k_b * p.temperature * 0.5 * opt.dt);

    std::mt19937_64 rng(splitmix64(opt.seed ^ 0xabcdef1234567890ULL));
    std::normal_distribution<double> normal(0.0, 1.0);

    SdeState yc{s.q_s, s.p_s, s.a_s};
    SdeState yf = yc;
    double var_c = 0.0, var_f = 0.0;
    for (long i = 0; i < n_coarse; ++i) {
        const double k1 = amp_fine * normal(rng);
        const double k2 = amp_fine * normal(rng);
        yf = step_euler(sys, yf, 0.5 * opt.dt, k1);
        yf = step_euler(sys, yf, 0.5 * opt.dt, k2);
        yc = step_euler(sys, yc, opt.dt, k1 + k2);
        const double dq_c = yc.q - s.q_s, dq_f = yf.q - s.q_s;
        var_c += dq_c * dq_c;
        var_f += dq_f * dq_f;
    }
    var_c /= static_cast<double>(n_coarse);
    var_f /= static_cast<double>(n_coarse);
    return std::abs(var_c - var_f) / std::max(var_f, 1e-300);
}

}  // namespace

SdeResult sde_simulate(const SystemParams& p, const SteadyState& s, const SdeOptions& opt) {
    const int n_fft = opt.fft_size;
    if (n_fft < 8 || (n_fft & (n_fft - 1)) != 0)
        throw Error(ErrorKind::InvalidConfig, "fft_size must be a power of two");
    const double dt_s = opt.dt * opt.record_stride;

    SdeResult res;
    res.scheme_name = (opt.scheme == SdeOptions::Scheme::EulerMaruyama)
                          ? "euler-maruyama"
                          : "semi-implicit-midpoint";
    res.seed = opt.seed;
    res.dt = opt.dt;
    res.psd.assign(static_cast<size_t>(n_fft / 2 + 1), 0.0);
    res.omega.resize(res.psd.size());
    for (size_t k = 0; k < res.omega.size(); ++k)
        res.omega[k] = 2.0 * M_PI * static_cast<double>(k) / (n_fft * dt_s);

    std::vector<double> hann(static_cast<size_t>(n_fft));
    double wsum2 = 0.0;
    for (int i = 0; i < n_fft; ++i) {
        hann[static_cast<size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n_fft - 1)));
        wsum2 += hann[static_cast<size_t>(i)] * hann[static_cast<size_t>(i)];
    }

    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(opt.n_realizations)));
    std::vector<std::vector<double>> psd_per(static_cast<size_t>(opt.n_realizations));
    std::vector<double> var_per(static_cast<size_t>(opt.n_realizations), 0.0);
    std::vector<long> nseg_per(static_cast<size_t>(opt.n_realizations), 0);
    std::vector<std::string> errors(static_cast<size_t>(opt.n_realizations));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= opt.n_realizations) break;
            try {
                const SdeTrajectory traj = sde_trajectory(p, s, opt, idx);
                const size_t n_samples = traj.q.size();
                const size_t n_segments = n_samples / static_cast<size_t>(n_fft);
                std::vector<double> acc(res.psd.size(), 0.0);
                double var = 0.0;
                for (double q : traj.q) {
                    const double dq = q - s.q_s;
                    var += dq * dq;
                }
                var /= std::max<size_t>(n_samples, 1);
                std::vector<std::complex<double>> buf(static_cast<size_t>(n_fft));
                for (size_t seg = 0; seg < n_segments; ++seg) {
                    double mean = 0.0;
                    for (int i = 0; i < n_fft; ++i)
                        mean += traj.q[seg * n_fft + static_cast<size_t>(i)];
                    mean /= n_fft;
                    for (int i = 0; i < n_fft; ++i)
                        buf[static_cast<size_t>(i)] =
                            (traj.q[seg * n_fft + static_cast<size_t>(i)] - mean) *
                            hann[static_cast<size_t>(i)];
                    fft_radix2(buf);
                    for (size_t k = 0; k < acc.size(); ++k)
                        acc[k] += std::norm(buf[k]) * dt_s / wsum2;
                }
                psd_per[static_cast<size_t>(idx)] = std::move(acc);
                var_per[static_cast<size_t>(idx)] = var;
                nseg_per[static_cast<size_t>(idx)] = static_cast<long>(n_segments);
            } catch (const Error& e) {
                errors[static_cast<size_t>(idx)] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& e : errors)
        if (!e.empty()) throw Error(ErrorKind::UnstableBlowup, e);

    long total_segments = 0;
    double var_sum = 0.0;
    for (int i = 0; i < opt.n_realizations; ++i) {
        total_segments += nseg_per[static_cast<size_t>(i)];
        var_sum += var_per[static_cast<size_t>(i)];
        for (size_t k = 0; k < res.psd.size(); ++k)
            res.psd[k] += psd_per[static_cast<size_t>(i)][k];
    }
    if (total_segments == 0)
        throw Error(ErrorKind::InvalidConfig, "duration too short for one FFT segment");
    for (auto& v : res.psd) v /= static_cast<double>(total_segments);
    res.segments_averaged = static_cast<int>(total_segments);
    res.q_variance_time = var_sum / opt.n_realizations;

    // Parseval: <q^2> = (1/2pi) integral S dω over both signs
    const double domega = res.omega[1] - res.omega[0];
    double power = 0.0;
    for (size_t k = 0; k < res.psd.size(); ++k) {
        const bool interior = (k > 0 && k + 1 < res.psd.size());
        power += res.psd[k] * (interior ? 2.0 : 1.0);
    }
    res.q_variance_psd = power * domega / (2.0 * M_PI);

    const double sigma = opt.smooth_sigma * p.omega_m;
    const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma / domega)));
    std::vector<double> kernel(static_cast<size_t>(2 * half + 1));
    double ksum = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double z = i * domega / sigma;
        kernel[static_cast<size_t>(i + half)] = std::exp(-0.5 * z * z);
        ksum += kernel[static_cast<size_t>(i + half)];
    }
    std::vector<double> smooth(res.psd.size(), 0.0);
    for (size_t k = 0; k < res.psd.size(); ++k) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
            long j = static_cast<long>(k) + i;
            if (j < 0) j = -j;
            if (j >= static_cast<long>(res.psd.size()))
                j = 2 * static_cast<long>(res.psd.size()) - 2 - j;
            acc += res.psd[static_cast<size_t>(j)] * kernel[static_cast<size_t>(i + half)];
        }
        smooth[k] = acc / ksum;
    }

    double top = 0.0;
    for (double v : smooth) top = std::max(top, v);
    for (size_t k = 1; k + 1 < smooth.size(); ++k) {
        if (smooth[k] > smooth[k - 1] && smooth[k] >= smooth[k + 1] &&
            smooth[k] >= 0.2 * top) {
            const double y0 = smooth[k - 1], y1 = smooth[k], y2 = smooth[k + 1];
            const double curve = y0 - 2.0 * y1 + y2;
            const double dx = (curve != 0.0) ? 0.5 * (y0 - y2) / curve : 0.0;
            Peak pk;
            pk.omega = res.omega[k] + dx * domega;
            pk.height = y1 - 0.25 * (y0 - y2) * dx;
            res.peaks.push_back(pk);
        }
    }

    if (opt.check_step_halving) {
        res.step_halving_discrepancy = halving_discrepancy(p, s, opt);
        if (res.step_halving_discrepancy > 0.10)
            throw Error(ErrorKind::StepTooLarge,
                        "step-halving discrepancy " +
                            std::to_string(res.step_halving_discrepancy) +
                            " exceeds 10%; reduce dt");
    }
    return res;
}

}  // namespace optokerr
