#include "optokerr/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace optokerr {

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config parse error: ") + e.what());
    }
    return j;
}

std::pair<std::string, double> parse_override(const std::string& kv) {
    const auto pos = kv.find('=');
    if (pos == std::string::npos || pos == 0)
        throw Error(ErrorKind::InvalidConfig, "override must be key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, pos);
    try {
        size_t used = 0;
        const double v = std::stod(kv.substr(pos + 1), &used);
        if (used != kv.size() - pos - 1)
            throw std::invalid_argument("trailing");
        return {key, v};
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidConfig, "override value for '" + key + "' is not numeric");
    }
}

ResolvedConfig from_pinned(const PinnedTargets& t) {
    ResolvedConfig rc;
    rc.pinned = true;
    rc.targets = t;
    rc.params = materialize_pinned(t);
    rc.params_as_given = rc.params;
    return rc;
}

ResolvedConfig from_raw(const SystemParams& given) {
    ResolvedConfig rc;
    rc.pinned = false;
    rc.params_as_given = given;
    rc.params = to_reduced(given, &rc.scales);
    return rc;
}

SystemParams schliesser_preset() {
    // Mechanical and Kerr rates as ratios of Omega_m = 2 pi x 73.5 MHz;
    // kappa, drive and bath are not fixed by the reference and are chosen in
    // the resolved-sideband cooling regime.
    SystemParams p;
    p.unit_mode = UnitMode::Reduced;
    p.omega_m = 1.0;
    p.gamma_m = 1.3e3 / 73.5e6;
    p.g_m = 2.0 / 73.5;
    p.eta = 3.0 / 73.5;
    p.kappa = 0.1;
    p.eps_drive = 0.5;
    p.temperature = 1000.0;
    p.omega_l = 0.0;
    p.omega_c = 1.0002;
    return p;
}

}  // namespace

ResolvedConfig resolve_config(const RunSpec& spec) {
    ResolvedConfig rc;
    if (spec.preset == "fig2_eta0") {
        rc = from_pinned(PinnedTargets{});
    } else if (spec.preset == "fig2_eta004") {
        PinnedTargets t;
        t.eta_prime = 0.04;
        rc = from_pinned(t);
    } else if (spec.preset == "schliesser") {
        rc = from_raw(schliesser_preset());
    } else if (spec.preset == "none" || spec.preset.empty()) {
        if (spec.config_path.empty())
            throw Error(ErrorKind::InvalidConfig, "need --config PATH or --preset NAME");
        rc = from_raw(make_params(load_json_file(spec.config_path)));
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown preset '" + spec.preset + "'");
    }

    for (const auto& kv : spec.overrides) {
        const auto [key, value] = parse_override(kv);
        rc = apply_override(rc, key, value);
    }
    return rc;
}

ResolvedConfig apply_override(const ResolvedConfig& base, const std::string& key,
                              double value) {
    ResolvedConfig rc = base;
    if (rc.pinned) {
        PinnedTargets& t = rc.targets;
        if (key == "eta_p") t.eta_prime = value;
        else if (key == "g_prime") t.g_prime = value;
        else if (key == "delta_eff") t.delta_eff = value;
        else if (key == "kappa") t.kappa = value;
        else if (key == "gamma_m") t.gamma_m = value;
        else if (key == "temperature") t.temperature = value;
        else if (key == "n_s") t.n_s = value;
        else
            throw Error(ErrorKind::UnknownKey,
                        "'" + key + "' is not a pinned-preset key (use eta_p, g_prime, "
                        "delta_eff, kappa, gamma_m, temperature, n_s)");
        rc.params = materialize_pinned(t);
        rc.params_as_given = rc.params;
        return rc;
    }

    nlohmann::json cfg = params_to_config(rc.params_as_given);
    if (!cfg.contains(key))
        throw Error(ErrorKind::UnknownKey, "'" + key + "' is not a SystemParams key");
    cfg[key] = value;
    return from_raw(make_params(cfg));
}

namespace {

struct OutputContext {
    const RunSpec& spec;
    const ResolvedConfig& rc;

    HeaderLines header(const std::string& command) const {
        HeaderLines h;
        h.emplace_back("optokerr", command);
        if (!spec.no_timestamp) h.emplace_back("generated_at", iso_timestamp());
        h.emplace_back("unit_mode",
                       rc.params_as_given.unit_mode == UnitMode::Reduced ? "reduced" : "si");
        h.emplace_back("normalization", to_string(spec.convention));
        h.emplace_back("delta_eta_convention", to_string(spec.delta_eta));
        h.emplace_back("temperature_kB_T_over_hbar_omega_m", fmt17(rc.params.temperature));
        h.emplace_back("config", params_to_config(rc.params_as_given).dump());
        if (rc.params_as_given.unit_mode == UnitMode::SI) {
            h.emplace_back("omega_unit_rad_per_s", fmt17(rc.scales.omega));
            h.emplace_back("length_unit_m", fmt17(rc.scales.length));
            h.emplace_back("note",
                           "SI-mode absolute S_q normalization is convention-dependent; "
                           "values are emitted in reduced units");
        }
        return h;
    }

    nlohmann::json base_json(const std::string& command) const {
        nlohmann::json j;
        j["command"] = command;
        if (!spec.no_timestamp) j["generated_at"] = iso_timestamp();
        j["unit_mode"] =
            rc.params_as_given.unit_mode == UnitMode::Reduced ? "reduced" : "si";
        j["normalization"] = to_string(spec.convention);
        j["delta_eta_convention"] = to_string(spec.delta_eta);
        j["config"] = params_to_config(rc.params_as_given);
        j["seed"] = spec.seed;
        return j;
    }

    std::string path(const std::string& name) const {
        return (std::filesystem::path(spec.out_dir) / name).string();
    }
};

void cmd_steady(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    nlohmann::json j = ctx.base_json("steady");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : branches) {
        nlohmann::json bj = to_json(b);
        bj["derived"] = to_json(derive_quantities(ctx.rc.params, b));
        arr.push_back(bj);
    }
    j["branches"] = arr;
    write_text_file(ctx.path("steady.json"), j.dump(2) + "\n");
}

void cmd_modes(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    const auto& b = select_branch(branches, ctx.spec.branch);
    const auto nms = classify_nms(ctx.rc.params, b, 0.0, ctx.spec.delta_eta);
    nlohmann::json j = ctx.base_json("modes");
    j["branch"] = to_json(b);
    j["nms"] = to_json(nms);
    write_text_file(ctx.path("modes.json"), j.dump(2) + "\n");
}

void cmd_spectrum(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    const auto& b = select_branch(branches, ctx.spec.branch);
    const auto spec = compute_spectrum(ctx.rc.params, b, ctx.spec.grid,
                                       ctx.spec.convention, /*with_oracle=*/true);
    HeaderLines h = ctx.header("spectrum");
    h.emplace_back("branch_index", std::to_string(b.branch_index));
    h.emplace_back("n_s", fmt17(b.n_s));
    write_text_file(ctx.path("spectrum.csv"),
                    spectrum_csv(spec, h, ctx.rc.scales.omega));

    nlohmann::json j = ctx.base_json("spectrum");
    j["branch"] = to_json(b);
    nlohmann::json peaks = nlohmann::json::array();
    for (const auto& pk : spec.peaks) peaks.push_back(to_json(pk));
    j["peaks"] = peaks;
    nlohmann::json peaks_o = nlohmann::json::array();
    for (const auto& pk : spec.peaks_oracle) peaks_o.push_back(to_json(pk));
    j["peaks_oracle"] = peaks_o;
    const auto t = effective_temperature_result(ctx.rc.params, b, ctx.spec.convention);
    j["temperature"] = to_json(t);
    write_text_file(ctx.path("spectrum_summary.json"), j.dump(2) + "\n");
}

int cmd_temperature(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    const auto& b = select_branch(branches, ctx.spec.branch);
    const auto t = effective_temperature_result(ctx.rc.params, b, ctx.spec.convention);
    nlohmann::json j = ctx.base_json("temperature");
    j["branch"] = to_json(b);
    j["temperature"] = to_json(t);
    write_text_file(ctx.path("temperature.json"), j.dump(2) + "\n");
    if (!t.converged) {
        std::cerr << "temperature: omega_max doubling stalled at "
                  << fmt17(t.omega_max) << " (T " << fmt17(t.t_eff_prev) << " -> "
                  << fmt17(t.t_eff) << ", rel " << fmt17(t.rel_change) << ")\n";
        return 4;
    }
    return 0;
}

void cmd_audit(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    const auto& b = select_branch(branches, ctx.spec.branch);
    const auto rep = audit_report(ctx.rc.params, b, ctx.spec.grid, ctx.spec.convention);
    nlohmann::json j = ctx.base_json("audit");
    j["branch"] = to_json(b);
    j["audit"] = to_json(rep);
    write_text_file(ctx.path("audit.json"), j.dump(2) + "\n");
}

void cmd_sde(const OutputContext& ctx) {
    const auto branches = solve_branches(ctx.rc.params);
    const auto& b = select_branch(branches, ctx.spec.branch);
    SdeOptions opt;
    opt.dt = ctx.spec.sde_dt;
    opt.duration = ctx.spec.sde_duration;
    opt.n_realizations = ctx.spec.sde_realizations;
    opt.seed = ctx.spec.seed;
    opt.scheme = (ctx.spec.sde_scheme == "midpoint")
                     ? SdeOptions::Scheme::SemiImplicitMidpoint
                     : SdeOptions::Scheme::EulerMaruyama;
    const auto res = sde_simulate(ctx.rc.params, b, opt);

    HeaderLines h = ctx.header("sde");
    h.emplace_back("scheme", res.scheme_name);
    h.emplace_back("seed", std::to_string(res.seed));
    h.emplace_back("dt", fmt17(res.dt));
    h.emplace_back("segments_averaged", std::to_string(res.segments_averaged));
    write_text_file(ctx.path("sde_periodogram.csv"), sde_periodogram_csv(res, h));

    nlohmann::json j = ctx.base_json("sde");
    j["branch"] = to_json(b);
    j["scheme"] = res.scheme_name;
    j["segments_averaged"] = res.segments_averaged;
    j["q_variance_time"] = res.q_variance_time;
    j["q_variance_psd"] = res.q_variance_psd;
    j["step_halving_discrepancy"] = res.step_halving_discrepancy;
    nlohmann::json peaks = nlohmann::json::array();
    for (const auto& pk : res.peaks) peaks.push_back(to_json(pk));
    j["peaks"] = peaks;
    write_text_file(ctx.path("sde_summary.json"), j.dump(2) + "\n");

    for (int k = 0; k < ctx.spec.dump_trajectories; ++k) {
        const auto traj = sde_trajectory(ctx.rc.params, b, opt, k);
        HeaderLines th = ctx.header("sde_trajectory");
        th.emplace_back("realization", std::to_string(k));
        write_text_file(ctx.path("sde_traj_" + std::to_string(k) + ".csv"),
                        trajectory_csv(traj, th));
    }
}

struct SweepRow {
    double value = 0.0;
    int n_branches = 0;
    double n_s[3] = {NAN, NAN, NAN};
    int stable[3] = {-1, -1, -1};
    int branch_used = -1;
    double peak_separation = NAN;
    double t_eff = NAN;
    bool t_eff_converged = false;
    double max_re_eig = NAN;
    std::string error;
};

void cmd_sweep(const OutputContext& ctx) {
    const auto& sw = ctx.spec.sweep;
    if (sw.param.empty())
        throw Error(ErrorKind::InvalidConfig, "sweep requires --param");
    if (sw.count < 2)
        throw Error(ErrorKind::InvalidConfig, "sweep count must be >= 2");
    if (sw.from == sw.to)
        throw Error(ErrorKind::InvalidConfig, "sweep start and stop must differ");
    if (sw.log_scale && (sw.from <= 0.0 || sw.to <= 0.0))
        throw Error(ErrorKind::InvalidConfig, "log sweep requires positive endpoints");

    std::vector<double> values(static_cast<size_t>(sw.count));
    for (int i = 0; i < sw.count; ++i) {
        const double f = static_cast<double>(i) / (sw.count - 1);
        values[static_cast<size_t>(i)] =
            sw.log_scale ? sw.from * std::pow(sw.to / sw.from, f)
                         : sw.from + (sw.to - sw.from) * f;
    }

    std::vector<SweepRow> rows(values.size());
    std::atomic<size_t> cursor{0};
    auto evaluate = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= values.size()) break;
            SweepRow& row = rows[i];
            row.value = values[i];
            try {
                const auto rc = apply_override(ctx.rc, sw.param, values[i]);
                const auto branches = solve_branches(rc.params);
                row.n_branches = static_cast<int>(branches.size());
                for (size_t k = 0; k < branches.size() && k < 3; ++k) {
                    row.n_s[k] = branches[k].n_s;
                    row.stable[k] = branches[k].eig_stable ? 1 : 0;
                }
                const auto& b = select_branch(branches, ctx.spec.branch);
                row.branch_used = b.branch_index;
                const auto modes = numeric_modes(build_drift_matrix(rc.params, b));
                double max_re = -INFINITY;
                for (const auto& lam : modes) max_re = std::max(max_re, lam.real());
                row.max_re_eig = max_re;
                const auto spec = compute_spectrum(rc.params, b, ctx.spec.grid,
                                                   ctx.spec.convention, false);
                row.peak_separation = peak_separation(spec.peaks);
                const auto t = effective_temperature_result(rc.params, b, ctx.spec.convention);
                row.t_eff = t.t_eff;
                row.t_eff_converged = t.converged;
            } catch (const Error& e) {
                row.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, ctx.spec.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(evaluate);
    evaluate();
    for (auto& t : pool) t.join();

    HeaderLines h = ctx.header("sweep");
    h.emplace_back("param", sw.param);
    std::string csv = render_csv_header(h);
    csv += "value,n_branches,n_s_0,n_s_1,n_s_2,stable_0,stable_1,stable_2,"
           "branch_used,peak_separation,t_eff,t_eff_converged,max_re_eig,error\n";
    auto cell = [](double x) { return std::isnan(x) ? std::string("") : fmt17(x); };
    for (const auto& r : rows) {
        csv += fmt17(r.value);
        csv += ',' + std::to_string(r.n_branches);
        for (int k = 0; k < 3; ++k) csv += ',' + cell(r.n_s[k]);
        for (int k = 0; k < 3; ++k)
            csv += ',' + (r.stable[k] < 0 ? std::string("") : std::to_string(r.stable[k]));
        csv += ',' + std::to_string(r.branch_used);
        csv += ',' + cell(r.peak_separation);
        csv += ',' + cell(r.t_eff);
        csv += ',' + std::string(r.t_eff_converged ? "1" : "0");
        csv += ',' + cell(r.max_re_eig);
        csv += ',' + r.error;
        csv += '\n';
    }
    write_text_file(ctx.path("sweep.csv"), csv);

    // trend report on the NMS splitting column
    bool monotone_nonincreasing = true;
    double prev = INFINITY;
    int ok_rows = 0;
    for (const auto& r : rows) {
        if (!r.error.empty() || std::isnan(r.peak_separation)) continue;
        ++ok_rows;
        if (r.peak_separation > prev + 1e-9) monotone_nonincreasing = false;
        prev = r.peak_separation;
    }
    nlohmann::json j = ctx.base_json("sweep");
    j["param"] = sw.param;
    j["count"] = sw.count;
    j["rows_evaluated"] = ok_rows;
    j["peak_separation_monotone_nonincreasing"] = monotone_nonincreasing;
    write_text_file(ctx.path("sweep_summary.json"), j.dump(2) + "\n");
}

}  // namespace

int run(const RunSpec& spec) {
    try {
        std::filesystem::create_directories(spec.out_dir);
        const ResolvedConfig rc = resolve_config(spec);
        const OutputContext ctx{spec, rc};
        if (spec.command == "steady") cmd_steady(ctx);
        else if (spec.command == "modes") cmd_modes(ctx);
        else if (spec.command == "spectrum") cmd_spectrum(ctx);
        else if (spec.command == "temperature") return cmd_temperature(ctx);
        else if (spec.command == "audit") cmd_audit(ctx);
        else if (spec.command == "sweep") cmd_sweep(ctx);
        else if (spec.command == "sde") cmd_sde(ctx);
        else throw Error(ErrorKind::InvalidConfig, "unknown command '" + spec.command + "'");
        return 0;
    } catch (const Error& e) {
        std::cerr << "optokerr: " << e.what() << "\n";
        return e.exit_class();
    } catch (const std::exception& e) {
        std::cerr << "optokerr: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace optokerr
