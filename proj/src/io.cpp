#include "optokerr/io.hpp"

#include <cstdio>
#include <fstream>

namespace optokerr {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* to_string(Normalization mode) {
    return mode == Normalization::Normalized ? "normalized" : "literal";
}

const char* to_string(DeltaEtaConvention conv) {
    return conv == DeltaEtaConvention::Detuning ? "detuning" : "literal";
}

nlohmann::json params_to_config(const SystemParams& p) {
    nlohmann::json j;
    j["unit_mode"] = (p.unit_mode == UnitMode::Reduced) ? "reduced" : "si";
    j["omega_c"] = p.omega_c;
    j["omega_l"] = p.omega_l;
    j["kappa"] = p.kappa;
    j["omega_m"] = p.omega_m;
    j["gamma_m"] = p.gamma_m;
    j["mass"] = p.mass;
    j["g_m"] = p.g_m;
    j["eta"] = p.eta;
    j["eps_drive"] = p.eps_drive;
    j["temperature"] = p.temperature;
    j["hbar"] = p.hbar;
    j["k_b"] = p.k_b;
    return j;
}

nlohmann::json to_json(const SteadyState& s) {
    nlohmann::json j;
    j["branch_index"] = s.branch_index;
    j["n_s"] = s.n_s;
    j["re_a_s"] = s.a_s.real();
    j["im_a_s"] = s.a_s.imag();
    j["q_s"] = s.q_s;
    j["delta_eff"] = s.delta_eff;
    j["residual"] = s.residual;
    j["rh"] = {s.rh_verdict[0], s.rh_verdict[1], s.rh_verdict[2]};
    j["eig_stable"] = s.eig_stable;
    j["fold"] = s.fold;
    return j;
}

nlohmann::json to_json(const DerivedQuantities& d) {
    nlohmann::json j;
    j["n_s"] = d.n_s;
    j["re_a_s"] = d.a_s.real();
    j["im_a_s"] = d.a_s.imag();
    j["q_s"] = d.q_s;
    j["delta_0"] = d.delta_0;
    j["delta_eff"] = d.delta_eff;
    j["eta_p"] = d.eta_p;
    j["delta_cap_prime"] = d.delta_cap_prime;
    j["delta_prime_sq"] = d.delta_prime_sq;
    j["small_delta"] = d.small_delta;
    j["delta_dprime"] = d.delta_dprime;
    j["g_prime"] = d.g_prime;
    j["g_m_eff"] = d.g_m_eff;
    j["delta_eta_detuning"] = d.delta_eta_detuning;
    j["delta_eta_literal"] = d.delta_eta_literal;
    return j;
}

nlohmann::json to_json(const NmsReport& r) {
    nlohmann::json j;
    j["omega_plus"] = {{"re", r.omega_plus.real()}, {"im", r.omega_plus.imag()}};
    j["omega_minus"] = {{"re", r.omega_minus.real()}, {"im", r.omega_minus.imag()}};
    // the paper notes the conjugate pair -conj(w_pm)
    j["omega_plus_conj_pair"] = {{"re", -r.omega_plus.real()}, {"im", r.omega_plus.imag()}};
    j["omega_minus_conj_pair"] = {{"re", -r.omega_minus.real()}, {"im", r.omega_minus.imag()}};
    nlohmann::json eig = nlohmann::json::array();
    for (const auto& lam : r.eigenvalues)
        eig.push_back({{"re", lam.real()}, {"im", lam.imag()}});
    j["eigenvalues"] = eig;
    j["underdamped_pairs"] = r.underdamped_pairs;
    j["closed_separation"] = r.closed_separation;
    j["numeric_separation"] = r.numeric_separation;
    j["splitting_closed"] = r.splitting_closed;
    j["splitting_numeric"] = r.splitting_numeric;
    j["g_m_eff"] = r.g_m_eff;
    j["delta_eta"] = r.delta_eta;
    j["threshold"] = r.threshold;
    j["delta_eta_convention"] = to_string(r.convention);
    return j;
}

nlohmann::json to_json(const Peak& pk) {
    return {{"omega", pk.omega}, {"height", pk.height}, {"fwhm", pk.fwhm}};
}

nlohmann::json to_json(const TemperatureResult& t) {
    nlohmann::json j;
    j["t_eff"] = t.t_eff;
    j["q2_mean"] = t.q2_mean;
    j["p2_mean"] = t.p2_mean;
    j["quadrature"] = {{"omega_max", t.omega_max},
                       {"t_eff_prev", t.t_eff_prev},
                       {"error_estimate", t.rel_change},
                       {"converged", t.converged}};
    return j;
}

nlohmann::json to_json(const AuditReport& a) {
    nlohmann::json j;
    j["spectrum"] = {{"max_rel_dev", a.spectrum_max_rel_dev},
                     {"median_rel_dev", a.spectrum_median_rel_dev},
                     {"eq21_verdict", a.eq21_verdict}};
    j["chi_static"] = {{"dev_constant_2", a.chi0_dev_normalized},
                       {"dev_constant_4", a.chi0_dev_literal},
                       {"elected_constant", a.elected_constant},
                       {"eq23_verdict", a.eq23_verdict}};
    j["chi_at_omega_m"] = {{"rel_dev", a.gamma_eff_rel_dev}, {"eq24_verdict", a.eq24_verdict}};
    j["modes"] = {{"dev_detuning", a.eq25_dev_detuning},
                  {"dev_literal", a.eq25_dev_literal},
                  {"eq25_verdict", a.eq25_verdict}};
    j["stability"] = {{"rh_all_true", a.rh_all_true},
                      {"eig_stable", a.eig_stable},
                      {"rh_matches_eigen", a.rh_matches_eigen}};
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path);
    out << content;
}

std::string render_csv_header(const HeaderLines& header) {
    std::string out;
    for (const auto& [k, v] : header) {
        out += "# ";
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string spectrum_csv(const SpectrumResult& r, const HeaderLines& header,
                         double omega_scale) {
    std::string out = render_csv_header(header);
    out += "omega,omega_over_omega_m,s_q_closed,s_q_oracle,s_p,omega_eff,gamma_eff\n";
    const bool with_oracle = !r.s_q_oracle.empty();
    for (size_t i = 0; i < r.omega.size(); ++i) {
        out += fmt17(r.omega[i] * omega_scale);
        out += ',';
        out += fmt17(r.omega[i]);  // internal grid is reduced: omega_m = 1
        out += ',';
        out += fmt17(r.s_q_closed[i]);
        out += ',';
        out += with_oracle ? fmt17(r.s_q_oracle[i]) : std::string("");
        out += ',';
        out += fmt17(r.s_p[i]);
        out += ',';
        out += fmt17(r.omega_eff[i]);
        out += ',';
        out += fmt17(r.gamma_eff[i]);
        out += '\n';
    }
    return out;
}

std::string sde_periodogram_csv(const SdeResult& r, const HeaderLines& header) {
    std::string out = render_csv_header(header);
    out += "omega,psd\n";
    for (size_t i = 0; i < r.omega.size(); ++i) {
        out += fmt17(r.omega[i]);
        out += ',';
        out += fmt17(r.psd[i]);
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const SdeTrajectory& t, const HeaderLines& header) {
    std::string out = render_csv_header(header);
    out += "t,q,p,re_a,im_a\n";
    for (size_t i = 0; i < t.t.size(); ++i) {
        out += fmt17(t.t[i]);
        out += ',';
        out += fmt17(t.q[i]);
        out += ',';
        out += fmt17(t.p[i]);
        out += ',';
        out += fmt17(t.re_a[i]);
        out += ',';
        out += fmt17(t.im_a[i]);
        out += '\n';
    }
    return out;
}

}  // namespace optokerr
