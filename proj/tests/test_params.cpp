#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "optokerr/params.hpp"

using namespace optokerr;
using nlohmann::json;

namespace {

json reduced_config() {
    return json{{"unit_mode", "reduced"}, {"omega_c", 1.01},  {"omega_l", 0.0},
                {"kappa", 0.1},           {"omega_m", 1.0},   {"gamma_m", 0.01},
                {"mass", 1.0},            {"g_m", 0.1},       {"eta", 0.0},
                {"eps_drive", 1.0},       {"temperature", 50.0}};
}

}  // namespace

TEST_CASE("make_params accepts the fig2 ratio set") {
    const auto p = make_params(reduced_config());
    CHECK(p.kappa == 0.1);
    CHECK(p.gamma_m == 0.01);
    CHECK(p.delta0() == 1.01);
}

TEST_CASE("make_params accepts the microtoroid ratio set") {
    json cfg = reduced_config();
    cfg["gamma_m"] = 1.3e3 / 73.5e6;
    cfg["g_m"] = 2.0 / 73.5;
    cfg["eta"] = 3.0 / 73.5;
    const auto p = make_params(cfg);
    CHECK(p.eta == doctest::Approx(0.04081632653061224).epsilon(1e-15));
}

TEST_CASE("make_params rejections") {
    json cfg = reduced_config();
    cfg["kappa"] = 0.0;
    try {
        make_params(cfg);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonPositiveRate);
    }

    cfg = reduced_config();
    cfg["eta"] = -0.1;
    try {
        make_params(cfg);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NegativeValue);
    }

    cfg = reduced_config();
    cfg["mass"] = 2.0;
    try {
        make_params(cfg);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InconsistentUnits);
    }

    cfg = reduced_config();
    cfg["omega_x"] = 1.0;
    try {
        make_params(cfg);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownKey);
        CHECK(std::string(e.what()).find("omega_x") != std::string::npos);
    }

    cfg = reduced_config();
    cfg.erase("eps_drive");
    CHECK_THROWS_AS(make_params(cfg), Error);
}

TEST_CASE("g_m from cavity length, direct entry wins") {
    json cfg = reduced_config();
    cfg.erase("g_m");
    cfg["cavity_length"] = 10.1;
    const auto p = make_params(cfg);
    CHECK(p.g_m == doctest::Approx(1.01 / 10.1).epsilon(1e-15));

    cfg["g_m"] = 0.25;
    const auto p2 = make_params(cfg);
    CHECK(p2.g_m == 0.25);
}

TEST_CASE("eta_from_susceptibility") {
    CHECK(eta_from_susceptibility(2.0, 0.0, 1.0, 1.0, 1.0) == 0.0);

    const double base = eta_from_susceptibility(2.0, 0.7, 1.0, 1.0, 1.0);
    const double halved = eta_from_susceptibility(2.0, 0.7, 1.0, 2.0, 1.0);
    CHECK(halved == doctest::Approx(0.5 * base).epsilon(1e-15));

    // 3 hbar w^2 chi / (2 eps0 Vc) = 3*1*4*(1/3) / (2*1*2) = 1
    CHECK(eta_from_susceptibility(2.0, 1.0 / 3.0, 1.0, 2.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(eta_from_susceptibility(2.0, 0.7, 1.0, 0.0, 1.0), Error);
}

TEST_CASE("thermal kernel limits and symmetry") {
    // omega -> 0 limit equals 2 k_B T / hbar, probed at omega = 1e-8
    const double kt = 0.37;
    CHECK(thermal_kernel(1e-8, kt) == doctest::Approx(2.0 * kt).epsilon(1e-10));

    CHECK(thermal_kernel(0.0, 0.0) == 0.0);
    CHECK(thermal_kernel(0.7, 0.0) == 0.7);
    CHECK(thermal_kernel(-0.7, 0.0) == 0.7);

    // coth(1) at omega = Omega_m = 1, k_B T = 0.5
    CHECK(thermal_kernel(1.0, 0.5) == doctest::Approx(1.3130352854993312).epsilon(1e-14));

    testutil::Draw draw(7);
    for (int i = 0; i < 200; ++i) {
        const double w = draw.uniform(1e-9, 30.0);
        const double t = draw.uniform(0.01, 100.0);
        CHECK(thermal_kernel(-w, t) == thermal_kernel(w, t));
        CHECK(thermal_kernel(w, t) >= 0.0);
    }

    // continuity across the series/direct switch at |x| = 1e-6
    const double t = 1.0;
    const double wa = 2.0 * t * (1e-6 * (1.0 - 1e-9));
    const double wb = 2.0 * t * (1e-6 * (1.0 + 1e-9));
    CHECK(thermal_kernel(wa, t) == doctest::Approx(thermal_kernel(wb, t)).epsilon(1e-12));
}

TEST_CASE("derived quantities identities") {
    SUBCASE("printed example at Delta = 1, eta' = 0.04") {
        const auto p = testutil::pinned(0.1, 0.04, 1.0);
        const auto b = testutil::branch_near(p, 1.0);
        const auto d = derive_quantities(p, b);
        CHECK(d.eta_p == doctest::Approx(0.04).epsilon(1e-12));
        CHECK(d.delta_cap_prime == doctest::Approx(1.16).epsilon(1e-12));
        CHECK(d.small_delta == doctest::Approx(1.08).epsilon(1e-12));
        CHECK(d.delta_dprime == doctest::Approx(1.12).epsilon(1e-12));
        CHECK(d.delta_prime_sq == doctest::Approx(1.3392).epsilon(1e-12));
    }

    SUBCASE("Kerr-off degeneracy") {
        const auto p = testutil::pinned(0.1, 0.0, 0.83);
        const auto b = testutil::branch_near(p, 1.0);
        const auto d = derive_quantities(p, b);
        CHECK(d.delta_cap_prime == d.delta_eff);
        CHECK(d.small_delta == d.delta_eff);
        CHECK(d.delta_dprime == d.delta_eff);
        CHECK(d.delta_prime_sq == doctest::Approx(d.delta_eff * d.delta_eff).epsilon(1e-14));
    }

    SUBCASE("g' = g_m sqrt(n_s)") {
        SystemParams p;
        p.unit_mode = UnitMode::Reduced;
        p.kappa = 0.1;
        p.g_m = 0.05;
        const auto d = derive_quantities(p, 4.0, std::complex<double>(2.0, 0.0));
        CHECK(d.g_prime == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(d.g_m_eff == doctest::Approx(0.2).epsilon(1e-14));
    }

    SUBCASE("random draws") {
        testutil::Draw draw(11);
        for (int i = 0; i < 1000; ++i) {
            const auto p = testutil::pinned(draw.uniform(0.0, 0.3), draw.uniform(0.0, 0.1),
                                            draw.uniform(-2.0, 2.0), draw.uniform(0.02, 1.0),
                                            draw.uniform(0.0, 0.1), draw.uniform(0.0, 100.0),
                                            draw.uniform(0.1, 10.0));
            const auto branches = solve_branches(p);
            for (const auto& b : branches) {
                const auto d = derive_quantities(p, b);
                CHECK(d.eta_p >= 0.0);
                CHECK(d.g_prime >= 0.0);
                CHECK(d.g_m_eff >= 0.0);
                CHECK(d.delta_prime_sq ==
                      doctest::Approx(d.delta_cap_prime * d.delta_cap_prime -
                                      4.0 * d.eta_p * d.eta_p)
                          .epsilon(1e-12));
                CHECK(d.small_delta ==
                      doctest::Approx(d.delta_eff + 2.0 * d.eta_p).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("SI round trip reproduces every field to 1e-12 relative") {
    SystemParams si;
    si.unit_mode = UnitMode::SI;
    si.omega_m = 2.0 * M_PI * 73.5e6;
    si.omega_c = 2.0 * M_PI * 2.82e14;
    si.omega_l = si.omega_c - 1.0002 * si.omega_m;
    si.kappa = 0.1 * si.omega_m;
    si.gamma_m = 2.0 * M_PI * 1.3e3;
    si.mass = 1.0e-11;
    si.g_m = 8.3e22;
    si.eta = 2.0 * M_PI * 3.0e6;
    si.eps_drive = 0.5 * si.omega_m;
    si.temperature = 3.5;
    si.hbar = kHbarSI;
    si.k_b = kBoltzmannSI;

    UnitScales scales;
    const auto red = to_reduced(si, &scales);
    CHECK(red.omega_m == 1.0);
    CHECK(red.mass == 1.0);
    CHECK(red.hbar == 1.0);
    CHECK(red.kappa == doctest::Approx(0.1).epsilon(1e-14));

    const auto back = to_si(red, scales);
    CHECK(back.omega_c == doctest::Approx(si.omega_c).epsilon(1e-12));
    CHECK(back.omega_l == doctest::Approx(si.omega_l).epsilon(1e-12));
    CHECK(back.kappa == doctest::Approx(si.kappa).epsilon(1e-12));
    CHECK(back.omega_m == doctest::Approx(si.omega_m).epsilon(1e-12));
    CHECK(back.gamma_m == doctest::Approx(si.gamma_m).epsilon(1e-12));
    CHECK(back.mass == doctest::Approx(si.mass).epsilon(1e-12));
    CHECK(back.g_m == doctest::Approx(si.g_m).epsilon(1e-12));
    CHECK(back.eta == doctest::Approx(si.eta).epsilon(1e-12));
    CHECK(back.eps_drive == doctest::Approx(si.eps_drive).epsilon(1e-12));
    CHECK(back.temperature == doctest::Approx(si.temperature).epsilon(1e-12));
}

TEST_CASE("derived-pinned materialization hits its targets") {
    testutil::Draw draw(13);
    for (int i = 0; i < 50; ++i) {
        PinnedTargets t;
        t.g_prime = draw.uniform(0.0, 0.3);
        t.eta_prime = draw.uniform(0.0, 0.08);
        t.delta_eff = draw.uniform(0.2, 1.5);
        t.kappa = draw.uniform(0.05, 0.5);
        t.gamma_m = draw.uniform(1e-4, 0.05);
        t.n_s = draw.uniform(0.2, 5.0);
        const auto p = materialize_pinned(t);
        const auto b = testutil::branch_near(p, t.n_s);
        CHECK(std::abs(b.n_s - t.n_s) < 1e-8 * std::max(1.0, t.n_s));
        const auto d = derive_quantities(p, b);
        CHECK(d.g_prime == doctest::Approx(t.g_prime).epsilon(1e-9));
        CHECK(d.eta_p == doctest::Approx(t.eta_prime).epsilon(1e-9));
        CHECK(d.delta_eff == doctest::Approx(t.delta_eff).epsilon(1e-9));
    }
}
