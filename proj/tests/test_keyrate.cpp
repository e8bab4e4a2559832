#include "snstf/keyrate.hpp"

#include "snstf/simulate.hpp"
#include "fixture_path.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace snstf;

namespace {

KeyRateInputs inputs_for(const RecordFile& rf, RateMode mode) {
    KeyRateInputs in;
    in.record = rf.record;
    if (rf.source) in.src = *rf.source;
    if (rf.security) in.sec = *rf.security;
    in.mode = mode;
    return in;
}

} // namespace

TEST_CASE("gamma prime hand value and scaling") {
    SecurityParams sec;
    sec.eps_cor = sec.eps_pa = sec.eps_hat = 0.5;
    // 2 log2(4) + 4 log2(2 sqrt(2)) + 2 log2(4) = 4 + 6 + 4
    CHECK(gamma_prime(6.0, 1.0, 1.0, sec, 1.0) == doctest::Approx(14.0));
    CHECK(gamma_prime(6.0, 1.0, 1.0, sec, 100.0) ==
          doctest::Approx(0.14));

    SecurityParams def;
    const double g1 = gamma_prime(1000.0, 10.0, 10.0, def, 1e12);
    const double g2 = gamma_prime(1000.0, 10.0, 10.0, def, 2e12);
    CHECK(g1 == doctest::Approx(2.0 * g2));
    // more survivors cost more bits
    CHECK(gamma_prime(2000.0, 10.0, 10.0, def, 1e12) > g1);

    CHECK_THROWS_AS(gamma_prime(2.0, 1.0, 1.0, def, 1e12), std::domain_error);
    CHECK_THROWS_AS(gamma_prime(1000.0, 0.0, 0.0, def, 0.0), std::domain_error);
}

TEST_CASE("1002 km asymptotic rate matches the published column") {
    const auto rf = load_fixture("1002km.rec");
    const auto rep = key_rate(inputs_for(rf, RateMode::Asymptotic));
    CHECK_FALSE(rep.collapsed);
    CHECK(rep.positive);
    CHECK(rep.aopp.n1_after == doctest::Approx(3853.0).epsilon(0.01));
    CHECK(std::fabs(rep.aopp.e1ph_after - 0.0551) < 0.001);
    CHECK(rep.r_per_pulse == doctest::Approx(9.53e-12).epsilon(0.02));
    CHECK(rep.r_bps == doctest::Approx(0.0034).epsilon(0.02));
    CHECK(rep.gamma_prime == 0.0);
    CHECK(rep.r_bps == doctest::Approx(rep.r_per_pulse * rf.record.eff_freq_hz));
}

TEST_CASE("finite rates at three published distances") {
    SUBCASE("952 km") {
        const auto rf = load_fixture("952km.rec");
        const auto rep = key_rate(inputs_for(rf, RateMode::Finite));
        CHECK(rep.positive);
        CHECK(rep.r_per_pulse == doctest::Approx(8.75e-12).epsilon(0.25));
    }
    SUBCASE("499 km") {
        const auto rf = load_fixture("499km.rec");
        const auto rep = key_rate(inputs_for(rf, RateMode::Finite));
        CHECK(rep.r_per_pulse == doctest::Approx(1.37e-7).epsilon(0.20));
    }
    SUBCASE("202 km high-rate parameters") {
        const auto rf = load_fixture("202km_short.rec");
        const auto rep = key_rate(inputs_for(rf, RateMode::Finite));
        CHECK(rep.r_bps == doctest::Approx(47060.0).epsilon(0.15));
    }
}

TEST_CASE("asymptotic bound dominates finite at every distance") {
    for (const char* name : {"499km.rec", "800km.rec", "952km.rec"}) {
        const auto rf = load_fixture(name);
        const auto a = key_rate(inputs_for(rf, RateMode::Asymptotic));
        const auto f = key_rate(inputs_for(rf, RateMode::Finite));
        CHECK(a.r_per_pulse >= f.r_per_pulse);
    }
}

TEST_CASE("inconsistent source probabilities are rejected") {
    const auto rf = load_fixture("952km.rec");
    auto in = inputs_for(rf, RateMode::Finite);
    in.src.p_v = 0.56;
    in.src.p_x = 0.24;
    CHECK_THROWS_AS(key_rate(in), std::invalid_argument);
}

TEST_CASE("plob comparison") {
    SUBCASE("398 km exceeds the repeaterless bound") {
        const auto rf = load_fixture("398km.rec");
        const auto rep = key_rate(inputs_for(rf, RateMode::Finite));
        const auto cmp = key_rate_vs_plob(rep, 62.0);
        CHECK(cmp.exceeds);
    }
    SUBCASE("202 km does not") {
        const auto rf = load_fixture("202km.rec");
        const auto rep = key_rate(inputs_for(rf, RateMode::Finite));
        const auto cmp = key_rate_vs_plob(rep, 31.6);
        CHECK_FALSE(cmp.exceeds);
    }
    SUBCASE("zero rate never exceeds") {
        KeyRateReport rep;
        CHECK_FALSE(key_rate_vs_plob(rep, 100.0).exceeds);
    }
    SUBCASE("negative attenuation rejected") {
        KeyRateReport rep;
        CHECK_THROWS_AS(key_rate_vs_plob(rep, -1.0), std::domain_error);
    }
}

TEST_CASE("source optimizer") {
    SecurityParams sec;
    LinkBudget link;  // lossless fibre, default detectors

    SUBCASE("lossless link yields a strongly positive rate") {
        const auto res = optimize_sources(link, sec, 100000000000LL);
        CHECK(res.positive);
        CHECK(res.rate > 1e-4);
        CHECK(res.src.mu_x < res.src.mu_y);
        CHECK(res.src.p_v + res.src.p_x + res.src.p_y ==
              doctest::Approx(1.0));
    }
    SUBCASE("never worse than the published operating point") {
        link.length_ac_km = link.length_bc_km = 101.0;
        link.atten_ac_db = link.atten_bc_db = 15.8;
        const std::int64_t n = 100000000000LL;

        SimConfig cfg;
        cfg.link = link;
        cfg.n_total = n;
        KeyRateInputs in;
        in.record = run_analytic(cfg);
        in.src = cfg.src;
        in.sec = sec;
        in.mode = RateMode::Finite;
        const double baseline = key_rate(in).r_per_pulse;

        const auto res = optimize_sources(link, sec, n);
        CHECK(res.positive);
        CHECK(res.rate >= baseline);
    }
    SUBCASE("invalid n rejected") {
        CHECK_THROWS_AS(optimize_sources(link, sec, 0), std::invalid_argument);
    }
}
