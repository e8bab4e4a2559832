#include "snstf/stabilize.hpp"

#include "snstf/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace snstf;

namespace {

// linear edge at 100 ns: zero floor, 10 ns rise, flat plateau
PulseHistogram ramp_histogram(double plateau, double bin_ps = 100.0) {
    PulseHistogram h;
    h.bin_width_ps = bin_ps;
    h.counts.assign(4000, 0.0);
    for (std::size_t i = 1000; i < h.counts.size(); ++i)
        h.counts[i] = std::min(plateau, (static_cast<double>(i) - 999.0) * plateau / 100.0);
    return h;
}

} // namespace

TEST_CASE("edge arrival on an ideal ramp") {
    const auto h = ramp_histogram(1000.0);
    // fitted line c = 0.1 t - 9995 crosses 35% of the 1000-count plateau
    CHECK(rising_edge_arrival(h) == doctest::Approx(103450.0).epsilon(1e-6));
}

TEST_CASE("edge arrival under shot noise") {
    Xoshiro256ss rng(21);
    const double truth = 103450.0;
    double mean = 0.0, m2 = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        auto h = ramp_histogram(10000.0);
        for (auto& c : h.counts) {
            if (c <= 0.0) continue;
            c = std::max(0.0, c + std::sqrt(c) * rng.gaussian());
        }
        const double t = rising_edge_arrival(h);
        mean += t;
        m2 += t * t;
    }
    mean /= seeds;
    const double sd = std::sqrt(m2 / seeds - mean * mean);
    CHECK(std::fabs(mean - truth) < 30.0);
    CHECK(sd <= 10.0);
}

TEST_CASE("edge arrival failure modes") {
    PulseHistogram flat;
    flat.counts.assign(1000, 50.0);
    CHECK_THROWS_AS(rising_edge_arrival(flat), std::runtime_error);

    PulseHistogram tiny;
    tiny.counts = {0.0, 1.0};
    CHECK_THROWS_AS(rising_edge_arrival(tiny), std::runtime_error);

    PulseHistogram bad;
    bad.counts.assign(1000, 0.0);
    bad.bin_width_ps = 0.0;
    CHECK_THROWS_AS(rising_edge_arrival(bad), std::invalid_argument);

    PulseHistogram neg;
    neg.counts.assign(1000, 0.0);
    neg.counts[5] = -1.0;
    CHECK_THROWS_AS(rising_edge_arrival(neg), std::invalid_argument);
}

TEST_CASE("pid basics") {
    LoopState s;
    s.gains = {0.5, 0.0, 0.0};
    CHECK(pid_step(s, 10.0, 4.0, 1.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(pid_step(s, 0.0, 0.0, 0.0), std::invalid_argument);

    LoopState lim;
    lim.gains = {100.0, 0.0, 0.0};
    lim.out_min = -1.0;
    lim.out_max = 1.0;
    CHECK(pid_step(lim, 10.0, 0.0, 1.0) == 1.0);
    CHECK(pid_step(lim, -10.0, 0.0, 1.0) == -1.0);
}

TEST_CASE("delay loop tracks a drifting plant") {
    DelayPlant plant;
    plant.drift_ps_per_step = 5.0;
    LoopState s;
    s.gains = {0.5, 0.2, 0.0};

    double worst_tail = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double u = pid_step(s, 0.0, plant.measure(), 1.0);
        plant.step(-u);  // positive output means the delay line must shorten
        if (k >= 350) worst_tail = std::max(worst_tail, std::fabs(plant.measure()));
    }
    CHECK(worst_tail <= 20.0);
}

TEST_CASE("polarization state machine transitions") {
    LoopState s;
    s.paddle_step = 0.02;
    s.l2_target = 500.0;

    // in band and already below target: settle to idle, no adjustment
    auto adj = polarization_step(s, 150e3, 100.0);
    CHECK(s.mode == PolMode::Idle);
    CHECK(adj.paddle_l1 == 0.0);
    CHECK(adj.paddle_l2 == 0.0);

    // leakage grows back: resume minimizing
    adj = polarization_step(s, 150e3, 5000.0);
    CHECK(s.mode == PolMode::MinimizeL2);
    CHECK(adj.paddle_l2 != 0.0);
    CHECK(adj.paddle_l1 == 0.0);

    // lambda1 falls out of band: preempts everything
    adj = polarization_step(s, 10e3, 5000.0);
    CHECK(s.mode == PolMode::AdjustL1);
    CHECK(adj.paddle_l1 != 0.0);
    CHECK(adj.paddle_l2 == 0.0);

    CHECK_THROWS_AS(polarization_step(s, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("polarization loop holds a drifting plant") {
    PolarizationPlant plant;
    plant.drift_rad_per_step = 0.001;
    plant.theta1 = 1.2;  // start badly aligned
    plant.theta2 = 1.0;

    LoopState s;
    s.paddle_step = 0.02;
    s.l2_target = 0.01 * plant.r2_max;

    int in_band = 0, low_leak = 0;
    const int total = 2000, warmup = 1000;
    for (int k = 0; k < total; ++k) {
        const auto adj = polarization_step(s, plant.rate_l1(), plant.rate_l2());
        plant.step(adj);
        if (k < warmup) continue;
        if (plant.rate_l1() >= s.l1_band_lo && plant.rate_l1() <= s.l1_band_hi)
            ++in_band;
        if (plant.rate_l2() <= 3.0 * s.l2_target) ++low_leak;
    }
    CHECK(in_band >= static_cast<int>(0.90 * (total - warmup)));
    CHECK(low_leak >= static_cast<int>(0.90 * (total - warmup)));
}

TEST_CASE("intensity ratio control") {
    SUBCASE("sign convention") {
        LoopState s;
        s.gains = {1.0, 0.0, 0.0};
        CHECK(intensity_ratio_step(s, 1.1, 1.0) > 0.0);
        LoopState s2;
        s2.gains = {1.0, 0.0, 0.0};
        CHECK(intensity_ratio_step(s2, 0.9, 1.0) < 0.0);
        LoopState s3;
        s3.gains = {1.0, 0.0, 0.0};
        CHECK(intensity_ratio_step(s3, 1.0, 1.0) == 0.0);
        CHECK_THROWS_AS(intensity_ratio_step(s3, 0.0, 1.0), std::invalid_argument);
    }
    SUBCASE("holds the ratio against bias drift") {
        ModulatorPlant plant;
        plant.drift_v_per_step = 0.002;
        LoopState s;
        s.gains = {1.0, 0.2, 0.0};

        double worst_tail = 0.0;
        for (int k = 0; k < 600; ++k) {
            const double u = intensity_ratio_step(s, plant.ratio(), 1.0);
            plant.step(u);
            if (k >= 500)
                worst_tail = std::max(worst_tail, std::fabs(plant.ratio() - 1.0));
        }
        CHECK(worst_tail <= 0.005);
    }
}
