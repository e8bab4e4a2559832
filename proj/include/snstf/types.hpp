#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace snstf {

// Source index convention used throughout: 0 = vacuum, 1 = decoy (mu_x),
// 2 = signal (mu_y).
enum Source : int { kVac = 0, kDecoy = 1, kSignal = 2 };

struct SourceParams {
    double mu_x = 0.08;
    double mu_y = 0.445;
    double p_v = 0.52;
    double p_x = 0.28;
    double p_y = 0.20;

    double mu(int idx) const {
        switch (idx) {
            case kVac: return 0.0;
            case kDecoy: return mu_x;
            default: return mu_y;
        }
    }
    double prob(int idx) const {
        switch (idx) {
            case kVac: return p_v;
            case kDecoy: return p_x;
            default: return p_y;
        }
    }
    void validate() const;
};

struct SecurityParams {
    double f = 1.16;        // error-correction inefficiency
    double eps = 1e-10;     // Chernoff failure probability
    double eps_cor = 1e-10;
    double eps_pa = 1e-10;
    double eps_hat = 1e-10;

    void validate() const;
};

struct LinkBudget {
    double length_ac_km = 0.0;
    double length_bc_km = 0.0;
    double atten_ac_db = 0.0;
    double atten_bc_db = 0.0;
    double det_eff_1 = 0.60;
    double det_eff_2 = 0.55;
    // Effective in-window dark rate (Hz). The raw SNSPD rate is reduced by
    // the post-processing time window before it enters the counting model.
    double dark_rate_1 = 0.003;
    double dark_rate_2 = 0.003;
    double window_eff = 0.65;
    double eff_freq_hz = 351e6;
    double misalign = 0.025;   // flat X-basis misalignment error

    void validate() const;
};

// Realized post-AOPP tallies, when the dataset carries them (the published
// result tables do). They are measured outcomes of one pairing realization
// and cannot be rederived exactly from the counts alone.
struct AoppObserved {
    double n_t_after = 0.0;
    double e_t_after = 0.0;
};

struct ExperimentRecord {
    std::int64_t n_total = 0;
    std::array<std::array<std::int64_t, 3>, 3> sent{};      // [alice][bob]
    std::array<std::array<std::int64_t, 3>, 3> detected{};
    double ds_deg = 0.0;
    std::int64_t detected_11_ds = 0;
    std::int64_t correct_11_ds = 0;
    double eff_freq_hz = 351e6;
    std::optional<AoppObserved> aopp_observed;

    void validate() const;
};

enum class RateMode { Asymptotic, Finite };

struct DecoyBounds {
    double s01_lb = 0.0;
    double s10_lb = 0.0;
    double s1_lb = 0.0;
    double n10_lb = 0.0;
    double n01_lb = 0.0;
    double e1ph_ub = 0.0;
    double t_x = 0.0;
    double n_x = 0.0;
    double m_x = 0.0;
    bool floored = false;        // a negative decoy numerator was clamped to 0
    bool e1ph_clamped = false;   // e1ph was clamped into [0, 0.5]
};

struct AoppOutcome {
    double n1_after = 0.0;
    double e1ph_after = 0.0;
    // finite-size chain intermediates
    double u = 0.0;
    double n10_under = 0.0;
    double n01_under = 0.0;
    double n1_under = 0.0;
    double n1r = 0.0;
    double n01_prime = 0.0;
    double n10_prime = 0.0;
    double n_min = 0.0;
    double r = 0.0;
    double e_tau = 0.0;
    double ms_bar = 0.0;
    bool collapsed = false;      // no extractable key at this confidence
};

struct KeyRateReport {
    RateMode mode = RateMode::Asymptotic;
    double r_per_pulse = 0.0;
    double r_bps = 0.0;
    double gamma_prime = 0.0;
    double plob_bits = 0.0;      // filled by key_rate_vs_plob
    bool positive = false;
    bool collapsed = false;
    // pipeline intermediates
    std::array<std::array<double, 3>, 3> counting_rate{};
    DecoyBounds decoy;
    AoppOutcome aopp;
    double n_t = 0.0;
    double e_before = 0.0;
    double n_g = 0.0;
    double n_t_after = 0.0;
    double e_t_after = 0.0;
};

} // namespace snstf
