#pragma once

#include "snstf/types.hpp"

namespace snstf {

struct KeyRateInputs {
    ExperimentRecord record;
    SourceParams src;
    SecurityParams sec;
    RateMode mode = RateMode::Asymptotic;
};

/// Finite-size key-length correction per pulse:
/// gamma' = (1/N) [2 log2(2/eps_cor) + 4 log2(1/(sqrt(2) eps_PA eps_hat))
///                 + 2 log2(n_t - n_vv - n_yy)]
double gamma_prime(double n_t, double n_vv, double n_yy,
                   const SecurityParams& sec, double n_total);

/// Full pipeline: decoy analysis, AOPP, key rate per pulse pair and per
/// second. Bound collapse is reported, never thrown.
KeyRateReport key_rate(const KeyRateInputs& inputs);

struct PlobComparison {
    double rate;
    double plob_bits;
    bool exceeds;
};

PlobComparison key_rate_vs_plob(const KeyRateReport& report, double total_atten_db);

struct OptimizeResult {
    SourceParams src;
    double rate = 0.0;
    bool positive = false;
};

/// Deterministic grid-then-refine coordinate search over
/// (mu_x, mu_y, p_v, p_x) maximizing the finite key rate on the analytic
/// simulator's expected record.
OptimizeResult optimize_sources(const LinkBudget& link, const SecurityParams& sec,
                                std::int64_t n_total);

} // namespace snstf
