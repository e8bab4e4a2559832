#include "snstf/keyrate.hpp"

#include "snstf/aopp.hpp"
#include "snstf/decoy.hpp"
#include "snstf/math.hpp"
#include "snstf/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snstf {

double gamma_prime(double n_t, double n_vv, double n_yy,
                   const SecurityParams& sec, double n_total) {
    sec.validate();
    if (n_total <= 0.0) throw std::domain_error("gamma_prime: n_total must be positive");
    const double survivors = n_t - n_vv - n_yy;
    if (survivors <= 1.0) throw std::domain_error("gamma_prime: no error-free key bits");
    const double bits = 2.0 * std::log2(2.0 / sec.eps_cor) +
                        4.0 * std::log2(1.0 / (std::sqrt(2.0) * sec.eps_pa * sec.eps_hat)) +
                        2.0 * std::log2(survivors);
    return bits / n_total;
}

KeyRateReport key_rate(const KeyRateInputs& inputs) {
    inputs.record.validate();
    inputs.src.validate();
    inputs.sec.validate();

    // the record's sent marginals must describe the same source settings
    double total = 0.0;
    double alice[3] = {}, bob[3] = {};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double s = static_cast<double>(inputs.record.sent[a][b]);
            total += s;
            alice[a] += s;
            bob[b] += s;
        }
    }
    if (total > 0.0) {
        for (int i = 0; i < 3; ++i) {
            const double p = inputs.src.prob(i);
            if (p <= 0.0) continue;
            if (std::fabs(alice[i] / total / p - 1.0) > 5e-3 ||
                std::fabs(bob[i] / total / p - 1.0) > 5e-3)
                throw std::invalid_argument(
                    "key_rate: record sent counts inconsistent with source probabilities");
        }
    }

    KeyRateReport rep;
    rep.mode = inputs.mode;

    const auto rates = counting_rates(inputs.record);
    rep.counting_rate = rates.s;
    rep.decoy = analyze_decoy(inputs.record, inputs.src, inputs.mode, inputs.sec);

    const auto tally = tally_from_record(inputs.record);
    rep.n_t = tally.n_t;
    rep.e_before = tally.e_before;
    rep.n_g = tally.n_g;
    rep.n_t_after = tally.n_t_after;
    rep.e_t_after = tally.e_t_after;

    if (inputs.mode == RateMode::Asymptotic) {
        rep.aopp = aopp_asymptotic(rep.decoy, tally, rep.decoy.e1ph_ub);
        rep.gamma_prime = 0.0;
    } else {
        rep.aopp = aopp_finite(rep.decoy, tally, rep.decoy.e1ph_ub, inputs.sec);
        rep.gamma_prime = gamma_prime(
            tally.n_t, static_cast<double>(inputs.record.detected[0][0]),
            static_cast<double>(inputs.record.detected[2][2]), inputs.sec,
            static_cast<double>(inputs.record.n_total));
    }

    if (rep.aopp.collapsed || rep.aopp.n1_after <= 0.0) {
        rep.collapsed = true;
        return rep;
    }

    const double n = static_cast<double>(inputs.record.n_total);
    const double e_ph = std::clamp(rep.aopp.e1ph_after, 0.0, 1.0);
    const double e_bit = std::clamp(rep.e_t_after, 0.0, 1.0);
    rep.r_per_pulse =
        (rep.aopp.n1_after * (1.0 - binary_entropy(e_ph)) -
         inputs.sec.f * rep.n_t_after * binary_entropy(e_bit)) /
            n -
        rep.gamma_prime;
    rep.r_bps = rep.r_per_pulse * inputs.record.eff_freq_hz;
    rep.positive = rep.r_per_pulse > 0.0;
    return rep;
}

PlobComparison key_rate_vs_plob(const KeyRateReport& report, double total_atten_db) {
    if (total_atten_db < 0.0)
        throw std::domain_error("key_rate_vs_plob: negative attenuation");
    const double eta = std::pow(10.0, -total_atten_db / 10.0);
    PlobComparison cmp;
    cmp.rate = report.r_per_pulse;
    cmp.plob_bits = plob_bound(eta);
    cmp.exceeds = cmp.rate > cmp.plob_bits;
    return cmp;
}

namespace {

double rate_for(const SourceParams& src, const LinkBudget& link,
                const SecurityParams& sec, std::int64_t n_total) {
    SimConfig cfg;
    cfg.src = src;
    cfg.link = link;
    cfg.n_total = n_total;
    KeyRateInputs in;
    in.record = run_analytic(cfg);
    in.src = src;
    in.sec = sec;
    in.mode = RateMode::Finite;
    const auto rep = key_rate(in);
    return rep.collapsed ? -1.0 : rep.r_per_pulse;
}

} // namespace

OptimizeResult optimize_sources(const LinkBudget& link, const SecurityParams& sec,
                                std::int64_t n_total) {
    link.validate();
    sec.validate();
    if (n_total <= 0) throw std::invalid_argument("optimize_sources: n_total must be positive");

    // free coordinates: mu_x, mu_y, p_v, p_x; p_y is the remainder
    double x[4] = {0.08, 0.445, 0.52, 0.28};
    const double lo[4] = {0.005, 0.10, 0.20, 0.01};
    const double hi[4] = {0.30, 0.90, 0.95, 0.60};

    auto build = [](const double* v) {
        SourceParams s;
        s.mu_x = v[0];
        s.mu_y = v[1];
        s.p_v = v[2];
        s.p_x = v[3];
        s.p_y = 1.0 - s.p_v - s.p_x;
        return s;
    };
    auto feasible = [&](const double* v) {
        for (int i = 0; i < 4; ++i)
            if (v[i] < lo[i] || v[i] > hi[i]) return false;
        return v[0] < v[1] && 1.0 - v[2] - v[3] > 0.005;
    };
    auto eval = [&](const double* v) {
        if (!feasible(v)) return -2.0;
        return rate_for(build(v), link, sec, n_total);
    };

    double best = eval(x);
    const double steps[] = {0.04, 0.02, 0.01, 0.005, 0.0025};
    for (const double step : steps) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int i = 0; i < 4; ++i) {
                for (const double dir : {+1.0, -1.0}) {
                    double trial[4] = {x[0], x[1], x[2], x[3]};
                    trial[i] += dir * step;
                    const double r = eval(trial);
                    if (r > best) {
                        best = r;
                        x[i] = trial[i];
                        improved = true;
                    }
                }
            }
        }
    }

    OptimizeResult out;
    out.src = build(x);
    out.rate = std::max(best, 0.0);
    out.positive = best > 0.0;
    return out;
}

} // namespace snstf
