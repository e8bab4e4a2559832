#include "snstf/phasedemo.hpp"

#include "snstf/phasecomp.hpp"
#include "snstf/rng.hpp"

#include <cmath>

namespace snstf {

namespace {

constexpr double kWindowS = 40e-6;
constexpr double kSegmentS = 0.5;

double sq_cos_half_deg(double deg) {
    const double c = std::cos(0.5 * deg * M_PI / 180.0);
    return c * c;
}

// Knuth sampler; means here are tens of counts at most
std::int64_t poisson(Xoshiro256ss& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > limit);
    return k - 1;
}

} // namespace

PhaseDemoResult run_phase_demo(const DriftConfig& cfg) {
    cfg.validate();
    Xoshiro256ss rng(cfg.seed);
    const double ratio = cfg.lambda2_nm / cfg.lambda1_nm;
    const bool noiseless = cfg.noise_sigma_deg == 0.0;
    static const double kTheta[4] = {0.0, 90.0, 180.0, 270.0};

    // true phases and per-window strong-reference estimates
    std::vector<double> phi_r_true(cfg.n_windows), phi_s_true(cfg.n_windows);
    std::vector<double> est_wrapped(cfg.n_windows);
    for (int w = 0; w < cfg.n_windows; ++w) {
        phi_r_true[w] = cfg.drift_deg_per_window * w;
        phi_s_true[w] = phi_r_true[w] * ratio + cfg.offset_deg;

        ReferenceWindow win;
        for (int i = 0; i < 4; ++i) {
            const double jitter =
                noiseless ? 0.0 : cfg.noise_sigma_deg * rng.gaussian();
            const double mean = 0.25 * cfg.ref_counts_per_window *
                                2.0 * sq_cos_half_deg(kTheta[i] + phi_r_true[w] + jitter);
            win.counts[i] = noiseless ? std::llround(1e6 * mean) : poisson(rng, mean);
        }
        std::int64_t total = win.counts[0] + win.counts[1] + win.counts[2] + win.counts[3];
        if (total == 0) win.counts[0] = 1;  // empty window, hold near zero
        est_wrapped[w] = estimate_window_phase(win);
    }
    const std::vector<double> phi_r_est = unwrap(est_wrapped);

    // per-segment offset fit on dim-reference detections
    const int windows_per_seg =
        std::max(1, static_cast<int>(std::llround(kSegmentS / kWindowS)));
    PhaseDemoResult out;
    std::vector<double> phi_s_fine(cfg.n_windows);
    for (int seg_lo = 0; seg_lo < cfg.n_windows; seg_lo += windows_per_seg) {
        const int seg_hi = std::min(cfg.n_windows, seg_lo + windows_per_seg);
        const double seg_span_s = (seg_hi - seg_lo) * kWindowS;
        std::int64_t n_det =
            noiseless ? std::llround(cfg.dim_rate_hz * seg_span_s)
                      : poisson(rng, cfg.dim_rate_hz * seg_span_s);
        n_det = std::max<std::int64_t>(n_det, 8);

        std::vector<DimDetection> dets;
        dets.reserve(static_cast<std::size_t>(n_det));
        for (std::int64_t i = 0; i < n_det; ++i) {
            const int w = seg_lo + static_cast<int>(rng.below(
                              static_cast<std::uint64_t>(seg_hi - seg_lo)));
            DimDetection d;
            d.dtheta_deg = kTheta[rng.below(4)];
            d.scaled_deg = phi_r_est[w] * ratio;
            const double jitter =
                noiseless ? 0.0 : cfg.noise_sigma_deg * rng.gaussian();
            const double p1 =
                sq_cos_half_deg(d.dtheta_deg + phi_s_true[w] + jitter);
            d.detector = rng.bernoulli(p1) ? 1 : 2;
            dets.push_back(d);
        }
        const double offset = estimate_offset(dets);
        out.offsets_deg.push_back(offset);
        for (int w = seg_lo; w < seg_hi; ++w)
            phi_s_fine[w] = phi_r_est[w] * ratio + offset;
    }

    // the simple scheme reuses the first fitted offset without scaling
    const double offset0 = out.offsets_deg.front();
    std::vector<double> phi_s_simple(cfg.n_windows), free_phase(cfg.n_windows);
    for (int w = 0; w < cfg.n_windows; ++w) {
        phi_s_simple[w] = phi_r_est[w] + offset0;
        free_phase[w] = phi_s_true[w] - phi_s_true[0];
        out.t_s.push_back(w * kWindowS);
        out.free_resid_deg.push_back(free_phase[w]);
        out.simple_resid_deg.push_back(phi_s_simple[w] - phi_s_true[w]);
        out.fine_resid_deg.push_back(phi_s_fine[w] - phi_s_true[w]);
    }

    const auto fine = residual_stats(phi_s_fine, phi_s_true, free_phase);
    const auto simple = residual_stats(phi_s_simple, phi_s_true);
    out.std_fine = fine.std_deg;
    out.std_simple = simple.std_deg;
    {
        double mean = 0.0;
        for (const double p : free_phase) mean += p;
        mean /= static_cast<double>(free_phase.size());
        double var = 0.0;
        for (const double p : free_phase) var += (p - mean) * (p - mean);
        out.std_free = std::sqrt(var / static_cast<double>(free_phase.size()));
    }
    out.reduction = fine.reduction;
    return out;
}

} // namespace snstf
