#include "snstf/simulate.hpp"

#include "snstf/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snstf {

void SimConfig::validate() const {
    src.validate();
    link.validate();
    if (n_total <= 0) throw std::invalid_argument("SimConfig: n_total must be positive");
    if (phase_noise_sigma_deg < 0.0)
        throw std::invalid_argument("SimConfig: negative phase noise sigma");
    if (ds_deg <= 0.0 || ds_deg >= 90.0)
        throw std::invalid_argument("SimConfig: ds_deg outside (0,90)");
}

ClickProbs click_probabilities(double mu_a, double mu_b, double delta,
                               const LinkBudget& link) {
    if (mu_a < 0.0 || mu_b < 0.0)
        throw std::domain_error("click_probabilities: negative intensity");
    const double a = std::pow(10.0, -link.atten_ac_db / 10.0) * mu_a;
    const double b = std::pow(10.0, -link.atten_bc_db / 10.0) * mu_b;
    const double cross = 2.0 * std::sqrt(a * b) * std::cos(delta);
    const double n1 = 0.5 * (a + b + cross) * link.det_eff_1 * link.window_eff;
    const double n2 = 0.5 * (a + b - cross) * link.det_eff_2 * link.window_eff;
    const double pd1 = link.dark_rate_1 / link.eff_freq_hz;
    const double pd2 = link.dark_rate_2 / link.eff_freq_hz;
    return {1.0 - (1.0 - pd1) * std::exp(-n1), 1.0 - (1.0 - pd2) * std::exp(-n2)};
}

namespace {

double heralded(const ClickProbs& p) {
    return p.p_det1 * (1.0 - p.p_det2) + p.p_det2 * (1.0 - p.p_det1);
}

// discrete Gaussian weights for the residual phase spread, +-4 sigma
struct PhaseSpread {
    std::vector<double> phi;
    std::vector<double> w;
    explicit PhaseSpread(double sigma_rad) {
        if (sigma_rad <= 0.0) {
            phi = {0.0};
            w = {1.0};
            return;
        }
        const int n = 33;
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = -4.0 + 8.0 * (i + 0.5) / n;
            phi.push_back(x * sigma_rad);
            const double wi = std::exp(-0.5 * x * x);
            w.push_back(wi);
            wsum += wi;
        }
        for (auto& wi : w) wi /= wsum;
    }
};

} // namespace

ExperimentRecord run_analytic(const SimConfig& cfg) {
    cfg.validate();
    ExperimentRecord rec;
    rec.n_total = cfg.n_total;
    rec.ds_deg = cfg.ds_deg;
    rec.eff_freq_hz = cfg.link.eff_freq_hz;

    const int nodes = 720;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double mu_a = cfg.src.mu(a), mu_b = cfg.src.mu(b);
            rec.sent[a][b] = static_cast<std::int64_t>(
                static_cast<double>(cfg.n_total) * cfg.src.prob(a) * cfg.src.prob(b));
            double mean;
            if (mu_a == 0.0 || mu_b == 0.0) {
                mean = heralded(click_probabilities(mu_a, mu_b, 0.0, cfg.link));
            } else {
                mean = 0.0;
                for (int i = 0; i < nodes; ++i)
                    mean += heralded(click_probabilities(
                        mu_a, mu_b, 2.0 * M_PI * (i + 0.5) / nodes, cfg.link));
                mean /= nodes;
            }
            rec.detected[a][b] =
                static_cast<std::int64_t>(std::llround(mean * rec.sent[a][b]));
        }
    }

    // X-basis slice: integrate the accepted bands around 0 and pi, smearing
    // the interference phase by the residual spread.
    const double ds = cfg.ds_deg * M_PI / 180.0;
    const PhaseSpread spread(cfg.phase_noise_sigma_deg * M_PI / 180.0);
    const int band_nodes = 256;
    double det_rate = 0.0, cor_rate = 0.0;
    for (int band = 0; band < 2; ++band) {
        const double center = band == 0 ? 0.0 : M_PI;
        for (int i = 0; i < band_nodes; ++i) {
            const double xi = center - ds + 2.0 * ds * (i + 0.5) / band_nodes;
            double h = 0.0, c = 0.0;
            for (std::size_t k = 0; k < spread.phi.size(); ++k) {
                const auto p = click_probabilities(cfg.src.mu_x, cfg.src.mu_x,
                                                   xi + spread.phi[k], cfg.link);
                const double only1 = p.p_det1 * (1.0 - p.p_det2);
                const double only2 = p.p_det2 * (1.0 - p.p_det1);
                const double correct = band == 0 ? only1 : only2;
                const double wrong = band == 0 ? only2 : only1;
                h += spread.w[k] * (only1 + only2);
                c += spread.w[k] * ((1.0 - cfg.link.misalign) * correct +
                                    cfg.link.misalign * wrong);
            }
            det_rate += h;
            cor_rate += c;
        }
    }
    // each band spans 2*ds out of 2*pi, sampled with band_nodes points
    const double norm = 2.0 * ds / (2.0 * M_PI * band_nodes);
    rec.detected_11_ds = static_cast<std::int64_t>(
        std::llround(det_rate * norm * rec.sent[1][1]));
    rec.correct_11_ds = static_cast<std::int64_t>(
        std::llround(cor_rate * norm * rec.sent[1][1]));
    if (rec.correct_11_ds > rec.detected_11_ds)
        rec.correct_11_ds = rec.detected_11_ds;
    if (rec.detected_11_ds > rec.detected[1][1])
        rec.detected_11_ds = rec.detected[1][1];
    return rec;
}

namespace {

struct BatchCounts {
    std::int64_t sent[3][3] = {};
    std::int64_t det[3][3] = {};
    std::int64_t ds_det = 0;
    std::int64_t ds_cor = 0;
};

BatchCounts run_batch(const SimConfig& cfg, std::int64_t n_windows,
                      std::uint64_t seed) {
    BatchCounts out;
    Xoshiro256ss rng(seed);

    const double eta_a = std::pow(10.0, -cfg.link.atten_ac_db / 10.0);
    const double eta_b = std::pow(10.0, -cfg.link.atten_bc_db / 10.0);
    const double w1 = cfg.link.det_eff_1 * cfg.link.window_eff;
    const double w2 = cfg.link.det_eff_2 * cfg.link.window_eff;
    const double pd1 = cfg.link.dark_rate_1 / cfg.link.eff_freq_hz;
    const double pd2 = cfg.link.dark_rate_2 / cfg.link.eff_freq_hz;
    const double ds = cfg.ds_deg * M_PI / 180.0;
    const double sigma = cfg.phase_noise_sigma_deg * M_PI / 180.0;
    const double cum_v[2] = {cfg.src.p_v, cfg.src.p_v + cfg.src.p_x};

    auto pick = [&]() {
        const double u = rng.uniform();
        return u < cum_v[0] ? 0 : (u < cum_v[1] ? 1 : 2);
    };

    for (std::int64_t wnd = 0; wnd < n_windows; ++wnd) {
        const int a = pick();
        const int b = pick();
        ++out.sent[a][b];
        const double A = eta_a * cfg.src.mu(a);
        const double B = eta_b * cfg.src.mu(b);

        double delta = 0.0;
        double xi = 0.0;
        bool in_slice = false;
        int band = 0;
        const bool xx = (a == 1 && b == 1);
        if (xx) {
            xi = 2.0 * M_PI * rng.uniform();
            delta = xi + (sigma > 0.0 ? sigma * rng.gaussian() : 0.0);
            // accepted when the announced relative phase sits within ds of 0 or pi
            const double d0 = std::fabs(std::remainder(xi, 2.0 * M_PI));
            const double dpi = std::fabs(std::remainder(xi - M_PI, 2.0 * M_PI));
            if (d0 <= ds) { in_slice = true; band = 0; }
            else if (dpi <= ds) { in_slice = true; band = 1; }
        } else if (A > 0.0 && B > 0.0) {
            delta = 2.0 * M_PI * rng.uniform();
        }

        double n1, n2;
        if (A > 0.0 && B > 0.0) {
            const double cross = 2.0 * std::sqrt(A * B) * std::cos(delta);
            n1 = 0.5 * (A + B + cross) * w1;
            n2 = 0.5 * (A + B - cross) * w2;
        } else {
            n1 = 0.5 * (A + B) * w1;
            n2 = 0.5 * (A + B) * w2;
        }
        const double p1 = 1.0 - (1.0 - pd1) * std::exp(-n1);
        const double p2 = 1.0 - (1.0 - pd2) * std::exp(-n2);
        const bool c1 = rng.bernoulli(p1);
        const bool c2 = rng.bernoulli(p2);
        if (c1 == c2) continue;  // no click, or double click discarded

        ++out.det[a][b];
        if (xx && in_slice) {
            ++out.ds_det;
            bool correct = (band == 0) == c1;
            if (cfg.link.misalign > 0.0 && rng.bernoulli(cfg.link.misalign))
                correct = !correct;
            if (correct) ++out.ds_cor;
        }
    }
    return out;
}

ExperimentRecord assemble(const SimConfig& cfg, const std::vector<BatchCounts>& parts) {
    ExperimentRecord rec;
    rec.n_total = cfg.n_total;
    rec.ds_deg = cfg.ds_deg;
    rec.eff_freq_hz = cfg.link.eff_freq_hz;
    for (const auto& p : parts) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                rec.sent[a][b] += p.sent[a][b];
                rec.detected[a][b] += p.det[a][b];
            }
        }
        rec.detected_11_ds += p.ds_det;
        rec.correct_11_ds += p.ds_cor;
    }
    return rec;
}

} // namespace

ExperimentRecord run_monte_carlo(const SimConfig& cfg, std::int64_t batch) {
    cfg.validate();
    if (batch <= 0 || batch > cfg.n_total)
        throw std::invalid_argument("run_monte_carlo: bad batch size");
    const std::int64_t n_batches = (cfg.n_total + batch - 1) / batch;
    std::vector<BatchCounts> parts(n_batches);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t k = 0; k < n_batches; ++k) {
        const std::int64_t lo = k * batch;
        const std::int64_t n = std::min(batch, cfg.n_total - lo);
        parts[k] = run_batch(cfg, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    }
    return assemble(cfg, parts);
}

ExperimentRecord run_monte_carlo_serial(const SimConfig& cfg, std::int64_t batch) {
    cfg.validate();
    if (batch <= 0 || batch > cfg.n_total)
        throw std::invalid_argument("run_monte_carlo_serial: bad batch size");
    const std::int64_t n_batches = (cfg.n_total + batch - 1) / batch;
    std::vector<BatchCounts> parts(n_batches);
    for (std::int64_t k = 0; k < n_batches; ++k) {
        const std::int64_t lo = k * batch;
        const std::int64_t n = std::min(batch, cfg.n_total - lo);
        parts[k] = run_batch(cfg, n, derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    }
    return assemble(cfg, parts);
}

} // namespace snstf
