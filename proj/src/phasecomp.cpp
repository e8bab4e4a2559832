#include "snstf/phasecomp.hpp"

#include <cmath>
#include <stdexcept>

namespace snstf {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

double err_model_term(double psi_deg, double dphi_deg) {
    const double c = std::cos(0.5 * (psi_deg + dphi_deg) * kDeg2Rad);
    const double miss = 1.0 - c * c;
    return miss * miss;
}

// shared 1-degree grid argmin over weighted model terms
double grid_argmin(const std::vector<double>& psi_deg, const std::vector<double>& weight) {
    int best = 0;
    double best_err = 0.0;
    for (int dphi = 0; dphi < 360; ++dphi) {
        double err = 0.0;
        for (std::size_t i = 0; i < psi_deg.size(); ++i)
            err += weight[i] * err_model_term(psi_deg[i], static_cast<double>(dphi));
        if (dphi == 0 || err < best_err) {
            best_err = err;
            best = dphi;
        }
    }
    return static_cast<double>(best);
}

} // namespace

double estimate_window_phase(const ReferenceWindow& w) {
    std::int64_t total = 0;
    for (const auto c : w.counts) {
        if (c < 0) throw std::invalid_argument("estimate_window_phase: negative count");
        total += c;
    }
    if (total == 0) throw std::invalid_argument("estimate_window_phase: empty window");

    std::vector<double> psi = {0.0, 90.0, 180.0, 270.0};
    std::vector<double> weight(4);
    for (int i = 0; i < 4; ++i)
        weight[i] = 2.0 * static_cast<double>(w.counts[i]) / static_cast<double>(total);
    return grid_argmin(psi, weight);
}

std::vector<double> unwrap(const std::vector<double>& wrapped_deg) {
    if (wrapped_deg.empty()) throw std::invalid_argument("unwrap: empty series");
    std::vector<double> out;
    out.reserve(wrapped_deg.size());
    out.push_back(wrapped_deg.front());
    for (std::size_t i = 1; i < wrapped_deg.size(); ++i) {
        const double raw_step = wrapped_deg[i] - wrapped_deg[i - 1];
        const double step = std::remainder(raw_step, 360.0);
        out.push_back(out.back() + step);
    }
    return out;
}

std::vector<double> scale_to_signal(const std::vector<double>& phi_r_deg,
                                    double lambda1_nm, double lambda2_nm,
                                    double offset_deg) {
    if (lambda1_nm <= 0.0 || lambda2_nm <= 0.0)
        throw std::domain_error("scale_to_signal: wavelengths must be positive");
    const double ratio = lambda2_nm / lambda1_nm;
    std::vector<double> out;
    out.reserve(phi_r_deg.size());
    for (const double p : phi_r_deg) out.push_back(p * ratio + offset_deg);
    return out;
}

double estimate_offset(const std::vector<DimDetection>& segment) {
    if (segment.empty()) throw std::invalid_argument("estimate_offset: empty segment");

    std::array<double, 360> bins{};
    for (const auto& d : segment) {
        if (d.detector != 1 && d.detector != 2)
            throw std::invalid_argument("estimate_offset: detector must be 1 or 2");
        double psi = d.dtheta_deg + d.scaled_deg;
        if (d.detector == 2) psi += 180.0;  // complementary port, opposite fringe
        int b = static_cast<int>(std::llround(psi)) % 360;
        if (b < 0) b += 360;
        bins[b] += 1.0;
    }

    std::vector<double> psi_deg, weight;
    for (int b = 0; b < 360; ++b) {
        if (bins[b] > 0.0) {
            psi_deg.push_back(static_cast<double>(b));
            weight.push_back(bins[b]);
        }
    }
    return grid_argmin(psi_deg, weight);
}

ResidualStats residual_stats(const std::vector<double>& phi_est_deg,
                             const std::vector<double>& phi_true_deg,
                             const std::vector<double>& free_drift_deg) {
    if (phi_est_deg.size() != phi_true_deg.size())
        throw std::invalid_argument("residual_stats: length mismatch");
    if (phi_est_deg.empty())
        throw std::invalid_argument("residual_stats: empty series");

    // circular mean of the residuals, then shortest-arc spread around it
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < phi_est_deg.size(); ++i) {
        const double d = (phi_est_deg[i] - phi_true_deg[i]) * kDeg2Rad;
        sx += std::cos(d);
        sy += std::sin(d);
    }
    const double mean_deg = std::atan2(sy, sx) / kDeg2Rad;
    double var = 0.0;
    for (std::size_t i = 0; i < phi_est_deg.size(); ++i) {
        const double dev =
            std::remainder(phi_est_deg[i] - phi_true_deg[i] - mean_deg, 360.0);
        var += dev * dev;
    }
    ResidualStats out;
    out.std_deg = std::sqrt(var / static_cast<double>(phi_est_deg.size()));

    if (free_drift_deg.size() >= 2) {
        double mean = 0.0;
        const std::size_t n = free_drift_deg.size();
        for (const double p : free_drift_deg) mean += p;
        mean /= static_cast<double>(n);
        double fvar = 0.0;
        for (const double p : free_drift_deg) fvar += (p - mean) * (p - mean);
        const double free_std = std::sqrt(fvar / static_cast<double>(n));
        out.reduction = out.std_deg > 0.0 ? free_std / out.std_deg
                                          : (free_std > 0.0 ? HUGE_VAL : 0.0);
    }
    return out;
}

} // namespace snstf
