#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace snstf {

/// One 40 us statistic window of strong-reference detections, one counter per
/// modulated phase difference {0, 90, 180, 270} degrees.
struct ReferenceWindow {
    std::array<std::int64_t, 4> counts{};
};

/// Grid argmin (1 degree steps, 0..359, ties to the smallest angle) of
///   Err(dphi) = sum_i p_i (1 - cos^2((dtheta_i + dphi)/2))^2,  p_i = 2 N_i / sum N.
/// Throws on an empty window.
double estimate_window_phase(const ReferenceWindow& w);

/// Least-step unwrapping: each consecutive step is shifted by a multiple of
/// 360 so its magnitude is below 180 degrees.
std::vector<double> unwrap(const std::vector<double>& wrapped_deg);

/// Signal-wavelength phase from the reference-wavelength estimate:
/// phi_s = phi_r * lambda2 / lambda1 + offset, elementwise.
std::vector<double> scale_to_signal(const std::vector<double>& phi_r_deg,
                                    double lambda1_nm, double lambda2_nm,
                                    double offset_deg);

/// One dim-reference detection: Alice's modulated phase difference, the scaled
/// reference-phase estimate at the detection time, and which detector clicked.
struct DimDetection {
    double dtheta_deg = 0.0;
    double scaled_deg = 0.0;
    int detector = 1;  // 1 or 2
};

/// Inter-wavelength offset for one 500 ms segment. Detections are binned by
/// the discretized total phase (1 degree bins, detector 2 shifted by 180) and
/// the same error model as estimate_window_phase is minimized over the grid.
/// Throws on an empty segment.
double estimate_offset(const std::vector<DimDetection>& segment);

struct ResidualStats {
    double std_deg = 0.0;
    double reduction = 0.0;  // std(free drift) / std(residual); 0 if unavailable
};

/// Circular standard deviation of (estimate - truth), shortest arc around the
/// circular mean. When a free-drift series is supplied, its increment spread
/// sets the reduction factor.
ResidualStats residual_stats(const std::vector<double>& phi_est_deg,
                             const std::vector<double>& phi_true_deg,
                             const std::vector<double>& free_drift_deg = {});

} // namespace snstf
