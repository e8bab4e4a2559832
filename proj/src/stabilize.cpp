#include "snstf/stabilize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snstf {

double rising_edge_arrival(const PulseHistogram& h) {
    if (h.bin_width_ps <= 0.0)
        throw std::invalid_argument("rising_edge_arrival: bad bin width");
    const std::size_t n = h.counts.size();
    if (n < 4) throw std::runtime_error("rising_edge_arrival: histogram too short");

    double cmax = 0.0, cmin = h.counts[0];
    for (const double c : h.counts) {
        if (c < 0.0) throw std::invalid_argument("rising_edge_arrival: negative count");
        cmax = std::max(cmax, c);
        cmin = std::min(cmin, c);
    }
    if (cmax <= 0.0 || cmax - cmin < 0.1 * cmax)
        throw std::runtime_error("rising_edge_arrival: no edge above noise floor");

    // rough edge: first bin above half range
    const double half = cmin + 0.5 * (cmax - cmin);
    std::size_t edge = 0;
    while (edge < n && h.counts[edge] < half) ++edge;
    if (edge == 0 || edge == n)
        throw std::runtime_error("rising_edge_arrival: no rising region");

    // peak level from the plateau 20..220 ns after the edge
    const std::size_t lo = edge + static_cast<std::size_t>(20000.0 / h.bin_width_ps);
    const std::size_t hi = edge + static_cast<std::size_t>(220000.0 / h.bin_width_ps);
    double peak = 0.0;
    std::size_t np = 0;
    for (std::size_t i = lo; i < std::min(hi, n); ++i) {
        peak += h.counts[i];
        ++np;
    }
    if (np > 0) peak /= static_cast<double>(np);
    else peak = cmax;  // short histogram, fall back to the maximum
    if (peak <= cmin)
        throw std::runtime_error("rising_edge_arrival: no edge above noise floor");

    // least squares through the rising bins between 10% and 60% of peak
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = edge; i-- > 0;)
        if (h.counts[i] < 0.1 * peak) { edge = i + 1; break; }
    for (std::size_t i = edge == 0 ? 0 : edge - 1; i < n; ++i) {
        const double c = h.counts[i];
        if (c > 0.6 * peak) break;
        if (c < 0.1 * peak) continue;
        const double t = (static_cast<double>(i) + 0.5) * h.bin_width_ps;
        sx += t;
        sy += c;
        sxx += t * t;
        sxy += t * c;
        ++m;
    }
    if (m < 2) throw std::runtime_error("rising_edge_arrival: rising region too sparse");
    const double det = static_cast<double>(m) * sxx - sx * sx;
    if (det == 0.0) throw std::runtime_error("rising_edge_arrival: degenerate fit");
    const double slope = (static_cast<double>(m) * sxy - sx * sy) / det;
    const double icept = (sy - slope * sx) / static_cast<double>(m);
    if (slope <= 0.0) throw std::runtime_error("rising_edge_arrival: edge not rising");
    return (0.35 * peak - icept) / slope;
}

double pid_step(LoopState& state, double setpoint, double measurement, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("pid_step: dt must be positive");
    const double error = setpoint - measurement;
    state.integrator += error * dt;
    // keep the integral contribution alone within the output limits
    if (state.gains.ki != 0.0) {
        state.integrator = std::clamp(state.integrator, state.out_min / state.gains.ki,
                                      state.out_max / state.gains.ki);
    }
    const double deriv = state.has_last ? (error - state.last_error) / dt : 0.0;
    state.last_error = error;
    state.has_last = true;
    const double u = state.gains.kp * error + state.gains.ki * state.integrator +
                     state.gains.kd * deriv;
    return std::clamp(u, state.out_min, state.out_max);
}

PolAdjust polarization_step(LoopState& state, double rate_l1, double rate_l2) {
    if (rate_l1 < 0.0 || rate_l2 < 0.0)
        throw std::invalid_argument("polarization_step: negative rate");

    const bool l1_in_band = rate_l1 >= state.l1_band_lo && rate_l1 <= state.l1_band_hi;
    const bool l2_done = rate_l2 <= state.l2_target;

    // mode transitions first; lambda1 leaving its band always preempts
    if (!l1_in_band) {
        if (state.mode != PolMode::AdjustL1) {
            state.mode = PolMode::AdjustL1;
            state.has_objective = false;
        }
    } else if (state.mode == PolMode::AdjustL1) {
        state.mode = l2_done ? PolMode::Idle : PolMode::MinimizeL2;
        state.has_objective = false;
    } else if (state.mode == PolMode::MinimizeL2 && l2_done) {
        state.mode = PolMode::Idle;
        state.has_objective = false;
    } else if (state.mode == PolMode::Idle && !l2_done) {
        state.mode = PolMode::MinimizeL2;
        state.has_objective = false;
    }

    PolAdjust adj;
    if (state.mode == PolMode::Idle) return adj;

    if (state.mode == PolMode::AdjustL1) {
        // hill-climb the lambda1 rate toward the band center
        const double center = 0.5 * (state.l1_band_lo + state.l1_band_hi);
        const double objective = std::fabs(rate_l1 - center);
        if (state.has_objective && objective > state.last_objective)
            state.probe_sign = -state.probe_sign;
        state.last_objective = objective;
        state.has_objective = true;
        adj.paddle_l1 = state.probe_sign * state.paddle_step;
    } else {
        const double objective = rate_l2;
        if (state.has_objective && objective > state.last_objective)
            state.probe_sign = -state.probe_sign;
        state.last_objective = objective;
        state.has_objective = true;
        // smaller probe as the rate approaches the stop target
        double scale = 1.0;
        if (state.l2_target > 0.0)
            scale = std::min(1.0, (rate_l2 - state.l2_target) / state.l2_target);
        adj.paddle_l2 = state.probe_sign * state.paddle_step * std::max(scale, 0.05);
    }
    return adj;
}

double intensity_ratio_step(LoopState& state, double ratio_meas, double ratio_target,
                            double dt) {
    if (ratio_meas <= 0.0 || ratio_target <= 0.0)
        throw std::invalid_argument("intensity_ratio_step: ratios must be positive");
    // positive error (measured above target) must raise the bias, which lowers
    // transmission at quadrature, so the PID tracks log(meas/target) toward 0
    return pid_step(state, std::log(ratio_meas), std::log(ratio_target), dt);
}

double PolarizationPlant::rate_l1() const {
    const double a = theta1 - drift;
    const double c = std::cos(a);
    return r1_max * c * c;
}

double PolarizationPlant::rate_l2() const {
    const double a = theta2 - wavelength_skew * drift;
    const double s = std::sin(a);
    return r2_max * s * s;
}

void PolarizationPlant::step(const PolAdjust& adj) {
    theta1 += adj.paddle_l1;
    theta2 += adj.paddle_l2;
    drift += drift_rad_per_step;
}

double ModulatorPlant::transmission() const {
    return 0.5 * (1.0 + std::cos(M_PI * bias / v_pi));
}

} // namespace snstf
