#pragma once

#include <cstdint>
#include <vector>

namespace snstf {

/// Time histogram of the strong reference pulse edge, fixed-width bins.
struct PulseHistogram {
    double bin_width_ps = 10.0;
    std::vector<double> counts;
};

/// Arrival time of the rising edge in picoseconds. The peak level is the
/// average count in [20 ns, 220 ns] after the edge; a least-squares line is
/// fitted through the bins between 10% and 60% of that level and the arrival
/// is where the line crosses 35% of the peak.
/// Throws std::runtime_error when no edge stands above the noise floor.
double rising_edge_arrival(const PulseHistogram& h);

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

enum class PolMode { AdjustL1, MinimizeL2, Idle };

struct LoopState {
    PidGains gains;
    double out_min = -1e9;
    double out_max = 1e9;
    double integrator = 0.0;
    double last_error = 0.0;
    bool has_last = false;

    // polarization state machine
    PolMode mode = PolMode::AdjustL1;
    double l1_band_lo = 75e3;
    double l1_band_hi = 300e3;
    double l2_target = 0.0;
    double paddle_step = 0.0;    // base probe amplitude
    double probe_sign = 1.0;
    double last_objective = 0.0;
    bool has_objective = false;
};

/// One PID update with a clamped integrator. Returns the control output.
double pid_step(LoopState& state, double setpoint, double measurement, double dt);

struct PolAdjust {
    double paddle_l1 = 0.0;
    double paddle_l2 = 0.0;
};

/// Alternating two-step polarization policy: drive the lambda1 count rate into
/// its band, then minimize the lambda2 rate while lambda1 stays in band; idle
/// once lambda2 is at or under target, re-entering step 1 whenever lambda1
/// leaves the band. Probe direction flips when the objective worsens and the
/// probe amplitude shrinks near the target.
PolAdjust polarization_step(LoopState& state, double rate_l1, double rate_l2);

/// PID on the log intensity ratio; positive output raises the modulator bias,
/// which lowers transmission at the quadrature point.
double intensity_ratio_step(LoopState& state, double ratio_meas, double ratio_target,
                            double dt = 1.0);

// Synthetic plants the control loops are exercised against. Swappable by
// construction; the loops only see measurements.

/// Linear delay drift, controllable offset.
struct DelayPlant {
    double drift_ps_per_step = 0.0;
    double delay_ps = 0.0;
    double control_ps = 0.0;

    double measure() const { return delay_ps - control_ps; }
    void step(double control) {
        control_ps += control;
        delay_ps += drift_ps_per_step;
    }
};

/// Two wavelengths through the same fiber paddles; slightly different
/// rotation angles, slow common drift.
struct PolarizationPlant {
    double r1_max = 400e3;   // lambda1 rate at perfect alignment, Hz
    double r2_max = 50e3;    // lambda2 leakage rate at worst alignment, Hz
    double wavelength_skew = 1.03;
    double drift_rad_per_step = 0.0;
    double drift = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;

    double rate_l1() const;
    double rate_l2() const;
    void step(const PolAdjust& adj);
};

/// Intensity modulator with a cosine bias-to-transmission curve and slow
/// bias drift; the controlled ratio is proportional to the transmission.
struct ModulatorPlant {
    double v_pi = 5.0;
    double bias = 2.5;       // quadrature
    double drift_v_per_step = 0.0;
    double ratio_scale = 2.0;

    double transmission() const;
    double ratio() const { return ratio_scale * transmission(); }
    void step(double bias_adjust) { bias += bias_adjust + drift_v_per_step; }
};

} // namespace snstf
