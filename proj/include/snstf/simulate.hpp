#pragma once

#include "snstf/types.hpp"

#include <cstdint>

namespace snstf {

struct SimConfig {
    SourceParams src;
    LinkBudget link;
    std::int64_t n_total = 0;
    std::uint64_t seed = 1;
    double phase_noise_sigma_deg = 4.3;  // residual phase spread after compensation
    double ds_deg = 10.0;

    void validate() const;
};

struct ClickProbs {
    double p_det1;
    double p_det2;
};

/// Single-window click probabilities at Charlie's two output ports for a
/// coherent pulse pair with relative phase delta, after channel loss,
/// detector efficiency, the acceptance window and dark counts.
ClickProbs click_probabilities(double mu_a, double mu_b, double delta,
                               const LinkBudget& link);

/// Expected record: per-pair counting rates averaged over a uniform relative
/// phase (numerical quadrature), X-basis slice counts averaged additionally
/// over the Gaussian residual phase spread.
ExperimentRecord run_analytic(const SimConfig& cfg);

/// Per-window Monte-Carlo sampling, OpenMP-parallel over fixed-size batches
/// with derived per-batch seeds; bitwise reproducible for a given seed and
/// independent of thread count.
ExperimentRecord run_monte_carlo(const SimConfig& cfg, std::int64_t batch);

/// Serial reference implementation of the same sampler; identical output.
ExperimentRecord run_monte_carlo_serial(const SimConfig& cfg, std::int64_t batch);

} // namespace snstf
