#pragma once

#include "snstf/types.hpp"

namespace snstf {

struct CountingRates {
    // s[alice][bob], heralded fraction per intensity pair
    std::array<std::array<double, 3>, 3> s{};
};

/// S_lr = n_lr / sent_lr; the recorded sent counts take precedence over the
/// nominal N * p_l * p_r product.
CountingRates counting_rates(const ExperimentRecord& record);

struct SliceStats {
    double n_x;
    double m_x;
    double t_x;
};

/// X-basis slice statistics: the accepted fraction of uniformly distributed
/// relative phases with half-width Ds is 4*Ds/360.
SliceStats slice_statistics(const ExperimentRecord& record);

/// Lower-bounded single-photon counting rates and untagged counts from the
/// 3-intensity decoy analysis, plus the phase-flip error upper bound.
/// In finite mode the observed counts are first converted to expected-value
/// bounds with the Chernoff bound, pessimistic side per term.
DecoyBounds analyze_decoy(const ExperimentRecord& record, const SourceParams& src,
                          RateMode mode, const SecurityParams& sec);

/// Counting-rate part in isolation (rates already direction-resolved).
DecoyBounds untagged_bounds(const CountingRates& rates, const SourceParams& src,
                            const ExperimentRecord& record);

/// e1ph upper bound from already-computed pieces; clamped to [0, 0.5] with a
/// flag when clamping occurs.
double phase_error_bound(const DecoyBounds& bounds, double s_vv, double t_x,
                         const SourceParams& src, bool* clamped = nullptr);

} // namespace snstf
