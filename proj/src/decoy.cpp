#include "snstf/decoy.hpp"

#include "snstf/math.hpp"

#include <cmath>
#include <stdexcept>

namespace snstf {

CountingRates counting_rates(const ExperimentRecord& record) {
    CountingRates out;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (record.sent[a][b] == 0) {
                if (record.detected[a][b] > 0)
                    throw std::domain_error("counting_rates: detections with zero sent count");
                out.s[a][b] = 0.0;
                continue;
            }
            out.s[a][b] = static_cast<double>(record.detected[a][b]) /
                          static_cast<double>(record.sent[a][b]);
        }
    }
    return out;
}

SliceStats slice_statistics(const ExperimentRecord& record) {
    const double n_x =
        static_cast<double>(record.sent[1][1]) * (4.0 * record.ds_deg / 360.0);
    if (n_x <= 0.0) throw std::domain_error("slice_statistics: empty slice");
    const double m_x =
        static_cast<double>(record.detected_11_ds - record.correct_11_ds);
    return {n_x, m_x, m_x / n_x};
}

namespace {

double s_single_lb(double s_vmu_x, double s_vmu_y, double s_vv,
                   const SourceParams& src, bool* floored) {
    const double mx = src.mu_x, my = src.mu_y;
    if (my == mx) throw std::domain_error("untagged_bounds: degenerate sources");
    const double num = my * my * std::exp(mx) * s_vmu_x -
                       mx * mx * std::exp(my) * s_vmu_y -
                       (my * my - mx * mx) * s_vv;
    const double val = num / (my * mx * (my - mx));
    if (val < 0.0) {
        if (floored) *floored = true;
        return 0.0;
    }
    return val;
}

} // namespace

DecoyBounds untagged_bounds(const CountingRates& rates, const SourceParams& src,
                            const ExperimentRecord& record) {
    DecoyBounds out;
    // s01: Bob's pulse is the untagged photon (v on Alice's side)
    out.s01_lb = s_single_lb(rates.s[0][1], rates.s[0][2], rates.s[0][0], src,
                             &out.floored);
    out.s10_lb = s_single_lb(rates.s[1][0], rates.s[2][0], rates.s[0][0], src,
                             &out.floored);
    out.s1_lb = 0.5 * (out.s01_lb + out.s10_lb);
    // count conversion uses the nominal pair probabilities N p_v p_y, not the
    // realized sent counts; the published untagged counts follow this form
    const double pairs = static_cast<double>(record.n_total) * src.p_v * src.p_y;
    const double tag = src.mu_y * std::exp(-src.mu_y);
    out.n10_lb = pairs * tag * out.s10_lb;
    out.n01_lb = pairs * tag * out.s01_lb;
    return out;
}

double phase_error_bound(const DecoyBounds& bounds, double s_vv, double t_x,
                         const SourceParams& src, bool* clamped) {
    if (bounds.s1_lb <= 0.0)
        throw std::domain_error("phase_error_bound: s1 lower bound is zero");
    const double att = std::exp(-2.0 * src.mu_x);
    double e1 = (t_x - att * s_vv / 2.0) / (2.0 * src.mu_x * att * bounds.s1_lb);
    bool clip = false;
    if (e1 < 0.0) { e1 = 0.0; clip = true; }
    if (e1 > 0.5) { e1 = 0.5; clip = true; }
    if (clamped) *clamped = clip;
    return e1;
}

DecoyBounds analyze_decoy(const ExperimentRecord& record, const SourceParams& src,
                          RateMode mode, const SecurityParams& sec) {
    src.validate();
    const CountingRates observed = counting_rates(record);
    const SliceStats slice = slice_statistics(record);

    CountingRates rates = observed;
    double s_vv_for_e1 = observed.s[0][0];
    double t_x = slice.t_x;

    if (mode == RateMode::Finite) {
        // Expected-value bounds per term: lower for added terms, upper for
        // subtracted ones. S_vv takes the upper side in the yield bounds and
        // the lower side in the e1ph numerator.
        auto lower = [&](int a, int b) {
            return chernoff_expected_bounds(
                       static_cast<double>(record.detected[a][b]), sec.eps)
                       .lower /
                   static_cast<double>(record.sent[a][b]);
        };
        auto upper = [&](int a, int b) {
            return chernoff_expected_bounds(
                       static_cast<double>(record.detected[a][b]), sec.eps)
                       .upper /
                   static_cast<double>(record.sent[a][b]);
        };
        rates.s[0][1] = lower(0, 1);
        rates.s[1][0] = lower(1, 0);
        rates.s[0][2] = upper(0, 2);
        rates.s[2][0] = upper(2, 0);
        rates.s[0][0] = upper(0, 0);
        s_vv_for_e1 = lower(0, 0);
        t_x = chernoff_expected_bounds(slice.m_x, sec.eps).upper / slice.n_x;
    }

    DecoyBounds out = untagged_bounds(rates, src, record);
    out.t_x = t_x;
    out.n_x = slice.n_x;
    out.m_x = slice.m_x;
    out.e1ph_ub =
        phase_error_bound(out, s_vv_for_e1, t_x, src, &out.e1ph_clamped);
    return out;
}

} // namespace snstf
