#include "snstf/types.hpp"

#include <cmath>
#include <string>

namespace snstf {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

void SourceParams::validate() const {
    require(mu_x > 0.0 && mu_y > mu_x, "SourceParams: need 0 < mu_x < mu_y");
    for (double p : {p_v, p_x, p_y})
        require(p >= 0.0 && p <= 1.0, "SourceParams: probability outside [0,1]");
    require(std::fabs(p_v + p_x + p_y - 1.0) <= 1e-12,
            "SourceParams: probabilities must sum to 1");
}

void SecurityParams::validate() const {
    require(f >= 1.0, "SecurityParams: f must be >= 1");
    for (double e : {eps, eps_cor, eps_pa, eps_hat})
        require(e > 0.0 && e < 1.0, "SecurityParams: eps outside (0,1)");
}

void LinkBudget::validate() const {
    require(atten_ac_db >= 0.0 && atten_bc_db >= 0.0,
            "LinkBudget: negative attenuation");
    for (double e : {det_eff_1, det_eff_2, window_eff})
        require(e >= 0.0 && e <= 1.0, "LinkBudget: efficiency outside [0,1]");
    require(dark_rate_1 >= 0.0 && dark_rate_2 >= 0.0,
            "LinkBudget: negative dark rate");
    require(eff_freq_hz > 0.0, "LinkBudget: eff_freq_hz must be positive");
    require(misalign >= 0.0 && misalign <= 0.5,
            "LinkBudget: misalign outside [0,0.5]");
}

void ExperimentRecord::validate() const {
    require(n_total > 0, "ExperimentRecord: n_total must be positive");
    std::int64_t sent_sum = 0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            require(sent[a][b] >= 0 && detected[a][b] >= 0,
                    "ExperimentRecord: negative count");
            require(detected[a][b] <= sent[a][b],
                    "ExperimentRecord: detected exceeds sent");
            sent_sum += sent[a][b];
        }
    }
    require(sent_sum <= n_total, "ExperimentRecord: sent counts exceed n_total");
    require(ds_deg > 0.0 && ds_deg < 90.0, "ExperimentRecord: ds_deg outside (0,90)");
    require(correct_11_ds <= detected_11_ds,
            "ExperimentRecord: correct_11_ds exceeds detected_11_ds");
    require(detected_11_ds <= detected[1][1],
            "ExperimentRecord: detected_11_ds exceeds detected_11");
    require(eff_freq_hz > 0.0, "ExperimentRecord: eff_freq_hz must be positive");
    if (aopp_observed) {
        require(aopp_observed->n_t_after >= 0.0 &&
                aopp_observed->e_t_after >= 0.0 && aopp_observed->e_t_after <= 1.0,
                "ExperimentRecord: bad aopp block");
    }
}

} // namespace snstf
