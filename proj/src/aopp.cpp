#include "snstf/aopp.hpp"

#include "snstf/math.hpp"
#include "snstf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snstf {

RawKeyTally tally_from_record(const ExperimentRecord& record) {
    RawKeyTally t;
    const auto& d = record.detected;
    t.n_t = static_cast<double>(d[0][0] + d[0][2] + d[2][0] + d[2][2]);
    if (t.n_t <= 0.0) throw std::domain_error("tally_from_record: empty raw key");
    t.n_t0 = static_cast<double>(d[0][2] + d[2][2]);
    t.n_t1 = static_cast<double>(d[0][0] + d[2][0]);
    t.e_before = static_cast<double>(d[0][0] + d[2][2]) / t.n_t;
    t.n_g = std::min(t.n_t0, t.n_t1);
    t.n_odd = t.n_t0 * t.n_t1 / (t.n_t - 1.0);

    if (record.aopp_observed) {
        t.n_t_after = record.aopp_observed->n_t_after;
        t.e_t_after = record.aopp_observed->e_t_after;
    } else if (t.n_t0 > 0.0 && t.n_t1 > 0.0) {
        // Expected survivors of the maximal 1-0 pairing. A pair passes the
        // parity check when Alice's two bits are both correct or both wrong;
        // the error fractions differ between Bob's 1-pool (vv events) and
        // 0-pool (yy events).
        const double a = static_cast<double>(d[0][0]) / t.n_t1;
        const double b = static_cast<double>(d[2][2]) / t.n_t0;
        const double survive = a * b + (1.0 - a) * (1.0 - b);
        t.n_t_after = t.n_g * survive;
        t.e_t_after = survive > 0.0 ? a * b / survive : 0.0;
    }
    return t;
}

AoppOutcome aopp_asymptotic(const DecoyBounds& bounds, const RawKeyTally& tally,
                            double e1ph) {
    if (tally.n_t0 <= 0.0 || tally.n_t1 <= 0.0)
        throw std::domain_error("aopp_asymptotic: empty bit pool");
    AoppOutcome out;
    out.n1_after =
        (bounds.n10_lb / tally.n_t1) * (bounds.n01_lb / tally.n_t0) * tally.n_g;
    out.e1ph_after = 2.0 * e1ph * (1.0 - e1ph);
    return out;
}

AoppOutcome aopp_finite(const DecoyBounds& bounds, const RawKeyTally& tally,
                        double e1ph_ub, const SecurityParams& sec) {
    sec.validate();
    AoppOutcome out;
    if (tally.n_odd <= 0.0) { out.collapsed = true; return out; }
    out.u = tally.n_g / (2.0 * tally.n_odd);

    out.n10_under = chernoff_phi_lower(out.u * bounds.n10_lb, sec.eps);
    out.n01_under = chernoff_phi_lower(out.u * bounds.n01_lb, sec.eps);
    out.n1_under = out.n10_under + out.n01_under;
    if (out.n1_under <= 0.0) { out.collapsed = true; return out; }

    out.n1r = chernoff_phi_lower(
        out.n1_under * out.n1_under / (2.0 * out.u * tally.n_t), sec.eps);
    if (out.n1r <= 0.0) { out.collapsed = true; return out; }

    const double dev = std::sqrt(-std::log(sec.eps) / (2.0 * out.n1r));
    out.n01_prime = 2.0 * out.n1r * (out.n01_under / out.n1_under - dev);
    out.n10_prime = 2.0 * out.n1r * (out.n10_under / out.n1_under - dev);
    out.n_min = std::min(out.n01_prime, out.n10_prime);
    if (out.n_min <= 0.0) { out.collapsed = true; return out; }

    out.n1_after = 2.0 * chernoff_phi_lower(
        out.n_min * (1.0 - out.n_min / (2.0 * out.n1r)), sec.eps);
    if (out.n1_after <= 0.0) { out.collapsed = true; return out; }

    const double denom = out.n1_under - 2.0 * out.n1r;
    if (denom <= 0.0) { out.collapsed = true; return out; }
    out.r = out.n1_under / denom * std::log(3.0 * denom * denom / sec.eps);
    if (2.0 * out.n1r - out.r <= 0.0) { out.collapsed = true; return out; }

    out.e_tau = chernoff_phi_upper(2.0 * out.n1r * e1ph_ub, sec.eps) /
                (2.0 * out.n1r - out.r);
    out.e_tau = std::min(out.e_tau, 1.0);
    out.ms_bar = chernoff_phi_upper(
                     std::max(0.0, (out.n1r - out.r) * out.e_tau * (1.0 - out.e_tau)),
                     sec.eps) +
                 out.r;
    out.e1ph_after = std::min(2.0 * out.ms_bar / out.n1_after, 1.0);
    return out;
}

PairingResult simulate_pairing(const std::vector<std::uint8_t>& alice_bits,
                               const std::vector<std::uint8_t>& bob_bits,
                               std::uint64_t seed) {
    if (alice_bits.size() != bob_bits.size())
        throw std::invalid_argument("simulate_pairing: length mismatch");

    std::vector<std::uint32_t> ones, zeros;
    for (std::uint32_t i = 0; i < bob_bits.size(); ++i)
        (bob_bits[i] ? ones : zeros).push_back(i);

    Xoshiro256ss rng(seed);
    auto shuffle = [&](std::vector<std::uint32_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.below(i)]);
    };
    shuffle(ones);
    shuffle(zeros);

    PairingResult res;
    res.n_g = static_cast<std::int64_t>(std::min(ones.size(), zeros.size()));
    std::int64_t errors = 0;
    for (std::int64_t k = 0; k < res.n_g; ++k) {
        const std::uint32_t i = ones[k], j = zeros[k];
        if (alice_bits[i] == alice_bits[j]) continue;  // even parity, dropped
        ++res.n_t_after;
        // kept bit is wrong iff both sides of the pair were wrong
        if (alice_bits[i] != bob_bits[i] && alice_bits[j] != bob_bits[j]) ++errors;
    }
    res.e_t_after =
        res.n_t_after > 0 ? static_cast<double>(errors) / res.n_t_after : 0.0;
    return res;
}

} // namespace snstf
