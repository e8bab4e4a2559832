#pragma once

#include "snstf/types.hpp"

#include <cstdint>
#include <vector>

namespace snstf {

struct RawKeyTally {
    double n_t = 0.0;
    double n_t0 = 0.0;        // zeros in Bob's string
    double n_t1 = 0.0;        // ones in Bob's string
    double e_before = 0.0;    // pre-AOPP bit error rate
    double n_g = 0.0;         // odd-parity pairs formed (maximal 1-0 pairing)
    double n_odd = 0.0;       // expected odd pairs under uniform random grouping
    double n_t_after = 0.0;   // survivors after parity check
    double e_t_after = 0.0;   // post-AOPP bit error rate
};

/// Z-basis tally from the detected count matrix. Bob's bit is 1 when he sent
/// vacuum and 0 when he sent the signal source; vv and yy events are errors.
/// n_t_after / e_t_after are the pairing expectation unless the record carries
/// the realized values.
RawKeyTally tally_from_record(const ExperimentRecord& record);

/// Asymptotic survivor formulas: n1' = (n10/n_t1)(n01/n_t0) n_g,
/// e1'ph = 2 e (1 - e).
AoppOutcome aopp_asymptotic(const DecoyBounds& bounds, const RawKeyTally& tally,
                            double e1ph);

/// Finite-size estimation chain for n1' and e1'ph. Sets `collapsed` instead
/// of throwing when the bounds leave no extractable key.
AoppOutcome aopp_finite(const DecoyBounds& bounds, const RawKeyTally& tally,
                        double e1ph_ub, const SecurityParams& sec);

struct PairingResult {
    std::int64_t n_g = 0;
    std::int64_t n_t_after = 0;
    double e_t_after = 0.0;
};

/// Explicit random 1-0 pairing of Bob's string with a parity check against
/// Alice's bits; validates the record-driven expectation formulas.
PairingResult simulate_pairing(const std::vector<std::uint8_t>& alice_bits,
                               const std::vector<std::uint8_t>& bob_bits,
                               std::uint64_t seed);

} // namespace snstf
