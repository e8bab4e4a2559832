#pragma once

#include <utility>

namespace snstf {

/// Shannon binary entropy H(x) in bits, H(0) = H(1) = 0.
/// Throws std::domain_error outside [0,1].
double binary_entropy(double x);

/// Repeaterless secret-key capacity -log2(1 - eta) of a lossy channel.
double plob_bound(double eta);

struct Bounds {
    double lower;
    double upper;
};

// Chernoff concentration bounds for sums of independent indicator variables.
//
// Both directions solve the multiplicative Chernoff tail condition
//   upper:  (1+d)ln(1+d) - d       = ln(1/eps) / x
//   lower:  (1-d)ln(1-d) + d       = ln(1/eps) / x
// exactly (bisection), rather than a loosened closed form. Each side fails
// with probability at most eps.

/// Range [phi^L(x), phi^U(x)] containing an observation whose expected value
/// is `expected`.
Bounds chernoff_observed_bounds(double expected, double eps);

/// Range containing the expected value given one observation; the inverse
/// image of the observed-bound functions.
Bounds chernoff_expected_bounds(double observed, double eps);

double chernoff_phi_upper(double expected, double eps);
double chernoff_phi_lower(double expected, double eps);

} // namespace snstf
