#include "snstf/math.hpp"

#include <cmath>
#include <stdexcept>

namespace snstf {

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double plob_bound(double eta) {
    if (eta < 0.0 || eta >= 1.0)
        throw std::domain_error("plob_bound: eta outside [0,1)");
    return -std::log2(1.0 - eta);
}

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("chernoff: eps outside (0,1)");
}

// h+(d) = (1+d)ln(1+d) - d, increasing on [0, inf)
double h_upper(double d) { return (1.0 + d) * std::log1p(d) - d; }

// h-(d) = (1-d)ln(1-d) + d, increasing on [0, 1], h-(1) = 1
double h_lower(double d) { return (1.0 - d) * std::log1p(-d) + d; }

} // namespace

double chernoff_phi_upper(double expected, double eps) {
    check_eps(eps);
    if (expected < 0.0)
        throw std::domain_error("chernoff: negative expected value");
    if (expected == 0.0) return 0.0;
    const double target = std::log(1.0 / eps) / expected;
    double lo = 0.0, hi = 2.0;
    while (h_upper(hi) < target) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_upper(mid) < target ? lo : hi) = mid;
    }
    return expected * (1.0 + hi);
}

double chernoff_phi_lower(double expected, double eps) {
    check_eps(eps);
    if (expected < 0.0)
        throw std::domain_error("chernoff: negative expected value");
    if (expected == 0.0) return 0.0;
    const double target = std::log(1.0 / eps) / expected;
    if (target >= 1.0) return 0.0;  // even d = 1 cannot reach the tail mass
    double lo = 0.0, hi = 1.0 - 1e-15;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_lower(mid) < target ? lo : hi) = mid;
    }
    return expected * (1.0 - lo);
}

Bounds chernoff_observed_bounds(double expected, double eps) {
    return {chernoff_phi_lower(expected, eps), chernoff_phi_upper(expected, eps)};
}

Bounds chernoff_expected_bounds(double observed, double eps) {
    check_eps(eps);
    if (observed < 0.0)
        throw std::domain_error("chernoff: negative observed value");
    const double beta = std::log(1.0 / eps);

    // upper: largest mean m with phi^L(m) <= observed
    double lo = observed;
    double hi = observed + 2.0 * beta + 2.0;
    while (chernoff_phi_lower(hi, eps) <= observed) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (chernoff_phi_lower(mid, eps) <= observed ? lo : hi) = mid;
    }
    const double upper = lo;

    // lower: smallest mean m with phi^U(m) >= observed
    double lower = 0.0;
    if (observed > 0.0) {
        double l2 = 0.0, h2 = observed;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (l2 + h2);
            (chernoff_phi_upper(mid, eps) < observed ? l2 : h2) = mid;
        }
        lower = l2;
    }
    return {lower, upper};
}

} // namespace snstf
