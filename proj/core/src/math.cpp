#include "elsa/math.hpp"

#include <cmath>

namespace elsa {

namespace {
constexpr double kHalfLog2Pi = 0.9189385332046727417803297;  // 0.5*log(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865475244008444;
}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_norm_cdf(double x) {
    if (x >= 0.0) {
        // Phi(x) = 1 - Phi(-x); log1p keeps precision near 1.
        return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
    }
    if (x > -37.0) {
        return std::log(0.5 * std::erfc(-x * kInvSqrt2));
    }
    // Deep tail: Phi(x) ~ phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8)
    const double z2 = 1.0 / (x * x);
    const double series = -z2 * (1.0 - 3.0 * z2 * (1.0 - 5.0 * z2 * (1.0 - 7.0 * z2)));
    return -0.5 * x * x - std::log(-x) - kHalfLog2Pi + std::log1p(series);
}

double log_norm_pdf(double x, double mean, double variance) {
    const double r = x - mean;
    return -0.5 * std::log(variance) - kHalfLog2Pi - r * r / (2.0 * variance);
}

}  // namespace elsa
