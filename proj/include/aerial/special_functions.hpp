#pragma once

#include <cmath>

#include "aerial/errors.hpp"

namespace aerial {

/// Regularized upper incomplete gamma Q(j, z) = Gamma(j, z) / (j-1)! for
/// integer j >= 1: exp(-z) * sum_{k<j} z^k / k!. Exact finite sum, all terms
/// positive. Underflows cleanly to 0 for large z.
inline double regularized_upper_gamma_int(int j, double z) {
    if (j < 1) throw PreconditionError("regularized_upper_gamma_int: order must be >= 1");
    if (z < 0.0) throw PreconditionError("regularized_upper_gamma_int: z must be >= 0");
    if (z > 700.0) {
        // log-sum-exp over log(z^k/k!) so neither the terms nor the sum can
        // overflow before the exp(-z) factor brings the value back down
        double peak = 0.0;
        for (int k = 1; k < j; ++k)
            peak = std::max(peak, k * std::log(z) - std::lgamma(k + 1.0));
        double acc = 0.0;
        for (int k = 0; k < j; ++k)
            acc += std::exp(k * std::log(z) - std::lgamma(k + 1.0) - peak);
        return std::exp(peak - z + std::log(acc));
    }
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < j; ++k) {
        term *= z / k;
        sum += term;
    }
    return std::exp(-z) * sum;
}

/// Upper incomplete gamma Gamma(j, z) for integer j >= 1.
inline double upper_incomplete_gamma_int(int j, double z) {
    double q = regularized_upper_gamma_int(j, z);
    return std::exp(std::lgamma(static_cast<double>(j))) * q;
}

inline double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace aerial
