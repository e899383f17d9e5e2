#pragma once

// Bessel functions of the first kind at integer order.
//
// Regimes (n = |order|):
//   x <= 4                       ascending power series (terms peak near k ~ x/2,
//                                 so at most ~1.5 digits are lost to cancellation)
//   x > 30 + n^2/2               Hankel asymptotic expansion, summed until the
//                                 terms stop decreasing
//   otherwise                    Miller downward recurrence, normalized with
//                                 J_0 + 2 sum_k J_{2k} = 1

#include <cmath>
#include <numbers>
#include <string>

#include "curvedirac/errors.hpp"

namespace curvedirac {

inline constexpr int max_bessel_order = 64;

namespace detail {

inline double bessel_series(int n, double x) {
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) {
        term *= half / k;
    }
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

inline double bessel_hankel(int n, double x) {
    const double mu = 4.0 * n * n;
    const double eight_x = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * eight_x);
        const double magnitude = std::abs(term);
        if (magnitude > previous || magnitude == 0.0) {
            break;
        }
        previous = magnitude;
        if (k % 2 == 1) {
            q += (k % 4 == 1 ? 1.0 : -1.0) * term;
        } else {
            p += (k % 4 == 2 ? -1.0 : 1.0) * term;
        }
        if (magnitude < 1e-17) {
            break;
        }
    }
    const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

inline double bessel_miller(int n, double x) {
    const double span = std::max(static_cast<double>(n), x);
    int start = static_cast<int>(span + 30.0 + std::sqrt(60.0 * span));
    start += start % 2;

    double above = 0.0;
    double current = 1e-300;
    double wanted = 0.0;
    double normalization = 0.0;
    for (int k = start; k >= 1; --k) {
        const double below = (2.0 * k / x) * current - above;
        above = current;
        current = below;
        // `current` now holds the unnormalized J_{k-1}.
        if (k - 1 == n) {
            wanted = current;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            normalization += 2.0 * current;
        }
        if (std::abs(current) > 1e250) {
            current *= 1e-250;
            above *= 1e-250;
            wanted *= 1e-250;
            normalization *= 1e-250;
        }
    }
    normalization += current;
    return wanted / normalization;
}

} // namespace detail

/// J_order(x) for integer |order| <= 64 and x >= 0. Negative orders use
/// J_{-n} = (-1)^n J_n.
inline double bessel_j(int order, double x) {
    if (!(x >= 0.0)) {
        throw DomainError("bessel_j: argument must be non-negative");
    }
    if (order < -max_bessel_order || order > max_bessel_order) {
        throw UnsupportedOrderError("bessel_j: |order| must not exceed " +
                                    std::to_string(max_bessel_order));
    }
    const int n = order < 0 ? -order : order;
    const double sign = (order < 0 && n % 2 == 1) ? -1.0 : 1.0;
    if (x == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    double value = 0.0;
    if (x <= 4.0) {
        value = detail::bessel_series(n, x);
    } else if (x > 30.0 + 0.5 * n * n) {
        value = detail::bessel_hankel(n, x);
    } else {
        value = detail::bessel_miller(n, x);
    }
    return sign * value;
}

} // namespace curvedirac
