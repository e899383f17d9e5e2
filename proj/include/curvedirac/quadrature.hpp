#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace curvedirac::quadrature {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

template <class F>
PanelEstimate gauss_kronrod_panel(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) {
            gauss += gauss_weights[j / 2] * pair;
        }
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <class F>
double adaptive(F& f, double a, double b, double tol, int depth, double& error) {
    const auto whole = gauss_kronrod_panel(f, a, b);
    if (whole.error <= tol || depth <= 0) {
        error += whole.error;
        return whole.value;
    }
    const double mid = 0.5 * (a + b);
    return adaptive(f, a, mid, 0.5 * tol, depth - 1, error) +
           adaptive(f, mid, b, 0.5 * tol, depth - 1, error);
}

} // namespace detail

struct IntegralResult {
    double value;
    double error_estimate;
};

/// Adaptive Gauss-Kronrod (G7/K15) quadrature with bisection refinement.
/// `abs_tol` is distributed over subintervals so that the summed error estimate
/// stays below it unless `max_depth` is reached.
template <class F>
IntegralResult integrate(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 30) {
    if (a == b) {
        return {0.0, 0.0};
    }
    double error = 0.0;
    const double value = detail::adaptive(f, a, b, abs_tol, max_depth, error);
    return {value, error};
}

/// Composite Simpson rule on uniformly spaced samples. An odd number of
/// intervals closes with the Simpson 3/8 rule on the last three.
inline double simpson(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 2) {
        return 0.0;
    }
    const std::size_t intervals = n - 1;
    if (intervals == 1) {
        return 0.5 * h * (samples[0] + samples[1]);
    }
    std::size_t even_end = intervals % 2 == 0 ? intervals : intervals - 3;
    double sum = 0.0;
    if (even_end > 0) {
        double acc = samples[0] + samples[even_end];
        for (std::size_t i = 1; i < even_end; ++i) {
            acc += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
        }
        sum = acc * h / 3.0;
    }
    if (even_end != intervals) {
        const std::size_t k = even_end;
        sum += 3.0 * h / 8.0 *
               (samples[k] + 3.0 * samples[k + 1] + 3.0 * samples[k + 2] + samples[k + 3]);
    }
    return sum;
}

} // namespace curvedirac::quadrature
