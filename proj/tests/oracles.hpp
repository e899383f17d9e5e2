#pragma once

// Reference computations for the tests. Nothing here calls into the library
// under test except christoffel_symbols in ricci_from_christoffels, whose
// output is assembled independently of curvature_scalar.

#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "curvedirac/geometry.hpp"

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline double bessel_j(int n, double x) {
    return static_cast<double>(boost::math::cyl_bessel_j(n, mp50(x)));
}

// Height profile derivatives z', z'' in closed form.
struct Slopes {
    long double z1, z2;
};

inline Slopes profile_slopes(const curvedirac::SurfaceSpec& s, long double r) {
    const long double A = s.amplitude(), b = s.width(), b2 = b * b;
    const long double e = std::exp(-r * r / b2);
    switch (s.kind()) {
    case curvedirac::SurfaceKind::Gaussian:
        return {-2 * A * r / b2 * e, A * e * (4 * r * r / (b2 * b2) - 2 / b2)};
    case curvedirac::SurfaceKind::Volcano:
        return {A * e * (1 - 2 * r * r / b2), A * e * (-6 * r / b2 + 4 * r * r * r / (b2 * b2))};
    case curvedirac::SurfaceKind::Flat: return {0, 0};
    }
    return {0, 0};
}

// R = -2 K of the embedded surface of revolution.
inline double embedding_curvature(const curvedirac::SurfaceSpec& s, double r) {
    const auto [z1, z2] = profile_slopes(s, r);
    const long double q = 1 + z1 * z1;
    return static_cast<double>(-2 * z1 * z2 / (r * q * q));
}

// Ricci scalar of diag(g_rr, g_tt) = -(1 + alpha f, r^2) assembled from the
// Christoffel symbols, with five-point centered derivatives of step h.
inline double ricci_from_christoffels(const curvedirac::SurfaceSpec& s, double r, double h) {
    auto gamma = [&](double x) { return curvedirac::christoffel_symbols(s, x); };
    const auto g = gamma(r);
    const auto m2 = gamma(r - 2 * h), m1 = gamma(r - h), p1 = gamma(r + h), p2 = gamma(r + 2 * h);
    auto d = [&](double a2, double a1, double b1, double b2) { return (a2 - 8 * a1 + 8 * b1 - b2) / (12 * h); };
    const double a = g.r_rr, c = g.r_thetatheta, e = g.theta_rtheta;
    const double de = d(m2.theta_rtheta, m1.theta_rtheta, p1.theta_rtheta, p2.theta_rtheta);
    const double dc = d(m2.r_thetatheta, m1.r_thetatheta, p1.r_thetatheta, p2.r_thetatheta);
    const double ricci_rr = -de + a * e - e * e;
    const double ricci_tt = dc + a * c - c * e;
    // g^rr from Gamma^r_thetatheta = -r / (1 + alpha f).
    const double g_rr_inv = c / r;
    const double g_tt_inv = -1.0 / (r * r);
    return g_rr_inv * ricci_rr + g_tt_inv * ricci_tt;
}

// sqrt(r) Z_nu(kappa r) slope, Z = J or Y, via boost.
inline double flat_slope(bool second_kind, int nu, double kappa, double r) {
    auto z = [&](int k, double x) {
        return second_kind ? boost::math::cyl_neumann(k, x) : boost::math::cyl_bessel_j(k, x);
    };
    const double x = kappa * r;
    const double dz = 0.5 * (z(nu - 1, x) - z(nu + 1, x));
    return z(nu, x) / (2 * std::sqrt(r)) + std::sqrt(r) * kappa * dz;
}

// Roots of the flat boundary problem: sqrt(r)[a J_nu + c Y_nu](kappa r) with
// zero value at r_min and zero slope at r_max. Scan and TOMS 748.
inline std::vector<double> flat_roots(int nu, double r_min, double r_max, int count) {
    nu = std::abs(nu);
    auto det = [&](double k) {
        const double jy = boost::math::cyl_bessel_j(nu, k * r_min) * flat_slope(true, nu, k, r_max) -
                          boost::math::cyl_neumann(nu, k * r_min) * flat_slope(false, nu, k, r_max);
        return jy;
    };
    std::vector<double> roots;
    const double step = 2e-3;
    double lo = step, f_lo = det(lo);
    while (static_cast<int>(roots.size()) < count) {
        const double hi = lo + step, f_hi = det(hi);
        if (f_lo * f_hi < 0) {
            boost::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(det, lo, hi, f_lo, f_hi,
                                                            boost::math::tools::eps_tolerance<double>(52), iters);
            roots.push_back(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    return roots;
}

inline std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return out;
}

} // namespace oracle
