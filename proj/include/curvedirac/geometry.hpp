#pragma once

// Closed-form differential geometry of an axially symmetric bump z(r) embedded
// in the plane. The induced radial metric is g_rr = 1 + alpha f(r) with
// alpha f(r) = z'(r)^2, and everything the Dirac operator needs (Fermi factor,
// pseudo-gauge potential, curvature) follows from f and f'.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "curvedirac/errors.hpp"
#include "curvedirac/quadrature.hpp"

namespace curvedirac {

enum class SurfaceKind { Gaussian, Volcano, Flat };

inline std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Gaussian: return "gaussian";
    case SurfaceKind::Volcano: return "volcano";
    case SurfaceKind::Flat: return "flat";
    }
    return "unknown";
}

/// Bump geometry. alpha is always derived as amplitude^2 / width^2.
class SurfaceSpec {
public:
    static SurfaceSpec gaussian(double amplitude, double width) {
        return {SurfaceKind::Gaussian, amplitude, width};
    }
    static SurfaceSpec volcano(double amplitude, double width) {
        return {SurfaceKind::Volcano, amplitude, width};
    }
    /// alpha = 0. Amplitude is stored as 0 and width as 1.
    static SurfaceSpec flat() { return {SurfaceKind::Flat, 0.0, 1.0}; }

    /// Parameterize by alpha alone: width = 1, amplitude = sqrt(alpha).
    static SurfaceSpec with_alpha(SurfaceKind kind, double alpha) {
        if (kind == SurfaceKind::Flat) {
            return flat();
        }
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw ConfigError("alpha must be positive and finite");
        }
        return {kind, std::sqrt(alpha), 1.0};
    }

    SurfaceKind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    double width() const noexcept { return width_; }
    double alpha() const noexcept { return alpha_; }

    bool operator==(const SurfaceSpec&) const = default;

private:
    SurfaceSpec(SurfaceKind kind, double amplitude, double width)
        : kind_(kind), amplitude_(amplitude), width_(width) {
        if (kind != SurfaceKind::Flat) {
            if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
                throw ConfigError("amplitude must be positive and finite");
            }
            if (!(width > 0.0) || !std::isfinite(width)) {
                throw ConfigError("width must be positive and finite");
            }
        }
        alpha_ = amplitude * amplitude / (width * width);
    }

    SurfaceKind kind_;
    double amplitude_;
    double width_;
    double alpha_ = 0.0;
};

struct MetricDeformation {
    double f;
    double f_prime;
};

struct ChristoffelSymbols {
    double r_rr;          // Gamma^r_{rr}
    double r_thetatheta;  // Gamma^r_{theta theta}
    double theta_rtheta;  // Gamma^theta_{r theta} = Gamma^theta_{theta r}
};

struct GeometryFields {
    double r;
    double f;
    double f_prime;
    double fermi_factor;
    double pseudo_gauge;
    double curvature;
};

namespace detail {

inline void require_non_negative(double r, const char* what) {
    if (!(r >= 0.0)) {
        throw DomainError(std::string(what) + ": radius must be non-negative");
    }
}

inline void require_positive(double r, const char* what) {
    if (!(r > 0.0)) {
        throw DomainError(std::string(what) + ": radius must be positive");
    }
}

// f'(r) / r in expanded polynomial-times-exponential form. Finite at r = 0 and
// at the zero of (1 - 2 r^2/b^2) for the volcano.
//   Gaussian: f'/r = (8/b^2 - 16 r^2/b^4) e^{-2u},          u = r^2/b^2
//   Volcano:  f'/r = -4 (1 - 2u)(3 - 2u) e^{-2u}
inline double f_prime_over_r(const SurfaceSpec& spec, double r) {
    const double b2 = spec.width() * spec.width();
    const double u = r * r / b2;
    const double decay = std::exp(-2.0 * u);
    switch (spec.kind()) {
    case SurfaceKind::Gaussian: return (8.0 - 16.0 * u) / b2 * decay;
    case SurfaceKind::Volcano: return -4.0 * (1.0 - 2.0 * u) * (3.0 - 2.0 * u) * decay;
    case SurfaceKind::Flat: return 0.0;
    }
    return 0.0;
}

// 1 - (1 + x)^{-1/2} without cancellation for small x.
inline double one_minus_inverse_sqrt(double x) {
    const double s = std::sqrt(1.0 + x);
    return x / (s * (1.0 + s));
}

} // namespace detail

/// Height z(r) of the embedded surface above the plane.
inline double profile_height(const SurfaceSpec& spec, double r) {
    detail::require_non_negative(r, "profile_height");
    const double b = spec.width();
    const double decay = std::exp(-r * r / (b * b));
    switch (spec.kind()) {
    case SurfaceKind::Gaussian: return spec.amplitude() * decay;
    case SurfaceKind::Volcano: return spec.amplitude() * r * decay;
    case SurfaceKind::Flat: return 0.0;
    }
    return 0.0;
}

/// f(r) and f'(r) with alpha f = (dz/dr)^2.
inline MetricDeformation metric_deformation(const SurfaceSpec& spec, double r) {
    detail::require_non_negative(r, "metric_deformation");
    const double b2 = spec.width() * spec.width();
    const double u = r * r / b2;
    const double decay = std::exp(-2.0 * u);
    double f = 0.0;
    switch (spec.kind()) {
    case SurfaceKind::Gaussian: f = 4.0 * u * decay; break;
    case SurfaceKind::Volcano: {
        const double s = 1.0 - 2.0 * u;
        f = b2 * s * s * decay;
        break;
    }
    case SurfaceKind::Flat: return {0.0, 0.0};
    }
    return {f, r * detail::f_prime_over_r(spec, r)};
}

/// F(r) = (1 + alpha f)^{-1/2}, the local Fermi-velocity factor.
inline double fermi_factor(const SurfaceSpec& spec, double r) {
    const auto [f, fp] = metric_deformation(spec, r);
    return 1.0 / std::sqrt(1.0 + spec.alpha() * f);
}

/// dF/dr = -alpha f' F^3 / 2.
inline double fermi_factor_derivative(const SurfaceSpec& spec, double r) {
    const auto [f, fp] = metric_deformation(spec, r);
    const double F = 1.0 / std::sqrt(1.0 + spec.alpha() * f);
    return -0.5 * spec.alpha() * fp * F * F * F;
}

/// A_theta(r) = (1 - F(r)) / (2r).
///
/// At r = 0 the Gaussian and flat limits are 0 (1 - F ~ 2 alpha r^2/b^2, so
/// A_theta ~ alpha r / b^2); the volcano diverges like (1 - F(0)) / (2r) and
/// raises DomainError.
inline double pseudo_gauge(const SurfaceSpec& spec, double r) {
    detail::require_non_negative(r, "pseudo_gauge");
    if (spec.kind() == SurfaceKind::Flat) {
        return 0.0;
    }
    if (r == 0.0) {
        if (spec.kind() == SurfaceKind::Volcano) {
            throw DomainError("pseudo_gauge: volcano A_theta diverges at r = 0");
        }
        return 0.0;
    }
    const auto [f, fp] = metric_deformation(spec, r);
    return detail::one_minus_inverse_sqrt(spec.alpha() * f) / (2.0 * r);
}

/// dA_theta/dr = -F'/(2r) - (1 - F)/(2 r^2), for r > 0.
inline double pseudo_gauge_derivative(const SurfaceSpec& spec, double r) {
    detail::require_positive(r, "pseudo_gauge_derivative");
    if (spec.kind() == SurfaceKind::Flat) {
        return 0.0;
    }
    const auto [f, fp] = metric_deformation(spec, r);
    const double x = spec.alpha() * f;
    const double F = 1.0 / std::sqrt(1.0 + x);
    const double dF = -0.5 * spec.alpha() * fp * F * F * F;
    return -dF / (2.0 * r) - detail::one_minus_inverse_sqrt(x) / (2.0 * r * r);
}

/// Scalar curvature R(r) = -alpha f'(r) / (r (1 + alpha f)^2).
///
/// Uses f'/r directly, so r = 0 returns the finite limit:
/// Gaussian R(0) = -8 alpha / b^2, volcano R(0) = 12 alpha / (1 + alpha b^2)^2.
inline double curvature_scalar(const SurfaceSpec& spec, double r) {
    detail::require_non_negative(r, "curvature_scalar");
    if (spec.kind() == SurfaceKind::Flat) {
        return 0.0;
    }
    const auto [f, fp] = metric_deformation(spec, r);
    const double g = 1.0 + spec.alpha() * f;
    return -spec.alpha() * detail::f_prime_over_r(spec, r) / (g * g);
}

inline ChristoffelSymbols christoffel_symbols(const SurfaceSpec& spec, double r) {
    detail::require_positive(r, "christoffel_symbols");
    const auto [f, fp] = metric_deformation(spec, r);
    const double g = 1.0 + spec.alpha() * f;
    return {spec.alpha() * fp / (2.0 * g), -r / g, 1.0 / r};
}

/// mu(r) = exp(-integral_{r_lower}^{r} A_theta), evaluated by adaptive
/// Gauss-Kronrod quadrature to 1e-10 absolute. r_lower = 0 is accepted for the
/// Gaussian and flat surfaces only; the volcano integral diverges
/// logarithmically there.
inline double geometric_phase(const SurfaceSpec& spec, double r, double r_lower) {
    detail::require_non_negative(r_lower, "geometric_phase");
    if (r < r_lower) {
        throw DomainError("geometric_phase: r must not be below r_lower");
    }
    if (spec.kind() == SurfaceKind::Flat) {
        return 1.0;
    }
    if (r_lower == 0.0 && spec.kind() == SurfaceKind::Volcano) {
        throw DomainError("geometric_phase: volcano phase integral diverges from r_lower = 0");
    }
    auto integrand = [&spec](double x) { return pseudo_gauge(spec, x); };
    return std::exp(-quadrature::integrate(integrand, r_lower, r, 1e-10).value);
}

inline GeometryFields evaluate_geometry(const SurfaceSpec& spec, double r) {
    const auto [f, fp] = metric_deformation(spec, r);
    return {r,
            f,
            fp,
            1.0 / std::sqrt(1.0 + spec.alpha() * f),
            pseudo_gauge(spec, r),
            curvature_scalar(spec, r)};
}

} // namespace curvedirac
