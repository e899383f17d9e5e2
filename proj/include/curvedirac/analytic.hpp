#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "curvedirac/errors.hpp"
#include "curvedirac/geometry.hpp"
#include "curvedirac/grid.hpp"
#include "curvedirac/quadrature.hpp"
#include "curvedirac/specialfn.hpp"

namespace curvedirac {

enum class Sublattice { A, B };

inline std::string_view to_string(Sublattice lattice) {
    return lattice == Sublattice::A ? "A" : "B";
}

/// Total angular momentum m (half-integer, held as 2m) and sublattice.
///
/// The B-sublattice equations are the A-sublattice equations at -m. Every
/// formula in this library is written for sublattice A in terms of
/// signed_m(); that is what makes B(m) == A(-m) hold bit for bit.
class QuantumNumbers {
public:
    QuantumNumbers(int twice_m, Sublattice lattice) : twice_m_(twice_m), lattice_(lattice) {
        if (twice_m % 2 == 0) {
            throw ConfigError("m must be a half-integer (2m odd), got 2m = " +
                              std::to_string(twice_m));
        }
    }

    int twice_m() const noexcept { return twice_m_; }
    double m() const noexcept { return 0.5 * twice_m_; }
    Sublattice lattice() const noexcept { return lattice_; }

    int signed_twice_m() const noexcept { return lattice_ == Sublattice::A ? twice_m_ : -twice_m_; }
    double signed_m() const noexcept { return 0.5 * signed_twice_m(); }

    /// Equivalent sublattice-A quantum numbers.
    QuantumNumbers as_lattice_a() const { return {signed_twice_m(), Sublattice::A}; }

    bool operator==(const QuantumNumbers&) const = default;

private:
    int twice_m_;
    Sublattice lattice_;
};

namespace detail {

inline void require_positive_radius(double r, const char* what) {
    if (!(r > 0.0)) {
        throw DomainError(std::string(what) + ": radius must be positive");
    }
}

// F (F' + 2 A_theta'): the bracket differentiated in the full effective potential.
inline double fermi_gauge_bracket(const SurfaceSpec& spec, double r) {
    return fermi_factor(spec, r) *
           (fermi_factor_derivative(spec, r) + 2.0 * pseudo_gauge_derivative(spec, r));
}

} // namespace detail

/// Zero-field effective potential: -m/r + A_theta for A, +m/r + A_theta for B.
inline double effective_potential_simple(const SurfaceSpec& spec, const QuantumNumbers& qn, double r) {
    detail::require_positive_radius(r, "effective_potential_simple");
    return -qn.signed_m() / r + pseudo_gauge(spec, r);
}

/// U^2 = -F A' - A^2 + (m/r^2)(m +- F) + (1/2) d/dr[F (F' + 2A')] + (1/4) F^2 (F' + 2A)^2
/// with A = A_theta and the upper sign for sublattice A. The outer d/dr is a
/// centered difference (step 1e-6) of the analytic bracket.
inline double effective_potential_full(const SurfaceSpec& spec, const QuantumNumbers& qn, double r) {
    detail::require_positive_radius(r, "effective_potential_full");
    const double m = qn.signed_m();
    const double F = fermi_factor(spec, r);
    const double dF = fermi_factor_derivative(spec, r);
    const double A = pseudo_gauge(spec, r);
    const double dA = pseudo_gauge_derivative(spec, r);

    const double step = std::min(1e-6, 0.5 * r);
    const double d_bracket = (detail::fermi_gauge_bracket(spec, r + step) -
                              detail::fermi_gauge_bracket(spec, r - step)) /
                             (2.0 * step);
    const double drift = dF + 2.0 * A;
    return -F * dA - A * A + (m / (r * r)) * (m + F) + 0.5 * d_bracket + 0.25 * F * F * drift * drift;
}

/// Bessel order (1 +- 2m)/2 of the analytic solution; upper sign for A.
inline int spinor_bessel_order(const QuantumNumbers& qn) {
    return (1 + qn.signed_twice_m()) / 2;
}

/// Envelope multiplying sqrt(r) J(kappa r) in the approximate solutions:
/// Gaussian exp((alpha/4) e^{-2r^2/b^2}), volcano e^{-(1/4) ln r} = r^{-1/4},
/// flat 1.
inline double spinor_prefactor(const SurfaceSpec& spec, double r) {
    switch (spec.kind()) {
    case SurfaceKind::Gaussian: {
        const double b = spec.width();
        return std::exp(0.25 * spec.alpha() * std::exp(-2.0 * r * r / (b * b)));
    }
    case SurfaceKind::Volcano:
        detail::require_positive_radius(r, "spinor_prefactor");
        return std::pow(r, -0.25);
    case SurfaceKind::Flat: return 1.0;
    }
    return 1.0;
}

/// First-order-in-alpha closed form of the Gaussian geometric phase,
/// exp((alpha/4)(e^{-2r^2/b^2} - 1)) = prefactor(r) / prefactor(0).
inline double geometric_phase_first_order(const SurfaceSpec& spec, double r) {
    switch (spec.kind()) {
    case SurfaceKind::Gaussian: {
        const double b = spec.width();
        return std::exp(0.25 * spec.alpha() * std::expm1(-2.0 * r * r / (b * b)));
    }
    case SurfaceKind::Flat: return 1.0;
    case SurfaceKind::Volcano:
        throw DomainError("geometric_phase_first_order: no closed form for the volcano");
    }
    return 1.0;
}

/// Unnormalized approximate spinor component prefactor(r) sqrt(r) J_{(1 +- 2m)/2}(kappa r).
/// The volcano envelope r^{-1/4} sqrt(r) is evaluated as r^{1/4} so r = 0 is finite.
inline double analytic_spinor(const SurfaceSpec& spec, const QuantumNumbers& qn, double kappa, double r) {
    if (!(r >= 0.0)) {
        throw DomainError("analytic_spinor: radius must be non-negative");
    }
    if (!(kappa > 0.0)) {
        throw DomainError("analytic_spinor: kappa must be positive");
    }
    const double bessel = bessel_j(spinor_bessel_order(qn), kappa * r);
    double envelope = 0.0;
    switch (spec.kind()) {
    case SurfaceKind::Volcano: envelope = std::pow(r, 0.25); break;
    case SurfaceKind::Gaussian:
    case SurfaceKind::Flat: envelope = spinor_prefactor(spec, r) * std::sqrt(r); break;
    }
    return envelope * bessel;
}

inline RadialProfile analytic_spinor_profile(const SurfaceSpec& spec, const QuantumNumbers& qn,
                                             double kappa, const RadialGrid& grid) {
    return RadialProfile::sample(grid, [&](double r) { return analytic_spinor(spec, qn, kappa, r); });
}

/// Max-norm residual of -chi'' + (m/r^2)(m +- 1) chi - kappa^2 chi over the
/// interior nodes, with chi'' from the three-point stencil.
inline double klein_gordon_residual(const QuantumNumbers& qn, double kappa, const RadialProfile& chi) {
    const auto& grid = chi.grid();
    if (grid.node_count() < 16) {
        throw ConfigError("klein_gordon_residual: grid has fewer than 16 nodes");
    }
    const double m = qn.signed_m();
    const double centrifugal = m * (m + 1.0);
    const double h2 = grid.h() * grid.h();
    const double k2 = kappa * kappa;
    double worst = 0.0;
    for (int i = 1; i + 1 < grid.node_count(); ++i) {
        const double r = grid.node(i);
        const double second = (chi[i - 1] - 2.0 * chi[i] + chi[i + 1]) / h2;
        const double residual = -second + centrifugal / (r * r) * chi[i] - k2 * chi[i];
        worst = std::max(worst, std::abs(residual));
    }
    return worst;
}

/// 2 pi integral r (a^2 + b^2) dr by composite Simpson on the shared grid.
inline double spinor_norm_integral(const RadialProfile& a, const RadialProfile& b) {
    if (!(a.grid() == b.grid())) {
        throw ConfigError("spinor components must share one grid");
    }
    const auto& grid = a.grid();
    std::vector<double> weighted(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) {
        weighted[i] = grid.node(i) * (a[i] * a[i] + b[i] * b[i]);
    }
    return 2.0 * std::numbers::pi * quadrature::simpson(weighted, grid.h());
}

struct NormalizedSpinor {
    double scale;
    RadialProfile psi_a;
    RadialProfile psi_b;
    RadialProfile rho;
};

/// Jointly rescales (psi_A, psi_B) by one factor so that 2 pi int r rho dr = 1,
/// rho = |psi_A|^2 + |psi_B|^2.
inline NormalizedSpinor normalize_density(const RadialProfile& psi_a, const RadialProfile& psi_b) {
    const double integral = spinor_norm_integral(psi_a, psi_b);
    if (!(integral > 0.0) || !std::isfinite(integral)) {
        throw DomainError("normalize_density: spinor has zero norm");
    }
    const double scale = 1.0 / std::sqrt(integral);
    const auto& grid = psi_a.grid();
    std::vector<double> a(grid.node_count()), b(grid.node_count()), rho(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) {
        a[i] = scale * psi_a[i];
        b[i] = scale * psi_b[i];
        rho[i] = a[i] * a[i] + b[i] * b[i];
    }
    return {scale, RadialProfile(grid, std::move(a)), RadialProfile(grid, std::move(b)),
            RadialProfile(grid, std::move(rho))};
}

} // namespace curvedirac
