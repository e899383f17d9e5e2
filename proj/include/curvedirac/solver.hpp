#pragma once

// Matrix-method eigensolver for the decoupled radial Dirac equations
//
//   F^2 psi'' + F (F' + 2A) psi' + [F A' - (m/r^2)(m +- F) + A^2] psi = -kappa^2 psi,
//
// A = A_theta, discretized with centered differences on a RadialGrid with
// psi(r_min) = 0 and psi'(r_max) = 0 (ghost node psi_{N+1} = psi_{N-1}).

#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <span>
#include <vector>

#include "curvedirac/analytic.hpp"
#include "curvedirac/errors.hpp"
#include "curvedirac/geometry.hpp"
#include "curvedirac/grid.hpp"
#include "curvedirac/quadrature.hpp"
#include "curvedirac/specialfn.hpp"
#include "curvedirac/tridiagonal.hpp"

namespace curvedirac {

inline constexpr int max_eigencount = 50;
inline constexpr double eigenvalue_floor = 1e-10;

/// Discretized operator M with M psi ~ kappa^2 psi on the unknown nodes 1..N.
struct TridiagonalOperator {
    TridiagonalMatrix matrix;
    SurfaceSpec spec;
    QuantumNumbers qn;
    RadialGrid grid;
};

struct EigenSolution {
    SurfaceSpec spec;
    QuantumNumbers qn;
    RadialGrid grid;
    std::vector<double> lambdas;  // kappa^2, ascending
    std::vector<double> kappas;   // ascending
    /// One column per kappa, sampled on every grid node (entry 0 is the
    /// Dirichlet node). Each satisfies 2 pi int r psi^2 dr = 1 unless it was
    /// jointly normalized as part of a spinor pair.
    std::vector<std::vector<double>> modes;
    EigenPath path = EigenPath::SymmetrizedBisection;
    double max_imag_residue = 0.0;

    std::size_t size() const noexcept { return kappas.size(); }

    /// 1-based, matching kappa_n.
    RadialProfile mode(std::size_t index) const {
        if (index < 1 || index > modes.size()) {
            throw std::out_of_range("mode index " + std::to_string(index) + " outside 1.." +
                                    std::to_string(modes.size()));
        }
        return {grid, modes[index - 1]};
    }
};

struct SpinorSolution {
    EigenSolution a;
    EigenSolution b;
};

inline TridiagonalOperator assemble(const SurfaceSpec& spec, const QuantumNumbers& qn, const RadialGrid& grid) {
    const int n = grid.unknowns();
    const double h = grid.h();
    const double h2 = h * h;
    const double m = qn.signed_m();

    TridiagonalMatrix mat;
    mat.diag.resize(n);
    mat.sub.resize(n - 1);
    mat.super.resize(n - 1);
    for (int k = 0; k < n; ++k) {
        const double r = grid.node(k + 1);
        const double F = fermi_factor(spec, r);
        const double dF = fermi_factor_derivative(spec, r);
        const double A = pseudo_gauge(spec, r);
        const double dA = pseudo_gauge_derivative(spec, r);

        const double second = F * F;
        const double first = F * (dF + 2.0 * A);
        const double zeroth = F * dA - (m / (r * r)) * (m + F) + A * A;

        const double lower = -(second / h2 - first / (2.0 * h));
        const double upper = -(second / h2 + first / (2.0 * h));
        mat.diag[k] = 2.0 * second / h2 - zeroth;
        if (k > 0) {
            mat.sub[k - 1] = lower;
        }
        if (k + 1 < n) {
            mat.super[k] = upper;
        } else {
            mat.sub[k - 1] += upper;  // ghost reflection at r_max
        }
    }
    mat.validate();
    return {std::move(mat), spec, qn, grid};
}

namespace detail {

inline void check_eigencount(int count) {
    if (count < 1 || count > max_eigencount) {
        throw ConfigError("eigencount must lie in 1.." + std::to_string(max_eigencount));
    }
}

inline double density_integral(const RadialGrid& grid, const std::vector<double>& psi) {
    std::vector<double> weighted(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        weighted[i] = grid.node(static_cast<int>(i)) * psi[i] * psi[i];
    }
    return 2.0 * std::numbers::pi * quadrature::simpson(weighted, grid.h());
}

} // namespace detail

/// The `count` smallest eigenvalues lambda > 1e-10 of the operator, as
/// kappa_n = sqrt(lambda_n), with modes normalized to 2 pi int r psi^2 dr = 1
/// and signed so that the first non-negligible entry is positive.
inline EigenSolution eigen_solve(const TridiagonalOperator& op, int count) {
    detail::check_eigencount(count);
    auto pairs = smallest_eigenpairs_above(op.matrix, static_cast<std::size_t>(count), eigenvalue_floor);

    EigenSolution out{op.spec, op.qn, op.grid, {}, {}, {}, pairs.path, pairs.max_imag_residue};
    out.lambdas = pairs.values;
    for (double lambda : out.lambdas) {
        out.kappas.push_back(std::sqrt(lambda));
    }
    for (auto& v : pairs.vectors) {
        std::vector<double> psi(v.size() + 1, 0.0);
        std::copy(v.begin(), v.end(), psi.begin() + 1);

        double peak = 0.0;
        for (double x : psi) peak = std::max(peak, std::abs(x));
        for (double x : psi) {
            if (std::abs(x) > 1e-8 * peak) {
                if (x < 0.0) {
                    for (double& y : psi) y = -y;
                }
                break;
            }
        }
        const double scale = 1.0 / std::sqrt(detail::density_integral(op.grid, psi));
        for (double& y : psi) y *= scale;
        out.modes.push_back(std::move(psi));
    }
    return out;
}

/// Both sublattice spectra for total angular momentum m = twice_m / 2.
///
/// The B solution is the A-equation solution at -m (no separate B assembly);
/// afterwards the n-th A and B modes are scaled jointly so that each spinor
/// pair carries unit total density.
inline SpinorSolution solve_spinor_pair(const SurfaceSpec& spec, int twice_m, const RadialGrid& grid, int count) {
    detail::check_eigencount(count);
    const QuantumNumbers qn_a(twice_m, Sublattice::A);
    const QuantumNumbers qn_mirror(-twice_m, Sublattice::A);

    auto job_b = std::async(std::launch::async, [&] { return eigen_solve(assemble(spec, qn_mirror, grid), count); });
    EigenSolution a = eigen_solve(assemble(spec, qn_a, grid), count);
    EigenSolution b = job_b.get();
    b.qn = QuantumNumbers(twice_m, Sublattice::B);

    for (std::size_t j = 0; j < a.modes.size(); ++j) {
        const auto joint = normalize_density(RadialProfile(grid, a.modes[j]), RadialProfile(grid, b.modes[j]));
        a.modes[j] = joint.psi_a.values();
        b.modes[j] = joint.psi_b.values();
    }
    return {std::move(a), std::move(b)};
}

inline constexpr int convergence_kappas = 5;

struct ConvergenceLevel {
    double h;
    std::array<double, convergence_kappas> kappas;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    /// orders[k][n] = log2(|kappa_n(h_k) - kappa_n(h_{k+1})| / |kappa_n(h_{k+1}) - kappa_n(h_{k+2})|)
    std::vector<std::array<double, convergence_kappas>> orders;
};

/// Spectra on successively halved grids, with observed convergence orders.
inline ConvergenceReport convergence_study(const SurfaceSpec& spec, const QuantumNumbers& qn,
                                           std::span<const RadialGrid> grids) {
    if (grids.size() < 3) {
        throw ConfigError("convergence study needs at least 3 levels");
    }
    for (std::size_t k = 0; k + 1 < grids.size(); ++k) {
        const auto& coarse = grids[k];
        const auto& fine = grids[k + 1];
        if (coarse == fine) {
            throw ConfigError("convergence study: identical grids at successive levels");
        }
        if (coarse.r_min() != fine.r_min() || coarse.r_max() != fine.r_max() ||
            std::abs(coarse.h() - 2.0 * fine.h()) > 1e-12 * coarse.h()) {
            throw ConfigError("convergence study: each level must halve h on the same interval");
        }
    }

    ConvergenceReport report;
    for (const auto& grid : grids) {
        const auto solution = eigen_solve(assemble(spec, qn, grid), convergence_kappas);
        ConvergenceLevel level{grid.h(), {}};
        std::copy(solution.kappas.begin(), solution.kappas.end(), level.kappas.begin());
        report.levels.push_back(level);
    }
    for (std::size_t k = 0; k + 2 < report.levels.size(); ++k) {
        std::array<double, convergence_kappas> p{};
        for (int n = 0; n < convergence_kappas; ++n) {
            const double d1 = std::abs(report.levels[k].kappas[n] - report.levels[k + 1].kappas[n]);
            const double d2 = std::abs(report.levels[k + 1].kappas[n] - report.levels[k + 2].kappas[n]);
            p[n] = std::log2(d1 / d2);
        }
        report.orders.push_back(p);
    }
    return report;
}

inline ConvergenceReport convergence_study(const SurfaceSpec& spec, const QuantumNumbers& qn,
                                           const RadialGrid& base_grid, int levels) {
    if (levels < 3) {
        throw ConfigError("convergence study needs at least 3 levels");
    }
    std::vector<RadialGrid> grids{base_grid};
    for (int k = 1; k < levels; ++k) {
        grids.push_back(grids.back().halved());
    }
    return convergence_study(spec, qn, std::span<const RadialGrid>(grids));
}

namespace detail {

// d/dr [sqrt(r) Z_nu(kappa r)] at r, for Z = J or Y given as a callable of (order, x).
template <class Bessel>
double sqrt_r_bessel_slope(Bessel&& z, int nu, double kappa, double r) {
    const double x = kappa * r;
    const double dz = nu == 0 ? -z(1, x) : 0.5 * (z(nu - 1, x) - z(nu + 1, x));
    return z(nu, x) / (2.0 * std::sqrt(r)) + std::sqrt(r) * kappa * dz;
}

} // namespace detail

/// Boundary determinant of the flat-surface problem: the combination
/// sqrt(r) [J_nu(kappa r) Y_nu(kappa a) - Y_nu(kappa r) J_nu(kappa a)] vanishes at
/// r = a; its slope at r = R, divided by Y_nu(kappa a), is returned.
inline double flat_boundary_determinant(const QuantumNumbers& qn, double r_min, double r_max, double kappa) {
    const int nu = std::abs(spinor_bessel_order(qn));
    auto j = [](int order, double x) { return bessel_j(order, x); };
    auto y = [](int order, double x) {
        return order < 0 ? ((-order) % 2 ? -1.0 : 1.0) * std::cyl_neumann(-order, x)
                         : std::cyl_neumann(static_cast<double>(order), x);
    };
    const double ratio = bessel_j(nu, kappa * r_min) / y(nu, kappa * r_min);
    return detail::sqrt_r_bessel_slope(j, nu, kappa, r_max) - ratio * detail::sqrt_r_bessel_slope(y, nu, kappa, r_max);
}

/// First `count` positive roots kappa of the flat boundary determinant, located
/// by a sign-change scan (step 1e-3 pi / (r_max - r_min)) and bisection.
inline std::vector<double> flat_boundary_roots(const QuantumNumbers& qn, double r_min, double r_max, int count) {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw ConfigError("flat_boundary_roots: need 0 < r_min < r_max");
    }
    const double step = 1e-3 * std::numbers::pi / (r_max - r_min);
    std::vector<double> roots;
    double lo = step;
    double f_lo = flat_boundary_determinant(qn, r_min, r_max, lo);
    while (static_cast<int>(roots.size()) < count) {
        const double hi = lo + step;
        const double f_hi = flat_boundary_determinant(qn, r_min, r_max, hi);
        if (f_lo == 0.0) {
            roots.push_back(lo);
        } else if (f_lo * f_hi < 0.0) {
            double a = lo, b = hi, fa = f_lo;
            for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * b; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = flat_boundary_determinant(qn, r_min, r_max, mid);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    return roots;
}

} // namespace curvedirac
