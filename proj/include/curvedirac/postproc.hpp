#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "curvedirac/analytic.hpp"
#include "curvedirac/errors.hpp"
#include "curvedirac/grid.hpp"
#include "curvedirac/solver.hpp"

namespace curvedirac {

/// |psi_A|^2, |psi_B|^2 and their sum for one jointly normalized spinor.
struct SpinorDensity {
    RadialGrid grid;
    std::vector<double> psi_a;
    std::vector<double> psi_b;
    std::vector<double> density_a;
    std::vector<double> density_b;
    std::vector<double> rho;
    double kappa_a;
    double kappa_b;
    SurfaceSpec spec;
    int twice_m;
    std::size_t index;

    RadialProfile rho_profile() const { return {grid, rho}; }
    RadialProfile density_a_profile() const { return {grid, density_a}; }
    RadialProfile density_b_profile() const { return {grid, density_b}; }
};

/// 2 pi int r rho dr on the density's grid.
inline double total_probability(const SpinorDensity& density) {
    std::vector<double> weighted(density.rho.size());
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        weighted[i] = density.grid.node(static_cast<int>(i)) * density.rho[i];
    }
    return 2.0 * std::numbers::pi * quadrature::simpson(weighted, density.grid.h());
}

/// Pairs the index-th (1-based) A and B modes, normalizes them jointly and
/// records both kappas.
inline SpinorDensity density_from_solutions(const SpinorSolution& pair, std::size_t index) {
    if (index < 1 || index > pair.a.size() || index > pair.b.size()) {
        throw std::out_of_range("density index " + std::to_string(index) + " outside the solved spectrum");
    }
    const auto joint = normalize_density(pair.a.mode(index), pair.b.mode(index));
    SpinorDensity out{pair.a.grid,
                      joint.psi_a.values(),
                      joint.psi_b.values(),
                      {},
                      {},
                      joint.rho.values(),
                      pair.a.kappas[index - 1],
                      pair.b.kappas[index - 1],
                      pair.a.spec,
                      pair.a.qn.twice_m(),
                      index};
    out.density_a.resize(out.psi_a.size());
    out.density_b.resize(out.psi_b.size());
    for (std::size_t i = 0; i < out.psi_a.size(); ++i) {
        out.density_a[i] = out.psi_a[i] * out.psi_a[i];
        out.density_b[i] = out.psi_b[i] * out.psi_b[i];
    }
    return out;
}

struct Peak {
    double r;
    double value;
    double prominence;
};

/// Interior local maxima (v[i-1] < v[i] >= v[i+1]) whose topographic
/// prominence reaches `min_prominence`, sorted by r.
///
/// Prominence: walk left and right until a strictly higher sample or the end
/// of the profile; the peak height minus the larger of the two minima met on
/// the way.
inline std::vector<Peak> find_peaks(const RadialProfile& profile, double min_prominence) {
    if (!(min_prominence > 0.0)) {
        throw ConfigError("find_peaks: min_prominence must be positive");
    }
    const auto& v = profile.values();
    const std::size_t n = v.size();
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) {
            continue;
        }
        double left_min = v[i];
        for (std::size_t j = i; j-- > 0;) {
            if (v[j] > v[i]) break;
            left_min = std::min(left_min, v[j]);
        }
        double right_min = v[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (v[j] > v[i]) break;
            right_min = std::min(right_min, v[j]);
        }
        const double prominence = v[i] - std::max(left_min, right_min);
        if (prominence >= min_prominence) {
            peaks.push_back({profile.grid().node(static_cast<int>(i)), v[i], prominence});
        }
    }
    return peaks;
}

/// Default prominence threshold: 1% of the profile maximum.
inline std::vector<Peak> find_peaks(const RadialProfile& profile) {
    const auto& v = profile.values();
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > 0.0)) {
        return {};
    }
    return find_peaks(profile, 0.01 * top);
}

struct SpectrumFit {
    double slope;
    double intercept;
    double r_squared;
    std::size_t n_used;
    bool degenerate;  // zero variance in kappa; r_squared reported as 0
};

/// Ordinary least squares of kappa_n against n = 1, 2, ...
inline SpectrumFit fit_spectrum(std::span<const double> kappas) {
    const std::size_t n = kappas.size();
    if (n < 5) {
        throw ConfigError("fit_spectrum: need at least 5 eigenvalues");
    }
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += static_cast<double>(i + 1);
        mean_y += kappas[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i + 1) - mean_x;
        const double dy = kappas[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;
    if (syy == 0.0) {
        return {slope, intercept, 0.0, n, true};
    }
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = kappas[i] - (intercept + slope * static_cast<double>(i + 1));
        ss_res += e * e;
    }
    return {slope, intercept, std::clamp(1.0 - ss_res / syy, 0.0, 1.0), n, false};
}

} // namespace curvedirac
