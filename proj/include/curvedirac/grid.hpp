#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "curvedirac/errors.hpp"

namespace curvedirac {

/// Uniform radial grid r_i = r_min + i h, i = 0 .. intervals.
///
/// Node 0 carries the Dirichlet condition and node `intervals` sits on r_max,
/// where the Neumann condition is imposed. The unknowns of the discrete
/// eigenproblem are nodes 1 .. intervals, i.e. the n_interior strictly interior
/// nodes plus the r_max node.
class RadialGrid {
public:
    static constexpr int min_interior_nodes = 16;

    RadialGrid(double r_min, double r_max, double h) : r_min_(r_min), r_max_(r_max), h_(h) {
        if (!(r_min > 0.0) || !std::isfinite(r_min)) {
            throw ConfigError("grid: r_min must be positive");
        }
        if (!(r_max > r_min) || !std::isfinite(r_max)) {
            throw ConfigError("grid: r_max must exceed r_min");
        }
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw ConfigError("grid: step h must be positive");
        }
        const double span = r_max - r_min;
        const double count = std::round(span / h);
        if (std::abs(count * h - span) > 1e-6 * h) {
            throw ConfigError("grid: step h must divide r_max - r_min");
        }
        if (count - 1.0 < min_interior_nodes) {
            throw ConfigError("grid: fewer than " + std::to_string(min_interior_nodes) +
                              " interior nodes");
        }
        if (count > 1e8) {
            throw ConfigError("grid: too many nodes");
        }
        intervals_ = static_cast<int>(count);
    }

    double r_min() const noexcept { return r_min_; }
    double r_max() const noexcept { return r_max_; }
    double h() const noexcept { return h_; }
    int intervals() const noexcept { return intervals_; }
    int n_interior() const noexcept { return intervals_ - 1; }
    /// Rows of the discretized operator (interior nodes plus the r_max node).
    int unknowns() const noexcept { return intervals_; }
    int node_count() const noexcept { return intervals_ + 1; }
    double node(int i) const noexcept { return r_min_ + i * h_; }

    std::vector<double> nodes() const {
        std::vector<double> out(node_count());
        for (int i = 0; i < node_count(); ++i) {
            out[i] = node(i);
        }
        return out;
    }

    RadialGrid halved() const { return {r_min_, r_max_, 0.5 * h_}; }

    bool operator==(const RadialGrid&) const = default;

private:
    double r_min_;
    double r_max_;
    double h_;
    int intervals_ = 0;
};

/// Samples of a radial function, one per grid node.
class RadialProfile {
public:
    RadialProfile(RadialGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.node_count()) {
            throw ConfigError("profile: sample count does not match grid");
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw DomainError("profile: non-finite sample");
            }
        }
    }

    static RadialProfile sample(const RadialGrid& grid, const std::function<double(double)>& fn) {
        std::vector<double> values(grid.node_count());
        for (int i = 0; i < grid.node_count(); ++i) {
            values[i] = fn(grid.node(i));
        }
        return {grid, std::move(values)};
    }

    const RadialGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

} // namespace curvedirac
