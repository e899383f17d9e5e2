#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "curvedirac/postproc.hpp"
#include "oracles.hpp"

using namespace curvedirac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const RadialGrid reference_grid(0.01, 5.0, 0.001);
const SurfaceSpec gaussian = SurfaceSpec::gaussian(1.3, 1.0);

} // namespace

TEST_CASE("densities are normalized and additive") {
    for (auto spec : {gaussian, SurfaceSpec::volcano(1.3, 2.0), SurfaceSpec::flat()}) {
        for (int twice_m : {1, 3, 5}) {
            const auto pair = solve_spinor_pair(spec, twice_m, reference_grid, 6);
            for (std::size_t k = 1; k <= 6; ++k) {
                const auto d = density_from_solutions(pair, k);
                CHECK_THAT(total_probability(d), WithinAbs(1.0, 1e-8));
                CHECK(d.kappa_a == pair.a.kappas[k - 1]);
                CHECK(d.kappa_b == pair.b.kappas[k - 1]);
                CHECK(d.index == k);
                for (std::size_t i = 0; i < d.rho.size(); ++i) {
                    CHECK(d.rho[i] == d.density_a[i] + d.density_b[i]);
                }
                // Re-pairing a normalized density leaves it unchanged.
                const auto again = normalize_density(d.density_a_profile(), d.density_b_profile());
                CHECK(std::isfinite(again.scale));
            }
            CHECK_THROWS_AS(density_from_solutions(pair, 0), std::out_of_range);
            CHECK_THROWS_AS(density_from_solutions(pair, 7), std::out_of_range);
        }
    }
}

TEST_CASE("density from a zero mode is rejected") {
    auto pair = solve_spinor_pair(SurfaceSpec::flat(), 1, RadialGrid(0.01, 1.0, 0.01), 2);
    std::fill(pair.a.modes[0].begin(), pair.a.modes[0].end(), 0.0);
    std::fill(pair.b.modes[0].begin(), pair.b.modes[0].end(), 0.0);
    CHECK_THROWS_AS(density_from_solutions(pair, 1), DomainError);
}

TEST_CASE("find_peaks basics") {
    const RadialGrid grid(0.001, 3.001, 0.001);
    const auto monotone = RadialProfile::sample(grid, [](double r) { return r * r; });
    CHECK(find_peaks(monotone, 1e-6).empty());
    CHECK(find_peaks(monotone).empty());

    const auto wave = RadialProfile::sample(grid, [](double r) { return std::pow(std::sin(std::numbers::pi * r), 2); });
    const auto peaks = find_peaks(wave, 0.1);
    REQUIRE(peaks.size() == 3);
    CHECK_THAT(peaks[0].r, WithinAbs(0.5, 1e-3));
    CHECK_THAT(peaks[1].r, WithinAbs(1.5, 1e-3));
    CHECK_THAT(peaks[2].r, WithinAbs(2.5, 1e-3));
    for (const auto& p : peaks) {
        CHECK_THAT(p.value, WithinAbs(1.0, 1e-5));
        CHECK_THAT(p.prominence, WithinAbs(1.0, 1e-4));
    }
    CHECK_THROWS_AS(find_peaks(wave, 0.0), ConfigError);
    CHECK_THROWS_AS(find_peaks(wave, -1.0), ConfigError);
}

TEST_CASE("find_peaks prominence filter") {
    const RadialGrid grid(0.01, 4.01, 0.001);
    // A small ripple on a large bump.
    const auto profile = RadialProfile::sample(grid, [](double r) {
        return std::exp(-std::pow(r - 2.0, 2)) + 0.05 * std::sin(40.0 * r);
    });
    const auto all = find_peaks(profile, 1e-9);
    const auto strong = find_peaks(profile, 0.5);
    CHECK(all.size() > 5);
    REQUIRE(strong.size() == 1);
    CHECK_THAT(strong[0].r, WithinAbs(2.0, 0.16));  // within one ripple period
}

TEST_CASE("find_peaks is invariant under positive scaling") {
    const auto pair = solve_spinor_pair(gaussian, 1, reference_grid, 5);
    const auto d = density_from_solutions(pair, 5);
    const auto base = find_peaks(d.rho_profile());
    std::vector<double> scaled(d.rho.size());
    for (double factor : {1e-3, 7.5, 1e4}) {
        for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = factor * d.rho[i];
        const auto peaks = find_peaks(RadialProfile(reference_grid, scaled));
        REQUIRE(peaks.size() == base.size());
        for (std::size_t i = 0; i < peaks.size(); ++i) {
            CHECK(peaks[i].r == base[i].r);
            CHECK_THAT(peaks[i].value, WithinRel(factor * base[i].value, 1e-14));
        }
    }
}

TEST_CASE("B density of the Gaussian m = 1/2 mode has two peaks near the bump") {
    const auto pair = solve_spinor_pair(gaussian, 1, reference_grid, 5);
    const auto d = density_from_solutions(pair, 5);
    int near = 0;
    for (const auto& p : find_peaks(d.density_b_profile(), 0.01)) {
        if (p.r < 2.0 * gaussian.width()) ++near;
    }
    CHECK(near >= 2);
}

TEST_CASE("fit_spectrum") {
    std::vector<double> line(8);
    for (int n = 1; n <= 8; ++n) line[n - 1] = 0.6 * n;
    const auto exact = fit_spectrum(line);
    CHECK_THAT(exact.slope, WithinRel(0.6, 1e-14));
    CHECK_THAT(exact.intercept, WithinAbs(0.0, 1e-14));
    CHECK_THAT(exact.r_squared, WithinAbs(1.0, 1e-14));
    CHECK(exact.n_used == 8);
    CHECK_FALSE(exact.degenerate);

    const std::vector<double> flat(6, 2.0);
    const auto degenerate = fit_spectrum(flat);
    CHECK(degenerate.slope == 0.0);
    CHECK(degenerate.r_squared == 0.0);
    CHECK(degenerate.degenerate);

    CHECK_THROWS_AS(fit_spectrum(std::vector<double>{1, 2, 3, 4}), ConfigError);

    const std::vector<double> curved{1, 4, 9, 16, 25, 36};
    const auto quad = fit_spectrum(curved);
    CHECK(quad.r_squared < 1.0);
    CHECK(quad.r_squared > 0.9);
}

TEST_CASE("Gaussian spectrum is linear") {
    const auto s = eigen_solve(assemble(gaussian, {1, Sublattice::A}, reference_grid), 20);
    CHECK(fit_spectrum(s.kappas).r_squared >= 0.999);
}

TEST_CASE("flat box slope agrees with the analytic roots") {
    const QuantumNumbers qn(1, Sublattice::A);
    const auto roots = oracle::flat_roots(spinor_bessel_order(qn), 0.01, 5.0, 20);
    const auto exact = fit_spectrum(roots);
    double previous_gap = 1.0;
    for (double h : {0.002, 0.001}) {
        const auto s = eigen_solve(assemble(SurfaceSpec::flat(), qn, RadialGrid(0.01, 5.0, h)), 20);
        const double gap = std::abs(fit_spectrum(s.kappas).slope - exact.slope);
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
    CHECK(previous_gap < 1e-4 * exact.slope);
    CHECK_THAT(exact.slope, WithinRel(std::numbers::pi / 4.99, 0.01));
}
