#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "curvedirac/quadrature.hpp"
#include "curvedirac/solver.hpp"
#include "oracles.hpp"

using namespace curvedirac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const RadialGrid reference_grid(0.01, 5.0, 0.001);
const SurfaceSpec gaussian = SurfaceSpec::gaussian(1.3, 1.0);
const SurfaceSpec volcano = SurfaceSpec::volcano(1.3, 2.0);

double density_norm(const RadialGrid& grid, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = grid.node(static_cast<int>(i)) * (a[i] * a[i] + b[i] * b[i]);
    return 2.0 * std::numbers::pi * quadrature::simpson(w, grid.h());
}

// Exact flat eigenfunction sqrt(r)[J(kr) Y(ka) - Y(kr) J(ka)], normalized like the modes.
std::vector<double> flat_mode(const RadialGrid& grid, int nu, double kappa) {
    nu = std::abs(nu);
    const double a = grid.r_min();
    const double ja = boost::math::cyl_bessel_j(nu, kappa * a), ya = boost::math::cyl_neumann(nu, kappa * a);
    std::vector<double> psi(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.node(i);
        psi[i] = std::sqrt(r) * (boost::math::cyl_bessel_j(nu, kappa * r) * ya - boost::math::cyl_neumann(nu, kappa * r) * ja);
    }
    psi[0] = 0.0;
    const std::vector<double> zero(psi.size(), 0.0);
    const double scale = 1.0 / std::sqrt(density_norm(grid, psi, zero));
    const auto lead = std::find_if(psi.begin(), psi.end(), [](double v) { return std::abs(v) > 0.0; });
    const double sign = *lead < 0.0 ? -1.0 : 1.0;
    for (double& v : psi) v *= sign * scale;
    return psi;
}

} // namespace

TEST_CASE("flat stencil entries") {
    const RadialGrid grid(0.01, 1.0, 0.01);
    const QuantumNumbers qn(1, Sublattice::A);
    const auto op = assemble(SurfaceSpec::flat(), qn, grid);
    const auto& m = op.matrix;
    const double h = grid.h(), h2 = h * h;
    REQUIRE(m.size() == static_cast<std::size_t>(grid.unknowns()));
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        const double r = grid.node(static_cast<int>(k) + 1);
        CHECK_THAT(m.diag[k], WithinRel(2.0 / h2 + 0.75 / (r * r), 1e-14));
        CHECK_THAT(m.super[k], WithinRel(-1.0 / h2, 1e-14));
        if (k > 0) {
            CHECK_THAT(m.sub[k - 1], WithinRel(-1.0 / h2, 1e-14));
        }
    }
    // Reflected ghost at r_max doubles the coupling to the previous node.
    CHECK_THAT(m.sub.back(), WithinRel(-2.0 / h2, 1e-14));
}

TEST_CASE("curved stencil follows the radial operator") {
    const RadialGrid grid(0.01, 2.0, 0.01);
    for (auto spec : {gaussian, volcano}) {
        const QuantumNumbers qn(3, Sublattice::A);
        const auto op = assemble(spec, qn, grid);
        const double h = grid.h();
        for (std::size_t k = 1; k + 1 < op.matrix.size(); k += 17) {
            const double r = grid.node(static_cast<int>(k) + 1);
            const double F = fermi_factor(spec, r), dF = fermi_factor_derivative(spec, r);
            const double A = pseudo_gauge(spec, r), dA = pseudo_gauge_derivative(spec, r);
            const double p2 = F * F, p1 = F * (dF + 2 * A);
            const double q = F * dA - (1.5 / (r * r)) * (1.5 + F) + A * A;
            CHECK_THAT(op.matrix.sub[k - 1], WithinRel(-(p2 / (h * h) - p1 / (2 * h)), 1e-12));
            CHECK_THAT(op.matrix.diag[k], WithinRel(2 * p2 / (h * h) - q, 1e-12));
            CHECK_THAT(op.matrix.super[k], WithinRel(-(p2 / (h * h) + p1 / (2 * h)), 1e-12));
        }
    }
}

TEST_CASE("reference grid dimension") {
    const auto op = assemble(gaussian, {1, Sublattice::A}, reference_grid);
    CHECK(op.matrix.size() == 4990);
}

TEST_CASE("B assembly is A assembly at -m") {
    for (auto spec : {gaussian, volcano}) {
        for (int twice_m : {1, 3, 5}) {
            const auto b = assemble(spec, {twice_m, Sublattice::B}, reference_grid);
            const auto a = assemble(spec, {-twice_m, Sublattice::A}, reference_grid);
            CHECK(b.matrix.sub == a.matrix.sub);
            CHECK(b.matrix.diag == a.matrix.diag);
            CHECK(b.matrix.super == a.matrix.super);
        }
    }
}

TEST_CASE("eigencount limits") {
    const auto op = assemble(gaussian, {1, Sublattice::A}, RadialGrid(0.01, 1.0, 0.01));
    CHECK_THROWS_AS(eigen_solve(op, 0), ConfigError);
    CHECK_THROWS_AS(eigen_solve(op, max_eigencount + 1), ConfigError);
}

TEST_CASE("flat spectrum matches the boundary-determinant roots") {
    for (int twice_m : {1, 3}) {
        for (auto lattice : {Sublattice::A, Sublattice::B}) {
            const QuantumNumbers qn(twice_m, lattice);
            const auto roots = oracle::flat_roots(spinor_bessel_order(qn), 0.01, 5.0, 5);
            const auto library_roots = flat_boundary_roots(qn, 0.01, 5.0, 5);
            double err_coarse = 0.0, err_fine = 0.0;
            const auto coarse = eigen_solve(assemble(SurfaceSpec::flat(), qn, RadialGrid(0.01, 5.0, 0.002)), 5);
            const auto fine = eigen_solve(assemble(SurfaceSpec::flat(), qn, reference_grid), 5);
            for (int n = 0; n < 5; ++n) {
                CHECK_THAT(library_roots[n], WithinRel(roots[n], 1e-12));
                err_coarse = std::max(err_coarse, std::abs(coarse.kappas[n] - roots[n]));
                err_fine = std::max(err_fine, std::abs(fine.kappas[n] - roots[n]));
            }
            INFO("2m=" << twice_m << " lattice " << to_string(lattice) << " errors " << err_coarse << " " << err_fine);
            CHECK(err_fine < 1e-5);
            CHECK_THAT(err_coarse / err_fine, WithinAbs(4.0, 0.6));
        }
    }
}

TEST_CASE("spectra are real, positive and strictly increasing") {
    for (auto spec : {gaussian, volcano, SurfaceSpec::flat()}) {
        for (int twice_m : {1, -1, 3, -3}) {
            const auto s = eigen_solve(assemble(spec, {twice_m, Sublattice::A}, reference_grid), 20);
            CHECK(s.path == EigenPath::SymmetrizedBisection);
            CHECK(s.max_imag_residue == 0.0);
            CHECK(s.kappas.front() > 0.0);
            CHECK(std::adjacent_find(s.kappas.begin(), s.kappas.end(), std::greater_equal<>()) == s.kappas.end());
            for (std::size_t n = 0; n < s.size(); ++n) {
                CHECK(s.kappas[n] == std::sqrt(s.lambdas[n]));
            }
        }
    }
}

TEST_CASE("modes: normalization, boundaries and sign") {
    for (auto spec : {gaussian, volcano, SurfaceSpec::flat()}) {
        for (int twice_m : {1, -1, 3, -3}) {
            const auto s = eigen_solve(assemble(spec, {twice_m, Sublattice::A}, reference_grid), 10);
            for (std::size_t k = 1; k <= s.size(); ++k) {
                const auto mode = s.mode(k);
                const auto& v = mode.values();
                const std::vector<double> zero(v.size(), 0.0);
                CHECK_THAT(density_norm(reference_grid, v, zero), WithinAbs(1.0, 1e-10));
                CHECK(v.front() == 0.0);
                const double top = std::abs(*std::max_element(v.begin(), v.end(), [](double a, double b) {
                    return std::abs(a) < std::abs(b);
                }));
                const std::size_t n = v.size();
                const double slope = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * reference_grid.h());
                CHECK(std::abs(slope) <= 1e-6 * top);
                const auto lead = std::find_if(v.begin(), v.end(), [&](double x) { return std::abs(x) > 1e-8 * top; });
                CHECK(*lead > 0.0);
            }
            CHECK_THROWS_AS(s.mode(0), std::out_of_range);
            CHECK_THROWS_AS(s.mode(11), std::out_of_range);
        }
    }
}

TEST_CASE("modes are orthogonal in the symmetrizing inner product") {
    for (auto spec : {gaussian, volcano}) {
        const auto op = assemble(spec, {1, Sublattice::A}, reference_grid);
        const auto s = eigen_solve(op, 10);
        const auto d = symmetrizing_scales(op.matrix);
        auto inner = [&](std::size_t i, std::size_t j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) sum += d[k] * d[k] * s.modes[i][k + 1] * s.modes[j][k + 1];
            return sum;
        };
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size(); ++j) {
                CHECK(std::abs(inner(i, j)) <= 1e-8 * std::sqrt(inner(i, i) * inner(j, j)));
            }
        }
    }
}

TEST_CASE("spinor pair reuses the sign-flipped A problem") {
    for (auto spec : {gaussian, volcano}) {
        const auto pair = solve_spinor_pair(spec, 1, reference_grid, 10);
        const auto direct = eigen_solve(assemble(spec, {-1, Sublattice::A}, reference_grid), 10);
        CHECK(pair.b.kappas == direct.kappas);
        CHECK(pair.b.lambdas == direct.lambdas);
        CHECK(pair.b.qn == QuantumNumbers(1, Sublattice::B));
        CHECK(pair.a.qn == QuantumNumbers(1, Sublattice::A));
        for (std::size_t k = 0; k < pair.a.size(); ++k) {
            CHECK_THAT(density_norm(reference_grid, pair.a.modes[k], pair.b.modes[k]), WithinAbs(1.0, 1e-10));
            // Joint scaling keeps each component's shape.
            const double ratio = pair.b.modes[k][2000] / direct.modes[k][2000];
            CHECK_THAT(pair.b.modes[k][3000], WithinRel(ratio * direct.modes[k][3000], 1e-12));
        }
    }
}

TEST_CASE("flat modes reproduce the free Bessel shapes") {
    const QuantumNumbers qn(1, Sublattice::A);
    double previous = 0.0;
    for (double h : {0.002, 0.001}) {
        const RadialGrid grid(0.01, 5.0, h);
        const auto s = eigen_solve(assemble(SurfaceSpec::flat(), qn, grid), 5);
        double worst = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const auto exact = flat_mode(grid, spinor_bessel_order(qn), s.kappas[k]);
            for (std::size_t i = 0; i < exact.size(); ++i) worst = std::max(worst, std::abs(exact[i] - s.modes[k][i]));
        }
        INFO("h=" << h << " worst shape error " << worst);
        CHECK(worst < 1e-4);
        if (previous > 0.0) CHECK_THAT(previous / worst, WithinAbs(4.0, 0.6));
        previous = worst;
    }
}

TEST_CASE("convergence study") {
    const RadialGrid base(0.01, 5.0, 4.99 / 500);
    const auto flat = convergence_study(SurfaceSpec::flat(), {1, Sublattice::A}, base, 3);
    REQUIRE(flat.levels.size() == 3);
    REQUIRE(flat.orders.size() == 1);
    CHECK(flat.levels[1].h == 0.5 * flat.levels[0].h);
    for (double p : flat.orders[0]) {
        CHECK(p >= 1.8);
        CHECK(p <= 2.2);
    }

    const auto curved = convergence_study(gaussian, {1, Sublattice::A}, reference_grid, 3);
    const double k5 = curved.levels[0].kappas[4], k5_fine = curved.levels[1].kappas[4];
    CHECK(std::abs(k5 - k5_fine) < 5e-5 * k5);

    const std::vector<RadialGrid> same{base, base, base};
    CHECK_THROWS_AS(convergence_study(gaussian, {1, Sublattice::A}, same), ConfigError);
    const std::vector<RadialGrid> uneven{base, RadialGrid(0.01, 5.0, 4.99 / 1500), RadialGrid(0.01, 5.0, 4.99 / 3000)};
    CHECK_THROWS_AS(convergence_study(gaussian, {1, Sublattice::A}, uneven), ConfigError);
    CHECK_THROWS_AS(convergence_study(gaussian, {1, Sublattice::A}, base, 2), ConfigError);
}

TEST_CASE("higher angular momentum lifts the spectrum") {
    for (auto spec : {gaussian, volcano}) {
        for (auto lattice : {Sublattice::A, Sublattice::B}) {
            const auto half = eigen_solve(assemble(spec, {1, lattice}, reference_grid), 10);
            const auto three = eigen_solve(assemble(spec, {3, lattice}, reference_grid), 10);
            for (int n = 0; n < 10; ++n) CHECK(three.kappas[n] > half.kappas[n]);
        }
    }
}
