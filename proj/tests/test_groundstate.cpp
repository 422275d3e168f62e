#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "becflow/groundstate.hpp"

using namespace becflow;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;
using cd = std::complex<double>;

PotentialSpec box_spec(double L_A, double s = 0.127) {
    PotentialSpec spec;
    spec.reservoir_a_length = L_A;
    spec.lattice_length = 10.0 * pi;
    spec.reservoir_b_length = 20.0 * pi;
    spec.lattice_depth = s;
    spec.shutter_closed = true;
    return spec;
}

PotentialField zero_potential(const Grid& grid) {
    PotentialField f;
    f.values.assign(grid.num_points, 0.0);
    return f;
}
} // namespace

TEST_CASE("chemical potential of simple states") {
    const auto grid = build_grid(0.0, 8.0 * pi, 256);
    const auto pot = zero_potential(grid);

    SECTION("uniform state on a flat periodic interval: mu = beta / Lambda") {
        std::vector<cd> psi(grid.num_points, cd(1.0 / std::sqrt(grid.length()), 0.0));
        const double beta = 42.0;
        CHECK(chemical_potential(psi, pot, grid, beta) ==
              Approx(beta / grid.length()).epsilon(1e-12));
    }

    SECTION("beta = 0: mu is purely kinetic and equals the energy") {
        std::vector<cd> psi(grid.num_points);
        for (std::size_t i = 0; i < grid.num_points; ++i)
            psi[i] = std::sqrt(2.0 / grid.length()) * std::sin(grid.points[i] / 4.0);
        normalize(psi, grid);
        const double mu = chemical_potential(psi, pot, grid, 0.0);
        CHECK(mu == Approx(total_energy(psi, pot, grid, 0.0)).epsilon(1e-12));
        CHECK(mu > 0.0);
    }

    SECTION("unnormalized input is rejected") {
        std::vector<cd> psi(grid.num_points, cd(1.0, 0.0));
        CHECK_THROWS_AS(chemical_potential(psi, pot, grid, 1.0), config_error);
    }
}

TEST_CASE("gradient flow reaches the linear box ground state at beta = 0") {
    const double L_A = 160.0 * pi;
    const auto spec = box_spec(L_A);
    const auto grid = build_grid(-L_A - 8.0, spec.right_extent() + 8.0, 4096);
    const auto pot = sample_potential(spec, grid);

    GradientFlowOptions opt;
    opt.tol = 1e-9;
    const auto gs = normalized_gradient_flow(pot, grid, 0.0, opt);
    REQUIRE(gs.converged);
    // Soft tanh walls widen the effective box slightly; a few percent is the
    // expected deviation from the hard-wall value pi^2 / (2 L_A^2).
    CHECK(gs.mu == Approx(pi * pi / (2.0 * L_A * L_A)).epsilon(0.05));
}

TEST_CASE("gradient flow reproduces the Thomas-Fermi chemical potential") {
    const double L_A = 40.0 * pi;
    const double beta = 397.89 / 4.0; // keeps beta / L_A at the full-geometry value
    const auto spec = box_spec(L_A);
    const auto grid = build_grid(-L_A - 8.0, spec.right_extent() + 8.0, 2048);
    const auto pot = sample_potential(spec, grid);

    GradientFlowOptions opt;
    opt.tol = 1e-8;
    opt.energy_every = 20;
    const auto gs = normalized_gradient_flow(pot, grid, beta, opt);
    REQUIRE(gs.converged);
    CHECK(norm_squared(gs.psi, grid) == Approx(1.0).margin(1e-12));
    CHECK(gs.mu == Approx(beta / L_A).epsilon(0.02));

    SECTION("energy decreases monotonically along the flow") {
        REQUIRE(gs.energy_trace.size() > 10);
        for (std::size_t i = 1; i < gs.energy_trace.size(); ++i)
            CHECK(gs.energy_trace[i] <= gs.energy_trace[i - 1] + 1e-10);
    }

    SECTION("interior density is Thomas-Fermi flat") {
        const double expected = 1.0 / L_A;
        for (double frac : {0.25, 0.5, 0.75}) {
            const auto i = grid.index_near(-L_A * frac);
            CHECK(std::norm(gs.psi[i]) == Approx(expected).epsilon(0.05));
        }
    }

    SECTION("converged state is real up to a global phase") {
        std::size_t imax = 0;
        for (std::size_t i = 0; i < grid.num_points; ++i)
            if (std::norm(gs.psi[i]) > std::norm(gs.psi[imax])) imax = i;
        const double phase = std::arg(gs.psi[imax]);
        double worst = 0.0;
        for (const auto& v : gs.psi)
            worst = std::max(worst, std::abs(std::imag(v * std::polar(1.0, -phase))));
        CHECK(worst < 1e-10);
    }

    SECTION("state is confined to reservoir A") {
        const auto i_latt = grid.index_near(5.0 * pi);
        const auto i_b = grid.index_near(spec.lattice_length + 5.0 * pi);
        CHECK(std::norm(gs.psi[i_latt]) < 1e-12);
        CHECK(std::norm(gs.psi[i_b]) < 1e-12);
    }
}

TEST_CASE("gradient flow input validation") {
    const auto spec = box_spec(8.0 * pi);
    const auto grid = build_grid(-8.0 * pi - 8.0, spec.right_extent() + 8.0, 512);
    const auto pot = sample_potential(spec, grid);
    CHECK_THROWS_AS(normalized_gradient_flow(pot, grid, -1.0, {}), config_error);

    auto open_spec = spec;
    open_spec.shutter_closed = false;
    const auto open_pot = sample_potential(open_spec, grid);
    CHECK_THROWS_AS(normalized_gradient_flow(open_pot, grid, 1.0, {}), config_error);
}

TEST_CASE("non-convergence is reported with the last residual") {
    const auto spec = box_spec(8.0 * pi);
    const auto grid = build_grid(-8.0 * pi - 8.0, spec.right_extent() + 8.0, 512);
    const auto pot = sample_potential(spec, grid);
    GradientFlowOptions opt;
    opt.tol = 1e-16; // unreachable
    opt.max_iter = 200;
    const auto gs = normalized_gradient_flow(pot, grid, 20.0, opt);
    CHECK_FALSE(gs.converged);
    CHECK(gs.iterations == 200);
    CHECK(std::isfinite(gs.residual));
    CHECK(gs.residual > 0.0);
}
