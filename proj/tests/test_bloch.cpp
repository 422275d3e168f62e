#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "becflow/bloch.hpp"
#include "oracles.hpp"

using namespace becflow;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("energy quadrature limits") {
    SECTION("free plane wave: q^2/2") {
        CHECK(energy_quadrature(0.3, 0.0, 0.0, 0.0, 0.0) == Approx(0.045).margin(1e-12));
    }
    SECTION("uniform interacting state: q^2/2 + n beta/2 for any phi") {
        for (double phi : {0.0, 1.0, 2.5}) {
            CHECK(energy_quadrature(0.4, 0.0, phi, 0.0, 0.2) ==
                  Approx(0.08 + 0.1).margin(1e-12));
        }
    }
    SECTION("refining the panel count does not move the value") {
        const double a = energy_quadrature(0.0, 0.7, 0.3, 0.13, 0.05, 0.0, 512);
        const double b = energy_quadrature(0.0, 0.7, 0.3, 0.13, 0.05, 0.0, 4096);
        CHECK(a == Approx(b).margin(1e-10));
    }
}

TEST_CASE("closed-form energy agrees with the quadrature everywhere") {
    SECTION("free uniform case is exact") {
        CHECK(energy_closed_form(0.3, 0.0, 0.0, 0.0, 0.2) ==
              Approx(energy_quadrature(0.3, 0.0, 0.0, 0.0, 0.2)).margin(1e-14));
    }
    SECTION("lattice term contributes s/2 at theta = pi/4, phi = 0, q = 0") {
        const double s = 0.2;
        const double with = energy_closed_form(0.0, pi / 4.0, 0.0, s, 0.0);
        const double without = energy_closed_form(0.0, pi / 4.0, 0.0, 0.0, 0.0);
        CHECK(with - without == Approx(0.5 * s).margin(1e-14));
    }
    SECTION("randomized parameter sweep against the quadrature") {
        std::mt19937 rng(20240817);
        std::uniform_real_distribution<double> uq(-1.3, 1.3), uth(0.0, pi), uph(0.0, 2.0 * pi),
            us(0.0, 0.3), un(0.0, 0.5), uv(0.0, 0.3);
        double worst = 0.0;
        for (int k = 0; k < 500; ++k) {
            const double q = uq(rng), th = uth(rng), ph = uph(rng);
            const double s = us(rng), nb = un(rng), v = uv(rng);
            worst = std::max(worst, std::abs(energy_closed_form(q, th, ph, s, nb, v) -
                                             energy_quadrature(q, th, ph, s, nb, v)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("gradient of the energy surface is consistent with the closed form") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uq(-1.2, 1.2), uth(0.1, pi - 0.1),
        uph(0.0, 2.0 * pi);
    for (int k = 0; k < 50; ++k) {
        const double q = uq(rng), th = uth(rng), ph = uph(rng);
        const double s = 0.17, nb = 0.31;
        const auto g = bloch_detail::energy_gradient(q, th, ph, s, nb);
        const double h = 1e-6;
        const double gt = (energy_closed_form(q, th + h, ph, s, nb) -
                           energy_closed_form(q, th - h, ph, s, nb)) /
                          (2.0 * h);
        const double gp = (energy_closed_form(q, th, ph + h, s, nb) -
                           energy_closed_form(q, th, ph - h, s, nb)) /
                          (2.0 * h);
        CHECK(g[0] == Approx(gt).margin(1e-7));
        CHECK(g[1] == Approx(gp).margin(1e-7));
    }
}

TEST_CASE("band structure matches the linear plane-wave oracle at beta = 0") {
    const double s = 0.127;
    std::vector<double> qs;
    for (int k = 0; k <= 20; ++k) qs.push_back(-1.0 + 0.1 * k);
    const auto bands = band_structure(qs, s, 0.0);
    REQUIRE(bands.failed_q.empty());

    for (double q : qs) {
        std::vector<double> found;
        for (const auto& p : bands.points)
            if (p.q == q) found.push_back(p.energy_per_particle);
        const auto ev = oracles::linear_band_energies(q, s);
        REQUIRE(found.size() == 3);
        for (int b = 0; b < 3; ++b) CHECK(found[b] == Approx(ev[b]).margin(1e-10));
    }

    SECTION("every stationary point satisfies the gradient tolerance") {
        for (double q : {-1.0, 0.3, 1.0}) {
            for (const auto& p : stationary_points(q, s, 0.0))
                CHECK(p.grad_norm < 1e-8);
        }
    }
}

TEST_CASE("zone-edge gap") {
    SECTION("two-mode degenerate gap equals s") {
        CHECK(zone_edge_gap_two_mode(0.127) == Approx(0.127).margin(1e-14));
        CHECK(zone_edge_gap_two_mode(0.25) == Approx(0.25).margin(1e-14));
    }
    SECTION("three-mode gap differs from s only at order s^3") {
        const double s = 0.127;
        const auto pts = stationary_points(1.0, s, 0.0);
        REQUIRE(pts.size() == 3);
        const double gap3 = pts[1].energy - pts[0].energy;
        CHECK(std::abs(gap3 - s) < s * s * s);
        CHECK(std::abs(gap3 - s) > 0.0);
    }
}

TEST_CASE("band-edge loops appear exactly when n beta exceeds s") {
    SECTION("the four reference parameter sets") {
        CHECK(has_band_edge_loop(0.095, 0.329));
        CHECK(has_band_edge_loop(0.127, 0.393));
        CHECK_FALSE(has_band_edge_loop(0.13, 0.05));
        CHECK_FALSE(has_band_edge_loop(0.25, 0.04));
    }
    SECTION("bracketing scan around the threshold") {
        for (double s : {0.1, 0.15, 0.2}) {
            CHECK(has_band_edge_loop(s, 1.5 * s));
            CHECK_FALSE(has_band_edge_loop(s, 0.6 * s));
        }
    }
    SECTION("loop points are labeled on the loop branch") {
        const std::vector<double> qs = {1.0};
        const auto bands = band_structure(qs, 0.127, 0.393);
        int loops = 0;
        for (const auto& p : bands.points)
            if (p.branch == Branch::loop) ++loops;
        CHECK(loops > 0);
    }
}

TEST_CASE("constant offset shifts bands rigidly") {
    const double v = 0.37;
    const std::vector<double> qs = {0.0, 0.5, 1.0};
    const auto base = band_structure(qs, 0.127, 0.393, 0.0);
    const auto shifted = band_structure(qs, 0.127, 0.393, v);
    REQUIRE(base.points.size() == shifted.points.size());
    for (std::size_t i = 0; i < base.points.size(); ++i) {
        CHECK(shifted.points[i].energy_per_particle ==
              Approx(base.points[i].energy_per_particle + v).margin(1e-10));
        CHECK(shifted.points[i].chemical_potential ==
              Approx(base.points[i].chemical_potential + v).margin(1e-10));
        CHECK(shifted.points[i].theta == Approx(base.points[i].theta).margin(1e-8));
        CHECK(shifted.points[i].phi == Approx(base.points[i].phi).margin(1e-8));
    }
}

TEST_CASE("d-coefficient system") {
    SECTION("depth zero reduces to the uniform solution") {
        const auto d = solve_d_system(0.5, 100.0, 0.0);
        CHECK(d.d0 == Approx(std::sqrt(0.005)).epsilon(1e-14));
        CHECK(d.d1 == 0.0);
        CHECK(d.n == Approx(0.005).epsilon(1e-14));
    }

    SECTION("residuals and normalization hold across a parameter sample") {
        for (double mu : {0.16, 0.5, 0.795}) {
            for (double beta : {10.0, 99.4725, 397.89}) {
                for (double s : {0.0, 0.1, 0.25}) {
                    const auto d = solve_d_system(mu, beta, s);
                    const auto r = d.residuals();
                    CHECK(std::abs(r[0]) < 1e-10);
                    CHECK(std::abs(r[1]) < 1e-10);
                    CHECK(d.n == Approx(d.d0 * d.d0 + 0.5 * d.d1 * d.d1).margin(1e-12));
                }
            }
        }
    }

    SECTION("small-amplitude limit approaches the two-mode eigenpair") {
        // As s shrinks (with mu just above the linear ground energy) the
        // amplitude ratio converges to the linear eigenvector.
        double prev_rel = 1.0;
        for (double s : {0.12, 0.06, 0.03}) {
            const auto d = solve_d_system(1e-4, 100.0, s);
            const auto lin = oracles::two_mode_ground_q0(s);
            const double rel = std::abs(d.d1 / d.d0 - lin[1]) / std::abs(lin[1]);
            CHECK(rel < 0.1);
            CHECK(rel < prev_rel + 1e-12);
            prev_rel = rel;
            CHECK(d.n * d.beta < 2.0 * (1e-4 - lin[0]) + 1e-6);
        }
    }

    SECTION("invalid inputs") {
        CHECK_THROWS_AS(solve_d_system(0.5, 0.0, 0.1), config_error);
        CHECK_THROWS_AS(solve_d_system(0.5, 100.0, -0.1), config_error);
        CHECK_THROWS_AS(solve_d_system(-0.5, 100.0, 0.1), numerics_error);
    }
}

TEST_CASE("ansatz density") {
    const auto d = solve_d_system(0.795, 397.89, 0.127);

    SECTION("pure d0 state is flat") {
        DCoefficients flat;
        flat.d0 = 0.3;
        flat.d1 = 0.0;
        flat.n = 0.09;
        const std::vector<double> z = {0.0, 0.7, 2.1};
        for (double rho : bloch_density(flat, z)) CHECK(rho == Approx(0.09).margin(1e-15));
    }

    SECTION("spatial mean over one period equals n") {
        std::vector<double> z(512);
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = (static_cast<double>(i) + 0.5) * pi / 512.0;
        const auto rho = bloch_density(d, z);
        double mean = 0.0;
        for (double r : rho) mean += r;
        mean /= static_cast<double>(z.size());
        CHECK(mean == Approx(d.n).margin(1e-12));
    }

    SECTION("single-period modulation dominates the double-period term") {
        CHECK(2.0 * std::abs(d.d0 * d.d1) > 50.0 * 0.5 * d.d1 * d.d1);
    }

    SECTION("density is non-negative and pi-periodic") {
        std::vector<double> z(257), zp(257);
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = -2.0 + 0.03 * static_cast<double>(i);
            zp[i] = z[i] + pi;
        }
        const auto a = bloch_density(d, z);
        const auto b = bloch_density(d, zp);
        for (std::size_t i = 0; i < z.size(); ++i) {
            CHECK(a[i] >= 0.0);
            CHECK(a[i] == Approx(b[i]).margin(1e-15));
        }
    }

    SECTION("expanded form differs from the direct square in the double-period term") {
        std::vector<double> z(64);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = 0.1 * static_cast<double>(i);
        const auto direct = bloch_density(d, z);
        const auto expanded = bloch_density_expanded(d, z);
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double delta =
                0.5 * d.d1 * d.d1 * (std::sin(4.0 * z[i]) - std::cos(4.0 * z[i]));
            CHECK(expanded[i] - direct[i] == Approx(delta).margin(1e-15));
        }
    }
}

TEST_CASE("particle number per site") {
    DCoefficients unit;
    unit.d0 = 1.0;
    unit.d1 = 0.0;
    unit.n = 1.0;
    CHECK(delta_N(unit) == Approx(pi).margin(1e-15));

    const auto d = solve_d_system(0.7, 99.4725, 0.16);
    CHECK(delta_N(d) / pi == Approx(d.n).margin(1e-15));
}
