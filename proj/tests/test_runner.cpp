#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "becflow/runner.hpp"

using namespace becflow;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

ExperimentConfig mini_config() {
    ExperimentConfig cfg;
    cfg.reservoir_a_length = 8.0 * pi;
    cfg.lattice_length = 2.0 * pi;
    cfg.reservoir_b_length = 8.0 * pi;
    cfg.beta = 20.0;
    cfg.lattice_depth = 0.127;
    cfg.num_points = 512;
    cfg.t_end = 10.0;
    cfg.observer_stride = 10;
    cfg.imag_tol = 1e-8;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}
} // namespace

TEST_CASE("run_single produces the full artifact set") {
    const auto cfg = mini_config();
    const auto dir = fresh_dir("becflow_run_single");
    auto res = run_single(cfg, dir);

    CHECK(res.ground.converged);
    CHECK(res.record.size() > 100);
    CHECK(res.record.n_a.front() == Approx(1.0).margin(1e-5));
    CHECK(res.record.n_a.back() < 1.0);

    CHECK(std::filesystem::exists(dir / "ground.gpe1"));
    CHECK(std::filesystem::exists(dir / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir / "plateaus.csv"));
    CHECK(std::filesystem::exists(dir / "config.txt"));

    const auto header = slurp(dir / "trajectory.csv").substr(0, 9);
    CHECK(header == "time,N_A,");
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical configs give bit-identical outputs") {
    const auto cfg = mini_config();
    const auto dir_a = fresh_dir("becflow_det_a");
    const auto dir_b = fresh_dir("becflow_det_b");
    run_single(cfg, dir_a);
    run_single(cfg, dir_b);
    CHECK(slurp(dir_a / "trajectory.csv") == slurp(dir_b / "trajectory.csv"));
    CHECK(slurp(dir_a / "plateaus.csv") == slurp(dir_b / "plateaus.csv"));
    CHECK(slurp(dir_a / "ground.gpe1") == slurp(dir_b / "ground.gpe1"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("snapshots are emitted at the nearest step") {
    auto cfg = mini_config();
    cfg.snapshot_times = {0.0, 5.0033, 10.0};
    const auto dir = fresh_dir("becflow_snaps");
    auto res = run_single(cfg, dir);
    REQUIRE(res.record.snapshots.size() == 3);
    CHECK(res.record.snapshots[1].requested_time == 5.0033);
    CHECK(res.record.snapshots[1].actual_time == Approx(5.005).margin(cfg.dt));
    for (const auto& s : res.record.snapshots)
        CHECK(std::filesystem::exists(dir / s.path));
    const auto snap = read_snapshot(dir / res.record.snapshots[2].path);
    CHECK(snap.time == Approx(10.0).margin(1e-9));
    CHECK(snap.beta == cfg.beta);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_sweep aggregates rows and isolates failures") {
    auto cfg = mini_config();
    cfg.t_end = 6.0;
    cfg.sweep_axis = SweepAxis::lattice_depth;
    cfg.sweep_values = {0.1, -0.5, 0.2}; // middle value is invalid
    const auto dir = fresh_dir("becflow_sweep");
    const auto sweep = run_sweep(cfg, dir);

    REQUIRE(sweep.rows.size() == 3);
    CHECK_FALSE(sweep.rows[0].failed);
    CHECK(sweep.rows[1].failed);
    CHECK_FALSE(sweep.rows[2].failed);
    CHECK(!sweep.rows[1].error.empty());
    CHECK(std::filesystem::exists(dir / "sweep.csv"));
    CHECK(std::filesystem::exists(dir / sweep.rows[0].run_directory / "trajectory.csv"));

    const auto csv = slurp(dir / "sweep.csv");
    CHECK(csv.rfind("axis,value,j0,t0,plateau_start,plateau_end,N_final\n", 0) == 0);
    CHECK(csv.find("s,0.1,") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep rows do not depend on evaluation order") {
    auto cfg = mini_config();
    cfg.t_end = 6.0;
    cfg.sweep_axis = SweepAxis::lattice_depth;
    cfg.sweep_values = {0.1, 0.2};
    const auto dir_f = fresh_dir("becflow_sweep_f");
    const auto fwd = run_sweep(cfg, dir_f);

    cfg.sweep_values = {0.2, 0.1};
    const auto dir_r = fresh_dir("becflow_sweep_r");
    const auto rev = run_sweep(cfg, dir_r);

    REQUIRE(fwd.rows.size() == 2);
    REQUIRE(rev.rows.size() == 2);
    CHECK(fwd.rows[0].j0 == rev.rows[1].j0);
    CHECK(fwd.rows[1].j0 == rev.rows[0].j0);
    CHECK(slurp(dir_f / fwd.rows[0].run_directory / "trajectory.csv") ==
          slurp(dir_r / rev.rows[1].run_directory / "trajectory.csv"));
    std::filesystem::remove_all(dir_f);
    std::filesystem::remove_all(dir_r);
}

TEST_CASE("run_sweep requires a sweep axis") {
    auto cfg = mini_config();
    const auto dir = fresh_dir("becflow_sweep_noaxis");
    CHECK_THROWS_AS(run_sweep(cfg, dir), config_error);
    std::filesystem::remove_all(dir);
}
