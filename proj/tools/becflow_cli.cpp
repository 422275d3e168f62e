// Command-line driver: ground states, release dynamics, parameter sweeps,
// band tables and d-coefficient tables from one flat config format.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "becflow/becflow.hpp"

namespace {

using namespace becflow;

struct CommonArgs {
    std::string config_path;
    std::string preset = "desk";
    std::vector<std::string> overrides;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (key = value lines)");
    cmd->add_option("--preset", args.preset, "Base preset: paper or desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    cmd->add_option("--set", args.overrides, "Override entries, e.g. --set physics.s=0.16");
    cmd->add_option("--out", args.out_dir, "Output directory");
}

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg = preset_config(args.preset);
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw io_error("cannot open config file " + args.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        apply_entries(cfg, parse_config_text(ss.str()));
    }
    apply_overrides(cfg, args.overrides);
    cfg.validate();
    return cfg;
}

std::filesystem::path ensure_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw io_error("cannot create output directory " + dir);
    return p;
}

int cmd_ground(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto out = ensure_dir(args.out_dir);
    const Grid grid = cfg.make_grid();
    const auto pot = sample_potential(cfg.potential_spec(true), grid);
    GradientFlowOptions opt;
    opt.dt = cfg.dt_imag;
    opt.tol = cfg.imag_tol;
    opt.max_iter = cfg.imag_max_iter;
    const auto gs = normalized_gradient_flow(pot, grid, cfg.beta, opt);
    if (!gs.converged)
        throw numerics_error("ground state did not converge (residual " +
                             format_double(gs.residual) + ")");
    Snapshot snap;
    snap.z_min = grid.z_min;
    snap.z_max = grid.z_max;
    snap.time = 0.0;
    snap.beta = cfg.beta;
    snap.values = gs.psi;
    write_snapshot(out / "ground.gpe1", snap);

    std::ostringstream report;
    report << "mu = " << format_double(gs.mu) << "\n"
           << "energy = " << format_double(gs.energy) << "\n"
           << "iterations = " << gs.iterations << "\n"
           << "residual = " << format_double(gs.residual) << "\n"
           << "mu_thomas_fermi = " << format_double(cfg.beta / cfg.reservoir_a_length) << "\n";
    std::ofstream(out / "ground.txt") << report.str();
    std::cout << report.str();
    return 0;
}

int cmd_evolve(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto out = ensure_dir(args.out_dir);
    const auto res = run_single(cfg, out);
    std::cout << "ground mu = " << format_double(res.ground.mu) << "\n"
              << "j0 = " << format_double(res.j0) << "\n"
              << "plateaux = " << res.plateaus.intervals.size() << "\n"
              << "final N_A/N/N_B = " << format_double(res.record.n_a.back()) << " "
              << format_double(res.record.n_lattice.back()) << " "
              << format_double(res.record.n_b.back()) << "\n"
              << "artifacts in " << out.string() << "\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto out = ensure_dir(args.out_dir);
    const auto sweep = run_sweep(cfg, out);
    int failures = 0;
    for (const auto& row : sweep.rows) {
        std::cout << sweep_axis_name(sweep.axis) << " = " << format_double(row.value) << ": ";
        if (row.failed) {
            ++failures;
            std::cout << "FAILED (" << row.error << ")\n";
        } else {
            std::cout << "j0 = " << format_double(row.j0) << "\n";
        }
    }
    std::cout << "table written to " << (out / "sweep.csv").string() << "\n";
    return failures == 0 ? 0 : 2;
}

int cmd_bands(const CommonArgs& args, double n_beta, double q_min, double q_max,
              std::size_t q_count) {
    const auto cfg = load_config(args);
    const auto out = ensure_dir(args.out_dir);
    std::vector<double> qs(q_count);
    for (std::size_t i = 0; i < q_count; ++i)
        qs[i] = q_min + (q_max - q_min) * static_cast<double>(i) /
                            static_cast<double>(q_count > 1 ? q_count - 1 : 1);
    const auto bands = band_structure(qs, cfg.lattice_depth, n_beta, cfg.offset);

    std::ostringstream csv;
    csv << "q,branch,energy,mu,theta,phi\n";
    for (const auto& p : bands.points)
        csv << format_double(p.q) << ',' << branch_name(p.branch) << ','
            << format_double(p.energy_per_particle) << ','
            << format_double(p.chemical_potential) << ',' << format_double(p.theta) << ','
            << format_double(p.phi) << '\n';
    std::ofstream(out / "bands.csv") << csv.str();

    std::cout << "bands.csv written (" << bands.points.size() << " stationary points, "
              << bands.failed_q.size() << " failed q)\n";
    std::cout << "band-edge loop: " << (has_band_edge_loop(cfg.lattice_depth, n_beta) ? "yes" : "no")
              << "\n";
    return 0;
}

int cmd_bloch(const CommonArgs& args, const std::vector<double>& mus) {
    const auto cfg = load_config(args);
    const auto out = ensure_dir(args.out_dir);
    std::ostringstream csv;
    csv << "mu,beta,s,d0,d1,n,deltaN\n";
    for (double mu : mus) {
        const auto d = solve_d_system(mu, cfg.beta, cfg.lattice_depth);
        csv << format_double(mu) << ',' << format_double(d.beta) << ','
            << format_double(d.lattice_depth) << ',' << format_double(d.d0) << ','
            << format_double(d.d1) << ',' << format_double(d.n) << ','
            << format_double(delta_N(d)) << '\n';
    }
    std::ofstream(out / "bloch.csv") << csv.str();
    std::cout << "bloch.csv written (" << mus.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-1D condensate transport through a finite shallow lattice"};
    app.require_subcommand(1);

    CommonArgs ground_args, evolve_args, sweep_args, bands_args, bloch_args;

    auto* ground = app.add_subcommand("ground", "Solve the shutter-confined ground state");
    add_common(ground, ground_args);

    auto* evolve = app.add_subcommand("evolve", "Ground state, shutter release and evolution");
    add_common(evolve, evolve_args);

    auto* sweep = app.add_subcommand("sweep", "One run per sweep value, aggregated table");
    add_common(sweep, sweep_args);

    double n_beta = 0.393, q_min = 0.0, q_max = 1.05;
    std::size_t q_count = 85;
    auto* bands = app.add_subcommand("bands", "Nonlinear band structure table");
    add_common(bands, bands_args);
    bands->add_option("--n-beta", n_beta, "Mean-field density parameter n*beta");
    bands->add_option("--q-min", q_min, "First quasi-momentum");
    bands->add_option("--q-max", q_max, "Last quasi-momentum");
    bands->add_option("--q-count", q_count, "Number of quasi-momenta");

    std::vector<double> mus = {0.795};
    auto* bloch = app.add_subcommand("bloch", "Amplitudes of the period-matched ground ansatz");
    add_common(bloch, bloch_args);
    bloch->add_option("--mu", mus, "Chemical potential values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ground->parsed()) return cmd_ground(ground_args);
        if (evolve->parsed()) return cmd_evolve(evolve_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (bands->parsed()) return cmd_bands(bands_args, n_beta, q_min, q_max, q_count);
        if (bloch->parsed()) return cmd_bloch(bloch_args, mus);
    } catch (const becflow::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const becflow::numerics_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const becflow::io_error& e) {
        std::cerr << "i/o failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
