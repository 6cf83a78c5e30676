// Command-line front end: run, converge, timing, verify.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acceptance_suite.hpp"
#include "igrm/report.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed_checks = 1;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct Options {
    std::string problem = "manufactured";
    std::string mesh = "16x16";
    std::string trial = "2,1";
    std::string test = "3,0";
    std::string scheme = "pr";
    double tau = 0.01;
    int steps = 50;
    bool galerkin = false;
    std::string out = "out";
    int jobs = 1;
    int snapshot_stride = 0;
    int resolution = 65;
    std::vector<double> taus{0.02, 0.01, 0.005};
    std::vector<std::string> schemes{"pr", "strang-cn", "strang-be"};
    double t_final = 0.5;
    std::vector<int> meshes{8, 16, 32, 64};
    std::vector<std::string> pairs{"2,1/3,0", "3,2/4,0"};
    bool no_general = false;
    std::vector<int> criteria;
};

igrm::RunConfig to_config(const Options& o) {
    igrm::RunConfig c;
    c.problem = o.problem;
    std::tie(c.nx, c.ny) = igrm::parse_mesh(o.mesh);
    c.trial = igrm::parse_pair(o.trial);
    c.test = igrm::parse_pair(o.test);
    c.scheme = igrm::scheme_from_string(o.scheme);
    c.tau = o.tau;
    c.n_steps = o.steps;
    c.stabilized = !o.galerkin;
    c.out_dir = o.out;
    c.jobs = o.jobs;
    c.snapshot_stride = o.snapshot_stride;
    c.resolution = o.resolution;
    c.validate();
    return c;
}

int cmd_run(const Options& o) {
    const auto cfg = to_config(o);
    const auto res = igrm::run(cfg, std::filesystem::path(cfg.out_dir));
    const auto& last = res.steps.back();
    std::cout << fmt::format("{} solver, scheme {}, {} steps to t={}, saddle dofs {}\n", res.solver, res.scheme,
                             cfg.n_steps, igrm::fmt_num(last.time), res.dofs);
    std::cout << fmt::format("final |u|_L2={} max|u|={}", igrm::fmt_num(last.norms.l2), igrm::fmt_num(last.max_abs));
    if (last.error) {
        std::cout << fmt::format(" L2 error={} H1 error={} ({})", igrm::fmt_num(last.error->l2),
                                 igrm::fmt_num(last.error->h1), last.error->relative ? "%" : "absolute");
    }
    std::cout << "\nwrote " << cfg.out_dir << "\n";
    return exit_ok;
}

int cmd_converge(const Options& o) {
    const auto cfg = to_config(o);
    std::vector<igrm::SchemeKind> schemes;
    for (const auto& s : o.schemes) schemes.push_back(igrm::scheme_from_string(s));
    const auto res = igrm::convergence_study(cfg, o.taus, schemes, o.t_final, std::filesystem::path(cfg.out_dir));
    for (const auto& s : res.slopes) {
        std::cout << fmt::format("{:10s} L2 order {:.3f}  H1 order {:.3f}\n", igrm::to_string(s.scheme), s.l2, s.h1);
    }
    std::cout << "wrote " << cfg.out_dir << "\n";
    return exit_ok;
}

int cmd_timing(const Options& o) {
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> pairs;
    for (const auto& p : o.pairs) {
        const auto slash = p.find('/');
        if (slash == std::string::npos) throw igrm::parameter_error("pair '" + p + "' is not of the form p,c/q,d");
        pairs.push_back({igrm::parse_pair(p.substr(0, slash)), igrm::parse_pair(p.substr(slash + 1))});
    }
    for (int n : o.meshes) {
        if (n < 1) throw igrm::parameter_error("meshes must be positive");
    }
    const auto rows = igrm::timing_study(o.meshes, pairs, !o.no_general, std::filesystem::path(o.out));
    for (const auto& r : rows) {
        std::cout << fmt::format("({},{})/({},{}) n={:4d} kron flops {:12d} {:9.3f} ms", r.trial.first,
                                 r.trial.second, r.test.first, r.test.second, r.n, r.kron.flops, 1e3 * r.kron.seconds);
        if (r.general) {
            std::cout << fmt::format("  general dofs {:7d} {:10.3f} ms", r.general->dofs, 1e3 * r.general->seconds);
        }
        std::cout << "\n";
    }
    std::cout << "wrote " << o.out << "/timing.csv\n";
    return exit_ok;
}

int cmd_verify(const Options& o) {
    const auto results = igrm::acceptance::run_all(std::cout, std::filesystem::path(o.out) / "verify", o.criteria);
    for (const auto& r : results) {
        if (!r.pass) return exit_failed_checks;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isogeometric residual minimization solvers for advection-diffusion"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with option=value lines");
    // Keep "p,c" and "0.02,0.01" values whole; list options split them themselves.
    auto ini = std::make_shared<CLI::ConfigINI>();
    ini->arrayDelimiter(';');
    app.config_formatter(ini);
    Options o;

    app.add_option("--problem", o.problem, "manufactured | pollution | circular-wind")->capture_default_str();
    app.add_option("--mesh", o.mesh, "elements NxM")->capture_default_str();
    app.add_option("--trial", o.trial, "trial space p,c")->capture_default_str();
    app.add_option("--test", o.test, "test space p,c")->capture_default_str();
    app.add_option("--scheme", o.scheme, "pr | strang-be | strang-cn | be")->capture_default_str();
    app.add_option("--tau", o.tau, "time step")->capture_default_str();
    app.add_option("--steps", o.steps, "number of time steps")->capture_default_str();
    app.add_flag("--galerkin", o.galerkin, "disable stabilization (test space = trial space)");
    app.add_option("--out", o.out, "output directory")->capture_default_str();
    app.add_option("--jobs", o.jobs, "parallel study points")->capture_default_str();
    app.add_option("--snapshot-stride", o.snapshot_stride, "write a snapshot every k steps (0: first and last)")
        ->capture_default_str();
    app.add_option("--resolution", o.resolution, "points per direction in snapshots")->capture_default_str();

    auto* run = app.add_subcommand("run", "run one simulation and write errors, residuals, snapshots, metadata");
    auto* conv = app.add_subcommand("converge", "temporal convergence study");
    conv->add_option("--taus", o.taus, "time steps")->delimiter(',')->capture_default_str();
    conv->add_option("--schemes", o.schemes, "schemes")->delimiter(',')->capture_default_str();
    conv->add_option("--t-final", o.t_final, "time at which errors are compared")->capture_default_str();
    auto* timing = app.add_subcommand("timing", "solver cost across meshes");
    timing->add_option("--meshes", o.meshes, "mesh sizes n (n x n)")->delimiter(',')->capture_default_str();
    timing->add_option("--pairs", o.pairs, "trial/test pairs p,c/q,d")->capture_default_str();
    timing->add_flag("--no-general", o.no_general, "skip the unsplit sparse solver");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--criteria", o.criteria, "subset of criteria")->delimiter(',');
    for (auto* s : {run, conv, timing, verify}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*run) return cmd_run(o);
        if (*conv) return cmd_converge(o);
        if (*timing) return cmd_timing(o);
        if (*verify) return cmd_verify(o);
    } catch (const igrm::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::logic_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return exit_solver;
    }
    return exit_config;
}
