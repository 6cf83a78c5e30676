#pragma once

// Error norms, deterministic file output and the run / convergence / timing
// drivers behind the command-line tool.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

#include "igrm/field.hpp"
#include "igrm/general_solver.hpp"
#include "igrm/time_integration.hpp"

namespace igrm {

// ---------------------------------------------------------------- norms

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    bool relative = true;  // false when the exact solution vanishes; values are then absolute
};

struct FieldNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

using ExactFn = std::function<double(double, double, double)>;
using ExactGradFn = std::function<std::array<double, 2>(double, double, double)>;

namespace detail {

// Visits every Gauss point with the field value/gradient there.
template <typename Visit>
void visit_points(const Grid& u, const SplineSpace& sx, const SplineSpace& sy, Visit&& visit) {
    const ElementQuadrature qx(sx, sx.degree + 2);
    const ElementQuadrature qy(sy, sy.degree + 2);
    for (std::size_t a = 0; a < qx.points.size(); ++a) {
        for (std::size_t b = 0; b < qy.points.size(); ++b) {
            const FieldValue f = evaluate(u, sx, sy, qx.basis[a], qy.basis[b]);
            visit(qx.weights[a] * qy.weights[b], qx.points[a], qy.points[b], f);
        }
    }
}

}  // namespace detail

/// L2 and H1 norms of the discrete field.
inline FieldNorms field_norms(const Grid& u, const SplineSpace& sx, const SplineSpace& sy) {
    double l2 = 0.0, g = 0.0;
    detail::visit_points(u, sx, sy, [&](double w, double, double, const FieldValue& f) {
        l2 += w * f.value * f.value;
        g += w * (f.dx * f.dx + f.dy * f.dy);
    });
    return {std::sqrt(l2), std::sqrt(l2 + g)};
}

/// Relative L2 and H1 errors in percent against the exact solution at time t.
inline ErrorNorms compute_errors(const Grid& u, const ExactFn& exact, const ExactGradFn& grad, const SplineSpace& sx,
                                 const SplineSpace& sy, double t) {
    double e_l2 = 0.0, e_g = 0.0, x_l2 = 0.0, x_g = 0.0;
    detail::visit_points(u, sx, sy, [&](double w, double x, double y, const FieldValue& f) {
        const double ex = exact(x, y, t);
        const auto eg = grad(x, y, t);
        const double d = f.value - ex, dx = f.dx - eg[0], dy = f.dy - eg[1];
        e_l2 += w * d * d;
        e_g += w * (dx * dx + dy * dy);
        x_l2 += w * ex * ex;
        x_g += w * (eg[0] * eg[0] + eg[1] * eg[1]);
    });
    const double el2 = std::sqrt(e_l2), eh1 = std::sqrt(e_l2 + e_g);
    const double xl2 = std::sqrt(x_l2), xh1 = std::sqrt(x_l2 + x_g);
    if (xl2 < 1e-14) return {el2, eh1, false};
    return {100.0 * el2 / xl2, 100.0 * eh1 / xh1, true};
}

inline std::optional<ErrorNorms> compute_errors(const Grid& u, const ProblemDefinition& p, const SplineSpace& sx,
                                                const SplineSpace& sy, double t) {
    if (!p.exact || !p.exact_gradient) return std::nullopt;
    return compute_errors(u, *p.exact, *p.exact_gradient, sx, sy, t);
}

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw parameter_error("slope fit needs at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0) || !(y[k] > 0)) throw parameter_error("slope fit needs positive data");
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- files

/// Fixed-format number rendering shared by every writer.
inline std::string fmt_num(double v) { return fmt::format("{:.12e}", v); }

/// Header plus string cells; written with ',' separators and '\n' endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <typename... Cells>
    void add(const Cells&... cells) {
        std::vector<std::string> r;
        (r.push_back(cell(cells)), ...);
        if (r.size() != header.size()) throw dimension_error("csv row width does not match the header");
        rows.push_back(std::move(r));
    }

    [[nodiscard]] std::string str() const {
        std::string out = join(header);
        for (const auto& r : rows) out += join(r);
        return out;
    }

    [[nodiscard]] int column(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) return static_cast<int>(k);
        }
        throw parameter_error("no csv column named '" + name + "'");
    }

    [[nodiscard]] std::vector<double> numbers(const std::string& name) const {
        const int c = column(name);
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r[c].empty() ? std::nan("") : std::stod(r[c]));
        return v;
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double v) { return fmt_num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(unsigned long v) { return std::to_string(v); }
    static std::string cell(unsigned long long v) { return std::to_string(v); }

    static std::string join(const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) s += ',';
            s += r[k];
        }
        return s + '\n';
    }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw io_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw io_error("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open " + path.string());
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_text(path, t.str()); }

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    CsvTable t;
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::string c;
        std::istringstream s(l);
        while (std::getline(s, c, ',')) cells.push_back(c);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    if (!std::getline(in, line)) throw io_error("empty csv file " + path.string());
    t.header = split(line);
    while (std::getline(in, line)) {
        auto r = split(line);
        if (r.size() != t.header.size()) throw io_error("malformed csv row in " + path.string());
        t.rows.push_back(std::move(r));
    }
    return t;
}

/// Sampled field on the corner-inclusive lattice of a rectangle.
struct SampledField {
    Rectangle domain;
    Grid values;  // values(i, j) at x_i, y_j
};

inline SampledField sample_field(const Grid& u, const SplineSpace& sx, const SplineSpace& sy, int resolution) {
    return {{sx.a, sx.b, sy.a, sy.b}, sample(u, sx, sy, resolution)};
}

inline std::string vtk_text(const SampledField& f, const std::string& name, const std::string& title) {
    const int nx = f.values.nx, ny = f.values.ny;
    std::string s = "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET STRUCTURED_POINTS\n";
    s += fmt::format("DIMENSIONS {} {} 1\n", nx, ny);
    s += fmt::format("ORIGIN {} {} {}\n", fmt_num(f.domain.x0), fmt_num(f.domain.y0), fmt_num(0.0));
    s += fmt::format("SPACING {} {} {}\n", fmt_num((f.domain.x1 - f.domain.x0) / (nx - 1)),
                     fmt_num((f.domain.y1 - f.domain.y0) / (ny - 1)), fmt_num(1.0));
    s += fmt::format("POINT_DATA {}\nSCALARS {} double 1\nLOOKUP_TABLE default\n", nx * ny, name);
    // VTK orders points with x varying fastest.
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) s += fmt_num(f.values(i, j)) + '\n';
    }
    return s;
}

inline CsvTable field_csv(const SampledField& f) {
    CsvTable t{{"x", "y", "value"}, {}};
    const int nx = f.values.nx, ny = f.values.ny;
    for (int j = 0; j < ny; ++j) {
        const double y = j == ny - 1 ? f.domain.y1 : f.domain.y0 + (f.domain.y1 - f.domain.y0) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = i == nx - 1 ? f.domain.x1 : f.domain.x0 + (f.domain.x1 - f.domain.x0) * i / (nx - 1);
            t.add(x, y, f.values(i, j));
        }
    }
    return t;
}

/// Writes <base>.vtk and <base>.csv and returns the sampled values.
inline SampledField export_field(const Grid& u, const SplineSpace& sx, const SplineSpace& sy, int resolution,
                                 const std::filesystem::path& base, double t = 0.0) {
    const SampledField f = sample_field(u, sx, sy, resolution);
    write_text(base.string() + ".vtk", vtk_text(f, "u", fmt::format("u at t={}", fmt_num(t))));
    write_csv(base.string() + ".csv", field_csv(f));
    return f;
}

// ---------------------------------------------------------------- config

struct RunConfig {
    std::string problem = "manufactured";
    int nx = 16;
    int ny = 16;
    std::pair<int, int> trial{2, 1};
    std::pair<int, int> test{3, 0};
    SchemeKind scheme = SchemeKind::PeacemanRachford;
    double tau = 0.01;
    int n_steps = 50;
    bool stabilized = true;
    std::string out_dir = "out";
    int snapshot_stride = 0;  // 0 writes the initial and final states only
    int resolution = 65;
    int jobs = 1;

    /// Checks every precondition that can be checked before allocating.
    void validate() const {
        (void)problem_by_name(problem);
        if (nx < 1 || ny < 1) throw parameter_error("mesh must have at least one element per direction");
        auto check_pair = [](std::pair<int, int> pc, const char* what) {
            if (pc.first < 1) throw parameter_error(std::string(what) + " degree must be at least 1");
            if (pc.second < 0 || pc.second >= pc.first) {
                throw parameter_error(std::string(what) + " continuity must lie in [0, degree - 1]");
            }
        };
        check_pair(trial, "trial");
        check_pair(test, "test");
        if (!(tau > 0.0) || !std::isfinite(tau)) throw parameter_error("tau must be positive");
        if (n_steps < 0) throw parameter_error("steps must be non-negative");
        if (snapshot_stride < 0) throw parameter_error("snapshot stride must be non-negative");
        if (resolution < 2) throw parameter_error("resolution must be at least 2");
        if (jobs < 1) throw parameter_error("jobs must be at least 1");
        const auto tr = SplineSpace{trial.first, trial.second, 1, 0.0, 1.0, {}};
        const auto te = SplineSpace{test.first, test.second, 1, 0.0, 1.0, {}};
        if (stabilized && coarser_than(te, tr)) throw parameter_error("test space is coarser than the trial space");
    }

    [[nodiscard]] std::pair<int, int> effective_test() const { return stabilized ? test : trial; }
};

inline std::pair<int, int> parse_mesh(const std::string& s) {
    const auto x = s.find_first_of("xX");
    try {
        if (x == std::string::npos) {
            std::size_t used = 0;
            const int n = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {n, n};
        }
        std::size_t u1 = 0, u2 = 0;
        const int a = std::stoi(s.substr(0, x), &u1);
        const int b = std::stoi(s.substr(x + 1), &u2);
        if (u1 != x || u2 != s.size() - x - 1) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw parameter_error("mesh '" + s + "' is not of the form NxM");
    }
}

inline std::pair<int, int> parse_pair(const std::string& s) {
    const auto c = s.find(',');
    try {
        if (c == std::string::npos) throw std::invalid_argument(s);
        std::size_t u1 = 0, u2 = 0;
        const int a = std::stoi(s.substr(0, c), &u1);
        const int b = std::stoi(s.substr(c + 1), &u2);
        if (u1 != c || u2 != s.size() - c - 1) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw parameter_error("space '" + s + "' is not of the form p,c");
    }
}

inline nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["problem"] = c.problem;
    j["mesh"] = {c.nx, c.ny};
    j["trial"] = {c.trial.first, c.trial.second};
    j["test"] = {c.effective_test().first, c.effective_test().second};
    j["scheme"] = to_string(c.scheme);
    j["tau"] = c.tau;
    j["steps"] = c.n_steps;
    j["stabilized"] = c.stabilized;
    j["snapshot_stride"] = c.snapshot_stride;
    j["resolution"] = c.resolution;
    return j;
}

// ---------------------------------------------------------------- run

struct StepRecord {
    int step = 0;
    double time = 0.0;
    FieldNorms norms;
    double max_abs = 0.0;  // over the sampling lattice
    std::optional<ErrorNorms> error;
    std::vector<ResidualNorms> residuals;
};

struct RunResult {
    std::vector<StepRecord> steps;
    SolutionState final_state;
    std::string solver;  // "kronecker" or "general"
    std::string scheme;
    std::uint64_t flops = 0;
    int dofs = 0;
    int unknowns = 0;
    double initial_max_abs = 0.0;  // of the exact initial data on the sampling lattice
    SplineSpace trial_x, trial_y;
};

/// Time loop shared by both solver paths. `advance` maps a state and a
/// residual sink to the next state.
template <typename Advance>
RunResult run_loop(const RunConfig& cfg, const ProblemDefinition& p, const SplineSpace& sx, const SplineSpace& sy,
                   SolutionState s, Advance&& advance, const std::optional<std::filesystem::path>& out) {
    RunResult res;
    res.trial_x = sx;
    res.trial_y = sy;
    {
        const Grid exact0 = [&] {
            Grid g(cfg.resolution, cfg.resolution);
            const int last = cfg.resolution - 1;
            for (int i = 0; i < cfg.resolution; ++i) {
                for (int j = 0; j < cfg.resolution; ++j) {
                    g(i, j) = p.initial(sx.a + (sx.b - sx.a) * i / last, sy.a + (sy.b - sy.a) * j / last);
                }
            }
            return g;
        }();
        res.initial_max_abs = exact0.max_abs();
    }
    auto record = [&](int k, const SolutionState& st, std::vector<ResidualNorms> r) {
        StepRecord rec;
        rec.step = k;
        rec.time = st.time;
        rec.norms = field_norms(st.u, sx, sy);
        rec.error = compute_errors(st.u, p, sx, sy, st.time);
        rec.residuals = std::move(r);
        const bool snap = k == 0 || k == cfg.n_steps || (cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0);
        if (out && snap) {
            rec.max_abs = export_field(st.u, sx, sy, cfg.resolution, *out / "snapshots" / fmt::format("u_{:06d}", k),
                                       st.time)
                              .values.max_abs();
        } else {
            rec.max_abs = sample(st.u, sx, sy, cfg.resolution).max_abs();
        }
        res.steps.push_back(std::move(rec));
    };

    const FlopScope flops;
    record(0, s, {});
    for (int k = 1; k <= cfg.n_steps; ++k) {
        std::vector<ResidualNorms> r;
        s = advance(s, r);
        if (!s.u.all_finite()) throw divergence_error(fmt::format("solution became non-finite at step {}", k));
        record(k, s, std::move(r));
    }
    res.flops = flops.elapsed();
    res.final_state = std::move(s);
    return res;
}

inline CsvTable errors_table(const RunResult& r) {
    CsvTable t{{"step", "t", "u_l2", "u_h1", "u_max", "error_kind", "l2_error", "h1_error"}, {}};
    for (const auto& s : r.steps) {
        if (s.error) {
            t.add(s.step, s.time, s.norms.l2, s.norms.h1, s.max_abs, s.error->relative ? "relative_pct" : "absolute",
                  s.error->l2, s.error->h1);
        } else {
            t.add(s.step, s.time, s.norms.l2, s.norms.h1, s.max_abs, "none", "", "");
        }
    }
    return t;
}

inline CsvTable residuals_table(const RunResult& r) {
    CsvTable t{{"step", "t", "substep", "residual_l2", "residual_h1"}, {}};
    for (const auto& s : r.steps) {
        for (std::size_t k = 0; k < s.residuals.size(); ++k) {
            t.add(s.step, s.time, static_cast<int>(k), s.residuals[k].l2, s.residuals[k].h1);
        }
    }
    return t;
}

/// Runs one simulation; writes errors.csv, residuals.csv, snapshots/ and
/// metadata.json into `out` when given.
inline RunResult run(const RunConfig& cfg, const std::optional<std::filesystem::path>& out) {
    cfg.validate();
    const ProblemDefinition p = problem_by_name(cfg.problem);
    RunResult res;
    if (p.separable_velocity) {
        const Discretization d = make_discretization(p, cfg.nx, cfg.ny, cfg.trial, cfg.effective_test());
        TimeLoopConfig tl;
        tl.tau = cfg.tau;
        tl.n_steps = cfg.n_steps;
        tl.t0 = p.t0;
        tl.scheme = cfg.scheme;
        tl.stabilized = cfg.stabilized;
        TimeStepper stepper(p, d, tl);
        res = run_loop(cfg, p, d.trial_x, d.trial_y, stepper.initial_state(),
                       [&](const SolutionState& s, std::vector<ResidualNorms>& r) { return stepper.advance(s, &r); },
                       out);
        res.solver = "kronecker";
        res.scheme = to_string(cfg.scheme);
        res.unknowns = interior_dim(d.trial_x) * interior_dim(d.trial_y);
        res.dofs = saddle_dofs({d.trial_x, d.trial_y}, {d.test_x, d.test_y});
    } else {
        const Space2D trial = make_space_2d(p.domain, cfg.nx, cfg.ny, cfg.trial);
        const Space2D test = make_space_2d(p.domain, cfg.nx, cfg.ny, cfg.effective_test());
        GeneralSolver g(p, trial, test, cfg.tau);
        res = run_loop(cfg, p, trial.x, trial.y, g.initial_state(),
                       [&](const SolutionState& s, std::vector<ResidualNorms>& r) {
                           SolutionState n = g.step(s);
                           r.push_back(g.residual_norms(*n.r));
                           return n;
                       },
                       out);
        res.solver = "general";
        res.scheme = "monolithic-cn";
        res.unknowns = saddle_unknowns(trial, test);
        res.dofs = saddle_dofs(trial, test);
    }
    if (out) {
        write_csv(*out / "errors.csv", errors_table(res));
        write_csv(*out / "residuals.csv", residuals_table(res));
        nlohmann::ordered_json meta;
        meta["config"] = config_json(cfg);
        meta["solver"] = res.solver;
        meta["time_scheme"] = res.scheme;
        meta["t0"] = p.t0;
        meta["t_final"] = res.final_state.time;
        meta["saddle_dofs"] = res.dofs;
        meta["unknowns"] = res.unknowns;
        meta["banded_flops"] = res.flops;
        meta["initial_max_abs"] = res.initial_max_abs;
        write_text(*out / "metadata.json", meta.dump(2) + "\n");
    }
    return res;
}

// ---------------------------------------------------------------- studies

/// Runs `n` independent tasks on up to `jobs` threads; results keep task order.
template <typename T, typename Task>
std::vector<T> run_parallel(int n, int jobs, Task&& task) {
    std::vector<T> out(n);
    if (jobs <= 1) {
        for (int k = 0; k < n; ++k) out[k] = task(k);
        return out;
    }
    for (int start = 0; start < n; start += jobs) {
        std::vector<std::future<T>> batch;
        for (int k = start; k < std::min(n, start + jobs); ++k) batch.push_back(std::async(std::launch::async, task, k));
        for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
    }
    return out;
}

struct ConvergencePoint {
    SchemeKind scheme{};
    double tau = 0.0;
    int steps = 0;
    ErrorNorms error;
};

struct ConvergenceSlope {
    SchemeKind scheme{};
    double l2 = 0.0;
    double h1 = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    std::vector<ConvergenceSlope> slopes;

    [[nodiscard]] const ConvergenceSlope& slope(SchemeKind s) const {
        for (const auto& x : slopes) {
            if (x.scheme == s) return x;
        }
        throw parameter_error("scheme not part of the study");
    }
};

/// Error at time t_final for every (scheme, tau), and the fitted order per scheme.
/// With `out`, each point also writes a full run into its own subdirectory.
inline ConvergenceResult convergence_study(const RunConfig& base, const std::vector<double>& taus,
                                           const std::vector<SchemeKind>& schemes, double t_final,
                                           const std::optional<std::filesystem::path>& out = std::nullopt) {
    if (taus.size() < 3) throw parameter_error("a convergence study needs at least three time steps");
    const ProblemDefinition p = problem_by_name(base.problem);
    if (!p.exact) throw parameter_error("problem '" + base.problem + "' has no exact solution");
    std::vector<ConvergencePoint> todo;
    for (auto s : schemes) {
        for (double tau : taus) {
            const double steps = (t_final - p.t0) / tau;
            const int n = static_cast<int>(std::lround(steps));
            if (n < 1 || std::abs(steps - n) > 1e-9 * std::max(1.0, steps)) {
                throw parameter_error(fmt::format("tau {} does not divide the study interval", tau));
            }
            todo.push_back({s, tau, n, {}});
        }
    }
    ConvergenceResult res;
    res.points = run_parallel<ConvergencePoint>(static_cast<int>(todo.size()), base.jobs, [&](int k) {
        ConvergencePoint pt = todo[k];
        RunConfig c = base;
        c.scheme = pt.scheme;
        c.tau = pt.tau;
        c.n_steps = pt.steps;
        c.snapshot_stride = 0;
        std::optional<std::filesystem::path> dir;
        if (out) dir = *out / fmt::format("{}_tau{}", to_string(pt.scheme), pt.tau);
        const RunResult r = run(c, dir);
        pt.error = *r.steps.back().error;
        return pt;
    });
    for (auto s : schemes) {
        std::vector<double> t, l2, h1;
        for (const auto& pt : res.points) {
            if (pt.scheme != s) continue;
            t.push_back(pt.tau);
            l2.push_back(pt.error.l2);
            h1.push_back(pt.error.h1);
        }
        res.slopes.push_back({s, fit_loglog_slope(t, l2), fit_loglog_slope(t, h1)});
    }
    if (out) {
        CsvTable pts{{"scheme", "tau", "steps", "l2_error_pct", "h1_error_pct"}, {}};
        for (const auto& pt : res.points) pts.add(to_string(pt.scheme), pt.tau, pt.steps, pt.error.l2, pt.error.h1);
        write_csv(*out / "convergence.csv", pts);
        CsvTable sl{{"scheme", "l2_order", "h1_order"}, {}};
        for (const auto& s : res.slopes) sl.add(to_string(s.scheme), s.l2, s.h1);
        write_csv(*out / "slopes.csv", sl);
    }
    return res;
}

struct KroneckerCost {
    int unknowns = 0;
    std::uint64_t flops = 0;
    double seconds = 0.0;
};

/// Factorize and solve both substep operators of one Peaceman-Rachford step.
inline KroneckerCost kronecker_cost(int n, std::pair<int, int> trial, std::pair<int, int> test) {
    const ProblemDefinition p = manufactured();
    const Discretization d = make_discretization(p, n, n, trial, test);
    KroneckerCost c;
    c.unknowns = interior_dim(d.trial_x) * interior_dim(d.trial_y);
    const auto start = std::chrono::steady_clock::now();
    const FlopScope flops;
    const OperatorSet ops = build_operators(p, d, SchemeKind::PeacemanRachford, 0.01, true, 0.0);
    const Grid rx(ops.x.test_grid_shape().first, ops.x.test_grid_shape().second, 1.0);
    const SolutionState a = igrm_substep(ops.x, rx);
    const Grid ry(ops.y.test_grid_shape().first, ops.y.test_grid_shape().second, 1.0);
    const SolutionState b = igrm_substep(ops.y, ry);
    c.flops = flops.elapsed();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!a.u.all_finite() || !b.u.all_finite()) throw divergence_error("kronecker solve produced non-finite values");
    return c;
}

struct GeneralCost {
    int dofs = 0;
    int unknowns = 0;
    double seconds = 0.0;  // factorization plus one solve
};

inline GeneralCost general_cost(int n, std::pair<int, int> trial, std::pair<int, int> test) {
    const ProblemDefinition p = circular_wind();
    const Space2D tr = make_space_2d(p.domain, n, n, trial);
    const Space2D te = make_space_2d(p.domain, n, n, test);
    GeneralSolver g(p, tr, te, 0.1);
    const auto s0 = g.initial_state();
    const auto start = std::chrono::steady_clock::now();
    (void)g.step(s0);
    const double solve = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {saddle_dofs(tr, te), saddle_unknowns(tr, te), g.last_factor_seconds() + solve};
}

struct TimingRow {
    std::pair<int, int> trial, test;
    int n = 0;
    KroneckerCost kron;
    std::optional<GeneralCost> general;
};

/// Cost of both solver paths over meshes n x n for each trial/test pair.
inline std::vector<TimingRow> timing_study(const std::vector<int>& meshes,
                                           const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& pairs,
                                           bool include_general, const std::optional<std::filesystem::path>& out) {
    std::vector<TimingRow> rows;
    for (const auto& [tr, te] : pairs) {
        for (int n : meshes) {
            TimingRow r{tr, te, n, kronecker_cost(n, tr, te), std::nullopt};
            if (include_general) r.general = general_cost(n, tr, te);
            rows.push_back(r);
        }
    }
    if (out) {
        CsvTable t{{"trial", "test", "n", "dofs", "kron_unknowns", "kron_flops", "kron_ms", "general_unknowns",
                    "general_ms"},
                   {}};
        for (const auto& r : rows) {
            const auto sp = [](std::pair<int, int> pc) { return fmt::format("({};{})", pc.first, pc.second); };
            const int dofs = saddle_dofs(make_space_2d({}, r.n, r.n, r.trial), make_space_2d({}, r.n, r.n, r.test));
            t.add(sp(r.trial), sp(r.test), r.n, dofs, r.kron.unknowns, static_cast<unsigned long long>(r.kron.flops),
                  fmt::format("{:.3f}", 1e3 * r.kron.seconds),
                  r.general ? std::to_string(r.general->unknowns) : std::string{},
                  r.general ? fmt::format("{:.3f}", 1e3 * r.general->seconds) : std::string{});
        }
        write_csv(*out / "timing.csv", t);
    }
    return rows;
}

}  // namespace igrm
