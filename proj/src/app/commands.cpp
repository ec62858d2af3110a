#include "simlm/app/commands.hpp"

#include "simlm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace simlm::app {

ProblemKind parse_problem(std::string_view name) {
    if (name == "scalar") return ProblemKind::Scalar;
    if (name == "test1") return ProblemKind::Test1;
    if (name == "test2") return ProblemKind::Test2;
    if (name == "test3") return ProblemKind::Test3;
    throw UsageError("unknown problem '" + std::string(name) + "' (scalar, test1, test2, test3)");
}

std::string_view problem_name(ProblemKind p) {
    switch (p) {
        case ProblemKind::Scalar: return "scalar";
        case ProblemKind::Test1: return "test1";
        case ProblemKind::Test2: return "test2";
        case ProblemKind::Test3: return "test3";
    }
    return "?";
}

StartupMode parse_startup(std::string_view name) {
    if (name == "exact") return StartupMode::Exact;
    if (name == "cascade") return StartupMode::Cascade;
    throw UsageError("unknown startup mode '" + std::string(name) + "' (exact, cascade)");
}

SchemeCoefficients resolve_scheme(std::string_view name) {
    try {
        return builtin(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

namespace {

std::string fractions(const std::vector<Rational>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += v[i].str();
    }
    return out + "]";
}

// A problem instance plus what the drivers need to know about it.
struct Setup {
    std::unique_ptr<SplitProblem> problem;
    std::optional<PeriodicGrid2D> grid;
    ExactSolution exact;
    Vector u0;
    int components = 1;
};

Setup make_setup(ProblemKind kind, int n, double u_floor) {
    Setup s;
    switch (kind) {
        case ProblemKind::Scalar: {
            auto p = std::make_unique<DahlquistProblem>();
            s.exact = [q = *p](double t) { return q.exact(t); };
            s.u0 = p->exact(0.0);
            s.components = 2;
            s.problem = std::move(p);
            break;
        }
        case ProblemKind::Test1: {
            auto p = std::make_unique<ReactionDiffusionProblem>(n);
            s.grid = p->grid();
            s.exact = [q = p.get()](double t) { return q->exact(t); };
            s.u0 = p->exact(0.0);
            s.components = 2;
            s.problem = std::move(p);
            break;
        }
        case ProblemKind::Test2: {
            auto p = std::make_unique<GrayScottProblem>(n);
            s.grid = p->grid();
            s.u0 = p->initial();
            s.components = 2;
            s.problem = std::move(p);
            break;
        }
        case ProblemKind::Test3: {
            const double floor = u_floor > 0.0 ? u_floor : ConvectionDiffusionProblem::kDefaultFloor;
            auto p = std::make_unique<ConvectionDiffusionProblem>(n, 10.0, floor);
            s.grid = p->grid();
            s.exact = [q = p.get()](double t) { return q->exact(t); };
            s.u0 = p->exact(0.0);
            s.problem = std::move(p);
            break;
        }
    }
    return s;
}

double l1_distance(const Setup& s, std::span<const double> a, std::span<const double> b) {
    if (s.grid) return l1_error(*s.grid, a, b);
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Δt = T/ceil(T/(λΔx)) keeps an integer step count with Δt ≤ λΔx.
double grid_dt(double T, double lambda, double dx) {
    return T / std::ceil(T / (lambda * dx) - 1e-9);
}

bool finite(std::span<const double> u) {
    return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string schemes_list() {
    std::ostringstream os;
    os << "name       s  p  C     predictor a~ ; b~  |  corrector a ; b ; b_-1\n";
    for (const auto name : catalog_names()) {
        const auto c = builtin_exact(name);
        char head[64];
        std::snprintf(head, sizeof head, "%-10s %d  %d  %-5s ", c.name.c_str(), c.steps(), c.order,
                      c.predictor.cfl == 0 ? "-" : c.predictor.cfl.str().c_str());
        os << head << fractions(c.predictor.state) << " ; " << fractions(c.predictor.slope) << "  |  "
           << fractions(c.corrector.state) << " ; " << fractions(c.corrector.slope) << " ; "
           << c.corrector.slope_new.str() << '\n';
    }
    return os.str();
}

std::string schemes_check(std::string_view name) {
    const auto c = resolve_scheme(name);
    const auto rep = verify_order(c);
    std::ostringstream os;
    os << c.name << " (s=" << c.steps() << ", declared order " << c.order << ")\n"
       << "implicit order " << rep.max_order_implicit << ", explicit order " << rep.max_order_explicit
       << '\n'
       << "q  explicit_residual        implicit_residual\n";
    for (const auto& r : rep.residuals) {
        char line[96];
        std::snprintf(line, sizeof line, "%-2d %-24.17g %.17g\n", r.order, r.explicit_residual,
                      r.implicit_residual);
        os << line;
    }
    return os.str();
}

CsvTable stability_table(const StabilityGrid& grid) {
    CsvTable t;
    t.header = {"z_R", "z_I", "max_root_modulus", "stable"};
    t.rows.reserve(grid.points.size());
    for (const auto& p : grid.points) {
        t.rows.push_back({format_number(p.z_R), format_number(p.z_I_mag), format_number(p.max_root_modulus),
                          p.stable ? "1" : "0"});
    }
    return t;
}

KRange default_k_range(ProblemKind p) {
    switch (p) {
        case ProblemKind::Scalar: return {0, 3};
        case ProblemKind::Test3: return {2, 3};
        default: return {5, 7};
    }
}

double default_final_time(ProblemKind p) {
    switch (p) {
        case ProblemKind::Test2: return 1500.0;
        case ProblemKind::Test3: return 1.0;
        default: return 2.0;
    }
}

std::vector<ConvergeRow> converge(const ConvergeOptions& opt, std::ostream* log) {
    if (opt.problem == ProblemKind::Test2) throw UsageError("converge: test2 has no exact solution");
    const auto def = default_k_range(opt.problem);
    const int k_min = opt.k_min.value_or(def.k_min), k_max = opt.k_max.value_or(def.k_max);
    if (k_min > k_max || k_min < 0 || k_max > 20) throw UsageError("converge: bad k range");
    if (!(opt.lambda > 0.0)) throw UsageError("converge: lambda must be positive");
    const double T = opt.T.value_or(default_final_time(opt.problem));
    const int base = opt.nx_base > 0 ? opt.nx_base : (opt.problem == ProblemKind::Test3 ? 25 : 1);

    std::vector<SchemeCoefficients> schemes;
    for (const auto& name : opt.schemes) schemes.push_back(resolve_scheme(name));

    std::vector<ConvergeRow> rows;
    for (const auto& c : schemes) {
        const std::size_t first = rows.size();
        for (int k = k_min; k <= k_max; ++k) {
            ConvergeRow row;
            row.scheme = c.name;
            row.k = k;
            try {
                const int nx = opt.problem == ProblemKind::Scalar ? 1 : base << k;
                row.nx = nx;
                const auto s = make_setup(opt.problem, nx, 0.0);
                row.dt = s.grid ? grid_dt(T, opt.lambda, s.grid->dx()) : opt.lambda * std::ldexp(1.0, -k);
                IntegratorConfig cfg = opt.solver;
                cfg.dt = row.dt;
                cfg.startup = opt.startup;
                const auto res = integrate(c, *s.problem, 0.0, T, s.u0, cfg, {}, s.exact);
                if (!finite(res.u)) throw NumericalError("non-finite state at final time");
                const auto e = s.exact(T);
                row.l1_full = l1_distance(s, res.u, e);
                if (opt.problem == ProblemKind::Test1) {
                    const std::size_t half = res.u.size() / 2;
                    row.l1_w2 = l1_error(*s.grid, std::span<const double>(res.u).subspan(half),
                                         std::span<const double>(e).subspan(half));
                }
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception& e) {
                row.failure = e.what();
            }
            if (rows.size() > first) {
                const auto& prev = rows.back();
                row.order_full = std::log2(prev.l1_full / row.l1_full);
                row.order_w2 = std::log2(prev.l1_w2 / row.l1_w2);
            }
            if (log) {
                *log << row.scheme << " k=" << row.k << " Nx=" << row.nx << " dt=" << row.dt
                     << " l1=" << row.l1_full;
                if (!row.failure.empty()) *log << " FAILED: " << row.failure;
                *log << '\n';
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

CsvTable converge_table(const std::vector<ConvergeRow>& rows) {
    CsvTable t;
    t.header = {"scheme", "k", "Nx", "dt", "l1_full", "l1_w2", "order_full", "order_w2"};
    for (const auto& r : rows) {
        t.rows.push_back({r.scheme, std::to_string(r.k), std::to_string(r.nx), format_number(r.dt),
                          format_number(r.l1_full), format_number(r.l1_w2), format_number(r.order_full),
                          format_number(r.order_w2)});
    }
    return t;
}

int default_grid_size(ProblemKind p) {
    switch (p) {
        case ProblemKind::Scalar: return 1;
        case ProblemKind::Test1: return 64;
        case ProblemKind::Test2: return 200;
        case ProblemKind::Test3: return 200;
    }
    return 0;
}

double resolve_dt(const RunConfig& cfg) {
    const double T = cfg.T.value_or(default_final_time(cfg.problem));
    if (cfg.dt) {
        if (!(*cfg.dt > 0.0)) throw UsageError("run: dt must be positive");
        return *cfg.dt;
    }
    if (!(cfg.lambda > 0.0)) throw UsageError("run: lambda must be positive");
    if (cfg.problem == ProblemKind::Scalar) throw UsageError("run: the scalar problem needs an explicit dt");
    const int n = cfg.n > 0 ? cfg.n : default_grid_size(cfg.problem);
    const double width = cfg.problem == ProblemKind::Test1   ? 2.0 * std::numbers::pi
                         : cfg.problem == ProblemKind::Test2 ? 2.0
                                                             : 20.0;
    return grid_dt(T, cfg.lambda, width / n);
}

namespace {

CsvTable frame_table(const Setup& s, std::span<const double> u) {
    CsvTable t;
    if (!s.grid) {
        t.header = {"re", "im"};
        t.rows.push_back(format_row(u));
        return t;
    }
    const auto& g = *s.grid;
    t.header = {"x", "y", "w1"};
    if (s.components == 2) t.header.push_back("w2");
    const std::size_t nodes = g.nodes();
    t.rows.reserve(nodes);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const auto idx = g.index(i, j);
            std::vector<double> cells{g.x(i), g.y(j), u[idx]};
            if (s.components == 2) cells.push_back(u[nodes + idx]);
            t.rows.push_back(format_row(cells));
        }
    }
    return t;
}

}  // namespace

CsvTable frame_table(ProblemKind p, int n, std::span<const double> u) {
    return frame_table(make_setup(p, n, 0.0), u);
}

RunSummary run(const RunConfig& cfg, std::ostream* log) {
    const auto c = resolve_scheme(cfg.scheme);
    const int n = cfg.n > 0 ? cfg.n : default_grid_size(cfg.problem);
    const double T = cfg.T.value_or(default_final_time(cfg.problem));
    const double dt = resolve_dt(cfg);
    const auto s = make_setup(cfg.problem, n, cfg.u_floor);
    if (cfg.startup == StartupMode::Exact && !s.exact) {
        throw UsageError("run: exact startup needs an exact solution; use --startup cascade");
    }

    long total = 0;
    try {
        total = step_count(0.0, T, dt);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    // Frame index by time level; requested times snap to the nearest level.
    std::vector<double> times = cfg.frame_times;
    if (times.empty()) {
        const int count = cfg.frame_count.value_or(cfg.problem == ProblemKind::Test2 ? 6 : 1);
        if (count < 0) throw UsageError("run: negative frame count");
        for (int f = 0; f < count; ++f) times.push_back(count == 1 ? T : T * f / (count - 1));
    }
    std::multimap<long, int> frames;
    for (std::size_t f = 0; f < times.size(); ++f) {
        if (times[f] < -1e-12 || times[f] > T * (1 + 1e-12)) throw UsageError("run: frame time outside [0, T]");
        frames.emplace(std::lround(times[f] / dt), static_cast<int>(f));
    }
    const bool write = !cfg.out_dir.empty();
    CsvTable manifest;
    manifest.header = {"frame", "level", "t", "file"};
    if (write) std::filesystem::create_directories(cfg.out_dir);

    RunSummary sum;
    sum.problem = cfg.problem;
    sum.scheme = c.name;
    sum.n = n;
    sum.dt = dt;
    int last_good = -1;
    long last_level = -1;

    IntegratorConfig icfg = cfg.solver;
    icfg.dt = dt;
    icfg.startup = cfg.startup;
    const auto observer = [&](long level, double t, std::span<const double> u) {
        if (!finite(u)) {
            throw RunAborted("non-finite state at level " + std::to_string(level) + " (t=" + format_number(t) +
                                 "), last good frame " + std::to_string(last_good),
                             last_level, last_good);
        }
        last_level = level;
        const auto [lo, hi] = frames.equal_range(level);
        for (auto it = lo; it != hi; ++it) {
            if (write) {
                char file[32];
                std::snprintf(file, sizeof file, "frame_%03d.csv", it->second);
                write_csv(cfg.out_dir / file, frame_table(s, u));
                manifest.rows.push_back(
                    {std::to_string(it->second), std::to_string(level), format_number(t), file});
                write_csv(cfg.out_dir / "manifest.csv", manifest);
            }
            ++sum.frames_written;
            last_good = it->second;
        }
        if (log && total >= 10 && level % (total / 10) == 0 && level > 0) {
            *log << "level " << level << "/" << total << " t=" << t << '\n';
        }
    };
    IntegrationResult res;
    try {
        res = integrate(c, *s.problem, 0.0, T, s.u0, icfg, observer, s.exact);
    } catch (const RunAborted&) {
        throw;
    } catch (const NumericalError& e) {
        throw RunAborted(std::string(e.what()) + " after level " + std::to_string(last_level) +
                             ", last good frame " + std::to_string(last_good),
                         last_level, last_good);
    }

    sum.t_final = res.t;
    sum.steps = res.steps;
    sum.u = res.u;
    const auto [mn, mx] = std::minmax_element(res.u.begin(), res.u.end());
    sum.min = *mn;
    sum.max = *mx;
    if (s.exact) sum.l1_exact = l1_distance(s, res.u, s.exact(res.t));
    return sum;
}

std::string format_summary(const RunSummary& s) {
    std::ostringstream os;
    os.precision(10);
    os << "problem " << problem_name(s.problem) << "  scheme " << s.scheme << "  n " << s.n << "  dt " << s.dt
       << '\n'
       << "t_final " << s.t_final << "  steps " << s.steps << "  frames " << s.frames_written << '\n'
       << "min " << s.min << "  max " << s.max;
    if (s.l1_exact) os << "  l1_vs_exact " << *s.l1_exact;
    os << '\n';
    return os.str();
}

}  // namespace simlm::app
