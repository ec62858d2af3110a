// simlm: scheme inspection, stability maps, convergence tables and benchmark runs.
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include "simlm/app/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace simlm;
using namespace simlm::app;

namespace {

void emit(const CsvTable& t, const std::string& out) {
    if (out.empty() || out == "-") {
        write_csv(std::cout, t);
    } else {
        write_csv(std::filesystem::path(out), t);
    }
}

// Keys are long option names without the dashes; options already given on the command line win.
void apply_config(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const auto trim = [](std::string t) {
            const auto a = t.find_first_not_of(" \t\r"), b = t.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
        };
        const auto key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "config") throw UsageError(path + ": nested config files are not supported");
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (opt->count() > 0) continue;
        std::istringstream words(value);
        for (std::string w; words >> w;) opt->add_result(w);
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-implicit linear multistep schemes: inspection, stability, convergence, runs"};
    app.require_subcommand(1);

    // schemes
    auto* sch = app.add_subcommand("schemes", "List the catalog or check one scheme's order conditions");
    std::string sch_action, sch_name;
    sch->add_option("action", sch_action, "list | check | catalog")
        ->required()
        ->check(CLI::IsMember({"list", "check", "catalog"}));
    sch->add_option("name", sch_name, "Scheme for 'check'");

    // stability
    auto* stab = app.add_subcommand("stability", "Scan the linear stability region into CSV");
    std::string stab_scheme, stab_out;
    double zr_min = -10.0, zr_max = 0.0, zi_max = 5.0;
    int n_r = 101, n_i = 101;
    stab->add_option("--scheme", stab_scheme)->required();
    stab->add_option("--zr-min", zr_min, "Lower end of the z_R range")->capture_default_str();
    stab->add_option("--zr-max", zr_max, "Upper end of the z_R range")->capture_default_str();
    stab->add_option("--zi-max", zi_max, "z_I_mag range is [0, zi-max]")->capture_default_str();
    stab->add_option("--nr", n_r, "z_R samples")->capture_default_str();
    stab->add_option("--ni", n_i, "z_I_mag samples")->capture_default_str();
    stab->add_option("-o,--out", stab_out, "Output CSV (default stdout)");

    // converge
    auto* conv = app.add_subcommand("converge", "l1 error and observed order under refinement");
    ConvergeOptions copt;
    std::string conv_problem = "test1", conv_startup = "exact", conv_out;
    int k_min = -1, k_max = -1;
    double conv_T = 0.0;
    conv->add_option("--problem", conv_problem, "test1 | test3 | scalar")->capture_default_str();
    conv->add_option("--schemes", copt.schemes, "Scheme names")->capture_default_str();
    conv->add_option("--k-min", k_min, "Smallest k (Nx = base*2^k, or dt = lambda*2^-k for scalar)");
    conv->add_option("--k-max", k_max, "Largest k");
    conv->add_option("--lambda", copt.lambda, "dt = lambda*dx")->capture_default_str();
    conv->add_option("--T", conv_T, "Final time (problem default when omitted)");
    conv->add_option("--startup", conv_startup, "exact | cascade")->capture_default_str();
    conv->add_option("--nx-base", copt.nx_base, "Nx = base*2^k (0: problem default)");
    conv->add_option("-o,--out", conv_out, "Output CSV (default stdout)");

    // run
    auto* runc = app.add_subcommand("run", "Integrate a benchmark problem and dump frames");
    std::string run_config;
    runc->add_option("--config", run_config, "key=value file; command-line flags override it")
        ->check(CLI::ExistingFile);
    RunConfig rcfg;
    std::string run_problem = "test3", run_startup = "cascade", run_out;
    double run_dt = 0.0, run_T = 0.0;
    int frame_count = -1;
    runc->add_option("--scheme", rcfg.scheme)->capture_default_str();
    runc->add_option("--problem", run_problem, "scalar | test1 | test2 | test3")->capture_default_str();
    runc->add_option("--n", rcfg.n, "Grid points per axis (0: problem default)");
    runc->add_option("--dt", run_dt, "Explicit time step (overrides --lambda)");
    runc->add_option("--lambda", rcfg.lambda, "dt = lambda*dx")->capture_default_str();
    runc->add_option("--T", run_T, "Final time (problem default when omitted)");
    runc->add_option("--startup", run_startup, "exact | cascade")->capture_default_str();
    runc->add_option("--out-dir", run_out, "Directory for frame_XXX.csv and manifest.csv");
    runc->add_option("--frames", rcfg.frame_times, "Frame times");
    runc->add_option("--frame-count", frame_count, "Evenly spaced frames over [0, T]");
    runc->add_option("--floor", rcfg.u_floor, "test3 logarithm floor (0: library default)");
    runc->add_option("--linear-tol", rcfg.solver.linear_tol, "Relative tolerance of the implicit solve")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sch->parsed()) {
            if (sch_action == "list") {
                std::cout << schemes_list();
            } else if (sch_action == "catalog") {
                std::cout << format_catalog();
            } else {
                if (sch_name.empty()) throw UsageError("schemes check: missing scheme name");
                std::cout << schemes_check(sch_name);
            }
        } else if (stab->parsed()) {
            const auto c = resolve_scheme(stab_scheme);
            StabilityGrid grid;
            try {
                grid = scan_region(c, zr_min, zr_max, n_r, zi_max, n_i);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            emit(stability_table(grid), stab_out);
        } else if (conv->parsed()) {
            copt.problem = parse_problem(conv_problem);
            copt.startup = parse_startup(conv_startup);
            if (k_min >= 0) copt.k_min = k_min;
            if (k_max >= 0) copt.k_max = k_max;
            if (conv_T > 0.0) copt.T = conv_T;
            const auto rows = converge(copt, &std::cerr);
            emit(converge_table(rows), conv_out);
            for (const auto& r : rows) {
                if (!r.failure.empty()) return 2;
            }
        } else if (runc->parsed()) {
            if (!run_config.empty()) apply_config(*runc, run_config);
            rcfg.problem = parse_problem(run_problem);
            rcfg.startup = parse_startup(run_startup);
            if (run_dt > 0.0) rcfg.dt = run_dt;
            if (run_T > 0.0) rcfg.T = run_T;
            if (frame_count >= 0) rcfg.frame_count = frame_count;
            rcfg.out_dir = run_out;
            const auto s = run(rcfg, &std::cerr);
            std::cout << format_summary(s);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
