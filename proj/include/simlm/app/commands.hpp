#pragma once

// Implementations behind the simlm subcommands. Each returns data; tools/simlm.cpp owns
// argument parsing, file output and exit codes.

#include "simlm/app/csv.hpp"
#include "simlm/integrator.hpp"
#include "simlm/stability.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace simlm::app {

/// Bad user input (unknown names, inconsistent options). Maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { Scalar, Test1, Test2, Test3 };

ProblemKind parse_problem(std::string_view name);
std::string_view problem_name(ProblemKind p);
StartupMode parse_startup(std::string_view name);

/// Resolve a scheme name, throwing UsageError for unknown names.
SchemeCoefficients resolve_scheme(std::string_view name);

// ---- schemes

/// One row per catalog scheme: name, s, p, C and every coefficient as a fraction.
std::string schemes_list();
/// "implicit order X, explicit order Y" followed by the residual of each order condition.
std::string schemes_check(std::string_view name);

// ---- stability

/// Columns z_R,z_I,max_root_modulus,stable, rows in scan order.
CsvTable stability_table(const StabilityGrid& grid);

// ---- converge

struct ConvergeOptions {
    ProblemKind problem = ProblemKind::Test1;
    std::vector<std::string> schemes{"FE-BDF2", "AB-BDF3", "SSP-BDF4", "AB-AM5"};
    /// Unset values take the problem defaults (see default_k_range).
    std::optional<int> k_min, k_max;
    /// Δt = λΔx on grids; Δt = λ·2^{−k} for the scalar problem.
    double lambda = 0.5;
    std::optional<double> T;
    StartupMode startup = StartupMode::Exact;
    /// Nx = nx_base·2^k; 0 selects the problem default (1 for test1, 25 for test3).
    int nx_base = 0;
    IntegratorConfig solver{};  ///< dt and startup are overwritten per run
};

struct ConvergeRow {
    std::string scheme;
    int k = 0;
    int nx = 0;
    double dt = 0.0;
    double l1_full = NAN;
    double l1_w2 = NAN;
    double order_full = NAN;
    double order_w2 = NAN;
    std::string failure;  ///< empty on success
};

struct KRange {
    int k_min, k_max;
};
KRange default_k_range(ProblemKind p);
double default_final_time(ProblemKind p);

/// Runs every (scheme, k) pair. A failed run leaves NaN errors in its row and the sweep goes on.
/// Orders are log₂ of successive error ratios and sit on the finer row.
std::vector<ConvergeRow> converge(const ConvergeOptions& opt, std::ostream* log = nullptr);
/// Columns scheme,k,Nx,dt,l1_full,l1_w2,order_full,order_w2.
CsvTable converge_table(const std::vector<ConvergeRow>& rows);

// ---- run

struct RunConfig {
    std::string scheme = "SSP-BDF4";
    ProblemKind problem = ProblemKind::Test3;
    int n = 0;                 ///< grid points per axis, 0 for the problem default
    std::optional<double> dt;  ///< explicit step, overrides lambda
    double lambda = 0.5;       ///< Δt = λΔx
    std::optional<double> T;
    StartupMode startup = StartupMode::Cascade;
    std::filesystem::path out_dir;  ///< empty: no frames written
    /// Frame times. Without explicit times, frame_count frames are spread evenly over [t0, T].
    std::vector<double> frame_times;
    std::optional<int> frame_count;
    double u_floor = 0.0;  ///< test3 logarithm floor, 0 for the library default
    IntegratorConfig solver{};
};

struct RunSummary {
    ProblemKind problem = ProblemKind::Test3;
    std::string scheme;
    int n = 0;
    double dt = 0.0;
    double t_final = 0.0;
    long steps = 0;
    double min = NAN, max = NAN;
    std::optional<double> l1_exact;  ///< when an exact solution exists
    int frames_written = 0;
    Vector u;  ///< final state
};

/// A run stopped on a non-finite state or a failed solve. Carries the last finite level and
/// the last frame written before the failure (−1 if none).
class RunAborted : public NumericalError {
public:
    RunAborted(const std::string& what, long last_good_level, int last_good_frame)
        : NumericalError(what), level_(last_good_level), last_good_frame_(last_good_frame) {}
    [[nodiscard]] long last_good_level() const noexcept { return level_; }
    [[nodiscard]] int last_good_frame() const noexcept { return last_good_frame_; }

private:
    long level_;
    int last_good_frame_;
};

int default_grid_size(ProblemKind p);
/// Δt actually used by run(): explicit, otherwise T/ceil(T/(λΔx)).
double resolve_dt(const RunConfig& cfg);

/// Integrates the configured problem, writing frame_XXX.csv files and manifest.csv into out_dir.
RunSummary run(const RunConfig& cfg, std::ostream* log = nullptr);
std::string format_summary(const RunSummary& s);

/// Frame as a table: x,y,w1[,w2] for grid problems, re,im for the scalar problem.
CsvTable frame_table(ProblemKind p, int n, std::span<const double> u);

}  // namespace simlm::app
