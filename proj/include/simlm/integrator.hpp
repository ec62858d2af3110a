#pragma once

#include "simlm/history.hpp"
#include "simlm/problem.hpp"
#include "simlm/schemes.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace simlm {

enum class StartupMode { Exact, Cascade };

struct IntegratorConfig {
    double dt = 0.0;
    StartupMode startup = StartupMode::Cascade;
    double linear_tol = 1e-10;
    int linear_maxiter = 2000;
    /// Sub-steps per Δt for CASCADE startup; 0 selects 2^p for the scheme's order p.
    int cascade_substeps = 0;
};

/// Throws std::invalid_argument unless dt > 0 and linear_tol ∈ (0, 1).
void validate(const IntegratorConfig& cfg);

using ExactSolution = std::function<Vector(double t)>;
/// Called once per time level with (level index, time, state).
using Observer = std::function<void(long level, double t, std::span<const double> u)>;

class FixedPointError : public NumericalError {
public:
    FixedPointError(const std::string& what, int iterations, double update)
        : NumericalError(what), iterations_(iterations), update_(update) {}
    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double last_update() const noexcept { return update_; }

private:
    int iterations_;
    double update_;
};

/// û^{n+1} from the cached history.
Vector predict(const SchemeCoefficients& c, const History& hist, double dt);

/// −Σ a_j u^{n−j} + Δt Σ b_j h^{n−j}: everything in the corrector except the new-level term.
Vector corrector_history(const SchemeCoefficients& c, const History& hist, double dt);

/// Solve v = rhs + Δt b_{−1} H(t_new, û, v) by Picard iteration from v = û.
Vector fixed_point_correct(const SchemeCoefficients& c, const SplitProblem& prob, double t_new,
                           std::span<const double> predicted, std::span<const double> rhs,
                           const IntegratorConfig& cfg);

/// Advance one step: predictor, corrector, then rotate the history with the new level and a
/// fresh cached H. Returns the new newest slot.
const HistorySlot& step(const SchemeCoefficients& c, const SplitProblem& prob, History& hist,
                        const IntegratorConfig& cfg);

/// Fill s time levels t0, t0+Δt, ..., t0+(s−1)Δt.
History startup(const SchemeCoefficients& c, const SplitProblem& prob, double t0,
                std::span<const double> u0, const IntegratorConfig& cfg,
                const ExactSolution& exact = {});

struct IntegrationResult {
    double t = 0.0;
    Vector u;
    long steps = 0;  ///< corrector steps taken after startup
};

/// Number of Δt-steps from t0 to T; throws unless (T − t0)/Δt is an integer up to round-off.
long step_count(double t0, double T, double dt);

/// Integrate from t0 to T. The observer sees every time level, startup levels included.
IntegrationResult integrate(const SchemeCoefficients& c, const SplitProblem& prob, double t0,
                            double T, std::span<const double> u0, const IntegratorConfig& cfg,
                            const Observer& observer = {}, const ExactSolution& exact = {});

}  // namespace simlm
