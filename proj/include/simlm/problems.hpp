#pragma once

// Benchmark split problems: a scalar Dahlquist-type test, a manufactured reaction-diffusion
// system, the Gray-Scott model and a nonlinear convection-diffusion equation.

#include "simlm/grid.hpp"
#include "simlm/problem.hpp"

#include <functional>
#include <optional>

namespace simlm {

/// Problem assembled from callables; handy for scalar tests.
class LambdaProblem final : public SplitProblem {
public:
    using EvalFn = std::function<void(double, std::span<const double>, std::span<const double>,
                                      std::span<double>)>;
    using LinearizeFn = std::function<LinearStage(double, std::span<const double>)>;

    LambdaProblem(std::size_t dim, EvalFn eval, LinearizeFn linearize = {})
        : dim_(dim), eval_(std::move(eval)), linearize_(std::move(linearize)) {}

    [[nodiscard]] std::size_t dim() const override { return dim_; }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override {
        eval_(t, u, v, out);
    }
    [[nodiscard]] bool linear_in_stiff() const override { return static_cast<bool>(linearize_); }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override;
    using SplitProblem::eval;

private:
    std::size_t dim_;
    EvalFn eval_;
    LinearizeFn linearize_;
};

/// du/dt = iλu + μv with complex state stored as (Re, Im); exact solution u0·exp((iλ+μ)t).
class DahlquistProblem final : public SplitProblem {
public:
    DahlquistProblem(double lambda = 1.0, double mu = -2.0) : lambda_(lambda), mu_(mu) {}

    [[nodiscard]] std::size_t dim() const override { return 2; }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
    [[nodiscard]] bool linear_in_stiff() const override { return true; }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override;
    using SplitProblem::eval;

    [[nodiscard]] Vector exact(double t) const;

private:
    double lambda_;
    double mu_;
};

/// Manufactured reaction-diffusion system on [0, 2π)² with a 6th-order Laplacian:
///   H = (Δv₁ − α(t)u₁v₁ + 9/2 v₁ + v₂ + f(t),  Δv₂ + 7/2 v₂),  α = 2e^{t/2}, f = −2e^{−t/2},
/// exact solution ω₁ = e^{−t/2}(1 + cos x), ω₂ = e^{−t/2} cos 2x.
class ReactionDiffusionProblem final : public SplitProblem {
public:
    /// Square n×n grid on [0, 2π)².
    explicit ReactionDiffusionProblem(int n);
    /// Throws std::invalid_argument unless the grid is square and covers [0, 2π)².
    explicit ReactionDiffusionProblem(const PeriodicGrid2D& grid);

    static constexpr int kStencilOrder = 6;
    static constexpr double kReaction1 = 4.5;
    static constexpr double kReaction2 = 3.5;

    [[nodiscard]] std::size_t dim() const override { return 2 * grid_.nodes(); }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
    [[nodiscard]] bool linear_in_stiff() const override { return true; }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override;
    using SplitProblem::eval;

    [[nodiscard]] const PeriodicGrid2D& grid() const { return grid_; }
    [[nodiscard]] Vector exact(double t) const;
    static double alpha(double t);
    static double forcing(double t);

private:
    PeriodicGrid2D grid_;
};

struct GrayScottParameters {
    double sigma1 = 8e-5;
    double sigma2 = 4e-5;
    double feed = 0.024;  ///< γ
    double kill = 0.06;   ///< κ
};

/// Gray-Scott model on [−1, 1)² with diffusion explicit and reaction implicit in v:
///   H = (σ₁Δu₁ − v₁u₂² + γ(1 − v₁),  σ₂Δu₂ + v₁u₂² − (γ+κ)v₂)
/// The implicit stage is a pointwise lower-triangular 2×2 solve.
class GrayScottProblem final : public SplitProblem {
public:
    explicit GrayScottProblem(int n, GrayScottParameters params = {});
    GrayScottProblem(const PeriodicGrid2D& grid, GrayScottParameters params = {});

    static constexpr int kStencilOrder = 4;

    [[nodiscard]] std::size_t dim() const override { return 2 * grid_.nodes(); }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
    [[nodiscard]] bool linear_in_stiff() const override { return true; }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override;
    using SplitProblem::eval;

    [[nodiscard]] const PeriodicGrid2D& grid() const { return grid_; }
    [[nodiscard]] const GrayScottParameters& parameters() const { return params_; }
    /// ω₂ = ¼ sin²(4πx) sin²(4πy) on [−¼, ¼]², zero elsewhere; ω₁ = 1 − 2ω₂.
    [[nodiscard]] Vector initial() const;

private:
    PeriodicGrid2D grid_;
    GrayScottParameters params_;
};

/// Nonlinear convection-diffusion ∂ω/∂t + (E − μ∇log ω)·∇ω = μΔω on a periodic truncation
/// of the plane, treated implicitly in v: H = −(E − μ∇log u)·∇v + μΔv.
class ConvectionDiffusionProblem final : public SplitProblem {
public:
    /// Must sit above the noise left by the implicit solve (relative tolerance ~1e-10), or
    /// log ũ picks up spikes wherever undershoots appear in the far field.
    static constexpr double kDefaultFloor = 1e-10;

    /// n×n grid on [−half_width, half_width)². u_floor guards the logarithm: ũ = max(u, u_floor).
    explicit ConvectionDiffusionProblem(int n, double half_width = 10.0, double u_floor = kDefaultFloor);
    explicit ConvectionDiffusionProblem(const PeriodicGrid2D& grid, double u_floor = kDefaultFloor);

    static constexpr int kStencilOrder = 4;
    static constexpr double kDiffusion = 0.5;
    static constexpr double kDriftX = 1.0;
    static constexpr double kDriftY = 1.0;

    [[nodiscard]] std::size_t dim() const override { return grid_.nodes(); }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
    [[nodiscard]] bool linear_in_stiff() const override { return true; }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override;
    using SplitProblem::eval;

    [[nodiscard]] const PeriodicGrid2D& grid() const { return grid_; }
    /// ω(t, x) = (4μt + 1)^{−1/2} exp(−‖x − Et‖² / (8μt + 2)).
    [[nodiscard]] Vector exact(double t) const;
    [[nodiscard]] double floor() const { return floor_; }

private:
    PeriodicGrid2D grid_;
    double floor_;
};

}  // namespace simlm
