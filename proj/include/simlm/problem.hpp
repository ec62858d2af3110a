#pragma once

#include "simlm/linalg.hpp"

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>

namespace simlm {

/// Implicit-stage data for H(t, u, v) = K(t, u) + A(t, u)·v at a fixed (t, u).
struct LinearStage {
    Vector remainder;  ///< K(t, u)
    LinearOperator matrix;  ///< w ↦ A(t, u)·w
    /// Diagonal of A(t, u), used as a Jacobi preconditioner. May be empty.
    Vector diagonal;
    /// Optional direct solver for (I − γA)x = rhs; takes precedence over Krylov when set.
    std::function<void(double gamma, std::span<const double> rhs, std::span<double> x)> shifted_solve;
};

/// Right-hand side du/dt = H(t, u, v) evaluated with the non-stiff argument u and the stiff
/// argument v. Implementations must be free of hidden mutable state so independent runs can
/// share an instance across threads.
class SplitProblem {
public:
    virtual ~SplitProblem() = default;

    [[nodiscard]] virtual std::size_t dim() const = 0;
    virtual void eval(double t, std::span<const double> u, std::span<const double> v,
                      std::span<double> out) const = 0;

    /// True when H is affine in v and linearize() is available.
    [[nodiscard]] virtual bool linear_in_stiff() const { return false; }
    /// Build K(t, u) and A(t, u). One call counts as one implicit-stage evaluation of H.
    [[nodiscard]] virtual LinearStage linearize(double t, std::span<const double> u) const;

    [[nodiscard]] Vector eval(double t, std::span<const double> u, std::span<const double> v) const;
};

/// Wraps a problem and counts evaluations of H and implicit-stage assemblies.
class CountingProblem final : public SplitProblem {
public:
    explicit CountingProblem(const SplitProblem& inner) : inner_(inner) {}

    [[nodiscard]] std::size_t dim() const override { return inner_.dim(); }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override {
        ++evaluations_;
        inner_.eval(t, u, v, out);
    }
    [[nodiscard]] bool linear_in_stiff() const override { return inner_.linear_in_stiff(); }
    [[nodiscard]] LinearStage linearize(double t, std::span<const double> u) const override {
        ++linearizations_;
        return inner_.linearize(t, u);
    }
    using SplitProblem::eval;

    [[nodiscard]] long evaluations() const { return evaluations_; }
    [[nodiscard]] long linearizations() const { return linearizations_; }
    /// Evaluations of H, counting each implicit-stage assembly as one.
    [[nodiscard]] long total() const { return evaluations_ + linearizations_; }
    void reset() {
        evaluations_ = 0;
        linearizations_ = 0;
    }

private:
    const SplitProblem& inner_;
    mutable std::atomic<long> evaluations_{0};
    mutable std::atomic<long> linearizations_{0};
};

/// Hides the linear structure of a problem so the corrector falls back to fixed-point iteration.
class OpaqueProblem final : public SplitProblem {
public:
    explicit OpaqueProblem(const SplitProblem& inner) : inner_(inner) {}
    [[nodiscard]] std::size_t dim() const override { return inner_.dim(); }
    void eval(double t, std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override {
        inner_.eval(t, u, v, out);
    }
    using SplitProblem::eval;

private:
    const SplitProblem& inner_;
};

}  // namespace simlm
