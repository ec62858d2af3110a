#include "simlm/integrator.hpp"
#include "simlm/problems.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace simlm;

namespace {

// H = λ v in one dimension, with its linear structure exposed.
LambdaProblem linear_scalar(double lambda) {
    return LambdaProblem(
        1,
        [lambda](double, std::span<const double>, std::span<const double> v, std::span<double> out) {
            out[0] = lambda * v[0];
        },
        [lambda](double, std::span<const double>) {
            LinearStage st;
            st.remainder = {0.0};
            st.matrix = {1, [lambda](std::span<const double> w, std::span<double> o) { o[0] = lambda * w[0]; }};
            st.diagonal = {lambda};
            return st;
        });
}

HistorySlot slot(double t, double u, double h) { return {t, {u}, {h}}; }

double dahlquist_error(const SchemeCoefficients& c, double dt, double T, StartupMode mode) {
    DahlquistProblem prob;
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.startup = mode;
    const auto exact = [&](double t) { return prob.exact(t); };
    const auto res = integrate(c, prob, 0.0, T, prob.exact(0.0), cfg, {}, exact);
    const auto e = prob.exact(T);
    return std::hypot(res.u[0] - e[0], res.u[1] - e[1]);
}

}  // namespace

TEST(History, NewestFirstRing) {
    History h(3);
    EXPECT_FALSE(h.full());
    h.push(slot(0.0, 10, 0));
    h.push(slot(1.0, 11, 0));
    h.push(slot(2.0, 12, 0));
    EXPECT_TRUE(h.full());
    EXPECT_EQ(h[0].u[0], 12);
    EXPECT_EQ(h[2].u[0], 10);
    h.push(slot(3.0, 13, 0));
    EXPECT_EQ(h.newest().t, 3.0);
    EXPECT_EQ(h[2].u[0], 11);
    EXPECT_NEAR(h.spacing_error(1.0), 0.0, 1e-15);
    EXPECT_THROW(History(0), std::invalid_argument);
}

TEST(Step, BackwardEulerScalar) {
    // v = 1 + Δt λ v with λ = −1/2, Δt = 1  ⇒  v = 2/3.
    const auto prob = linear_scalar(-0.5);
    IntegratorConfig cfg;
    cfg.dt = 1.0;
    History h(1);
    h.push(slot(0.0, 1.0, -0.5));
    const auto& out = step(builtin("FE-BE1"), prob, h, cfg);
    EXPECT_NEAR(out.u[0], 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(out.h[0], -1.0 / 3.0, 1e-14);
    EXPECT_DOUBLE_EQ(out.t, 1.0);
}

TEST(Step, CrankNicolsonIgnoresPaddedLevel) {
    // v = 1 + ½Δt h⁰ + ½Δt λ v with λ = −1, Δt = 1, h⁰ = −1  ⇒  v = 1/3.
    const auto prob = linear_scalar(-1.0);
    IntegratorConfig cfg;
    cfg.dt = 1.0;
    History h(2);
    h.push(slot(-1.0, 1e6, -1e6));
    h.push(slot(0.0, 1.0, -1.0));
    EXPECT_NEAR(step(builtin("FE-CN2"), prob, h, cfg).u[0], 1.0 / 3.0, 1e-14);
}

TEST(Integrate, BackwardEulerPower) {
    const auto prob = linear_scalar(-1.0);
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    const auto res = integrate(builtin("FE-BE1"), prob, 0.0, 1.0, Vector{1.0}, cfg);
    EXPECT_NEAR(res.u[0], std::pow(1.0 / 1.1, 10), 1e-13);
    EXPECT_EQ(res.steps, 10);
    EXPECT_NEAR(res.t, 1.0, 1e-14);
}

TEST(Integrate, ZeroRightHandSideKeepsStateForEveryScheme) {
    const LambdaProblem zero(3, [](double, std::span<const double>, std::span<const double>,
                                   std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); });
    const Vector u0{1.0, -2.0, 3.5};
    for (const auto name : catalog_names()) {
        for (auto mode : {StartupMode::Exact, StartupMode::Cascade}) {
            IntegratorConfig cfg;
            cfg.dt = 0.25;
            cfg.startup = mode;
            const auto res = integrate(builtin(name), zero, 0.0, 5.0, u0, cfg, {},
                                       [&](double) { return u0; });
            for (int i = 0; i < 3; ++i) EXPECT_NEAR(res.u[i], u0[i], 1e-10) << name;
        }
    }
}

TEST(Integrate, FixedPointAgreesWithLinearPath) {
    DahlquistProblem prob;
    OpaqueProblem opaque(prob);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.linear_tol = 1e-13;
    cfg.startup = StartupMode::Exact;
    const auto exact = [&](double t) { return prob.exact(t); };
    for (const char* name : {"FE-BDF2", "AB-BDF3", "SSP-BDF4", "AB-AM4"}) {
        const auto a = integrate(builtin(name), prob, 0.0, 2.0, prob.exact(0), cfg, {}, exact);
        const auto b = integrate(builtin(name), opaque, 0.0, 2.0, prob.exact(0), cfg, {}, exact);
        EXPECT_NEAR(a.u[0], b.u[0], 1e-11) << name;
        EXPECT_NEAR(a.u[1], b.u[1], 1e-11) << name;
    }
}

TEST(FixedPoint, CubicDecayMatchesBisection) {
    // Backward Euler on du/dt = −v³: v + Δt v³ = u⁰, monotone in v.
    const LambdaProblem cubic(1, [](double, std::span<const double>, std::span<const double> v,
                                    std::span<double> out) { out[0] = -v[0] * v[0] * v[0]; });
    const double dt = 0.2, u0 = 1.0;
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (mid + dt * mid * mid * mid > u0 ? hi : lo) = mid;
    }
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.linear_tol = 1e-14;
    History h(1);
    h.push(slot(0.0, u0, -1.0));
    EXPECT_NEAR(step(builtin("FE-BE1"), cubic, h, cfg).u[0], 0.5 * (lo + hi), 1e-12);
}

TEST(FixedPoint, DivergenceIsReported) {
    const LambdaProblem stiff(1, [](double, std::span<const double>, std::span<const double> v,
                                    std::span<double> out) { out[0] = -10.0 * v[0]; });
    IntegratorConfig cfg;
    cfg.dt = 1.0;
    cfg.linear_maxiter = 50;
    History h(1);
    h.push(slot(0.0, 1.0, -10.0));
    EXPECT_THROW(step(builtin("FE-BE1"), stiff, h, cfg), FixedPointError);
}

TEST(Startup, CascadeLevelsApproachExact) {
    DahlquistProblem prob;
    for (const auto name : catalog_names()) {
        const auto c = builtin(name);
        if (c.steps() == 1) continue;
        double prev = 0.0;
        for (double dt : {0.1, 0.05}) {
            IntegratorConfig cfg;
            cfg.dt = dt;
            cfg.cascade_substeps = 16;
            const auto hist = startup(c, prob, 0.0, prob.exact(0), cfg);
            ASSERT_TRUE(hist.full());
            EXPECT_LT(hist.spacing_error(cfg.dt), 1e-12);
            double worst = 0.0;
            for (int j = 0; j < c.steps(); ++j) {
                const auto e = prob.exact(hist[j].t);
                worst = std::max(worst, std::hypot(hist[j].u[0] - e[0], hist[j].u[1] - e[1]));
            }
            // O(Δt_sub^p) for p ≤ 4; the order-5 ramp saturates near Δt_sub^4.
            EXPECT_LT(worst, 20.0 * std::pow(dt / 16, std::min(c.order, 4))) << name;
            if (prev > 0.0) EXPECT_GT(std::log2(prev / worst), std::min(c.order, 3) - 0.5) << name;
            prev = worst;
        }
    }
}

TEST(Startup, CascadeGlobalErrorMatchesExactStart) {
    for (const auto name : catalog_names()) {
        const auto c = builtin(name);
        for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
            const double exact = dahlquist_error(c, dt, 2.0, StartupMode::Exact);
            const double cascade = dahlquist_error(c, dt, 2.0, StartupMode::Cascade);
            EXPECT_LT(std::abs(cascade - exact), 0.1 * exact) << name << " dt=" << dt;
        }
    }
}

TEST(Startup, ExactNeedsSolution) {
    DahlquistProblem prob;
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.startup = StartupMode::Exact;
    EXPECT_THROW(startup(builtin("FE-BDF2"), prob, 0.0, prob.exact(0), cfg), std::invalid_argument);
}

TEST(Integrate, EvaluationCountIsTwoPerStep) {
    DahlquistProblem prob;
    CountingProblem counted(prob);
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.startup = StartupMode::Exact;
    for (const auto name : catalog_names()) {
        const auto c = builtin(name);
        auto hist = startup(c, counted, 0.0, prob.exact(0), cfg, [&](double t) { return prob.exact(t); });
        counted.reset();
        const int n = 37;
        for (int k = 0; k < n; ++k) step(c, counted, hist, cfg);
        EXPECT_EQ(counted.evaluations(), n) << name;
        EXPECT_EQ(counted.linearizations(), n) << name;
        EXPECT_EQ(counted.total(), 2 * n) << name;
    }
}

TEST(Integrate, ObserverSeesEveryLevel) {
    DahlquistProblem prob;
    IntegratorConfig cfg;
    cfg.dt = 0.125;
    std::vector<long> levels;
    std::vector<double> times;
    integrate(builtin("SSP-BDF4"), prob, 1.0, 2.0, prob.exact(0), cfg,
              [&](long n, double t, std::span<const double>) {
                  levels.push_back(n);
                  times.push_back(t);
              });
    ASSERT_EQ(levels.size(), 9u);
    for (long n = 0; n < 9; ++n) {
        EXPECT_EQ(levels[n], n);
        EXPECT_NEAR(times[n], 1.0 + 0.125 * n, 1e-14);
    }
}

TEST(Integrate, ShortHorizonStopsInsideStartup) {
    DahlquistProblem prob;
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.startup = StartupMode::Exact;
    const auto res = integrate(builtin("SSP-BDF4"), prob, 0.0, 0.2, prob.exact(0), cfg, {},
                               [&](double t) { return prob.exact(t); });
    EXPECT_EQ(res.steps, 0);
    EXPECT_NEAR(res.t, 0.2, 1e-14);
    EXPECT_NEAR(res.u[0], prob.exact(0.2)[0], 1e-15);
}

TEST(Config, Validation) {
    IntegratorConfig cfg;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg.dt = 0.1;
    EXPECT_NO_THROW(validate(cfg));
    cfg.linear_tol = 1.5;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    EXPECT_EQ(step_count(0.0, 2.0, 0.1), 20);
    EXPECT_THROW(step_count(0.0, 1.0, 0.3), std::invalid_argument);
    EXPECT_THROW(step_count(1.0, 0.0, 0.1), std::invalid_argument);
}
