#include "simlm/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <string_view>

namespace simlm {

namespace {

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

double relative_change(std::span<const double> next, std::span<const double> prev) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = next[i] - prev[i];
        diff += d * d;
        scale += next[i] * next[i];
    }
    return std::sqrt(diff) / std::max(std::sqrt(scale), std::numeric_limits<double>::min());
}

void require_filled(const SchemeCoefficients& c, const History& hist) {
    if (hist.size() < static_cast<std::size_t>(c.steps())) {
        throw std::invalid_argument("scheme '" + c.name + "' needs " + std::to_string(c.steps()) +
                                    " history levels, got " + std::to_string(hist.size()));
    }
}

HistorySlot make_slot(const SplitProblem& prob, double t, Vector u) {
    HistorySlot slot{t, std::move(u), Vector(prob.dim())};
    prob.eval(t, slot.u, slot.u, slot.h);
    return slot;
}

// Lower-step schemes used to bootstrap the history, indexed by step count - 1.
constexpr std::array<std::string_view, 5> kCascade = {"FE-BE1", "FE-BDF2", "AB-BDF3", "AB-BDF4",
                                                      "AB-BDF5"};

}  // namespace

void validate(const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("integrator: dt must be positive");
    if (!(cfg.linear_tol > 0.0 && cfg.linear_tol < 1.0)) {
        throw std::invalid_argument("integrator: linear_tol must lie in (0, 1)");
    }
    if (cfg.linear_maxiter < 1) throw std::invalid_argument("integrator: linear_maxiter must be >= 1");
    if (cfg.cascade_substeps < 0) {
        throw std::invalid_argument("integrator: cascade_substeps must be >= 1 (or 0 for default)");
    }
}

Vector predict(const SchemeCoefficients& c, const History& hist, double dt) {
    require_filled(c, hist);
    Vector out(hist.newest().u.size(), 0.0);
    for (int j = 0; j < c.steps(); ++j) {
        const auto& slot = hist[j];
        if (c.predictor.state[j] != 0.0) axpy(-c.predictor.state[j], slot.u, out);
        if (c.predictor.slope[j] != 0.0) axpy(dt * c.predictor.slope[j], slot.h, out);
    }
    return out;
}

Vector corrector_history(const SchemeCoefficients& c, const History& hist, double dt) {
    require_filled(c, hist);
    Vector out(hist.newest().u.size(), 0.0);
    for (int j = 0; j < c.steps(); ++j) {
        const auto& slot = hist[j];
        if (c.corrector.state[j] != 0.0) axpy(-c.corrector.state[j], slot.u, out);
        if (c.corrector.slope[j] != 0.0) axpy(dt * c.corrector.slope[j], slot.h, out);
    }
    return out;
}

Vector fixed_point_correct(const SchemeCoefficients& c, const SplitProblem& prob, double t_new,
                           std::span<const double> predicted, std::span<const double> rhs,
                           const IntegratorConfig& cfg) {
    const double gamma = cfg.dt * c.corrector.slope_new;
    Vector v(predicted.begin(), predicted.end());
    Vector next(v.size());
    double change = 0.0;
    for (int k = 1; k <= cfg.linear_maxiter; ++k) {
        prob.eval(t_new, predicted, v, next);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = rhs[i] + gamma * next[i];
        change = relative_change(next, v);
        v.swap(next);
        if (!std::isfinite(change)) {
            throw FixedPointError("fixed-point corrector diverged", k, change);
        }
        if (change < cfg.linear_tol) return v;
    }
    std::ostringstream os;
    os << "fixed-point corrector did not converge: relative update " << change << " after "
       << cfg.linear_maxiter << " iterations (tol " << cfg.linear_tol << ")";
    throw FixedPointError(os.str(), cfg.linear_maxiter, change);
}

namespace {

const HistorySlot& step_to(const SchemeCoefficients& c, const SplitProblem& prob, History& hist,
                           const IntegratorConfig& cfg, double t_new) {
    const Vector predicted = predict(c, hist, cfg.dt);
    Vector rhs = corrector_history(c, hist, cfg.dt);
    const double gamma = cfg.dt * c.corrector.slope_new;

    Vector u_new;
    if (prob.linear_in_stiff()) {
        const LinearStage stage = prob.linearize(t_new, predicted);
        axpy(gamma, stage.remainder, rhs);
        if (stage.shifted_solve) {
            u_new.resize(rhs.size());
            stage.shifted_solve(gamma, rhs, u_new);
        } else {
            ShiftedSolveOptions options;
            options.tol = cfg.linear_tol;
            options.maxiter = cfg.linear_maxiter;
            options.diagonal = stage.diagonal;
            u_new = solve_shifted(stage.matrix, gamma, rhs, options);
        }
    } else {
        u_new = fixed_point_correct(c, prob, t_new, predicted, rhs, cfg);
    }

    HistorySlot& slot = hist.recycle();
    slot.t = t_new;
    slot.u = std::move(u_new);
    slot.h.resize(prob.dim());
    prob.eval(t_new, slot.u, slot.u, slot.h);
    return slot;
}

}  // namespace

const HistorySlot& step(const SchemeCoefficients& c, const SplitProblem& prob, History& hist,
                        const IntegratorConfig& cfg) {
    require_filled(c, hist);
    return step_to(c, prob, hist, cfg, hist.newest().t + cfg.dt);
}

History startup(const SchemeCoefficients& c, const SplitProblem& prob, double t0,
                std::span<const double> u0, const IntegratorConfig& cfg, const ExactSolution& exact) {
    validate(cfg);
    const int s = c.steps();
    if (s < 1) throw std::invalid_argument("startup: scheme has no steps");
    if (u0.size() != prob.dim()) throw std::invalid_argument("startup: initial state dimension mismatch");

    History hist(static_cast<std::size_t>(s));
    if (s == 1) {
        hist.push(make_slot(prob, t0, Vector(u0.begin(), u0.end())));
        return hist;
    }

    if (cfg.startup == StartupMode::Exact) {
        if (!exact) throw std::invalid_argument("startup: EXACT mode requires an exact solution");
        for (int j = 0; j < s; ++j) {
            const double t = t0 + j * cfg.dt;
            hist.push(make_slot(prob, t, exact(t)));
        }
        return hist;
    }

    const int target = std::min<int>(std::max(c.order, 1), static_cast<int>(kCascade.size()));
    const int substeps = cfg.cascade_substeps > 0 ? cfg.cascade_substeps : (1 << c.order);
    const double h_sub = cfg.dt / substeps;

    std::vector<SchemeCoefficients> chain;
    for (int k = 0; k < target; ++k) chain.push_back(builtin(kCascade[k]));

    // One step of the chain scheme matching the number of levels held (newest at the back).
    std::deque<HistorySlot> recent;
    IntegratorConfig sub = cfg;
    auto advance = [&](double h, double t_new) {
        const int k = std::min<int>(static_cast<int>(recent.size()), target);
        const SchemeCoefficients& boot = chain[k - 1];
        sub.dt = h;
        History local(static_cast<std::size_t>(boot.steps()));
        for (auto it = recent.end() - boot.steps(); it != recent.end(); ++it) local.push(*it);
        recent.push_back(step_to(boot, prob, local, sub, t_new));
    };

    // The low-order first levels start at h0 ~ h_sub^{p/2} so their error is O(h_sub^p);
    // the spacing is then doubled with the top chain scheme until it reaches h_sub.
    int doublings = 0;
    if (target > 1 && h_sub < 1.0) {
        const double r = std::ceil((0.5 * target - 1.0) * std::log2(1.0 / h_sub));
        doublings = std::clamp(static_cast<int>(r), 0, 40);
    }
    double h = std::ldexp(h_sub, -doublings);
    recent.push_back(make_slot(prob, t0, Vector(u0.begin(), u0.end())));
    while (static_cast<int>(recent.size()) < target) advance(h, t0 + static_cast<double>(recent.size()) * h);
    for (int d = 0; d < doublings; ++d) {
        for (int n = target; n <= 2 * (target - 1); ++n) advance(h, t0 + n * h);
        std::deque<HistorySlot> coarse;
        for (int n = 0; n <= 2 * (target - 1); n += 2) coarse.push_back(std::move(recent[n]));
        recent.swap(coarse);
        h *= 2.0;
        for (int n = 0; n < target; ++n) recent[n].t = t0 + n * h;
    }

    // recent now holds levels 0..target−1 at spacing h_sub.
    const long total = static_cast<long>(s - 1) * substeps;
    for (long n = 0; n < static_cast<long>(recent.size()) && n <= total; ++n) {
        if (n % substeps == 0) {
            HistorySlot slot = recent[n];
            slot.t = t0 + static_cast<double>(n / substeps) * cfg.dt;
            hist.push(std::move(slot));
        }
    }
    for (long n = static_cast<long>(recent.size()); n <= total; ++n) {
        advance(h_sub, t0 + n * h_sub);
        if (recent.size() > static_cast<std::size_t>(target)) recent.pop_front();
        if (n % substeps == 0) {
            HistorySlot slot = recent.back();
            slot.t = t0 + static_cast<double>(n / substeps) * cfg.dt;
            hist.push(std::move(slot));
        }
    }
    return hist;
}

long step_count(double t0, double T, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_count: dt must be positive");
    if (T < t0) throw std::invalid_argument("step_count: final time precedes start time");
    const double n = (T - t0) / dt;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, rounded)) {
        std::ostringstream os;
        os << "(T - t0)/dt = " << n << " is not an integer; partial final steps are not supported";
        throw std::invalid_argument(os.str());
    }
    return static_cast<long>(rounded);
}

IntegrationResult integrate(const SchemeCoefficients& c, const SplitProblem& prob, double t0,
                            double T, std::span<const double> u0, const IntegratorConfig& cfg,
                            const Observer& observer, const ExactSolution& exact) {
    validate(c);
    validate(cfg);
    const long total = step_count(t0, T, cfg.dt);
    History hist = startup(c, prob, t0, u0, cfg, exact);
    const long s = c.steps();

    const long startup_levels = std::min(s - 1, total);
    if (observer) {
        for (long n = 0; n <= startup_levels; ++n) {
            const auto& slot = hist[static_cast<std::size_t>(s - 1 - n)];
            observer(n, slot.t, slot.u);
        }
    }
    if (total < s - 1) {
        const auto& slot = hist[static_cast<std::size_t>(s - 1 - total)];
        return {slot.t, slot.u, 0};
    }

    IntegrationResult result;
    for (long n = s - 1; n < total; ++n) {
        const auto& slot = step_to(c, prob, hist, cfg, t0 + (n + 1) * cfg.dt);
        ++result.steps;
        if (observer) observer(n + 1, slot.t, slot.u);
    }
    result.t = hist.newest().t;
    result.u = hist.newest().u;
    return result;
}

}  // namespace simlm
