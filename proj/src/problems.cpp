#include "simlm/problems.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace simlm {

LinearStage SplitProblem::linearize(double, std::span<const double>) const {
    throw std::logic_error("problem does not expose a linear structure in its stiff argument");
}

Vector SplitProblem::eval(double t, std::span<const double> u, std::span<const double> v) const {
    Vector out(dim());
    eval(t, u, v, out);
    return out;
}

LinearStage LambdaProblem::linearize(double t, std::span<const double> u) const {
    if (!linearize_) return SplitProblem::linearize(t, u);
    return linearize_(t, u);
}

// ---------------------------------------------------------------------------------------------

void DahlquistProblem::eval(double, std::span<const double> u, std::span<const double> v,
                            std::span<double> out) const {
    // iλu + μv with u = (re, im)
    out[0] = -lambda_ * u[1] + mu_ * v[0];
    out[1] = lambda_ * u[0] + mu_ * v[1];
}

LinearStage DahlquistProblem::linearize(double, std::span<const double> u) const {
    LinearStage stage;
    stage.remainder = {-lambda_ * u[1], lambda_ * u[0]};
    const double mu = mu_;
    stage.matrix = {2, [mu](std::span<const double> w, std::span<double> out) {
                        out[0] = mu * w[0];
                        out[1] = mu * w[1];
                    }};
    stage.diagonal = {mu_, mu_};
    return stage;
}

Vector DahlquistProblem::exact(double t) const {
    const auto z = std::exp(std::complex<double>(mu_, lambda_) * t);
    return {z.real(), z.imag()};
}

// ---------------------------------------------------------------------------------------------

namespace {

PeriodicGrid2D two_pi_grid(int n) {
    const double L = 2.0 * std::numbers::pi;
    return PeriodicGrid2D::make(n, n, L, L, 0.0, 0.0);
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

ReactionDiffusionProblem::ReactionDiffusionProblem(int n) : grid_(two_pi_grid(n)) {}

ReactionDiffusionProblem::ReactionDiffusionProblem(const PeriodicGrid2D& grid) : grid_(grid) {
    const double L = 2.0 * std::numbers::pi;
    if (grid.nx != grid.ny || !close(grid.Lx, L) || !close(grid.Ly, L) || grid.x0 != 0.0 ||
        grid.y0 != 0.0) {
        throw std::invalid_argument("reaction-diffusion problem needs a square grid on [0, 2pi)^2");
    }
}

double ReactionDiffusionProblem::alpha(double t) { return 2.0 * std::exp(0.5 * t); }
double ReactionDiffusionProblem::forcing(double t) { return -2.0 * std::exp(-0.5 * t); }

void ReactionDiffusionProblem::eval(double t, std::span<const double> u, std::span<const double> v,
                                    std::span<double> out) const {
    const std::size_t n = grid_.nodes();
    const auto u1 = u.first(n);
    const auto v1 = v.first(n);
    const auto v2 = v.subspan(n, n);
    auto out1 = out.first(n);
    auto out2 = out.subspan(n, n);
    const double a = alpha(t);
    const double f = forcing(t);
    for (std::size_t k = 0; k < n; ++k) {
        out1[k] = -a * u1[k] * v1[k] + kReaction1 * v1[k] + v2[k] + f;
        out2[k] = kReaction2 * v2[k];
    }
    add_laplacian(grid_, v1, out1, kStencilOrder);
    add_laplacian(grid_, v2, out2, kStencilOrder);
}

LinearStage ReactionDiffusionProblem::linearize(double t, std::span<const double> u) const {
    const std::size_t n = grid_.nodes();
    // per-node coefficient of w₁ in the first row
    auto coupling = std::make_shared<Vector>(n);
    const double a = alpha(t);
    for (std::size_t k = 0; k < n; ++k) (*coupling)[k] = -a * u[k] + kReaction1;

    LinearStage stage;
    stage.remainder.assign(2 * n, 0.0);
    std::fill(stage.remainder.begin(), stage.remainder.begin() + static_cast<long>(n), forcing(t));

    const PeriodicGrid2D grid = grid_;
    stage.matrix = {2 * n, [grid, coupling, n](std::span<const double> w, std::span<double> out) {
                        const auto w1 = w.first(n);
                        const auto w2 = w.subspan(n, n);
                        auto out1 = out.first(n);
                        auto out2 = out.subspan(n, n);
                        for (std::size_t k = 0; k < n; ++k) {
                            out1[k] = (*coupling)[k] * w1[k] + w2[k];
                            out2[k] = kReaction2 * w2[k];
                        }
                        add_laplacian(grid, w1, out1, kStencilOrder);
                        add_laplacian(grid, w2, out2, kStencilOrder);
                    }};
    const double center = laplacian_center(grid_, kStencilOrder);
    stage.diagonal.resize(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        stage.diagonal[k] = center + (*coupling)[k];
        stage.diagonal[n + k] = center + kReaction2;
    }
    return stage;
}

Vector ReactionDiffusionProblem::exact(double t) const {
    const std::size_t n = grid_.nodes();
    Vector w(2 * n);
    const double decay = std::exp(-0.5 * t);
    for (int j = 0; j < grid_.ny; ++j) {
        for (int i = 0; i < grid_.nx; ++i) {
            const double x = grid_.x(i);
            const std::size_t k = grid_.index(i, j);
            w[k] = decay * (1.0 + std::cos(x));
            w[n + k] = decay * std::cos(2.0 * x);
        }
    }
    return w;
}

// ---------------------------------------------------------------------------------------------

GrayScottProblem::GrayScottProblem(int n, GrayScottParameters params)
    : GrayScottProblem(PeriodicGrid2D::make(n, n, 2.0, 2.0, -1.0, -1.0), params) {}

GrayScottProblem::GrayScottProblem(const PeriodicGrid2D& grid, GrayScottParameters params)
    : grid_(grid), params_(params) {
    if (grid.nx != grid.ny || !close(grid.Lx, 2.0) || !close(grid.Ly, 2.0) || grid.x0 != -1.0 ||
        grid.y0 != -1.0) {
        throw std::invalid_argument("Gray-Scott problem needs a square grid on [-1, 1)^2");
    }
}

void GrayScottProblem::eval(double, std::span<const double> u, std::span<const double> v,
                            std::span<double> out) const {
    const std::size_t n = grid_.nodes();
    const auto u1 = u.first(n);
    const auto u2 = u.subspan(n, n);
    const auto v1 = v.first(n);
    const auto v2 = v.subspan(n, n);
    auto out1 = out.first(n);
    auto out2 = out.subspan(n, n);
    const auto& p = params_;
    for (std::size_t k = 0; k < n; ++k) {
        const double reaction = v1[k] * u2[k] * u2[k];
        out1[k] = -reaction + p.feed * (1.0 - v1[k]);
        out2[k] = reaction - (p.feed + p.kill) * v2[k];
    }
    add_laplacian(grid_, u1, out1, kStencilOrder, p.sigma1);
    add_laplacian(grid_, u2, out2, kStencilOrder, p.sigma2);
}

LinearStage GrayScottProblem::linearize(double, std::span<const double> u) const {
    const std::size_t n = grid_.nodes();
    const auto u1 = u.first(n);
    const auto u2 = u.subspan(n, n);
    const auto p = params_;

    auto squared = std::make_shared<Vector>(n);
    for (std::size_t k = 0; k < n; ++k) (*squared)[k] = u2[k] * u2[k];

    LinearStage stage;
    stage.remainder.assign(2 * n, 0.0);
    auto k1 = std::span<double>(stage.remainder).first(n);
    auto k2 = std::span<double>(stage.remainder).subspan(n, n);
    std::fill(k1.begin(), k1.end(), p.feed);
    add_laplacian(grid_, u1, k1, kStencilOrder, p.sigma1);
    add_laplacian(grid_, u2, k2, kStencilOrder, p.sigma2);

    stage.matrix = {2 * n, [squared, p, n](std::span<const double> w, std::span<double> out) {
                        for (std::size_t k = 0; k < n; ++k) {
                            const double s = (*squared)[k];
                            out[k] = -(s + p.feed) * w[k];
                            out[n + k] = s * w[k] - (p.feed + p.kill) * w[n + k];
                        }
                    }};
    stage.diagonal.resize(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        stage.diagonal[k] = -((*squared)[k] + p.feed);
        stage.diagonal[n + k] = -(p.feed + p.kill);
    }
    // (I − γA) is lower triangular per node: forward substitution.
    stage.shifted_solve = [squared, p, n](double gamma, std::span<const double> rhs, std::span<double> x) {
        const double second = 1.0 / (1.0 + gamma * (p.feed + p.kill));
        for (std::size_t k = 0; k < n; ++k) {
            const double s = (*squared)[k];
            x[k] = rhs[k] / (1.0 + gamma * (s + p.feed));
            x[n + k] = (rhs[n + k] + gamma * s * x[k]) * second;
        }
    };
    return stage;
}

Vector GrayScottProblem::initial() const {
    const std::size_t n = grid_.nodes();
    Vector w(2 * n);
    const double pi = std::numbers::pi;
    for (int j = 0; j < grid_.ny; ++j) {
        for (int i = 0; i < grid_.nx; ++i) {
            const double x = grid_.x(i);
            const double y = grid_.y(j);
            double w2 = 0.0;
            if (std::abs(x) <= 0.25 && std::abs(y) <= 0.25) {
                const double sx = std::sin(4.0 * pi * x);
                const double sy = std::sin(4.0 * pi * y);
                w2 = 0.25 * sx * sx * sy * sy;
            }
            const std::size_t k = grid_.index(i, j);
            w[k] = 1.0 - 2.0 * w2;
            w[n + k] = w2;
        }
    }
    return w;
}

// ---------------------------------------------------------------------------------------------

ConvectionDiffusionProblem::ConvectionDiffusionProblem(int n, double half_width, double u_floor)
    : ConvectionDiffusionProblem(
          PeriodicGrid2D::make(n, n, 2.0 * half_width, 2.0 * half_width, -half_width, -half_width),
          u_floor) {}

ConvectionDiffusionProblem::ConvectionDiffusionProblem(const PeriodicGrid2D& grid, double u_floor)
    : grid_(grid), floor_(u_floor) {
    if (!(u_floor > 0.0)) throw std::invalid_argument("convection-diffusion problem needs u_floor > 0");
    if (grid.nx != grid.ny || !close(grid.Lx, grid.Ly) || !close(grid.x0, grid.y0) ||
        !close(grid.x0, -0.5 * grid.Lx) || grid.Lx < 20.0 - 1e-12) {
        throw std::invalid_argument("convection-diffusion problem needs a square grid covering [-10, 10]^2");
    }
}

namespace {

struct DriftField {
    Vector cx;
    Vector cy;
};

// Velocity coefficients of ∇v in H: −(E − μ∇log ũ), ũ = max(u, floor).
DriftField drift(const PeriodicGrid2D& grid, std::span<const double> u, int order, double mu,
                 double ex, double ey, double floor) {
    const std::size_t n = grid.nodes();
    Vector logu(n);
    for (std::size_t k = 0; k < n; ++k) logu[k] = std::log(std::max(u[k], floor));
    DriftField d{Vector(n), Vector(n)};
    apply_stencil(grid, logu, d.cx, Axis::X, DerivativeKind::First, order);
    apply_stencil(grid, logu, d.cy, Axis::Y, DerivativeKind::First, order);
    for (std::size_t k = 0; k < n; ++k) {
        d.cx[k] = -(ex - mu * d.cx[k]);
        d.cy[k] = -(ey - mu * d.cy[k]);
    }
    return d;
}

void apply_convection_diffusion(const PeriodicGrid2D& grid, const DriftField& d, double mu, int order,
                                std::span<const double> w, std::span<double> out) {
    const std::size_t n = grid.nodes();
    Vector gx(n), gy(n);
    apply_stencil(grid, w, gx, Axis::X, DerivativeKind::First, order);
    apply_stencil(grid, w, gy, Axis::Y, DerivativeKind::First, order);
    for (std::size_t k = 0; k < n; ++k) out[k] = d.cx[k] * gx[k] + d.cy[k] * gy[k];
    add_laplacian(grid, w, out, order, mu);
}

}  // namespace

void ConvectionDiffusionProblem::eval(double, std::span<const double> u, std::span<const double> v,
                                      std::span<double> out) const {
    const auto d = drift(grid_, u, kStencilOrder, kDiffusion, kDriftX, kDriftY, floor_);
    apply_convection_diffusion(grid_, d, kDiffusion, kStencilOrder, v, out);
}

LinearStage ConvectionDiffusionProblem::linearize(double, std::span<const double> u) const {
    auto d = std::make_shared<const DriftField>(
        drift(grid_, u, kStencilOrder, kDiffusion, kDriftX, kDriftY, floor_));
    LinearStage stage;
    stage.remainder.assign(grid_.nodes(), 0.0);
    const PeriodicGrid2D grid = grid_;
    stage.matrix = {grid_.nodes(), [grid, d](std::span<const double> w, std::span<double> out) {
                        apply_convection_diffusion(grid, *d, kDiffusion, kStencilOrder, w, out);
                    }};
    stage.diagonal.assign(grid_.nodes(), kDiffusion * laplacian_center(grid_, kStencilOrder));
    return stage;
}

Vector ConvectionDiffusionProblem::exact(double t) const {
    Vector w(grid_.nodes());
    const double spread = 4.0 * kDiffusion * t + 1.0;
    const double amplitude = 1.0 / std::sqrt(spread);
    for (int j = 0; j < grid_.ny; ++j) {
        for (int i = 0; i < grid_.nx; ++i) {
            const double rx = grid_.x(i) - kDriftX * t;
            const double ry = grid_.y(j) - kDriftY * t;
            w[grid_.index(i, j)] = amplitude * std::exp(-(rx * rx + ry * ry) / (2.0 * spread));
        }
    }
    return w;
}

}  // namespace simlm
