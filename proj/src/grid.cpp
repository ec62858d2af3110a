#include "simlm/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace simlm {

PeriodicGrid2D PeriodicGrid2D::make(int nx, int ny, double Lx, double Ly, double x0, double y0) {
    if (nx < kMinNodes || ny < kMinNodes) {
        throw std::invalid_argument("PeriodicGrid2D: need at least " + std::to_string(kMinNodes) +
                                    " nodes per axis");
    }
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("PeriodicGrid2D: lengths must be positive");
    return {nx, ny, Lx, Ly, x0, y0};
}

Field::Field(PeriodicGrid2D g, int ncomp, Vector v) : grid(g), components(ncomp), values(std::move(v)) {
    if (values.size() != grid.nodes() * static_cast<std::size_t>(components)) {
        throw std::invalid_argument("Field: value count does not match grid and components");
    }
}

bool Field::all_finite() const {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

const Stencil& central_stencil(DerivativeKind kind, int order) {
    static const Stencil d2_2{1, {1.0, -2.0, 1.0}, 1.0};
    static const Stencil d2_4{2, {-1.0, 16.0, -30.0, 16.0, -1.0}, 12.0};
    static const Stencil d2_6{3, {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0}, 180.0};
    static const Stencil d1_4{2, {1.0, -8.0, 0.0, 8.0, -1.0}, 12.0};
    if (kind == DerivativeKind::Second) {
        if (order == 2) return d2_2;
        if (order == 4) return d2_4;
        if (order == 6) return d2_6;
    } else if (order == 4) {
        return d1_4;
    }
    throw std::invalid_argument("no central stencil for this derivative of order " + std::to_string(order));
}

namespace {

// out[i] = scale · Σ_k w_k in[(i + k·stride) wrapped], along lines of length n with given stride.
void sweep(std::span<const double> in, std::span<double> out, int n, int lines, std::size_t stride,
           std::size_t line_stride, const Stencil& st, double scale, bool accumulate) {
    const int r = st.radius;
    for (int line = 0; line < lines; ++line) {
        const double* src = in.data() + static_cast<std::size_t>(line) * line_stride;
        double* dst = out.data() + static_cast<std::size_t>(line) * line_stride;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            if (i >= r && i < n - r) {
                const double* p = src + static_cast<std::size_t>(i - r) * stride;
                for (int k = 0; k <= 2 * r; ++k) acc += st.weights[k] * p[static_cast<std::size_t>(k) * stride];
            } else {
                for (int k = -r; k <= r; ++k) {
                    const int w = ((i + k) % n + n) % n;
                    acc += st.weights[k + r] * src[static_cast<std::size_t>(w) * stride];
                }
            }
            double& target = dst[static_cast<std::size_t>(i) * stride];
            target = accumulate ? target + scale * acc : scale * acc;
        }
    }
}

void check_footprint(const PeriodicGrid2D& grid, const Stencil& st) {
    if (grid.nx <= 2 * st.radius || grid.ny <= 2 * st.radius) {
        throw std::invalid_argument("grid too small for stencil footprint");
    }
}

double scale_for(const PeriodicGrid2D& grid, Axis axis, DerivativeKind kind, const Stencil& st) {
    const double h = axis == Axis::X ? grid.dx() : grid.dy();
    return 1.0 / (st.denominator * (kind == DerivativeKind::Second ? h * h : h));
}

}  // namespace

void apply_stencil(const PeriodicGrid2D& grid, std::span<const double> in, std::span<double> out,
                   Axis axis, DerivativeKind kind, int order) {
    const Stencil& st = central_stencil(kind, order);
    check_footprint(grid, st);
    if (in.size() != grid.nodes() || out.size() != grid.nodes()) {
        throw std::invalid_argument("apply_stencil: array size does not match grid");
    }
    const double scale = scale_for(grid, axis, kind, st);
    if (axis == Axis::X) {
        sweep(in, out, grid.nx, grid.ny, 1, static_cast<std::size_t>(grid.nx), st, scale, false);
    } else {
        sweep(in, out, grid.ny, grid.nx, static_cast<std::size_t>(grid.nx), 1, st, scale, false);
    }
}

Field apply_stencil(const Field& field, Axis axis, DerivativeKind kind, int order) {
    Field out(field.grid, field.components);
    for (int c = 0; c < field.components; ++c) {
        apply_stencil(field.grid, field.component(c), out.component(c), axis, kind, order);
    }
    return out;
}

void add_laplacian(const PeriodicGrid2D& grid, std::span<const double> in, std::span<double> out,
                   int order, double scale) {
    const Stencil& st = central_stencil(DerivativeKind::Second, order);
    check_footprint(grid, st);
    const double sx = scale * scale_for(grid, Axis::X, DerivativeKind::Second, st);
    const double sy = scale * scale_for(grid, Axis::Y, DerivativeKind::Second, st);
    sweep(in, out, grid.nx, grid.ny, 1, static_cast<std::size_t>(grid.nx), st, sx, true);
    sweep(in, out, grid.ny, grid.nx, static_cast<std::size_t>(grid.nx), 1, st, sy, true);
}

double laplacian_center(const PeriodicGrid2D& grid, int order) {
    const Stencil& st = central_stencil(DerivativeKind::Second, order);
    const double w = st.weights[st.radius] / st.denominator;
    return w / (grid.dx() * grid.dx()) + w / (grid.dy() * grid.dy());
}

double l1_error(const PeriodicGrid2D& grid, std::span<const double> numeric,
                std::span<const double> exact) {
    if (numeric.size() != exact.size() || numeric.size() % grid.nodes() != 0) {
        throw std::invalid_argument("l1_error: shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) sum += std::abs(numeric[i] - exact[i]);
    return grid.dx() * grid.dy() * sum;
}

double l1_error(const Field& numeric, const Field& exact) {
    if (!(numeric.grid == exact.grid) || numeric.components != exact.components) {
        throw std::invalid_argument("l1_error: shape mismatch");
    }
    return l1_error(numeric.grid, numeric.values, exact.values);
}

}  // namespace simlm
