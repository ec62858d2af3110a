#pragma once

#include "simlm/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace simlm {

/// Uniform periodic grid on [x0, x0+Lx) × [y0, y0+Ly); node (i, j) sits at (x0 + i·dx, y0 + j·dy).
struct PeriodicGrid2D {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0;
    double Ly = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    static constexpr int kMinNodes = 8;

    /// Throws std::invalid_argument for fewer than 8 nodes per axis or non-positive lengths.
    static PeriodicGrid2D make(int nx, int ny, double Lx, double Ly, double x0, double y0);

    [[nodiscard]] double dx() const { return Lx / nx; }
    [[nodiscard]] double dy() const { return Ly / ny; }
    [[nodiscard]] double x(int i) const { return x0 + i * dx(); }
    [[nodiscard]] double y(int j) const { return y0 + j * dy(); }
    [[nodiscard]] std::size_t nodes() const { return static_cast<std::size_t>(nx) * ny; }
    /// Row-major with i fastest.
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i);
    }

    friend bool operator==(const PeriodicGrid2D&, const PeriodicGrid2D&) = default;
};

/// Nodal values of one or more components, stored component-outer.
struct Field {
    PeriodicGrid2D grid;
    int components = 1;
    Vector values;

    Field() = default;
    Field(PeriodicGrid2D g, int ncomp) : grid(g), components(ncomp), values(g.nodes() * ncomp, 0.0) {}
    Field(PeriodicGrid2D g, int ncomp, Vector v);

    [[nodiscard]] std::span<double> component(int c) {
        return std::span<double>(values).subspan(c * grid.nodes(), grid.nodes());
    }
    [[nodiscard]] std::span<const double> component(int c) const {
        return std::span<const double>(values).subspan(c * grid.nodes(), grid.nodes());
    }
    [[nodiscard]] bool all_finite() const;
};

enum class Axis { X, Y };
enum class DerivativeKind { First, Second };

/// Central difference weights for offsets −radius..radius, to be divided by denominator·h^derivative.
struct Stencil {
    int radius;
    std::vector<double> weights;
    double denominator;
};

/// Supported: second derivative of order 2, 4, 6; first derivative of order 4.
/// Throws std::invalid_argument otherwise.
const Stencil& central_stencil(DerivativeKind kind, int order);

/// out = D·in along one axis of a single-component nodal array.
void apply_stencil(const PeriodicGrid2D& grid, std::span<const double> in, std::span<double> out,
                   Axis axis, DerivativeKind kind, int order);

Field apply_stencil(const Field& field, Axis axis, DerivativeKind kind, int order);

/// out += scale·(D_xx + D_yy)·in.
void add_laplacian(const PeriodicGrid2D& grid, std::span<const double> in, std::span<double> out,
                   int order, double scale = 1.0);

/// Diagonal entry of the discrete Laplacian.
double laplacian_center(const PeriodicGrid2D& grid, int order);

/// ΔxΔy Σ_nodes Σ_components |a − b|.
double l1_error(const Field& numeric, const Field& exact);
double l1_error(const PeriodicGrid2D& grid, std::span<const double> numeric,
                std::span<const double> exact);

}  // namespace simlm
