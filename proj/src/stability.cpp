#include "simlm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace simlm {

using Complex = std::complex<double>;

ComplexPolynomial char_poly(const SchemeCoefficients& c, double z_R, double z_I_mag) {
    validate(c);
    const int s = c.steps();
    const Complex z_I(0.0, z_I_mag);
    const Complex z = z_R + z_I;
    const double b_new = c.corrector.slope_new;

    std::vector<Complex> coeffs(static_cast<std::size_t>(s) + 1, Complex(0.0));
    coeffs[s] = 1.0 - b_new * z_R;
    for (int j = 0; j < s; ++j) {
        const int power = s - 1 - j;
        coeffs[power] += c.corrector.state[j] - z * c.corrector.slope[j] +
                         b_new * z_I * (c.predictor.state[j] - z * c.predictor.slope[j]);
    }
    return ComplexPolynomial(std::move(coeffs));
}

bool root_condition(const std::vector<Complex>& roots, const StabilityTolerances& tols) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double modulus = std::abs(roots[i]);
        if (modulus > 1.0 + tols.root_tol) return false;
        if (modulus < 1.0 - tols.mult_tol) continue;
        for (std::size_t k = 0; k < roots.size(); ++k) {
            if (k != i && std::abs(roots[k] - roots[i]) <= tols.sep_tol) return false;
        }
    }
    return true;
}

StabilityPoint evaluate_point(const SchemeCoefficients& c, double z_R, double z_I_mag,
                              const StabilityTolerances& tols) {
    StabilityPoint point{z_R, z_I_mag, 0.0, false, false};
    try {
        const auto result = poly_roots(char_poly(c, z_R, z_I_mag), tols.poly_tol, tols.maxiter);
        for (const auto& r : result.roots) {
            point.max_root_modulus = std::max(point.max_root_modulus, std::abs(r));
        }
        point.stable = root_condition(result.roots, tols);
    } catch (const RootFindingError&) {
        point.root_failure = true;
        point.max_root_modulus = std::numeric_limits<double>::infinity();
        point.stable = false;
    }
    return point;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

StabilityGrid scan_region(const SchemeCoefficients& c, double zR_min, double zR_max, int n_R,
                          double zI_max, int n_I, const StabilityTolerances& tols) {
    if (n_R < 2 || n_I < 2) throw std::invalid_argument("scan_region: need at least 2 samples per axis");
    if (!(zR_max > zR_min) || !(zI_max > 0.0)) {
        throw std::invalid_argument("scan_region: sample ranges must be increasing");
    }
    StabilityGrid grid;
    grid.z_R = linspace(zR_min, zR_max, n_R);
    grid.z_I_mag = linspace(0.0, zI_max, n_I);
    grid.points.resize(static_cast<std::size_t>(n_R) * n_I);
    const long total = static_cast<long>(grid.points.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long idx = 0; idx < total; ++idx) {
        const auto i = static_cast<std::size_t>(idx) / grid.z_I_mag.size();
        const auto k = static_cast<std::size_t>(idx) % grid.z_I_mag.size();
        grid.points[idx] = evaluate_point(c, grid.z_R[i], grid.z_I_mag[k], tols);
    }
    return grid;
}

GrowthReport growth_oracle(const SchemeCoefficients& c, double z_R, double z_I_mag, int n_steps,
                           std::uint64_t seed) {
    validate(c);
    if (n_steps < 100) throw std::invalid_argument("growth_oracle: n_steps must be >= 100");
    const int s = c.steps();
    const Complex z_I(0.0, z_I_mag);
    const Complex z = z_R + z_I;
    const double b_new = c.corrector.slope_new;
    const Complex inv_diag = 1.0 / (1.0 - b_new * z_R);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    // newest-first ring
    std::vector<Complex> v(static_cast<std::size_t>(s));
    for (auto& x : v) x = std::polar(1.0, angle(rng));
    std::size_t head = 0;

    GrowthReport report;
    double first_half = 1.0;
    double second_half = 0.0;
    double overall = 1.0;
    for (int n = 0; n < n_steps; ++n) {
        Complex predicted(0.0);
        Complex corrected(0.0);
        for (int j = 0; j < s; ++j) {
            const Complex past = v[(head + j) % s];
            predicted += (-c.predictor.state[j] + z * c.predictor.slope[j]) * past;
            corrected += (-c.corrector.state[j] + z * c.corrector.slope[j]) * past;
        }
        const Complex next = (corrected + b_new * z_I * predicted) * inv_diag;
        head = (head + s - 1) % s;
        v[head] = next;

        const double magnitude = std::abs(next);
        if (!std::isfinite(magnitude) || magnitude > 1e150) {
            report.overflow = true;
            report.max_amplification = std::numeric_limits<double>::infinity();
            report.final_half_growth = std::numeric_limits<double>::infinity();
            report.stable = false;
            return report;
        }
        overall = std::max(overall, magnitude);
        if (n < n_steps / 2) {
            first_half = std::max(first_half, magnitude);
        } else {
            second_half = std::max(second_half, magnitude);
        }
    }
    report.max_amplification = overall;
    report.final_half_growth = second_half / first_half;
    report.stable = report.final_half_growth <= 10.0;
    return report;
}

double largest_stable_zI(const SchemeCoefficients& c, double z_R, double zI_max, int n,
                         const StabilityTolerances& tols) {
    if (n < 2) throw std::invalid_argument("largest_stable_zI: need at least 2 samples");
    for (int k = n - 1; k >= 0; --k) {
        const double zi = zI_max * k / (n - 1);
        if (evaluate_point(c, z_R, zi, tols).stable) return zi;
    }
    return -1.0;
}

}  // namespace simlm
