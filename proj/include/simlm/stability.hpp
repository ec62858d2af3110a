#pragma once

// Linear stability of a semi-implicit scheme on du/dt = iλu + μv (partitioned form of
// du/dt = (iλ + μ)u), with z_R = μΔt and z_I = iλΔt.

#include "simlm/linalg.hpp"
#include "simlm/schemes.hpp"

#include <cstdint>
#include <vector>

namespace simlm {

struct StabilityTolerances {
    double root_tol = 1e-9;   ///< slack on the unit-modulus test
    double mult_tol = 1e-8;   ///< roots this close to the unit circle must be simple
    double sep_tol = 1e-6;    ///< roots closer than this count as a multiple root
    double poly_tol = 1e-12;  ///< backward-error target for the root finder
    int maxiter = 500;
};

struct StabilityPoint {
    double z_R = 0.0;
    double z_I_mag = 0.0;
    double max_root_modulus = 0.0;
    bool stable = false;
    bool root_failure = false;  ///< root finder did not converge; node reported unstable
};

struct StabilityGrid {
    std::vector<double> z_R;
    std::vector<double> z_I_mag;
    /// Row-major: points[i * z_I_mag.size() + k] is (z_R[i], z_I_mag[k]).
    std::vector<StabilityPoint> points;

    [[nodiscard]] const StabilityPoint& at(std::size_t i, std::size_t k) const {
        return points[i * z_I_mag.size() + k];
    }
};

/// ζ^s(1 − b_{−1}z_R) + ρ(ζ) − (z_R+z_I)σ(ζ) + b_{−1}z_I(ρ̃(ζ) − (z_R+z_I)σ̃(ζ)), z_I = i·z_I_mag.
ComplexPolynomial char_poly(const SchemeCoefficients& c, double z_R, double z_I_mag);

/// Root-condition classification of a set of roots.
bool root_condition(const std::vector<std::complex<double>>& roots, const StabilityTolerances& tols);

StabilityPoint evaluate_point(const SchemeCoefficients& c, double z_R, double z_I_mag,
                              const StabilityTolerances& tols = {});

/// Scan z_R ∈ [zR_min, zR_max] (n_R samples) × z_I_mag ∈ [0, zI_max] (n_I samples).
StabilityGrid scan_region(const SchemeCoefficients& c, double zR_min, double zR_max, int n_R,
                          double zI_max, int n_I, const StabilityTolerances& tols = {});

struct GrowthReport {
    double max_amplification = 0.0;  ///< max_n |v^n| over the initial history magnitude
    double final_half_growth = 0.0;  ///< max over the final half / max over the first half
    bool stable = false;             ///< final_half_growth <= 10 and no overflow
    bool overflow = false;
};

/// Iterate the two-sequence scalar recurrence directly from a random unit-modulus history.
GrowthReport growth_oracle(const SchemeCoefficients& c, double z_R, double z_I_mag, int n_steps = 2000,
                           std::uint64_t seed = 20200921);

/// Largest z_I_mag on an n-point uniform scan of [0, zI_max] that is stable, or a negative value
/// if no sample is stable. Scans from the top so the result is the upper edge of the stable set.
double largest_stable_zI(const SchemeCoefficients& c, double z_R, double zI_max, int n,
                         const StabilityTolerances& tols = {});

}  // namespace simlm
