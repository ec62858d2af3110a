#pragma once

// Semi-implicit linear multistep coefficient tables.
//
// A scheme pairs an explicit predictor
//
//   û^{n+1} = -Σ_j ã_j u^{n-j} + Δt Σ_j b̃_j H^{n-j}
//
// with an implicit corrector
//
//   u^{n+1} = -Σ_j a_j u^{n-j} + Δt Σ_j b_j H^{n-j} + Δt b_{-1} H(t^{n+1}, û^{n+1}, u^{n+1})
//
// where j runs over 0..s-1 and H^{n-j} = H(t^{n-j}, u^{n-j}, u^{n-j}).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace simlm {

using Rational = boost::multiprecision::cpp_rational;

/// Explicit (predictor) half of a scheme.
template <class Real>
struct BasicExplicitTable {
    std::vector<Real> state;  ///< ã_0..ã_{s-1}
    std::vector<Real> slope;  ///< b̃_0..b̃_{s-1}
    Real cfl{0};              ///< SSP coefficient C, zero when the table is not SSP

    [[nodiscard]] int steps() const { return static_cast<int>(state.size()); }
};

/// Implicit (corrector) half of a scheme.
template <class Real>
struct BasicImplicitTable {
    std::vector<Real> state;  ///< a_0..a_{s-1}
    std::vector<Real> slope;  ///< b_0..b_{s-1}
    Real slope_new{0};        ///< b_{-1}

    [[nodiscard]] int steps() const { return static_cast<int>(state.size()); }
};

template <class Real>
struct BasicScheme {
    std::string name;
    int order = 1;  ///< declared order p
    BasicExplicitTable<Real> predictor;
    BasicImplicitTable<Real> corrector;

    [[nodiscard]] int steps() const { return predictor.steps(); }
};

using ExplicitTable = BasicExplicitTable<double>;
using ImplicitTable = BasicImplicitTable<double>;
using SchemeCoefficients = BasicScheme<double>;

using ExactExplicitTable = BasicExplicitTable<Rational>;
using ExactImplicitTable = BasicImplicitTable<Rational>;
using ExactScheme = BasicScheme<Rational>;

inline constexpr int kMaxSteps = 6;

struct OrderResidual {
    int order;
    double explicit_residual;
    double implicit_residual;
};

struct OrderReport {
    /// −1 when even the q = 0 (consistency) condition fails.
    int max_order_explicit = -1;
    int max_order_implicit = -1;
    /// Residuals of the order-q conditions for q = 0..max checked order.
    std::vector<OrderResidual> residuals;
};

/// Throws std::invalid_argument if array lengths disagree, s is out of range or b_{-1} = 0.
void validate(const SchemeCoefficients& c);

/// Signed residual of the order-q condition for an explicit table.
double explicit_residual(const ExplicitTable& t, int q);
/// Signed residual of the order-q condition for an implicit table.
double implicit_residual(const ImplicitTable& t, int q);

Rational explicit_residual(const ExactExplicitTable& t, int q);
Rational implicit_residual(const ExactImplicitTable& t, int q);

/// Largest p such that every condition q <= p holds to within tol, separately for the
/// predictor and the corrector.
OrderReport verify_order(const SchemeCoefficients& c, double tol = 1e-10);

/// Forward Euler predictor with the two-step (alpha, beta) second-order corrector.
SchemeCoefficients second_order_family(double alpha, double beta);
ExactScheme second_order_family_exact(const Rational& alpha, const Rational& beta);

ExactExplicitTable derive_adams_bashforth(int steps);
ExactImplicitTable derive_adams_moulton(int steps);
ExactImplicitTable derive_bdf(int steps);

enum class SspVariant { Ssp2TwoStep, Ssp2FourStep, Ssp3FourStep };

/// Optimal explicit SSP multistep tables, mapped to the predictor sign convention.
ExactExplicitTable ssp_explicit_exact(SspVariant variant);
ExplicitTable ssp_explicit(SspVariant variant);

/// Names of the built-in catalog, in listing order.
std::span<const std::string_view> catalog_names();

/// Build a catalog scheme by name. Also accepts the aliases AB-BDF2 (= FE-BDF2),
/// AB-AM2 (= FE-CN2) and SSP3-BDF4 (= SSP-BDF4). Throws std::invalid_argument
/// for unknown names.
ExactScheme builtin_exact(std::string_view name);
SchemeCoefficients builtin(std::string_view name);

/// Human-readable catalog: one block per scheme with every coefficient as a fraction.
std::string format_catalog();
std::string format_scheme(const ExactScheme& scheme);

ExplicitTable to_double(const ExactExplicitTable& t);
ImplicitTable to_double(const ExactImplicitTable& t);
SchemeCoefficients to_double(const ExactScheme& s);

/// Pair two tables into a scheme, zero-padding the shorter one to the common step count.
ExactScheme pair_tables(std::string name, int order, ExactExplicitTable predictor,
                        ExactImplicitTable corrector);

namespace detail {

/// Solve a square linear system exactly by Gaussian elimination.
/// Throws std::domain_error if the matrix is singular.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> matrix,
                                  std::vector<Rational> rhs);

}  // namespace detail

}  // namespace simlm
