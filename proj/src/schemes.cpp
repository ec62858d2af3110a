#include "simlm/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

namespace simlm {

namespace {

// (-j)^q / q! with 0^0 = 1.
template <class Real>
Real taylor_weight(int j, int q) {
    Real value{1};
    for (int k = 1; k <= q; ++k) {
        value *= Real(-j);
        value /= Real(k);
    }
    return value;
}

template <class Real>
Real explicit_residual_impl(const BasicExplicitTable<Real>& t, int q) {
    const int s = t.steps();
    Real r = taylor_weight<Real>(-1, q);  // 1/q!
    for (int j = 0; j < s; ++j) {
        r += taylor_weight<Real>(j, q) * t.state[j];
    }
    if (q >= 1) {
        for (int j = 0; j < s; ++j) {
            r -= taylor_weight<Real>(j, q - 1) * t.slope[j];
        }
    }
    return r;
}

template <class Real>
Real implicit_residual_impl(const BasicImplicitTable<Real>& t, int q) {
    const int s = t.steps();
    Real r = taylor_weight<Real>(-1, q);
    for (int j = 0; j < s; ++j) {
        r += taylor_weight<Real>(j, q) * t.state[j];
    }
    if (q >= 1) {
        r -= taylor_weight<Real>(-1, q - 1) * t.slope_new;
        for (int j = 0; j < s; ++j) {
            r -= taylor_weight<Real>(j, q - 1) * t.slope[j];
        }
    }
    return r;
}

void check_structure(const SchemeCoefficients& c) {
    const auto s = c.predictor.state.size();
    if (s < 1) {
        throw std::invalid_argument("scheme '" + c.name + "': step count must be >= 1");
    }
    if (c.predictor.slope.size() != s || c.corrector.state.size() != s ||
        c.corrector.slope.size() != s) {
        throw std::invalid_argument("scheme '" + c.name + "': coefficient arrays differ in length");
    }
}

void check_steps(int steps, int max_steps, const char* what) {
    if (steps < 1 || steps > max_steps) {
        throw std::invalid_argument(std::string(what) + ": step count " + std::to_string(steps) +
                                    " outside [1, " + std::to_string(max_steps) + "]");
    }
}

// Order conditions are affine in the coefficients. Given a map from an unknown vector to a
// residual vector, recover the matrix column by column and solve for a zero residual.
std::vector<Rational> solve_affine(
    std::size_t unknowns,
    const std::function<std::vector<Rational>(const std::vector<Rational>&)>& residuals) {
    const std::vector<Rational> zero(unknowns, Rational(0));
    const auto offset = residuals(zero);
    std::vector<std::vector<Rational>> matrix(offset.size(), std::vector<Rational>(unknowns));
    for (std::size_t k = 0; k < unknowns; ++k) {
        auto unit = zero;
        unit[k] = 1;
        const auto column = residuals(unit);
        for (std::size_t i = 0; i < offset.size(); ++i) {
            matrix[i][k] = column[i] - offset[i];
        }
    }
    std::vector<Rational> rhs(offset.size());
    std::transform(offset.begin(), offset.end(), rhs.begin(), [](const Rational& v) { return -v; });
    return detail::solve_exact(std::move(matrix), std::move(rhs));
}

std::vector<double> to_double(const std::vector<Rational>& v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(),
                   [](const Rational& r) { return static_cast<double>(r); });
    return out;
}

template <class Real>
void pad(std::vector<Real>& v, std::size_t n) {
    v.resize(std::max(v.size(), n), Real(0));
}

ExactExplicitTable identity_predictor() { return {{Rational(-1)}, {Rational(0)}, Rational(0)}; }

constexpr std::array<std::string_view, 15> kCatalog = {
    "FE-BE1",  "FE-CN2",   "FE-BDF2",  "FE-MCN2",  "AB-AM3",
    "AB-AM4",  "AB-AM5",   "AB-BDF3",  "AB-BDF4",  "AB-BDF5",
    "SSP-AM3", "SSP-BDF3", "SSP-BDF4", "SSP2-AM3", "SSP2-BDF3",
};

std::string join_fractions(const std::vector<Rational>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].str();
    }
    return os.str();
}

}  // namespace

double explicit_residual(const ExplicitTable& t, int q) { return explicit_residual_impl(t, q); }
double implicit_residual(const ImplicitTable& t, int q) { return implicit_residual_impl(t, q); }
Rational explicit_residual(const ExactExplicitTable& t, int q) { return explicit_residual_impl(t, q); }
Rational implicit_residual(const ExactImplicitTable& t, int q) { return implicit_residual_impl(t, q); }

void validate(const SchemeCoefficients& c) {
    check_structure(c);
    if (c.corrector.slope_new == 0.0) {
        throw std::invalid_argument("scheme '" + c.name + "': b_{-1} must be nonzero");
    }
}

OrderReport verify_order(const SchemeCoefficients& c, double tol) {
    check_structure(c);
    OrderReport report;
    const int q_max = c.steps() + 3;
    bool explicit_ok = true;
    bool implicit_ok = true;
    for (int q = 0; q <= q_max; ++q) {
        const double re = explicit_residual(c.predictor, q);
        const double ri = implicit_residual(c.corrector, q);
        report.residuals.push_back({q, re, ri});
        explicit_ok = explicit_ok && std::abs(re) <= tol;
        implicit_ok = implicit_ok && std::abs(ri) <= tol;
        if (explicit_ok) report.max_order_explicit = q;
        if (implicit_ok) report.max_order_implicit = q;
    }
    return report;
}

ExactScheme second_order_family_exact(const Rational& alpha, const Rational& beta) {
    const Rational denom = 2 * alpha + 1;
    if (denom == 0) {
        throw std::invalid_argument("second_order_family: 2*alpha + 1 must be nonzero");
    }
    ExactScheme s;
    s.name = "FE-2(" + alpha.str() + "," + beta.str() + ")";
    s.order = 2;
    s.predictor = {{Rational(-1), Rational(0)}, {Rational(1), Rational(0)}, Rational(0)};
    s.corrector.state = {-4 * alpha / denom, (2 * alpha - 1) / denom};
    s.corrector.slope_new = (2 * alpha + beta) / denom;
    s.corrector.slope = {2 * (1 - alpha - beta) / denom, beta / denom};
    return s;
}

SchemeCoefficients second_order_family(double alpha, double beta) {
    const double denom = 2.0 * alpha + 1.0;
    if (denom == 0.0) {
        throw std::invalid_argument("second_order_family: 2*alpha + 1 must be nonzero");
    }
    SchemeCoefficients s;
    s.name = "FE-2(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
    s.order = 2;
    s.predictor = {{-1.0, 0.0}, {1.0, 0.0}, 0.0};
    s.corrector.state = {-4.0 * alpha / denom, (2.0 * alpha - 1.0) / denom};
    s.corrector.slope_new = (2.0 * alpha + beta) / denom;
    s.corrector.slope = {2.0 * (1.0 - alpha - beta) / denom, beta / denom};
    return s;
}

ExactExplicitTable derive_adams_bashforth(int steps) {
    check_steps(steps, 6, "derive_adams_bashforth");
    ExactExplicitTable t;
    t.state.assign(steps, Rational(0));
    t.state[0] = -1;
    t.slope = solve_affine(steps, [&](const std::vector<Rational>& x) {
        ExactExplicitTable trial{t.state, x, Rational(0)};
        std::vector<Rational> r;
        for (int q = 1; q <= steps; ++q) r.push_back(explicit_residual(trial, q));
        return r;
    });
    return t;
}

ExactImplicitTable derive_adams_moulton(int steps) {
    check_steps(steps, 5, "derive_adams_moulton");
    ExactImplicitTable t;
    t.state.assign(steps, Rational(0));
    t.state[0] = -1;
    // unknowns: b_{-1}, b_0..b_{s-1}
    const auto x = solve_affine(steps + 1, [&](const std::vector<Rational>& x) {
        ExactImplicitTable trial{t.state, std::vector<Rational>(x.begin() + 1, x.end()), x[0]};
        std::vector<Rational> r;
        for (int q = 1; q <= steps + 1; ++q) r.push_back(implicit_residual(trial, q));
        return r;
    });
    t.slope_new = x[0];
    t.slope.assign(x.begin() + 1, x.end());
    return t;
}

ExactImplicitTable derive_bdf(int steps) {
    check_steps(steps, 6, "derive_bdf");
    ExactImplicitTable t;
    t.slope.assign(steps, Rational(0));
    // unknowns: a_0..a_{s-1}, b_{-1}
    const auto x = solve_affine(steps + 1, [&](const std::vector<Rational>& x) {
        ExactImplicitTable trial{std::vector<Rational>(x.begin(), x.end() - 1), t.slope, x.back()};
        std::vector<Rational> r;
        for (int q = 0; q <= steps; ++q) r.push_back(implicit_residual(trial, q));
        return r;
    });
    t.state.assign(x.begin(), x.end() - 1);
    t.slope_new = x.back();
    return t;
}

ExactExplicitTable ssp_explicit_exact(SspVariant variant) {
    // Published in the form u^{n+1} = Σ α_j u^{n-j} + Δt β_j H^{n-j}; ã_j = -α_j.
    std::vector<Rational> alpha;
    std::vector<Rational> beta;
    Rational cfl;
    switch (variant) {
        case SspVariant::Ssp2TwoStep:
            alpha = {Rational(4, 5), Rational(1, 5)};
            beta = {Rational(8, 5), Rational(-2, 5)};
            cfl = Rational(1, 2);
            break;
        case SspVariant::Ssp2FourStep:
            alpha = {Rational(8, 9), 0, 0, Rational(1, 9)};
            beta = {Rational(4, 3), 0, 0, 0};
            cfl = Rational(2, 3);
            break;
        case SspVariant::Ssp3FourStep:
            alpha = {Rational(16, 27), 0, 0, Rational(11, 27)};
            beta = {Rational(16, 9), 0, 0, Rational(4, 9)};
            cfl = Rational(1, 3);
            break;
    }
    ExactExplicitTable t;
    for (const auto& a : alpha) t.state.push_back(-a);
    t.slope = std::move(beta);
    t.cfl = cfl;
    return t;
}

ExplicitTable ssp_explicit(SspVariant variant) { return to_double(ssp_explicit_exact(variant)); }

ExactScheme pair_tables(std::string name, int order, ExactExplicitTable predictor,
                        ExactImplicitTable corrector) {
    const auto s = static_cast<std::size_t>(std::max(predictor.steps(), corrector.steps()));
    pad(predictor.state, s);
    pad(predictor.slope, s);
    pad(corrector.state, s);
    pad(corrector.slope, s);
    return {std::move(name), order, std::move(predictor), std::move(corrector)};
}

std::span<const std::string_view> catalog_names() { return kCatalog; }

ExactScheme builtin_exact(std::string_view name) {
    const std::string n(name);
    auto trailing_order = [&](std::string_view prefix) -> int {
        if (!name.starts_with(prefix) || name.size() != prefix.size() + 1) return 0;
        const char d = name.back();
        return (d >= '1' && d <= '9') ? d - '0' : 0;
    };

    if (name == "FE-BE1") return pair_tables(n, 1, identity_predictor(), derive_bdf(1));
    if (name == "FE-CN2" || name == "AB-AM2") {
        auto s = second_order_family_exact(Rational(1, 2), Rational(0));
        s.name = "FE-CN2";
        return s;
    }
    if (name == "FE-BDF2") {
        auto s = second_order_family_exact(Rational(1), Rational(0));
        s.name = n;
        return s;
    }
    if (name == "FE-MCN2") {
        auto s = second_order_family_exact(Rational(1, 2), Rational(1, 8));
        s.name = n;
        return s;
    }
    if (const int p = trailing_order("AB-AM"); p >= 3 && p <= 5) {
        return pair_tables(n, p, derive_adams_bashforth(p - 1), derive_adams_moulton(p - 1));
    }
    if (const int p = trailing_order("AB-BDF"); p >= 2 && p <= 5) {
        return pair_tables(n, p, derive_adams_bashforth(p - 1), derive_bdf(p));
    }
    if (name == "SSP-AM3") {
        return pair_tables(n, 3, ssp_explicit_exact(SspVariant::Ssp3FourStep), derive_adams_moulton(2));
    }
    if (name == "SSP-BDF3") {
        return pair_tables(n, 3, ssp_explicit_exact(SspVariant::Ssp3FourStep), derive_bdf(3));
    }
    if (name == "SSP-BDF4" || name == "SSP3-BDF4") {
        return pair_tables("SSP-BDF4", 4, ssp_explicit_exact(SspVariant::Ssp3FourStep), derive_bdf(4));
    }
    if (name == "SSP2-AM3") {
        return pair_tables(n, 3, ssp_explicit_exact(SspVariant::Ssp2FourStep), derive_adams_moulton(2));
    }
    if (name == "SSP2-BDF3") {
        return pair_tables(n, 3, ssp_explicit_exact(SspVariant::Ssp2FourStep), derive_bdf(3));
    }
    throw std::invalid_argument("unknown scheme '" + n + "'");
}

SchemeCoefficients builtin(std::string_view name) { return to_double(builtin_exact(name)); }

ExplicitTable to_double(const ExactExplicitTable& t) {
    return {to_double(t.state), to_double(t.slope), static_cast<double>(t.cfl)};
}

ImplicitTable to_double(const ExactImplicitTable& t) {
    return {to_double(t.state), to_double(t.slope), static_cast<double>(t.slope_new)};
}

SchemeCoefficients to_double(const ExactScheme& s) {
    return {s.name, s.order, to_double(s.predictor), to_double(s.corrector)};
}

std::string format_scheme(const ExactScheme& scheme) {
    std::ostringstream os;
    os << scheme.name << "  s=" << scheme.steps() << "  p=" << scheme.order;
    if (scheme.predictor.cfl != 0) os << "  C=" << scheme.predictor.cfl.str();
    os << '\n'
       << "  predictor a~   : " << join_fractions(scheme.predictor.state) << '\n'
       << "  predictor b~   : " << join_fractions(scheme.predictor.slope) << '\n'
       << "  corrector a    : " << join_fractions(scheme.corrector.state) << '\n'
       << "  corrector b    : " << join_fractions(scheme.corrector.slope) << '\n'
       << "  corrector b_-1 : " << scheme.corrector.slope_new.str() << '\n';
    return os.str();
}

std::string format_catalog() {
    std::ostringstream os;
    os << "# Semi-implicit multistep scheme catalog.\n"
       << "# predictor: u^ = -sum a~_j u^{n-j} + dt sum b~_j H^{n-j}\n"
       << "# corrector: u  = -sum a_j u^{n-j} + dt sum b_j H^{n-j} + dt b_-1 H(t^{n+1}, u^, u)\n"
       << "# Coefficients are listed for j = 0..s-1.\n";
    for (const auto name : kCatalog) {
        os << '\n' << format_scheme(builtin_exact(name));
    }
    return os.str();
}

namespace detail {

std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> matrix,
                                  std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    if (matrix.size() != n) throw std::invalid_argument("solve_exact: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && matrix[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("solve_exact: singular system");
        std::swap(matrix[pivot], matrix[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            if (matrix[row][col] == 0) continue;
            const Rational factor = matrix[row][col] / matrix[col][col];
            for (std::size_t k = col; k < n; ++k) matrix[row][k] -= factor * matrix[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= matrix[i][k] * x[k];
        x[i] = acc / matrix[i][i];
    }
    return x;
}

}  // namespace detail

}  // namespace simlm
