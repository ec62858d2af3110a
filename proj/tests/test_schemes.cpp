#include "simlm/schemes.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace simlm;

namespace {

// Oracle: apply the corrector to u(t) = t^q on the grid t^{n-j} = -j, t^{n+1} = 1 (Δt = 1)
// and return the defect. Independent of the Taylor-weight formulation in the library.
double substitution_defect(const ImplicitTable& t, int q) {
    auto u = [q](double x) { return std::pow(x, q); };
    auto du = [q](double x) { return q == 0 ? 0.0 : q * std::pow(x, q - 1); };
    double r = u(1.0) - t.slope_new * du(1.0);
    for (int j = 0; j < t.steps(); ++j) {
        r += t.state[j] * u(-j) - t.slope[j] * du(-j);
    }
    return r;
}

double substitution_defect(const ExplicitTable& t, int q) {
    auto u = [q](double x) { return std::pow(x, q); };
    auto du = [q](double x) { return q == 0 ? 0.0 : q * std::pow(x, q - 1); };
    double r = u(1.0);
    for (int j = 0; j < t.steps(); ++j) {
        r += t.state[j] * u(-j) - t.slope[j] * du(-j);
    }
    return r;
}

template <class Table>
int substitution_order(const Table& t, double tol = 1e-10) {
    int p = -1;
    for (int q = 0; q < 12; ++q) {
        if (std::abs(substitution_defect(t, q)) > tol) break;
        p = q;
    }
    return p;
}

SchemeCoefficients backward_euler() {
    return {"BE", 1, {{-1.0}, {0.0}, 0.0}, {{-1.0}, {0.0}, 1.0}};
}

std::vector<Rational> fractions(std::initializer_list<std::pair<long, long>> v) {
    std::vector<Rational> out;
    for (auto [n, d] : v) out.emplace_back(n, d);
    return out;
}

}  // namespace

TEST(VerifyOrder, BackwardEulerIsFirstOrder) {
    const auto report = verify_order(backward_euler(), 1e-10);
    EXPECT_EQ(report.max_order_implicit, 1);
    EXPECT_DOUBLE_EQ(report.residuals[2].implicit_residual, 0.5 - 1.0);
}

TEST(VerifyOrder, CrankNicolsonIsSecondOrder) {
    SchemeCoefficients cn{"CN", 2, {{-1.0}, {1.0}, 0.0}, {{-1.0}, {0.5}, 0.5}};
    EXPECT_EQ(verify_order(cn).max_order_implicit, 2);
}

TEST(VerifyOrder, ModifiedCrankNicolsonIsSecondNotThird) {
    const auto mcn = second_order_family(0.5, 0.125);
    const auto report = verify_order(mcn);
    EXPECT_EQ(report.max_order_implicit, 2);
    const double oracle_q3 = substitution_defect(mcn.corrector, 3);
    EXPECT_GT(std::abs(oracle_q3), 1e-3);
    // Taylor residual is the substitution defect scaled by 1/q!.
    EXPECT_NEAR(report.residuals[3].implicit_residual, oracle_q3 / 6.0, 1e-15);
}

TEST(VerifyOrder, RejectsMalformedTables) {
    SchemeCoefficients bad{"bad", 1, {{-1.0, 0.0}, {1.0}, 0.0}, {{-1.0, 0.0}, {0.0, 0.0}, 1.0}};
    EXPECT_THROW(verify_order(bad), std::invalid_argument);
    SchemeCoefficients empty{"empty", 1, {{}, {}, 0.0}, {{}, {}, 1.0}};
    EXPECT_THROW(verify_order(empty), std::invalid_argument);
}

TEST(SecondOrderFamily, NamedMembers) {
    const auto cn = second_order_family_exact(Rational(1, 2), Rational(0));
    EXPECT_EQ(cn.corrector.state, fractions({{-1, 1}, {0, 1}}));
    EXPECT_EQ(cn.corrector.slope_new, Rational(1, 2));
    EXPECT_EQ(cn.corrector.slope, fractions({{1, 2}, {0, 1}}));

    const auto bdf2 = second_order_family_exact(Rational(1), Rational(0));
    EXPECT_EQ(bdf2.corrector.state, fractions({{-4, 3}, {1, 3}}));
    EXPECT_EQ(bdf2.corrector.slope_new, Rational(2, 3));
    EXPECT_EQ(bdf2.corrector.slope, fractions({{0, 1}, {0, 1}}));

    // b_0 = 2(1 − α − β)/(2α + 1) = 3/8 at (1/2, 1/8).
    const auto mcn = second_order_family_exact(Rational(1, 2), Rational(1, 8));
    EXPECT_EQ(mcn.corrector.state, fractions({{-1, 1}, {0, 1}}));
    EXPECT_EQ(mcn.corrector.slope_new, Rational(9, 16));
    EXPECT_EQ(mcn.corrector.slope, fractions({{3, 8}, {1, 16}}));
}

TEST(SecondOrderFamily, FloatingAndExactAgree) {
    for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
        for (double beta : {0.0, 0.125, 0.3}) {
            const auto f = second_order_family(alpha, beta);
            EXPECT_EQ(verify_order(f, 1e-12).max_order_implicit >= 2, true) << alpha << "," << beta;
        }
    }
    EXPECT_THROW(second_order_family(-0.5, 0.0), std::invalid_argument);
    EXPECT_THROW(second_order_family_exact(Rational(-1, 2), Rational(0)), std::invalid_argument);
}

TEST(Derivations, AdamsBashforthClassical) {
    EXPECT_EQ(derive_adams_bashforth(1).slope, fractions({{1, 1}}));
    EXPECT_EQ(derive_adams_bashforth(2).slope, fractions({{3, 2}, {-1, 2}}));
    EXPECT_EQ(derive_adams_bashforth(3).slope, fractions({{23, 12}, {-16, 12}, {5, 12}}));
    EXPECT_EQ(derive_adams_bashforth(4).slope, fractions({{55, 24}, {-59, 24}, {37, 24}, {-9, 24}}));
    for (int s = 1; s <= 6; ++s) {
        EXPECT_EQ(substitution_order(to_double(derive_adams_bashforth(s))), s);
    }
    EXPECT_THROW(derive_adams_bashforth(0), std::invalid_argument);
    EXPECT_THROW(derive_adams_bashforth(7), std::invalid_argument);
}

TEST(Derivations, AdamsMoultonClassical) {
    const auto am1 = derive_adams_moulton(1);
    EXPECT_EQ(am1.slope_new, Rational(1, 2));
    EXPECT_EQ(am1.slope, fractions({{1, 2}}));
    const auto am2 = derive_adams_moulton(2);
    EXPECT_EQ(am2.slope_new, Rational(5, 12));
    EXPECT_EQ(am2.slope, fractions({{8, 12}, {-1, 12}}));
    const auto am4 = derive_adams_moulton(4);
    EXPECT_EQ(am4.slope_new, Rational(251, 720));
    EXPECT_EQ(am4.slope, fractions({{646, 720}, {-264, 720}, {106, 720}, {-19, 720}}));
    for (int s = 1; s <= 5; ++s) {
        EXPECT_EQ(substitution_order(to_double(derive_adams_moulton(s))), s + 1);
    }
    EXPECT_THROW(derive_adams_moulton(6), std::invalid_argument);
}

TEST(Derivations, BdfClassical) {
    const auto be = derive_bdf(1);
    EXPECT_EQ(be.state, fractions({{-1, 1}}));
    EXPECT_EQ(be.slope_new, Rational(1));
    const auto bdf4 = derive_bdf(4);
    EXPECT_EQ(bdf4.state, fractions({{-48, 25}, {36, 25}, {-16, 25}, {3, 25}}));
    EXPECT_EQ(bdf4.slope_new, Rational(12, 25));
    EXPECT_EQ(bdf4.slope, fractions({{0, 1}, {0, 1}, {0, 1}, {0, 1}}));
    for (int s = 1; s <= 6; ++s) {
        EXPECT_EQ(substitution_order(to_double(derive_bdf(s))), s);
    }
}

TEST(Derivations, Bdf2MatchesSecondOrderFamily) {
    const auto bdf2 = to_double(derive_bdf(2));
    const auto fam = second_order_family(1.0, 0.0).corrector;
    for (int j = 0; j < 2; ++j) {
        EXPECT_NEAR(bdf2.state[j], fam.state[j], 1e-14);
        EXPECT_NEAR(bdf2.slope[j], fam.slope[j], 1e-14);
    }
    EXPECT_NEAR(bdf2.slope_new, fam.slope_new, 1e-14);
}

TEST(Derivations, RowOrderDoesNotChangeSolution) {
    // Vandermonde-type system for AB4: Σ (−j)^{q−1}/(q−1)! b_j = 1/q!, q = 1..4.
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    Rational fact = 1;
    for (int q = 1; q <= 4; ++q) {
        std::vector<Rational> row;
        for (int j = 0; j < 4; ++j) {
            Rational w = 1;
            for (int k = 1; k < q; ++k) w = w * Rational(-j) / Rational(k);
            row.push_back(w);
        }
        fact *= q;
        m.push_back(row);
        rhs.push_back(Rational(1) / fact);
    }
    const auto x = detail::solve_exact(m, rhs);
    std::vector<int> perm{3, 1, 0, 2};
    std::vector<std::vector<Rational>> pm;
    std::vector<Rational> prhs;
    for (int i : perm) {
        pm.push_back(m[i]);
        prhs.push_back(rhs[i]);
    }
    const auto y = detail::solve_exact(pm, prhs);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(static_cast<double>(x[i]), static_cast<double>(y[i]), 1e-13);
    }
    EXPECT_EQ(x, derive_adams_bashforth(4).slope);
}

TEST(Ssp, PublishedCoefficients) {
    const auto two = ssp_explicit_exact(SspVariant::Ssp2TwoStep);
    EXPECT_EQ(two.state, fractions({{-4, 5}, {-1, 5}}));
    EXPECT_EQ(two.slope, fractions({{8, 5}, {-2, 5}}));
    EXPECT_EQ(two.cfl, Rational(1, 2));
    const auto three = ssp_explicit_exact(SspVariant::Ssp3FourStep);
    EXPECT_EQ(three.state, fractions({{-16, 27}, {0, 1}, {0, 1}, {-11, 27}}));
    EXPECT_EQ(three.slope, fractions({{16, 9}, {0, 1}, {0, 1}, {4, 9}}));
    EXPECT_EQ(three.cfl, Rational(1, 3));
    const auto four = ssp_explicit_exact(SspVariant::Ssp2FourStep);
    EXPECT_EQ(four.state, fractions({{-8, 9}, {0, 1}, {0, 1}, {-1, 9}}));
    EXPECT_EQ(four.slope, fractions({{4, 3}, {0, 1}, {0, 1}, {0, 1}}));
    EXPECT_EQ(four.cfl, Rational(2, 3));

    const std::pair<SspVariant, int> declared[] = {
        {SspVariant::Ssp2TwoStep, 2}, {SspVariant::Ssp2FourStep, 2}, {SspVariant::Ssp3FourStep, 3}};
    for (auto [variant, order] : declared) {
        const auto t = ssp_explicit(variant);
        EXPECT_EQ(substitution_order(t), order);
        for (double a : t.state) EXPECT_GE(-a, 0.0);  // α_j ≥ 0
    }
}

TEST(Catalog, HasFifteenSchemes) { EXPECT_EQ(catalog_names().size(), 15u); }

TEST(Catalog, EverySchemeMeetsDeclaredOrder) {
    for (const auto name : catalog_names()) {
        const auto c = builtin(name);
        SCOPED_TRACE(std::string(name));
        EXPECT_NO_THROW(validate(c));
        const auto report = verify_order(c, 1e-10);
        EXPECT_GE(report.max_order_implicit, c.order);
        EXPECT_GE(report.max_order_explicit, c.order - 1);
        EXPECT_EQ(c.order, name.back() - '0');
        EXPECT_EQ(substitution_order(c.corrector), report.max_order_implicit);
        EXPECT_EQ(substitution_order(c.predictor), report.max_order_explicit);

        const auto exact = builtin_exact(name);
        EXPECT_EQ(1 + std::accumulate(exact.predictor.state.begin(), exact.predictor.state.end(), Rational(0)), 0);
        EXPECT_EQ(1 + std::accumulate(exact.corrector.state.begin(), exact.corrector.state.end(), Rational(0)), 0);
    }
}

TEST(Catalog, PairingsAndAliases) {
    const auto be = builtin_exact("FE-BE1");
    EXPECT_EQ(be.steps(), 1);
    EXPECT_EQ(be.predictor.state, fractions({{-1, 1}}));
    EXPECT_EQ(be.predictor.slope, fractions({{0, 1}}));
    EXPECT_EQ(be.corrector.slope_new, Rational(1));

    const auto ab_bdf2 = builtin_exact("AB-BDF2");
    const auto fe_bdf2 = builtin_exact("FE-BDF2");
    EXPECT_EQ(ab_bdf2.predictor.state, fe_bdf2.predictor.state);
    EXPECT_EQ(ab_bdf2.predictor.slope, fe_bdf2.predictor.slope);
    EXPECT_EQ(ab_bdf2.corrector.state, fe_bdf2.corrector.state);
    EXPECT_EQ(ab_bdf2.corrector.slope, fe_bdf2.corrector.slope);
    EXPECT_EQ(ab_bdf2.corrector.slope_new, fe_bdf2.corrector.slope_new);

    const auto ssp4 = builtin_exact("SSP-BDF4");
    EXPECT_EQ(ssp4.steps(), 4);
    EXPECT_EQ(ssp4.predictor.state, ssp_explicit_exact(SspVariant::Ssp3FourStep).state);
    EXPECT_EQ(ssp4.corrector.state, derive_bdf(4).state);
    EXPECT_EQ(builtin_exact("SSP3-BDF4").name, "SSP-BDF4");

    const auto am5 = builtin_exact("AB-AM5");
    EXPECT_EQ(am5.steps(), 4);
    EXPECT_EQ(builtin_exact("AB-AM2").name, "FE-CN2");

    EXPECT_THROW(builtin("nosuch"), std::invalid_argument);
    EXPECT_THROW(builtin("AB-AM9"), std::invalid_argument);
}

TEST(Catalog, ShippedFileMatchesBuiltins) {
    std::ifstream in(SIMLM_CATALOG_FILE);
    ASSERT_TRUE(in) << "missing " << SIMLM_CATALOG_FILE;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), format_catalog());
}

TEST(Catalog, RandomTablesOrderMatchesSubstitution) {
    // Property: for random perturbations of BDF3 the two order computations agree.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
    const auto base = builtin("AB-BDF3");
    for (int trial = 0; trial < 50; ++trial) {
        auto c = base;
        const int which = trial % 4;
        if (which < 3) c.corrector.state[which] += noise(rng);
        if (which == 3) c.corrector.slope_new += noise(rng);
        const auto report = verify_order(c, 1e-10);
        EXPECT_EQ(report.max_order_implicit, substitution_order(c.corrector));
    }
}
