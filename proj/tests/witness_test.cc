#include "scrambled/witness.h"

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.h"
#include "scrambled/errors.h"

using namespace scrambled;

namespace {

const double kAlphaStar = 8 * std::numbers::sqrt2 - 12;

std::vector<OutcomeDistribution> labeled(const DensityMatrix &rho) {
    return {probabilities(rho, Setting::XX), probabilities(rho, Setting::YY), probabilities(rho, Setting::ZZ)};
}

ScrambledData data_of(const PureState4 &psi) {
    return scrambled_data(DensityMatrix::from_pure(psi));
}

double brute_force_min(const ScrambledData &d, double a, double b, double g) {
    double best = 1e300;
    const bool with_y = d.has(Setting::YY);
    for (int rx = 0; rx < 24; ++rx) {
        for (int ry = 0; ry < (with_y ? 24 : 1); ++ry) {
            for (int rz = 0; rz < 24; ++rz) {
                std::vector<OutcomeDistribution> l{permute({Setting::XX, d.multiset(Setting::XX)}, permutation_unrank(rx)),
                                                   permute({Setting::ZZ, d.multiset(Setting::ZZ)}, permutation_unrank(rz))};
                if (with_y) l.push_back(permute({Setting::YY, d.multiset(Setting::YY)}, permutation_unrank(ry)));
                for (int cx = 0; cx < 4; ++cx)
                    for (int cy = 0; cy < (with_y ? 4 : 1); ++cy)
                        for (int cz = 0; cz < 4; ++cz)
                            best = std::min(best, witness_value(l, {a, with_y ? b : 0.0, g, cx, cy, cz}));
            }
        }
    }
    return best;
}

}  // namespace

TEST(witness_matrix, examples) {
    EXPECT_EQ(witness_matrix({}), ComplexMatrix4::Identity());
    ComplexMatrix4 w = witness_matrix({-1, 0, 0, 0, 0, 0});
    auto e = eig_hermitian(w);
    EXPECT_NEAR(e.values[0], 1, 1e-14);
    EXPECT_NEAR(e.values[3], 0, 1e-14);
    ComplexVector4 pp = ComplexVector4::Constant(0.5);
    EXPECT_NEAR(std::abs((pp.adjoint() * w * pp)(0)), 0, 1e-14);
}

TEST(witness_matrix, expectation_equals_probability_form) {
    for (uint64_t s = 0; s < 200; ++s) {
        auto rho = random_hs_state(s);
        WitnessParams w{-0.3, 0.2, -0.5, int(s % 4), int((s / 4) % 4), int((s / 16) % 4)};
        EXPECT_NEAR(rho.expectation(witness_matrix(w)), witness_value(labeled(rho), w), 1e-13);
    }
}

TEST(witness_value, examples) {
    auto singlet = DensityMatrix::from_pure(states::singlet());
    std::vector<OutcomeDistribution> xz{probabilities(singlet, Setting::XX), probabilities(singlet, Setting::ZZ)};
    EXPECT_NEAR(witness_value(xz, {-2, 0, -2, 1, 0, 1}), -1, 1e-12);
    EXPECT_NEAR(witness_value(xz, {-2, 0, -2, 0, 0, 0}), 1, 1e-12);
    EXPECT_EQ(witness_value(xz, {}), 1.0);
    EXPECT_THROW(witness_value(xz, {-1, 0.5, -1, 0, 0, 0}), MissingSetting);
    EXPECT_THROW(witness_value(xz, {-1, 0, -1, 4, 0, 0}), DomainError);
}

TEST(scrambled_witness_min, examples) {
    EXPECT_NEAR(scrambled_witness_min(data_of(states::singlet()), kAlphaStar, 0, kAlphaStar), 8 * std::sqrt(2.0) - 11,
                1e-12);
    EXPECT_NEAR(scrambled_witness_min(data_of(psi_t(3)), kAlphaStar, 0, kAlphaStar), 1 + kAlphaStar * 1.5, 1e-12);
    EXPECT_LT(scrambled_witness_min(data_of(psi_t(3)), kAlphaStar, 0, kAlphaStar), -0.029);
    EXPECT_EQ(scrambled_witness_min(data_of(psi_t(3)), 0, 0, 0), 1.0);
}

TEST(scrambled_witness_min, equals_brute_force_over_labelings) {
    for (uint64_t s = 0; s < 20; ++s) {
        auto rho = random_hs_state(s);
        auto d = scrambled_data(rho);
        for (auto [a, g] : {std::pair{-0.7, -0.4}, {0.3, -1.0}, {-0.2, 0.6}, {0.5, 0.5}})
            EXPECT_EQ(scrambled_witness_min(d, a, 0, g), brute_force_min(d, a, 0, g)) << s;
    }
    for (uint64_t s = 0; s < 3; ++s) {
        auto rho = random_hs_state(100 + s);
        std::array<Setting, 3> all{Setting::XX, Setting::YY, Setting::ZZ};
        auto d = scrambled_data(rho, all);
        EXPECT_EQ(scrambled_witness_min(d, -0.4, 0.3, -0.2), brute_force_min(d, -0.4, 0.3, -0.2)) << s;
    }
}

TEST(min_over_separable, examples_against_grid_oracle) {
    EXPECT_NEAR(min_over_separable(0, 0, 0), 1.0, 1e-12);
    double expected = 1 - (3 + 2 * std::sqrt(2.0)) / 4;
    EXPECT_NEAR(min_over_separable(-1, 0, -1), expected, 1e-9);
    EXPECT_NEAR(oracle::witness_product_min(-1, 0, -1), expected, 1e-9);
    EXPECT_NEAR(min_over_separable(kAlphaStar, 0, kAlphaStar), 0.0, 1e-9);
    for (auto [a, b, g] : {std::tuple{-0.5, 0.0, -0.9}, {-1.2, 0.3, 0.4}, {0.2, -0.6, -0.3}, {-0.4, -0.4, -0.4}}) {
        EXPECT_NEAR(min_over_separable(a, b, g), oracle::witness_product_min(a, b, g), 1e-8) << a << " " << b << " " << g;
    }
}

TEST(min_over_separable, branches_agree_with_full_search) {
    for (double angle = 1.7; angle < 6.2; angle += 0.35) {
        double a = std::cos(angle), g = std::sin(angle);
        EXPECT_NEAR(min_over_separable_branches(a, g), min_over_separable(a, 0, g), 1e-8) << angle;
    }
}

TEST(optimize_params, beta_zero_curve) {
    auto curve = optimize_params(0, 16);
    ASSERT_EQ(curve.size(), 16u);
    for (const auto &p : curve) {
        EXPECT_EQ(p.beta, 0.0);
        EXPECT_NEAR(oracle::witness_product_min(p.alpha, 0, p.gamma), 0, 1e-8) << p.alpha << " " << p.gamma;
        EXPECT_GE(p.separable_min, -1e-8);
    }
    // Direction (-1, -1) lands on the symmetric tangent witness.
    auto sym = analytic_tangent(5 * std::numbers::pi / 4);
    EXPECT_NEAR(sym.alpha, kAlphaStar, 1e-8);
    EXPECT_NEAR(sym.gamma, kAlphaStar, 1e-8);
}

TEST(optimize_params, near_alpha_zero_endpoint) {
    // Directions approaching (0, -1) give gamma close to -1.
    auto p = analytic_tangent(3 * std::numbers::pi / 2 - 1e-4);
    EXPECT_NEAR(p.gamma, -1, 1e-3);
    EXPECT_NEAR(p.alpha, 0, 1e-3);
}

TEST(optimize_params, nonzero_beta_and_errors) {
    for (double beta : {-0.3, 0.4}) {
        for (const auto &p : optimize_params(beta, 6)) {
            EXPECT_NEAR(oracle::witness_product_min(p.alpha, p.beta, p.gamma), 0, 1e-7) << beta;
        }
    }
    EXPECT_THROW(optimize_params(-1, 4), DomainError);
    EXPECT_THROW(optimize_params(-2, 4), DomainError);
}

TEST(witness_min_eigvec, examples_and_eigensolver) {
    for (double c : {0.1, 1.0, 7.0}) EXPECT_NEAR(witness_min_eigvec(-c, -c).t, 3, 1e-12);
    auto r = witness_min_eigvec(kAlphaStar, kAlphaStar);
    ComplexMatrix4 w = witness_matrix({kAlphaStar, 0, kAlphaStar, 0, 0, 0});
    double val = (r.state.amplitudes().adjoint() * w * r.state.amplitudes())(0).real();
    EXPECT_NEAR(val, eig_hermitian(w).values[3], 1e-12);
    EXPECT_LT(val, -0.029);
    EXPECT_THROW(witness_min_eigvec(0, -1), DomainError);
    EXPECT_THROW(witness_min_eigvec(1, 1), DomainError);
}

TEST(correlation_witness_values, examples) {
    auto singlet = DensityMatrix::from_pure(states::singlet());
    std::vector<OutcomeDistribution> xz{probabilities(singlet, Setting::XX), probabilities(singlet, Setting::ZZ)};
    auto v = correlation_witness_values(xz);
    EXPECT_NEAR(*std::min_element(v.begin(), v.end()), -1, 1e-12);
    std::vector<OutcomeDistribution> u{{Setting::XX, {0.25, 0.25, 0.25, 0.25}}, {Setting::ZZ, {0.25, 0.25, 0.25, 0.25}}};
    for (double x : correlation_witness_values(u)) EXPECT_NEAR(x, 1, 1e-15);
}

TEST(min_entropy_form, equals_scrambled_minimum) {
    auto singlet = data_of(states::singlet());
    EXPECT_NEAR(min_entropy_form(-1, 0, -1, singlet), 0, 1e-12);
    EXPECT_NEAR(min_entropy_form(-1, 0, -1, data_of(psi_t(3))), -0.5, 1e-12);
    for (uint64_t s = 0; s < 100; ++s) {
        auto d = scrambled_data(random_hs_state(s));
        EXPECT_NEAR(min_entropy_form(kAlphaStar, 0, -0.3, d), scrambled_witness_min(d, kAlphaStar, 0, -0.3), 1e-14);
    }
    EXPECT_THROW(min_entropy_form(0.5, 0, -1, singlet), DomainError);
}

TEST(witness, separable_states_never_below_zero) {
    auto curve = optimize_params(0, 16);
    int checked = 0;
    for (uint64_t s = 0; checked < 2000; ++s) {
        auto rho = random_hs_state(5000 + s);
        if (!is_ppt(rho)) continue;
        ++checked;
        auto d = scrambled_data(rho);
        for (const auto &p : curve) ASSERT_GE(scrambled_witness_min(d, p.alpha, 0, p.gamma), -1e-8) << s;
    }
}
