#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "pushfront/model.hpp"

using namespace pushfront;

namespace {

// Oracle for the Hadeler-Rothe cubic written out by hand, not via coefficients.
double hr(double u) { return (10.0 * u + 3.0 * u * u - 5.0 * u * u * u) / 8.0; }

}  // namespace

TEST(BirthFunction, HadelerRotheConstants) {
    const auto g = make_birth_function(std::string("hadeler_rothe"));
    EXPECT_DOUBLE_EQ(g.kappa(), 1.0);
    EXPECT_NEAR(g.gp0(), 1.25, 1e-15);
    EXPECT_NEAR(g.gpk(), 0.125, 1e-15);
    EXPECT_NEAR(g.lipschitz(), 1.325, 1e-12);
    EXPECT_TRUE(g.monotone());
    for (double u = 0.0; u <= 1.0; u += 0.01) EXPECT_NEAR(g(u), hr(u), 1e-15);
}

TEST(BirthFunction, KppConstants) {
    const auto g = make_birth_function(std::string("kpp"));
    EXPECT_DOUBLE_EQ(g.kappa(), 1.0);
    EXPECT_DOUBLE_EQ(g.gp0(), 2.0);
    EXPECT_DOUBLE_EQ(g.gpk(), 0.0);
    EXPECT_TRUE(g.monotone());
}

TEST(BirthFunction, UnknownPresetRejected) {
    EXPECT_THROW(make_birth_function(std::string("logistic")), InvalidArgument);
}

TEST(BirthFunction, PresetsPassHypothesis) {
    for (const auto& name : preset_names()) {
        const auto g = BirthFunction::from_polynomial(name == "kpp" ? std::vector<double>{0, 2, -1}
                                                                    : std::vector<double>{0, 1.25, 0.375, -0.625});
        const auto rep = validate_hypothesis(g, 4000);
        EXPECT_TRUE(rep.passed) << name;
        EXPECT_TRUE(rep.failures().empty()) << name;
    }
}

TEST(BirthFunction, KppIsSubtangentialHadelerRotheIsNot) {
    EXPECT_TRUE(validate_hypothesis(make_birth_function(std::string("kpp")), 1000).subtangential);
    EXPECT_FALSE(validate_hypothesis(make_birth_function(std::string("hadeler_rothe")), 1000).subtangential);
}

TEST(BirthFunction, SmallSlopeAtZeroFailsNamedCheck) {
    // g - u = -1.5 u (u - 1/3)(u - 1), so gp0 = 0.5 and g < u near 0.
    const auto g = BirthFunction::from_polynomial({0.0, 0.5, 2.0, -1.5});
    const auto rep = validate_hypothesis(g, 1000);
    EXPECT_FALSE(rep.passed);
    const auto* c = rep.find("gp0 > 1");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->passed);
    try {
        make_birth_function(std::vector<double>{0.0, 0.5, 2.0, -1.5});
        FAIL() << "expected rejection";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("gp0 > 1"), std::string::npos);
    }
}

TEST(BirthFunction, ValidateNeedsEnoughSamples) {
    EXPECT_THROW(validate_hypothesis(make_birth_function(std::string("kpp")), 50), InvalidArgument);
}

TEST(Equilibria, Presets) {
    for (const auto& name : preset_names()) {
        const auto g = make_birth_function(name);
        const auto [a, b] = equilibria(g);
        EXPECT_EQ(a, 0.0);
        EXPECT_DOUBLE_EQ(b, 1.0);
        EXPECT_LT(std::abs(g(b) - b), 1e-12);
    }
}

TEST(Equilibria, ScaledKpp) {
    const auto g = make_birth_function(std::vector<double>{0.0, 3.0, -2.0});
    EXPECT_NEAR(g.kappa(), 1.0, 1e-14);
    EXPECT_LT(std::abs(g(g.kappa()) - g.kappa()), 1e-12);
    EXPECT_NEAR(g.gp0(), 3.0, 1e-15);
    EXPECT_NEAR(g.gpk(), -1.0, 1e-13);
}

TEST(BirthFunction, LinearExtension) {
    const auto g = make_birth_function(std::string("hadeler_rothe"));
    for (double u : {-3.0, -0.5, -1e-6}) EXPECT_NEAR(g(u), 1.25 * u, 1e-14);
    for (double u : {1.0 + 1e-6, 1.5, 4.0}) EXPECT_NEAR(g(u), 1.0 + 0.125 * (u - 1.0), 1e-14);
    EXPECT_NEAR(g.derivative(-1.0), g.derivative(0.0), 1e-12);
    EXPECT_NEAR(g.derivative(2.0), g.derivative(1.0), 1e-12);
}

TEST(BirthFunctionProperty, LipschitzOnRandomPairs) {
    std::mt19937_64 rng(7);
    for (const auto& name : preset_names()) {
        const auto g = make_birth_function(name);
        std::uniform_real_distribution<double> U(0.0, g.kappa());
        for (int k = 0; k < 5000; ++k) {
            const double u = U(rng), v = U(rng);
            EXPECT_LE(std::abs(g(u) - g(v)), g.lipschitz() * std::abs(u - v) * (1.0 + 1e-12) + 1e-15);
        }
    }
}

TEST(BirthFunctionProperty, MonostableOnDenseSample) {
    for (const auto& name : preset_names()) {
        const auto g = make_birth_function(name);
        for (int i = 1; i < 10000; ++i) {
            const double u = g.kappa() * i / 10000.0;
            ASSERT_GT(g(u) - u, 0.0) << name << " u=" << u;
        }
    }
}

TEST(BirthFunction, HolderBoundCoversWindow) {
    const auto g = make_birth_function(std::string("hadeler_rothe"));
    const auto hb = g.holder();
    EXPECT_GT(hb.theta, 0.0);
    EXPECT_LE(hb.theta, 1.0);
    for (int i = 1; i <= 100; ++i) {
        const double u = g.holder_window() * i / 100.0;
        EXPECT_LE(std::abs(g.derivative(u) - g.gp0()), hb.C * std::pow(u, hb.theta) * (1 + 1e-9));
    }
}
