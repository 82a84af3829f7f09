#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pushfront/spectral.hpp"

using namespace pushfront;

namespace {

// Independent double-root oracle: scan (c, z) in (0, 1] x (0, 3] for the
// smallest c whose min_z chi is nonpositive, then polish the 2x2 system
// chi = 0, chi_z = 0 by Newton with hand-written derivatives.
std::pair<double, double> double_root_oracle(double gp0, double h) {
    auto f = [&](double z, double c) { return z * z - c * z - 1 + gp0 * std::exp(-z * c * h); };
    double c0 = 1.0, z0 = 0.5;
    for (int i = 1; i <= 2000; ++i) {
        const double c = i / 2000.0;
        double best = std::numeric_limits<double>::infinity(), zb = 0;
        for (int j = 1; j <= 3000; ++j) {
            const double z = 3.0 * j / 3000.0;
            if (f(z, c) < best) { best = f(z, c); zb = z; }
        }
        if (best <= 0.0) { c0 = c; z0 = zb; break; }
    }
    double c = c0, z = z0;
    for (int it = 0; it < 50; ++it) {
        const double e = gp0 * std::exp(-z * c * h);
        const double F = z * z - c * z - 1 + e;
        const double G = 2 * z - c - c * h * e;
        const double Fz = G, Fc = -z - z * h * e;
        const double Gz = 2 + c * c * h * h * e, Gc = -1 - h * e + c * h * h * z * e;
        const double det = Fz * Gc - Fc * Gz;
        z -= (F * Gc - Fc * G) / det;
        c -= (Fz * G - F * Gz) / det;
    }
    return {c, z};
}

}  // namespace

TEST(Chi, Examples) {
    EXPECT_DOUBLE_EQ(chi(0.0, 1.0, 1.25, 0.0), 0.25);
    EXPECT_NEAR(chi(0.5, 1.0, 1.25, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(chi(1.0, 2.0, 2.0, 0.0), 0.0, 1e-15);
}

TEST(Chi, DerivativesMatchDifferences) {
    const double z = 0.7, c = 1.1, gp0 = 1.25, h = 0.3, e = 1e-6;
    EXPECT_NEAR(chi_dz(z, c, gp0, h), (chi(z + e, c, gp0, h) - chi(z - e, c, gp0, h)) / (2 * e), 1e-8);
    EXPECT_NEAR(chi_dc(z, c, gp0, h), (chi(z, c + e, gp0, h) - chi(z, c - e, gp0, h)) / (2 * e), 1e-8);
    EXPECT_NEAR(chi_dzz(z, c, gp0, h), (chi_dz(z + e, c, gp0, h) - chi_dz(z - e, c, gp0, h)) / (2 * e), 1e-7);
}

TEST(MinimalLinearSpeed, ClosedFormsWithoutDelay) {
    auto a = minimal_linear_speed(1.25, 0.0);
    EXPECT_NEAR(a.c_sharp, 1.0, 1e-12);
    EXPECT_NEAR(a.lambda_double, 0.5, 1e-12);
    auto b = minimal_linear_speed(2.0, 0.0);
    EXPECT_NEAR(b.c_sharp, 2.0, 1e-12);
    EXPECT_NEAR(b.lambda_double, 1.0, 1e-12);
}

TEST(MinimalLinearSpeed, UnitDelayMatchesScanOracle) {
    const auto s = minimal_linear_speed(1.25, 1.0);
    const auto [c_ref, z_ref] = double_root_oracle(1.25, 1.0);
    EXPECT_LT(s.c_sharp, 1.0);
    EXPECT_NEAR(s.c_sharp, c_ref, 1e-9);
    EXPECT_NEAR(s.lambda_double, z_ref, 1e-8);
    EXPECT_LT(std::abs(chi(s.lambda_double, s.c_sharp, 1.25, 1.0)), 1e-10);
    EXPECT_LT(std::abs(chi_dz(s.lambda_double, s.c_sharp, 1.25, 1.0)), 1e-10);
}

TEST(MinimalLinearSpeed, HadelerRotheDelayTable) {
    // Frozen from the scan oracle above.
    const double h[] = {0.05, 0.1, 0.2};
    for (double hh : h) {
        const auto [c_ref, z_ref] = double_root_oracle(1.25, hh);
        EXPECT_NEAR(minimal_linear_speed(1.25, hh).c_sharp, c_ref, 1e-9) << hh;
    }
    EXPECT_NEAR(minimal_linear_speed(1.25, 0.1).c_sharp, 0.891059, 1e-6);
    EXPECT_NEAR(minimal_linear_speed(1.25, 0.2).c_sharp, 0.806306, 1e-6);
}

TEST(MinimalLinearSpeed, RejectsSubcriticalSlope) {
    EXPECT_THROW(minimal_linear_speed(0.9, 0.0), InvalidArgument);
}

TEST(DecayRates, Examples) {
    auto r = decay_rates(1.25, 1.25, 0.0);
    EXPECT_NEAR(r.lambda1, 0.25, 1e-12);
    EXPECT_NEAR(r.lambda2, 1.0, 1e-12);
    r = decay_rates(2.5, 2.0, 0.0);
    EXPECT_NEAR(r.lambda1, 0.5, 1e-12);
    EXPECT_NEAR(r.lambda2, 2.0, 1e-12);
    try {
        decay_rates(0.9, 1.25, 0.0);
        FAIL() << "expected an error below c_#";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("no simple positive roots"), std::string::npos);
    }
}

TEST(DecayRates, ResidualsWithDelay) {
    for (double h : {0.0, 0.1, 0.5, 1.0}) {
        const double c = minimal_linear_speed(1.25, h).c_sharp + 0.3;
        const auto r = decay_rates(c, 1.25, h);
        EXPECT_LT(r.lambda1, r.lambda2);
        EXPECT_LT(std::abs(chi(r.lambda1, c, 1.25, h)), 1e-12);
        EXPECT_LT(std::abs(chi(r.lambda2, c, 1.25, h)), 1e-12);
    }
}

TEST(Lambda3, Examples) {
    EXPECT_NEAR(lambda3(1.25, 0.125, 0.0), -0.5, 1e-12);
    EXPECT_NEAR(lambda3(2.0, 0.0, 0.0), 1.0 - std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(lambda3(1.0, 0.5, 0.0), (1.0 - std::sqrt(3.0)) / 2.0, 1e-12);
}

TEST(Lambda3, ResidualWithDelay) {
    const double z = lambda3(0.9, 0.125, 0.1);
    EXPECT_LT(z, 0.0);
    EXPECT_LT(std::abs(chi(z, 0.9, 0.125, 0.1)), 1e-12);
}

TEST(QuadraticRoots, Examples) {
    auto [a, b] = quadratic_roots(0.0);
    EXPECT_DOUBLE_EQ(a, -1.0);
    EXPECT_DOUBLE_EQ(b, 1.0);
    std::tie(a, b) = quadratic_roots(1.5);
    EXPECT_NEAR(a, -0.5, 1e-15);
    EXPECT_NEAR(b, 2.0, 1e-15);
    std::tie(a, b) = quadratic_roots(1.0);
    EXPECT_NEAR(a, (1 - std::sqrt(5.0)) / 2, 1e-15);
    EXPECT_NEAR(b, (1 + std::sqrt(5.0)) / 2, 1e-15);
}

TEST(SpectralProperty, Vieta) {
    for (int i = 0; i <= 200; ++i) {
        const double c = 0.05 * i;
        const auto [a, b] = quadratic_roots(c);
        EXPECT_NEAR(a * b, -1.0, 1e-12);
        EXPECT_NEAR(a + b, c, 1e-12);
    }
}

TEST(SpectralProperty, RatesSeparateAsSpeedGrows) {
    for (double h : {0.0, 0.1, 0.2}) {
        const double cs = minimal_linear_speed(1.25, h).c_sharp;
        DecayPair prev = decay_rates(cs + 0.01, 1.25, h);
        for (int i = 2; i <= 200; ++i) {
            const auto r = decay_rates(cs + 0.01 * i, 1.25, h);
            EXPECT_LT(r.lambda1, prev.lambda1);
            EXPECT_GT(r.lambda2, prev.lambda2);
            prev = r;
        }
    }
}

TEST(SpectralProperty, LinearSpeedDecreasesWithDelay) {
    for (double gp0 : {1.25, 2.0, 3.0}) {
        double prev = minimal_linear_speed(gp0, 0.0).c_sharp;
        for (int i = 1; i <= 40; ++i) {
            const double c = minimal_linear_speed(gp0, 0.05 * i).c_sharp;
            EXPECT_LT(c, prev) << gp0 << " " << 0.05 * i;
            prev = c;
        }
    }
}

TEST(SpectralProperty, PushedAdmissibilityEvaluable) {
    // lambda1(c) < -lambda3(c) just above c_# for the Hadeler-Rothe constants.
    const auto s = minimal_linear_speed(1.25, 0.0, 0.125);
    const double c = 1.0062306;
    EXPECT_LT(s.decay_rates(c).lambda1, -s.lambda3(c));
}
