#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "pushfront/profile.hpp"
#include "pushfront/simulator.hpp"

using namespace pushfront;

namespace {

const BirthFunction& hr() {
    static const auto g = make_birth_function(std::string("hadeler_rothe"));
    return g;
}

InitialDatum constant_datum(double value, double h, double dt) {
    InitialDatum d;
    d.grid = UniformGrid::span(-20, 20, 0.1);
    d.h = h;
    d.dt = dt;
    d.kappa = hr().kappa();
    d.history.assign(lag_steps(h, dt) + 1, std::vector<double>(d.grid.n, value));
    d.left_value = d.right_value = value;
    return d;
}

// Random history in [0, kappa] with zero ends; the partner is shifted upward.
std::pair<InitialDatum, InitialDatum> ordered_pair(std::mt19937_64& rng, double h, double dt) {
    InitialDatum a = constant_datum(0.0, h, dt), b = a;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (std::size_t k = 0; k < a.history.size(); ++k) {
        for (std::size_t i = 1; i + 1 < a.grid.n; ++i) {
            const double x = a.grid[i];
            const double env = std::exp(-x * x / 50.0);
            const double lo = env * U(rng), hi = std::min(1.0, lo + env * U(rng) * U(rng));
            a.history[k][i] = lo;
            b.history[k][i] = hi;
        }
    }
    return {a, b};
}

const WaveProfile& hr_front() {
    static const WaveProfile p = fast_front(0.0, hr(), 1.0061, 1.0066, 1e-4);
    return p;
}

}  // namespace

TEST(DelayedField, EquilibriaPreservedExactly) {
    for (double h : {0.0, 0.1}) {
        for (double v : {0.0, 1.0}) {
            DelayedField f(constant_datum(v, h, 0.01), hr());
            for (int s = 0; s < 1000; ++s) f.step(hr());
            for (double u : f.current()) ASSERT_NEAR(u, v, 1e-12);
        }
    }
}

TEST(DelayedField, HistoryRing) {
    DelayedField f(constant_datum(0.0, 0.1, 0.01), hr());
    EXPECT_EQ(f.lag(), 10u);
    EXPECT_EQ(f.history_length(), 11u);
    EXPECT_THROW(f.back(11), InvalidArgument);
}

TEST(DelayedField, RejectsInconsistentSetup) {
    EXPECT_THROW(lag_steps(0.1, 0.003), InvalidArgument);
    EXPECT_THROW(lag_steps(0.1, 0.0), InvalidArgument);
    EXPECT_EQ(lag_steps(0.1, 0.0025), 40u);
    auto d = constant_datum(0.0, 0.0, 0.01);
    d.dt = 1.0;  // above 0.9 / L_g
    EXPECT_THROW(DelayedField(d, hr()), InvalidArgument);
    d = constant_datum(0.0, 0.0, 0.01);
    d.history[0][5] = 1.5;
    EXPECT_THROW(DelayedField(d, hr()), InvalidArgument);
    d = constant_datum(0.0, 0.0, 0.01);
    d.left_value = 0.5;
    EXPECT_THROW(DelayedField(d, hr()), InvalidArgument);
}

TEST(MaxTimeStep, DividesDelay) {
    EXPECT_DOUBLE_EQ(max_time_step(0.0, hr()), 0.01);
    EXPECT_NEAR(max_time_step(0.1, hr()), 0.01, 1e-15);
    EXPECT_NO_THROW(lag_steps(0.105, max_time_step(0.105, hr())));
    EXPECT_LE(max_time_step(0.0, make_birth_function(std::vector<double>{0.0, 200.0, -199.0})), 0.9 / 200.0);
}

TEST(DelayedFieldProperty, ComparisonPrinciple) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const double h = trial % 2 ? 0.1 : 0.0;
        auto [a, b] = ordered_pair(rng, h, 0.01);
        DelayedField fa(a, hr()), fb(b, hr());
        for (int s = 0; s < 300; ++s) {
            fa.step(hr());
            fb.step(hr());
            const auto ua = fa.current(), ub = fb.current();
            for (std::size_t i = 0; i < ua.size(); ++i) ASSERT_LE(ua[i], ub[i] + 1e-12) << trial << " " << s;
            for (double u : ua) ASSERT_GE(u, 0.0);
            for (double u : ub) ASSERT_LE(u, 1.0);
        }
    }
}

TEST(DelayedFieldProperty, TranslationEquivariantInInterior) {
    const auto grid = UniformGrid::span(-60, 60, 0.1);
    DatumParams p;
    p.center = 0.0;
    p.width = 8.0;
    const auto d0 = make_initial_datum(DatumKind::CompactBump, p, grid, 0.1, 0.01, hr());
    p.center = 1.0;  // ten nodes
    const auto d1 = make_initial_datum(DatumKind::CompactBump, p, grid, 0.1, 0.01, hr());
    DelayedField f0(d0, hr()), f1(d1, hr());
    run(f0, hr(), 5.0, {});
    run(f1, hr(), 5.0, {});
    const double layer = 10.0 * std::sqrt(5.0);
    double err = 0.0;
    for (std::size_t i = 0; i + 10 < grid.n; ++i) {
        if (grid[i] < grid.x_min + layer || grid[i + 10] > grid.x_max() - layer) continue;
        err = std::max(err, std::abs(f1.current()[i + 10] - f0.current()[i]));
    }
    EXPECT_LT(err, 1e-12);
}

TEST(InitialDatum, HeavisidePasses) {
    const auto grid = UniformGrid::span(-50, 50, 0.1);
    const auto d = make_initial_datum(DatumKind::Heaviside, {}, grid, 0.1, 0.01, hr());
    const auto r = validate_IC(d, 0.4);
    EXPECT_TRUE(r.ic1);
    EXPECT_TRUE(r.ic2);
    EXPECT_TRUE(r.ic3);
}

TEST(InitialDatum, CompactBumpFailsOnlyRightPlateau) {
    const auto grid = UniformGrid::span(-50, 50, 0.1);
    DatumParams p;
    p.mu = 1.0;
    p.A = 1.0 * std::exp(12.0);  // bump support ends at -10; A e^{x} >= 1 there
    const auto d = make_initial_datum(DatumKind::CompactBump, p, grid, 0.0, 0.01, hr());
    const auto r = validate_IC(d, 0.4);
    EXPECT_TRUE(r.ic1);
    EXPECT_TRUE(r.ic2);
    EXPECT_FALSE(r.ic3);
}

TEST(InitialDatum, SlowLeftTailFailsSecondCondition) {
    const double l1 = 0.4;
    const auto grid = UniformGrid::span(-100, 50, 0.1);
    DatumParams p;
    p.mu = 0.5 * l1;
    p.B = 10;
    const auto d = make_initial_datum(DatumKind::FrontLike, p, grid, 0.0, 0.01, hr());
    const auto r = validate_IC(d, l1);
    EXPECT_TRUE(r.ic1);
    EXPECT_FALSE(r.ic2);
    ASSERT_TRUE(r.fitted_left_rate);
    EXPECT_NEAR(*r.fitted_left_rate, 0.5 * l1, 1e-9);
}

TEST(InitialDatum, UnperturbedProfileIsTravelingWave) {
    auto phi = std::make_shared<WaveProfile>(hr_front());
    const auto grid = UniformGrid::span(-60, 40, 0.1);
    DatumParams p;
    p.profile = phi;
    p.shift = 2.0;
    const auto d = make_initial_datum(DatumKind::PerturbedProfile, p, grid, 0.1, 0.01, hr());
    ASSERT_EQ(d.history.size(), 11u);
    for (std::size_t k = 0; k < d.history.size(); ++k) {
        const double s = -0.1 + 0.01 * k;
        for (std::size_t i = 0; i < grid.n; i += 37)
            EXPECT_DOUBLE_EQ(d.history[k][i], phi->evaluate(grid[i] + phi->c * s + 2.0));
    }
}

TEST(InitialDatum, RejectsBadParameters) {
    const auto grid = UniformGrid::span(-50, 50, 0.1);
    DatumParams p;
    p.height = 2.0;
    EXPECT_THROW(make_initial_datum(DatumKind::CompactBump, p, grid, 0.0, 0.01, hr()), InvalidArgument);
    p = {};
    p.center = 45;
    EXPECT_THROW(make_initial_datum(DatumKind::CompactBump, p, grid, 0.0, 0.01, hr()), InvalidArgument);
    EXPECT_THROW(make_initial_datum(DatumKind::PerturbedProfile, {}, grid, 0.0, 0.01, hr()), InvalidArgument);
    EXPECT_THROW(make_initial_datum(DatumKind::Heaviside, {}, grid, -1.0, 0.01, hr()), InvalidArgument);
    EXPECT_THROW(parse_datum_kind("gaussian"), InvalidArgument);
}

TEST(DelayedField, ExactFrontStaysOnProfile) {
    auto phi = std::make_shared<WaveProfile>(hr_front());
    const auto grid = UniformGrid::span(-80, 60, 0.1);
    DatumParams p;
    p.profile = phi;
    const double dt = 0.01;
    DelayedField f(make_initial_datum(DatumKind::PerturbedProfile, p, grid, 0.0, dt, hr()), hr());
    for (int s = 0; s < 100; ++s) f.step(hr());
    double err = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
        err = std::max(err, std::abs(f.current()[i] - phi->evaluate(grid[i] + phi->c * f.t())));
    EXPECT_LT(err, 5e-3);
}

TEST(Run, ZeroTimeRecordsInitialObservationOnly) {
    DelayedField f(constant_datum(1.0, 0.0, 0.01), hr());
    SnapshotRecorder snaps;
    PointRecorder point(0.0);
    const auto log = run(f, hr(), 0.0, {snaps.observer(1.0), point.observer(0.5)});
    EXPECT_EQ(log.steps, 0u);
    ASSERT_EQ(snaps.snapshots.size(), 1u);
    ASSERT_EQ(point.records.size(), 1u);
    EXPECT_EQ(snaps.snapshots[0].t, 0.0);
}

TEST(Run, ConstantKappaObservationsToRoundoff) {
    DelayedField f(constant_datum(1.0, 0.1, 0.01), hr());
    SnapshotRecorder snaps;
    PointRecorder point(3.0);
    const auto log = run(f, hr(), 5.0, {snaps.observer(1.0), point.observer(0.1)});
    EXPECT_EQ(snaps.snapshots.size(), 6u);
    EXPECT_EQ(point.records.size(), 51u);
    for (const auto& s : snaps.snapshots)
        for (double u : s.u) ASSERT_LE(std::abs(u - 1.0), 1e-12);
    for (const auto& r : point.records) ASSERT_LE(std::abs(r.u - 1.0), 1e-12);
    EXPECT_NEAR(log.t_final, 5.0, 1e-12);
}

TEST(Run, CadenceMustBeWholeSteps) {
    DelayedField f(constant_datum(1.0, 0.0, 0.01), hr());
    SnapshotRecorder snaps;
    EXPECT_THROW(run(f, hr(), 1.0, {snaps.observer(0.015)}), InvalidArgument);
    EXPECT_THROW(run(f, hr(), 1.005, {}), InvalidArgument);
}

TEST(Run, HeavisideLevelSetAdvancesLinearly) {
    const auto grid = UniformGrid::span(-120, 20, 0.1);
    DelayedField f(make_initial_datum(DatumKind::Heaviside, {}, grid, 0.0, 0.01, hr()), hr());
    LevelSetRecorder lv(0.5);
    run(f, hr(), 80.0, {lv.observer(1.0)});
    ASSERT_EQ(lv.records.size(), 81u);
    // Increments over the second half agree with each other to 1%.
    const double a = *lv.records[40].left - *lv.records[60].left;
    const double b = *lv.records[60].left - *lv.records[80].left;
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(a / b, 1.0, 0.01);
}

TEST(DelayedFieldProperty, ConvergenceOrder) {
    // dx = 0.4 keeps the spatial error dominant, where halving both steps
    // reduces the error against a fine reference by about 5x.
    auto solve = [](double dx, double dt) {
        const auto grid = UniformGrid::span(-30, 30, dx);
        DatumParams p;
        p.mu = 1.0;
        p.B = 5.0;
        DelayedField f(make_initial_datum(DatumKind::FrontLike, p, grid, 0.1, dt, hr()), hr());
        run(f, hr(), 4.0, {});
        return std::vector<double>(f.current().begin(), f.current().end());
    };
    const double dx = 0.4, dt = 0.002;
    const auto ref = solve(dx / 8, dt / 8), a = solve(dx, dt), b = solve(dx / 2, dt / 2);
    double ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ea = std::max(ea, std::abs(a[i] - ref[8 * i]));
    for (std::size_t i = 0; i < b.size(); ++i) eb = std::max(eb, std::abs(b[i] - ref[4 * i]));
    EXPECT_GE(ea / eb, 3.0);
}
