#pragma once

// Cauchy problem u_t = u_xx - u + g(u(t - h, x)), u = w0 on [-h, 0], on a
// truncated line with equilibrium Dirichlet ends. Each step is backward Euler
// for u_xx - u with the delayed reaction as a known source (method of steps).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pushfront/errors.hpp"
#include "pushfront/grid.hpp"
#include "pushfront/model.hpp"
#include "pushfront/profile.hpp"

namespace pushfront {

enum class DatumKind { FrontLike, Heaviside, CompactBump, PerturbedProfile };

inline const char* to_string(DatumKind k) {
    switch (k) {
        case DatumKind::FrontLike: return "front_like";
        case DatumKind::Heaviside: return "heaviside";
        case DatumKind::CompactBump: return "compact_bump";
        case DatumKind::PerturbedProfile: return "perturbed_profile";
    }
    return "?";
}

inline DatumKind parse_datum_kind(const std::string& s) {
    for (auto k : {DatumKind::FrontLike, DatumKind::Heaviside, DatumKind::CompactBump, DatumKind::PerturbedProfile})
        if (s == to_string(k)) return k;
    throw InvalidArgument("unknown datum kind '" + s + "'");
}

struct DatumParams {
    // Declared (IC) constants: w0 <= A e^{mu x} everywhere, w0 > kappa - sigma for x >= B.
    // front_like uses mu and B for its shape and derives A = kappa e^{-mu B}.
    double A = 1.0;
    double mu = 1.0;
    double B = 0.0;
    double sigma = 0.5;
    // compact_bump: C-infinity bump of the given height on [center - width, center + width]
    double center = 0.0;
    double width = 10.0;
    double height = -1.0;  // negative means kappa
    // perturbed_profile: phi(x + c s + shift) + epsilon * eta_lambda(x + c s) * r(x), r in [-1, 1]
    std::shared_ptr<const WaveProfile> profile;
    double shift = 0.0;
    double epsilon = 0.0;
    double lambda = 0.0;  // 0 drops the eta weight
    std::uint64_t seed = 12345;
};

/// Sampled history w0(s_k, x_i), s_k = -h + k dt, k = 0..m (oldest first).
struct InitialDatum {
    DatumKind kind = DatumKind::Heaviside;
    double A = 1.0, mu = 1.0, B = 0.0, sigma = 0.5;
    double kappa = 1.0;
    UniformGrid grid;
    double h = 0.0;
    double dt = 0.01;
    std::vector<std::vector<double>> history;
    double left_value = 0.0;
    double right_value = 0.0;
};

/// Largest admissible step: min(h/ceil(h/0.01) or 0.01, 0.9/L_g).
inline double max_time_step(double h, const BirthFunction& g) {
    const double base = h > 0.0 ? h / std::ceil(h / 0.01 - 1e-12) : 0.01;
    return std::min(base, 0.9 / g.lipschitz());
}

/// Number of steps per delay; throws unless dt divides h.
inline std::size_t lag_steps(double h, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (h == 0.0) return 0;
    const double r = h / dt;
    const double m = std::round(r);
    if (m < 1.0 || std::abs(r - m) > 1e-9 * std::max(1.0, r)) throw InvalidArgument("dt must divide h");
    return static_cast<std::size_t>(m);
}

namespace detail {

inline double bump(double r) { return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }

// Smooth pseudo-random r(x) in [-1, 1]: average of four sines with seeded
// wavenumbers and phases.
struct SineNoise {
    double k[4], p[4];
    explicit SineNoise(std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> wave(0.2, 2.0), phase(0.0, 6.283185307179586);
        for (int j = 0; j < 4; ++j) { k[j] = wave(rng); p[j] = phase(rng); }
    }
    double operator()(double x) const {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += std::sin(k[j] * x + p[j]);
        return 0.25 * s;
    }
};

}  // namespace detail

inline InitialDatum make_initial_datum(DatumKind kind, const DatumParams& p, const UniformGrid& grid, double h,
                                       double dt, const BirthFunction& g) {
    if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
    const std::size_t m = lag_steps(h, dt);
    const double kappa = g.kappa();
    InitialDatum d;
    d.kind = kind;
    d.kappa = kappa;
    d.grid = grid;
    d.h = h;
    d.dt = dt;
    d.A = p.A;
    d.mu = p.mu;
    d.B = p.B;
    d.sigma = p.sigma;
    if (!(p.sigma > 0.0 && p.sigma < kappa)) throw InvalidArgument("sigma must lie in (0, kappa)");
    std::function<double(double, double)> w;  // (s, x)

    switch (kind) {
        case DatumKind::FrontLike:
            if (!(p.mu > 0.0)) throw InvalidArgument("front_like needs mu > 0");
            d.A = kappa * std::exp(-p.mu * p.B);
            w = [=](double, double x) { return kappa * std::min(1.0, std::exp(p.mu * (x - p.B))); };
            d.right_value = kappa;
            break;
        case DatumKind::Heaviside:
            d.A = kappa;
            d.B = 0.0;
            w = [=](double, double x) { return x >= 0.0 ? kappa : 0.0; };
            d.right_value = kappa;
            break;
        case DatumKind::CompactBump: {
            const double height = p.height < 0.0 ? kappa : p.height;
            if (!(p.width > 0.0)) throw InvalidArgument("compact_bump needs width > 0");
            if (!(height > 0.0 && height <= kappa)) throw InvalidArgument("compact_bump needs 0 < height <= kappa");
            if (p.center - p.width <= grid.x_min || p.center + p.width >= grid.x_max())
                throw InvalidArgument("compact_bump support must lie inside the grid");
            w = [=](double, double x) { return height * detail::bump((x - p.center) / p.width); };
            d.right_value = 0.0;
            break;
        }
        case DatumKind::PerturbedProfile: {
            if (!p.profile) throw InvalidArgument("perturbed_profile needs a profile");
            if (!(p.epsilon >= 0.0)) throw InvalidArgument("perturbed_profile needs epsilon >= 0");
            auto phi = p.profile;
            const double c = phi->c, lam = p.lambda;
            const detail::SineNoise noise(p.seed);
            w = [=](double s, double x) {
                const double z = x + c * s;
                double v = phi->evaluate(z + p.shift);
                if (p.epsilon > 0.0) {
                    const double weight = lam > 0.0 ? std::min(1.0, std::exp(lam * z)) : 1.0;
                    v += p.epsilon * weight * noise(x);
                }
                return std::clamp(v, 0.0, kappa);
            };
            d.right_value = kappa;
            break;
        }
    }

    d.history.assign(m + 1, std::vector<double>(grid.n));
    for (std::size_t k = 0; k <= m; ++k) {
        const double s = -h + static_cast<double>(k) * dt;
        for (std::size_t i = 0; i < grid.n; ++i) d.history[k][i] = w(s, grid[i]);
    }
    return d;
}

struct ICReport {
    bool ic1 = false;
    bool ic2 = false;
    bool ic3 = false;
    bool mu_admissible = false;  // mu > lambda1(c_*)
    double ic1_excess = 0.0;     // worst excursion outside [0, kappa]
    double ic2_ratio = 0.0;      // max w / (A e^{mu x})
    double ic3_margin = 0.0;     // min over x >= B of w - (kappa - sigma)
    std::optional<double> fitted_left_rate;
};

/// Checks (IC1)-(IC3) on the sampled history with the declared constants.
inline ICReport validate_IC(const InitialDatum& d, double lambda1_cstar) {
    ICReport r;
    const double kappa = d.kappa;
    double lo = 0.0, ratio = 0.0, margin = std::numeric_limits<double>::infinity();
    bool any_right = false;
    for (const auto& snap : d.history) {
        for (std::size_t i = 0; i < d.grid.n; ++i) {
            const double x = d.grid[i], v = snap[i];
            lo = std::max({lo, -v, v - kappa});
            ratio = std::max(ratio, v / (d.A * std::exp(d.mu * x)));
            if (x >= d.B) {
                any_right = true;
                margin = std::min(margin, v - (kappa - d.sigma));
            }
        }
    }
    r.ic1_excess = lo;
    r.ic1 = lo <= 1e-12;
    r.mu_admissible = d.mu > lambda1_cstar;
    r.ic2_ratio = ratio;
    r.ic2 = r.mu_admissible && ratio <= 1.0 + 1e-12;
    r.ic3_margin = any_right ? margin : -kappa;
    r.ic3 = any_right && margin > 0.0;

    // Slope of log w over the leftmost positive stretch of the newest snapshot.
    const auto& w0 = d.history.back();
    std::size_t i0 = 0;
    while (i0 < d.grid.n && !(w0[i0] > 0.0)) ++i0;
    const std::size_t len = std::min<std::size_t>(d.grid.n / 10, d.grid.n - i0);
    if (len >= 5) {
        std::vector<double> x(len), y(len);
        for (std::size_t k = 0; k < len; ++k) { x[k] = d.grid[i0 + k]; y[k] = std::log(std::max(w0[i0 + k], 1e-300)); }
        bool positive = true;
        for (std::size_t k = 0; k < len; ++k) positive = positive && w0[i0 + k] > 0.0;
        if (positive) r.fitted_left_rate = detail::linear_fit(x, y)[0];
    }
    if (r.fitted_left_rate && *r.fitted_left_rate > 0.0 && *r.fitted_left_rate <= lambda1_cstar) r.ic2 = false;
    return r;
}

/// Solution state on [t - h, t]: a ring of m + 1 snapshots, m = h/dt.
class DelayedField {
public:
    DelayedField(const InitialDatum& d, const BirthFunction& g)
        : grid_(d.grid), dt_(d.dt), h_(d.h), kappa_(g.kappa()), left_(d.left_value), right_(d.right_value) {
        if (grid_.n < 3) throw InvalidArgument("simulation grid too small");
        m_ = lag_steps(h_, dt_);
        const double cap = max_time_step(h_, g);
        if (dt_ > cap * (1.0 + 1e-12))
            throw InvalidArgument("dt = " + std::to_string(dt_) + " exceeds the stable limit " + std::to_string(cap));
        for (double b : {left_, right_})
            if (b != 0.0 && b != kappa_) throw InvalidArgument("boundary values must be equilibria (0 or kappa)");
        if (d.history.size() != m_ + 1) throw InvalidArgument("history length must be h/dt + 1");
        ring_ = d.history;
        for (auto& s : ring_) {
            if (s.size() != grid_.n) throw InvalidArgument("history snapshot size does not match grid");
            for (double v : s)
                if (v < -1e-12 || v > kappa_ + 1e-12) throw InvalidArgument("history leaves [0, kappa]");
            s.front() = left_;
            s.back() = right_;
        }
        head_ = m_;
        work_.resize(grid_.n);
        // Constant tridiagonal factors for (1 + dt + 2r) u_i - r (u_{i-1} + u_{i+1}).
        const double r = dt_ / (grid_.dx * grid_.dx);
        diag_ = 1.0 + dt_ + 2.0 * r;
        off_ = -r;
        cprime_.assign(grid_.n, 0.0);
        inv_denom_.assign(grid_.n, 0.0);
        double cp = 0.0;
        for (std::size_t i = 1; i + 1 < grid_.n; ++i) {
            const double denom = diag_ - off_ * cp;
            inv_denom_[i] = 1.0 / denom;
            cp = off_ / denom;
            cprime_[i] = cp;
        }
    }

    const UniformGrid& grid() const noexcept { return grid_; }
    double dt() const noexcept { return dt_; }
    double h() const noexcept { return h_; }
    double kappa() const noexcept { return kappa_; }
    double t() const noexcept { return static_cast<double>(steps_) * dt_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t lag() const noexcept { return m_; }
    std::size_t history_length() const noexcept { return ring_.size(); }
    std::pair<double, double> boundary() const noexcept { return {left_, right_}; }

    std::span<const double> current() const { return ring_[head_]; }

    /// Snapshot k steps back (0 = current, lag() = t - h).
    std::span<const double> back(std::size_t k) const {
        if (k > m_) throw InvalidArgument("history reaches back only h/dt steps");
        return ring_[(head_ + ring_.size() - k) % ring_.size()];
    }

    /// One backward-Euler step with g(u(t - h)) as explicit source.
    void step(const BirthFunction& g) {
        const std::size_t n = grid_.n;
        const auto& now = ring_[head_];
        const auto& lagged = ring_[(head_ + 1) % ring_.size()];  // oldest slot is t - h
        // Forward sweep of the Thomas algorithm on the interior nodes.
        double prev = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double rhs = now[i] + dt_ * g(lagged[i]);
            if (i == 1) rhs -= off_ * left_;
            if (i == n - 2) rhs -= off_ * right_;
            prev = (rhs - off_ * prev) * inv_denom_[i];
            work_[i] = prev;
        }
        for (std::size_t i = n - 2; i-- > 1;) work_[i] -= cprime_[i] * work_[i + 1];
        work_[0] = left_;
        work_[n - 1] = right_;

        for (std::size_t i = 1; i + 1 < n; ++i) {
            double& v = work_[i];
            if (v < 0.0 || v > kappa_) {
                const double over = v < 0.0 ? -v : v - kappa_;
                if (over > 1e-10)
                    throw SchemeInstability("step left [0, kappa] by " + std::to_string(over) + " at t = " +
                                            std::to_string(t()) + "; reduce dt");
                v = std::clamp(v, 0.0, kappa_);
            }
        }
        head_ = (head_ + 1) % ring_.size();  // overwrite the oldest snapshot
        ring_[head_].swap(work_);
        if (work_.size() != n) work_.resize(n);
        ++steps_;
    }

private:
    UniformGrid grid_;
    double dt_, h_, kappa_, left_, right_;
    std::size_t m_ = 0, head_ = 0, steps_ = 0;
    std::vector<std::vector<double>> ring_;
    std::vector<double> work_, cprime_, inv_denom_;
    double diag_ = 1.0, off_ = 0.0;
};

/// Callback invoked at t = 0 and every `cadence` time units thereafter.
struct Observer {
    std::string name;
    double cadence = 1.0;
    std::function<void(const DelayedField&)> record;
};

struct ObservationLog {
    double t_final = 0.0;
    std::size_t steps = 0;
    std::vector<std::pair<std::string, std::vector<double>>> calls;  // observation times per observer
};

/// Advances to time T, calling each observer on its cadence. A cadence must be
/// a whole number of steps.
inline ObservationLog run(DelayedField& field, const BirthFunction& g, double T, std::vector<Observer> observers) {
    if (!(T >= 0.0)) throw InvalidArgument("final time must be nonnegative");
    const double dt = field.dt();
    std::vector<std::size_t> every;
    ObservationLog log;
    for (const auto& o : observers) {
        const double r = o.cadence / dt;
        const double k = std::round(r);
        if (!(o.cadence > 0.0) || k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, r))
            throw InvalidArgument("dt must divide the cadence of observer '" + o.name + "'");
        every.push_back(static_cast<std::size_t>(k));
        log.calls.push_back({o.name, {}});
    }
    const auto total = static_cast<std::size_t>(std::llround(T / dt));
    if (std::abs(static_cast<double>(total) * dt - T) > 1e-9 * std::max(1.0, T))
        throw InvalidArgument("dt must divide the final time");
    auto fire = [&](std::size_t local) {
        for (std::size_t j = 0; j < observers.size(); ++j)
            if (local % every[j] == 0) {
                observers[j].record(field);
                log.calls[j].second.push_back(field.t());
            }
    };
    fire(0);
    for (std::size_t s = 1; s <= total; ++s) {
        field.step(g);
        fire(s);
    }
    log.t_final = field.t();
    log.steps = total;
    return log;
}

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
};

/// Keeps full copies of the current field.
class SnapshotRecorder {
public:
    std::vector<Snapshot> snapshots;
    Observer observer(double cadence, std::string name = "snapshots") {
        return {std::move(name), cadence, [this](const DelayedField& f) {
                    snapshots.push_back({f.t(), std::vector<double>(f.current().begin(), f.current().end())});
                }};
    }
};

struct LevelRecord {
    double t = 0.0;
    std::optional<double> left, right;
};

/// Outermost crossings of `level` from each end of the grid.
class LevelSetRecorder {
public:
    explicit LevelSetRecorder(double level) : level_(level) {}
    std::vector<LevelRecord> records;
    double level() const noexcept { return level_; }
    Observer observer(double cadence, std::string name = "level_sets") {
        return {std::move(name), cadence, [this](const DelayedField& f) {
                    records.push_back({f.t(), level_crossing(f.grid(), f.current(), level_, true),
                                       level_crossing(f.grid(), f.current(), level_, false)});
                }};
    }

private:
    double level_;
};

struct PointRecord {
    double t = 0.0;
    double u = 0.0;
};

/// u(t, x0) by interpolation.
class PointRecorder {
public:
    explicit PointRecorder(double x0) : x0_(x0) {}
    std::vector<PointRecord> records;
    Observer observer(double cadence, std::string name = "point") {
        return {std::move(name), cadence, [this](const DelayedField& f) {
                    const auto v = interpolate(f.grid(), f.current(), x0_);
                    if (!v) throw InvalidArgument("observation point outside the grid");
                    records.push_back({f.t(), *v});
                }};
    }

private:
    double x0_;
};

}  // namespace pushfront
