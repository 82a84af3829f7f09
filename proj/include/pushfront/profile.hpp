#pragma once

// Traveling-front profiles phi(x + c t) as fixed points of the integral operator
//
//   (T phi)(z) = 1/(xi2 - xi1) * [ int_{-inf}^z e^{xi1 (z-s)} g(phi(s - c h)) ds
//                                 + int_z^{inf}  e^{xi2 (z-s)} g(phi(s - c h)) ds ]
//
// with xi1 < 0 < xi2 the roots of z^2 - c z - 1 = 0, plus the minimal-speed
// search and the pushed / pulled classification built on top of it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pushfront/errors.hpp"
#include "pushfront/grid.hpp"
#include "pushfront/model.hpp"
#include "pushfront/spectral.hpp"

namespace pushfront {

enum class Side { Left, Right };

/// Least-squares exponential fit of a profile tail. Left: phi ~ amplitude
/// e^{rate z}; right: kappa - phi ~ amplitude e^{-rate z}.
struct TailFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;  // RMS deviation of the log data from the line
};

struct WaveProfile {
    double c = 0.0;
    double h = 0.0;
    double kappa = 1.0;
    UniformGrid grid;
    std::vector<double> values;
    TailFit tail_left;
    TailFit tail_right;
    bool normalized = false;
    double residual = 0.0;  // sup |T phi - phi|
    std::size_t iterations = 0;

    /// phi(z) with exponential continuation beyond the grid ends.
    double evaluate(double z) const {
        if (z < grid.x_min) {
            const double rate = tail_left.rate > 0 ? tail_left.rate : 0.0;
            return values.front() * std::exp(rate * (z - grid.x_min));
        }
        if (z > grid.x_max()) {
            const double rate = tail_right.rate > 0 ? tail_right.rate : 0.0;
            return kappa - (kappa - values.back()) * std::exp(-rate * (z - grid.x_max()));
        }
        return *interpolate(grid, values, z);
    }

    /// Centered difference of evaluate() with step dz/2.
    double slope(double z) const {
        const double d = 0.5 * grid.dx;
        return (evaluate(z + d) - evaluate(z - d)) / (2.0 * d);
    }

    double max_slope() const {
        double m = 0.0;
        for (std::size_t i = 1; i < values.size(); ++i)
            m = std::max(m, std::abs(values[i] - values[i - 1]) / grid.dx);
        return m;
    }
};

struct NoFront {
    enum class Collapse { ToZero, ToKappa };
    double c = 0.0;
    Collapse collapse = Collapse::ToKappa;
    double drift_per_iteration = 0.0;  // displacement of the kappa/2 level under T
    std::size_t iterations = 0;
};

using ProfileResult = std::variant<WaveProfile, NoFront>;

struct ProfileOptions {
    std::optional<double> half_width;   // left extent L; default max(40, 25/lambda_ref) + c h
    std::optional<double> right_width;  // right extent; default max(40, 20/|lambda3|)
    double dz = 0.05;
    double tol = 1e-8;
    std::size_t max_iterations = 400000;
    double tail_window = 0.1;
};

namespace detail {

inline std::vector<double> linear_fit(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (icpt + slope * x[i]);
        ss += r * r;
    }
    return {slope, icpt, std::sqrt(ss / n)};
}

// Decay rate used to size the grid: lambda1(c) above c_#, else the minimizer
// of chi(., c) (the real part scale of the complex pair).
inline double reference_rate(double c, double gp0, double h) {
    const double zm = chi_argmin(c, gp0, h);
    if (pushfront::chi(zm, c, gp0, h) < 0.0) return decay_rates(c, gp0, h).lambda1;
    return zm;
}

}  // namespace detail

/// Exponential fit over the outermost `window` fraction of the grid.
inline TailFit tail_fit(const WaveProfile& p, Side side, double window = 0.1) {
    const std::size_t n = p.values.size();
    const auto m = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(window * static_cast<double>(n))));
    if (m > n) throw InvalidArgument("tail window larger than the grid");
    std::vector<double> x(m), y(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = side == Side::Left ? k : n - m + k;
        const double arg = side == Side::Left ? p.values[i] : p.kappa - p.values[i];
        if (!(arg > 0.0)) throw InvalidArgument("nonpositive log argument in tail window");
        x[k] = p.grid[i];
        y[k] = std::log(arg);
    }
    const auto f = detail::linear_fit(x, y);
    if (side == Side::Left) return {f[0], std::exp(f[1]), f[2]};
    return {-f[0], std::exp(f[1]), f[2]};
}

/// Continuation of an iterate to the left of the grid, phi(z_0 + s) for s <= 0,
/// as alpha f1(s) + beta f2(s) with f1 = e^{l1 s} and f2 the divided difference
/// (e^{l2 s} - e^{l1 s})/(l2 - l1). beta = 0 gives a single exponential.
struct LeftTail {
    double l1 = 1.0, l2 = 1.0;
    double alpha = 0.0, beta = 0.0;

    static double f2(double l1, double l2, double s) {
        if (std::abs(l2 - l1) < 1e-9) return s * std::exp(l1 * s);
        return (std::exp(l2 * s) - std::exp(l1 * s)) / (l2 - l1);
    }
    double value(double s) const { return alpha * std::exp(l1 * s) + beta * f2(l1, l2, s); }
};

/// Discretized integral operator for fixed (c, h, g) on a fixed grid. Source
/// g(phi(s - c h)) is piecewise linear; the exponential kernels are integrated
/// exactly per cell, so every weight is positive and T is order preserving.
///
/// Above the discrete c_# the left end is closed with the two discrete decay
/// modes fitted to the iterate, which makes the boundary transparent for the
/// linearized tail: a finite grid then has the same fronts as the whole line.
class ProfileOperator {
public:
    /// Transparent: two-mode closure above the discrete c_#, fitted rate below.
    /// Steep: always the single fitted rate, which drains any slow mode and so
    /// only admits fronts with the fast tail.
    /// Slow: pure discrete lambda1 continuation. Near the double root the
    /// two-mode fit divides by lambda2 - lambda1 and can sustain a drifting
    /// slow-tailed state; this one cannot.
    enum class Closure { Transparent, Steep, Slow };

    ProfileOperator(const BirthFunction& g, double c, double h, UniformGrid grid,
                    Closure closure = Closure::Transparent)
        : g_(&g), c_(c), h_(h), grid_(grid) {
        if (!(c > 0.0)) throw InvalidArgument("wave speed must be positive");
        if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
        if (grid.n < 8) throw InvalidArgument("profile grid too small");
        const auto [xi1, xi2] = quadratic_roots(c);
        xi1_ = xi1;
        xi2_ = xi2;
        const double d = grid.dx;
        auto weights = [d](double xi, double& e, double& w_near, double& w_far) {
            // int_0^d e^{xi t} dt and int_0^d t e^{xi t} dt
            const double w0 = std::expm1(xi * d) / xi;
            const double w1 = d * std::exp(xi * d) / xi - std::expm1(xi * d) / (xi * xi);
            e = std::exp(xi * d);
            w_far = w1 / d;
            w_near = w0 - w_far;
        };
        weights(xi1_, e1_, a_new_, a_old_);
        weights(-xi2_, e2_, b_new_, b_old_);
        if (closure != Closure::Steep) modes_ = find_discrete_rates();
        slow_ = closure == Closure::Slow;
        if (modes_) {
            const double span = std::max(1.0, 3.0 / (modes_->lambda2 - modes_->lambda1));
            window_ = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(span / d)), 10, grid.n / 4);
        }
    }

    double c() const noexcept { return c_; }
    double h() const noexcept { return h_; }
    const UniformGrid& grid() const noexcept { return grid_; }
    std::pair<double, double> xi() const noexcept { return {xi1_, xi2_}; }

    /// Grid-exact growth factor of T linearized at 0 on phi_i = e^{mu z_i}.
    /// Its roots are the discrete counterparts of lambda1 and lambda2.
    double discrete_symbol(double mu) const {
        const double q = std::exp(-mu * grid_.dx);
        return g_->gp0() * lag_factor(mu) * (left_gain(q) + right_gain(q)) / (xi2_ - xi1_);
    }

    /// Discrete decay rates; nullopt at or below the discrete c_#.
    std::optional<DecayPair> discrete_rates() const { return modes_; }

    /// Left continuation of phi used by apply() and by the pinning shift.
    LeftTail left_tail(std::span<const double> phi) const {
        // Data flat at the left end (equilibria) continue as constants.
        if (!(phi[std::min(window_, phi.size() - 1)] > phi[0])) return {0.0, 0.0, phi[0], 0.0};
        if (modes_ && slow_) return {modes_->lambda1, modes_->lambda1, phi[0], 0.0};
        if (modes_) {
            const double l1 = modes_->lambda1, l2 = modes_->lambda2;
            const double W = static_cast<double>(window_) * grid_.dx;
            const double f2 = LeftTail::f2(l1, l2, W);
            return {l1, l2, phi[0], (phi[window_] - phi[0] * std::exp(l1 * W)) / f2};
        }
        const std::size_t k = std::min<std::size_t>(10, phi.size() / 4);
        double mu = 1.0;
        if (phi[0] > 0.0 && phi[k] > 0.0)
            mu = std::clamp(std::log(phi[k] / phi[0]) / (static_cast<double>(k) * grid_.dx), 1e-3, 50.0);
        return {mu, mu, phi[0], 0.0};
    }

    /// Rate at which phi approaches kappa beyond the right end.
    double right_rate(std::span<const double> phi) const {
        const std::size_t n = phi.size(), k = std::min<std::size_t>(10, n / 4);
        const double kappa = g_->kappa();
        const double a = kappa - phi[n - 1 - k], b = kappa - phi[n - 1];
        if (!(a > 0.0) || !(b > 0.0)) return 0.0;
        return std::clamp(std::log(a / b) / (static_cast<double>(k) * grid_.dx), 0.0, 50.0);
    }

    void apply(std::span<const double> phi, std::span<double> out) const {
        const std::size_t n = grid_.n;
        if (phi.size() != n || out.size() != n) throw InvalidArgument("profile size does not match grid");
        const LeftTail tail = left_tail(phi);
        const double rho = right_rate(phi);
        const double lag = c_ * h_;
        const double kappa = g_->kappa();
        const double d = grid_.dx;

        src_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid_[i] - lag;
            double v;
            if (x < grid_.x_min) {
                // Interpolate between virtual nodes left of the grid.
                const double s = (x - grid_.x_min) / d;
                const double k = std::floor(s), t = s - k;
                v = (1.0 - t) * tail.value(k * d) + t * tail.value((k + 1.0) * d);
            } else {
                v = *interpolate(grid_, phi, x);
            }
            src_[i] = (*g_)(v);
        }

        // Left kernel, marching right; A_0 sums the virtual sources exactly.
        left_.resize(n);
        left_[0] = left_closure(tail, src_[0]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            left_[i + 1] = e1_ * left_[i] + a_new_ * src_[i + 1] + a_old_ * src_[i];

        // Right kernel, marching left; S continued toward kappa at rate rho.
        const double sN = src_[n - 1];
        double right = kappa / xi2_ - (kappa - sN) * right_gain(std::exp(rho * d));
        const double inv = 1.0 / (xi2_ - xi1_);
        out[n - 1] = (left_[n - 1] + right) * inv;
        for (std::size_t i = n - 1; i-- > 0;) {
            right = e2_ * right + b_new_ * src_[i] + b_old_ * src_[i + 1];
            out[i] = (left_[i] + right) * inv;
        }
    }

    std::vector<double> apply(std::span<const double> phi) const {
        std::vector<double> out(phi.size());
        apply(phi, out);
        return out;
    }

private:
    // Sum of the left recursion over sources S_{i-k} = S_i q^k, k >= 0.
    double left_gain(double q) const { return (a_new_ + a_old_ * q) / (1.0 - e1_ * q); }
    // Same for the right recursion over S_{i+k} = S_i q^{-k}.
    double right_gain(double q) const { return (b_new_ + b_old_ / q) / (1.0 - e2_ / q); }
    // Linear interpolation of e^{-mu c h} between the bracketing nodes.
    double lag_factor(double mu) const {
        const double s = c_ * h_ / grid_.dx, j = std::floor(s), t = s - j;
        return (1.0 - t) * std::exp(-mu * j * grid_.dx) + t * std::exp(-mu * (j + 1.0) * grid_.dx);
    }

    // A_0 for virtual sources proportional to the tail modes; g is linear there.
    double left_closure(const LeftTail& tail, double s0) const {
        const double d = grid_.dx;
        auto G = [&](double l) { return left_gain(std::exp(-l * d)); };
        if (tail.beta == 0.0 || !(tail.alpha != 0.0)) return s0 * G(tail.l1);
        double dG;
        if (std::abs(tail.l2 - tail.l1) < 1e-9) dG = (G(tail.l1 + 1e-6) - G(tail.l1 - 1e-6)) / 2e-6;
        else dG = (G(tail.l2) - G(tail.l1)) / (tail.l2 - tail.l1);
        return s0 / tail.alpha * (tail.alpha * G(tail.l1) + tail.beta * dG);
    }

    std::optional<DecayPair> find_discrete_rates() const {
        const double zm = detail::chi_argmin(c_, g_->gp0(), h_);
        const double top = xi2_ * (1.0 - 1e-12);
        // Golden-section minimum of the (log-convex) symbol near zm.
        double a = 0.25 * zm, b = std::min(2.0 * zm, top);
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - r * (b - a), x2 = a + r * (b - a);
        double f1 = discrete_symbol(x1), f2 = discrete_symbol(x2);
        for (int k = 0; k < 200 && b - a > 1e-13; ++k) {
            if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - r * (b - a); f1 = discrete_symbol(x1); }
            else { a = x1; x1 = x2; f1 = f2; x2 = a + r * (b - a); f2 = discrete_symbol(x2); }
        }
        const double zmin = 0.5 * (a + b);
        if (!(discrete_symbol(zmin) < 1.0)) return std::nullopt;
        auto root = [&](double lo, double hi) {
            const bool rising = discrete_symbol(hi) > discrete_symbol(lo);
            for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
                const double m = 0.5 * (lo + hi);
                if ((discrete_symbol(m) > 1.0) == rising) hi = m; else lo = m;
            }
            return 0.5 * (lo + hi);
        };
        double up = zmin;
        while (discrete_symbol(up) < 1.0) {
            up = std::min(top, up + std::max(zmin, 0.1));
            if (up >= top) return std::nullopt;
        }
        return DecayPair{root(0.0, zmin), root(zmin, up)};
    }

    const BirthFunction* g_;  // pointer keeps the operator assignable
    double c_, h_;
    UniformGrid grid_;
    double xi1_ = 0, xi2_ = 0;
    double e1_ = 0, a_new_ = 0, a_old_ = 0;
    double e2_ = 0, b_new_ = 0, b_old_ = 0;
    std::optional<DecayPair> modes_;
    std::size_t window_ = 10;
    bool slow_ = false;
    mutable std::vector<double> src_, left_;
};

/// Smallest half-width for which both profile tails are resolved at speed c.
inline double required_half_width(double c, double h, const BirthFunction& g) {
    return 10.0 / detail::reference_rate(c, g.gp0(), h) + c * h;
}

/// Wide enough that the left boundary value sits far below a 1e-8 residual;
/// non-minimal fronts otherwise stall at a residual proportional to phi(-L).
inline double default_half_width(double c, double h, const BirthFunction& g) {
    return std::max(40.0, 25.0 / detail::reference_rate(c, g.gp0(), h)) + c * h;
}

/// Right extent: kappa - phi must stay well above round-off at the right end.
inline double default_right_width(double c, double h, const BirthFunction& g) {
    return std::max(40.0, 20.0 / std::abs(lambda3(c, g.gpk(), h)));
}

/// Applies the operator once; throws when the grid is too narrow for c.
inline std::vector<double> profile_operator_apply(std::span<const double> phi, const UniformGrid& grid, double c,
                                                  double h, const BirthFunction& g) {
    const double need = required_half_width(c, h, g);
    if (-grid.x_min < need)
        throw InvalidArgument("profile grid too narrow: need half-width L >= " + std::to_string(need));
    return ProfileOperator(g, c, h, grid).apply(phi);
}

namespace detail {

// psi(z_i + shift) with the operator's own continuation beyond both ends.
inline void shift_values(const UniformGrid& grid, std::span<const double> in, double shift, double kappa,
                         const LeftTail& left, double right_rate, std::span<double> out) {
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double z = grid[i] + shift;
        if (z < grid.x_min) out[i] = left.value(z - grid.x_min);
        else if (z > grid.x_max()) out[i] = kappa - (kappa - in.back()) * std::exp(-right_rate * (z - grid.x_max()));
        else out[i] = *interpolate(grid, in, z);
    }
}

inline UniformGrid profile_grid(double c, double h, const BirthFunction& g, const ProfileOptions& opt) {
    const double L = opt.half_width.value_or(default_half_width(c, h, g));
    if (L < required_half_width(c, h, g))
        throw InvalidArgument("profile grid too narrow: need half-width L >= " +
                              std::to_string(required_half_width(c, h, g)));
    const double R = opt.right_width.value_or(default_right_width(c, h, g));
    if (!(opt.dz > 0.0) || !(R > 0.0)) throw InvalidArgument("profile grid needs positive dz and right extent");
    const auto left = static_cast<double>(std::ceil(L / opt.dz - 1e-9));
    const auto right = static_cast<double>(std::ceil(R / opt.dz - 1e-9));
    return UniformGrid::span(-left * opt.dz, right * opt.dz, opt.dz);
}

// kappa min(1, e^{lam z}) pinned so that kappa/2 sits at z = 0.
inline std::vector<double> initial_iterate(const UniformGrid& grid, double kappa, double lam) {
    std::vector<double> phi(grid.n), out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) phi[i] = kappa * std::min(1.0, std::exp(lam * grid[i]));
    const double z0 = *level_crossing(grid, phi, 0.5 * kappa, true);
    shift_values(grid, phi, z0, kappa, LeftTail{lam, lam, phi[0], 0.0}, 0.0, out);
    out[grid.nearest(0.0)] = 0.5 * kappa;
    return out;
}

struct PinnedRun {
    enum class Status { Converged, Stationary, Capped };
    Status status = Status::Capped;
    std::vector<double> values;  // pinned iterate; the fixed point when Converged
    double residual = 0.0;       // sup |T phi - phi| of the last unpinned step
    double drift = 0.0;          // kappa/2 displacement of the last step
    std::size_t iterations = 0;
};

// phi <- pin(T phi) until sup|T phi - phi| < tol, or until the pinned shape is
// stationary while T still displaces it (a traveling wave of the iteration).
inline PinnedRun run_pinned(const ProfileOperator& T, double kappa, std::vector<double> phi, double tol,
                            std::size_t max_iterations) {
    const auto& grid = T.grid();
    const std::size_t n = grid.n, mid = grid.nearest(0.0);
    std::vector<double> image(n), next(n);
    PinnedRun run;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        T.apply(phi, image);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(image[i] - phi[i]));
        const auto level = level_crossing(grid, image, 0.5 * kappa, true);
        if (!level) throw Indeterminate("profile iterate lost its kappa/2 crossing");
        const double zstar = *level;
        shift_values(grid, image, zstar, kappa, T.left_tail(image), T.right_rate(image), next);
        next[mid] = 0.5 * kappa;
        run.residual = resid;
        run.drift = zstar;
        run.iterations = it;
        if (resid < tol) {
            // Accept only if the re-pinned iterate itself passes.
            T.apply(next, image);
            double pinned = 0.0;
            for (std::size_t i = 0; i < n; ++i) pinned = std::max(pinned, std::abs(image[i] - next[i]));
            if (pinned < tol) {
                run.status = PinnedRun::Status::Converged;
                run.residual = pinned;
                run.values = std::move(next);
                return run;
            }
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - phi[i]));
        phi.swap(next);
        if (change < 1e-3 * tol && zstar != 0.0) {
            run.status = PinnedRun::Status::Stationary;
            run.values = std::move(phi);
            return run;
        }
    }
    run.status = PinnedRun::Status::Capped;
    run.values = std::move(phi);
    return run;
}

inline WaveProfile make_profile(const ProfileOperator& T, double kappa, std::vector<double> values,
                                std::size_t iterations, double tail_window) {
    WaveProfile p;
    p.c = T.c();
    p.h = T.h();
    p.kappa = kappa;
    p.grid = T.grid();
    p.values = std::move(values);
    const auto check = T.apply(p.values);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        p.residual = std::max(p.residual, std::abs(check[i] - p.values[i]));
    p.normalized = std::abs(p.values[p.grid.nearest(0.0)] - 0.5 * kappa) < 1e-10;
    p.iterations = iterations;
    p.tail_left = tail_fit(p, Side::Left, tail_window);
    p.tail_right = tail_fit(p, Side::Right, tail_window);
    return p;
}

}  // namespace detail

/// Renormalized monotone iteration phi <- pin(T phi), pinning kappa/2 at z = 0.
/// Returns the profile once the fixed-point residual falls below tol. When the
/// pinned iterates become stationary while T keeps displacing the kappa/2
/// level, the unnormalized iteration drifts to 0 or kappa and NoFront is
/// returned with the drift direction.
inline ProfileResult solve_profile(double c, double h, const BirthFunction& g, const ProfileOptions& opt = {}) {
    if (!(c > 0.0)) throw InvalidArgument("wave speed must be positive");
    if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
    const double kappa = g.kappa();
    const auto grid = detail::profile_grid(c, h, g, opt);
    const ProfileOperator T(g, c, h, grid);
    auto run = detail::run_pinned(T, kappa, detail::initial_iterate(grid, kappa, detail::reference_rate(c, g.gp0(), h)),
                                  opt.tol, opt.max_iterations);
    switch (run.status) {
        case detail::PinnedRun::Status::Converged:
            return detail::make_profile(T, kappa, std::move(run.values), run.iterations, opt.tail_window);
        case detail::PinnedRun::Status::Stationary: {
            // A drift comparable to the boundary value is a truncation effect.
            if (std::abs(run.values[0]) * 1e3 > std::abs(run.drift))
                throw Indeterminate("profile residual stalled at " + std::to_string(run.residual) +
                                    " with phi(-L) = " + std::to_string(run.values[0]) + "; increase the half-width");
            NoFront nf;
            nf.c = c;
            nf.collapse = run.drift < 0.0 ? NoFront::Collapse::ToKappa : NoFront::Collapse::ToZero;
            nf.drift_per_iteration = run.drift;
            nf.iterations = run.iterations;
            return nf;
        }
        case detail::PinnedRun::Status::Capped:
            break;
    }
    throw Indeterminate("profile iteration neither converged nor collapsed at c = " + std::to_string(c) +
                        " (residual " + std::to_string(run.residual) + ")");
}

/// Result of the minimal-speed bisection.
struct MinimalSpeed {
    double c_star = 0.0;  // bracket midpoint
    double c_lo = 0.0;    // no front here
    double c_hi = 0.0;    // front here
    std::size_t bisections = 0;
    bool fast_tail = false;  // minimal front found by the steep, speed-matched solve
    WaveProfile front;       // minimal front; front.c in [c_lo, c_hi], or just above c_hi when pulled
};

namespace detail {

// Stationary drift of the steep-closure iteration at speed c: positive above
// the speed of the fast-tailed front, negative below it.
struct SteepProbe {
    PinnedRun run;
    std::optional<ProfileOperator> op;
};

inline SteepProbe steep_probe(double c, double h, const BirthFunction& g, const ProfileOptions& opt,
                              const std::vector<double>* warm,
                              ProfileOperator::Closure closure = ProfileOperator::Closure::Steep) {
    const auto grid = profile_grid(c, h, g, opt);
    SteepProbe p;
    p.op.emplace(g, c, h, grid, closure);
    auto start = warm && warm->size() == grid.n ? *warm
                                                : initial_iterate(grid, g.kappa(), reference_rate(c, g.gp0(), h));
    p.run = run_pinned(*p.op, g.kappa(), std::move(start), opt.tol, opt.max_iterations);
    return p;
}

}  // namespace detail

/// Fast-tailed front with its speed matched by secant on the steep drift,
/// starting from the bracket [lo, hi]. The speed may leave the bracket by tol_c.
inline WaveProfile fast_front(double h, const BirthFunction& g, double lo, double hi, double tol_c,
                              const ProfileOptions& opt = {}, std::vector<double>* warm = nullptr) {
    std::vector<double> own;
    if (!warm) warm = &own;
    auto drift = [&](double c, detail::SteepProbe& s) {
        s = detail::steep_probe(c, h, g, opt, warm->empty() ? nullptr : warm);
        if (s.run.status == detail::PinnedRun::Status::Capped)
            throw NonConvergence("steep profile iteration hit its cap at c = " + std::to_string(c), s.run.residual);
        *warm = s.run.values;
        return s.run.status == detail::PinnedRun::Status::Converged ? 0.0 : s.run.drift;
    };
    auto done = [&](detail::SteepProbe& s) {
        return detail::make_profile(*s.op, g.kappa(), std::move(s.run.values), s.run.iterations, opt.tail_window);
    };
    detail::SteepProbe s;
    double ca = lo, da = drift(ca, s);
    if (s.run.status == detail::PinnedRun::Status::Converged) return done(s);
    double cb = hi, db = drift(cb, s);
    if (s.run.status == detail::PinnedRun::Status::Converged) return done(s);
    for (int k = 0; k < 40; ++k) {
        if (db == da) break;
        const double c = std::clamp(cb - db * (cb - ca) / (db - da), lo - tol_c, hi + tol_c);
        const double d = drift(c, s);
        if (s.run.status == detail::PinnedRun::Status::Converged) return done(s);
        ca = cb; da = db;
        cb = c; db = d;
    }
    throw NonConvergence("speed-matched profile solve did not converge", std::abs(db));
}

/// Bisection for the minimal speed c_* to bracket width tol_c. A front is
/// taken to exist at c when the steep closure no longer invades (the
/// fast-tailed front exists at or below c) or when the transparent solve
/// converges (fronts with the slow tail). The returned front is the fast-tailed
/// fixed point with its speed matched by secant when the steep test decided
/// the upper end, otherwise the converged profile at c_hi.
inline MinimalSpeed minimal_speed(double h, const BirthFunction& g, double tol_c = 1e-4,
                                  const ProfileOptions& opt = {}) {
    if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
    if (!(tol_c > 0.0)) throw InvalidArgument("tol_c must be positive");
    if (!g.monotone()) throw InvalidArgument("minimal_speed requires a monotone birth function");
    const double c_sharp = minimal_linear_speed(g, h).c_sharp;

    std::vector<double> warm;
    struct Verdict {
        bool exists = false;
        bool steep = false;
        std::optional<WaveProfile> profile;
    };
    auto probe = [&](double c) {
        Verdict v;
        auto s = detail::steep_probe(c, h, g, opt, warm.empty() ? nullptr : &warm);
        using St = detail::PinnedRun::Status;
        if (s.run.status != St::Capped) warm = s.run.values;
        if (s.run.status == St::Converged || (s.run.status == St::Stationary && s.run.drift > 0.0)) {
            v.exists = v.steep = true;
            return v;
        }
        // Positive drift under the slow closure: the pinned iterate is a
        // supersolution with a lambda1 tail, so a slow-tailed front exists.
        auto slow = detail::steep_probe(c, h, g, opt, nullptr, ProfileOperator::Closure::Slow);
        if (slow.op->discrete_rates() &&
            (slow.run.status == St::Converged || (slow.run.status == St::Stationary && slow.run.drift > 0.0))) {
            v.exists = true;
            if (slow.run.status == St::Converged)
                v.profile = detail::make_profile(*slow.op, g.kappa(), std::move(slow.run.values), slow.run.iterations,
                                                 opt.tail_window);
            return v;
        }
        try {
            // Slow-tailed fronts converge within a few thousand sweeps; a
            // longer run means no front or one too close to certify.
            ProfileOptions quick = opt;
            quick.max_iterations = std::min<std::size_t>(opt.max_iterations, 20000);
            auto r = solve_profile(c, h, g, quick);
            if (auto* p = std::get_if<WaveProfile>(&r)) {
                v.exists = true;
                v.profile = std::move(*p);
            }
        } catch (const Indeterminate&) {
            // Existence not certified at this speed; treat as no front.
        }
        return v;
    };

    MinimalSpeed out;
    double lo = c_sharp;
    if (probe(lo).exists) {
        lo = 0.95 * c_sharp;
        if (probe(lo).exists) throw Error("front found below 0.95 c_#; minimal speed search aborted");
    }
    double hi = 0.0;
    Verdict at_hi;
    for (double step : {0.05, 0.2, 1.0, 5.0}) {
        at_hi = probe(c_sharp + step);
        if (at_hi.exists) {
            hi = c_sharp + step;
            break;
        }
        lo = c_sharp + step;
    }
    if (hi == 0.0) throw Error("no front found up to c_# + 5");

    while (hi - lo >= tol_c) {
        const double mid = 0.5 * (lo + hi);
        auto v = probe(mid);
        ++out.bisections;
        if (v.exists) { hi = mid; at_hi = std::move(v); } else { lo = mid; }
    }
    out.c_lo = lo;
    out.c_hi = hi;
    out.c_star = 0.5 * (lo + hi);

    if (!at_hi.steep) {
        // Certified by the slow closure only: take the first transparent
        // solution above c_hi.
        for (double dc = 0.0; !at_hi.profile; dc = dc == 0.0 ? tol_c : 2.0 * dc) {
            if (dc > 1.0) throw Error("no converged slow-tailed profile within c_hi + 1");
            try {
                auto r = solve_profile(hi + dc, h, g, opt);
                if (auto* p = std::get_if<WaveProfile>(&r)) at_hi.profile = std::move(*p);
            } catch (const Indeterminate&) {
            }
        }
        out.front = std::move(*at_hi.profile);
        return out;
    }

    out.fast_tail = true;
    out.front = fast_front(h, g, lo, hi, tol_c, opt, &warm);
    return out;
}

enum class FrontKind { Pushed, PulledMinimal, NonMinimal };

inline const char* to_string(FrontKind k) {
    switch (k) {
        case FrontKind::Pushed: return "Pushed";
        case FrontKind::PulledMinimal: return "PulledMinimal";
        case FrontKind::NonMinimal: return "NonMinimal";
    }
    return "?";
}

struct FrontClass {
    FrontKind kind = FrontKind::NonMinimal;
    double c_star = 0.0;
    double c_sharp = 0.0;
    double fitted_rate = 0.0;
    int matched_lambda = 1;  // 1 or 2
};

namespace detail {

inline FrontClass checked_class(const WaveProfile& profile, const SpectralSummary& spec, double c_star,
                                double max_fit_residual) {
    if (!profile.normalized) throw InvalidArgument("classify_front needs a normalized profile");
    if (profile.tail_left.residual > max_fit_residual)
        throw Indeterminate("left tail fit residual " + std::to_string(profile.tail_left.residual) +
                            " above " + std::to_string(max_fit_residual));
    FrontClass fc;
    fc.c_star = c_star;
    fc.c_sharp = spec.c_sharp;
    fc.fitted_rate = profile.tail_left.rate;
    return fc;
}

inline bool rate_near(double rate, double target) { return std::abs(rate - target) <= 0.05 * target; }

// Pushed or pulled for the front at c_*.
inline FrontClass minimal_class(FrontClass fc, const SpectralSummary& spec, double margin) {
    const double gap = fc.c_star - spec.c_sharp;
    if (std::abs(gap) <= margin) {
        fc.kind = FrontKind::PulledMinimal;
        fc.matched_lambda = 1;
        return fc;
    }
    if (gap > margin) {
        const double l2 = spec.decay_rates(fc.c_star).lambda2;
        if (rate_near(fc.fitted_rate, l2)) {
            fc.kind = FrontKind::Pushed;
            fc.matched_lambda = 2;
            return fc;
        }
        throw Indeterminate("minimal front tail " + std::to_string(fc.fitted_rate) +
                            " does not match lambda2(c_*) = " + std::to_string(l2));
    }
    throw Indeterminate("c_* lies below c_# by more than the bisection margin");
}

}  // namespace detail

/// Pushed / pulled / non-minimal from the left tail rate of a converged profile.
/// The margin 10 tol_c keeps bisection uncertainty from flipping the verdict.
inline FrontClass classify_front(const WaveProfile& profile, const SpectralSummary& spec, double c_star,
                                 double tol_c, double max_fit_residual = 0.05) {
    auto fc = detail::checked_class(profile, spec, c_star, max_fit_residual);
    const double margin = 10.0 * tol_c;
    auto near = detail::rate_near;

    if (profile.c > c_star + margin) {
        const double l1 = spec.decay_rates(profile.c).lambda1;
        if (!near(fc.fitted_rate, l1))
            throw Indeterminate("non-minimal profile tail " + std::to_string(fc.fitted_rate) +
                                " does not match lambda1 = " + std::to_string(l1));
        fc.kind = FrontKind::NonMinimal;
        fc.matched_lambda = 1;
        return fc;
    }
    return detail::minimal_class(fc, spec, margin);
}

/// The bisection's own front is minimal by construction, even when a pulled
/// front had to be taken slightly above c_hi.
inline FrontClass classify_front(const MinimalSpeed& ms, const SpectralSummary& spec, double tol_c,
                                 double max_fit_residual = 0.05) {
    return detail::minimal_class(detail::checked_class(ms.front, spec, ms.c_star, max_fit_residual), spec,
                                 10.0 * tol_c);
}

struct SweepRow {
    double h = 0.0;
    double c_sharp = 0.0;
    std::optional<double> c_star;
    std::optional<FrontKind> kind;
    double fitted_rate = 0.0;
    std::string error;  // empty when the row completed
};

/// Spectral data, minimal speed and classification for each delay.
inline std::vector<SweepRow> c_star_sweep(const std::vector<double>& h_values, const BirthFunction& g,
                                          double tol_c = 1e-4, const ProfileOptions& opt = {}) {
    for (double h : h_values)
        if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("h must be nonnegative");
    std::vector<SweepRow> rows;
    for (double h : h_values) {
        SweepRow row;
        row.h = h;
        try {
            const auto spec = minimal_linear_speed(g, h);
            row.c_sharp = spec.c_sharp;
            const auto ms = minimal_speed(h, g, tol_c, opt);
            row.c_star = ms.c_star;
            row.fitted_rate = ms.front.tail_left.rate;
            row.kind = classify_front(ms, spec, tol_c).kind;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pushfront
