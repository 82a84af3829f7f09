#pragma once

// Weighted-norm comparison of simulated fields with shifted fronts, envelope
// (sub/super-solution) checks and asymptotic fits.
//
// Frame convention: z = x + c t, w(t, z) = u(t, z - c t); fronts are phi(z + s).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pushfront/errors.hpp"
#include "pushfront/grid.hpp"
#include "pushfront/model.hpp"
#include "pushfront/profile.hpp"
#include "pushfront/simulator.hpp"
#include "pushfront/spectral.hpp"

namespace pushfront {

inline double eta(double x, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("eta needs lambda > 0");
    return x >= 0.0 ? 1.0 : std::exp(lambda * x);
}

/// max_i |f_i| / eta(x_i)
inline double weighted_norm(std::span<const double> f, const UniformGrid& grid, double lambda) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]) / eta(grid[i], lambda));
    return m;
}

/// Weight eta_lambda with lambda checked against (lambda1(c), lambda2(c)).
struct WeightedFrame {
    double lambda = 0.0;
    double c = 0.0;

    static WeightedFrame make(double lambda, double c, const SpectralSummary& spec) {
        const auto r = spec.decay_rates(c);
        if (!(lambda > r.lambda1 && lambda < r.lambda2))
            throw InvalidArgument("lambda = " + std::to_string(lambda) + " outside (" + std::to_string(r.lambda1) +
                                  ", " + std::to_string(r.lambda2) + ")");
        return {lambda, c};
    }
    /// Midpoint of (lambda1(c), lambda2(c)).
    static WeightedFrame midpoint(double c, const SpectralSummary& spec) {
        const auto r = spec.decay_rates(c);
        return {0.5 * (r.lambda1 + r.lambda2), c};
    }
    double eta(double z) const { return pushfront::eta(z, lambda); }
};

/// Field values against frame coordinates. A simulated snapshot at time t is
/// exactly the grid shifted by c t; moving_frame resamples onto a fixed grid.
struct FrameSnapshot {
    UniformGrid grid;
    std::vector<double> values;
};

inline FrameSnapshot frame_view(const UniformGrid& xgrid, std::span<const double> u, double c, double t) {
    UniformGrid z = xgrid;
    z.x_min += c * t;
    return {z, std::vector<double>(u.begin(), u.end())};
}

/// w(z_i) = u(z_i - c t) on the same nodes, interpolated; beyond the grid the
/// end values continue (the truncation ends are equilibria).
inline std::vector<double> moving_frame(const UniformGrid& grid, std::span<const double> u, double c, double t,
                                        double margin = 0.0) {
    const double length = grid.x_max() - grid.x_min;
    if (std::abs(c * t) > length - margin)
        throw InvalidArgument("frame shift " + std::to_string(c * t) + " exceeds the domain margin");
    std::vector<double> w(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid[i] - c * t;
        if (x <= grid.x_min) w[i] = u.front();
        else if (x >= grid.x_max()) w[i] = u.back();
        else w[i] = *interpolate(grid, u, x);
    }
    return w;
}

namespace detail {

// Golden-section minimum of f on [lo, hi] to bracket width tol.
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - r * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + r * (b - a); f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Least-squares line y = a + b t with the standard error of b.
struct LineFit {
    double intercept = 0.0, slope = 0.0, slope_stderr = 0.0, rms = 0.0;
};

inline LineFit fit_line(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    if (n < 2) throw InvalidArgument("line fit needs two points");
    double tm = 0, ym = 0;
    for (std::size_t i = 0; i < n; ++i) { tm += t[i]; ym += y[i]; }
    tm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
    }
    if (stt == 0.0) throw InvalidArgument("line fit needs distinct abscissae");
    LineFit f;
    f.slope = sty / stt;
    f.intercept = ym - f.slope * tm;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.slope * t[i];
        sse += e * e;
    }
    f.rms = std::sqrt(sse / static_cast<double>(n));
    f.slope_stderr = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / stt) : 0.0;
    return f;
}

}  // namespace detail

/// sup over the frame nodes of |w - phi(z + s)| / eta(z).
inline double frame_distance(const FrameSnapshot& w, const WaveProfile& phi, double s, double lambda) {
    double m = 0.0;
    for (std::size_t i = 0; i < w.grid.n; ++i) {
        const double z = w.grid[i];
        m = std::max(m, std::abs(w.values[i] - phi.evaluate(z + s)) / eta(z, lambda));
    }
    return m;
}

/// argmin_s |w - phi(. + s)|_lambda by golden section on [guess - range, guess + range].
inline double fit_phase(const FrameSnapshot& w, const WaveProfile& phi, double lambda, double guess = 0.0,
                        double range = 20.0, double tol = 1e-6) {
    if (!(lambda > 0.0)) throw InvalidArgument("fit_phase needs lambda > 0");
    const double lo = guess - range, hi = guess + range;
    const double s = detail::golden_min([&](double x) { return frame_distance(w, phi, x, lambda); }, lo, hi, tol);
    if (s - lo < 10.0 * tol || hi - s < 10.0 * tol)
        throw NonConvergence("phase fit minimizer at the search boundary s = " + std::to_string(s),
                             frame_distance(w, phi, s, lambda));
    return s;
}

/// Phase guess from the kappa/2 crossing: phi(0) = kappa/2, so z_half + s = 0.
inline std::optional<double> phase_guess(const FrameSnapshot& w, double kappa) {
    auto z = level_crossing(w.grid, w.values, 0.5 * kappa, true);
    if (!z) return std::nullopt;
    return -*z;
}

inline double level_set_position(const UniformGrid& grid, std::span<const double> u, double level, Side side) {
    auto x = level_crossing(grid, u, level, side == Side::Left);
    if (!x) throw InvalidArgument("field does not cross level " + std::to_string(level));
    return *x;
}

struct SpreadingEstimate {
    double c_left = 0.0;   // d/dt of the left crossing (negative when spreading left)
    double c_right = 0.0;  // d/dt of the right crossing
    double stderr_left = 0.0;
    double stderr_right = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slopes of both crossings after discarding the first
/// `discard` fraction of the time span.
inline SpreadingEstimate spreading_speed_estimate(const std::vector<LevelRecord>& log, double discard = 0.3) {
    if (log.empty()) throw InvalidArgument("insufficient samples: empty level log");
    if (!(discard >= 0.0 && discard < 1.0)) throw InvalidArgument("discard fraction must lie in [0, 1)");
    const double t0 = log.front().t, t1 = log.back().t;
    const double cut = t0 + discard * (t1 - t0);
    std::vector<double> t, xl, xr;
    for (const auto& r : log) {
        if (r.t < cut || !r.left || !r.right) continue;
        t.push_back(r.t);
        xl.push_back(*r.left);
        xr.push_back(*r.right);
    }
    if (t.size() < 10)
        throw InvalidArgument("insufficient samples: " + std::to_string(t.size()) + " retained, need 10");
    const auto fl = detail::fit_line(t, xl), fr = detail::fit_line(t, xr);
    return {fl.slope, fr.slope, fl.slope_stderr, fr.slope_stderr, t.size()};
}

struct EnvelopeConstants {
    double delta = 0.0, gamma = 0.0, alpha = 0.0, beta = 0.0;
    double q0_plus = 0.0, q0_minus = 0.0, C_shift = 0.0;
    double z0 = 0.0, z1 = 0.0, z2 = 0.0;
    double gamma1 = 0.0, delta1 = 0.0;  // the bounds of the G > 2 gamma step
    double c1a_margin = 0.0;            // min over the s-grid of the (C1a) left side
};

namespace detail {

// min over sampled (u, q) of G(u, q, gamma) - 2 gamma, with
// G = 1 + (g(u - e^{gamma h} q) - g(u))/q and G = 1 - e^{gamma h} g'(u) at q = 0.
inline double step1_margin(const BirthFunction& g, double h, double delta1, double gamma, double sigma) {
    const double kappa = g.kappa(), e = std::exp(gamma * h);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const double u = kappa - delta1 + 2.0 * delta1 * i / 20.0;
        m = std::min(m, 1.0 - e * g.derivative(u) - 2.0 * gamma);
        for (int j = 1; j <= 60; ++j) {
            const double q = sigma * j / 60.0;
            m = std::min(m, 1.0 + (g(u - e * q) - g(u)) / q - 2.0 * gamma);
        }
    }
    return m;
}

inline double c1a_margin(const BirthFunction& g, double c, double h, double lambda, double gamma, double delta) {
    double m = std::numeric_limits<double>::infinity();
    const double base = -lambda * lambda + c * lambda + 1.0 - gamma;
    const double e = std::exp(-lambda * c * h + gamma * h);
    for (int i = 0; i <= 200; ++i) {
        const double s = delta * i / 200.0;
        m = std::min(m, base - g.derivative(s) * e);
    }
    return m;
}

// Root of an increasing function on [lo, hi].
inline std::optional<double> increasing_root(const std::function<double(double)>& f, double lo, double hi) {
    if (f(lo) > 0.0 || f(hi) < 0.0) return std::nullopt;
    for (int k = 0; k < 200 && hi - lo > 1e-12; ++k) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Constants of the sub/super-solution construction around the front phi.
/// (delta1, gamma1) are halved from (holder window, c lambda) until
/// G > 2 gamma on the sampled box; then delta from kappa/4 and gamma from
/// gamma1/2 are halved until (C1a) holds and z1 < -c h < 0 < z2.
inline EnvelopeConstants lemma1_constants(const BirthFunction& g, const WaveProfile& phi, double c, double h,
                                          double lambda, double sigma) {
    if (!phi.normalized) throw InvalidArgument("lemma1_constants needs a normalized profile");
    const double kappa = g.kappa();
    if (!(sigma > 0.0 && sigma < kappa)) throw InvalidArgument("sigma must lie in (0, kappa)");
    const auto rates = decay_rates(c, g.gp0(), h);
    if (!(lambda > rates.lambda1 && lambda < rates.lambda2))
        throw InvalidArgument("lambda outside (lambda1(c), lambda2(c))");
    constexpr int kHalvings = 40;

    EnvelopeConstants k;
    bool step1 = false;
    for (int i = 1; i <= kHalvings && !step1; ++i) {
        const double d1 = g.holder_window() * std::ldexp(1.0, -i);
        for (int j = 1; j <= kHalvings; ++j) {
            const double g1 = c * lambda * std::ldexp(1.0, -j);
            if (detail::step1_margin(g, h, d1, g1, sigma) > 0.0) {
                k.delta1 = d1;
                k.gamma1 = g1;
                step1 = true;
                break;
            }
        }
    }
    if (!step1) throw NonConvergence("no admissible (delta1, gamma1) in the search lattice", 0.0);

    // Discrete minimum slope over the cells meeting [a, b].
    auto min_slope = [&](double a, double b) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < phi.values.size(); ++i) {
            if (phi.grid[i + 1] < a || phi.grid[i] > b) continue;
            m = std::min(m, (phi.values[i + 1] - phi.values[i]) / phi.grid.dx);
        }
        if (a < phi.grid.x_min || b > phi.grid.x_max())
            m = std::min({m, phi.slope(a), phi.slope(b)});
        return m;
    };
    const double lo = phi.grid.x_min - 200.0, hi = phi.grid.x_max() + 200.0;

    for (int i = 2; i < 2 + kHalvings; ++i) {
        const double delta = kappa * std::ldexp(1.0, -i);
        if (!(delta < k.delta1 && delta < sigma)) continue;
        auto z0 = detail::increasing_root([&](double z) { return phi.evaluate(z) - 0.25 * delta; }, lo, hi);
        auto z1 = detail::increasing_root(
            [&](double z) { return phi.evaluate(z) + 0.25 * delta * eta(z, lambda) - 0.5 * delta; }, lo, hi);
        auto z2 = detail::increasing_root([&](double z) { return phi.evaluate(z) - (kappa - 0.5 * delta); }, lo, hi);
        if (!z0 || !z1 || !z2) continue;
        if (!(*z1 < -c * h && *z2 > 0.0 && *z1 < 0.0)) continue;
        for (int j = 1; j <= kHalvings; ++j) {
            const double gamma = k.gamma1 * std::ldexp(1.0, -j);
            const double margin = detail::c1a_margin(g, c, h, lambda, gamma, delta);
            if (!(margin > 0.0)) continue;
            const double beta = min_slope(*z0, *z2 + c * h);
            if (!(beta > 0.0)) throw Indeterminate("profile slope not positive on [z0, z2 + c h]");
            k.delta = delta;
            k.gamma = gamma;
            k.c1a_margin = margin;
            k.z0 = *z0;
            k.z1 = *z1;
            k.z2 = *z2;
            k.beta = beta;
            k.alpha = (gamma + std::exp(gamma * h) * g.lipschitz()) / beta;
            k.q0_plus = delta * std::exp(-gamma * h) / 2.0;
            k.q0_minus = sigma;
            k.C_shift = k.alpha * std::exp(gamma * h) / gamma;
            return k;
        }
    }
    throw NonConvergence("no admissible (delta, gamma) in the search lattice", 0.0);
}

enum class EnvelopeDirection { Upper, Lower };

struct EnvelopeViolation {
    double t = 0.0;
    double z = 0.0;
    double margin = 0.0;  // amount by which the bound is exceeded
};

/// Checks the envelope conclusion on every recorded (t, z = x + c t), after
/// verifying the hypothesis on the whole initial history. Upper:
///   0 <= w <= phi(z + b) + q eta(z)  implies  w <= phi(z + b + C q) + q e^{-gamma t} eta(z);
/// lower:
///   phi(z + b) - q eta(z) <= w <= kappa  implies  w >= phi(z + b - C q) - q e^{-gamma t} eta(z).
inline std::vector<EnvelopeViolation> envelope_check(const InitialDatum& datum, const std::vector<Snapshot>& log,
                                                     const WaveProfile& phi, const EnvelopeConstants& k, double q,
                                                     double lambda, EnvelopeDirection dir, double b = 0.0,
                                                     double slack = 1e-8) {
    const double c = phi.c, kappa = phi.kappa;
    const double q_max = dir == EnvelopeDirection::Upper ? k.q0_plus : k.q0_minus;
    if (!(q > 0.0 && q <= q_max)) throw InvalidArgument("envelope q outside (0, q0]");
    const auto& grid = datum.grid;
    const double dt = datum.dt;
    for (std::size_t s = 0; s < datum.history.size(); ++s) {
        const double ts = -datum.h + dt * static_cast<double>(s);
        const auto& w = datum.history[s];
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double z = grid[i] + c * ts;
            const double bound = phi.evaluate(z + b);
            const bool ok = dir == EnvelopeDirection::Upper
                                ? (w[i] >= -slack && w[i] <= bound + q * eta(z, lambda) + slack)
                                : (w[i] <= kappa + slack && w[i] >= bound - q * eta(z, lambda) - slack);
            if (!ok)
                throw InvalidArgument("envelope hypothesis fails at s = " + std::to_string(ts) +
                                      ", z = " + std::to_string(z) + "; the envelope bound does not apply");
        }
    }
    std::vector<EnvelopeViolation> out;
    const double shift = k.C_shift * q;
    for (const auto& snap : log) {
        const double decay = q * std::exp(-k.gamma * snap.t);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double z = grid[i] + c * snap.t;
            double excess;
            if (dir == EnvelopeDirection::Upper)
                excess = snap.u[i] - (phi.evaluate(z + b + shift) + decay * eta(z, lambda) + slack);
            else
                excess = (phi.evaluate(z + b - shift) - decay * eta(z, lambda) - slack) - snap.u[i];
            if (excess > 0.0) out.push_back({snap.t, z, excess});
        }
    }
    return out;
}

/// Smallest zeta1 (to 1e-6) with
///   phi(z - zeta1) - sigma e^{-gamma t} eta(z) <= w <= phi(z + zeta1) + q0+ e^{-gamma t} eta(z + zeta1)
/// on every record; nullopt if none up to zeta_max.
inline std::optional<double> sandwich_shift(const UniformGrid& grid, const std::vector<Snapshot>& log,
                                            const WaveProfile& phi, const EnvelopeConstants& k, double lambda,
                                            double zeta_max = 1e3) {
    const double c = phi.c;
    auto holds = [&](double zeta) {
        for (const auto& snap : log) {
            const double decay = std::exp(-k.gamma * snap.t);
            for (std::size_t i = 0; i < grid.n; ++i) {
                const double z = grid[i] + c * snap.t;
                const double upper = phi.evaluate(z + zeta) + k.q0_plus * decay * eta(z + zeta, lambda);
                const double lower = phi.evaluate(z - zeta) - k.q0_minus * decay * eta(z, lambda);
                if (snap.u[i] > upper + 1e-8 || snap.u[i] < lower - 1e-8) return false;
            }
        }
        return true;
    };
    if (!holds(zeta_max)) return std::nullopt;
    double lo = 0.0, hi = zeta_max;
    if (holds(lo)) return 0.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Fitted lower envelope of two-sided spreading,
///   u(t, x) >= phi(-|x| + c t - z1) - K e^{-gamma t} eta(-|x| + c t - z2),
/// on records with t >= onset. K and z2 - z1 are given; returns the smallest z1
/// (to 1e-6), nullopt if none up to z_max.
struct SymmetricLowerEnvelope {
    double z_prime = 0.0;
    double z_second = 0.0;
    double K = 0.0;
    double onset = 0.0;
};

inline std::optional<SymmetricLowerEnvelope> symmetric_lower_envelope(const UniformGrid& grid,
                                                                      const std::vector<Snapshot>& log,
                                                                      const WaveProfile& phi, double gamma,
                                                                      double lambda, double onset, double K = 2.0,
                                                                      double offset = 0.0, double z_max = 1e3) {
    const double c = phi.c;
    auto holds = [&](double z1) {
        for (const auto& snap : log) {
            if (snap.t < onset) continue;
            const double decay = K * std::exp(-gamma * snap.t);
            for (std::size_t i = 0; i < grid.n; ++i) {
                const double y = -std::abs(grid[i]) + c * snap.t;
                if (snap.u[i] < phi.evaluate(y - z1) - decay * eta(y - z1 - offset, lambda) - 1e-8) return false;
            }
        }
        return true;
    };
    double lo = -z_max, hi = z_max;
    if (!holds(hi)) return std::nullopt;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return SymmetricLowerEnvelope{hi, hi + offset, K, onset};
}

struct OriginFit {
    double q = 0.0;
    double nu = 0.0;
    double residual = 0.0;  // RMS of the log-linear fit
    std::size_t samples = 0;
};

/// kappa - u(t, 0) ~ q e^{-nu t}, least squares in log form over [t_lo, t_hi].
inline OriginFit origin_approach_fit(const std::vector<PointRecord>& log, double kappa, double t_lo, double t_hi) {
    if (log.empty()) throw InvalidArgument("empty point log");
    if (std::abs(log.back().u - kappa) > 1e-3)
        throw InvalidArgument("u(t, 0) has not approached kappa (final value " + std::to_string(log.back().u) + ")");
    std::vector<double> t, y;
    for (const auto& r : log) {
        if (r.t < t_lo || r.t > t_hi) continue;
        const double d = kappa - r.u;
        if (!(d > 0.0)) throw InvalidArgument("nonpositive log argument at t = " + std::to_string(r.t));
        t.push_back(r.t);
        y.push_back(std::log(d));
    }
    if (t.size() < 3) throw InvalidArgument("origin fit window holds fewer than 3 samples");
    const auto f = detail::fit_line(t, y);
    return {std::exp(f.intercept), -f.slope, f.rms, t.size()};
}

struct PhaseRecord {
    double t = 0.0;
    std::optional<double> phase;
    double weighted_distance = std::numeric_limits<double>::quiet_NaN();
    double compact_distance = std::numeric_limits<double>::quiet_NaN();
};

/// Per-time fits for one front (left only) or two mirrored fronts (left and right).
struct ConvergenceReport {
    double lambda = 0.0;
    double c = 0.0;
    std::vector<PhaseRecord> left;
    std::vector<PhaseRecord> right;
    std::vector<LevelRecord> level_sets;
    std::optional<SpreadingEstimate> speeds;
    std::optional<OriginFit> origin;
    std::vector<EnvelopeViolation> violations;
    bool trivial_extinction = false;
    std::vector<std::string> notes;
};

namespace detail {

// Half-line fit: side Left compares u(x) with phi(x + c t + s) for x <= 0,
// side Right compares u(x) with phi(-x + c t + s) for x >= 0; weights eta at
// the frame coordinate.
struct HalfFrame {
    FrameSnapshot w;  // frame coordinate increasing along values
};

inline HalfFrame half_frame(const UniformGrid& grid, std::span<const double> u, double c, double t, Side side) {
    const std::size_t zero = grid.nearest(0.0);
    HalfFrame hf;
    if (side == Side::Left) {
        hf.w.grid = {grid.x_min + c * t, grid.dx, zero + 1};
        hf.w.values.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(zero) + 1);
    } else {
        // y = -x + c t, listed from x = x_max down to 0
        const std::size_t m = grid.n - zero;
        hf.w.grid = {-grid.x_max() + c * t, grid.dx, m};
        hf.w.values.assign(u.rbegin(), u.rbegin() + static_cast<std::ptrdiff_t>(m));
    }
    return hf;
}

inline PhaseRecord fit_record(const FrameSnapshot& w, const WaveProfile& phi, double lambda, double t,
                              std::optional<double> prior, std::vector<std::string>& notes) {
    PhaseRecord rec;
    rec.t = t;
    auto guess = prior ? prior : phase_guess(w, phi.kappa);
    if (!guess) {
        notes.push_back("t = " + std::to_string(t) + ": no kappa/2 crossing to anchor the phase");
        return rec;
    }
    try {
        rec.phase = fit_phase(w, phi, lambda, *guess);
    } catch (const NonConvergence&) {
        try {
            if (auto g2 = phase_guess(w, phi.kappa)) rec.phase = fit_phase(w, phi, lambda, *g2);
        } catch (const NonConvergence&) {
        }
        if (!rec.phase) {
            notes.push_back("t = " + std::to_string(t) + ": phase fit did not converge");
            return rec;
        }
    }
    rec.weighted_distance = frame_distance(w, phi, *rec.phase, lambda);
    double sup = 0.0;
    for (std::size_t i = 0; i < w.grid.n; ++i) {
        const double z = w.grid[i];
        if (std::abs(z + *rec.phase) <= 10.0) sup = std::max(sup, std::abs(w.values[i] - phi.evaluate(z + *rec.phase)));
    }
    rec.compact_distance = sup;
    return rec;
}

}  // namespace detail

/// Phase s0(t) and |u(t, .) - phi(. + c t + s0)| / eta(. + c t) for a single
/// front; the compact distance is the plain sup over |z + s0| <= 10.
inline ConvergenceReport single_front_report(const UniformGrid& grid, const std::vector<Snapshot>& log,
                                             const WaveProfile& phi, double lambda) {
    ConvergenceReport rep;
    rep.lambda = lambda;
    rep.c = phi.c;
    std::optional<double> prior;
    for (const auto& snap : log) {
        const auto w = frame_view(grid, snap.u, phi.c, snap.t);
        auto rec = detail::fit_record(w, phi, lambda, snap.t, prior, rep.notes);
        if (rec.phase) prior = rec.phase;
        rep.left.push_back(rec);
    }
    return rep;
}

/// Mirrored-pair fits: left half against phi(x + c t + s1), right half against
/// phi(-x + c t + s2). The compact distance is sup_{|x| <= 10} |u - kappa|.
inline ConvergenceReport two_front_report(const UniformGrid& grid, const std::vector<Snapshot>& log,
                                          const WaveProfile& phi, double lambda) {
    ConvergenceReport rep;
    rep.lambda = lambda;
    rep.c = phi.c;
    if (!log.empty()) {
        const auto& last = log.back().u;
        rep.trivial_extinction = std::all_of(last.begin(), last.end(), [](double v) { return std::abs(v) < 1e-12; });
    }
    if (rep.trivial_extinction) {
        rep.notes.push_back("u vanishes identically; no phases");
        return rep;
    }
    std::optional<double> prior_l, prior_r;
    for (const auto& snap : log) {
        for (Side side : {Side::Left, Side::Right}) {
            const auto hf = detail::half_frame(grid, snap.u, phi.c, snap.t, side);
            auto& prior = side == Side::Left ? prior_l : prior_r;
            auto rec = detail::fit_record(hf.w, phi, lambda, snap.t, prior, rep.notes);
            if (rec.phase) prior = rec.phase;
            double sup = 0.0;
            for (std::size_t i = 0; i < grid.n; ++i)
                if (std::abs(grid[i]) <= 10.0) sup = std::max(sup, std::abs(snap.u[i] - phi.kappa));
            rec.compact_distance = sup;
            (side == Side::Left ? rep.left : rep.right).push_back(rec);
        }
        LevelRecord lr{snap.t, level_crossing(grid, snap.u, 0.5 * phi.kappa, true),
                       level_crossing(grid, snap.u, 0.5 * phi.kappa, false)};
        rep.level_sets.push_back(lr);
    }
    try {
        rep.speeds = spreading_speed_estimate(rep.level_sets);
    } catch (const InvalidArgument& e) {
        rep.notes.push_back(std::string("spreading speed: ") + e.what());
    }
    return rep;
}

/// max - min of the fitted phase over records with t >= t_from.
inline std::optional<double> phase_spread(const std::vector<PhaseRecord>& recs, double t_from) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : recs) {
        if (r.t < t_from) continue;
        if (!r.phase) return std::nullopt;
        lo = std::min(lo, *r.phase);
        hi = std::max(hi, *r.phase);
    }
    if (hi < lo) return std::nullopt;
    return hi - lo;
}

}  // namespace pushfront
