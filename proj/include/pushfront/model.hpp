#pragma once

// Birth functions g for u_t = u_xx - u + g(u(t-h, x)) and the monostability
// hypothesis they must satisfy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pushfront/errors.hpp"

namespace pushfront {

struct HolderBound {
    double C = 0.0;
    double theta = 1.0;
};

namespace detail {

inline double horner(const std::vector<double>& a, double u) {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * u + *it;
    return acc;
}

inline std::vector<double> differentiate(const std::vector<double>& a) {
    if (a.size() <= 1) return {0.0};
    std::vector<double> d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = static_cast<double>(i) * a[i];
    return d;
}

// Sign-change roots of a polynomial on [lo, hi], bisected to machine precision.
inline std::vector<double> bracketed_roots(const std::vector<double>& a, double lo, double hi,
                                           std::size_t samples = 4000) {
    std::vector<double> roots;
    const double step = (hi - lo) / static_cast<double>(samples);
    double x0 = lo;
    double f0 = horner(a, x0);
    for (std::size_t i = 1; i <= samples; ++i) {
        const double x1 = lo + step * static_cast<double>(i);
        const double f1 = horner(a, x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (f0 * f1 < 0.0) {
            double a_lo = x0, a_hi = x1, fa = f0;
            for (int k = 0; k < 200 && a_hi - a_lo > 1e-16 * std::max(1.0, std::abs(a_hi)); ++k) {
                const double mid = 0.5 * (a_lo + a_hi);
                const double fm = horner(a, mid);
                if (fm == 0.0) { a_lo = a_hi = mid; break; }
                if ((fm < 0.0) == (fa < 0.0)) { a_lo = mid; fa = fm; } else { a_hi = mid; }
            }
            roots.push_back(0.5 * (a_lo + a_hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace detail

/// Polynomial birth function on [0, kappa], extended linearly and C^1-smoothly
/// outside that interval. Immutable once built.
class BirthFunction {
public:
    /// Builds g(u) = sum a_i u^i and derives kappa, g'(0), g'(kappa), the Lipschitz
    /// constant on [0, kappa], monotonicity and a fitted Holder bound. No
    /// hypothesis checks are made here; see validate_hypothesis().
    static BirthFunction from_polynomial(std::vector<double> coeffs, std::string name = "custom") {
        if (coeffs.empty()) throw InvalidArgument("polynomial birth function needs coefficients");
        while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();

        BirthFunction g;
        g.name_ = std::move(name);
        g.coeffs_ = coeffs;
        g.d1_ = detail::differentiate(coeffs);
        g.d2_ = detail::differentiate(g.d1_);

        // Positive fixed points of g(u) - u; Cauchy's bound confines them.
        auto shifted = coeffs;
        if (shifted.size() < 2) shifted.resize(2, 0.0);
        shifted[1] -= 1.0;
        while (shifted.size() > 1 && shifted.back() == 0.0) shifted.pop_back();
        double bound = 1.0;
        if (shifted.size() > 1) {
            for (std::size_t i = 0; i + 1 < shifted.size(); ++i)
                bound = std::max(bound, 1.0 + std::abs(shifted[i] / shifted.back()));
        }
        auto roots = detail::bracketed_roots(shifted, 1e-9 * bound, bound * 1.01, 20000);
        if (roots.empty()) throw InvalidArgument("birth function has no positive fixed point");
        g.kappa_ = roots.front();

        g.gp0_ = detail::horner(g.d1_, 0.0);
        g.gpk_ = detail::horner(g.d1_, g.kappa_);

        // max |g'| on [0, kappa] is attained at an endpoint or at a root of g''.
        double lip = std::max(std::abs(g.gp0_), std::abs(g.gpk_));
        for (double r : detail::bracketed_roots(g.d2_, 0.0, g.kappa_))
            lip = std::max(lip, std::abs(detail::horner(g.d1_, r)));
        g.lipschitz_ = lip;

        bool mono = true;
        for (double r : detail::bracketed_roots(g.d1_, 0.0, g.kappa_)) {
            const double eps = 1e-6 * g.kappa_;
            if (detail::horner(g.d1_, std::max(0.0, r - eps)) < 0.0 ||
                detail::horner(g.d1_, std::min(g.kappa_, r + eps)) < 0.0)
                mono = false;
        }
        if (g.gp0_ < 0.0 || g.gpk_ < 0.0) mono = false;
        g.monotone_ = mono;
        g.holder_ = g.fit_holder();
        return g;
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    double kappa() const noexcept { return kappa_; }
    double gp0() const noexcept { return gp0_; }
    double gpk() const noexcept { return gpk_; }
    double lipschitz() const noexcept { return lipschitz_; }
    bool monotone() const noexcept { return monotone_; }
    HolderBound holder() const noexcept { return holder_; }

    /// Upper end of the Holder window, min(0.1, kappa/10).
    double holder_window() const noexcept { return std::min(0.1, kappa_ / 10.0); }

    double operator()(double u) const noexcept { return evaluate(u); }

    double evaluate(double u) const noexcept {
        if (u < 0.0) return gp0_ * u;
        if (u > kappa_) return kappa_ + gpk_ * (u - kappa_);
        return detail::horner(coeffs_, u);
    }

    double derivative(double u) const noexcept {
        if (u < 0.0) return gp0_;
        if (u > kappa_) return gpk_;
        return detail::horner(d1_, u);
    }

    /// |g'(u) - g'(0)| + |g'(kappa) - g'(kappa - u)|
    double holder_lhs(double u) const noexcept {
        return std::abs(derivative(u) - gp0_) + std::abs(gpk_ - derivative(kappa_ - u));
    }

    /// Log-spaced sample of (0, delta0] starting at 1e-8.
    std::vector<double> holder_grid(std::size_t n = 200) const {
        const double lo = std::log(1e-8), hi = std::log(holder_window());
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i)
            u[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        return u;
    }

private:
    BirthFunction() = default;

    HolderBound fit_holder() const {
        const auto u = holder_grid();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        for (double ui : u) {
            const double l = holder_lhs(ui);
            if (l <= 0.0) continue;
            const double x = std::log(ui), y = std::log(l);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
        if (m < 2) return {0.0, 1.0};
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double theta = std::clamp(slope, 1e-3, 1.0);
        double C = 0.0;
        for (double ui : u) C = std::max(C, holder_lhs(ui) / std::pow(ui, theta));
        return {C * (1.0 + 1e-9), theta};
    }

    std::string name_;
    std::vector<double> coeffs_, d1_, d2_;
    double kappa_ = 0, gp0_ = 0, gpk_ = 0, lipschitz_ = 0;
    bool monotone_ = false;
    HolderBound holder_;
};

struct HypothesisCheck {
    std::string name;
    double measured;
    double threshold;
    bool passed;
};

struct HypothesisReport {
    bool passed = true;
    std::vector<HypothesisCheck> checks;
    std::size_t n_samples = 0;
    // Informational only: g(u) <= g'(0) u on the sample.
    bool subtangential = false;
    double subtangency_excess = 0.0;
    HolderBound holder;

    const HypothesisCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& c : checks)
            if (!c.passed) out.push_back(c.name);
        return out;
    }
};

/// Samples g on [0, kappa] and records every monostability check. Failures are
/// recorded in the report, never thrown.
inline HypothesisReport validate_hypothesis(const BirthFunction& g, std::size_t n_samples) {
    if (n_samples < 100) throw InvalidArgument("validate_hypothesis needs n_samples >= 100");
    HypothesisReport rep;
    rep.n_samples = n_samples;
    const double k = g.kappa();
    auto add = [&](std::string name, double measured, double threshold, bool ok) {
        rep.checks.push_back({std::move(name), measured, threshold, ok});
        rep.passed = rep.passed && ok;
    };

    add("g(0) = 0", std::abs(g(0.0)), 1e-12, std::abs(g(0.0)) <= 1e-12);
    add("g(kappa) = kappa", std::abs(g(k) - k), 1e-12, std::abs(g(k) - k) < 1e-12);

    std::vector<double> u(n_samples + 1), gu(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i) {
        u[i] = k * static_cast<double>(i) / static_cast<double>(n_samples);
        gu[i] = g(u[i]);
    }

    double min_excess = INFINITY;
    for (std::size_t i = 1; i < n_samples; ++i) min_excess = std::min(min_excess, gu[i] - u[i]);
    add("no interior fixed point", min_excess, 0.0, min_excess > 0.0);

    add("gp0 > 1", g.gp0(), 1.0, g.gp0() > 1.0);
    add("gpk < 1", g.gpk(), 1.0, g.gpk() < 1.0);

    double lip = 0.0;
    for (std::size_t i = 1; i <= n_samples; ++i)
        lip = std::max(lip, std::abs(gu[i] - gu[i - 1]) / (u[i] - u[i - 1]));
    for (std::size_t i = 0; i + 7 <= n_samples; i += 7)
        lip = std::max(lip, std::abs(gu[i + 7] - gu[i]) / (u[i + 7] - u[i]));
    const double lip_bound = g.lipschitz() * (1.0 + 1e-8);
    add("lipschitz", lip, lip_bound, lip <= lip_bound);

    if (g.monotone()) {
        double worst = 0.0;
        for (std::size_t i = 1; i <= n_samples; ++i) worst = std::min(worst, gu[i] - gu[i - 1]);
        add("monotone", worst, 0.0, worst >= 0.0);
    }

    const auto hb = g.holder();
    double holder_ratio = 0.0;
    for (double ui : g.holder_grid()) {
        const double bound = hb.C * std::pow(ui, hb.theta);
        const double lhs = g.holder_lhs(ui);
        holder_ratio = std::max(holder_ratio, bound > 0 ? lhs / bound : (lhs > 0 ? INFINITY : 0.0));
    }
    add("holder", holder_ratio, 1.0, holder_ratio <= 1.0 && hb.theta > 0.0 && hb.theta <= 1.0);
    rep.holder = hb;

    // Linear extension must match value and slope at 0 and kappa.
    const double e = 1e-7;
    const double c1_gap = std::max({std::abs(g(-e) - (g(0.0) - e * g.gp0())),
                                    std::abs(g(k + e) - (g(k) + e * g.gpk())),
                                    std::abs(g.derivative(-1e-12) - g.derivative(0.0)),
                                    std::abs(g.derivative(k + 1e-12) - g.derivative(k))});
    add("C1 extension", c1_gap, 1e-10, c1_gap <= 1e-10);

    double excess = -INFINITY;
    for (std::size_t i = 1; i <= n_samples; ++i) excess = std::max(excess, gu[i] - g.gp0() * u[i]);
    rep.subtangency_excess = excess;
    rep.subtangential = excess <= 1e-14;
    return rep;
}

/// A named preset or raw polynomial coefficients [a0, a1, ...].
using BirthSpec = std::variant<std::string, std::vector<double>>;

inline std::vector<std::string> preset_names() { return {"hadeler_rothe", "kpp"}; }

namespace detail {
struct PresetConstants {
    std::vector<double> coeffs;
    double kappa, gp0, gpk, lipschitz;
};

inline std::optional<PresetConstants> preset(const std::string& name) {
    // (10u + 3u^2 - 5u^3)/8: g - u = u(1 - u)(5u + 2)/8, max g' at u = 1/5.
    if (name == "hadeler_rothe") return PresetConstants{{0.0, 10.0 / 8, 3.0 / 8, -5.0 / 8}, 1.0, 1.25, 0.125, 1.325};
    if (name == "kpp") return PresetConstants{{0.0, 2.0, -1.0}, 1.0, 2.0, 0.0, 2.0};
    return std::nullopt;
}
}  // namespace detail

/// Builds and validates a birth function; throws InvalidArgument naming the
/// failing check when the hypothesis does not hold.
inline BirthFunction make_birth_function(const BirthSpec& spec, std::size_t n_samples = 2000) {
    BirthFunction g = std::visit(
        [](const auto& s) -> BirthFunction {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, std::string>) {
                auto p = detail::preset(s);
                if (!p) throw InvalidArgument("unknown preset '" + s + "'");
                auto g = BirthFunction::from_polynomial(p->coeffs, s);
                const double tol = 1e-12;
                if (std::abs(g.kappa() - p->kappa) > tol || std::abs(g.gp0() - p->gp0) > tol ||
                    std::abs(g.gpk() - p->gpk) > tol || std::abs(g.lipschitz() - p->lipschitz) > 1e-9)
                    throw Error("preset '" + s + "' constants disagree with its polynomial");
                return g;
            } else {
                return BirthFunction::from_polynomial(s, "custom");
            }
        },
        spec);
    const auto rep = validate_hypothesis(g, n_samples);
    if (!rep.passed) {
        std::string msg = "birth function fails hypothesis:";
        for (const auto& f : rep.failures()) msg += " [" + f + "]";
        throw InvalidArgument(msg);
    }
    return g;
}

/// The two nonnegative fixed points (0, kappa).
inline std::pair<double, double> equilibria(const BirthFunction& g) { return {0.0, g.kappa()}; }

}  // namespace pushfront
