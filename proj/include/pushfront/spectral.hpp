#pragma once

// Real roots of the characteristic functions
//   chi(z, c)       = z^2 - c z - 1 + g'(0)     e^{-z c h}
//   chi_kappa(z, c) = z^2 - c z - 1 + g'(kappa) e^{-z c h}
// which govern the exponential tails of wave profiles near 0 and kappa.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "pushfront/errors.hpp"
#include "pushfront/model.hpp"

namespace pushfront {

inline double chi(double z, double c, double gp0, double h) {
    return z * z - c * z - 1.0 + gp0 * std::exp(-z * c * h);
}

inline double chi_dz(double z, double c, double gp0, double h) {
    return 2.0 * z - c - gp0 * c * h * std::exp(-z * c * h);
}

inline double chi_dzz(double z, double c, double gp0, double h) {
    return 2.0 + gp0 * c * c * h * h * std::exp(-z * c * h);
}

inline double chi_dc(double z, double c, double gp0, double h) {
    return -z - gp0 * z * h * std::exp(-z * c * h);
}

inline double chi_dzdc(double z, double c, double gp0, double h) {
    return -1.0 - gp0 * h * std::exp(-z * c * h) * (1.0 - c * h * z);
}

/// Roots xi1 < 0 < xi2 of z^2 - c z - 1 = 0.
inline std::pair<double, double> quadratic_roots(double c) {
    const double xi2 = 0.5 * (c + std::sqrt(c * c + 4.0));
    return {-1.0 / xi2, xi2};
}

namespace detail {

inline constexpr double kSearchMax = 50.0;

// Bisection on a sign change to `width`, then Newton polish kept inside the
// bracket until |f| < resid.
inline double bracket_newton(const std::function<double(double)>& f,
                             const std::function<double(double)>& df, double lo, double hi,
                             double width = 1e-8, double resid = 1e-12) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw Error("root bracket has no sign change");
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const double fz = f(z);
        if (std::abs(fz) < resid * 1e-2) break;
        const double d = df(z);
        if (d == 0.0) break;
        const double next = z - fz / d;
        if (!(next > lo - width && next < hi + width)) break;
        if (next == z) break;
        z = next;
    }
    return z;
}

// Minimizer of chi(., c) over z > 0 (chi is strictly convex in z for gp0 > 0).
inline double chi_argmin(double c, double gp0, double h) {
    auto d = [&](double z) { return chi_dz(z, c, gp0, h); };
    auto dd = [&](double z) { return chi_dzz(z, c, gp0, h); };
    double hi = 1.0;
    while (d(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw Error("chi has no minimizer on z > 0");
    }
    return bracket_newton(d, dd, 0.0, hi, 1e-13, 1e-15);
}

}  // namespace detail

struct DecayPair {
    double lambda1;
    double lambda2;
};

/// Minimal linear speed c_# and the double root there, plus evaluators for
/// the speed-dependent roots.
struct SpectralSummary {
    double c_sharp = 0.0;
    double lambda_double = 0.0;
    double h = 0.0;
    double gp0 = 0.0;
    double gpk = 0.0;

    double chi(double z, double c) const { return pushfront::chi(z, c, gp0, h); }
    double chi_kappa(double z, double c) const { return pushfront::chi(z, c, gpk, h); }
    DecayPair decay_rates(double c) const;
    double lambda3(double c) const;
};

/// Simultaneous solution of chi = 0 and d chi/dz = 0. Closed form for h = 0,
/// otherwise outer bisection on c of the sign of min_z chi, then a 2-D Newton
/// polish on (z, c).
inline SpectralSummary minimal_linear_speed(double gp0, double h, double gpk = 0.0) {
    if (!(gp0 > 1.0)) throw InvalidArgument("minimal_linear_speed requires g'(0) > 1");
    if (!(h >= 0.0)) throw InvalidArgument("h must be nonnegative");
    SpectralSummary s;
    s.h = h;
    s.gp0 = gp0;
    s.gpk = gpk;
    if (h == 0.0) {
        s.c_sharp = 2.0 * std::sqrt(gp0 - 1.0);
        s.lambda_double = 0.5 * s.c_sharp;
        return s;
    }
    auto min_chi = [&](double c) { return pushfront::chi(detail::chi_argmin(c, gp0, h), c, gp0, h); };
    double lo = 0.0, hi = detail::kSearchMax;
    if (min_chi(hi) >= 0.0) throw NonConvergence("c_# beyond the search window", min_chi(hi));
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (min_chi(mid) > 0.0) lo = mid; else hi = mid;
    }
    double c = 0.5 * (lo + hi);
    double z = detail::chi_argmin(c, gp0, h);
    double r1 = 0, r2 = 0;
    for (int it = 0; it < 60; ++it) {
        r1 = pushfront::chi(z, c, gp0, h);
        r2 = chi_dz(z, c, gp0, h);
        if (std::abs(r1) < 1e-14 && std::abs(r2) < 1e-14) break;
        // J = [[chi_z, chi_c], [chi_zz, chi_zc]]
        const double a = r2, b = chi_dc(z, c, gp0, h);
        const double cc = chi_dzz(z, c, gp0, h), d = chi_dzdc(z, c, gp0, h);
        const double det = a * d - b * cc;
        if (det == 0.0) break;
        z -= (d * r1 - b * r2) / det;
        c -= (-cc * r1 + a * r2) / det;
    }
    r1 = pushfront::chi(z, c, gp0, h);
    r2 = chi_dz(z, c, gp0, h);
    if (std::abs(r1) >= 1e-10 || std::abs(r2) >= 1e-10)
        throw NonConvergence("double-root polish failed", std::max(std::abs(r1), std::abs(r2)));
    s.c_sharp = c;
    s.lambda_double = z;
    return s;
}

inline SpectralSummary minimal_linear_speed(const BirthFunction& g, double h) {
    return minimal_linear_speed(g.gp0(), h, g.gpk());
}

/// The two positive simple roots lambda1 < lambda2 of chi(., c); c must exceed c_#.
inline DecayPair decay_rates(double c, double gp0, double h) {
    if (!(c > 0.0)) throw InvalidArgument("speed must be positive");
    const double zm = detail::chi_argmin(c, gp0, h);
    if (pushfront::chi(zm, c, gp0, h) >= 0.0)
        throw InvalidArgument("no simple positive roots: c = " + std::to_string(c) + " is not above c_#");
    auto f = [&](double z) { return pushfront::chi(z, c, gp0, h); };
    auto df = [&](double z) { return chi_dz(z, c, gp0, h); };
    double zhi = std::max(2.0 * zm, 1.0);
    while (f(zhi) <= 0.0) {
        zhi *= 2.0;
        if (zhi > detail::kSearchMax * 4) throw Error("lambda2 beyond the search window");
    }
    return {detail::bracket_newton(f, df, 0.0, zm), detail::bracket_newton(f, df, zm, zhi)};
}

/// The negative root of chi_kappa(., c) nearest to zero.
inline double lambda3(double c, double gpk, double h) {
    if (!(gpk < 1.0)) throw InvalidArgument("lambda3 requires g'(kappa) < 1");
    auto f = [&](double z) { return pushfront::chi(z, c, gpk, h); };
    auto df = [&](double z) { return chi_dz(z, c, gpk, h); };
    double zlo = -0.5;
    while (f(zlo) <= 0.0) {
        zlo *= 2.0;
        if (zlo < -detail::kSearchMax) throw Error("lambda3 bracket failure");
    }
    return detail::bracket_newton(f, df, zlo, 0.0);
}

inline DecayPair SpectralSummary::decay_rates(double c) const { return pushfront::decay_rates(c, gp0, h); }
inline double SpectralSummary::lambda3(double c) const { return pushfront::lambda3(c, gpk, h); }

}  // namespace pushfront
