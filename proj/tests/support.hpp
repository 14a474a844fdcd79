#pragma once

// Helpers shared by the unit tests and the acceptance runner. The quadrature
// here is deliberately a different method from the library's Gauss-Kronrod
// code so that it can serve as an independent reference.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oamband::testing {

// Double-exponential (tanh-sinh) quadrature on [0, 1], refined by halving the
// step until two levels agree to rel_tol.
template <class F>
std::complex<double> tanh_sinh_unit(F&& f, double rel_tol = 1e-14) {
    const double half_pi = 0.5 * std::numbers::pi;
    auto level_sum = [&](double h, bool odd_only) {
        std::complex<double> s = 0.0;
        const int kmax = static_cast<int>(std::ceil(4.0 / h));
        for (int k = -kmax; k <= kmax; ++k) {
            if (odd_only && k % 2 == 0) continue;
            const double t = k * h;
            const double u = half_pi * std::sinh(t);
            const double c = std::cosh(u);
            // x = (1 + tanh u) / 2 written to keep precision near both ends.
            const double e = std::exp(-2.0 * std::abs(u));
            const double small = e / (1.0 + e);
            const double x = u >= 0.0 ? 1.0 - small : small;
            if (x <= 0.0 || x >= 1.0) continue;
            const double w = 0.5 * half_pi * std::cosh(t) / (c * c);
            s += w * f(x);
        }
        return s;
    };
    double h = 0.5;
    std::complex<double> sum = level_sum(h, false);
    std::complex<double> prev = sum * h;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        sum += level_sum(h, true);
        const std::complex<double> cur = sum * h;
        if (level > 2 && std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

// Reference Phi(z, 1, a) from its integral representation.
inline std::complex<double> lerch_reference(std::complex<double> z, int a) {
    return tanh_sinh_unit([&](double t) { return std::pow(t, a - 1) / (1.0 - z * t); });
}

// Random complex point with modulus in [r_lo, r_hi] (log-uniform), kept at
// least `margin` away from the cut [1, inf).
inline std::complex<double> random_off_cut(std::mt19937_64& rng, double r_lo, double r_hi, double margin = 0.05) {
    std::uniform_real_distribution<double> lr(std::log(r_lo), std::log(r_hi));
    std::uniform_real_distribution<double> th(-std::numbers::pi, std::numbers::pi);
    while (true) {
        const auto z = std::polar(std::exp(lr(rng)), th(rng));
        const bool near_cut = z.real() > 1.0 - margin && std::abs(z.imag()) < margin * std::max(1.0, std::abs(z));
        if (!near_cut) return z;
    }
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::abs(b);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace oamband::testing
