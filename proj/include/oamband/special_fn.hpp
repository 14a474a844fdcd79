#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "oamband/errors.hpp"
#include "oamband/quadrature.hpp"

namespace oamband {

// Third argument a of Phi(z, 1, a); a = |l| + 1 in the amplitudes.
struct LerchOrder {
    int a = 1;

    explicit LerchOrder(int a_) : a(a_) {
        if (a_ < 1) throw ValidationError("Lerch order a must be >= 1, got " + std::to_string(a_));
    }
};

struct LerchOptions {
    // Relative accuracy target. Values between 1e-8 and 1e-12 are sensible.
    double rel_tol = 1e-12;
};

namespace detail {

inline constexpr double kBranchCutGuard = 1e-12;
inline constexpr double kSeriesRadius = 0.5;

inline void check_lerch_argument(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError("Lerch argument z must be finite");
    }
    const double scale = std::max(1.0, std::abs(z));
    if (z.real() >= 1.0 - kBranchCutGuard && std::abs(z.imag()) <= kBranchCutGuard * scale) {
        throw DomainError("Lerch argument z = (" + std::to_string(z.real()) + ", " +
                          std::to_string(z.imag()) + ") lies on the branch cut [1, inf)");
    }
}

inline std::complex<double> lerch_series(std::complex<double> z, int a) {
    std::complex<double> sum = 0.0;
    std::complex<double> power = 1.0;
    for (int k = 0; k < 400; ++k) {
        const std::complex<double> term = power / static_cast<double>(k + a);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        power *= z;
    }
    return sum;
}

// Integral representation Phi(z,1,a) = int_0^1 t^(a-1) / (1 - z t) dt.
inline std::complex<double> lerch_integral(std::complex<double> z, int a, double rel_tol) {
    const double exponent = a - 1;
    auto integrand = [z, exponent](double t) -> std::complex<double> {
        const double weight = exponent == 0.0 ? 1.0 : (t == 0.0 ? 0.0 : std::exp(exponent * std::log(t)));
        return weight / (1.0 - z * t);
    };
    quad::Options opts;
    opts.rel_tol = rel_tol;
    opts.max_intervals = 20000;
    const auto r = quad::integrate(integrand, 0.0, 1.0, opts);
    if (!r.converged) {
        throw ConvergenceError("Lerch quadrature did not reach tolerance", std::abs(r.value), r.error);
    }
    return r.value;
}

}  // namespace detail

// Lerch transcendent Phi(z, 1, a) = sum_k z^k / (k + a), continued to the cut
// plane C \ [1, inf). Series for |z| <= 1/2, Gauss-Kronrod quadrature of the
// integral representation elsewhere.
inline std::complex<double> lerch_phi(std::complex<double> z, LerchOrder order,
                                      const LerchOptions& opts = {}) {
    detail::check_lerch_argument(z);
    if (std::abs(z) <= detail::kSeriesRadius) return detail::lerch_series(z, order.a);
    return detail::lerch_integral(z, order.a, opts.rel_tol);
}

// Derivative in z, from the recurrence: [1/(1-z) - a Phi(z,1,a)] / z.
inline std::complex<double> lerch_phi_dz(std::complex<double> z, LerchOrder order,
                                         const LerchOptions& opts = {}) {
    detail::check_lerch_argument(z);
    if (z == 0.0) return 1.0 / static_cast<double>((order.a + 1));
    return (1.0 / (1.0 - z) - static_cast<double>(order.a) * lerch_phi(z, order, opts)) / z;
}

// Yields Phi(z,1,a) for a = 1, 2, 3, ... in order. For |z| above
// kLadderRadius it runs the recurrence Phi(a+1) = (Phi(a) - 1/a) / z upward:
// the homogeneous solution z^-a decays faster than Phi itself, so rounding
// errors do not grow. Closer to the origin every order is evaluated directly.
class LerchLadder {
public:
    static constexpr double kLadderRadius = 1.5;

    explicit LerchLadder(std::complex<double> z, const LerchOptions& opts = {})
        : z_(z), opts_(opts), recur_(std::abs(z) > kLadderRadius) {
        detail::check_lerch_argument(z);
    }

    int order() const noexcept { return a_; }

    // Returns Phi(z, 1, a) for the next a.
    std::complex<double> next() {
        ++a_;
        if (!recur_ || a_ == 1) {
            current_ = a_ == 1 && recur_ ? -std::log(1.0 - z_) / z_ : lerch_phi(z_, LerchOrder(a_), opts_);
        } else {
            current_ = (current_ - 1.0 / static_cast<double>(a_ - 1)) / z_;
        }
        return current_;
    }

private:
    std::complex<double> z_;
    LerchOptions opts_;
    bool recur_;
    int a_ = 0;
    std::complex<double> current_{};
};

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = ax * ax;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(ax) / ax;
}

}  // namespace oamband
