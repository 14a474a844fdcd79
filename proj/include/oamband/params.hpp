#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "oamband/errors.hpp"

namespace oamband {

namespace detail {

inline void require_positive(double value, const char* field) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw ValidationError(std::string(field) + " must be positive and finite, got " +
                              std::to_string(value));
    }
}

inline void require_non_negative(double value, const char* field) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError(std::string(field) + " must be non-negative and finite, got " +
                              std::to_string(value));
    }
}

}  // namespace detail

// Physical generation and detection parameters, SI units. Signal and idler
// detection modes share one waist.
struct ExperimentConfig {
    double pump_waist_m = 0.0;
    double wavelength_m = 0.0;
    double crystal_length_m = 0.0;
    double detection_waist_m = 0.0;

    // Pump wave number 2*pi/lambda.
    double pump_wavenumber() const { return 2.0 * std::numbers::pi / wavelength_m; }

    double rayleigh_range_m() const {
        return std::numbers::pi * pump_waist_m * pump_waist_m / wavelength_m;
    }

    // A zero crystal length is the thin-crystal limit and is accepted.
    void validate() const {
        detail::require_positive(pump_waist_m, "pump_waist_m");
        detail::require_positive(wavelength_m, "wavelength_m");
        detail::require_non_negative(crystal_length_m, "crystal_length_m");
        detail::require_positive(detection_waist_m, "detection_waist_m");
    }
};

// The reduced pair every computation consumes: gamma = w_p / w_s and the
// crystal length in units of the pump Rayleigh range.
struct DimensionlessParams {
    double gamma = 1.0;
    double l_r = 0.0;
    std::optional<double> rayleigh_range_m;

    DimensionlessParams() = default;
    DimensionlessParams(double gamma_, double l_r_,
                        std::optional<double> z_r = std::nullopt)
        : gamma(gamma_), l_r(l_r_), rayleigh_range_m(z_r) {
        validate();
    }

    void validate() const {
        detail::require_positive(gamma, "gamma");
        detail::require_non_negative(l_r, "l_r");
        if (rayleigh_range_m) detail::require_positive(*rayleigh_range_m, "rayleigh_range_m");
    }

    // 2 gamma^2, the combination that appears throughout the amplitudes.
    double two_gamma_sq() const { return 2.0 * gamma * gamma; }
};

inline DimensionlessParams reduce(const ExperimentConfig& config) {
    config.validate();
    const double z_r = config.rayleigh_range_m();
    return DimensionlessParams(config.pump_waist_m / config.detection_waist_m,
                               config.crystal_length_m / z_r, z_r);
}

struct XiParam {
    std::complex<double> value;
};

// xi = (i + L_R) / (i - 2 gamma^2 L_R). The denominator has modulus >= 1.
inline XiParam xi(const DimensionlessParams& params) {
    if (params.l_r == 0.0) return {std::complex<double>(1.0, 0.0)};
    const std::complex<double> i(0.0, 1.0);
    return {(i + params.l_r) / (i - params.two_gamma_sq() * params.l_r)};
}

}  // namespace oamband
