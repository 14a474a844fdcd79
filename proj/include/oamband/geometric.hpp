#pragma once

// Closed-form bandwidth bounds from the phase-matching cone and mode-overlap
// arguments, and the detection ratio that balances them.

#include <cmath>
#include <numbers>

#include "oamband/errors.hpp"
#include "oamband/params.hpp"

namespace oamband {

// Generation bandwidth 1 + 2 sqrt(pi / L_R).
inline double k_gen(double l_r) {
    detail::require_positive(l_r, "l_r");
    return 1.0 + 2.0 * std::sqrt(std::numbers::pi / l_r);
}

// Image-plane bandwidth 1 + 4 gamma^2.
inline double k_ip(double gamma) {
    detail::require_positive(gamma, "gamma");
    return 1.0 + 4.0 * gamma * gamma;
}

// Far-field bandwidth 1 + pi / (gamma^2 L_R).
inline double k_ff(double gamma, double l_r) {
    detail::require_positive(gamma, "gamma");
    detail::require_positive(l_r, "l_r");
    return 1.0 + std::numbers::pi / (gamma * gamma * l_r);
}

// Width of the convolution of two normal distributions of widths k_ip and
// k_ff. An infinite constituent drops out.
inline double k_combined(double k_ip_value, double k_ff_value) {
    if (!(k_ip_value > 0.0) || !(k_ff_value > 0.0)) {
        throw ValidationError("k_combined requires positive bandwidths");
    }
    return 1.0 / std::sqrt(1.0 / (k_ip_value * k_ip_value) + 1.0 / (k_ff_value * k_ff_value));
}

// Detection ratio (pi / 4 L_R)^(1/4) for which k_ip = k_ff = k_gen.
inline double gamma_opt(double l_r) {
    detail::require_positive(l_r, "l_r");
    return std::pow(std::numbers::pi / (4.0 * l_r), 0.25);
}

enum class Regime { short_crystal, crossover, long_crystal };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::short_crystal: return "short_crystal";
        case Regime::crossover: return "crossover";
        case Regime::long_crystal: return "long_crystal";
    }
    return "unknown";
}

// Crossover crystal length pi / (4 gamma^4), where k_ip and k_ff meet
// (ignoring the +1 terms).
inline double crossover_length(double gamma) {
    detail::require_positive(gamma, "gamma");
    return std::numbers::pi / (4.0 * std::pow(gamma, 4));
}

// A decade either side of the crossover length.
inline Regime classify_regime(double gamma, double l_r) {
    const double edge = crossover_length(gamma);
    if (l_r < 0.1 * edge) return Regime::short_crystal;
    if (l_r > 10.0 * edge) return Regime::long_crystal;
    return Regime::crossover;
}

struct GeometricBounds {
    double k_gen = 0.0;
    double k_ip = 0.0;
    double k_ff = 0.0;
    double k_combined = 0.0;
    double gamma_opt = 0.0;
    Regime regime = Regime::crossover;
    // The combination formula can fall below one mode when both constituents
    // approach 1; the value is reported as computed and flagged here.
    bool below_single_mode = false;
};

inline GeometricBounds bounds(const DimensionlessParams& params) {
    params.validate();
    detail::require_positive(params.l_r, "l_r");
    GeometricBounds b;
    b.k_gen = k_gen(params.l_r);
    b.k_ip = k_ip(params.gamma);
    b.k_ff = k_ff(params.gamma, params.l_r);
    b.k_combined = k_combined(b.k_ip, b.k_ff);
    b.gamma_opt = gamma_opt(params.l_r);
    b.regime = classify_regime(params.gamma, params.l_r);
    b.below_single_mode = b.k_combined < 1.0;
    return b;
}

}  // namespace oamband
