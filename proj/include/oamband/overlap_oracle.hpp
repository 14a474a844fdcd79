#pragma once

// Brute-force evaluation of the projection amplitudes: the overlap of the
// down-converted two-photon amplitude with two p = 0 LG detection modes of
// opposite OAM, integrated numerically in transverse momentum space.
//
// Variables are u = q w_p. After the two global angles are integrated out the
// amplitude is, up to an l-independent constant,
//
//   int du_s du_i dphi  u_s u_i (u_s u_i / 2g^2)^|l| / |l|!
//       exp(-(u_s^2 + u_i^2)/4g^2) exp(-|u_s + u_i|^2 / 4)
//       F((L_R/8) |u_s - u_i|^2) exp(i l phi)
//
// with phi the angle between the two momenta and F the phase-matching
// function. The full phase-matching factor is F(x) = sinc(x) exp(-i x), whose
// modulus squared is the usual sinc^2 efficiency; the bare real sinc is kept
// as an option. Each detection mode contributes (-i)^|l| on transformation to
// momentum space, a factor (-1)^l for the pair, which is applied to the
// result. With these conventions the oracle equals the closed-form amplitude
// up to one l-independent complex constant.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "oamband/errors.hpp"
#include "oamband/params.hpp"
#include "oamband/quadrature.hpp"
#include "oamband/special_fn.hpp"
#include "oamband/spectrum.hpp"

namespace oamband {

enum class PhaseMatching {
    // sinc(x) exp(-ix): the longitudinal phase is retained.
    full,
    // sinc(x) alone.
    real_sinc,
    // F = 1, the thin-crystal limit.
    none,
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    // In units of u = q w_p; 0 selects default_radial_cut().
    double radial_cut = 0.0;
    int max_subdivisions = 4000;
    PhaseMatching phase_matching = PhaseMatching::full;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1e-2)) throw ValidationError("rel_tol must lie in (0, 1e-2)");
        if (!(radial_cut >= 0.0) || !std::isfinite(radial_cut)) {
            throw ValidationError("radial_cut must be positive (or 0 for the default)");
        }
        if (max_subdivisions < 1) throw ValidationError("max_subdivisions must be >= 1");
    }
};

// 12 max(1, g), widened for large |l| where the mode ring moves outward to
// u ~ g sqrt(2|l|).
inline double default_radial_cut(double gamma, int ell) {
    const double ring = gamma * (std::sqrt(8.0 * std::abs(ell)) + 10.0);
    return std::max(12.0 * std::max(1.0, gamma), ring);
}

struct OracleAmplitude {
    std::complex<double> value;
    double error = 0.0;
};

namespace detail {

inline std::complex<double> phase_matching_factor(double x, PhaseMatching pm) {
    switch (pm) {
        case PhaseMatching::full: return sinc(x) * std::complex<double>(std::cos(x), -std::sin(x));
        case PhaseMatching::real_sinc: return {sinc(x), 0.0};
        case PhaseMatching::none: break;
    }
    return {1.0, 0.0};
}

// Nodes of the finest periodic trapezoid grid over the relative angle.
class AngularTable {
public:
    static constexpr int kStart = 64;
    static constexpr int kMax = 1 << 14;

    explicit AngularTable(int ell) : cosines_(kMax), rotation_(kMax) {
        for (int k = 0; k < kMax; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / kMax;
            cosines_[static_cast<std::size_t>(k)] = std::cos(phi);
            rotation_[static_cast<std::size_t>(k)] = {std::cos(ell * phi), std::sin(ell * phi)};
        }
    }

    double cosine(int k) const { return cosines_[static_cast<std::size_t>(k)]; }
    std::complex<double> rotation(int k) const { return rotation_[static_cast<std::size_t>(k)]; }

private:
    std::vector<double> cosines_;
    std::vector<std::complex<double>> rotation_;
};

struct Tolerance {
    double rel = 0.0;
    double abs = 0.0;
};

// Periodic trapezoid rule over the relative angle, doubled from 64 points
// until successive estimates agree, relative to the integrand's envelope or
// in absolute terms.
template <class F>
std::complex<double> angular_integral(F&& f, const AngularTable& table, Tolerance tol) {
    const double two_pi = 2.0 * std::numbers::pi;
    std::complex<double> sum = 0.0;
    double envelope = 0.0;
    // Visits the nodes of the n-point grid with index = offset (mod stride).
    auto accumulate = [&](int n, int stride, int offset) {
        const int step = AngularTable::kMax / n;
        for (int k = offset; k < n; k += stride) {
            const int idx = k * step;
            const std::complex<double> v = f(table.cosine(idx));
            sum += v * table.rotation(idx);
            envelope += std::abs(v);
        }
    };

    int n = AngularTable::kStart;
    accumulate(n, 1, 0);
    std::complex<double> estimate = sum * (two_pi / n);
    while (n < AngularTable::kMax) {
        accumulate(2 * n, 2, 1);
        n *= 2;
        const std::complex<double> refined = sum * (two_pi / n);
        const double scale = envelope * (two_pi / n);
        const bool done = std::abs(refined - estimate) <= std::max(tol.rel * scale, tol.abs);
        estimate = refined;
        if (done) break;
    }
    return estimate;
}

struct OracleGeometry {
    double inv_4g2;       // 1 / (4 gamma^2)
    double inv_2g2;       // 1 / (2 gamma^2)
    double sinc_scale;    // L_R / 8
    double log_norm;      // -log(|l|!)
    int abs_ell;
    PhaseMatching pm;
    const AngularTable* table;
};

inline std::complex<double> oracle_radial_integrand(const OracleGeometry& g, double us, double ui,
                                                    Tolerance angular_tol) {
    if (us == 0.0 || ui == 0.0) return 0.0;
    const double r2 = us * us + ui * ui;
    const double cross = 2.0 * us * ui;
    const double radial = std::log(us * ui) + g.abs_ell * std::log(us * ui * g.inv_2g2) + g.log_norm -
                          r2 * g.inv_4g2 - 0.25 * r2;
    auto angular = [&](double c) -> std::complex<double> {
        const double pump = -0.25 * cross * c;
        return std::exp(radial + pump) * phase_matching_factor(g.sinc_scale * (r2 - cross * c), g.pm);
    };
    return angular_integral(angular, *g.table, angular_tol);
}

// cut_u is the radial cut in units of u = q w_p, whatever variable the
// caller integrates in.
inline quad::Options radial_options(const QuadratureSpec& spec, double l_r, double cut_u, double rel_tol) {
    quad::Options o;
    o.rel_tol = rel_tol;
    o.max_intervals = spec.max_subdivisions;
    // The sinc oscillates many times inside the envelope for long crystals;
    // start from panels narrow enough to resolve one period.
    if (l_r > 10.0) {
        const double width = std::numbers::pi * 8.0 / (l_r * cut_u);
        o.initial_panels = static_cast<int>(std::ceil(cut_u / width));
    } else {
        o.initial_panels = 4;
    }
    return o;
}

// Nested adaptive integration over (u_s, u_i). A coarse fixed-rule pass
// fixes the magnitude of the result, which sets the absolute floors of the
// adaptive pass: near the origin the l-th angular harmonic is far below the
// rounding level of its envelope, so pure relative tolerances are unreachable.
template <class Radial>
OracleAmplitude nested_overlap(Radial&& radial, double cut, double cut_u, double l_r,
                               const QuadratureSpec& spec, const std::string& label) {
    auto run = [&](const quad::Options& outer_opts, const quad::Options& inner_opts, Tolerance angular,
                   bool& inner_ok, double& inner_error) {
        auto outer = [&](double us) -> std::complex<double> {
            auto inner = [&](double ui) { return radial(us, ui, angular); };
            const auto r = quad::integrate(inner, 0.0, cut, inner_opts);
            inner_ok = inner_ok && r.converged;
            inner_error = std::max(inner_error, r.error);
            return r.value;
        };
        return quad::integrate(outer, 0.0, cut, outer_opts);
    };

    quad::Options coarse = radial_options(spec, l_r, cut_u, 1e-3);
    coarse.initial_panels = std::max(coarse.initial_panels, 8);
    coarse.max_intervals = coarse.initial_panels;
    bool ignored_ok = true;
    double ignored_err = 0.0;
    const double magnitude = std::abs(run(coarse, coarse, {1e-6, 0.0}, ignored_ok, ignored_err).value);

    quad::Options outer_opts = radial_options(spec, l_r, cut_u, spec.rel_tol);
    outer_opts.abs_tol = 0.5 * spec.rel_tol * magnitude;
    quad::Options inner_opts = radial_options(spec, l_r, cut_u, 0.1 * spec.rel_tol);
    inner_opts.abs_tol = 0.05 * spec.rel_tol * magnitude / cut;
    const Tolerance angular{1e-3 * spec.rel_tol, 0.01 * spec.rel_tol * magnitude / (cut * cut)};

    bool inner_ok = true;
    double inner_error = 0.0;
    const auto r = run(outer_opts, inner_opts, angular, inner_ok, inner_error);
    const double error = r.error + cut * inner_error;
    if (!r.converged || !inner_ok) {
        throw ConvergenceError("overlap quadrature exhausted its subdivision budget for " + label,
                               std::abs(r.value), error);
    }
    return {r.value, error};
}

}  // namespace detail

inline OracleAmplitude oracle_amplitude(const DimensionlessParams& params, int ell,
                                        const QuadratureSpec& spec = {}) {
    params.validate();
    spec.validate();
    const double g2 = params.gamma * params.gamma;
    const detail::AngularTable table(ell);
    const detail::OracleGeometry geo{1.0 / (4.0 * g2),
                                     1.0 / (2.0 * g2),
                                     params.l_r / 8.0,
                                     -std::lgamma(std::abs(ell) + 1.0),
                                     std::abs(ell),
                                     spec.phase_matching,
                                     &table};
    const double cut = spec.radial_cut > 0.0 ? spec.radial_cut : default_radial_cut(params.gamma, ell);
    auto radial = [&](double us, double ui, detail::Tolerance tol) {
        return detail::oracle_radial_integrand(geo, us, ui, tol);
    };
    auto r = detail::nested_overlap(radial, cut, cut, params.l_r, spec, "ell = " + std::to_string(ell));
    if (ell % 2 != 0) r.value = -r.value;
    return r;
}

// Same overlap written in physical variables (q in 1/m, explicit w_p, w_s, L
// and k_p). Used to check the dimensionless reduction.
inline OracleAmplitude oracle_amplitude_physical(const ExperimentConfig& config, int ell,
                                                 const QuadratureSpec& spec = {}) {
    config.validate();
    spec.validate();
    const double wp = config.pump_waist_m;
    const double w = config.detection_waist_m;
    const double kp = config.pump_wavenumber();
    const double length = config.crystal_length_m;
    const int abs_ell = std::abs(ell);
    const double cut_u = spec.radial_cut > 0.0 ? spec.radial_cut : default_radial_cut(wp / w, ell);
    const double cut = cut_u / wp;
    // Pair of LG normalisations, w^2 / (2 pi |l|!).
    const double log_norm = std::log(w * w / (2.0 * std::numbers::pi)) - std::lgamma(abs_ell + 1.0);
    const detail::AngularTable table(ell);

    auto radial_fn = [&](double qs, double qi, detail::Tolerance tol) -> std::complex<double> {
        if (qs == 0.0 || qi == 0.0) return 0.0;
        const double r2 = qs * qs + qi * qi;
        const double cross = 2.0 * qs * qi;
        const double radial = std::log(qs * qi) + log_norm + abs_ell * std::log(qs * w / std::sqrt(2.0)) +
                              abs_ell * std::log(qi * w / std::sqrt(2.0)) - r2 * w * w / 4.0;
        auto angular = [&](double c) -> std::complex<double> {
            const double pump = -wp * wp / 4.0 * (r2 + cross * c);
            const double x = length / (4.0 * kp) * (r2 - cross * c);
            return std::exp(radial + pump) * detail::phase_matching_factor(x, spec.phase_matching);
        };
        return detail::angular_integral(angular, table, tol);
    };
    auto r = detail::nested_overlap(radial_fn, cut, cut_u, reduce(config).l_r, spec,
                                    "physical ell = " + std::to_string(ell));
    if (ell % 2 != 0) r.value = -r.value;
    return r;
}

inline SpiralSpectrum oracle_spectrum(const DimensionlessParams& params, int ell_range,
                                      const QuadratureSpec& spec = {}) {
    if (ell_range < 1) throw ValidationError("ell_range must be >= 1");
    std::vector<std::complex<double>> half;
    half.reserve(static_cast<std::size_t>(ell_range) + 1);
    for (int ell = 0; ell <= ell_range; ++ell) half.push_back(oracle_amplitude(params, ell, spec).value);
    return detail::assemble_spectrum(params, half, SpectrumSource::oracle, 0.0, 0.0);
}

}  // namespace oamband
