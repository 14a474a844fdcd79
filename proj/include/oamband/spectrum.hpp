#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oamband/errors.hpp"
#include "oamband/params.hpp"
#include "oamband/special_fn.hpp"

namespace oamband {

enum class SpectrumSource { analytic, oracle };

inline const char* to_string(SpectrumSource s) {
    return s == SpectrumSource::analytic ? "analytic" : "oracle";
}

struct SpectrumEntry {
    int ell = 0;
    // Unnormalised projection amplitude; the overall constant is not fixed.
    std::complex<double> amplitude;
    double raw_probability = 0.0;
    // raw_probability * normalization.
    double probability = 0.0;
};

// Measured OAM distribution over the symmetric range -ell_cut..ell_cut,
// stored in ascending ell.
struct SpiralSpectrum {
    std::vector<SpectrumEntry> entries;
    double normalization = 1.0;
    // Estimated mass beyond ell_cut as a fraction of the retained mass.
    double tail_bound = 0.0;
    double tail_tol = 0.0;
    SpectrumSource source = SpectrumSource::analytic;
    DimensionlessParams params;

    int ell_cut() const { return entries.empty() ? -1 : entries.back().ell; }
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    const SpectrumEntry& at(int ell) const {
        const int cut = ell_cut();
        if (std::abs(ell) > cut) throw ValidationError("ell " + std::to_string(ell) + " outside spectrum range");
        return entries[static_cast<std::size_t>(ell + cut)];
    }

    double probability(int ell) const { return at(ell).probability; }

    std::vector<double> probabilities() const {
        std::vector<double> p;
        p.reserve(entries.size());
        for (const auto& e : entries) p.push_back(e.probability);
        return p;
    }

    double total_probability() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.probability;
        return s;
    }
};

struct SpectrumOptions {
    double tail_tol = 1e-9;
    int min_ell = 12;
    int ell_cap = 1'000'000;
    LerchOptions lerch;
};

// Below this crystal length the amplitudes are taken from the closed-form
// thin-crystal limit; the exact bracket loses digits to cancellation as xi -> 1.
inline double thin_crystal_threshold(double gamma) {
    return 1e-6 / (1.0 + 2.0 * gamma * gamma);
}

namespace detail {

inline double log_overlap_ratio(double two_gamma_sq) {
    return std::log(two_gamma_sq / (1.0 + two_gamma_sq));
}

// d/dL_R of xi^a Phi(-2g^2 xi, 1, a) at L_R = 0, with xi'(0) = -i(1 + 2g^2).
inline std::complex<double> thin_bracket_derivative(double two_gamma_sq, int a,
                                                    std::complex<double> phi_at_minus_g) {
    const std::complex<double> dxi(0.0, -(1.0 + two_gamma_sq));
    const std::complex<double> z(-two_gamma_sq, 0.0);
    const std::complex<double> dphi = (1.0 / (1.0 - z) - static_cast<double>(a) * phi_at_minus_g) / z;
    return dxi * (static_cast<double>(a) * phi_at_minus_g - two_gamma_sq * dphi);
}

// Builds the symmetric spectrum from amplitudes for ell = 0..cut.
inline SpiralSpectrum assemble_spectrum(const DimensionlessParams& params,
                                        std::span<const std::complex<double>> half,
                                        SpectrumSource source, double tail_mass, double tail_tol) {
    SpiralSpectrum s;
    s.params = params;
    s.source = source;
    s.tail_tol = tail_tol;
    const int cut = static_cast<int>(half.size()) - 1;
    s.entries.reserve(2 * half.size() - 1);
    double mass = 0.0;
    for (int ell = -cut; ell <= cut; ++ell) {
        const auto amp = half[static_cast<std::size_t>(std::abs(ell))];
        const double p = std::norm(amp);
        s.entries.push_back({ell, amp, p, 0.0});
    }
    // Sum from the tails inward for accuracy.
    for (int k = cut; k >= 1; --k) mass += 2.0 * std::norm(half[static_cast<std::size_t>(k)]);
    mass += std::norm(half[0]);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ConvergenceError("spectrum has no finite positive mass", mass, 0.0);
    }
    s.normalization = 1.0 / mass;
    for (auto& e : s.entries) e.probability = e.raw_probability * s.normalization;
    s.tail_bound = tail_mass / mass;
    return s;
}

}  // namespace detail

// Limit of the projection amplitude as L_R -> 0, taken analytically from the
// L_R-derivative of the bracket in the exact amplitude.
inline std::complex<double> amplitude_thin_crystal_limit(double gamma, int ell,
                                                         const LerchOptions& opts = {}) {
    detail::require_positive(gamma, "gamma");
    const double g2 = 2.0 * gamma * gamma;
    const int a = std::abs(ell) + 1;
    const auto phi = lerch_phi({-g2, 0.0}, LerchOrder(a), opts);
    return std::exp(std::abs(ell) * detail::log_overlap_ratio(g2)) *
           detail::thin_bracket_derivative(g2, a, phi);
}

// Projection amplitude for a pair of p = 0 LG modes with OAM +l and -l,
// with the overall constant left at 1:
//   (1/L_R) (2g^2/(1+2g^2))^|l| [xi^(|l|+1) Phi(-2g^2 xi, 1, |l|+1) - Phi(-2g^2, 1, |l|+1)].
inline std::complex<double> amplitude(const DimensionlessParams& params, int ell,
                                      const LerchOptions& opts = {}) {
    params.validate();
    if (params.l_r < thin_crystal_threshold(params.gamma)) {
        return amplitude_thin_crystal_limit(params.gamma, ell, opts);
    }
    const double g2 = params.two_gamma_sq();
    const int a = std::abs(ell) + 1;
    const std::complex<double> x = xi(params).value;
    const auto phi_xi = lerch_phi(-g2 * x, LerchOrder(a), opts);
    const auto phi_0 = lerch_phi({-g2, 0.0}, LerchOrder(a), opts);
    const std::complex<double> bracket = std::pow(x, a) * phi_xi - phi_0;
    return std::exp(std::abs(ell) * detail::log_overlap_ratio(g2)) * bracket / params.l_r;
}

// Spiral spectrum extended outward from ell = 0 until the extrapolated tail is
// below tail_tol of the mass collected so far. Long crystals give secondary
// lobes in P_l, so a candidate cut c is only accepted once the mass found in
// (c, 2c] plus the extrapolated tail beyond 2c is also below tail_tol.
inline SpiralSpectrum spectrum(const DimensionlessParams& params, const SpectrumOptions& opts = {}) {
    params.validate();
    if (!(opts.tail_tol > 0.0 && opts.tail_tol < 1.0)) {
        throw ValidationError("tail_tol must lie in (0, 1)");
    }
    const double g2 = params.two_gamma_sq();
    const double log_ratio = detail::log_overlap_ratio(g2);
    const bool thin = params.l_r < thin_crystal_threshold(params.gamma);
    const std::complex<double> x = xi(params).value;

    LerchLadder ladder_0({-g2, 0.0}, opts.lerch);
    LerchLadder ladder_xi(thin ? std::complex<double>(-g2, 0.0) : -g2 * x, opts.lerch);

    std::vector<std::complex<double>> half;
    std::vector<double> prob;
    std::complex<double> xi_power = x;
    double mass = 0.0;
    double tail = std::numeric_limits<double>::infinity();
    int candidate = -1;
    double candidate_mass = 0.0;

    // Geometric extrapolation from the largest ratio among the last 5 terms.
    auto extrapolated_tail = [&](int ell) {
        const double p = prob[static_cast<std::size_t>(ell)];
        if (p == 0.0) return 0.0;
        double ratio = 0.0;
        for (int k = ell - 4; k <= ell; ++k) {
            const double prev = prob[static_cast<std::size_t>(k - 1)];
            ratio = std::max(ratio, prev > 0.0 ? prob[static_cast<std::size_t>(k)] / prev : 0.0);
        }
        return ratio < 1.0 ? 2.0 * p * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    };

    for (int ell = 0;; ++ell) {
        if (ell > opts.ell_cap) {
            throw ConvergenceError("spectrum tail did not converge within ell cap " +
                                       std::to_string(opts.ell_cap) + "; partial mass " +
                                       std::to_string(mass),
                                   mass, tail);
        }
        const int a = ell + 1;
        const double envelope = std::exp(ell * log_ratio);
        const auto phi_0 = ladder_0.next();
        std::complex<double> amp;
        if (thin) {
            amp = envelope * detail::thin_bracket_derivative(g2, a, phi_0);
        } else {
            const auto phi_xi = ladder_xi.next();
            amp = envelope * (xi_power * phi_xi - phi_0) / params.l_r;
            xi_power *= x;
        }
        half.push_back(amp);
        const double p = std::norm(amp);
        prob.push_back(p);
        mass += ell == 0 ? p : 2.0 * p;

        if (ell < opts.min_ell) continue;
        if (candidate < 0) {
            tail = extrapolated_tail(ell);
            if (tail < opts.tail_tol * mass) {
                candidate = ell;
                candidate_mass = mass;
            }
        } else if (ell == std::min(2 * candidate, opts.ell_cap)) {
            const double beyond = mass - candidate_mass + extrapolated_tail(ell);
            if (beyond < opts.tail_tol * candidate_mass) {
                half.resize(static_cast<std::size_t>(candidate) + 1);
                tail = beyond;
                break;
            }
            candidate = -1;
        }
    }
    return detail::assemble_spectrum(params, half, SpectrumSource::analytic, tail, opts.tail_tol);
}

inline SpiralSpectrum spectrum(const DimensionlessParams& params, double tail_tol) {
    SpectrumOptions opts;
    opts.tail_tol = tail_tol;
    return spectrum(params, opts);
}

}  // namespace oamband
