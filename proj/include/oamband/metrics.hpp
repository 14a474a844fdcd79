#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "oamband/errors.hpp"
#include "oamband/geometric.hpp"
#include "oamband/params.hpp"
#include "oamband/spectrum.hpp"

namespace oamband {

// (sum p)^2 / sum p^2, which is 1 / sum p^2 for a normalised distribution.
inline double schmidt_number(std::span<const double> probabilities) {
    if (probabilities.empty()) throw ValidationError("Schmidt number of an empty distribution");
    double total = 0.0;
    double squares = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("probabilities must be finite and >= 0");
        total += p;
        squares += p * p;
    }
    if (!(squares > 0.0)) throw ValidationError("Schmidt number of an all-zero distribution");
    return total * total / squares;
}

inline double schmidt_number(const SpiralSpectrum& spectrum) {
    if (spectrum.empty()) throw ValidationError("Schmidt number of an empty spectrum");
    return schmidt_number(spectrum.probabilities());
}

namespace detail {

// Distance from the peak at which one flank first falls to half the peak,
// interpolating linearly between integer positions.
inline double half_max_distance(std::span<const double> flank, double half) {
    for (std::size_t k = 1; k < flank.size(); ++k) {
        if (flank[k] > flank[k - 1]) throw ShapeError("FWHM: flank is not monotone before the half maximum");
        if (flank[k] <= half) {
            for (std::size_t j = k + 1; j < flank.size(); ++j) {
                if (flank[j] > half) throw ShapeError("FWHM: distribution rises above half maximum again");
            }
            const double drop = flank[k - 1] - flank[k];
            return static_cast<double>(k - 1) + (drop > 0.0 ? (flank[k - 1] - half) / drop : 1.0);
        }
    }
    if (flank.size() == 1) return 0.0;
    throw ShapeError("FWHM: half maximum not reached inside the retained range");
}

}  // namespace detail

// Full width at half maximum of a distribution over consecutive integers,
// peaked at index `peak`. A lone point has width 0.
inline double fwhm(std::span<const double> probabilities, std::size_t peak) {
    if (probabilities.empty() || peak >= probabilities.size()) throw ValidationError("FWHM: bad peak index");
    const double top = probabilities[peak];
    for (double p : probabilities) {
        if (p > top) throw ShapeError("FWHM: maximum is not at the designated peak");
    }
    const double half = 0.5 * top;
    std::vector<double> left(probabilities.begin(), probabilities.begin() + static_cast<std::ptrdiff_t>(peak) + 1);
    std::vector<double> right(probabilities.begin() + static_cast<std::ptrdiff_t>(peak), probabilities.end());
    std::reverse(left.begin(), left.end());
    const bool lone = left.size() == 1 && right.size() == 1;
    if (lone) return 0.0;
    return detail::half_max_distance(left, half) + detail::half_max_distance(right, half);
}

// Requires the maximum at ell = 0.
inline double fwhm(const SpiralSpectrum& spectrum) {
    if (spectrum.empty()) throw ValidationError("FWHM of an empty spectrum");
    const auto p = spectrum.probabilities();
    return fwhm(p, static_cast<std::size_t>(spectrum.ell_cut()));
}

// Equivalent symmetric range: K = 1 + 2 |l_max|.
inline double ell_max_from_k(double k) {
    if (!(k >= 1.0) || !std::isfinite(k)) throw ValidationError("ell_max_from_k requires finite k >= 1");
    return (k - 1.0) / 2.0;
}

struct BandwidthReport {
    DimensionlessParams params;
    // From a spectrum, when one was computed.
    std::optional<double> schmidt_k;
    std::optional<double> fwhm;
    std::optional<double> ell_max;
    // Generation bandwidth; infinite at L_R = 0.
    double k_gen = std::numeric_limits<double>::infinity();
    // Geometric model, when requested.
    std::optional<double> k_ip;
    std::optional<double> k_ff;
    std::optional<double> k_geometric;
};

inline void add_geometric(BandwidthReport& report) {
    const auto& p = report.params;
    report.k_ip = k_ip(p.gamma);
    report.k_ff = p.l_r > 0.0 ? k_ff(p.gamma, p.l_r) : std::numeric_limits<double>::infinity();
    report.k_geometric = k_combined(*report.k_ip, *report.k_ff);
}

inline void add_spectrum(BandwidthReport& report, const SpiralSpectrum& spectrum) {
    report.schmidt_k = schmidt_number(spectrum);
    report.fwhm = fwhm(spectrum);
    report.ell_max = ell_max_from_k(*report.schmidt_k);
}

inline BandwidthReport geometric_report(const DimensionlessParams& params) {
    params.validate();
    BandwidthReport r;
    r.params = params;
    if (params.l_r > 0.0) r.k_gen = k_gen(params.l_r);
    add_geometric(r);
    return r;
}

inline BandwidthReport full_report(const SpiralSpectrum& spectrum) {
    BandwidthReport r = geometric_report(spectrum.params);
    add_spectrum(r, spectrum);
    return r;
}

}  // namespace oamband
