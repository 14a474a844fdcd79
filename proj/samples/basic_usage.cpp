// Spectrum, bandwidth numbers and the optimal gamma for one crystal length.

#include <cstdio>

#include "oamband/oamband.hpp"

int main() {
    using namespace oamband;

    // 1 mm pump waist at 355 nm, 2 mm crystal, 0.5 mm detection waist.
    ExperimentConfig config;
    config.pump_waist_m = 1e-3;
    config.wavelength_m = 355e-9;
    config.crystal_length_m = 2e-3;
    config.detection_waist_m = 0.5e-3;
    const DimensionlessParams p = reduce(config);
    std::printf("gamma = %g, L_R = %.4g, z_R = %.4g m\n", p.gamma, p.l_r, *p.rayleigh_range_m);

    const SpiralSpectrum s = spectrum(p, 1e-9);
    std::printf("l range +-%d, K = %.4f, FWHM = %.4f\n", s.ell_cut(), schmidt_number(s), fwhm(s));
    for (int ell = 0; ell <= 4; ++ell) std::printf("  P(%d) = %.6f\n", ell, s.probability(ell));

    const auto b = bounds(p);
    std::printf("k_gen = %.4g, k_ip = %.4g, k_ff = %.4g, combined = %.4g (%s)\n", b.k_gen, b.k_ip, b.k_ff,
                b.k_combined, to_string(b.regime));

    const auto best = optimize_gamma(p.l_r, Objective::analytic_schmidt, 1e-4);
    std::printf("best gamma = %.4f (K = %.3f), detection waist %.4g m\n", best.gamma_star, best.k_star,
                config.pump_waist_m / best.gamma_star);
}
