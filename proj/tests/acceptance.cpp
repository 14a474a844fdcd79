// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oamband/oamband.hpp"
#include "support.hpp"

using namespace oamband;
using oamband::testing::rel_diff;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome figure_one() {
    const auto t0 = Clock::now();
    const auto s = spectrum(DimensionlessParams(2.0, 0.001), 1e-9);
    const double k = schmidt_number(s);
    const double w = fwhm(s);
    const double t = seconds_since(t0);
    const bool ok = std::abs(k - 17.0) <= 1.7 && std::abs(k / w - 2.5) <= 0.4 && t < 5.0;
    return {ok, fmt("K = %.4f (17 +- 1.7), FWHM = %.4f, K/FWHM = %.3f (2.5 +- 0.4), %.3f s", k, w, k / w, t)};
}

Outcome oracle_grid() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::string where;
    for (double g : {0.5, 1.0, 2.0}) {
        for (double lr : {0.01, 0.1, 1.0}) {
            const DimensionlessParams p(g, lr);
            const cd a0 = amplitude(p, 0);
            const cd o0 = oracle_amplitude(p, 0).value;
            for (int ell : {0, 1, 2, 4, 8}) {
                const double ra = std::abs(amplitude(p, ell) / a0);
                const double ro = std::abs(oracle_amplitude(p, ell).value / o0);
                const double d = rel_diff(ra, ro);
                if (d > worst) {
                    worst = d;
                    where = fmt("gamma %g, L_R %g, l %d", g, lr, ell);
                }
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst < 1e-5 && t < 300.0,
            fmt("45 ratios, max rel. deviation %.2e at %s (< 1e-5), %.1f s", worst, where.c_str(), t)};
}

Outcome lerch_suite() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> order(1, 60);
    const int n = 200;
    double rec = 0.0, log_id = 0.0, integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-2, 1e2);
        const int a = order(rng);
        const cd lhs = lerch_phi(z, LerchOrder(a));
        rec = std::max(rec, rel_diff(1.0 / static_cast<double>(a) + z * lerch_phi(z, LerchOrder(a + 1)), lhs));
    }
    for (int i = 0; i < n; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-3, 1e3);
        log_id = std::max(log_id, rel_diff(lerch_phi(z, LerchOrder(1)), -std::log(1.0 - z) / z));
    }
    for (int i = 0; i < n; ++i) {
        const cd z = oamband::testing::random_off_cut(rng, 1e-2, 1e3);
        const int a = order(rng);
        integral =
            std::max(integral, rel_diff(lerch_phi(z, LerchOrder(a)), oamband::testing::lerch_reference(z, a)));
    }
    return {rec < 1e-10 && log_id < 1e-12 && integral < 1e-9,
            fmt("%d points each: recurrence %.1e (< 1e-10), order-one log %.1e (< 1e-12), integral %.1e (< 1e-9)", n,
                rec, log_id, integral)};
}

Outcome geometric_identities() {
    const double c34 = k_combined(3.0, 4.0);
    double worst = rel_diff(c34, 2.4);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> llr(std::log(1e-6), std::log(10.0));
    for (int i = 0; i < 50; ++i) {
        const double lr = std::exp(llr(rng));
        const double g = gamma_opt(lr);
        const double gen = k_gen(lr);
        worst = std::max({worst, rel_diff(k_ip(g), gen), rel_diff(k_ff(g, lr), gen),
                          rel_diff(k_combined(k_ip(g), k_ff(g, lr)), gen / std::sqrt(2.0))});
    }
    return {worst <= 1e-9, fmt("k_combined(3,4) = %.15g; 50 random L_R at gamma_opt, max rel. error %.1e", c34, worst)};
}

Outcome figure_three() {
    const auto t0 = Clock::now();
    const auto s = sweep_l_r({3.0, 5.0, 7.0}, 1e-4, 1.0, 10, {});
    double worst = 0.0;
    bool dominated = true;
    for (const auto& p : s.points) {
        const auto& r = p.report;
        worst = std::max(worst, std::abs(*r.schmidt_k - *r.k_geometric) / *r.k_geometric);
        dominated = dominated && r.k_gen > *r.schmidt_k && r.k_gen > *r.k_geometric;
    }
    const double t = seconds_since(t0);
    return {worst < 0.25 && dominated && t < 600.0,
            fmt("%zu points, worst analytic/geometric gap %.1f%% (< 25%%), k_gen dominates: %s, %.1f s",
                s.points.size(), 100.0 * worst, dominated ? "yes" : "no", t)};
}

Outcome limits() {
    const double k = schmidt_number(spectrum(DimensionlessParams(2.0, 1e-8), 1e-9));
    const double ff = k_ff(7.0, 10.0);
    const double comb = k_combined(k_ip(7.0), ff);
    const double gap = rel_diff(comb, ff);
    return {std::abs(k - 17.0) <= 0.9 && gap < 0.005,
            fmt("K(gamma 2, L_R 1e-8) = %.4f (17 +- 0.9); gamma 7, L_R 10: k_combined/k_ff - 1 = %.2e (< 0.5%%)", k,
                gap)};
}

bool single_peaked(const std::vector<double>& y) {
    const auto top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (i <= top && !(y[i] > y[i - 1])) return false;
        if (i > top && !(y[i] < y[i - 1])) return false;
    }
    return true;
}

Outcome figure_four() {
    const std::vector<double> lrs{0.001, 0.002, 0.003};
    const auto s = sweep_gamma(lrs, 1.0, 12.0, 45, {});
    bool peaked = true, ordered = true, argmax_ok = true;
    std::string detail;
    std::vector<std::vector<double>> ka, kg;
    for (double lr : lrs) {
        std::vector<double> a, g;
        for (const auto& p : s.curve(lr)) {
            a.push_back(*p.report.schmidt_k);
            g.push_back(*p.report.k_geometric);
        }
        peaked = peaked && single_peaked(a) && single_peaked(g);
        ka.push_back(a);
        kg.push_back(g);
        const double target = gamma_opt(lr);
        const double geo = optimize_gamma(lr, Objective::geometric_combined, 1e-6).gamma_star;
        const double ana = optimize_gamma(lr, Objective::analytic_schmidt, 1e-4).gamma_star;
        const bool ok = rel_diff(geo, target) < 0.05 && rel_diff(ana, target) < 0.20;
        argmax_ok = argmax_ok && ok;
        detail += fmt(" L_R %g: gamma_opt %.3f, geometric %.3f, analytic %.3f;", lr, target, geo, ana);
    }
    for (std::size_t c = 1; c < lrs.size(); ++c) {
        for (std::size_t i = 0; i < ka[c].size(); ++i) {
            ordered = ordered && ka[c - 1][i] > ka[c][i] && kg[c - 1][i] > kg[c][i];
        }
    }
    return {peaked && ordered && argmax_ok,
            fmt("single-peaked: %s, ordered: %s;", peaked ? "yes" : "no", ordered ? "yes" : "no") + detail};
}

Outcome properties() {
    double norm_err = 0.0, sym_err = 0.0, uniform_err = 0.0;
    for (double g : {0.5, 1.0, 2.0, 5.0}) {
        for (double lr : {0.0, 1e-6, 1e-3, 0.1, 1.0, 10.0}) {
            const auto s = spectrum(DimensionlessParams(g, lr), 1e-9);
            norm_err = std::max(norm_err, std::abs(s.total_probability() - 1.0));
            for (int ell = 1; ell <= s.ell_cut(); ++ell) {
                sym_err = std::max(sym_err, rel_diff(s.probability(-ell), s.probability(ell)));
            }
        }
    }
    for (int n = 1; n <= 1000; ++n) {
        const std::vector<double> p(static_cast<std::size_t>(n), 1.0 / n);
        uniform_err = std::max(uniform_err, std::abs(schmidt_number(p) - n) / n);
    }

    const auto dir = std::filesystem::temp_directory_path() / "oamband_acceptance";
    std::filesystem::create_directories(dir);
    const auto spec = spectrum(DimensionlessParams(2.0, 0.001), 1e-9);
    const auto csv_path = (dir / "spectrum.csv").string();
    write_spectrum_csv(spec, csv_path);
    const auto back = read_spectrum_csv(csv_path);
    bool csv_ok = back.ell.size() == spec.entries.size();
    for (std::size_t i = 0; csv_ok && i < spec.entries.size(); ++i) {
        csv_ok = back.probability[i] == spec.entries[i].probability &&
                 back.amplitude_re[i] == spec.entries[i].amplitude.real() &&
                 back.amplitude_im[i] == spec.entries[i].amplitude.imag();
    }
    const auto svg1 = render_svg(sweep_plot(sweep_l_r({3.0, 5.0, 7.0}, 1e-4, 1.0, 10, {})));
    const auto svg2 = render_svg(sweep_plot(sweep_l_r({3.0, 5.0, 7.0}, 1e-4, 1.0, 10, {})));
    const bool svg_ok = svg1 == svg2 && render_svg(spectrum_plot(spec)) == render_svg(spectrum_plot(spec));
    std::filesystem::remove_all(dir);

    return {norm_err <= 1e-9 && sym_err <= 1e-12 && uniform_err <= 1e-9 && csv_ok && svg_ok,
            fmt("normalisation %.1e, symmetry %.1e, uniform K %.1e, CSV round-trip %s, SVG deterministic %s",
                norm_err, sym_err, uniform_err, csv_ok ? "exact" : "MISMATCH", svg_ok ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Figure 1 spectrum", figure_one},
        {"Oracle equivalence", oracle_grid},
        {"Lerch transcendent suite", lerch_suite},
        {"Geometric identities", geometric_identities},
        {"Figure 3 sweep", figure_three},
        {"Limit checks", limits},
        {"Figure 4 sweep", figure_four},
        {"Property suites", properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
