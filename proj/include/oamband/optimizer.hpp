#pragma once

// Maximisation of the measured bandwidth over gamma at fixed crystal length,
// and the parameter sweeps behind the bandwidth-versus-length and
// bandwidth-versus-gamma curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "oamband/errors.hpp"
#include "oamband/geometric.hpp"
#include "oamband/metrics.hpp"
#include "oamband/parallel.hpp"
#include "oamband/params.hpp"
#include "oamband/spectrum.hpp"

namespace oamband {

enum class Objective { analytic_schmidt, geometric_combined };

inline const char* to_string(Objective o) {
    return o == Objective::analytic_schmidt ? "analytic" : "geometric";
}

struct ModelSet {
    bool analytic = true;
    bool geometric = true;
};

enum class SweepAxis { over_l_r, over_gamma };
enum class GeneratedBy { analytic, geometric, both };

inline GeneratedBy generated_by(ModelSet m) {
    if (m.analytic && m.geometric) return GeneratedBy::both;
    return m.analytic ? GeneratedBy::analytic : GeneratedBy::geometric;
}

inline const char* to_string(GeneratedBy g) {
    switch (g) {
        case GeneratedBy::analytic: return "analytic";
        case GeneratedBy::geometric: return "geometric";
        case GeneratedBy::both: return "both";
    }
    return "unknown";
}

struct SweepPoint {
    double l_r = 0.0;
    double gamma = 0.0;
    BandwidthReport report;
};

// Points are grouped into curves (one per fixed gamma for an L_R sweep, one
// per fixed L_R for a gamma sweep) and strictly increasing along the axis
// inside each curve.
struct SweepResult {
    SweepAxis axis = SweepAxis::over_l_r;
    GeneratedBy generated_by = GeneratedBy::both;
    std::vector<SweepPoint> points;
    std::vector<std::pair<std::string, std::string>> metadata;

    // Fixed parameter of each curve, in order of appearance.
    std::vector<double> curve_keys() const {
        std::vector<double> keys;
        for (const auto& p : points) {
            const double key = axis == SweepAxis::over_l_r ? p.gamma : p.l_r;
            if (keys.empty() || keys.back() != key) keys.push_back(key);
        }
        return keys;
    }

    std::vector<SweepPoint> curve(double key) const {
        std::vector<SweepPoint> out;
        for (const auto& p : points) {
            if ((axis == SweepAxis::over_l_r ? p.gamma : p.l_r) == key) out.push_back(p);
        }
        return out;
    }
};

// Evaluates one point with the requested models. k_gen is always filled.
inline BandwidthReport evaluate_point(const DimensionlessParams& params, ModelSet models, double tail_tol) {
    BandwidthReport r;
    r.params = params;
    if (params.l_r > 0.0) r.k_gen = k_gen(params.l_r);
    if (models.geometric) add_geometric(r);
    if (models.analytic) add_spectrum(r, spectrum(params, tail_tol));
    return r;
}

// Among consecutive points with the same curve key, the axis value must
// strictly increase.
inline bool sweep_is_ordered(const SweepResult& s) {
    for (std::size_t i = 1; i < s.points.size(); ++i) {
        const auto& a = s.points[i - 1];
        const auto& b = s.points[i];
        const bool over_lr = s.axis == SweepAxis::over_l_r;
        const bool same_curve = over_lr ? a.gamma == b.gamma : a.l_r == b.l_r;
        if (same_curve && !((over_lr ? b.l_r : b.gamma) > (over_lr ? a.l_r : a.gamma))) return false;
    }
    return true;
}

// Log grid with exact endpoints and at least points_per_decade per decade.
inline std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0 && hi > lo) || !std::isfinite(hi)) throw ValidationError("log grid requires 0 < min < max");
    if (points_per_decade < 1) throw ValidationError("points_per_decade must be >= 1");
    const double decades = std::log10(hi / lo);
    const int intervals = std::max(1, static_cast<int>(std::ceil(decades * points_per_decade - 1e-9)));
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    const double step = std::log(hi / lo) / intervals;
    for (int i = 0; i <= intervals; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(i * step);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("linear grid requires min < max");
    if (n < 2) throw ValidationError("linear grid requires at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    grid.back() = hi;
    return grid;
}

inline SweepResult sweep_l_r(const std::vector<double>& gammas, double l_r_min, double l_r_max,
                             int points_per_decade, ModelSet models, double tail_tol = 1e-9) {
    if (!(l_r_min > 0.0)) throw ValidationError("l_r_min must be positive");
    if (!models.analytic && !models.geometric) throw ValidationError("no model selected");
    for (double g : gammas) detail::require_positive(g, "gamma");
    const auto grid = log_grid(l_r_min, l_r_max, points_per_decade);

    SweepResult s;
    s.axis = SweepAxis::over_l_r;
    s.generated_by = generated_by(models);
    for (double g : gammas) {
        for (double lr : grid) s.points.push_back({lr, g, {}});
    }
    parallel_for(s.points.size(), [&](std::size_t i) {
        auto& p = s.points[i];
        p.report = evaluate_point(DimensionlessParams(p.gamma, p.l_r), models, tail_tol);
    });
    s.metadata.emplace_back("generation_curve", "k_gen");
    return s;
}

inline SweepResult sweep_gamma(const std::vector<double>& l_r_values, double gamma_min, double gamma_max,
                               int n_points, ModelSet models = {}, double tail_tol = 1e-9) {
    if (!(gamma_min > 0.0)) throw ValidationError("gamma_min must be positive");
    if (!models.analytic && !models.geometric) throw ValidationError("no model selected");
    for (double lr : l_r_values) detail::require_positive(lr, "l_r");
    const auto grid = linear_grid(gamma_min, gamma_max, n_points);

    SweepResult s;
    s.axis = SweepAxis::over_gamma;
    s.generated_by = generated_by(models);
    for (double lr : l_r_values) {
        for (double g : grid) s.points.push_back({lr, g, {}});
    }
    parallel_for(s.points.size(), [&](std::size_t i) {
        auto& p = s.points[i];
        p.report = evaluate_point(DimensionlessParams(p.gamma, p.l_r), models, tail_tol);
    });
    s.metadata.emplace_back("typical_experimental_gamma_range", "1.5,4");
    return s;
}

struct OptimizeOptions {
    double gamma_lo = 0.1;
    double gamma_hi = 100.0;
    // Tail tolerance of the analytic objective during the search, and for the
    // final re-evaluation.
    double search_tail_tol = 1e-7;
    double final_tail_tol = 1e-9;
    int coarse_points = 16;
    int max_iterations = 500;
};

struct OptimizationResult {
    double l_r = 0.0;
    double gamma_star = 0.0;
    double k_star = 0.0;
    double gamma_opt_formula = 0.0;
    int evaluations = 0;
    bool converged = false;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double k_bracket_lo = 0.0;
    double k_bracket_hi = 0.0;
    // Maximiser within tolerance of the search boundary.
    bool at_boundary = false;
    // Coarse-grid check disagreed with the golden-section result and the
    // search was redone inside the coarse bracket.
    bool used_fallback = false;
    std::string warning;
};

namespace detail {

struct GoldenOutcome {
    double lo;
    double hi;
    bool converged;
};

// Golden-section maximisation of f on [lo, hi] until hi - lo <= width.
template <class F>
GoldenOutcome golden_maximise(F& f, double lo, double hi, double width, int max_iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    int it = 0;
    while (hi - lo > width && it++ < max_iterations) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return {lo, hi, hi - lo <= width};
}

}  // namespace detail

inline double objective_value(Objective objective, double gamma, double l_r, double tail_tol) {
    const DimensionlessParams p(gamma, l_r);
    if (objective == Objective::geometric_combined) return k_combined(k_ip(gamma), k_ff(gamma, l_r));
    return schmidt_number(spectrum(p, tail_tol));
}

// Maximises the bandwidth over log(gamma). tol is the relative width of the
// final gamma bracket.
inline OptimizationResult optimize_gamma(double l_r, Objective objective, double tol,
                                         const OptimizeOptions& opts = {}) {
    detail::require_positive(l_r, "l_r");
    detail::require_positive(tol, "tol");
    if (!(opts.gamma_lo > 0.0 && opts.gamma_hi > opts.gamma_lo)) throw ValidationError("bad gamma search range");

    OptimizationResult res;
    res.l_r = l_r;
    res.gamma_opt_formula = gamma_opt(l_r);

    auto f = [&](double log_gamma) {
        ++res.evaluations;
        return objective_value(objective, std::exp(log_gamma), l_r, opts.search_tail_tol);
    };
    const double lo = std::log(opts.gamma_lo);
    const double hi = std::log(opts.gamma_hi);
    const double width = std::log1p(tol);

    auto outcome = detail::golden_maximise(f, lo, hi, width, opts.max_iterations);
    const double golden_mid = 0.5 * (outcome.lo + outcome.hi);

    // Unimodality is assumed above; confirm it on a coarse grid.
    const int n = std::max(3, opts.coarse_points);
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
        ys[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }
    const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    bool unimodal = true;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (i <= best && ys[i] < ys[i - 1]) unimodal = false;
        if (i > best && ys[i] > ys[i - 1]) unimodal = false;
    }
    const double grid_lo = xs[best == 0 ? 0 : best - 1];
    const double grid_hi = xs[std::min(best + 1, xs.size() - 1)];
    if (!unimodal || golden_mid < grid_lo || golden_mid > grid_hi) {
        res.used_fallback = true;
        outcome = detail::golden_maximise(f, grid_lo, grid_hi, width, opts.max_iterations);
    }

    // Final candidates at the accurate tolerance; the reported maximiser is the
    // best of the bracket ends and its midpoint.
    const double final_tol = objective == Objective::analytic_schmidt ? opts.final_tail_tol : opts.search_tail_tol;
    auto accurate = [&](double x) {
        ++res.evaluations;
        return objective_value(objective, std::exp(x), l_r, final_tol);
    };
    const double mid = 0.5 * (outcome.lo + outcome.hi);
    res.bracket_lo = std::exp(outcome.lo);
    res.bracket_hi = std::exp(outcome.hi);
    res.k_bracket_lo = accurate(outcome.lo);
    res.k_bracket_hi = accurate(outcome.hi);
    const double k_mid = accurate(mid);
    res.gamma_star = std::exp(mid);
    res.k_star = k_mid;
    if (res.k_bracket_lo > res.k_star) {
        res.k_star = res.k_bracket_lo;
        res.gamma_star = res.bracket_lo;
    }
    if (res.k_bracket_hi > res.k_star) {
        res.k_star = res.k_bracket_hi;
        res.gamma_star = res.bracket_hi;
    }
    res.converged = outcome.converged;

    if (res.gamma_star <= opts.gamma_lo * (1.0 + tol) || res.gamma_star >= opts.gamma_hi / (1.0 + tol)) {
        res.at_boundary = true;
        res.warning = "maximum lies on the search boundary";
    }
    return res;
}

}  // namespace oamband
