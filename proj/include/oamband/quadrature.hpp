#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature for real or complex
// integrands on a finite interval, in the style of QUADPACK's QAG.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace oamband::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
    // Number of equal panels the interval is split into before adaptation.
    int initial_panels = 1;
};

namespace detail {

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
};

// One GK21 panel with the QUADPACK error scaling.
template <class T, class F>
Panel<T> gk21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<T, 21> fv;
    fv[0] = f(center);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }

    T kronrod = fv[0] * kWgk[10];
    T gauss = fv[0] * 0.0;
    double abs_sum = magnitude(fv[0]) * kWgk[10];
    for (std::size_t j = 0; j < 10; ++j) {
        const T pair = fv[1 + 2 * j] + fv[2 + 2 * j];
        kronrod += pair * kWgk[j];
        abs_sum += (magnitude(fv[1 + 2 * j]) + magnitude(fv[2 + 2 * j])) * kWgk[j];
        if (j % 2 == 1) gauss += pair * kWg[j / 2];
    }

    const T mean = kronrod * 0.5;
    double asc = magnitude(fv[0] - mean) * kWgk[10];
    for (std::size_t j = 0; j < 10; ++j) {
        asc += (magnitude(fv[1 + 2 * j] - mean) + magnitude(fv[2 + 2 * j] - mean)) * kWgk[j];
    }

    const double scale = std::abs(half);
    const T value = kronrod * half;
    double err = magnitude((kronrod - gauss) * half);
    const double resasc = asc * scale;
    const double resabs = abs_sum * scale;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double kEpmach = std::numeric_limits<double>::epsilon();
    constexpr double kUflow = std::numeric_limits<double>::min();
    if (resabs > kUflow / (50.0 * kEpmach)) {
        err = std::max(50.0 * kEpmach * resabs, err);
    }
    return {a, b, value, err};
}

}  // namespace detail

// Integrates f over [a, b]. Never throws on non-convergence; callers inspect
// Result::converged and decide.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opts = {})
    -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    using detail::Panel;

    auto worse = [](const Panel<T>& x, const Panel<T>& y) { return x.error < y.error; };

    std::vector<Panel<T>> heap;
    const int panels = std::max(1, opts.initial_panels);
    heap.reserve(static_cast<std::size_t>(panels + opts.max_intervals));
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == panels) ? b : a + (p + 1) * width;
        heap.push_back(detail::gk21<T>(f, lo, hi));
    }
    std::make_heap(heap.begin(), heap.end(), worse);

    T total = heap.front().value * 0.0;
    double total_err = 0.0;
    for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
    }

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total)); };

    bool converged = total_err <= tolerance();
    while (!converged && static_cast<int>(heap.size()) < opts.max_intervals) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        const Panel<T> worst = heap.back();
        heap.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval can no longer be split in double precision.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        const Panel<T> left = detail::gk21<T>(f, worst.a, mid);
        const Panel<T> right = detail::gk21<T>(f, mid, worst.b);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);

        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        converged = total_err <= tolerance();
    }

    // Resum in interval order so the result does not depend on heap layout.
    std::sort(heap.begin(), heap.end(), [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
    total = heap.front().value * 0.0;
    total_err = 0.0;
    for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
    }
    return {total, total_err, static_cast<int>(heap.size()), total_err <= tolerance()};
}

}  // namespace oamband::quad
