#pragma once

// CSV and SVG output. Numbers are formatted with std::to_chars, so output is
// independent of the C locale.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "oamband/errors.hpp"
#include "oamband/metrics.hpp"
#include "oamband/optimizer.hpp"
#include "oamband/spectrum.hpp"

namespace oamband {

using Comments = std::vector<std::pair<std::string, std::string>>;

// Shortest-round-trip is not used: 17 significant digits always round-trip
// a double and keep the column widths predictable.
inline std::string format_number(double v, int significant = 17) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant);
    return std::string(buf, r.ptr);
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, r.ptr);
}

inline double parse_number(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline void write_comments(std::ostream& out, const Comments& comments) {
    for (const auto& [key, value] : comments) out << "# " << key << '=' << value << '\n';
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace detail

inline constexpr std::string_view kSpectrumHeader = "ell,probability,amplitude_re,amplitude_im,source";
inline constexpr std::string_view kSweepHeader = "lr,gamma,k_analytic,k_geometric,k_gen,k_ip,k_ff,fwhm";

inline Comments spectrum_summary(const SpiralSpectrum& s) {
    std::string width = "undefined";
    try {
        width = format_number(fwhm(s));
    } catch (const ShapeError&) {
    }
    return {{"normalization", format_number(s.normalization)},
            {"tail_bound", format_number(s.tail_bound)},
            {"K", format_number(schmidt_number(s))},
            {"FWHM", width}};
}

// Rows in ascending ell, then the summary comments, then `extra`.
inline void write_spectrum_csv(const SpiralSpectrum& s, const std::string& path, const Comments& extra = {}) {
    if (s.empty()) throw ValidationError("cannot write an empty spectrum");
    auto out = detail::open_output(path);
    out << kSpectrumHeader << '\n';
    for (const auto& e : s.entries) {
        out << e.ell << ',' << format_number(e.probability) << ',' << format_number(e.amplitude.real()) << ','
            << format_number(e.amplitude.imag()) << ',' << to_string(s.source) << '\n';
    }
    detail::write_comments(out, spectrum_summary(s));
    detail::write_comments(out, extra);
    detail::finish_output(out, path);
}

struct SpectrumCsv {
    std::vector<int> ell;
    std::vector<double> probability;
    std::vector<double> amplitude_re;
    std::vector<double> amplitude_im;
    std::vector<std::string> source;
    std::map<std::string, std::string> comments;
};

inline SpectrumCsv read_spectrum_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    SpectrumCsv csv;
    std::string line;
    if (!std::getline(in, line) || line != kSpectrumHeader) throw ValidationError("'" + path + "': bad spectrum header");
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) csv.comments[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        const auto f = detail::split(line, ',');
        if (f.size() != 5) throw ValidationError("'" + path + "': malformed row '" + line + "'");
        csv.ell.push_back(static_cast<int>(parse_number(f[0])));
        csv.probability.push_back(parse_number(f[1]));
        csv.amplitude_re.push_back(parse_number(f[2]));
        csv.amplitude_im.push_back(parse_number(f[3]));
        csv.source.emplace_back(f[4]);
    }
    return csv;
}

// Absent model values are left empty. Returns false for an empty sweep, in
// which case only the header is written.
inline bool write_sweep_csv(const SweepResult& sweep, const std::string& path, const Comments& extra = {}) {
    auto out = detail::open_output(path);
    out << kSweepHeader << '\n';
    if (sweep.points.empty()) {
        detail::finish_output(out, path);
        return false;
    }
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& p : sweep.points) {
        const auto& r = p.report;
        out << format_number(p.l_r) << ',' << format_number(p.gamma) << ',' << opt(r.schmidt_k) << ','
            << opt(r.k_geometric) << ',' << format_number(r.k_gen) << ',' << opt(r.k_ip) << ',' << opt(r.k_ff)
            << ',' << opt(r.fwhm) << '\n';
    }
    detail::write_comments(out, {{"axis", sweep.axis == SweepAxis::over_l_r ? "lr" : "gamma"},
                                 {"generated_by", to_string(sweep.generated_by)}});
    detail::write_comments(out, sweep.metadata);
    detail::write_comments(out, extra);
    detail::finish_output(out, path);
    return true;
}

// ---------------------------------------------------------------------------
// SVG

struct PlotSeries {
    std::string label;
    std::string color;
    std::string dash;  // empty for solid
    std::vector<std::pair<double, double>> xy;
};

struct HorizontalBar {
    std::string label;
    std::string color;
    double x0, x1, y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<PlotSeries> lines;
    // Drawn as vertical stems from y = 0.
    std::vector<PlotSeries> stems;
    std::vector<HorizontalBar> bars;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double m = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
    return m * mag;
}

}  // namespace detail

inline std::string render_svg(const Plot& plot) {
    constexpr double W = 720, H = 480, left = 80, right = 200, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
    auto extend = [&](const PlotSeries& s) {
        for (auto [x, y] : s.xy) {
            if (!std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    };
    for (const auto& s : plot.lines) extend(s);
    for (const auto& s : plot.stems) extend(s);
    for (const auto& b : plot.bars) {
        xmin = std::min(xmin, b.x0);
        xmax = std::max(xmax, b.x1);
        ymax = std::max(ymax, b.y);
    }
    if (!std::isfinite(xmin) || !(xmax >= xmin)) throw ValidationError("nothing to plot");
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (!(ymax > 0.0)) ymax = 1.0;
    const double ytop = ymax * 1.05;

    const double lx0 = plot.log_x ? std::log10(xmin) : xmin;
    const double lx1 = plot.log_x ? std::log10(xmax) : xmax;
    auto sx = [&](double x) { return left + ((plot.log_x ? std::log10(x) : x) - lx0) / (lx1 - lx0) * pw; };
    auto sy = [&](double y) { return top + ph - std::clamp(y, 0.0, ytop) / ytop * ph; };
    auto f = [](double v) { return format_fixed(v, 2); };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<text x=\"" << f(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::xml_escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << f(left) << "\" y=\"" << f(top) << "\" width=\"" << f(pw) << "\" height=\"" << f(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks
    if (plot.log_x) {
        for (int d = static_cast<int>(std::ceil(lx0 - 1e-9)); d <= static_cast<int>(std::floor(lx1 + 1e-9)); ++d) {
            const double x = sx(std::pow(10.0, d));
            o << "<line x1=\"" << f(x) << "\" y1=\"" << f(top + ph) << "\" x2=\"" << f(x) << "\" y2=\""
              << f(top + ph + 5) << "\" stroke=\"black\"/>\n"
              << "<text x=\"" << f(x) << "\" y=\"" << f(top + ph + 18) << "\" text-anchor=\"middle\">1e" << d
              << "</text>\n";
        }
    } else {
        const double step = detail::nice_step(xmax - xmin, 8);
        for (double t = std::ceil(xmin / step - 1e-9) * step; t <= xmax + 1e-9 * step; t += step) {
            const double x = sx(t);
            o << "<line x1=\"" << f(x) << "\" y1=\"" << f(top + ph) << "\" x2=\"" << f(x) << "\" y2=\""
              << f(top + ph + 5) << "\" stroke=\"black\"/>\n"
              << "<text x=\"" << f(x) << "\" y=\"" << f(top + ph + 18) << "\" text-anchor=\"middle\">"
              << format_number(std::abs(t) < 1e-12 * step ? 0.0 : t, 6) << "</text>\n";
        }
    }
    // y ticks
    {
        const double step = detail::nice_step(ytop, 6);
        for (double t = 0.0; t <= ytop + 1e-9 * step; t += step) {
            const double y = sy(t);
            o << "<line x1=\"" << f(left - 5) << "\" y1=\"" << f(y) << "\" x2=\"" << f(left) << "\" y2=\"" << f(y)
              << "\" stroke=\"black\"/>\n"
              << "<text x=\"" << f(left - 8) << "\" y=\"" << f(y + 4) << "\" text-anchor=\"end\">"
              << format_number(t, 6) << "</text>\n";
        }
    }
    o << "<text x=\"" << f(left + pw / 2) << "\" y=\"" << f(H - 15) << "\" text-anchor=\"middle\">"
      << detail::xml_escape(plot.x_label) << "</text>\n";
    o << "<text x=\"18\" y=\"" << f(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << f(top + ph / 2) << ")\">" << detail::xml_escape(plot.y_label) << "</text>\n";

    for (const auto& s : plot.stems) {
        o << "<g stroke=\"" << s.color << "\" stroke-width=\"3\">\n";
        for (auto [x, y] : s.xy) {
            o << "<line x1=\"" << f(sx(x)) << "\" y1=\"" << f(sy(0.0)) << "\" x2=\"" << f(sx(x)) << "\" y2=\""
              << f(sy(y)) << "\"/>\n";
        }
        o << "</g>\n";
    }
    for (const auto& s : plot.lines) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        if (!s.dash.empty()) o << " stroke-dasharray=\"" << s.dash << '"';
        o << " points=\"";
        bool first = true;
        for (auto [x, y] : s.xy) {
            if (!std::isfinite(y)) continue;
            o << (first ? "" : " ") << f(sx(x)) << ',' << f(sy(y));
            first = false;
        }
        o << "\"/>\n";
    }
    for (const auto& b : plot.bars) {
        o << "<line x1=\"" << f(sx(b.x0)) << "\" y1=\"" << f(sy(b.y)) << "\" x2=\"" << f(sx(b.x1)) << "\" y2=\""
          << f(sy(b.y)) << "\" stroke=\"" << b.color << "\" stroke-width=\"2.5\"/>\n";
    }

    // Legend
    double ly = top + 10;
    auto legend = [&](const std::string& label, const std::string& color, const std::string& dash) {
        o << "<line x1=\"" << f(left + pw + 15) << "\" y1=\"" << f(ly) << "\" x2=\"" << f(left + pw + 45) << "\" y2=\""
          << f(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"";
        if (!dash.empty()) o << " stroke-dasharray=\"" << dash << '"';
        o << "/>\n<text x=\"" << f(left + pw + 52) << "\" y=\"" << f(ly + 4) << "\">" << detail::xml_escape(label)
          << "</text>\n";
        ly += 18;
    };
    for (const auto& s : plot.stems) legend(s.label, s.color, s.dash);
    for (const auto& s : plot.lines) legend(s.label, s.color, s.dash);
    for (const auto& b : plot.bars) legend(b.label, b.color, "");
    o << "</g>\n</svg>\n";
    return o.str();
}

inline void write_text(const std::string& text, const std::string& path) {
    auto out = detail::open_output(path);
    out << text;
    detail::finish_output(out, path);
}

namespace detail {

inline const char* curve_color(std::size_t i) {
    static constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                               "#66a61e", "#e6ab02", "#a6761d", "#666666"};
    return kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
}

}  // namespace detail

// Stem plot of P_l with bars marking the Schmidt number (centred on l = 0)
// and the FWHM at half the peak.
inline Plot spectrum_plot(const SpiralSpectrum& s) {
    Plot plot;
    plot.title = "Spiral spectrum, gamma = " + format_number(s.params.gamma, 6) + ", L_R = " +
                 format_number(s.params.l_r, 6);
    plot.x_label = "OAM l";
    plot.y_label = "probability";
    PlotSeries stems{to_string(s.source), "#444444", "", {}};
    const int shown = std::min(s.ell_cut(), 40);
    for (int ell = -shown; ell <= shown; ++ell) stems.xy.emplace_back(ell, s.probability(ell));
    plot.stems.push_back(std::move(stems));
    const double peak = s.probability(0);
    const double k = schmidt_number(s);
    plot.bars.push_back({"K = " + format_number(k, 4), "#d62728", -0.5 * k, 0.5 * k, 0.75 * peak});
    try {
        const double w = fwhm(s);
        plot.bars.push_back({"FWHM = " + format_number(w, 4), "#1f77b4", -0.5 * w, 0.5 * w, 0.5 * peak});
    } catch (const ShapeError&) {
    }
    return plot;
}

// Bandwidth curves labelled by model; the generation bandwidth is added once
// for L_R sweeps.
inline Plot sweep_plot(const SweepResult& sweep) {
    Plot plot;
    const bool over_lr = sweep.axis == SweepAxis::over_l_r;
    plot.log_x = over_lr;
    plot.title = over_lr ? "Measurement bandwidth versus crystal length" : "Measurement bandwidth versus gamma";
    plot.x_label = over_lr ? "L_R" : "gamma";
    plot.y_label = "bandwidth K";
    const auto keys = sweep.curve_keys();
    const std::string key_name = over_lr ? "gamma" : "L_R";
    for (std::size_t c = 0; c < keys.size(); ++c) {
        const auto pts = sweep.curve(keys[c]);
        PlotSeries analytic{"analytic, " + key_name + " = " + format_number(keys[c], 6), detail::curve_color(c), "", {}};
        PlotSeries geometric{"geometric, " + key_name + " = " + format_number(keys[c], 6), detail::curve_color(c),
                             "6,4", {}};
        for (const auto& p : pts) {
            const double x = over_lr ? p.l_r : p.gamma;
            if (p.report.schmidt_k) analytic.xy.emplace_back(x, *p.report.schmidt_k);
            if (p.report.k_geometric) geometric.xy.emplace_back(x, *p.report.k_geometric);
        }
        if (!analytic.xy.empty()) plot.lines.push_back(std::move(analytic));
        if (!geometric.xy.empty()) plot.lines.push_back(std::move(geometric));
    }
    if (over_lr && !keys.empty()) {
        PlotSeries gen{"generation", "#1f3fbf", "", {}};
        for (const auto& p : sweep.curve(keys.front())) gen.xy.emplace_back(p.l_r, p.report.k_gen);
        plot.lines.push_back(std::move(gen));
    }
    return plot;
}

}  // namespace oamband
