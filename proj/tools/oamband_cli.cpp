// Command-line front end: spiral spectra, bandwidths, gamma optimisation,
// parameter sweeps, figure data and the quadrature cross-check.

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "oamband/oamband.hpp"

namespace {

using namespace oamband;

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kConvergence = 3, kIo = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accepts a plain number in metres or a number with a unit suffix: m, cm, mm,
// um, nm.
double parse_length(const std::string& text, const char* flag) {
    static const std::pair<std::string_view, double> kUnits[] = {
        {"nm", 1e-9}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2}, {"m", 1.0}};
    std::string_view sv(text);
    double scale = 1.0;
    for (const auto& [suffix, factor] : kUnits) {
        if (sv.size() > suffix.size() && sv.substr(sv.size() - suffix.size()) == suffix) {
            sv.remove_suffix(suffix.size());
            scale = factor;
            break;
        }
    }
    double v = 0.0;
    try {
        v = parse_number(sv);
    } catch (const ValidationError&) {
        throw UsageError(std::string("--") + flag + ": cannot parse length '" + text + "'");
    }
    return v * scale;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(parse_number(item));
        } catch (const ValidationError&) {
            throw UsageError(std::string("--") + flag + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("--") + flag + ": empty list");
    return out;
}

std::string shortest(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + shortest(values[i]);
    return s;
}

ModelSet parse_models(const std::string& text) {
    ModelSet m{false, false};
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "analytic") m.analytic = true;
        else if (item == "geometric") m.geometric = true;
        else throw UsageError("--models: unknown model '" + item + "' (expected analytic, geometric)");
    }
    if (!m.analytic && !m.geometric) throw UsageError("--models: no model selected");
    return m;
}

std::string models_string(ModelSet m) {
    if (m.analytic && m.geometric) return "analytic,geometric";
    return m.analytic ? "analytic" : "geometric";
}

// Fails before any computation if the file cannot be created.
void check_writable(const std::string& path) {
    if (path.empty()) return;
    namespace fs = std::filesystem;
    fs::path dir = fs::path(path).parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("output directory '" + dir.string() + "' does not exist");
    if (::access(dir.c_str(), W_OK) != 0) throw IoError("output directory '" + dir.string() + "' is not writable");
}

// Normalised command line, embedded in every CSV so the run can be repeated.
class CommandLine {
public:
    explicit CommandLine(std::string command) : text_("oamband " + std::move(command)) {}
    void add(const std::string& flag, const std::string& value) {
        if (!value.empty()) text_ += " --" + flag + " " + value;
    }
    void add(const std::string& flag, double value) { add(flag, shortest(value)); }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

struct InputFlags {
    std::optional<double> gamma;
    std::optional<double> lr;
    std::string pump_waist, wavelength, crystal_length, detection_waist;

    void attach(CLI::App* app, bool with_detection = true) {
        app->add_option("--gamma", gamma, "pump waist / detection waist")->check(CLI::Number);
        app->add_option("--lr", lr, "crystal length / pump Rayleigh range");
        app->add_option("--pump-waist", pump_waist, "pump waist, e.g. 1mm");
        app->add_option("--wavelength", wavelength, "pump wavelength, e.g. 355nm");
        app->add_option("--crystal-length", crystal_length, "crystal length, e.g. 3mm");
        if (with_detection) app->add_option("--detection-waist", detection_waist, "detection-mode waist, e.g. 0.5mm");
    }

    bool physical() const {
        return !pump_waist.empty() || !wavelength.empty() || !crystal_length.empty() || !detection_waist.empty();
    }

    ExperimentConfig config(double detection_default = 1.0) const {
        if (pump_waist.empty() || wavelength.empty() || crystal_length.empty()) {
            throw UsageError("physical input needs --pump-waist, --wavelength and --crystal-length");
        }
        ExperimentConfig c;
        c.pump_waist_m = parse_length(pump_waist, "pump-waist");
        c.wavelength_m = parse_length(wavelength, "wavelength");
        c.crystal_length_m = parse_length(crystal_length, "crystal-length");
        c.detection_waist_m =
            detection_waist.empty() ? detection_default : parse_length(detection_waist, "detection-waist");
        return c;
    }

    // Exactly one input mode: (--gamma, --lr) or the physical lengths.
    DimensionlessParams resolve(CommandLine& cmd) const {
        const bool dimless = gamma || lr;
        if (dimless && physical()) throw UsageError("give either --gamma/--lr or physical lengths, not both");
        if (dimless) {
            if (!gamma || !lr) throw UsageError("dimensionless input needs both --gamma and --lr");
            cmd.add("gamma", *gamma);
            cmd.add("lr", *lr);
            return DimensionlessParams(*gamma, *lr);
        }
        if (!physical()) throw UsageError("no input given: use --gamma/--lr or physical lengths");
        if (detection_waist.empty()) throw UsageError("physical input needs --detection-waist");
        const auto c = config();
        cmd.add("pump-waist", c.pump_waist_m);
        cmd.add("wavelength", c.wavelength_m);
        cmd.add("crystal-length", c.crystal_length_m);
        cmd.add("detection-waist", c.detection_waist_m);
        return reduce(c);
    }

    // Crystal length only; the detection waist is what gets optimised.
    double resolve_lr(CommandLine& cmd, std::optional<ExperimentConfig>& physical_config) const {
        if (gamma) throw UsageError("--gamma is not an input to optimize");
        if (lr && physical()) throw UsageError("give either --lr or physical lengths, not both");
        if (lr) {
            cmd.add("lr", *lr);
            detail::require_positive(*lr, "lr");
            return *lr;
        }
        if (!physical()) throw UsageError("no input given: use --lr or physical lengths");
        auto c = config(1.0);
        c.detection_waist_m = c.pump_waist_m;
        cmd.add("pump-waist", c.pump_waist_m);
        cmd.add("wavelength", c.wavelength_m);
        cmd.add("crystal-length", c.crystal_length_m);
        physical_config = c;
        return reduce(c).l_r;
    }
};

void print_bounds(const DimensionlessParams& p) {
    if (p.l_r <= 0.0) {
        std::printf("geometric: k_ip = %.6g (L_R = 0: k_gen, k_ff unbounded)\n", k_ip(p.gamma));
        return;
    }
    const auto b = bounds(p);
    std::printf("geometric: k_gen = %.6g  k_ip = %.6g  k_ff = %.6g  K = %.6g  gamma_opt = %.6g  regime = %s\n",
                b.k_gen, b.k_ip, b.k_ff, b.k_combined, b.gamma_opt, to_string(b.regime));
    if (b.below_single_mode) std::printf("warning: combined geometric bandwidth is below 1\n");
}

void print_spectrum_summary(const SpiralSpectrum& s) {
    const double k = schmidt_number(s);
    std::printf("gamma = %.10g  L_R = %.10g", s.params.gamma, s.params.l_r);
    if (s.params.rayleigh_range_m) std::printf("  z_R = %.6g m", *s.params.rayleigh_range_m);
    std::printf("\nspectrum (%s): l in [-%d, %d], tail bound %.3g\n", to_string(s.source), s.ell_cut(), s.ell_cut(),
                s.tail_bound);
    std::printf("K = %.8g  l_max = %.8g", k, ell_max_from_k(k));
    try {
        const double w = fwhm(s);
        std::printf("  FWHM = %.8g  K/FWHM = %.6g", w, k / w);
    } catch (const ShapeError& e) {
        std::printf("  FWHM undefined (%s)", e.what());
    }
    std::printf("\n");
    print_bounds(s.params);
}

struct OutputFlags {
    std::string csv;
    std::string svg;
    void attach(CLI::App* app) {
        app->add_option("--csv", csv, "write data as CSV");
        app->add_option("--svg", svg, "write an SVG plot");
    }
    void check() const {
        check_writable(csv);
        check_writable(svg);
    }
    void add_to(CommandLine& cmd) const {
        cmd.add("csv", csv);
        cmd.add("svg", svg);
    }
};

void emit_spectrum(const SpiralSpectrum& s, const OutputFlags& out, const CommandLine& cmd) {
    print_spectrum_summary(s);
    if (!out.csv.empty()) {
        write_spectrum_csv(s, out.csv, {{"cmdline", cmd.str()}});
        std::printf("wrote %s\n", out.csv.c_str());
    }
    if (!out.svg.empty()) {
        write_text(render_svg(spectrum_plot(s)), out.svg);
        std::printf("wrote %s\n", out.svg.c_str());
    }
}

void emit_sweep(const SweepResult& s, const OutputFlags& out, const CommandLine& cmd) {
    std::printf("%zu points, %zu curves, models: %s\n", s.points.size(), s.curve_keys().size(),
                to_string(s.generated_by));
    for (const auto& p : s.points) {
        const auto& r = p.report;
        std::printf("L_R = %-12.6g gamma = %-8.4g", p.l_r, p.gamma);
        if (r.schmidt_k) std::printf(" K_analytic = %-10.6g", *r.schmidt_k);
        if (r.k_geometric) std::printf(" K_geometric = %-10.6g", *r.k_geometric);
        std::printf(" k_gen = %.6g\n", r.k_gen);
    }
    if (!out.csv.empty()) {
        if (!write_sweep_csv(s, out.csv, {{"cmdline", cmd.str()}})) std::printf("warning: empty sweep\n");
        std::printf("wrote %s\n", out.csv.c_str());
    }
    if (!out.svg.empty()) {
        write_text(render_svg(sweep_plot(s)), out.svg);
        std::printf("wrote %s\n", out.svg.c_str());
    }
}

struct SweepLrFlags {
    std::string gammas = "3,5,7";
    double lr_min = 1e-4;
    double lr_max = 1.0;
    int ppd = 10;
    std::string models = "analytic,geometric";
    double tail_tol = 1e-9;

    void attach(CLI::App* app) {
        app->add_option("--gammas", gammas, "comma-separated gamma values")->capture_default_str();
        app->add_option("--lr-min", lr_min, "smallest L_R")->capture_default_str();
        app->add_option("--lr-max", lr_max, "largest L_R")->capture_default_str();
        app->add_option("--ppd", ppd, "grid points per decade")->capture_default_str();
        app->add_option("--models", models, "analytic, geometric or both")->capture_default_str();
        app->add_option("--tail-tol", tail_tol, "spectrum tail tolerance")->capture_default_str();
    }

    SweepResult run(CommandLine& cmd) const {
        const auto gs = parse_list(gammas, "gammas");
        const auto m = parse_models(models);
        cmd.add("gammas", join(gs));
        cmd.add("lr-min", lr_min);
        cmd.add("lr-max", lr_max);
        cmd.add("ppd", std::to_string(ppd));
        cmd.add("models", models_string(m));
        cmd.add("tail-tol", tail_tol);
        return sweep_l_r(gs, lr_min, lr_max, ppd, m, tail_tol);
    }
};

struct SweepGammaFlags {
    std::string lrs = "0.001,0.002,0.003";
    double gamma_min = 1.0;
    double gamma_max = 12.0;
    int points = 45;
    std::string models = "analytic,geometric";
    double tail_tol = 1e-9;

    void attach(CLI::App* app) {
        app->add_option("--lrs", lrs, "comma-separated L_R values")->capture_default_str();
        app->add_option("--gamma-min", gamma_min, "smallest gamma")->capture_default_str();
        app->add_option("--gamma-max", gamma_max, "largest gamma")->capture_default_str();
        app->add_option("--points", points, "number of gamma points")->capture_default_str();
        app->add_option("--models", models, "analytic, geometric or both")->capture_default_str();
        app->add_option("--tail-tol", tail_tol, "spectrum tail tolerance")->capture_default_str();
    }

    SweepResult run(CommandLine& cmd) const {
        const auto ls = parse_list(lrs, "lrs");
        const auto m = parse_models(models);
        cmd.add("lrs", join(ls));
        cmd.add("gamma-min", gamma_min);
        cmd.add("gamma-max", gamma_max);
        cmd.add("points", std::to_string(points));
        cmd.add("models", models_string(m));
        cmd.add("tail-tol", tail_tol);
        return sweep_gamma(ls, gamma_min, gamma_max, points, m, tail_tol);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"OAM spiral spectra and bandwidths of down-converted photon pairs"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "show help for every command");

    InputFlags input;
    OutputFlags output;
    double tail_tol = 1e-9;

    auto* spec_cmd = app.add_subcommand("spectrum", "analytic spiral spectrum at one parameter point");
    input.attach(spec_cmd);
    output.attach(spec_cmd);
    spec_cmd->add_option("--tail-tol", tail_tol, "stop extending l when the tail is below this fraction")
        ->capture_default_str();

    auto* bw_cmd = app.add_subcommand("bandwidth", "analytic and geometric bandwidths at one point");
    input.attach(bw_cmd);
    bw_cmd->add_option("--tail-tol", tail_tol, "spectrum tail tolerance")->capture_default_str();
    bw_cmd->add_option("--csv", output.csv, "write a one-row CSV in the sweep format");

    std::string objective = "both";
    double opt_tol = 1e-4;
    auto* opt_cmd = app.add_subcommand("optimize", "maximise the measured bandwidth over gamma");
    input.attach(opt_cmd, false);
    opt_cmd->add_option("--objective", objective, "analytic, geometric or both")->capture_default_str();
    opt_cmd->add_option("--tol", opt_tol, "relative width of the final gamma bracket")->capture_default_str();

    SweepLrFlags lr_flags;
    auto* sweep_lr_cmd = app.add_subcommand("sweep-lr", "bandwidth versus L_R for several gamma");
    lr_flags.attach(sweep_lr_cmd);
    output.attach(sweep_lr_cmd);

    SweepGammaFlags gamma_flags;
    auto* sweep_gamma_cmd = app.add_subcommand("sweep-gamma", "bandwidth versus gamma for several L_R");
    gamma_flags.attach(sweep_gamma_cmd);
    output.attach(sweep_gamma_cmd);

    int figure_id = 0;
    auto* fig_cmd = app.add_subcommand("figure", "data and plot for figure 1, 3 or 4");
    fig_cmd->add_option("--id", figure_id, "figure number")->required()->check(CLI::IsMember({1, 3, 4}));
    output.attach(fig_cmd);

    int ell_max = 6;
    double rel_tol = 1e-9;
    double threshold = 1e-5;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "compare analytic amplitudes with direct quadrature");
    input.attach(oracle_cmd);
    oracle_cmd->add_option("--ell-max", ell_max, "largest |l| compared")->capture_default_str();
    oracle_cmd->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->capture_default_str();
    oracle_cmd->add_option("--threshold", threshold, "largest accepted relative deviation")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (spec_cmd->parsed()) {
        CommandLine cmd("spectrum");
        const auto p = input.resolve(cmd);
        cmd.add("tail-tol", tail_tol);
        output.add_to(cmd);
        output.check();
        emit_spectrum(spectrum(p, tail_tol), output, cmd);
    } else if (bw_cmd->parsed()) {
        CommandLine cmd("bandwidth");
        const auto p = input.resolve(cmd);
        cmd.add("tail-tol", tail_tol);
        cmd.add("csv", output.csv);
        check_writable(output.csv);
        const auto s = spectrum(p, tail_tol);
        print_spectrum_summary(s);
        if (!output.csv.empty()) {
            SweepResult one;
            one.axis = SweepAxis::over_l_r;
            one.points.push_back({p.l_r, p.gamma, evaluate_point(p, {}, tail_tol)});
            write_sweep_csv(one, output.csv, {{"cmdline", cmd.str()}});
            std::printf("wrote %s\n", output.csv.c_str());
        }
    } else if (opt_cmd->parsed()) {
        CommandLine cmd("optimize");
        std::optional<ExperimentConfig> physical;
        const double lr = input.resolve_lr(cmd, physical);
        std::vector<Objective> objectives;
        if (objective == "analytic" || objective == "both") objectives.push_back(Objective::analytic_schmidt);
        if (objective == "geometric" || objective == "both") objectives.push_back(Objective::geometric_combined);
        if (objectives.empty()) throw UsageError("--objective must be analytic, geometric or both");
        std::printf("L_R = %.10g  gamma_opt formula = %.8g  k_gen = %.8g  k_gen/sqrt(2) = %.8g\n", lr, gamma_opt(lr),
                    k_gen(lr), k_gen(lr) / std::sqrt(2.0));
        for (auto o : objectives) {
            const auto r = optimize_gamma(lr, o, opt_tol);
            std::printf("%-9s gamma* = %.8g  K* = %.8g  (gamma*/gamma_opt = %.5f, %d evaluations%s)\n", to_string(o),
                        r.gamma_star, r.k_star, r.gamma_star / r.gamma_opt_formula, r.evaluations,
                        r.converged ? "" : ", not converged");
            if (physical) {
                std::printf("          optimal detection waist = %.6g m\n", physical->pump_waist_m / r.gamma_star);
            }
            if (r.at_boundary) std::printf("warning: %s\n", r.warning.c_str());
        }
    } else if (sweep_lr_cmd->parsed()) {
        CommandLine cmd("sweep-lr");
        output.check();
        auto s = lr_flags.run(cmd);
        output.add_to(cmd);
        emit_sweep(s, output, cmd);
    } else if (sweep_gamma_cmd->parsed()) {
        CommandLine cmd("sweep-gamma");
        output.check();
        auto s = gamma_flags.run(cmd);
        output.add_to(cmd);
        emit_sweep(s, output, cmd);
    } else if (fig_cmd->parsed()) {
        CommandLine cmd("figure");
        cmd.add("id", std::to_string(figure_id));
        output.add_to(cmd);
        output.check();
        if (figure_id == 1) {
            emit_spectrum(spectrum(DimensionlessParams(2.0, 0.001), 1e-9), output, cmd);
        } else if (figure_id == 3) {
            CommandLine inner("sweep-lr");
            emit_sweep(SweepLrFlags{}.run(inner), output, cmd);
        } else {
            CommandLine inner("sweep-gamma");
            auto s = SweepGammaFlags{}.run(inner);
            emit_sweep(s, output, cmd);
            for (double lr : s.curve_keys()) {
                const auto r = optimize_gamma(lr, Objective::geometric_combined, 1e-6);
                std::printf("L_R = %g: geometric argmax gamma = %.6g, gamma_opt = %.6g\n", lr, r.gamma_star,
                            r.gamma_opt_formula);
            }
        }
    } else if (oracle_cmd->parsed()) {
        CommandLine cmd("oracle-check");
        const auto p = input.resolve(cmd);
        if (ell_max < 1) throw ValidationError("--ell-max must be >= 1");
        QuadratureSpec qs;
        qs.rel_tol = rel_tol;
        const auto a0 = amplitude(p, 0);
        const auto o0 = oracle_amplitude(p, 0, qs).value;
        double worst = 0.0;
        std::printf("%5s %24s %24s %12s\n", "l", "analytic |C_l/C_0|", "oracle |C_l/C_0|", "rel. dev.");
        for (int ell = 0; ell <= ell_max; ++ell) {
            const double ra = std::abs(amplitude(p, ell) / a0);
            const double ro = std::abs(oracle_amplitude(p, ell, qs).value / o0);
            const double dev = std::abs(ra - ro) / ro;
            worst = std::max(worst, dev);
            std::printf("%5d %24.16g %24.16g %12.3e\n", ell, ra, ro, dev);
        }
        std::printf("max relative deviation = %.3e (threshold %.1e)\n", worst, threshold);
        return worst < threshold ? kOk : kConvergence;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kUsage;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "convergence error: %s (estimate %.6g, error bound %.3g)\n", e.what(), e.estimate(),
                     e.error_bound());
        return kConvergence;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidation;
    }
}
