// Copyright 2026 The Restless Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "restless/parallel.hpp"
#include "restless/run_record.hpp"
#include "restless/svg_plot.hpp"

namespace restless::cli {

namespace {

constexpr double kTwoPiMHz = 2.0 * kPi * 1e6;

struct Options {
    double tau_ns = 10.0;
    double epsilon = 0.0;
    std::string mode = "restless";
    int shots = 1000;
    int realizations = 512;
    std::uint64_t seed = 0;
    int jobs = default_jobs();
    std::string out = ".";
    bool damping = false;
    double t01_us = 100.0;
    double t12_us = 73.0;
    double qubit_mhz = 5000.0;
    double anharmonicity_mhz = -300.0;
    double coupling_mhz = 100.0;
    bool rotating_wave = false;
    int steps = 0;

    std::string axis = "x";
    double angle_deg = 180.0;
    int window = 16;
    int circuits = 17;
    int iterations = 10;
    int depth = 120;
    int sequences = 100;
    std::string compose_to = "identity";
    std::string beta_grid = "-2:2:30";
    std::vector<int> depths;
};

ExperimentConfig make_config(const Options &o) {
    ExperimentConfig c;
    c.model = TransmonModel(o.qubit_mhz * kTwoPiMHz, o.anharmonicity_mhz * kTwoPiMHz,
                            o.coupling_mhz * kTwoPiMHz);
    c.duration = o.tau_ns * 1e-9;
    c.rotation_error = o.epsilon;
    c.mode = parse_execution_mode(o.mode);
    c.damping = o.damping;
    c.damping_params = DampingParams{o.t01_us * 1e-6, o.t12_us * 1e-6};
    if (!(c.damping_params.t01 > 0.0) || !(c.damping_params.t12 > 0.0)) {
        throw ValidationError("relaxation times must be positive");
    }
    c.shots = o.shots;
    c.realizations = o.realizations;
    c.seed = o.seed;
    c.circuit_count = o.circuits;
    c.window = o.window;
    c.depth = o.depth;
    c.sequences = o.sequences;
    c.compose_target = parse_compose_target(o.compose_to);
    c.beta_grid = parse_beta_grid(o.beta_grid);
    c.calibration.propagator.rotating_wave = o.rotating_wave;
    if (o.steps < 0) {
        throw ValidationError("--steps must be >= 0");
    }
    c.calibration.propagator.steps = o.steps;
    if (o.jobs < 1) {
        throw ValidationError("--jobs must be >= 1");
    }
    c.jobs = o.jobs;
    c.validate();
    return c;
}

void add_model_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--tau-ns", o.tau_ns, "Pulse duration in ns")->capture_default_str();
    cmd->add_option("--qubit-mhz", o.qubit_mhz, "Qubit frequency in MHz")->capture_default_str();
    cmd->add_option("--anharmonicity-mhz", o.anharmonicity_mhz, "Anharmonicity in MHz")
        ->capture_default_str();
    cmd->add_option("--coupling-mhz", o.coupling_mhz, "Drive coupling in MHz")
        ->capture_default_str();
    cmd->add_flag("--rwa", o.rotating_wave, "Drop the counter-rotating drive term");
    cmd->add_option("--steps", o.steps, "Integration steps (0 = automatic)")
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
}

void add_run_flags(CLI::App *cmd, Options &o) {
    cmd->add_option("--epsilon", o.epsilon, "Fractional rotation error")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->envname("RESTLESS_SEED")
        ->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
    cmd->add_flag("--damping,!--no-damping", o.damping, "Amplitude damping after each gate");
    cmd->add_option("--t01-us", o.t01_us, "|1> -> |0> relaxation time in us")
        ->capture_default_str();
    cmd->add_option("--t12-us", o.t12_us, "|2> -> |1> relaxation time in us")
        ->capture_default_str();
    cmd->add_option("--shots", o.shots, "Shots per circuit")->capture_default_str();
}

void add_mode_flag(CLI::App *cmd, Options &o) {
    cmd->add_option("--mode", o.mode, "restless or standard")
        ->check(CLI::IsMember({"restless", "standard"}))
        ->capture_default_str();
}

std::filesystem::path output_dir(const Options &o) {
    std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write " + path.string());
    }
    f << content;
}

template <typename Writer>
std::string to_text(Writer &&writer) {
    std::ostringstream s;
    writer(s);
    return s.str();
}

void write_record(const std::filesystem::path &path, const std::string &command,
                  const Json &config, std::uint64_t seed, const Json &result, double seconds) {
    write_file(path, make_run_record(command, config, seed, result, seconds).dump(2) + "\n");
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

// --- commands ---------------------------------------------------------------

int cmd_calibrate(const Options &o, std::ostream &out, std::ostream &err) {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig c = make_config(o);
    const RotationAxis axis = parse_rotation_axis(o.axis);
    const double angle = o.angle_deg * kPi / 180.0;
    if (!std::isfinite(angle) || angle == 0.0) {
        throw ValidationError("--angle-deg must be non-zero");
    }
    Json config = to_json(c);
    config["axis"] = o.axis;
    config["angle_deg"] = o.angle_deg;

    int code = kExitOk;
    CalibratedPulse pulse;
    try {
        pulse = calibrate_pulse(c.model, c.duration, angle, axis, c.rotation_error, c.calibration);
    } catch (const CalibrationError &e) {
        err << "calibrate: " << e.what() << '\n';
        pulse = e.best();
        code = kExitFailure;
    }
    Json result = to_json(pulse);
    result["integration_steps"] = step_count(c.model, pulse.pulse, c.calibration.propagator);
    result["converged"] = code == kExitOk;
    write_record(output_dir(o) / "calibrate.json", "calibrate", config, c.seed, result,
                 elapsed(start));
    out << "tau_ns=" << o.tau_ns << " leakage=" << pulse.leakage
        << " infidelity=" << pulse.infidelity() << '\n';
    return code;
}

int cmd_leakage_trace(const Options &o, std::ostream &out) {
    const ExperimentConfig c = make_config(o);
    const BuildupReport report = leakage_buildup_experiment(c);
    const auto dir = output_dir(o);
    write_file(dir / "leakage_trace.csv",
               to_text([&](std::ostream &s) { write_leakage_trace_csv(s, report.trace); }));

    SvgPlot plot;
    plot.title = "Leakage build-up, tau = " + to_text([&](std::ostream &s) { s << o.tau_ns; }) +
                 " ns" + (c.damping ? ", damping" : "");
    plot.x_label = "execution index zeta";
    plot.y_label = "p2 (window " + std::to_string(c.window) + ")";
    SvgSeries s;
    s.label = "p2";
    for (std::size_t z = 0; z < report.trace.p2.size(); ++z) {
        s.x.push_back(static_cast<double>(z));
    }
    s.y = report.trace.p2;
    s.band = report.trace.sem;
    plot.series.push_back(s);
    plot.reference_lines.push_back({1.0 / 3.0, "1/3"});
    write_file(dir / "leakage_trace.svg", render_svg(plot));

    write_record(dir / "leakage_trace.json", "leakage-trace", to_json(c), c.seed,
                 to_json(report), report.wall_seconds);
    out << "final_quartile_p2=" << report.trace.final_quartile_mean() << '\n';
    return kExitOk;
}

SvgPlot fine_amp_plot(const ProbabilitySeries &series, const FineAmplitudeFit &fit,
                      const std::string &title) {
    SvgPlot plot;
    plot.title = title;
    plot.x_label = "number of X gates n";
    plot.y_label = "signal";
    SvgSeries data;
    data.label = "measured";
    data.style = SvgSeries::Style::Scatter;
    for (std::size_t k = 0; k < series.size(); ++k) {
        data.x.push_back(static_cast<double>(k));
    }
    data.y = series.p;
    SvgSeries model;
    model.label = "fit";
    model.color = kPalette[1];
    const double n_max = static_cast<double>(series.size() - 1);
    for (int i = 0; i <= 400; ++i) {
        const double n = n_max * i / 400.0;
        model.x.push_back(n);
        model.y.push_back(fit.a * std::sin((kPi + fit.delta_theta) * n) + fit.b);
    }
    plot.series = {data, model};
    return plot;
}

int cmd_fine_amp(const Options &o, std::ostream &out) {
    const ExperimentConfig c = make_config(o);
    const FineAmplitudeReport report = run_fine_amplitude(c);
    const auto dir = output_dir(o);
    write_file(dir / "fine_amp.csv",
               to_text([&](std::ostream &s) { write_probability_series_csv(s, report.series); }));
    write_file(dir / "fine_amp.svg",
               render_svg(fine_amp_plot(report.series, report.fit,
                                        "Fine amplitude, " + o.mode + " execution")));
    write_record(dir / "fine_amp.json", "fine-amp", to_json(c), c.seed, to_json(report),
                 report.wall_seconds);
    out << "delta_theta_fraction=" << report.fit.fraction << " +- " << report.fit.fraction_stderr
        << " leakage=" << report.pulse.leakage << '\n';
    return report.fit.converged() ? kExitOk : kExitFailure;
}

int cmd_iterate(const Options &o, std::ostream &out, std::ostream &err) {
    const ExperimentConfig c = make_config(o);
    const IterativeReport report = iterative_calibration(c, o.iterations);
    const auto dir = output_dir(o);
    write_file(dir / "iterate.csv",
               to_text([&](std::ostream &s) { write_iterate_csv(s, report); }));

    SvgPlot plot;
    plot.title = "Iterative calibration, " + o.mode + " execution";
    plot.x_label = "iteration";
    plot.y_label = "normalized infidelity";
    SvgSeries s;
    s.label = "E_norm";
    s.style = SvgSeries::Style::Scatter;
    for (const auto &r : report.iterations) {
        s.x.push_back(r.iteration);
        s.y.push_back(r.normalized_infidelity);
    }
    plot.series.push_back(s);
    plot.reference_lines.push_back({0.0, "optimum"});
    write_file(dir / "iterate.svg", render_svg(plot));

    Json config = to_json(c);
    config["iterations"] = o.iterations;
    write_record(dir / "iterate.json", "iterate", config, c.seed, to_json(report),
                 report.wall_seconds);
    const auto &last = report.iterations.back();
    out << "final_delta_theta_fraction=" << last.fraction
        << " normalized_infidelity=" << last.normalized_infidelity << '\n';
    if (report.diverged) {
        err << "iterate: normalized infidelity diverged\n";
    }
    return last.fit_converged ? kExitOk : kExitFailure;
}

SvgPlot orbit_plot(const OrbitReport &report, const std::string &title) {
    SvgPlot plot;
    plot.title = title;
    plot.x_label = "error per Clifford r_c";
    plot.y_label = "F_seq";
    plot.log_x = true;
    SvgSeries s;
    s.label = std::string(to_string(report.mode));
    s.style = SvgSeries::Style::Scatter;
    for (const auto &p : report.points) {
        s.x.push_back(p.error_per_clifford);
        s.y.push_back(p.f_seq);
    }
    plot.series.push_back(s);
    if (report.compose_target == ComposeTarget::Identity) {
        plot.reference_lines = {{1.0 / 3.0, "1/3"}, {5.0 / 9.0, "5/9"}};
    } else {
        plot.reference_lines = {{2.0 / 3.0, "2/3"}, {4.0 / 9.0, "4/9"}};
    }
    return plot;
}

int cmd_orbit(const Options &o, std::ostream &out) {
    const ExperimentConfig c = make_config(o);
    const auto dir = output_dir(o);
    const std::string title = "ORBIT, tau = " + to_text([&](std::ostream &s) { s << o.tau_ns; }) +
                              " ns, " + o.mode + ", compose to " + o.compose_to;

    if (!o.depths.empty()) {
        const DepthSweep sweep = orbit_depth_sweep(c, o.depths);
        write_file(dir / "orbit_sweep.csv", to_text([&](std::ostream &s) {
                       write_depth_sweep_csv(s, sweep, c.mode);
                   }));
        SvgPlot plot;
        plot.title = title;
        plot.x_label = "depth m";
        plot.y_label = "F_seq";
        for (std::size_t b = 0; b < c.beta_grid.size(); ++b) {
            SvgSeries s;
            s.label = "beta x " + to_text([&](std::ostream &t) { t << c.beta_grid[b]; });
            s.color = kPalette[b % std::size(kPalette)];
            for (std::size_t d = 0; d < sweep.depths.size(); ++d) {
                s.x.push_back(sweep.depths[d]);
                s.y.push_back(sweep.reports[d].points[b].f_seq);
            }
            plot.series.push_back(s);
        }
        write_file(dir / "orbit_sweep.svg", render_svg(plot));
        Json config = to_json(c);
        config["depths"] = o.depths;
        double seconds = 0.0;
        for (const auto &r : sweep.reports) {
            seconds += r.wall_seconds;
        }
        write_record(dir / "orbit_sweep.json", "orbit", config, c.seed, to_json(sweep), seconds);
        bool ok = true;
        for (std::size_t b = 0; b < sweep.fits.size(); ++b) {
            out << "beta_prefactor=" << c.beta_grid[b] << " A=" << sweep.fits[b].amplitude
                << " alpha=" << sweep.fits[b].alpha << " B=" << sweep.fits[b].offset << '\n';
            ok = ok && sweep.fits[b].converged();
        }
        return ok ? kExitOk : kExitFailure;
    }

    const OrbitReport report = run_orbit(c);
    write_file(dir / "orbit.csv", to_text([&](std::ostream &s) { write_orbit_csv(s, report); }));
    write_file(dir / "orbit.svg", render_svg(orbit_plot(report, title)));
    write_record(dir / "orbit.json", "orbit", to_json(c), c.seed, to_json(report),
                 report.wall_seconds);
    const auto &w = report.worst();
    const auto &b = report.best();
    out << "worst r_c=" << w.error_per_clifford << " f_seq=" << w.f_seq
        << "; best r_c=" << b.error_per_clifford << " f_seq=" << b.f_seq << '\n';
    return kExitOk;
}

} // namespace

std::vector<double> parse_beta_grid(const std::string &text) {
    auto number = [&](const std::string &s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception &) {
            throw ValidationError("beta grid: cannot parse '" + s + "'");
        }
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, sep);) {
        parts.push_back(part);
    }
    if (sep == ':') {
        if (parts.size() != 3) {
            throw ValidationError("beta grid: expected lo:hi:count");
        }
        const double count = number(parts[2]);
        if (count < 1 || count != std::floor(count)) {
            throw ValidationError("beta grid: count must be a positive integer");
        }
        return default_beta_grid(static_cast<int>(count), number(parts[0]), number(parts[1]));
    }
    std::vector<double> grid;
    for (const auto &p : parts) {
        grid.push_back(number(p));
    }
    if (grid.empty()) {
        throw ValidationError("beta grid: empty");
    }
    return grid;
}

void write_orbit_csv(std::ostream &out, const OrbitReport &report) {
    out << "beta_prefactor,r_c,f_seq,stderr,mode\n";
    for (const auto &p : report.points) {
        out << p.beta_prefactor << ',' << p.error_per_clifford << ',' << p.f_seq << ','
            << p.stderr_f_seq << ',' << to_string(report.mode) << '\n';
    }
}

void write_depth_sweep_csv(std::ostream &out, const DepthSweep &sweep, ExecutionMode mode) {
    out << "depth,beta_prefactor,r_c,f_seq,stderr,mode\n";
    for (std::size_t d = 0; d < sweep.depths.size(); ++d) {
        for (const auto &p : sweep.reports[d].points) {
            out << sweep.depths[d] << ',' << p.beta_prefactor << ',' << p.error_per_clifford
                << ',' << p.f_seq << ',' << p.stderr_f_seq << ',' << to_string(mode) << '\n';
        }
    }
}

void write_iterate_csv(std::ostream &out, const IterativeReport &report) {
    out << "iteration,amplitude,infidelity,normalized_infidelity,leakage,delta_theta_rad,"
           "delta_theta_fraction,fit_converged\n";
    for (const auto &r : report.iterations) {
        out << r.iteration << ',' << r.amplitude << ',' << r.infidelity << ','
            << r.normalized_infidelity << ',' << r.leakage << ',' << r.delta_theta << ','
            << r.fraction << ',' << (r.fit_converged ? 1 : 0) << '\n';
    }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Restless measurement simulator for leaky transmon gates", "restless"};
    app.set_config("--config", "", "TOML or INI file; command-line flags take precedence");
    app.require_subcommand(1);

    auto *calibrate = app.add_subcommand("calibrate", "Calibrate a DRAG pulse");
    add_model_flags(calibrate, o);
    calibrate->add_option("--epsilon", o.epsilon, "Fractional rotation error")
        ->capture_default_str();
    calibrate->add_option("--axis", o.axis, "x or y")
        ->check(CLI::IsMember({"x", "y"}))
        ->capture_default_str();
    calibrate->add_option("--angle-deg", o.angle_deg, "Target rotation angle in degrees")
        ->capture_default_str();

    auto *trace = app.add_subcommand("leakage-trace", "Leakage build-up over repeated chains");
    add_model_flags(trace, o);
    add_run_flags(trace, o);
    trace->add_option("--realizations", o.realizations, "Independent chains")
        ->capture_default_str();
    trace->add_option("--window", o.window, "Moving-average window")->capture_default_str();
    trace->add_option("--circuits", o.circuits, "Fine-amplitude circuits K")
        ->capture_default_str();

    auto *fine = app.add_subcommand("fine-amp", "Fine-amplitude calibration experiment");
    auto *iterate = app.add_subcommand("iterate", "Closed-loop fine-amplitude calibration");
    for (auto *cmd : {fine, iterate}) {
        add_model_flags(cmd, o);
        add_run_flags(cmd, o);
        add_mode_flag(cmd, o);
        cmd->add_option("--circuits", o.circuits, "Fine-amplitude circuits K")
            ->capture_default_str();
    }
    iterate->add_option("--iterations", o.iterations, "Amplitude updates")
        ->capture_default_str();

    auto *orbit = app.add_subcommand("orbit", "ORBIT sweep over the DRAG prefactor");
    add_model_flags(orbit, o);
    add_run_flags(orbit, o);
    add_mode_flag(orbit, o);
    orbit->add_option("--depth", o.depth, "Clifford depth m")->capture_default_str();
    orbit->add_option("--sequences", o.sequences, "Random sequences")->capture_default_str();
    orbit->add_option("--compose-to", o.compose_to, "identity or x")
        ->check(CLI::IsMember({"identity", "x"}))
        ->capture_default_str();
    orbit->add_option("--beta-grid", o.beta_grid, "lo:hi:count or a comma-separated list")
        ->capture_default_str();
    orbit->add_option("--depths", o.depths, "Depth sweep with decay fits (overrides --depth)")
        ->delimiter(',');

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (calibrate->parsed()) {
            return cmd_calibrate(o, out, err);
        }
        if (trace->parsed()) {
            return cmd_leakage_trace(o, out);
        }
        if (fine->parsed()) {
            return cmd_fine_amp(o, out);
        }
        if (iterate->parsed()) {
            if (o.iterations < 1) {
                throw ValidationError("--iterations must be >= 1");
            }
            return cmd_iterate(o, out, err);
        }
        return cmd_orbit(o, out);
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace restless::cli
