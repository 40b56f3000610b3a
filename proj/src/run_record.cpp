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

#include "restless/run_record.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include <openssl/evp.h>

namespace restless {

namespace {

// JSON has no NaN; non-finite numbers become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double> &v) {
    Json out = Json::array();
    for (double x : v) {
        out.push_back(number(x));
    }
    return out;
}

Json complex_matrix(const QutritMatrix &u) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 3; ++c) {
            row.push_back(Json::array({number(u(r, c).real()), number(u(r, c).imag())}));
        }
        rows.push_back(row);
    }
    return rows;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string git_blob_hash(const std::string &content) {
    const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
        throw Error("SHA-1 digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

Json to_json(const TransmonModel &model) {
    Json j;
    j["qubit_frequency_rad_s"] = model.qubit_frequency();
    j["anharmonicity_rad_s"] = model.anharmonicity();
    j["coupling_rate_rad_s"] = model.coupling_rate();
    return j;
}

Json to_json(const DragPulse &pulse) {
    Json j;
    j["duration_s"] = pulse.duration;
    j["sigma_s"] = pulse.sigma();
    j["amplitude"] = pulse.amplitude;
    j["drag_coefficient_s"] = pulse.drag_coefficient;
    j["axis"] = std::string(to_string(pulse.axis));
    j["target_angle_rad"] = pulse.target_angle;
    j["rotation_error"] = pulse.rotation_error;
    return j;
}

Json to_json(const CalibratedPulse &pulse) {
    Json j;
    j["pulse"] = to_json(pulse.pulse);
    j["fidelity"] = number(pulse.fidelity);
    j["infidelity"] = number(pulse.infidelity());
    j["leakage"] = number(pulse.leakage);
    j["iterations"] = pulse.iterations;
    j["unitary_re_im"] = complex_matrix(normalize_global_phase(pulse.unitary));
    return j;
}

Json to_json(const TransitionMatrix &t) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back(Json::array({number(t(r, 0)), number(t(r, 1)), number(t(r, 2))}));
    }
    return rows;
}

Json to_json(const ProbabilitySeries &series) {
    Json j;
    j["p"] = numbers(series.p);
    j["stderr"] = numbers(series.standard_error);
    j["count"] = series.count;
    return j;
}

Json to_json(const FitResult &fit) {
    Json j;
    j["parameters"] = numbers(fit.parameters);
    j["standard_errors"] = numbers(fit.standard_errors);
    j["covariance"] = numbers(fit.covariance);
    j["residual_norm"] = number(fit.residual_norm);
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    j["message"] = fit.message;
    return j;
}

Json to_json(const FineAmplitudeFit &fit) {
    Json j;
    j["a"] = number(fit.a);
    j["b"] = number(fit.b);
    j["delta_theta_rad"] = number(fit.delta_theta);
    j["delta_theta_stderr_rad"] = number(fit.delta_theta_stderr);
    j["delta_theta_fraction"] = number(fit.fraction);
    j["delta_theta_fraction_stderr"] = number(fit.fraction_stderr);
    j["fit"] = to_json(fit.fit);
    return j;
}

Json to_json(const RbFit &fit) {
    Json j;
    j["A"] = number(fit.amplitude);
    j["alpha"] = number(fit.alpha);
    j["B"] = number(fit.offset);
    j["A_stderr"] = number(fit.amplitude_stderr);
    j["alpha_stderr"] = number(fit.alpha_stderr);
    j["B_stderr"] = number(fit.offset_stderr);
    j["identifiable"] = fit.identifiable;
    j["fit"] = to_json(fit.fit);
    return j;
}

Json to_json(const FineAmplitudeReport &report) {
    Json j;
    j["pulse"] = to_json(report.pulse);
    j["seed"] = report.seed;
    Json transitions = Json::array();
    for (const auto &t : report.transitions) {
        transitions.push_back(to_json(t));
    }
    j["transition_matrices"] = transitions;
    j["series"] = to_json(report.series);
    j["fit"] = to_json(report.fit);
    return j;
}

Json to_json(const IterativeReport &report) {
    Json j;
    j["optimal_infidelity"] = number(report.optimal_infidelity);
    j["seed"] = report.seed;
    j["diverged"] = report.diverged;
    Json its = Json::array();
    Json e_norm = Json::array();
    for (const auto &r : report.iterations) {
        Json it;
        it["iteration"] = r.iteration;
        it["amplitude"] = number(r.amplitude);
        it["infidelity"] = number(r.infidelity);
        it["normalized_infidelity"] = number(r.normalized_infidelity);
        it["leakage"] = number(r.leakage);
        it["delta_theta_rad"] = number(r.delta_theta);
        it["delta_theta_fraction"] = number(r.fraction);
        it["delta_theta_fraction_stderr"] = number(r.fraction_stderr);
        it["fit_converged"] = r.fit_converged;
        its.push_back(it);
        e_norm.push_back(number(r.normalized_infidelity));
    }
    j["normalized_infidelity"] = e_norm;
    j["iterations"] = its;
    return j;
}

Json to_json(const OrbitReport &report) {
    Json j;
    j["mode"] = std::string(to_string(report.mode));
    j["compose_to"] = std::string(to_string(report.compose_target));
    j["depth"] = report.depth;
    j["sequences"] = report.sequences;
    j["generators_per_clifford"] = report.generators_per_clifford;
    j["seed"] = report.seed;
    Json points = Json::array();
    for (const auto &p : report.points) {
        Json pj;
        pj["beta_prefactor"] = p.beta_prefactor;
        pj["mean_fidelity"] = number(p.mean_fidelity);
        pj["mean_leakage"] = number(p.mean_leakage);
        pj["r_c"] = number(p.error_per_clifford);
        pj["f_seq"] = number(p.f_seq);
        pj["stderr"] = number(p.stderr_f_seq);
        points.push_back(pj);
    }
    j["points"] = points;
    return j;
}

Json to_json(const DepthSweep &sweep) {
    Json j;
    j["depths"] = sweep.depths;
    Json curves = Json::array();
    for (std::size_t b = 0; b < sweep.fits.size(); ++b) {
        Json c;
        c["beta_prefactor"] = sweep.reports.front().points[b].beta_prefactor;
        c["r_c"] = number(sweep.reports.front().points[b].error_per_clifford);
        Json f = Json::array();
        Json e = Json::array();
        for (const auto &r : sweep.reports) {
            f.push_back(number(r.points[b].f_seq));
            e.push_back(number(r.points[b].stderr_f_seq));
        }
        c["f_seq"] = f;
        c["stderr"] = e;
        c["fit"] = to_json(sweep.fits[b]);
        curves.push_back(c);
    }
    j["curves"] = curves;
    return j;
}

Json to_json(const BuildupReport &report) {
    Json j;
    j["pulse"] = to_json(report.pulse);
    j["seed"] = report.seed;
    j["window"] = report.trace.window;
    j["length"] = report.trace.p2.size();
    j["final_quartile_p2"] = number(report.trace.final_quartile_mean());
    return j;
}

Json to_json(const ExperimentConfig &config) {
    Json j;
    j["model"] = to_json(config.model);
    j["duration_s"] = config.duration;
    j["rotation_error"] = config.rotation_error;
    j["mode"] = std::string(to_string(config.mode));
    j["damping"] = config.damping;
    j["t01_s"] = config.damping_params.t01;
    j["t12_s"] = config.damping_params.t12;
    j["shots"] = config.shots;
    j["realizations"] = config.realizations;
    j["seed"] = config.seed;
    j["circuit_count"] = config.circuit_count;
    j["window"] = config.window;
    j["depth"] = config.depth;
    j["sequences"] = config.sequences;
    j["compose_to"] = std::string(to_string(config.compose_target));
    j["beta_grid"] = config.beta_grid;
    j["rotating_wave"] = config.calibration.propagator.rotating_wave;
    j["integration_steps"] = config.calibration.propagator.steps;
    return j;
}

Json make_run_record(const std::string &command, const Json &config, std::uint64_t seed,
                     const Json &result, double wall_seconds) {
    Json j;
    j["schema_version"] = kRunRecordSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["input_hash"] = git_blob_hash(config.dump());
    j["result"] = result;
    Json timing;
    timing["finished_utc"] = utc_now();
    timing["wall_seconds"] = wall_seconds;
    j["timing"] = timing;
    return j;
}

} // namespace restless
