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

#include "restless/postprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include <gsl/gsl_cdf.h>

namespace restless {

std::string_view to_string(ExecutionMode mode) {
    return mode == ExecutionMode::Restless ? "restless" : "standard";
}

ExecutionMode parse_execution_mode(std::string_view text) {
    if (text == "restless") {
        return ExecutionMode::Restless;
    }
    if (text == "standard") {
        return ExecutionMode::Standard;
    }
    throw ValidationError("execution mode must be restless or standard");
}

PostMeasurementMatrix post_measurement_for(ExecutionMode mode) {
    return mode == ExecutionMode::Restless ? restless_identity_matrix() : standard_reset_matrix();
}

void ProbabilitySeries::push(std::int64_t hits, std::int64_t total) {
    const double q = total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : NAN;
    p.push_back(q);
    standard_error.push_back(total > 0 ? std::sqrt(q * (1.0 - q) / static_cast<double>(total))
                                       : NAN);
    count.push_back(total);
}

namespace {

void require_streams(const std::vector<ShotStream> &streams) {
    if (streams.empty()) {
        throw ProcessingError("no shot streams to process");
    }
    const int k = streams.front().circuit_count();
    for (const auto &s : streams) {
        if (s.circuit_count() != k) {
            throw ProcessingError("shot streams disagree on the circuit count");
        }
    }
}

void require_binary(const ShotStream &s) {
    for (auto o : s.outcomes()) {
        if (o > 1) {
            throw ProcessingError("outcomes are not binary");
        }
    }
}

// hits[k] / totals[k] for "outcome differs from the previous one".
void count_changes(const std::vector<ShotStream> &streams, const XorOptions &options,
                   std::vector<std::int64_t> &hits, std::vector<std::int64_t> &totals) {
    require_streams(streams);
    const auto k_count = static_cast<std::size_t>(streams.front().circuit_count());
    hits.assign(k_count, 0);
    totals.assign(k_count, 0);
    for (const auto &s : streams) {
        require_binary(s);
        const auto &out = s.outcomes();
        for (std::size_t z = 0; z < out.size(); ++z) {
            if (z == 0 && !options.compare_first_to_ground) {
                continue;
            }
            const int previous = z == 0 ? 0 : out[z - 1];
            const std::size_t k = z % k_count;
            hits[k] += out[z] != previous ? 1 : 0;
            totals[k] += 1;
        }
    }
}

ProbabilitySeries outcome_fraction(const std::vector<ShotStream> &streams, int label) {
    require_streams(streams);
    const auto k_count = static_cast<std::size_t>(streams.front().circuit_count());
    std::vector<std::int64_t> hits(k_count, 0);
    std::vector<std::int64_t> totals(k_count, 0);
    for (const auto &s : streams) {
        const auto &out = s.outcomes();
        for (std::size_t z = 0; z < out.size(); ++z) {
            hits[z % k_count] += out[z] == label ? 1 : 0;
            totals[z % k_count] += 1;
        }
    }
    ProbabilitySeries series;
    for (std::size_t k = 0; k < k_count; ++k) {
        series.push(hits[k], totals[k]);
    }
    return series;
}

} // namespace

ProbabilitySeries xor_state_change(const std::vector<ShotStream> &streams,
                                   const XorOptions &options) {
    std::vector<std::int64_t> hits;
    std::vector<std::int64_t> totals;
    count_changes(streams, options, hits, totals);
    ProbabilitySeries series;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        series.push(hits[k], totals[k]);
    }
    return series;
}

ProbabilitySeries restless_sequence_fidelity(const std::vector<ShotStream> &streams,
                                             const XorOptions &options) {
    std::vector<std::int64_t> hits;
    std::vector<std::int64_t> totals;
    count_changes(streams, options, hits, totals);
    ProbabilitySeries series;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        series.push(totals[k] - hits[k], totals[k]);
    }
    return series;
}

ProbabilitySeries compose_to_x_sequence_fidelity(const std::vector<ShotStream> &streams,
                                                 ExecutionMode mode, const XorOptions &options) {
    if (mode == ExecutionMode::Restless) {
        return xor_state_change(streams, options);
    }
    return excited_state_probability(streams);
}

ProbabilitySeries ground_state_probability(const std::vector<ShotStream> &streams) {
    return outcome_fraction(streams, 0);
}

ProbabilitySeries excited_state_probability(const std::vector<ShotStream> &streams) {
    require_streams(streams);
    for (const auto &s : streams) {
        require_binary(s);
    }
    return outcome_fraction(streams, 1);
}

double LeakageTrace::final_quartile_mean() const {
    if (p2.empty()) {
        return NAN;
    }
    const std::size_t start = p2.size() - std::max<std::size_t>(p2.size() / 4, 1);
    double sum = 0.0;
    for (std::size_t z = start; z < p2.size(); ++z) {
        sum += p2[z];
    }
    return sum / static_cast<double>(p2.size() - start);
}

LeakageTrace leakage_trace(const std::vector<ShotStream> &streams, int window) {
    require_streams(streams);
    if (window < 1) {
        throw ValidationError("leakage_trace: window must be at least 1");
    }
    const std::size_t length = streams.front().size();
    for (const auto &s : streams) {
        if (!s.has_basis_states()) {
            throw ProcessingError("leakage_trace: basis-state record missing");
        }
        if (s.size() != length) {
            throw ProcessingError("leakage_trace: streams differ in length");
        }
    }
    const double r = static_cast<double>(streams.size());
    std::vector<double> sum(length, 0.0);
    std::vector<double> sum_sq(length, 0.0);
    std::vector<int> prefix(length + 1, 0);
    const auto w = static_cast<std::size_t>(window);
    for (const auto &s : streams) {
        const auto &phi = s.basis_states();
        for (std::size_t z = 0; z < length; ++z) {
            prefix[z + 1] = prefix[z] + (phi[z] == 2 ? 1 : 0);
        }
        for (std::size_t z = 0; z < length; ++z) {
            const std::size_t lo = z + 1 >= w ? z + 1 - w : 0;
            const double x = static_cast<double>(prefix[z + 1] - prefix[lo]) /
                             static_cast<double>(z + 1 - lo);
            sum[z] += x;
            sum_sq[z] += x * x;
        }
    }
    LeakageTrace trace;
    trace.window = window;
    trace.p2.resize(length);
    trace.sem.resize(length);
    for (std::size_t z = 0; z < length; ++z) {
        const double mean = sum[z] / r;
        trace.p2[z] = mean;
        if (streams.size() > 1) {
            const double var = std::max(0.0, (sum_sq[z] - r * mean * mean) / (r - 1.0));
            trace.sem[z] = std::sqrt(var / r);
        } else {
            trace.sem[z] = 0.0;
        }
    }
    return trace;
}

FineAmplitudeFit fit_fine_amplitude(const ProbabilitySeries &series, double target_angle) {
    return fit_fine_amplitude(series.p, target_angle);
}

namespace {

struct OscillationSeed {
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
};

// Grid search over dtheta; for each candidate the model is linear in (a, b),
// or in b alone when a is fixed.
OscillationSeed grid_seed(const std::vector<double> &values, double target_angle,
                          const double *fixed_a) {
    const std::size_t n = values.size();
    const double nn = static_cast<double>(n);
    double best_sse = std::numeric_limits<double>::infinity();
    OscillationSeed best;
    constexpr int kGrid = 100;
    for (int g = 0; g < kGrid; ++g) {
        const double d = -0.3 + 0.6 * g / (kGrid - 1);
        double s = 0.0, ss = 0.0, y = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double si = std::sin((target_angle + d) * static_cast<double>(i));
            s += si;
            ss += si * si;
            y += values[i];
            sy += si * values[i];
        }
        double a = 0.0;
        if (fixed_a != nullptr) {
            a = *fixed_a;
        } else {
            const double det = nn * ss - s * s;
            if (std::abs(det) < 1e-12) {
                continue;
            }
            a = (nn * sy - s * y) / det;
        }
        const double b = (y - a * s) / nn;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r =
                a * std::sin((target_angle + d) * static_cast<double>(i)) + b - values[i];
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best = OscillationSeed{a, b, d};
        }
    }
    return best;
}

} // namespace

FineAmplitudeFit fit_fine_amplitude(const std::vector<double> &values, double target_angle) {
    if (values.size() < 4) {
        throw ProcessingError("fit_fine_amplitude: need at least four points");
    }
    if (!(target_angle != 0.0) || !std::isfinite(target_angle)) {
        throw ValidationError("fit_fine_amplitude: target angle must be non-zero");
    }

    // Free fit of (a, b, dtheta).
    const OscillationSeed seed = grid_seed(values, target_angle, nullptr);
    const ModelFunction model = [target_angle](std::size_t i, const std::vector<double> &p,
                                               double *grad) {
        const double x = static_cast<double>(i);
        const double phase = (target_angle + p[2]) * x;
        const double s = std::sin(phase);
        if (grad != nullptr) {
            grad[0] = s;
            grad[1] = 1.0;
            grad[2] = p[0] * x * std::cos(phase);
        }
        return p[0] * s + p[1];
    };

    FineAmplitudeFit out;
    out.fit = least_squares(values, {seed.a, seed.b, seed.d}, model);
    out.a = out.fit.parameters[0];
    out.b = out.fit.parameters[1];
    out.delta_theta = out.fit.parameters[2];
    if (out.a < 0.0) {
        // (-a, d) describes the same curve as (a, -2 theta_t - d).
        out.a = -out.a;
        out.delta_theta = std::remainder(-2.0 * target_angle - out.delta_theta, kTwoPi);
        out.fit.parameters[0] = out.a;
        out.fit.parameters[2] = out.delta_theta;
        // Both a and dtheta change sign; flip their covariances with b.
        auto &c = out.fit.covariance;
        if (c.size() == 9) {
            c[1] = -c[1];
            c[3] = -c[3];
            c[5] = -c[5];
            c[7] = -c[7];
        }
    }
    out.delta_theta_stderr = out.fit.standard_errors[2];

    // Pinned-contrast fit, used unless the free contrast is resolved, physical
    // and a significant improvement (nested-model F test at 95%). The F test
    // does not account for the search over dtheta, so shot noise on flat data
    // can pass it with a tiny contrast; the lower bound rejects those.
    const double a = kMaxFineAmplitudeContrast;
    const OscillationSeed fixed_seed = grid_seed(values, target_angle, &a);
    const ModelFunction pinned = [target_angle, a](std::size_t i, const std::vector<double> &p,
                                                   double *grad) {
        const double x = static_cast<double>(i);
        const double phase = (target_angle + p[1]) * x;
        if (grad != nullptr) {
            grad[0] = 1.0;
            grad[1] = a * x * std::cos(phase);
        }
        return a * std::sin(phase) + p[0];
    };
    const FitResult refit = least_squares(values, {fixed_seed.b, fixed_seed.d}, pinned);

    bool use_pinned = !out.fit.converged || out.a > kMaxFineAmplitudeContrast ||
                      out.a < kMinFineAmplitudeContrast;
    if (!use_pinned && refit.converged) {
        const double dof = static_cast<double>(values.size()) - 3.0;
        const double sse_free = out.fit.residual_norm * out.fit.residual_norm;
        const double sse_pinned = refit.residual_norm * refit.residual_norm;
        const double gain = sse_pinned - sse_free;
        if (gain <= 1e-12 * std::max(1.0, sse_pinned)) {
            use_pinned = true;
        } else if (sse_free > 0.0) {
            use_pinned = gain / (sse_free / dof) < gsl_cdf_fdist_Pinv(0.95, 1.0, dof);
        }
    }
    if (use_pinned) {
        out.contrast_fixed = true;
        out.a = a;
        out.b = refit.parameters[0];
        out.delta_theta = refit.parameters[1];
        out.delta_theta_stderr = refit.standard_errors[1];
        out.fit.parameters = {a, out.b, out.delta_theta};
        out.fit.standard_errors = {0.0, refit.standard_errors[0], refit.standard_errors[1]};
        const auto &c = refit.covariance;
        out.fit.covariance.clear();
        if (c.size() == 4) {
            out.fit.covariance = {0.0, 0.0, 0.0, 0.0, c[0], c[1], 0.0, c[2], c[3]};
        }
        out.fit.residual_norm = refit.residual_norm;
        out.fit.iterations = refit.iterations;
        out.fit.converged = refit.converged;
        out.fit.message = refit.converged ? "contrast pinned at its upper bound" : refit.message;
    }
    out.fraction = out.delta_theta / target_angle;
    out.fraction_stderr = out.delta_theta_stderr / std::abs(target_angle);
    return out;
}

RbFit fit_rb_decay(const std::vector<double> &depths, const std::vector<double> &values) {
    if (depths.size() != values.size()) {
        throw ValidationError("fit_rb_decay: depth and value counts differ");
    }
    if (std::set<double>(depths.begin(), depths.end()).size() < 3) {
        throw ValidationError("fit_rb_decay: need at least three distinct depths");
    }
    RbFit out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo < 1e-12) {
        out.identifiable = false;
        out.amplitude = 0.0;
        out.alpha = 1.0;
        out.offset = *lo;
        out.fit.parameters = {0.0, 1.0, *lo};
        out.fit.standard_errors = {NAN, NAN, NAN};
        out.fit.message = "constant data: amplitude and offset are not separable";
        return out;
    }

    // Seeds: B0 from the deepest point, A0 from the shallowest, alpha0 from a
    // log-linear regression of (y - B0) / A0 against depth.
    std::vector<std::size_t> order(depths.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return depths[x] < depths[y]; });
    const double b0 = values[order.back()];
    const double a0 = values[order.front()] - b0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const double ratio = a0 != 0.0 ? (values[i] - b0) / a0 : 0.0;
        if (ratio > 0.02) {
            const double ly = std::log(ratio);
            sx += depths[i];
            sy += ly;
            sxx += depths[i] * depths[i];
            sxy += depths[i] * ly;
            ++used;
        }
    }
    double alpha0 = 0.9;
    if (used >= 2) {
        const double det = used * sxx - sx * sx;
        if (det > 0.0) {
            alpha0 = std::exp((used * sxy - sx * sy) / det);
        }
    }
    alpha0 = std::clamp(alpha0, 0.01, 0.999);

    const ModelFunction model = [&depths](std::size_t i, const std::vector<double> &p,
                                          double *grad) {
        const double m = depths[i];
        const double am = std::pow(p[1], m);
        if (grad != nullptr) {
            grad[0] = am;
            grad[1] = m == 0.0 ? 0.0 : p[0] * m * std::pow(p[1], m - 1.0);
            grad[2] = 1.0;
        }
        return p[0] * am + p[2];
    };
    out.fit = least_squares(values, {a0, alpha0, b0}, model);
    out.amplitude = out.fit.parameters[0];
    out.alpha = out.fit.parameters[1];
    out.offset = out.fit.parameters[2];
    out.amplitude_stderr = out.fit.standard_errors[0];
    out.alpha_stderr = out.fit.standard_errors[1];
    out.offset_stderr = out.fit.standard_errors[2];
    if (!(out.alpha > 0.0 && out.alpha <= 1.0 + 1e-9)) {
        out.fit.converged = false;
        out.fit.message = "decay parameter outside (0, 1]";
    }
    return out;
}

void write_probability_series_csv(std::ostream &out, const ProbabilitySeries &series) {
    out << "circuit_index,n,p,stderr\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << k << ',' << series.count[k] << ',' << series.p[k] << ','
            << series.standard_error[k] << '\n';
    }
}

void write_leakage_trace_csv(std::ostream &out, const LeakageTrace &trace) {
    out << "zeta,p2_mean,p2_sem\n";
    for (std::size_t z = 0; z < trace.p2.size(); ++z) {
        out << z << ',' << trace.p2[z] << ',' << trace.sem[z] << '\n';
    }
}

} // namespace restless
