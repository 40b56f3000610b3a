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

/**
 * @file
 * Thin Levenberg-Marquardt wrapper over GSL's nonlinear least-squares solver.
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace restless {

struct FitResult {
    std::vector<double> parameters;
    /// Square roots of the covariance diagonal, scaled by the reduced chi-square.
    std::vector<double> standard_errors;
    /// Row-major parameter covariance with the same scaling.
    std::vector<double> covariance;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

/// Model evaluated at data point i for parameters p; must also fill the
/// gradient with respect to p when `gradient` is non-null.
using ModelFunction =
    std::function<double(std::size_t i, const std::vector<double> &p, double *gradient)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    double xtol = 1e-12;
    double gtol = 1e-12;
    double ftol = 0.0;
};

/// Minimizes sum_i (model(i, p) - y_i)^2 starting from p0.
FitResult least_squares(const std::vector<double> &y, std::vector<double> p0,
                        const ModelFunction &model, const LeastSquaresOptions &options = {});

} // namespace restless
