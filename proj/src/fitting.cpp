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

#include "restless/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_vector.h>

namespace restless {

namespace {

struct Problem {
    const std::vector<double> *y;
    const ModelFunction *model;
    std::vector<double> p;
    std::vector<double> grad;
};

void load(Problem &pb, const gsl_vector *x) {
    for (std::size_t k = 0; k < pb.p.size(); ++k) {
        pb.p[k] = gsl_vector_get(x, k);
    }
}

int residual_f(const gsl_vector *x, void *params, gsl_vector *f) {
    auto &pb = *static_cast<Problem *>(params);
    load(pb, x);
    for (std::size_t i = 0; i < pb.y->size(); ++i) {
        gsl_vector_set(f, i, (*pb.model)(i, pb.p, nullptr) - (*pb.y)[i]);
    }
    return GSL_SUCCESS;
}

int residual_df(const gsl_vector *x, void *params, gsl_matrix *jac) {
    auto &pb = *static_cast<Problem *>(params);
    load(pb, x);
    for (std::size_t i = 0; i < pb.y->size(); ++i) {
        (*pb.model)(i, pb.p, pb.grad.data());
        for (std::size_t k = 0; k < pb.p.size(); ++k) {
            gsl_matrix_set(jac, i, k, pb.grad[k]);
        }
    }
    return GSL_SUCCESS;
}

struct WorkspaceDeleter {
    void operator()(gsl_multifit_nlinear_workspace *w) const { gsl_multifit_nlinear_free(w); }
};
struct MatrixDeleter {
    void operator()(gsl_matrix *m) const { gsl_matrix_free(m); }
};

} // namespace

FitResult least_squares(const std::vector<double> &y, std::vector<double> p0,
                        const ModelFunction &model, const LeastSquaresOptions &options) {
    FitResult result;
    result.parameters = p0;
    result.standard_errors.assign(p0.size(), NAN);
    const std::size_t n = y.size();
    const std::size_t np = p0.size();
    if (n < np || np == 0) {
        result.message = "fewer data points than parameters";
        return result;
    }

    Problem pb{&y, &model, p0, std::vector<double>(np)};
    gsl_multifit_nlinear_fdf fdf{};
    fdf.f = &residual_f;
    fdf.df = &residual_df;
    fdf.fvv = nullptr;
    fdf.n = n;
    fdf.p = np;
    fdf.params = &pb;

    gsl_multifit_nlinear_parameters fparams = gsl_multifit_nlinear_default_parameters();
    std::unique_ptr<gsl_multifit_nlinear_workspace, WorkspaceDeleter> work(
        gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &fparams, n, np));

    gsl_vector_const_view x0 = gsl_vector_const_view_array(p0.data(), np);
    gsl_error_handler_t *previous = gsl_set_error_handler_off();
    gsl_multifit_nlinear_init(&x0.vector, &fdf, work.get());

    int info = 0;
    const int status = gsl_multifit_nlinear_driver(
        static_cast<std::size_t>(options.max_iterations), options.xtol, options.gtol,
        options.ftol, nullptr, nullptr, &info, work.get());

    const gsl_vector *x = gsl_multifit_nlinear_position(work.get());
    const gsl_vector *f = gsl_multifit_nlinear_residual(work.get());
    for (std::size_t k = 0; k < np; ++k) {
        result.parameters[k] = gsl_vector_get(x, k);
    }
    result.residual_norm = gsl_blas_dnrm2(f);
    result.iterations = static_cast<int>(gsl_multifit_nlinear_niter(work.get()));

    std::unique_ptr<gsl_matrix, MatrixDeleter> covar(gsl_matrix_alloc(np, np));
    const gsl_matrix *jac = gsl_multifit_nlinear_jac(work.get());
    const int covar_status = gsl_multifit_nlinear_covar(jac, 0.0, covar.get());
    gsl_set_error_handler(previous);

    const double dof = static_cast<double>(n - np);
    const double chi2 = result.residual_norm * result.residual_norm;
    const double scale = dof > 0 ? chi2 / dof : 0.0;
    result.covariance.assign(np * np, 0.0);
    for (std::size_t r = 0; r < np; ++r) {
        for (std::size_t c = 0; c < np; ++c) {
            result.covariance[r * np + c] = gsl_matrix_get(covar.get(), r, c) * scale;
        }
    }
    bool finite = true;
    for (std::size_t k = 0; k < np; ++k) {
        const double var = gsl_matrix_get(covar.get(), k, k) * scale;
        result.standard_errors[k] = std::sqrt(std::max(var, 0.0));
        finite = finite && std::isfinite(result.parameters[k]) &&
                 std::isfinite(result.standard_errors[k]);
    }
    // Zero singular values are dropped by the pseudo-inverse; a rank-deficient
    // Jacobian leaves a zero row and column in the covariance.
    bool rank_deficient = false;
    for (std::size_t k = 0; k < np; ++k) {
        if (gsl_matrix_get(covar.get(), k, k) == 0.0) {
            rank_deficient = true;
        }
    }

    result.converged = status == GSL_SUCCESS && covar_status == GSL_SUCCESS && finite &&
                       !rank_deficient;
    if (status != GSL_SUCCESS) {
        result.message = gsl_strerror(status);
    } else if (rank_deficient) {
        result.message = "parameters not identifiable (singular Jacobian)";
    } else if (!finite) {
        result.message = "non-finite estimate";
    }
    return result;
}

} // namespace restless
