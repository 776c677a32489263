#pragma once

#include <vector>

#include "bps/gibbs.hpp"
#include "bps/types.hpp"

namespace bps {

// mean squared forecast error of an error sequence
double msfe(const Vector& errors);

// per-series MSFE over matched rows (forecast means vs realized outcomes)
Vector msfe_by_series(const Matrix& forecasts, const Matrix& outcomes);

// cumulative log predictive density ratio against a baseline:
// out(t) = sum_{s <= t} (model(s) - baseline(s))
Vector lpdr(const Vector& model_logpdf, const Vector& baseline_logpdf);

// Rao-Blackwellized mixture density of a sampled forecast distribution
double predictive_logpdf(const ForecastDistribution& fd, const Vector& y);

// KL(N(mean_p, cov_p) || N(mean_h, cov_h)), closed form
double kl_gaussian(const Vector& mean_p, const Matrix& cov_p, const Vector& mean_h,
                   const Matrix& cov_h);

// Monte Carlo KL estimate from log densities evaluated at common draws from p
double kl_mc(const Vector& logp, const Vector& logh);

// Gaussian moment fit of the samples plays the role of p; logh holds the
// comparison density evaluated at the same samples
double kl_mc_gaussian_fit(const Matrix& samples, const Vector& logh);

// moments of a sample matrix (rows = draws); cov uses the 1/(n-1) convention
NormalDensity fit_gaussian(const Matrix& samples);

// Sequential Bayesian model averaging weights. loglik is T x J one-step joint
// log likelihoods; row t of the result holds the weights in force when
// forecasting from origin t, so row 0 is uniform and row t is the softmax of
// the column sums over s < t.
Matrix bma_weights(const Matrix& loglik);

}  // namespace bps
