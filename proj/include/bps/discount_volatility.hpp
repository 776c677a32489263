#pragma once

#include <vector>

#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

// Forward-filter summaries of the inverse-Wishart discount volatility model:
// V_t | data ~ IW(n_t, D_t) with n_t = h_t - q + 1.
struct VolFilterStats {
    double h = 0.0;
    double n = 0.0;
    Matrix D;

    static VolFilterStats from_prior(double n0, const Matrix& D0);
};

VolFilterStats volatility_filter_step(const VolFilterStats& prev, const Vector& residual,
                                      double beta);

// Wishart(dof, scale) via the Bartlett decomposition; real dof > q-1 allowed.
Matrix sample_wishart(double dof, const Matrix& scale, Rng& rng);

// IW(n, D), i.e. the inverse of a Wishart(n+q-1, D^{-1}) draw.
Matrix sample_inverse_wishart(double n, const Matrix& D, Rng& rng);

// Backward sampler for V_{0:T}; stats[t-1] corresponds to time t and prior
// is the time-0 entry. Returns T+1 matrices, index 0 = time 0.
std::vector<Matrix> backward_sample_volatility(const std::vector<VolFilterStats>& stats,
                                               const VolFilterStats& prior, double beta,
                                               Rng& rng);

}  // namespace bps
