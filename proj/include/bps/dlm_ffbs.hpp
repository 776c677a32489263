#pragma once

#include <vector>

#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

// Observation design for the synthesis DLM. Block r of the coefficient
// vector is (intercept, J agent weights) for series r; row r of the design
// holds a leading 1 followed by the J latent agent states for series r.
struct DesignMatrix {
    Matrix entries;  // q x (J+1)q
    Eigen::Index q = 0;
    Eigen::Index n_agents = 0;

    // states: J x q latent agent matrix X_t (row j = agent j).
    static DesignMatrix from_states(const Matrix& states);

    Eigen::Index dim() const { return (n_agents + 1) * q; }
};

struct DiscountConfig {
    double delta = 0.99;  // coefficient discount
    double beta = 0.99;   // volatility discount

    void validate() const;
};

// Sufficient statistics of one forward-filter step for the coefficient path.
struct ThetaFilterStats {
    Vector m;  // posterior mean, (J+1)q
    Matrix C;  // posterior covariance
    Matrix R;  // prior covariance C_{t-1}/delta
    Vector f;  // one-step predictive mean, q
    Matrix Q;  // one-step predictive covariance, q x q
    Vector e;  // forecast error
    Matrix A;  // gain, (J+1)q x q
};

ThetaFilterStats forward_filter_step(const Vector& prev_m, const Matrix& prev_C,
                                     const DesignMatrix& F, const Vector& y,
                                     const Matrix& V, double delta);

// Backward sampling of theta_{0:T}. stats[t-1] corresponds to time t;
// (m0, C0) is the time-0 prior. Returns T+1 draws, index 0 = time 0.
std::vector<Vector> backward_sample_theta(const std::vector<ThetaFilterStats>& stats,
                                          const Vector& m0, const Matrix& C0,
                                          double delta, Rng& rng);

}  // namespace bps
