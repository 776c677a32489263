#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bps/panel.hpp"
#include "bps/types.hpp"

namespace bps {

// TVP-VAR(1) data generating process for desk-scale experiments: diagonal
// autoregression with symmetric cross coupling, optional random-walk drift on
// the coefficients, Gaussian innovations.
struct SynthSpec {
    Eigen::Index q = 2;
    int T = 120;
    int start_month = 1986 * 12;  // 1986-01
    double ar = 0.9;              // diagonal coefficient
    double cross = 0.0;           // off-diagonal coefficient
    double intercept = 0.0;
    double noise_sd = 0.5;        // innovation standard deviation
    double noise_dof = 0.0;       // Student-T innovation dof; 0 means Gaussian
    double sv_phi = 0.0;          // log-volatility AR(1) persistence
    double sv_sd = 0.0;           // log-volatility innovation sd; 0 disables SV
    double coef_drift_sd = 0.0;   // per-step sd of the coefficient random walk
    std::vector<std::string> names;  // defaults to s1..sq

    void validate() const;
};

TimeSeriesPanel synth_generate(const SynthSpec& spec, std::uint64_t seed);

}  // namespace bps
