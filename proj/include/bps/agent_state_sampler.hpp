#pragma once

#include <vector>

#include "bps/agent_density.hpp"
#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

// Gibbs block 3: latent agent states X_t given (theta_t, V_t) and the agent
// forecast densities. States are J x q matrices, row j = agent j.

// Exact Gaussian conditional draw when every agent prior is normal.
Matrix sample_states_normal(const Vector& theta, const Matrix& V, const Vector& y,
                            const std::vector<AgentForecastDensity>& priors, Rng& rng);

// Student-T agents via scale-mixture augmentation: agent j's conditional
// covariance is H_j / phi_j. Normal agents may be mixed in (their phi is
// ignored and treated as 1).
Matrix sample_states_t(const Vector& theta, const Matrix& V, const Vector& y,
                       const std::vector<AgentForecastDensity>& priors, const Vector& phi,
                       Rng& rng);

// Latent scale factors for Student-T agents; entries for non-T agents are 1.
Vector sample_phi(const Matrix& states, const std::vector<AgentForecastDensity>& priors,
                  Rng& rng);

// Importance resampling over each agent's stored candidate draws, holding the
// other agents at their current values (exact when J = 1).
Matrix sample_states_empirical(const Vector& theta, const Matrix& V, const Vector& y,
                               const std::vector<AgentForecastDensity>& priors,
                               const Matrix& current, Rng& rng);

// Joint variant: one index selects a whole J x q candidate state matrix.
Matrix resample_joint_candidates(const Vector& theta, const Matrix& V, const Vector& y,
                                 const std::vector<Matrix>& candidates, Rng& rng);

// Normalized importance weights for joint candidates (max-subtracted).
Vector joint_candidate_weights(const Vector& theta, const Matrix& V, const Vector& y,
                               const std::vector<Matrix>& candidates);

}  // namespace bps
