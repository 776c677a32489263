#pragma once

#include <cstdint>
#include <vector>

#include "bps/agent_density.hpp"
#include "bps/agent_state_sampler.hpp"
#include "bps/discount_volatility.hpp"
#include "bps/dlm_ffbs.hpp"
#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

struct BpsPrior {
    Vector m0;           // (J+1)q
    Matrix C0;           // (J+1)q x (J+1)q
    double n0 = 7.0;     // volatility dof
    Matrix D0;           // q x q
    double delta = 0.99;
    double beta = 0.99;

    void validate(Eigen::Index n_agents, Eigen::Index q) const;

    // reference default: m0 = (0, 1/J, ...) per series, C0 diagonal with
    // unit coefficient variances, intercept_var on intercepts, and optional
    // per-series coefficient variance overrides; V0 ~ IW(7, 7*0.01 I).
    static BpsPrior standard(Eigen::Index n_agents, Eigen::Index q, double intercept_var,
                             const std::vector<double>& coef_var_per_series = {});
};

struct McmcConfig {
    int burn_in = 3000;
    int n_saved = 5000;
    int thin = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class StateInit { prior_draw, observed };

enum class BlockOrder { theta_vol_states, states_theta_vol };

// One time point of the synthesis dataset: outcome plus the J agent densities
// targeting it.
struct SynthesisData {
    std::vector<Vector> y;                                   // T outcomes
    std::vector<std::vector<AgentForecastDensity>> agents;   // T x J

    Eigen::Index horizon() const { return static_cast<Eigen::Index>(y.size()); }
    Eigen::Index q() const { return y.empty() ? 0 : y.front().size(); }
    Eigen::Index n_agents() const { return agents.empty() ? 0 : static_cast<Eigen::Index>(agents.front().size()); }
    void validate() const;
};

// Mutable Gibbs state over t = 1..T (index 0 of theta/V is time 0).
struct GibbsChainState {
    std::vector<Vector> theta;  // T+1
    std::vector<Matrix> V;      // T+1
    std::vector<Matrix> X;      // T, each J x q
    std::vector<Vector> phi;    // T, each length J
    Matrix C_last;              // theta filter covariance at T
    double h_last = 0.0;        // volatility filter dof at T
    Matrix D_last;              // volatility filter sum-of-squares at T
};

struct PosteriorDraws {
    std::vector<std::vector<Vector>> theta;  // n_saved x (T+1)
    std::vector<std::vector<Matrix>> V;      // n_saved x (T+1)
    std::vector<std::vector<Matrix>> X;      // n_saved x T
    std::vector<Matrix> C_last;
    std::vector<double> h_last;
    std::vector<Matrix> D_last;
    Vector loglik;  // n_saved

    int n_saved() const { return static_cast<int>(theta.size()); }
};

struct ForecastDistribution {
    Matrix samples;             // n_saved x q synthetic outcomes
    std::vector<Vector> means;  // per-sample F_{t+1} theta_{t+1}
    std::vector<Matrix> covs;   // per-sample V_{t+1}
};

// Initial latent states, drawn from the agent densities (default) or pinned
// at the observed outcomes.
std::vector<Matrix> initialize_states(const SynthesisData& data, Rng& rng,
                                      StateInit mode = StateInit::prior_draw);

void gibbs_sweep(GibbsChainState& state, const SynthesisData& data, const BpsPrior& prior,
                 Rng& rng, BlockOrder order = BlockOrder::theta_vol_states);

PosteriorDraws run_mcmc(const SynthesisData& data, const BpsPrior& prior, const McmcConfig& cfg,
                        BlockOrder order = BlockOrder::theta_vol_states,
                        StateInit init = StateInit::prior_draw);

ForecastDistribution forecast_one_step(const PosteriorDraws& draws,
                                       const std::vector<AgentForecastDensity>& next_agents,
                                       const BpsPrior& prior, Rng& rng);

}  // namespace bps
