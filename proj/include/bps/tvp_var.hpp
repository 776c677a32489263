#pragma once

#include <map>
#include <string>
#include <vector>

#include "bps/agent_density.hpp"
#include "bps/panel.hpp"
#include "bps/rng.hpp"
#include "bps/types.hpp"

namespace bps {

struct LagSpec {
    std::vector<int> lags;  // strictly increasing, nonempty

    int max_lag() const { return lags.back(); }
    Eigen::Index regressor_dim(Eigen::Index q) const {
        return 1 + static_cast<Eigen::Index>(lags.size()) * q;
    }
    std::string text;  // original spec string, for labels
};

// "p" -> {1..p}; "a:s:b" -> {a} u {s, 2s, ..., b}
LagSpec parse_lag_spec(const std::string& text);

struct TvpVarPrior {
    double coef_var = 1.0;  // diagonal coefficient prior variance
    double n0 = 7.0;
    double d0_scale = 0.01;
    double delta = 0.99;  // coefficient discount
    double beta = 0.99;   // volatility discount
};

// Exchangeable time-series DLM state after filtering through some origin.
// Coefficients Theta ~ MN(M, C, V), volatility V ~ IW(n, D).
struct TvpVarState {
    LagSpec lags;
    Matrix M;  // p x q
    Matrix C;  // p x p
    double h = 0.0;
    double n = 0.0;
    Matrix D;  // q x q
    double delta = 0.99;
    double beta = 0.99;
    int month = 0;       // origin this state conditions on
    Matrix recent;       // max_lag x q latest observations, row 0 = origin month

    Eigen::Index q() const { return M.cols(); }
    Eigen::Index p() const { return M.rows(); }
    Vector regressors() const;  // built from `recent` for forecasting month+1
    // marginal posterior sd of coefficient (row i, series r)
    double coef_sd(Eigen::Index i, Eigen::Index r) const;
};

// Forward filter over the whole panel; returns one state per month from
// `max_lag + 1` rows in (agents forecast on-line, no backward pass).
std::vector<TvpVarState> fit_tvpvar_filter(const TimeSeriesPanel& data, const LagSpec& spec,
                                           const TvpVarPrior& prior);

// Horizon-k target transform. path has k+1 rows (origin value first); k = 1
// is the identity on the final row regardless of roles.
Vector transform_target(const Matrix& path, int k, const std::vector<SeriesRole>& roles);

// k = 1: exact multivariate Student-T predictive. k > 1: empirical density of
// n_draws simulated paths with the target transform applied.
AgentForecastDensity agent_forecast(const TvpVarState& state, int k,
                                    const std::vector<SeriesRole>& roles, int n_draws, Rng& rng);

// Write-once store of agent forecast densities keyed by (origin, horizon, agent).
class ForecastArchive {
public:
    using Key = std::tuple<int, int, int>;  // origin month, horizon, agent (1-based)

    ForecastArchive() = default;
    explicit ForecastArchive(std::vector<std::string> series_names)
        : series_names_(std::move(series_names)) {}

    void put(int origin, int horizon, int agent, AgentForecastDensity density);
    const AgentForecastDensity* find(int origin, int horizon, int agent) const;

    int n_agents() const;
    const std::vector<std::string>& series_names() const { return series_names_; }
    const std::map<Key, AgentForecastDensity>& entries() const { return entries_; }

    // one CSV per (agent, horizon):
    // origin_date,target_date,series,type,param_name,value
    void save(const std::string& dir) const;
    static ForecastArchive load(const std::string& dir);

private:
    std::vector<std::string> series_names_;
    std::map<Key, AgentForecastDensity> entries_;
};

}  // namespace bps
