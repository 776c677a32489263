#pragma once

#include <string>
#include <vector>

#include "bps/config.hpp"
#include "bps/gibbs.hpp"
#include "bps/panel.hpp"
#include "bps/tvp_var.hpp"

namespace bps {

// BPS(k) training set at a forecast origin: for every target month s in
// [bps_start, origin] pairs the realized k-step transformed outcome with the
// agent densities issued at s - k.
SynthesisData build_bps_k_dataset(const TimeSeriesPanel& panel, const ForecastArchive& archive,
                                  int k, int origin, int bps_start);

// One origin's synthesis products, kept small enough to hold for a whole run.
struct OriginResult {
    int origin = 0;
    int target = 0;
    Vector forecast_mean;     // q
    Vector forecast_sd;       // q
    Matrix quantiles;         // q x 3 (5%, 50%, 95%)
    double logpdf = 0.0;      // joint log density at the realized outcome
    bool scored = false;      // realized outcome inside the panel
    Vector coef_mean;         // (J+1)q posterior mean of theta at the origin
    Matrix xcorr;             // Jq x Jq posterior correlation of vec(X_origin)
    // per (time, agent) KL rows, filled for the final origin only
    std::vector<std::tuple<int, int, double>> kl_rows;
};

struct HorizonRun {
    int horizon = 0;
    std::vector<OriginResult> origins;
};

// forecast origins for horizon k: targets sweep (train_end, test_end]
std::vector<int> forecast_origins(const RunConfig& cfg, int k);

// Fits the configured agents over the panel and archives densities for every
// origin that any BPS(k) window or test forecast needs.
ForecastArchive fit_agents(const RunConfig& cfg, const TimeSeriesPanel& panel);

// Runs per-origin MCMC for one horizon; parallel over origins (BPS_THREADS).
HorizonRun sequential_run(const RunConfig& cfg, const TimeSeriesPanel& panel,
                          const ForecastArchive& archive, int k);

// CLI verbs; each writes artifacts under cfg.out_dir.
void cmd_fit_agents(const RunConfig& cfg);
void cmd_synthesize(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_run(const RunConfig& cfg);
void cmd_synth_data(const RunConfig& cfg);

}  // namespace bps
