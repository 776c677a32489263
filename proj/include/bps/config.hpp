#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bps/synth.hpp"
#include "bps/types.hpp"

namespace bps {

enum class DensityMode { empirical, student_t };

// Flat sectioned key=value run configuration (e.g. "bps.delta=0.99").
struct RunConfig {
    // data
    std::string panel_path;
    std::map<std::string, std::string> roles;  // series name -> role text
    std::string out_dir = "out";

    // bps synthesis block
    double bps_delta = 0.99;
    double bps_beta = 0.99;
    double bps_n0 = 7.0;
    double bps_d0_scale = 0.01;
    std::map<int, double> intercept_var;       // per horizon override
    std::map<std::string, double> coef_var;    // per series override

    // agent models
    std::vector<std::string> agent_lags = {"1", "12", "3", "1:3:9", "1:6:12"};
    double agent_delta = 0.99;
    double agent_beta = 0.99;
    double agent_n0 = 7.0;
    double agent_d0_scale = 0.01;
    double agent_coef_var = 1.0;
    int agent_draws = 5000;
    // (agent index 1-based, series name) -> additive forecast-location bias
    std::map<std::pair<int, std::string>, double> agent_shift;
    DensityMode density_mode = DensityMode::empirical;

    // schedule (encoded months)
    int bps_start = 1993 * 12 + 6;   // 1993-07
    int train_end = 2000 * 12 + 11;  // 2000-12
    int test_end = 2015 * 12 + 11;   // 2015-12

    std::vector<int> horizons = {1};

    // mcmc
    int burn_in = 3000;
    int n_saved = 5000;
    int thin = 1;

    std::uint64_t seed = 1;

    SynthSpec synth;
    std::string synth_out = "synth_panel.csv";

    double intercept_var_for(int k) const;
    double coef_var_for(const std::string& series) const;
    void validate() const;
};

// applies one "section.key=value" assignment; unknown keys are errors
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace bps
