#include "bps/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bps/panel.hpp"
#include "bps/tvp_var.hpp"

namespace bps {

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("config: key '" + key + "': bad numeric value '" + value + "'");
    }
}

long to_long(const std::string& key, const std::string& value) {
    long v = 0;
    auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (r.ec != std::errc{} || r.ptr != value.data() + value.size())
        throw ConfigError("config: key '" + key + "': bad integer '" + value + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        auto a = cell.find_first_not_of(" \t");
        auto b = cell.find_last_not_of(" \t");
        if (a == std::string::npos) continue;
        out.push_back(cell.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

double RunConfig::intercept_var_for(int k) const {
    auto it = intercept_var.find(k);
    if (it != intercept_var.end()) return it->second;
    if (k <= 1) return 0.001;
    if (k <= 12) return 0.01;
    return 0.1;
}

double RunConfig::coef_var_for(const std::string& series) const {
    auto it = coef_var.find(series);
    return it == coef_var.end() ? 1.0 : it->second;
}

void RunConfig::validate() const {
    if (!(bps_delta > 0.0 && bps_delta <= 1.0) || !(bps_beta > 0.0 && bps_beta <= 1.0))
        throw ConfigError("config: bps discounts must lie in (0, 1]");
    if (!(agent_delta > 0.0 && agent_delta <= 1.0) || !(agent_beta > 0.0 && agent_beta <= 1.0))
        throw ConfigError("config: agent discounts must lie in (0, 1]");
    if (bps_n0 <= 0.0 || bps_d0_scale <= 0.0 || agent_n0 <= 0.0 || agent_d0_scale <= 0.0)
        throw ConfigError("config: prior scales must be positive");
    if (agent_coef_var <= 0.0) throw ConfigError("config: agents.coef_var must be positive");
    if (agent_draws < 1) throw ConfigError("config: agents.draws must be >= 1");
    if (agent_lags.empty()) throw ConfigError("config: need at least one agent lag spec");
    for (const auto& spec : agent_lags) parse_lag_spec(spec);
    if (horizons.empty()) throw ConfigError("config: need at least one horizon");
    for (int k : horizons)
        if (k < 1) throw ConfigError("config: horizons must be >= 1");
    if (burn_in < 0 || n_saved < 1 || thin < 1)
        throw ConfigError("config: need mcmc.burn_in >= 0, mcmc.n_saved >= 1, mcmc.thin >= 1");
    if (!(bps_start < train_end && train_end < test_end))
        throw ConfigError("config: schedule must satisfy bps_start < train_end < test_end");
    for (const auto& [iv_k, v] : intercept_var)
        if (iv_k < 1 || v <= 0.0) throw ConfigError("config: bad intercept variance override");
    for (const auto& [name, v] : coef_var)
        if (v <= 0.0) throw ConfigError("config: bad coefficient variance override");
    for (const auto& [name, role] : roles) parse_series_role(role);
}

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "data.panel") { cfg.panel_path = value; return; }
    if (key.rfind("data.role.", 0) == 0) {
        parse_series_role(value);
        cfg.roles[key.substr(10)] = value;
        return;
    }
    if (key == "out.dir") { cfg.out_dir = value; return; }
    if (key == "seed") { cfg.seed = static_cast<std::uint64_t>(to_long(key, value)); return; }
    if (key == "horizons") {
        cfg.horizons.clear();
        for (const auto& s : split_list(value))
            cfg.horizons.push_back(static_cast<int>(to_long(key, s)));
        return;
    }
    if (key == "bps.delta") { cfg.bps_delta = to_double(key, value); return; }
    if (key == "bps.beta") { cfg.bps_beta = to_double(key, value); return; }
    if (key == "bps.n0") { cfg.bps_n0 = to_double(key, value); return; }
    if (key == "bps.d0_scale") { cfg.bps_d0_scale = to_double(key, value); return; }
    if (key.rfind("bps.intercept_var.k", 0) == 0) {
        int k = static_cast<int>(to_long(key, key.substr(19)));
        cfg.intercept_var[k] = to_double(key, value);
        return;
    }
    if (key.rfind("bps.coef_var.", 0) == 0) {
        cfg.coef_var[key.substr(13)] = to_double(key, value);
        return;
    }
    if (key == "agents.lags") {
        cfg.agent_lags = split_list(value);
        return;
    }
    if (key == "agents.delta") { cfg.agent_delta = to_double(key, value); return; }
    if (key == "agents.beta") { cfg.agent_beta = to_double(key, value); return; }
    if (key == "agents.n0") { cfg.agent_n0 = to_double(key, value); return; }
    if (key == "agents.d0_scale") { cfg.agent_d0_scale = to_double(key, value); return; }
    if (key == "agents.coef_var") { cfg.agent_coef_var = to_double(key, value); return; }
    if (key == "agents.draws") { cfg.agent_draws = static_cast<int>(to_long(key, value)); return; }
    if (key == "agents.density_mode") {
        if (value == "empirical") cfg.density_mode = DensityMode::empirical;
        else if (value == "student_t") cfg.density_mode = DensityMode::student_t;
        else throw ConfigError("config: agents.density_mode must be empirical or student_t");
        return;
    }
    if (key.rfind("agents.shift.", 0) == 0) {
        auto rest = key.substr(13);
        auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw ConfigError("config: agents.shift key needs the form agents.shift.<j>.<series>");
        int j = static_cast<int>(to_long(key, rest.substr(0, dot)));
        cfg.agent_shift[{j, rest.substr(dot + 1)}] = to_double(key, value);
        return;
    }
    if (key == "schedule.bps_start") { cfg.bps_start = parse_month(value); return; }
    if (key == "schedule.train_end") { cfg.train_end = parse_month(value); return; }
    if (key == "schedule.test_end") { cfg.test_end = parse_month(value); return; }
    if (key == "mcmc.burn_in") { cfg.burn_in = static_cast<int>(to_long(key, value)); return; }
    if (key == "mcmc.n_saved") { cfg.n_saved = static_cast<int>(to_long(key, value)); return; }
    if (key == "mcmc.thin") { cfg.thin = static_cast<int>(to_long(key, value)); return; }
    if (key == "synth.q") { cfg.synth.q = to_long(key, value); return; }
    if (key == "synth.t") { cfg.synth.T = static_cast<int>(to_long(key, value)); return; }
    if (key == "synth.start") { cfg.synth.start_month = parse_month(value); return; }
    if (key == "synth.ar") { cfg.synth.ar = to_double(key, value); return; }
    if (key == "synth.cross") { cfg.synth.cross = to_double(key, value); return; }
    if (key == "synth.intercept") { cfg.synth.intercept = to_double(key, value); return; }
    if (key == "synth.noise_sd") { cfg.synth.noise_sd = to_double(key, value); return; }
    if (key == "synth.noise_dof") { cfg.synth.noise_dof = to_double(key, value); return; }
    if (key == "synth.sv_phi") { cfg.synth.sv_phi = to_double(key, value); return; }
    if (key == "synth.sv_sd") { cfg.synth.sv_sd = to_double(key, value); return; }
    if (key == "synth.coef_drift_sd") { cfg.synth.coef_drift_sd = to_double(key, value); return; }
    if (key == "synth.names") { cfg.synth.names = split_list(value); return; }
    if (key == "synth.out") { cfg.synth_out = value; return; }
    throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto a = line.find_first_not_of(" \t");
        if (a == std::string::npos || line[a] == '#') continue;
        auto b = line.find_last_not_of(" \t");
        std::string entry = line.substr(a, b - a + 1);
        auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = entry.substr(0, eq);
        std::string value = entry.substr(eq + 1);
        auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        auto va = value.find_first_not_of(" \t");
        value = (va == std::string::npos) ? "" : value.substr(va);
        apply_config_line(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace bps
