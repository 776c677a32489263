#include "bps/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "bps/evaluation.hpp"
#include "bps/linalg.hpp"

namespace fs = std::filesystem;

namespace bps {

namespace {

std::string fmt(double v) {
    if (!std::isfinite(v)) throw NumericError("refusing to write non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// stream-id tags keep the per-purpose child rngs distinct
constexpr std::uint64_t kStreamAgents = 1ULL << 56;
constexpr std::uint64_t kStreamMcmc = 2ULL << 56;
constexpr std::uint64_t kStreamForecast = 3ULL << 56;

std::uint64_t stream_id(std::uint64_t tag, int k, int month, int agent = 0) {
    return tag ^ (static_cast<std::uint64_t>(agent) << 44) ^
           (static_cast<std::uint64_t>(k) << 28) ^ static_cast<std::uint64_t>(month);
}

int thread_cap() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("BPS_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

// shared-nothing index-parallel loop; first captured exception is rethrown
// by the caller after all jobs finish
struct JobErrors {
    std::vector<std::string> messages;  // aligned with job index, empty = ok
    std::exception_ptr first;
};

template <typename Fn>
JobErrors parallel_for(std::size_t n, Fn&& fn) {
    JobErrors errs;
    errs.messages.assign(n, std::string());
    const int n_threads = std::min<std::size_t>(thread_cap(), n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> have_first{false};
    std::mutex mu;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                errs.messages[i] = e.what();
                if (!have_first.exchange(true)) errs.first = std::current_exception();
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return errs;
}

TimeSeriesPanel load_run_panel(const RunConfig& cfg) {
    if (cfg.panel_path.empty()) throw ConfigError("config: data.panel is required");
    TimeSeriesPanel panel = load_panel(cfg.panel_path);
    for (const auto& [name, role] : cfg.roles) {
        bool found = false;
        for (std::size_t r = 0; r < panel.names.size(); ++r) {
            if (panel.names[r] == name) {
                panel.roles[r] = parse_series_role(role);
                found = true;
            }
        }
        if (!found) throw ConfigError("config: role for unknown series '" + name + "'");
    }
    return panel;
}

Vector shift_vector(const RunConfig& cfg, int agent, const std::vector<std::string>& names) {
    Vector s = Vector::Zero(static_cast<Eigen::Index>(names.size()));
    for (std::size_t r = 0; r < names.size(); ++r) {
        auto it = cfg.agent_shift.find({agent, names[r]});
        if (it != cfg.agent_shift.end()) s(static_cast<Eigen::Index>(r)) = it->second;
    }
    return s;
}

AgentForecastDensity shifted(const AgentForecastDensity& d, const Vector& shift) {
    if (shift.cwiseAbs().maxCoeff() == 0.0) return d;
    if (d.is_normal()) {
        NormalDensity n = d.normal();
        n.mean += shift;
        return AgentForecastDensity(n);
    }
    if (d.is_student_t()) {
        StudentTDensity t = d.student_t();
        t.loc += shift;
        return AgentForecastDensity(t);
    }
    EmpiricalDensity e = d.empirical();
    e.draws.rowwise() += shift.transpose();
    return AgentForecastDensity(std::move(e));
}

Vector realized_target(const TimeSeriesPanel& panel, int k, int target) {
    Eigen::Index last = panel.index_of(target);
    Eigen::Index first = panel.index_of(target - k);
    if (last < 0 || first < 0)
        throw DataError("target window " + format_month(target - k) + ".." +
                        format_month(target) + " outside the panel");
    Matrix path = panel.values.middleRows(first, k + 1);
    return transform_target(path, k, panel.roles);
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - std::floor(pos);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

Matrix correlation_of_rows(const Matrix& samples) {
    NormalDensity fit = fit_gaussian(samples);
    const Eigen::Index d = fit.cov.rows();
    Matrix corr(d, d);
    Vector sd = fit.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i == j) corr(i, j) = 1.0;
            else if (sd(i) == 0.0 || sd(j) == 0.0) corr(i, j) = 0.0;
            else corr(i, j) = fit.cov(i, j) / (sd(i) * sd(j));
        }
    return corr;
}

BpsPrior make_bps_prior(const RunConfig& cfg, const TimeSeriesPanel& panel, Eigen::Index J,
                        int k) {
    std::vector<double> coef_vars;
    for (const auto& name : panel.names) coef_vars.push_back(cfg.coef_var_for(name));
    BpsPrior prior = BpsPrior::standard(J, panel.cols(), cfg.intercept_var_for(k), coef_vars);
    prior.n0 = cfg.bps_n0;
    prior.D0 = cfg.bps_n0 * cfg.bps_d0_scale * Matrix::Identity(panel.cols(), panel.cols());
    prior.delta = cfg.bps_delta;
    prior.beta = cfg.bps_beta;
    return prior;
}

std::vector<AgentForecastDensity> agents_at(const ForecastArchive& archive, int origin, int k,
                                            int n_agents) {
    std::vector<AgentForecastDensity> out;
    out.reserve(static_cast<std::size_t>(n_agents));
    for (int j = 1; j <= n_agents; ++j) {
        const AgentForecastDensity* d = archive.find(origin, k, j);
        if (!d)
            throw DataError("archive: missing forecast from origin " + format_month(origin) +
                            " horizon " + std::to_string(k) + " agent " + std::to_string(j));
        out.push_back(*d);
    }
    return out;
}

void write_errors_log(const std::string& out_dir, const std::string& stage,
                      const std::vector<int>& origins, const JobErrors& errs) {
    bool any = false;
    for (const auto& m : errs.messages) any |= !m.empty();
    if (!any) return;
    std::ofstream log(fs::path(out_dir) / "errors.log", std::ios::app);
    for (std::size_t i = 0; i < errs.messages.size(); ++i)
        if (!errs.messages[i].empty())
            log << stage << ',' << format_month(origins[i]) << ',' << errs.messages[i] << '\n';
}

}  // namespace

std::vector<int> forecast_origins(const RunConfig& cfg, int k) {
    std::vector<int> out;
    for (int target = cfg.train_end + 1; target <= cfg.test_end; ++target)
        out.push_back(target - k);
    return out;
}

SynthesisData build_bps_k_dataset(const TimeSeriesPanel& panel, const ForecastArchive& archive,
                                  int k, int origin, int bps_start) {
    if (k < 1) throw ConfigError("horizon must be >= 1");
    if (origin < bps_start) throw DataError("origin precedes the synthesis window");
    const int J = archive.n_agents();
    if (J < 1) throw DataError("archive holds no forecasts");
    SynthesisData data;
    for (int s = bps_start; s <= origin; ++s) {
        data.y.push_back(realized_target(panel, k, s));
        data.agents.push_back(agents_at(archive, s - k, k, J));
    }
    data.validate();
    return data;
}

ForecastArchive fit_agents(const RunConfig& cfg, const TimeSeriesPanel& panel) {
    ForecastArchive archive(panel.names);
    Rng master(cfg.seed);
    TvpVarPrior prior;
    prior.coef_var = cfg.agent_coef_var;
    prior.n0 = cfg.agent_n0;
    prior.d0_scale = cfg.agent_d0_scale;
    prior.delta = cfg.agent_delta;
    prior.beta = cfg.agent_beta;

    for (std::size_t ji = 0; ji < cfg.agent_lags.size(); ++ji) {
        const int j = static_cast<int>(ji) + 1;
        LagSpec spec = parse_lag_spec(cfg.agent_lags[ji]);
        std::vector<TvpVarState> states = fit_tvpvar_filter(panel, spec, prior);
        Vector shift = shift_vector(cfg, j, panel.names);
        for (int k : cfg.horizons) {
            const int first = cfg.bps_start - k;
            const int last = cfg.test_end - k;
            if (states.front().month > first)
                throw DataError("agent " + std::to_string(j) +
                                ": panel too short to forecast from " + format_month(first));
            for (int m = first; m <= last; ++m) {
                const auto idx = static_cast<std::size_t>(m - states.front().month);
                if (idx >= states.size())
                    throw DataError("agent " + std::to_string(j) + ": no state at " +
                                    format_month(m));
                Rng rng = master.derive(stream_id(kStreamAgents, k, m, j));
                AgentForecastDensity d =
                    agent_forecast(states[idx], k, panel.roles, cfg.agent_draws, rng);
                if (d.is_empirical() && cfg.density_mode == DensityMode::student_t)
                    d = d.moment_fit_student_t(states[idx].n);
                archive.put(m, k, j, shifted(d, shift));
            }
        }
    }
    return archive;
}

HorizonRun sequential_run(const RunConfig& cfg, const TimeSeriesPanel& panel,
                          const ForecastArchive& archive, int k) {
    HorizonRun run;
    run.horizon = k;
    const std::vector<int> origins = forecast_origins(cfg, k);
    run.origins.resize(origins.size());
    const int J = archive.n_agents();
    const Eigen::Index q = panel.cols();
    const BpsPrior prior = make_bps_prior(cfg, panel, J, k);
    Rng master(cfg.seed);
    const int final_origin = origins.back();

    auto errs = parallel_for(origins.size(), [&](std::size_t i) {
        const int origin = origins[i];
        SynthesisData data = build_bps_k_dataset(panel, archive, k, origin, cfg.bps_start);
        McmcConfig mcmc;
        mcmc.burn_in = cfg.burn_in;
        mcmc.n_saved = cfg.n_saved;
        mcmc.thin = cfg.thin;
        mcmc.seed = master.derive_seed(stream_id(kStreamMcmc, k, origin));
        PosteriorDraws draws = run_mcmc(data, prior, mcmc);

        Rng frng = master.derive(stream_id(kStreamForecast, k, origin));
        auto next_agents = agents_at(archive, origin, k, J);
        ForecastDistribution fd = forecast_one_step(draws, next_agents, prior, frng);

        OriginResult& res = run.origins[i];
        res.origin = origin;
        res.target = origin + k;
        const int n = draws.n_saved();

        // Rao-Blackwellized mean, total-variance sd, empirical quantiles
        res.forecast_mean = Vector::Zero(q);
        for (const auto& m : fd.means) res.forecast_mean += m;
        res.forecast_mean /= static_cast<double>(n);
        Vector var = Vector::Zero(q);
        for (int s = 0; s < n; ++s) {
            const auto si = static_cast<std::size_t>(s);
            var += fd.covs[si].diagonal();
            Vector dm = fd.means[si] - res.forecast_mean;
            var += dm.cwiseProduct(dm);
        }
        res.forecast_sd = (var / static_cast<double>(n)).cwiseMax(0.0).cwiseSqrt();
        res.quantiles = Matrix(q, 3);
        for (Eigen::Index r = 0; r < q; ++r) {
            std::vector<double> col(fd.samples.col(r).data(), fd.samples.col(r).data() + n);
            res.quantiles(r, 0) = quantile(col, 0.05);
            res.quantiles(r, 1) = quantile(col, 0.50);
            res.quantiles(r, 2) = quantile(col, 0.95);
        }

        if (panel.index_of(res.target) >= 0) {
            res.logpdf = predictive_logpdf(fd, realized_target(panel, k, res.target));
            res.scored = true;
        }

        res.coef_mean = Vector::Zero((J + 1) * q);
        for (const auto& path : draws.theta) res.coef_mean += path.back();
        res.coef_mean /= static_cast<double>(n);

        Matrix xdraws(n, static_cast<Eigen::Index>(J) * q);
        for (int s = 0; s < n; ++s) {
            const Matrix& X = draws.X[static_cast<std::size_t>(s)].back();
            for (int jj = 0; jj < J; ++jj)
                xdraws.block(s, static_cast<Eigen::Index>(jj) * q, 1, q) = X.row(jj);
        }
        res.xcorr = correlation_of_rows(xdraws);

        if (origin == final_origin) {
            // retrospective KL of synthesized states against each agent prior
            for (std::size_t t = 0; t < data.y.size(); ++t) {
                const int month = cfg.bps_start + static_cast<int>(t);
                for (int jj = 0; jj < J; ++jj) {
                    Matrix samples(n, q);
                    Vector logh(n);
                    const auto& dens = data.agents[t][static_cast<std::size_t>(jj)];
                    for (int s = 0; s < n; ++s) {
                        samples.row(s) = draws.X[static_cast<std::size_t>(s)][t].row(jj);
                        logh(s) = dens.logpdf(samples.row(s).transpose());
                    }
                    res.kl_rows.emplace_back(month, jj + 1,
                                             kl_mc_gaussian_fit(samples, logh));
                }
            }
        }
    });
    write_errors_log(cfg.out_dir, "synthesize_k" + std::to_string(k), origins, errs);
    if (errs.first) std::rethrow_exception(errs.first);
    return run;
}

namespace {

void write_horizon_outputs(const RunConfig& cfg, const TimeSeriesPanel& panel,
                           const HorizonRun& run) {
    const int k = run.horizon;
    const Eigen::Index q = panel.cols();
    const auto J = static_cast<Eigen::Index>(run.origins.front().coef_mean.size()) / q - 1;
    fs::create_directories(cfg.out_dir);

    std::ofstream fc(fs::path(cfg.out_dir) / ("forecasts_k" + std::to_string(k) + ".csv"));
    fc << "origin_date,target_date,series,mean,sd,q05,q50,q95\n";
    std::ofstream co(fs::path(cfg.out_dir) / ("coefficients_k" + std::to_string(k) + ".csv"));
    co << "origin_date,series,coef_name,posterior_mean\n";
    std::ofstream sc(fs::path(cfg.out_dir) / ("scores_k" + std::to_string(k) + ".csv"));
    sc << "origin_date,target_date,logpdf\n";
    std::ofstream klf(fs::path(cfg.out_dir) / ("kl_internal_k" + std::to_string(k) + ".csv"));
    klf << "date,agent,kl\n";
    const fs::path xdir = fs::path(cfg.out_dir) / ("xcorr_k" + std::to_string(k));
    fs::create_directories(xdir);

    for (const auto& res : run.origins) {
        const std::string od = format_month(res.origin);
        const std::string td = format_month(res.target);
        for (Eigen::Index r = 0; r < q; ++r) {
            fc << od << ',' << td << ',' << panel.names[static_cast<std::size_t>(r)] << ','
               << fmt(res.forecast_mean(r)) << ',' << fmt(res.forecast_sd(r)) << ','
               << fmt(res.quantiles(r, 0)) << ',' << fmt(res.quantiles(r, 1)) << ','
               << fmt(res.quantiles(r, 2)) << '\n';
            co << od << ',' << panel.names[static_cast<std::size_t>(r)] << ",intercept,"
               << fmt(res.coef_mean(r * (J + 1))) << '\n';
            for (Eigen::Index j = 0; j < J; ++j)
                co << od << ',' << panel.names[static_cast<std::size_t>(r)] << ",agent_"
                   << (j + 1) << ',' << fmt(res.coef_mean(r * (J + 1) + 1 + j)) << '\n';
        }
        if (res.scored) sc << od << ',' << td << ',' << fmt(res.logpdf) << '\n';
        for (const auto& [month, agent, kl] : res.kl_rows)
            klf << format_month(month) << ',' << agent << ',' << fmt(kl) << '\n';

        std::ofstream xc(xdir / ("xcorr_" + od + ".csv"));
        for (Eigen::Index r = 0; r < res.xcorr.rows(); ++r) {
            for (Eigen::Index c = 0; c < res.xcorr.cols(); ++c) {
                if (c) xc << ',';
                xc << fmt(res.xcorr(r, c));
            }
            xc << '\n';
        }
    }
}

std::map<std::pair<int, int>, double> load_scores(const RunConfig& cfg, int k) {
    std::map<std::pair<int, int>, double> out;  // (origin, target) -> logpdf
    const fs::path path = fs::path(cfg.out_dir) / ("scores_k" + std::to_string(k) + ".csv");
    std::ifstream in(path);
    if (!in) throw DataError("missing synthesis scores '" + path.string() + "', run synthesize");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string o, t, v;
        std::getline(ss, o, ',');
        std::getline(ss, t, ',');
        std::getline(ss, v, ',');
        out[{parse_month(o), parse_month(t)}] = std::stod(v);
    }
    return out;
}

std::map<std::pair<int, int>, double> load_forecast_means(const RunConfig& cfg, int k,
                                                          const TimeSeriesPanel& panel) {
    std::map<std::pair<int, int>, double> out;  // (origin, series index) -> mean
    const fs::path path = fs::path(cfg.out_dir) / ("forecasts_k" + std::to_string(k) + ".csv");
    std::ifstream in(path);
    if (!in) throw DataError("missing forecasts '" + path.string() + "', run synthesize");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string o, t, series, mean;
        std::getline(ss, o, ',');
        std::getline(ss, t, ',');
        std::getline(ss, series, ',');
        std::getline(ss, mean, ',');
        Eigen::Index r = -1;
        for (std::size_t i = 0; i < panel.names.size(); ++i)
            if (panel.names[i] == series) r = static_cast<Eigen::Index>(i);
        if (r < 0) throw DataError("forecast file names unknown series '" + series + "'");
        out[{parse_month(o), static_cast<int>(r)}] = std::stod(mean);
    }
    return out;
}

}  // namespace

void cmd_fit_agents(const RunConfig& cfg) {
    TimeSeriesPanel panel = load_run_panel(cfg);
    ForecastArchive archive = fit_agents(cfg, panel);
    fs::create_directories(cfg.out_dir);
    archive.save((fs::path(cfg.out_dir) / "archive").string());
}

void cmd_synthesize(const RunConfig& cfg) {
    TimeSeriesPanel panel = load_run_panel(cfg);
    ForecastArchive archive = ForecastArchive::load((fs::path(cfg.out_dir) / "archive").string());
    for (int k : cfg.horizons) {
        HorizonRun run = sequential_run(cfg, panel, archive, k);
        write_horizon_outputs(cfg, panel, run);
    }
}

void cmd_evaluate(const RunConfig& cfg) {
    TimeSeriesPanel panel = load_run_panel(cfg);
    ForecastArchive archive = ForecastArchive::load((fs::path(cfg.out_dir) / "archive").string());
    const int J = archive.n_agents();
    const Eigen::Index q = panel.cols();

    std::ofstream msfef(fs::path(cfg.out_dir) / "msfe.csv");
    msfef << "horizon,model,series,msfe\n";
    std::ofstream lpdrf(fs::path(cfg.out_dir) / "lpdr.csv");
    lpdrf << "horizon,origin_date,model,lpdr\n";
    std::ofstream klf(fs::path(cfg.out_dir) / "kl.csv");
    klf << "horizon,date,agent,kl\n";
    std::ofstream bmaf(fs::path(cfg.out_dir) / "bma_weights.csv");
    bmaf << "horizon,origin_date,agent,weight\n";

    // one-step joint log likelihoods drive the BMA weights at every horizon
    std::vector<int> bma_targets;
    for (int s = cfg.bps_start; s <= cfg.test_end; ++s)
        if (panel.index_of(s) >= 0 && archive.find(s - 1, 1, 1)) bma_targets.push_back(s);
    if (bma_targets.empty()) throw DataError("evaluate: no one-step forecasts for BMA weights");
    Matrix onestep(static_cast<Eigen::Index>(bma_targets.size()) + 1, J);
    onestep.setZero();
    for (std::size_t i = 0; i < bma_targets.size(); ++i) {
        Vector y = realized_target(panel, 1, bma_targets[i]);
        auto agents = agents_at(archive, bma_targets[i] - 1, 1, J);
        for (int j = 0; j < J; ++j)
            onestep(static_cast<Eigen::Index>(i), j) = agents[static_cast<std::size_t>(j)].logpdf(y);
    }
    Matrix weights = bma_weights(onestep);  // row i: softmax over targets < i
    auto weights_for_origin = [&](int origin) {
        // weights in force at an origin use every scored target <= origin
        std::size_t row = 0;
        while (row < bma_targets.size() && bma_targets[row] <= origin) ++row;
        return Vector(weights.row(static_cast<Eigen::Index>(row)).transpose());
    };

    for (int k : cfg.horizons) {
        auto scores = load_scores(cfg, k);
        auto fmeans = load_forecast_means(cfg, k, panel);

        std::vector<int> origins;
        for (int o : forecast_origins(cfg, k))
            if (panel.index_of(o + k) >= 0) origins.push_back(o);
        if (origins.empty()) throw DataError("evaluate: no scored origins at horizon " +
                                             std::to_string(k));
        const auto n = static_cast<Eigen::Index>(origins.size());

        Matrix outcomes(n, q), bps_means(n, q), bma_means(n, q);
        std::vector<Matrix> agent_means(static_cast<std::size_t>(J), Matrix(n, q));
        Vector bps_lp(n), bma_lp(n);
        Matrix agent_lp(n, J);

        for (Eigen::Index i = 0; i < n; ++i) {
            const int o = origins[static_cast<std::size_t>(i)];
            Vector y = realized_target(panel, k, o + k);
            outcomes.row(i) = y.transpose();
            auto sit = scores.find({o, o + k});
            if (sit == scores.end())
                throw DataError("evaluate: missing synthesis score at origin " + format_month(o));
            bps_lp(i) = sit->second;
            for (Eigen::Index r = 0; r < q; ++r) {
                auto fit_it = fmeans.find({o, static_cast<int>(r)});
                if (fit_it == fmeans.end())
                    throw DataError("evaluate: missing forecast mean at origin " +
                                    format_month(o));
                bps_means(i, r) = fit_it->second;
            }
            auto agents = agents_at(archive, o, k, J);
            Vector w = weights_for_origin(o);
            Vector mix_terms(J);
            Vector bma_mean = Vector::Zero(q);
            for (int j = 0; j < J; ++j) {
                const auto& d = agents[static_cast<std::size_t>(j)];
                agent_means[static_cast<std::size_t>(j)].row(i) = d.mean().transpose();
                agent_lp(i, j) = d.logpdf(y);
                mix_terms(j) = std::log(std::max(w(j), 1e-300)) + agent_lp(i, j);
                bma_mean += w(j) * d.mean();
            }
            bma_lp(i) = log_sum_exp(mix_terms);
            bma_means.row(i) = bma_mean.transpose();
            for (int j = 0; j < J; ++j)
                bmaf << k << ',' << format_month(o) << ',' << (j + 1) << ',' << fmt(w(j)) << '\n';
        }

        auto emit_msfe = [&](const std::string& model, const Matrix& means) {
            Vector m = msfe_by_series(means, outcomes);
            for (Eigen::Index r = 0; r < q; ++r)
                msfef << k << ',' << model << ',' << panel.names[static_cast<std::size_t>(r)]
                      << ',' << fmt(m(r)) << '\n';
        };
        emit_msfe("bps", bps_means);
        for (int j = 0; j < J; ++j)
            emit_msfe("agent_" + std::to_string(j + 1), agent_means[static_cast<std::size_t>(j)]);
        emit_msfe("bma", bma_means);

        auto emit_lpdr = [&](const std::string& model, const Vector& lp) {
            Vector curve = lpdr(lp, bps_lp);
            for (Eigen::Index i = 0; i < n; ++i)
                lpdrf << k << ',' << format_month(origins[static_cast<std::size_t>(i)]) << ','
                      << model << ',' << fmt(curve(i)) << '\n';
        };
        emit_lpdr("bps", bps_lp);
        for (int j = 0; j < J; ++j) emit_lpdr("agent_" + std::to_string(j + 1), agent_lp.col(j));
        emit_lpdr("bma", bma_lp);

        // merge the retrospective KL rows computed during synthesis
        const fs::path klpath = fs::path(cfg.out_dir) / ("kl_internal_k" + std::to_string(k) +
                                                         ".csv");
        std::ifstream klin(klpath);
        if (!klin)
            throw DataError("missing KL rows '" + klpath.string() + "', run synthesize");
        std::string line;
        std::getline(klin, line);
        while (std::getline(klin, line))
            if (!line.empty()) klf << k << ',' << line << '\n';
    }
}

void cmd_run(const RunConfig& cfg) {
    cmd_fit_agents(cfg);
    cmd_synthesize(cfg);
    cmd_evaluate(cfg);
}

void cmd_synth_data(const RunConfig& cfg) {
    TimeSeriesPanel panel = synth_generate(cfg.synth, cfg.seed);
    if (auto dir = fs::path(cfg.synth_out).parent_path(); !dir.empty())
        fs::create_directories(dir);
    save_panel(panel, cfg.synth_out);
}

}  // namespace bps
