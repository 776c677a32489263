#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "bps/bps_c.h"

namespace {

struct Options {
    std::string config;
    std::string out_dir;
    long long seed = -1;
    int horizon = 0;
};

void add_common(CLI::App* cmd, Options& opt, bool config_required) {
    auto* c = cmd->add_option("--config", opt.config, "run configuration file (key=value)");
    if (config_required) c->required();
    cmd->add_option("--seed", opt.seed, "override the master seed");
    cmd->add_option("--horizon", opt.horizon, "restrict the run to one horizon");
    cmd->add_option("--out-dir", opt.out_dir, "override the output directory");
}

int apply_and_run(const Options& opt, int (*verb)(bps_ctx*)) {
    bps_ctx* ctx = bps_ctx_new();
    if (!ctx) {
        std::fprintf(stderr, "error: out of memory\n");
        return 4;
    }
    int rc = 0;
    if (!opt.config.empty()) rc = bps_load_config(ctx, opt.config.c_str());
    if (rc == 0 && opt.seed >= 0)
        rc = bps_set_option(ctx, "seed", std::to_string(opt.seed).c_str());
    if (rc == 0 && opt.horizon > 0)
        rc = bps_set_option(ctx, "horizon", std::to_string(opt.horizon).c_str());
    if (rc == 0 && !opt.out_dir.empty()) rc = bps_set_option(ctx, "out_dir", opt.out_dir.c_str());
    if (rc == 0) rc = verb(ctx);
    if (rc != 0) std::fprintf(stderr, "error: %s\n", bps_last_error(ctx));
    bps_ctx_free(ctx);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic multivariate Bayesian predictive synthesis"};
    app.require_subcommand(1);

    Options fit_opt, synth_opt, eval_opt, run_opt, data_opt;
    auto* fit = app.add_subcommand("fit-agents", "fit agent models and archive their forecasts");
    add_common(fit, fit_opt, true);
    auto* synth = app.add_subcommand("synthesize", "run per-origin synthesis MCMC");
    add_common(synth, synth_opt, true);
    auto* eval = app.add_subcommand("evaluate", "score forecasts and emit report files");
    add_common(eval, eval_opt, true);
    auto* run = app.add_subcommand("run", "fit-agents, synthesize, and evaluate in one go");
    add_common(run, run_opt, true);
    auto* data = app.add_subcommand("synth-data", "generate a synthetic panel");
    add_common(data, data_opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (fit->parsed()) return apply_and_run(fit_opt, bps_fit_agents);
    if (synth->parsed()) return apply_and_run(synth_opt, bps_synthesize);
    if (eval->parsed()) return apply_and_run(eval_opt, bps_evaluate);
    if (run->parsed()) return apply_and_run(run_opt, bps_run);
    if (data->parsed()) return apply_and_run(data_opt, bps_synth_data);
    return 2;
}
