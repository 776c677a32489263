#include "bps/bps_c.h"

#include <string>

#include "bps/config.hpp"
#include "bps/pipeline.hpp"
#include "bps/types.hpp"

struct bps_ctx {
    bps::RunConfig cfg;
    bool loaded = false;
    std::string last_error;
};

namespace {

template <typename Fn>
int guarded(bps_ctx* ctx, Fn&& fn) {
    if (!ctx) return 2;
    ctx->last_error.clear();
    try {
        fn();
        return 0;
    } catch (const bps::ConfigError& e) {
        ctx->last_error = e.what();
        return 2;
    } catch (const bps::DataError& e) {
        ctx->last_error = e.what();
        return 3;
    } catch (const bps::NumericError& e) {
        ctx->last_error = e.what();
        return 4;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return 4;
    }
}

int require_loaded(bps_ctx* ctx) {
    if (!ctx) return 2;
    if (!ctx->loaded) {
        ctx->last_error = "no configuration loaded";
        return 2;
    }
    return 0;
}

}  // namespace

extern "C" {

bps_ctx* bps_ctx_new(void) { return new (std::nothrow) bps_ctx; }

void bps_ctx_free(bps_ctx* ctx) { delete ctx; }

int bps_load_config(bps_ctx* ctx, const char* path) {
    return guarded(ctx, [&] {
        if (!path) throw bps::ConfigError("null config path");
        ctx->cfg = bps::parse_config_file(path);
        ctx->loaded = true;
    });
}

int bps_set_option(bps_ctx* ctx, const char* name, const char* value) {
    return guarded(ctx, [&] {
        if (!name || !value) throw bps::ConfigError("null option");
        const std::string key(name);
        if (key == "out_dir") {
            ctx->cfg.out_dir = value;
        } else if (key == "horizon") {
            bps::apply_config_line(ctx->cfg, "horizons", value);
        } else {
            bps::apply_config_line(ctx->cfg, key, value);
        }
        ctx->cfg.validate();
        ctx->loaded = true;
    });
}

int bps_fit_agents(bps_ctx* ctx) {
    if (int rc = require_loaded(ctx)) return rc;
    return guarded(ctx, [&] { bps::cmd_fit_agents(ctx->cfg); });
}

int bps_synthesize(bps_ctx* ctx) {
    if (int rc = require_loaded(ctx)) return rc;
    return guarded(ctx, [&] { bps::cmd_synthesize(ctx->cfg); });
}

int bps_evaluate(bps_ctx* ctx) {
    if (int rc = require_loaded(ctx)) return rc;
    return guarded(ctx, [&] { bps::cmd_evaluate(ctx->cfg); });
}

int bps_run(bps_ctx* ctx) {
    if (int rc = require_loaded(ctx)) return rc;
    return guarded(ctx, [&] { bps::cmd_run(ctx->cfg); });
}

int bps_synth_data(bps_ctx* ctx) {
    if (int rc = require_loaded(ctx)) return rc;
    return guarded(ctx, [&] { bps::cmd_synth_data(ctx->cfg); });
}

const char* bps_last_error(const bps_ctx* ctx) {
    return ctx ? ctx->last_error.c_str() : "null context";
}

}  // extern "C"
