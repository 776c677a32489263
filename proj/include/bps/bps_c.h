#ifndef BPS_C_H
#define BPS_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque run context holding a parsed configuration. All entry points return
 * a status code: 0 success, 2 configuration error, 3 data error, 4 numerical
 * failure. The last error message is kept per context. */
typedef struct bps_ctx bps_ctx;

bps_ctx* bps_ctx_new(void);
void bps_ctx_free(bps_ctx* ctx);

int bps_load_config(bps_ctx* ctx, const char* path);

/* name: "seed" (integer), "horizon" (single integer, replaces the list),
 * "out_dir" (path). Any config key ("bps.delta", ...) is also accepted. */
int bps_set_option(bps_ctx* ctx, const char* name, const char* value);

int bps_fit_agents(bps_ctx* ctx);
int bps_synthesize(bps_ctx* ctx);
int bps_evaluate(bps_ctx* ctx);
int bps_run(bps_ctx* ctx);
int bps_synth_data(bps_ctx* ctx);

/* Message for the most recent failing call; empty string if none. The pointer
 * stays valid until the next call on the same context. */
const char* bps_last_error(const bps_ctx* ctx);

#ifdef __cplusplus
}
#endif

#endif /* BPS_C_H */
