#ifndef IDEALSTAT_H
#define IDEALSTAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Verdict and outcome codes, matching the command-line exit codes.
 */
#define IDEALSTAT_POSITIVE 0

#define IDEALSTAT_NEGATIVE 1

#define IDEALSTAT_UNDECIDED 2

#define IDEALSTAT_MODE_IDEAL 0

#define IDEALSTAT_MODE_ISTAT 1

#define IDEALSTAT_MODE_IMU 2

typedef enum IdealstatStatus {
  IDEALSTAT_STATUS_OK = 0,
  IDEALSTAT_STATUS_NULL_POINTER = 1,
  IDEALSTAT_STATUS_INVALID_UTF8 = 2,
  IDEALSTAT_STATUS_PARSE = 3,
  IDEALSTAT_STATUS_SCHEMA = 4,
  IDEALSTAT_STATUS_VALIDATION = 5,
  IDEALSTAT_STATUS_PRECONDITION = 6,
  IDEALSTAT_STATUS_NOT_CERTIFIABLE = 7,
  IDEALSTAT_STATUS_INFEASIBLE = 8,
  IDEALSTAT_STATUS_GENERATOR_EXHAUSTED = 9,
  IDEALSTAT_STATUS_IO = 10,
  IDEALSTAT_STATUS_PANIC = 11,
} IdealstatStatus;

typedef struct IdealstatConfig IdealstatConfig;

typedef struct IdealstatIdeal IdealstatIdeal;

typedef struct IdealstatSequence IdealstatSequence;

typedef struct IdealstatSet IdealstatSet;

typedef struct IdealstatSubmeasure IdealstatSubmeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread (empty after a success).
 Valid until the next call on this thread.
 */
const char *idealstat_last_error(void);

/*
 # Safety
 `s` must come from this library or be null.
 */
void idealstat_string_free(char *s);

/*
 Default configuration with the given horizon (at least 1000).

 # Safety
 `out` must be a valid pointer.
 */
enum IdealstatStatus idealstat_config_new(uint64_t horizon, struct IdealstatConfig **out);

/*
 Configuration from TOML text.

 # Safety
 `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_config_from_toml(const char *toml, struct IdealstatConfig **out);

/*
 # Safety
 `p` must come from this library or be null.
 */
void idealstat_config_free(struct IdealstatConfig *p);

/*
 Parses a set from its JSON form.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_set_from_json(const char *json, struct IdealstatSet **out);

/*
 # Safety
 `p` must come from this library or be null.
 */
void idealstat_set_free(struct IdealstatSet *p);

/*
 `|A ∩ [1, n]|`.

 # Safety
 `set` must be a live handle and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_set_count(const struct IdealstatSet *set, uint64_t n, uint64_t *out);

/*
 Writes 1 when `n ∈ A`, 0 otherwise.

 # Safety
 `set` must be a live handle and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_set_contains(const struct IdealstatSet *set,
                                            uint64_t n,
                                            int32_t *out);

/*
 Upper asymptotic density report as JSON.

 # Safety
 Handles must be live and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_set_density(const struct IdealstatSet *set,
                                           const struct IdealstatConfig *cfg,
                                           char **out);

/*
 Parses an ideal: `fin`, `zeta`, `summable`, `empty-times-fin`,
 `zmu:<json>`, `j-of:<ideal>:<json>`, `generated-by:<json>`.

 # Safety
 `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_ideal_parse(const char *input, struct IdealstatIdeal **out);

/*
 # Safety
 `p` must come from this library or be null.
 */
void idealstat_ideal_free(struct IdealstatIdeal *p);

/*
 Membership verdict: `IDEALSTAT_POSITIVE` (in), `IDEALSTAT_NEGATIVE` (out)
 or `IDEALSTAT_UNDECIDED`. The full verdict JSON goes to `report` when it
 is not null.

 # Safety
 Handles must be live, `verdict` valid, `report` valid or null.
 */
enum IdealstatStatus idealstat_ideal_decide(const struct IdealstatIdeal *ideal,
                                            const struct IdealstatSet *set,
                                            const struct IdealstatConfig *cfg,
                                            int32_t *verdict,
                                            char **report);

/*
 Parses a sequence from JSON or shorthand (`indicator:factorial`,
 `constant:1/2`, `inv-log`, `inv-power:c:p`, `tent:log`, `tent:<d>`).

 # Safety
 `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_sequence_parse(const char *input, struct IdealstatSequence **out);

/*
 # Safety
 `p` must come from this library or be null.
 */
void idealstat_sequence_free(struct IdealstatSequence *p);

/*
 Parses a submeasure sequence: `uniform`, `upper-density`, `zero`,
 `lacunary:<scheme>` or JSON.

 # Safety
 `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdealstatStatus idealstat_submeasure_parse(const char *input,
                                                struct IdealstatSubmeasure **out);

/*
 # Safety
 `p` must come from this library or be null.
 */
void idealstat_submeasure_free(struct IdealstatSubmeasure *p);

/*
 Convergence of `seq` to `limit` (a rational such as `"1/2"`).

 `mode` is one of `IDEALSTAT_MODE_*`; `mu` is required for
 `IDEALSTAT_MODE_IMU` and ignored otherwise. `outcome` receives
 `IDEALSTAT_POSITIVE` (converges), `IDEALSTAT_NEGATIVE` (diverges) or
 `IDEALSTAT_UNDECIDED`; the report JSON goes to `report` when not null.

 # Safety
 Handles must be live (`mu` may be null outside IMU mode), `limit` a
 NUL-terminated string, `outcome` valid and `report` valid or null.
 */
enum IdealstatStatus idealstat_converge(int32_t mode,
                                        const struct IdealstatSequence *seq,
                                        const struct IdealstatIdeal *ideal,
                                        const struct IdealstatSubmeasure *mu,
                                        const char *limit,
                                        const struct IdealstatConfig *cfg,
                                        int32_t *outcome,
                                        char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDEALSTAT_H */
