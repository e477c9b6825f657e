#ifndef RDWLAB_H
#define RDWLAB_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum {
  RDW_STATUS_OK = 0,
  RDW_STATUS_NULL_POINTER = 1,
  RDW_STATUS_INVALID_ARGUMENT = 2,
  RDW_STATUS_DEGENERATE_GEOMETRY = 3,
  RDW_STATUS_FIT_DEGENERATE = 4,
  RDW_STATUS_THRESHOLD_UNDEFINED = 5,
  RDW_STATUS_NOT_CONVERGED = 6,
  RDW_STATUS_CI_UNRELIABLE = 7,
  RDW_STATUS_ZERO_MARGINAL = 8,
  // The requested value does not exist yet (for example t1 before full attention).
  RDW_STATUS_NOT_AVAILABLE = 9,
  RDW_STATUS_PANIC = 99,
} RdwStatus;

typedef enum {
  RDW_GAIN_MODE_DYNAMIC = 0,
  RDW_GAIN_MODE_SCHEDULED = 1,
  RDW_GAIN_MODE_SWITCH = 2,
} RdwGainMode;

typedef enum {
  RDW_PHASE_IDLE = 0,
  RDW_PHASE_ASCENT = 1,
  RDW_PHASE_HOLD = 2,
  RDW_PHASE_DESCENT = 3,
} RdwPhase;

typedef enum {
  RDW_GROUP_WITH_DISTRACTOR = 0,
  RDW_GROUP_WITHOUT_DISTRACTOR = 1,
  RDW_GROUP_SWITCH = 2,
} RdwGroup;

typedef enum {
  RDW_GAZE_KIND_INSTANT_FOCUS = 0,
  RDW_GAZE_KIND_LINEAR_TURN = 1,
  RDW_GAZE_KIND_GLANCE = 2,
  RDW_GAZE_KIND_NEVER_LOOK = 3,
} RdwGazeKind;

// Attention accumulator plus phased gain controller.
typedef struct RdwController RdwController;

// Fitted psychometric function.
typedef struct RdwFit RdwFit;

// A simulated trial with its frames.
typedef struct RdwTrace RdwTrace;

typedef struct {
  double a;
  double b;
  double c;
  double d;
  double a_max;
} RdwAttentionParams;

typedef struct {
  double attention;
  double time_in_hold;
  double hold_duration;
} RdwAttentionState;

// Fit settings. A NaN `fix_gamma`/`fix_lambda` means the default of 0; `n_boot = 0`
// skips the bootstrap.
typedef struct {
  double fix_gamma;
  double fix_lambda;
  uint32_t n_boot;
  double ci_level;
  uint64_t seed;
} RdwFitOptions;

typedef struct {
  double alpha;
  double beta;
  double gamma;
  double lambda;
} RdwPsyParams;

typedef struct {
  double ldt;
  double pse;
  double udt;
} RdwThresholds;

// Plain-data view of a fit. `has_ci` tells whether `ci_low`/`ci_high` are set.
typedef struct {
  RdwPsyParams params;
  double nll;
  double aic;
  double sse;
  double pse;
  double ldt;
  double udt;
  double ci_low;
  double ci_high;
  bool has_ci;
  bool converged;
} RdwFitSummary;

// Gaze preset. `duration` is used by `LinearTurn`; `on`, `off` and `cycles` by `Glance`.
typedef struct {
  RdwGazeKind kind;
  double duration;
  double on;
  double off;
  uint32_t cycles;
} RdwGaze;

// Per-trial outcome. `t1` is NaN when full attention was never reached.
typedef struct {
  double t1;
  bool max_gain_reached;
  double physical_distance;
  uintptr_t frame_count;
  uintptr_t out_of_bounds_frames;
} RdwTrialSummary;

typedef struct {
  double t;
  double phys_x;
  double phys_z;
  double virtual_dist;
  double deg;
  double attention;
  double gain;
} RdwFrame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if it succeeded.
//
// The pointer stays valid until the next `rdw_` call on the same thread.
const char *rdw_last_error_message(void);

// Frees a string returned by this library (for example from `rdw_fit_to_json`).
void rdw_string_free(char *s);

// Default attention parameters (a=5000, b=2000, c=3.1, d=15, a_max=100).
RdwAttentionParams rdw_attention_params_default(void);

// Advances the attention accumulator one frame.
RdwStatus rdw_attention_step(const RdwAttentionState *state,
                             double deg,
                             double dt,
                             const RdwAttentionParams *params,
                             RdwAttentionState *out);

// Angle in degrees between the view direction and the eye-to-centroid vector.
// `view_direction` and `centroid` point to three doubles each.
RdwStatus rdw_gaze_angle(double pos_x,
                         double pos_z,
                         const double *view_direction,
                         double eye_height,
                         const double *centroid,
                         double *out_deg);

RdwStatus rdw_scheduled_gain(double t_since_trigger,
                             RdwGainMode mode,
                             double base,
                             double target,
                             double *out_gain);

RdwStatus rdw_apply_translation_gain(double physical_delta, double gain, double *out_virtual);

RdwStatus rdw_controller_new(const RdwAttentionParams *params,
                             double base_gain,
                             double target_gain,
                             RdwController **out);

void rdw_controller_free(RdwController *ctrl);

// Starts the gain episode. `out_fired` (optional) reports whether it started.
RdwStatus rdw_controller_trigger(RdwController *ctrl, bool *out_fired);

// Feeds one frame of gaze angle and returns the frame's gain.
RdwStatus rdw_controller_step(RdwController *ctrl, double deg, double dt, double *out_gain);

RdwStatus rdw_controller_phase(const RdwController *ctrl, RdwPhase *out_phase);

RdwStatus rdw_controller_attention(const RdwController *ctrl, double *out_attention);

// Ascent duration once full attention was reached; `RDW_STATUS_NOT_AVAILABLE` before.
RdwStatus rdw_controller_t1(const RdwController *ctrl, double *out_t1);

RdwFitOptions rdw_fit_options_default(void);

RdwStatus rdw_psychometric_value(double x, const RdwPsyParams *params, double *out_p);

RdwStatus rdw_thresholds(const RdwPsyParams *params, RdwThresholds *out);

// Chi-square statistic (df = 1, no continuity correction) of `[[a, b], [c, d]]`.
// `out_p_value` may be null.
RdwStatus rdw_chi_square_2x2(uint64_t a,
                             uint64_t b,
                             uint64_t c,
                             uint64_t d,
                             double *out_statistic,
                             double *out_p_value);

// Fits `len` levels given as parallel arrays of gains, presentations and "Greater" counts.
// `options` may be null for the defaults.
RdwStatus rdw_fit(const double *gains,
                  const uint64_t *n,
                  const uint64_t *k,
                  uintptr_t len,
                  const RdwFitOptions *options,
                  RdwFit **out);

void rdw_fit_free(RdwFit *fit);

RdwStatus rdw_fit_summary(const RdwFit *fit, RdwFitSummary *out);

// The fit report as JSON, in the same format the CLI writes. Free with `rdw_string_free`.
RdwStatus rdw_fit_to_json(const RdwFit *fit, char **out_json);

// Simulates one trial on the default 8 m path. `params` may be null for the defaults.
RdwStatus rdw_trial_run(RdwGroup group,
                        double target_gain,
                        const RdwGaze *gaze,
                        const RdwAttentionParams *params,
                        double dt,
                        RdwTrace **out);

void rdw_trace_free(RdwTrace *trace);

RdwStatus rdw_trace_summary(const RdwTrace *trace, RdwTrialSummary *out);

RdwStatus rdw_trace_frame(const RdwTrace *trace, uintptr_t index, RdwFrame *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RDWLAB_H */
