/* C interface to the distributionally robust game solver.
 *
 * All functions return a status code (DRG_OK on success). On failure,
 * drg_last_error() returns a thread-local message describing the problem.
 * Strings returned through char** are owned by the caller and must be
 * released with drg_string_free(); games with drg_game_free().
 *
 * Strategy profiles are passed as a flat array: player 1's probabilities,
 * then player 2's, and so on (length = sum of action counts).
 */
#ifndef DRG_H
#define DRG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DRG_API __declspec(dllexport)
#else
#define DRG_API __attribute__((visibility("default")))
#endif

typedef struct drg_game drg_game; /* opaque: ambiguity set + risk levels */

enum {
  DRG_OK = 0,
  DRG_ERR_INVALID_ARGUMENT = 1, /* bad pointer, dimension, or value */
  DRG_ERR_PARSE = 2,            /* malformed game or experiment document */
  DRG_ERR_VALIDATION = 3,       /* ambiguity set failed validation */
  DRG_ERR_RUNTIME = 4           /* solver failure */
};

/* Construction / destruction. */
DRG_API int drg_game_from_string(const char* json_text, drg_game** out);
DRG_API int drg_game_from_file(const char* path, drg_game** out);
DRG_API int drg_game_inspection(double wage, double g_lo, double g_hi, double v_lo, double v_hi,
                                double h_lo, double h_hi, double s, double eps1, double eps2,
                                drg_game** out);
DRG_API void drg_game_free(drg_game* game);

/* Canonical JSON serialization of the game document. */
DRG_API int drg_game_emit(const drg_game* game, char** out_json);

/* Ambiguity-set validation. *out_pass is 1 when every check passes.
 * out_report receives a JSON list of per-check results. */
DRG_API int drg_validate(const drg_game* game, char** out_report, int* out_pass);

/* Best response of `player` (0-based) to the opponents in `profile`.
 * out_json: {"strategy": [...], "value": rho}. */
DRG_API int drg_best_response(const drg_game* game, int player, const double* profile,
                              size_t profile_len, char** out_json);

/* Equilibrium check at tolerance tol. out_json carries per-player gaps,
 * values and best-response witnesses. */
DRG_API int drg_verify(const drg_game* game, const double* profile, size_t profile_len,
                       double tol, char** out_json, int* out_is_equilibrium);

/* Full certificate (primal and dual variable bundle plus the residual of
 * every row of the equilibrium system). *out_valid is 1 when all residuals
 * are within 1e-6. */
DRG_API int drg_certify(const drg_game* game, const double* profile, size_t profile_len,
                        char** out_json, int* out_valid);

/* Multistart equilibrium search. out_json lists profiles, gaps and
 * certificate residual summaries. Deterministic for a fixed seed. */
DRG_API int drg_solve(const drg_game* game, int restarts, unsigned long long seed, double gap_tol,
                      char** out_json);

/* Inspection-game risk sweep. spec_json schema is documented in
 * docs/game_format.md; out_csv/out_json receive the two report formats
 * (either pointer may be NULL to skip that format). */
DRG_API int drg_experiment(const char* spec_json, char** out_csv, char** out_json);

DRG_API const char* drg_last_error(void);
DRG_API void drg_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DRG_H */
