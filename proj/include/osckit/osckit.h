#ifndef OSCKIT_H
#define OSCKIT_H

/* C interface to osckit. All objects are opaque handles owned by the caller
 * and released with the matching *_free function. Functions return an
 * osk_status; on failure osk_last_error() describes the problem for the
 * calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(OSK_BUILDING_LIBRARY)
#define OSK_API __attribute__((visibility("default")))
#else
#define OSK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum osk_status {
  OSK_OK = 0,
  OSK_ERR_INVALID = 1,    /* bad argument, generator spec or unknown name */
  OSK_ERR_FORMAT = 2,     /* malformed GFN1 data */
  OSK_ERR_BUDGET = 3,     /* enumeration larger than the budget cap */
  OSK_ERR_IO = 4,
  OSK_ERR_DEGENERATE = 5, /* a ratio denominator vanished */
  OSK_ERR_INTERNAL = 6
} osk_status;

typedef struct osk_grid osk_grid;
typedef struct osk_report osk_report;

typedef enum osk_mode { OSK_MODE_EXACT = 0, OSK_MODE_DYADIC = 1 } osk_mode;

typedef struct osk_options {
  osk_mode mode;
  uint64_t budget;  /* 0 selects the default cap */
  unsigned threads; /* 0 is treated as 1 */
} osk_options;

OSK_API const char* osk_version(void);
OSK_API const char* osk_last_error(void);
/* Byte offset of the last OSK_ERR_FORMAT on this thread, or -1. */
OSK_API int64_t osk_last_error_offset(void);

OSK_API osk_options osk_default_options(void);
OSK_API uint64_t osk_default_budget(void);

OSK_API osk_status osk_grid_new(const size_t* dims, size_t rank, const double* values,
                                osk_grid** out);
/* spec_json is a generator spec such as {"kind":"separable","factors":["cos","cos"]}. */
OSK_API osk_status osk_grid_generate(const size_t* dims, size_t rank, const char* spec_json,
                                     osk_grid** out);
OSK_API osk_status osk_grid_load(const char* path, osk_grid** out);
OSK_API osk_status osk_grid_decode(const uint8_t* bytes, size_t size, osk_grid** out);
OSK_API osk_status osk_grid_save(const osk_grid* grid, const char* path);
/* Writes the GFN1 encoding into buf when capacity allows; *needed always
 * receives the encoded size. */
OSK_API osk_status osk_grid_encode(const osk_grid* grid, uint8_t* buf, size_t capacity,
                                   size_t* needed);
OSK_API size_t osk_grid_rank(const osk_grid* grid);
OSK_API size_t osk_grid_dim(const osk_grid* grid, size_t axis);
OSK_API size_t osk_grid_size(const osk_grid* grid);
OSK_API const double* osk_grid_values(const osk_grid* grid);
OSK_API void osk_grid_free(osk_grid* grid);

/* norm is one of bmo, star, lmo, bmo_m, lmo_m, lmo_inv, slice, mean_log_ratio. */
OSK_API osk_status osk_norm(const osk_grid* grid, const char* norm, const osk_options* opts,
                            osk_report** out);
/* params_json may be NULL for defaults. With opts == NULL experiments use
 * exact mode and the larger experiment budget. */
OSK_API osk_status osk_experiment(const char* name, const char* params_json,
                                  const osk_options* opts, osk_report** out);

OSK_API double osk_report_value(const osk_report* report);
/* 1 if the report's verdict is pass. Norm reports always pass. */
OSK_API int osk_report_passed(const osk_report* report);
/* Strings stay valid until the report is freed. */
OSK_API const char* osk_report_json(const osk_report* report);
OSK_API const char* osk_report_csv(const osk_report* report);
OSK_API void osk_report_free(osk_report* report);

/* Comma-separated experiment names. */
OSK_API const char* osk_experiment_names(void);

#ifdef __cplusplus
}
#endif

#endif
