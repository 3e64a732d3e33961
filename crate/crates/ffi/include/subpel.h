#ifndef SUBPEL_H
#define SUBPEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpFilterKind {
  SP_FILTER_KIND_POLYNOMIAL = 0,
  SP_FILTER_KIND_WINDOWED_SINC = 1,
} SpFilterKind;

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_ARGUMENT = 2,
  SP_STATUS_CONTRACT = 3,
  SP_STATUS_IO = 4,
  SP_STATUS_FORMAT = 5,
  SP_STATUS_BUFFER_TOO_SMALL = 6,
  SP_STATUS_PANIC = 7,
} SpStatus;

typedef struct SpFilterTable SpFilterTable;

typedef struct SpFrame SpFrame;

typedef struct SpMotionField SpMotionField;

typedef struct SpWarpConfig SpWarpConfig;

/**
 * MAC tally of a warp.
 */
typedef struct SpMacCount {
  uint64_t total_macs;
  uint64_t pixels;
} SpMacCount;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sp_last_error_message(void);

const char *sp_status_name(enum SpStatus status);

const char *sp_version(void);

/**
 * Writes the `taps` coefficients of the filter for fraction `s` into `out`.
 */
enum SpStatus sp_filter_derive(enum SpFilterKind kind,
                               size_t taps,
                               bool normalize,
                               double s,
                               double *out,
                               size_t out_len);

enum SpStatus sp_filter_table_new(enum SpFilterKind kind,
                                  size_t taps,
                                  bool normalize,
                                  uint32_t delta,
                                  struct SpFilterTable **out);

size_t sp_filter_table_coefficient_count(const struct SpFilterTable *table);

/**
 * Copies the taps of entry `q` (fraction `q / delta`).
 */
enum SpStatus sp_filter_table_get(const struct SpFilterTable *table,
                                  uint32_t q,
                                  double *out,
                                  size_t out_len);

void sp_filter_table_free(struct SpFilterTable *table);

/**
 * Builds a frame from `channels` consecutive planes of `width * height`
 * samples each.
 */
enum SpStatus sp_frame_from_planar(size_t width,
                                   size_t height,
                                   size_t channels,
                                   const double *data,
                                   size_t len,
                                   struct SpFrame **out);

/**
 * Reads frame `index` of a raw YUV file as a 4:4:4 frame.
 */
enum SpStatus sp_frame_read_yuv(const char *path,
                                size_t width,
                                size_t height,
                                uint8_t bit_depth,
                                bool chroma_420,
                                size_t index,
                                struct SpFrame **out);

/**
 * Writes a three-channel frame as one 4:4:4 raw frame.
 */
enum SpStatus sp_frame_write_yuv(const struct SpFrame *frame, const char *path, uint8_t bit_depth);

size_t sp_frame_width(const struct SpFrame *frame);

size_t sp_frame_height(const struct SpFrame *frame);

size_t sp_frame_channels(const struct SpFrame *frame);

enum SpStatus sp_frame_copy_plane(const struct SpFrame *frame,
                                  size_t channel,
                                  double *out,
                                  size_t out_len);

void sp_frame_free(struct SpFrame *frame);

/**
 * Builds a field from `count` `(dc, dr)` pairs stored as `2 * count`
 * doubles in block row-major order.
 */
enum SpStatus sp_motion_field_new(size_t width,
                                  size_t height,
                                  size_t block_size,
                                  const double *vectors,
                                  size_t count,
                                  struct SpMotionField **out);

enum SpStatus sp_motion_field_read_mvf(const char *path, struct SpMotionField **out);

enum SpStatus sp_motion_field_write_mvf(const struct SpMotionField *field, const char *path);

size_t sp_motion_field_block_size(const struct SpMotionField *field);

void sp_motion_field_free(struct SpMotionField *field);

/**
 * Warp settings. `delta == 0` selects unquantized motion; otherwise a
 * filter table with `delta` entries is precomputed.
 */
enum SpStatus sp_warp_config_new(enum SpFilterKind kind,
                                 size_t taps,
                                 bool normalize,
                                 uint32_t delta,
                                 struct SpWarpConfig **out);

void sp_warp_config_free(struct SpWarpConfig *config);

/**
 * Block-based warp; `out_macs` may be null.
 */
enum SpStatus sp_warp_block(const struct SpFrame *frame,
                            const struct SpMotionField *field,
                            const struct SpWarpConfig *config,
                            struct SpFrame **out_frame,
                            struct SpMacCount *out_macs);

/**
 * Pixel-wise warp; the field must have block size 1.
 */
enum SpStatus sp_warp_dense(const struct SpFrame *frame,
                            const struct SpMotionField *field,
                            const struct SpWarpConfig *config,
                            struct SpFrame **out_frame,
                            struct SpMacCount *out_macs);

/**
 * `alpha * warp(ref0) + (1 - alpha) * warp(ref1)`.
 */
enum SpStatus sp_predict_bidir(const struct SpFrame *ref0,
                               const struct SpMotionField *field0,
                               const struct SpFrame *ref1,
                               const struct SpMotionField *field1,
                               double alpha,
                               const struct SpWarpConfig *config,
                               struct SpFrame **out_frame,
                               struct SpMacCount *out_macs);

/**
 * Channel-averaged PSNR in dB on the [0, 1] scale; `+inf` when equal.
 */
enum SpStatus sp_psnr(const struct SpFrame *a, const struct SpFrame *b, double *out_db);

/**
 * Block warp cost per pixel as the reduced fraction `num / den`.
 */
enum SpStatus sp_complexity_c2d_block(size_t taps,
                                      size_t block_size,
                                      uint64_t *out_num,
                                      uint64_t *out_den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBPEL_H */
