#ifndef PNLAB_H
#define PNLAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an isomorphism test.
 */
typedef enum PnlabIso {
  PNLAB_ISO_NO = 0,
  PNLAB_ISO_YES = 1,
  PNLAB_ISO_UNKNOWN = 2,
} PnlabIso;

/**
 * Result code of every exported function.
 */
typedef enum PnlabStatus {
  PNLAB_STATUS_OK = 0,
  PNLAB_STATUS_NULL_POINTER = 1,
  PNLAB_STATUS_INVALID_UTF8 = 2,
  PNLAB_STATUS_SYNTAX = 3,
  PNLAB_STATUS_NOT_PRIME = 4,
  PNLAB_STATUS_INVALID_PRESENTATION = 5,
  PNLAB_STATUS_INCONSISTENT = 6,
  PNLAB_STATUS_COLLECTION_BUDGET = 7,
  PNLAB_STATUS_NOT_NORMAL = 8,
  PNLAB_STATUS_POWER_SUBGROUP = 9,
  PNLAB_STATUS_NOT_POWERFULLY_NILPOTENT = 10,
  PNLAB_STATUS_INFEASIBLE = 11,
  PNLAB_STATUS_DOMAIN = 12,
  PNLAB_STATUS_INTERNAL = 13,
  PNLAB_STATUS_BUFFER_TOO_SMALL = 14,
  PNLAB_STATUS_UNKNOWN_FIXTURE = 15,
  PNLAB_STATUS_PANIC = 16,
} PnlabStatus;

/**
 * Opaque group handle.
 */
typedef struct PnlabGroup PnlabGroup;

/**
 * Invariants of a group. Fields that only exist for powerfully nilpotent
 * groups (`c`, `d`, `s`, `t`) are `-1` otherwise.
 */
typedef struct PnlabReport {
  uint32_t p;
  uint32_t n;
  uint32_t r;
  uint32_t e;
  int32_t c;
  int32_t d;
  int32_t s;
  int32_t t;
  bool powerful;
  bool strongly_powerful;
  bool powerfully_nilpotent;
  bool maximal_tail;
} PnlabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread (empty after success).
 *
 * # Safety
 * `buf` must point to `cap` writable bytes or be null; `needed` may be null.
 */
enum PnlabStatus pnlab_last_error(char *buf, size_t cap, size_t *needed);

/**
 * Parses presentation-file text and builds the group.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PnlabStatus pnlab_group_parse(const char *text_, struct PnlabGroup **out_);

/**
 * Builds a named catalog fixture such as `"sec4ex1_p3_r2"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PnlabStatus pnlab_group_fixture(const char *name, struct PnlabGroup **out_);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void pnlab_group_free(struct PnlabGroup *g);

/**
 * `p`, `log_p |G|` and the number of presentation generators.
 *
 * # Safety
 * `g` must be a live handle; each out pointer may be null.
 */
enum PnlabStatus pnlab_group_info(const struct PnlabGroup *g,
                                  uint32_t *p,
                                  uint32_t *n,
                                  size_t *rank);

/**
 * Normal-form product: `a`, `b` and `out` hold `rank` exponents each.
 *
 * # Safety
 * `g` must be a live handle; `a` and `b` readable and `out` writable for
 * `rank` entries.
 */
enum PnlabStatus pnlab_group_multiply(const struct PnlabGroup *g,
                                      const uint64_t *a,
                                      const uint64_t *b,
                                      size_t rank,
                                      uint64_t *out_);

/**
 * Invariants, predicates, class, coclass, p-th power length and tail.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PnlabStatus pnlab_analyze(const struct PnlabGroup *g, struct PnlabReport *out_);

/**
 * Runs the overlap tests on presentation-file text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `consistent` must be writable.
 */
enum PnlabStatus pnlab_check_consistency(const char *text_, bool *consistent);

/**
 * Isomorphism test with a backtracking budget (0 selects the default).
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum PnlabStatus pnlab_are_isomorphic(const struct PnlabGroup *a,
                                      const struct PnlabGroup *b,
                                      uint64_t budget,
                                      enum PnlabIso *out_);

/**
 * The direct descendant `G/Z(G)^p`; `*out` is null for abelian `G`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PnlabStatus pnlab_direct_descendant(const struct PnlabGroup *g, struct PnlabGroup **out_);

/**
 * Presentation-file text of the group.
 *
 * # Safety
 * `g` must be a live handle; `buf` must point to `cap` writable bytes or
 * be null; `needed` may be null.
 */
enum PnlabStatus pnlab_group_to_text(const struct PnlabGroup *g,
                                     char *buf,
                                     size_t cap,
                                     size_t *needed);

/**
 * Exponent `h(x)` with `|P(n, x)| = p^{h(x)}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PnlabStatus pnlab_h_value(uint64_t n, uint64_t x, int64_t *out_);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PNLAB_H */
