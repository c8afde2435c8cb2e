#ifndef DECAYCLOCK_H
#define DECAYCLOCK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  // Argument outside the model's domain.
  DC_STATUS_DOMAIN = 2,
  // Quadrature or discretisation did not reach its tolerance.
  DC_STATUS_CONVERGENCE = 3,
  DC_STATUS_UNSUPPORTED = 4,
  // The caller's buffer is too short; the required length was written.
  DC_STATUS_BUFFER_TOO_SMALL = 5,
  DC_STATUS_PANIC = 6,
} DcStatus;

// Two-level atom with a flat continuum.
typedef struct DcAtom DcAtom;

// Finite photon band with a flat coupling.
typedef struct DcBand DcBand;

// Bosonic hopping clock.
typedef struct DcClock DcClock;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *dc_last_error(void);

// NUL-terminated library version.
const char *dc_version(void);

// # Safety
// `out` must be valid for one pointer write.
enum DcStatus dc_atom_new(double excited_energy, double width, struct DcAtom **out);

// # Safety
// `atom` must come from `dc_atom_new` and not be used afterwards. Null is ignored.
void dc_atom_free(struct DcAtom *atom);

// |e^{-iE_e t - Γt/2}|².
//
// # Safety
// `atom` must be a live handle and `out` writable.
enum DcStatus dc_atom_survival_probability(const struct DcAtom *atom, double t, double *out);

// Long-time photon spectrum per unit energy.
//
// # Safety
// `atom` must be a live handle and `out` writable.
enum DcStatus dc_lorentzian_spectrum(const struct DcAtom *atom, double energy, double *out);

// Photon spectrum at finite time `t`.
//
// # Safety
// `atom` must be a live handle and `out` writable.
enum DcStatus dc_transient_spectrum(const struct DcAtom *atom,
                                    double energy,
                                    double t,
                                    double *out);

// # Safety
// `out` must be valid for one pointer write.
enum DcStatus dc_clock_new(uint64_t bosons, double hopping, struct DcClock **out);

// # Safety
// `clock` must come from `dc_clock_new` and not be used afterwards. Null is ignored.
void dc_clock_free(struct DcClock *clock);

// Δt = 1/(ω√N).
//
// # Safety
// `clock` must be a live handle and `out` writable.
enum DcStatus dc_clock_resolution(const struct DcClock *clock, double *out);

// τ_n = √(n/N)/ω.
//
// # Safety
// `clock` must be a live handle and `out` writable.
enum DcStatus dc_clock_reading_time(const struct DcClock *clock, uint64_t n, double *out);

// # Safety
// `clock` must be a live handle and `out` writable.
enum DcStatus dc_binomial_probability(const struct DcClock *clock,
                                      uint64_t n,
                                      double t,
                                      double *out);

// # Safety
// `clock` must be a live handle and `out` writable.
enum DcStatus dc_gaussian_probability(const struct DcClock *clock,
                                      uint64_t n,
                                      double t,
                                      double *out);

// Long-time spectrum of photons emitted while the clock runs.
//
// # Safety
// Both handles must be live and `out` writable.
enum DcStatus dc_clocked_spectrum(const struct DcAtom *atom,
                                  const struct DcClock *clock,
                                  double energy,
                                  double *out);

// Closed-form probability that the clock reads `n` when the photon appears.
//
// # Safety
// Both handles must be live and `out` writable.
enum DcStatus dc_reading_probability(const struct DcAtom *atom,
                                     const struct DcClock *clock,
                                     uint64_t n,
                                     double t,
                                     double *out);

// Reading distribution P(n) for n = 0, 1, ... at horizon `t`, written to
// `probs`. `len` receives the number of entries; if `capacity` is smaller
// the call returns `DC_STATUS_BUFFER_TOO_SMALL` and writes nothing else.
// `probs` may be null when `capacity` is zero.
//
// # Safety
// `probs` must be valid for `capacity` writes and `len` writable.
enum DcStatus dc_reading_distribution(const struct DcAtom *atom,
                                      const struct DcClock *clock,
                                      double t,
                                      double *probs,
                                      uintptr_t capacity,
                                      uintptr_t *len);

// Flat band on [e_min, e_max] with constant ρΩ².
//
// # Safety
// `out` must be valid for one pointer write.
enum DcStatus dc_band_flat(double e_min,
                           double e_max,
                           double excited_energy,
                           double coupling_density,
                           struct DcBand **out);

// Flat band [0, band_width] with E_e = ξ·band_width/2.
//
// # Safety
// `out` must be valid for one pointer write.
enum DcStatus dc_band_from_xi(double xi,
                              double band_width,
                              double coupling_density,
                              struct DcBand **out);

// # Safety
// `band` must come from a `dc_band_*` constructor and not be used afterwards. Null is ignored.
void dc_band_free(struct DcBand *band);

// Golden-rule rate 2πρΩ².
//
// # Safety
// `band` must be a live handle and `out` writable.
enum DcStatus dc_band_fermi_rate(const struct DcBand *band, double *out);

// Decay rate seen through a clock of resolution `dt`.
//
// # Safety
// `band` must be a live handle and `out` writable.
enum DcStatus dc_clocked_decay_rate(const struct DcBand *band, double dt, double *out);

// Clocked rate divided by the golden-rule rate.
//
// # Safety
// `band` must be a live handle and `out` writable.
enum DcStatus dc_rate_ratio(const struct DcBand *band, double dt, double *out);

// Resolutions below which the clock suppresses decay (`zeno`) and above
// which the golden rule is recovered (`jump`).
//
// # Safety
// `band` must be a live handle and both outputs writable.
enum DcStatus dc_zeno_and_jump_time(const struct DcBand *band, double *zeno, double *jump);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECAYCLOCK_H */
