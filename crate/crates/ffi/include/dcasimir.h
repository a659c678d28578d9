/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef DCASIMIR_H
#define DCASIMIR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  DC_STATUS_INVALID_ARGUMENT = 2,
  DC_STATUS_NUMERICAL = 3,
  DC_STATUS_DIMENSION_CAP = 4,
  DC_STATUS_OUT_OF_RANGE = 5,
  DC_STATUS_PANIC = 6,
} DcStatus;

typedef enum DcGeometry {
  DC_GEOMETRY_ONE_DIMENSIONAL = 0,
  DC_GEOMETRY_CUBIC = 1,
} DcGeometry;

// Opaque evolution record.
typedef struct DcEvolution DcEvolution;

// Opaque cavity spectrum.
typedef struct DcSpectrum DcSpectrum;

typedef struct DcRwaResult {
  double total;
  double created;
  double vacuum;
  double enhancement;
  double initial;
  double squeeze;
} DcRwaResult;

typedef struct DcMirrorEnergy {
  double vacuum;
  double thermal;
  double total;
  // NaN when the vacuum term vanishes.
  double ratio;
  double peak_speed;
} DcMirrorEnergy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *dc_last_error_message(void);

void dc_clear_error(void);

// Library version as a static NUL-terminated string.
const char *dc_version(void);

// Temperature in kelvin to its angular-frequency scale k_B T/ħ.
enum DcStatus dc_kelvin_to_angular(double kelvin, double *out);

enum DcStatus dc_bose_occupation(double omega, double temp_kelvin, double *out);

// 1 + 2n = coth(ħω/2k_BT).
enum DcStatus dc_enhancement_factor(double omega, double temp_kelvin, double *out);

// √(n(n + 1)).
enum DcStatus dc_thermal_variance(double omega, double temp_kelvin, double *out);

enum DcStatus dc_rwa_photon_number(double epsilon,
                                   double omega,
                                   double duration,
                                   double temp_kelvin,
                                   struct DcRwaResult *out);

// Mirror moving as a(1 − cos ωt) for `periods` whole periods.
enum DcStatus dc_mirror_sinusoid_energy(double amplitude,
                                        double omega,
                                        uint32_t periods,
                                        double temp_kelvin,
                                        struct DcMirrorEnergy *out);

// Mirror positions sampled at start + i·step, i < len (odd, ≥ 5).
enum DcStatus dc_mirror_sampled_energy(double start,
                                       double step,
                                       const double *positions,
                                       size_t len,
                                       double temp_kelvin,
                                       struct DcMirrorEnergy *out);

enum DcStatus dc_spectrum_build(enum DcGeometry geometry,
                                double length,
                                uint32_t max_index,
                                struct DcSpectrum **out);

// A spectrum with a single mode at `omega`.
enum DcStatus dc_spectrum_single(double omega, struct DcSpectrum **out);

void dc_spectrum_free(struct DcSpectrum *spectrum);

enum DcStatus dc_spectrum_len(const struct DcSpectrum *spectrum, size_t *out);

enum DcStatus dc_spectrum_frequency(const struct DcSpectrum *spectrum, size_t index, double *out);

// Mode indices into `out[0..3]`; one-dimensional modes fill `out[0]` and
// zero the rest.
enum DcStatus dc_spectrum_indices(const struct DcSpectrum *spectrum, size_t index, uint32_t *out);

// Number of resonant pairs |Ω_μ ± Ω_ν| = 2Ω₁ within `relative_tolerance`·2Ω₁.
enum DcStatus dc_resonance_count(const struct DcSpectrum *spectrum,
                                 double relative_tolerance,
                                 bool velocity_only,
                                 size_t *out);

// Exact evolution of the lowest `modes` modes of `spectrum` from a thermal
// state under ΔΩ²₁ = 2εΩ₁² sin(2ωt) for `duration`, with `intervals` RK4
// steps. `cutoff` = 0 sizes each mode's Fock cutoff automatically.
enum DcStatus dc_evolve_standard(const struct DcSpectrum *spectrum,
                                 size_t modes,
                                 double epsilon,
                                 double drive_omega,
                                 double duration,
                                 double temp_kelvin,
                                 size_t cutoff,
                                 size_t intervals,
                                 bool strict,
                                 struct DcEvolution **out);

void dc_evolution_free(struct DcEvolution *evolution);

// Number of recorded samples (steps + 1).
enum DcStatus dc_evolution_samples(const struct DcEvolution *evolution, size_t *out);

enum DcStatus dc_evolution_time(const struct DcEvolution *evolution,
                                size_t sample_index,
                                double *out);

enum DcStatus dc_evolution_occupation(const struct DcEvolution *evolution,
                                      size_t sample_index,
                                      size_t mode,
                                      double *out);

enum DcStatus dc_evolution_entropy(const struct DcEvolution *evolution,
                                   size_t sample_index,
                                   double *out);

enum DcStatus dc_evolution_max_trace_defect(const struct DcEvolution *evolution, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DCASIMIR_H */
