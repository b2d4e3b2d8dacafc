/*
 * spinmech - C API for the spin-mechanics simulator library.
 *
 * Conventions:
 *   - All frequencies and rates are angular (rad/s); convert with 2*pi from
 *     conventional nu-units. Lengths in meters, stress in Pa, power in W,
 *     magnetic field in tesla, times in seconds.
 *   - Every function returns a spinmech_status; results come back through
 *     output pointers. On any non-OK status, spinmech_last_error() returns a
 *     human-readable message for the calling thread.
 *   - Handles are opaque; free them with the matching *_free function.
 */
#ifndef SPINMECH_H
#define SPINMECH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define SPINMECH_API __declspec(dllexport)
#else
#  define SPINMECH_API __attribute__((visibility("default")))
#endif

typedef enum spinmech_status {
    SPINMECH_OK = 0,
    SPINMECH_ERR_IO = 1,      /* file missing/unreadable/unwritable */
    SPINMECH_ERR_CONFIG = 2,  /* schema violation in config or override */
    SPINMECH_ERR_INVALID = 3, /* argument violates a precondition */
    SPINMECH_ERR_NUMERIC = 4, /* instability, non-convergence, degenerate data */
    SPINMECH_ERR_RANGE = 5,   /* target outside the covered domain */
    SPINMECH_ERR_INTERNAL = 6
} spinmech_status;

/* Message for the most recent failure on this thread; never NULL. */
SPINMECH_API const char* spinmech_last_error(void);

/* Library version string, e.g. "0.1.0". */
SPINMECH_API const char* spinmech_version(void);

/* ------------------------------------------------------------------ model */

/* A model bundles the validated parameter set (device, spin, drive, lock
 * profile) plus the per-phonon stress map. */
typedef struct spinmech_model spinmech_model;

/* Load from a config file in the documented key=value schema. */
SPINMECH_API spinmech_status spinmech_model_load(const char* config_path,
                                                 spinmech_model** out_model);

/* Parse a config from memory (same schema). */
SPINMECH_API spinmech_status spinmech_model_parse(const char* config_text,
                                                  spinmech_model** out_model);

/* Set/get a raw config value by schema key (I/O units as in the key name).
 * Setting re-validates and rebuilds derived parameters. */
SPINMECH_API spinmech_status spinmech_model_set(spinmech_model* m, const char* key, double value);
SPINMECH_API spinmech_status spinmech_model_get(const spinmech_model* m, const char* key,
                                                double* out_value);

/* Replace the per-phonon stress map from a CSV
 * (columns: radius_um, stress_kpa_per_phonon_amp). */
SPINMECH_API spinmech_status spinmech_model_load_stress_map(spinmech_model* m, const char* csv_path);

SPINMECH_API void spinmech_model_free(spinmech_model* m);

/* --------------------------------------------------------- scalar queries */

/* kappa, gamma_m (rad/s) and the sideband-resolution flag (0/1). */
SPINMECH_API spinmech_status spinmech_derived_rates(const spinmech_model* m, double* out_kappa,
                                                    double* out_gamma_m,
                                                    int* out_sideband_resolved);

SPINMECH_API spinmech_status spinmech_threshold_photons(const spinmech_model* m, double* out_n_th);
SPINMECH_API spinmech_status spinmech_threshold_dropped_power(const spinmech_model* m,
                                                              double* out_watts);
SPINMECH_API spinmech_status spinmech_cooperativity_om(const spinmech_model* m, double n_photons,
                                                       double* out_c_om);

/* Self-oscillation state at a given fiber-input power. */
SPINMECH_API spinmech_status spinmech_clamped_amplitude(const spinmech_model* m, double p_in_watts,
                                                        double* out_displacement_m,
                                                        double* out_stress_pa,
                                                        double* out_phonon_number);

SPINMECH_API spinmech_status spinmech_stress_from_displacement(const spinmech_model* m,
                                                               double displacement_m,
                                                               double* out_stress_pa);

/* Normalized lock-profile PSD at a mechanical-injection detuning; the optional
 * flag reports detunings beyond the demonstrated tuning range. */
SPINMECH_API spinmech_status spinmech_psd_vs_detuning(const spinmech_model* m, double delta_mi,
                                                      double* out_psd, int* out_outside_range);

/* Locked stress amplitude at a detuning, for a given peak stress. */
SPINMECH_API spinmech_status spinmech_stress_vs_detuning(const spinmech_model* m, double delta_mi,
                                                         double stress_peak_pa,
                                                         double* out_stress_pa);

/* Spin transition frequency for nuclear projection in {-1, 0, +1}. */
SPINMECH_API spinmech_status spinmech_spin_splitting(const spinmech_model* m,
                                                     int nuclear_projection, double* out_rad_s);

SPINMECH_API spinmech_status spinmech_rabi_from_stress(const spinmech_model* m, double stress_pa,
                                                       double* out_rad_s);

/* Per-phonon stress at a radius, from the model's stress map. */
SPINMECH_API spinmech_status spinmech_stress_map_lookup(const spinmech_model* m, double radius_m,
                                                        double* out_stress_pa);

/* Measurement-spot preset: offset radius, combined eta, drive stress at the
 * spot for the model's p_max, and the resulting Rabi rate. */
SPINMECH_API spinmech_status spinmech_measurement_spot(const spinmech_model* m,
                                                       double* out_radius_m,
                                                       double* out_eta_combined,
                                                       double* out_stress_pa,
                                                       double* out_rabi_rad_s);

/* -------------------------------------------------------------- dynamics */

typedef struct spinmech_sequence {
    double drive_duration_s;
    double drive_rabi_rad_s;
    double drive_detuning_rad_s;
    double t2_star_s;
    double pi_pulse_fidelity; /* in [0,1]; 1 = ideal */
    double gamma_inj_rad_s;   /* extra dephasing from drive-frequency jitter */
} spinmech_sequence;

/* Model-derived defaults for a lock-driven experiment: 7 us drive, configured
 * T2*, ideal pulses, gamma_inj = gamma_tune/2 (locked-drive jitter), zero Rabi
 * rate and detuning (set those for your operating point). */
SPINMECH_API spinmech_status spinmech_sequence_default(const spinmech_model* m,
                                                       spinmech_sequence* out_seq);

/* Initialize to |+1> (scaled by fidelity), drive, read out both populations. */
SPINMECH_API spinmech_status spinmech_run_sequence(const spinmech_model* m,
                                                   const spinmech_sequence* seq,
                                                   double* out_p_plus1, double* out_p_minus1);

/* ---------------------------------------------------------------- sweeps */

typedef struct spinmech_sweep spinmech_sweep;

typedef enum spinmech_sweep_column {
    SPINMECH_COL_DELTA_SI = 0, /* rad/s */
    SPINMECH_COL_STRESS = 1,   /* Pa */
    SPINMECH_COL_P_PLUS1 = 2,
    SPINMECH_COL_P_MINUS1 = 3
} spinmech_sweep_column;

/* Injection-detuning sweep: grid of spin-injection detunings (rad/s), peak
 * Rabi rate at lock resonance, spin-mechanical detuning delta_sm. The peak
 * drive stress is inferred from omega_peak via the configured eta*g_str. */
SPINMECH_API spinmech_status spinmech_sweep_injection(const spinmech_model* m, double delta_sm,
                                                      double omega_peak,
                                                      const spinmech_sequence* seq,
                                                      const double* grid_delta_si, size_t n,
                                                      spinmech_sweep** out_sweep);

/* Stress sweep at fixed detuning. */
SPINMECH_API spinmech_status spinmech_sweep_stress(const spinmech_model* m,
                                                   const double* stress_values_pa, size_t n,
                                                   double delta_si, const spinmech_sequence* seq,
                                                   spinmech_sweep** out_sweep);

SPINMECH_API spinmech_status spinmech_sweep_size(const spinmech_sweep* s, size_t* out_n);
SPINMECH_API spinmech_status spinmech_sweep_get(const spinmech_sweep* s,
                                                spinmech_sweep_column column, size_t index,
                                                double* out_value);

/* Width of the p_minus1 peak (or p_plus1 dip - they coincide) relative to the
 * off-resonant plateau. */
SPINMECH_API spinmech_status spinmech_sweep_fwhm(const spinmech_sweep* s, double* out_rad_s);

/* 1 when any grid point fell outside the demonstrated tuning range. */
SPINMECH_API spinmech_status spinmech_sweep_outside_tuning(const spinmech_sweep* s, int* out_flag);

SPINMECH_API void spinmech_sweep_free(spinmech_sweep* s);

/* -------------------------------------------------------------- analysis */

typedef struct spinmech_map spinmech_map;

/* Width/population-change map over a drive-rate grid at delta_sm, built at the
 * model's T2* plus the 0.5/0.8 us bracket endpoint for uncertainties. Pass
 * omega_grid = NULL (n = 0) for the default grid 2pi*(20:400:10) kHz. */
SPINMECH_API spinmech_status spinmech_fwhm_map(const spinmech_model* m, double delta_sm,
                                               const double* omega_grid, size_t n,
                                               spinmech_map** out_map);

SPINMECH_API spinmech_status spinmech_map_size(const spinmech_map* map, size_t* out_rows);

/* Row accessors: omega (rad/s), fwhm (rad/s), population change. */
SPINMECH_API spinmech_status spinmech_map_row(const spinmech_map* map, size_t index,
                                              double* out_omega, double* out_fwhm,
                                              double* out_dp_minus1);

/* Invert a measured width for the drive Rabi rate; uncertainty is the
 * half-spread of re-inversion at the T2* bracket endpoints. */
SPINMECH_API spinmech_status spinmech_invert_fwhm(const spinmech_map* map, double fwhm_rad_s,
                                                  double* out_omega, double* out_uncertainty);

/* Conservative lower bound on the drive rate from an observed (r = 0)
 * population change. */
SPINMECH_API spinmech_status spinmech_contrast_lower_bound(const spinmech_map* map,
                                                           double observed_change,
                                                           double* out_omega_min);

SPINMECH_API void spinmech_map_free(spinmech_map* map);

/* Pedestal correction p/(1-r). */
SPINMECH_API spinmech_status spinmech_correct_population(double p, double r, double* out_corrected);

typedef struct spinmech_fit_report {
    double omega_m_rad_s;
    double omega_m_err_rad_s;
    double r;
    double r_err;
    double residual_norm;
    double fwhm_rad_s;
    int low_confidence; /* 1 when residuals are comparable to the signal */
} spinmech_fit_report;

/* Fit (omega_m, r) to sweep-shaped data against (1-r)-scaled simulated curves;
 * all other parameters from the model. */
SPINMECH_API spinmech_status spinmech_fit_sweep(const spinmech_model* m, double delta_sm,
                                                double t2_star_s, const double* delta_si,
                                                const double* p_plus1, const double* p_minus1,
                                                size_t n, spinmech_fit_report* out_report);

/* --------------------------------------------------------------- roadmap */

typedef struct spinmech_roadmap_entry {
    char label[64];
    double g_sm_rad_s;
    double gamma_spin_rad_s;
    double gamma_m_rad_s;
    double g_om_rad_s;
    double kappa_rad_s;
    double n_photons;
    int factor4;
    char assumptions[128];
} spinmech_roadmap_entry;

SPINMECH_API spinmech_status spinmech_roadmap_preset_count(const spinmech_model* m,
                                                           size_t* out_count);
SPINMECH_API spinmech_status spinmech_roadmap_preset(const spinmech_model* m, size_t index,
                                                     int factor4,
                                                     spinmech_roadmap_entry* out_entry);
SPINMECH_API spinmech_status spinmech_cooperativity_sm(const spinmech_roadmap_entry* e,
                                                       double* out_c_sm);
SPINMECH_API spinmech_status spinmech_cooperativity_om_entry(const spinmech_roadmap_entry* e,
                                                             double* out_c_om);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPINMECH_H */
