#include "spinmech/spinmech.h"

#include <cstdio>
#include <string>
#include <vector>

#include "spinmech/analysis.hpp"
#include "spinmech/constants.hpp"
#include "spinmech/config.hpp"
#include "spinmech/dynamics.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/injection_lock.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/optomech.hpp"
#include "spinmech/params.hpp"
#include "spinmech/roadmap.hpp"

using namespace spinmech;

struct spinmech_model {
    Config cfg;
    DeviceParams device;
    SpinParams spin;
    DriveConfig drive;
    LockProfile lock;
    StressMap stress_map = StressMap::bundled_default();

    void rebuild() {
        device = DeviceParams::from_config(cfg);
        spin = SpinParams::from_config(cfg);
        drive = DriveConfig::from_config(cfg, device, spin);
        lock = LockProfile::from_drive(drive);
    }
};

struct spinmech_sweep {
    SweepResult result;
};

struct spinmech_map {
    MapContext ctx;
};

namespace {

thread_local std::string g_last_error = "";

template <typename Fn>
spinmech_status guarded(Fn&& fn) {
    try {
        fn();
        return SPINMECH_OK;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_IO;
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_CONFIG;
    } catch (const InvalidArgument& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_INVALID;
    } catch (const RangeError& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_RANGE;
    } catch (const NumericError& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_NUMERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPINMECH_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SPINMECH_ERR_INTERNAL;
    }
}

spinmech_status require(bool ok, const char* msg) {
    if (!ok) {
        g_last_error = msg;
        return SPINMECH_ERR_INVALID;
    }
    return SPINMECH_OK;
}

PulseSequence to_sequence(const spinmech_sequence* seq) {
    PulseSequence s;
    s.drive_duration = seq->drive_duration_s;
    s.drive_rabi = seq->drive_rabi_rad_s;
    s.drive_detuning = seq->drive_detuning_rad_s;
    s.t2_star = seq->t2_star_s;
    s.pi_pulse_fidelity = seq->pi_pulse_fidelity;
    s.gamma_inj = seq->gamma_inj_rad_s;
    return s;
}

} // namespace

extern "C" {

const char* spinmech_last_error(void) { return g_last_error.c_str(); }

const char* spinmech_version(void) { return "0.1.0"; }

spinmech_status spinmech_model_load(const char* config_path, spinmech_model** out_model) {
    if (auto st = require(config_path && out_model, "null argument")) return st;
    return guarded([&] {
        auto m = new spinmech_model;
        try {
            m->cfg = Config::from_file(config_path);
            m->rebuild();
        } catch (...) {
            delete m;
            throw;
        }
        *out_model = m;
    });
}

spinmech_status spinmech_model_parse(const char* config_text, spinmech_model** out_model) {
    if (auto st = require(config_text && out_model, "null argument")) return st;
    return guarded([&] {
        auto m = new spinmech_model;
        try {
            m->cfg = Config::from_string(config_text);
            m->rebuild();
        } catch (...) {
            delete m;
            throw;
        }
        *out_model = m;
    });
}

spinmech_status spinmech_model_set(spinmech_model* m, const char* key, double value) {
    if (auto st = require(m && key, "null argument")) return st;
    return guarded([&] {
        Config next = m->cfg;
        next.set(key, value);
        spinmech_model candidate;
        candidate.cfg = next;
        candidate.stress_map = m->stress_map;
        candidate.rebuild();
        *m = candidate;
    });
}

spinmech_status spinmech_model_get(const spinmech_model* m, const char* key, double* out_value) {
    if (auto st = require(m && key && out_value, "null argument")) return st;
    return guarded([&] { *out_value = m->cfg.get(key); });
}

spinmech_status spinmech_model_load_stress_map(spinmech_model* m, const char* csv_path) {
    if (auto st = require(m && csv_path, "null argument")) return st;
    return guarded([&] { m->stress_map = StressMap::from_csv(csv_path); });
}

void spinmech_model_free(spinmech_model* m) { delete m; }

spinmech_status spinmech_derived_rates(const spinmech_model* m, double* out_kappa,
                                       double* out_gamma_m, int* out_sideband_resolved) {
    if (auto st = require(m && out_kappa && out_gamma_m && out_sideband_resolved, "null argument"))
        return st;
    return guarded([&] {
        DerivedRates r = derived_rates(m->device);
        *out_kappa = r.kappa;
        *out_gamma_m = r.gamma_m;
        *out_sideband_resolved = r.sideband_resolved ? 1 : 0;
    });
}

spinmech_status spinmech_threshold_photons(const spinmech_model* m, double* out_n_th) {
    if (auto st = require(m && out_n_th, "null argument")) return st;
    return guarded([&] { *out_n_th = threshold_photons(m->device); });
}

spinmech_status spinmech_threshold_dropped_power(const spinmech_model* m, double* out_watts) {
    if (auto st = require(m && out_watts, "null argument")) return st;
    return guarded([&] { *out_watts = threshold_dropped_power(m->device); });
}

spinmech_status spinmech_cooperativity_om(const spinmech_model* m, double n_photons,
                                          double* out_c_om) {
    if (auto st = require(m && out_c_om, "null argument")) return st;
    return guarded([&] { *out_c_om = cooperativity_om(n_photons, m->device); });
}

spinmech_status spinmech_clamped_amplitude(const spinmech_model* m, double p_in_watts,
                                           double* out_displacement_m, double* out_stress_pa,
                                           double* out_phonon_number) {
    if (auto st = require(m && out_displacement_m && out_stress_pa && out_phonon_number,
                          "null argument"))
        return st;
    return guarded([&] {
        OscillatorState s = clamped_amplitude(p_in_watts, m->device);
        *out_displacement_m = s.displacement_amp;
        *out_stress_pa = s.stress_amp;
        *out_phonon_number = s.phonon_number_equivalent;
    });
}

spinmech_status spinmech_stress_from_displacement(const spinmech_model* m, double displacement_m,
                                                  double* out_stress_pa) {
    if (auto st = require(m && out_stress_pa, "null argument")) return st;
    return guarded([&] { *out_stress_pa = stress_from_displacement(displacement_m, m->device); });
}

spinmech_status spinmech_psd_vs_detuning(const spinmech_model* m, double delta_mi,
                                         double* out_psd, int* out_outside_range) {
    if (auto st = require(m && out_psd, "null argument")) return st;
    return guarded([&] {
        *out_psd = psd_vs_detuning(delta_mi, m->lock);
        if (out_outside_range) *out_outside_range = outside_tuning_range(delta_mi, m->lock) ? 1 : 0;
    });
}

spinmech_status spinmech_stress_vs_detuning(const spinmech_model* m, double delta_mi,
                                            double stress_peak_pa, double* out_stress_pa) {
    if (auto st = require(m && out_stress_pa, "null argument")) return st;
    return guarded([&] { *out_stress_pa = stress_vs_detuning(delta_mi, m->lock, stress_peak_pa); });
}

spinmech_status spinmech_spin_splitting(const spinmech_model* m, int nuclear_projection,
                                        double* out_rad_s) {
    if (auto st = require(m && out_rad_s, "null argument")) return st;
    return guarded([&] { *out_rad_s = spin_splitting(m->spin, nuclear_projection); });
}

spinmech_status spinmech_rabi_from_stress(const spinmech_model* m, double stress_pa,
                                          double* out_rad_s) {
    if (auto st = require(m && out_rad_s, "null argument")) return st;
    return guarded([&] { *out_rad_s = rabi_from_stress(stress_pa, m->spin); });
}

spinmech_status spinmech_stress_map_lookup(const spinmech_model* m, double radius_m,
                                           double* out_stress_pa) {
    if (auto st = require(m && out_stress_pa, "null argument")) return st;
    return guarded([&] { *out_stress_pa = m->stress_map.lookup(radius_m); });
}

spinmech_status spinmech_measurement_spot(const spinmech_model* m, double* out_radius_m,
                                          double* out_eta_combined, double* out_stress_pa,
                                          double* out_rabi_rad_s) {
    if (auto st = require(m && out_radius_m && out_eta_combined && out_stress_pa &&
                              out_rabi_rad_s,
                          "null argument"))
        return st;
    return guarded([&] {
        MeasurementSpot spot;
        *out_radius_m = spot.radius;
        *out_eta_combined = spot.eta_projection * m->spin.eta;
        *out_stress_pa = spot.stress_at_spot(m->device.p_max, m->stress_map);
        *out_rabi_rad_s = spot.rabi_at_spot(m->device.p_max, m->stress_map, m->spin);
    });
}

spinmech_status spinmech_sequence_default(const spinmech_model* m, spinmech_sequence* out_seq) {
    if (auto st = require(m && out_seq, "null argument")) return st;
    return guarded([&] {
        PulseSequence s = lock_driven_sequence(m->spin.t2_star, m->lock);
        out_seq->drive_duration_s = s.drive_duration;
        out_seq->drive_rabi_rad_s = s.drive_rabi;
        out_seq->drive_detuning_rad_s = s.drive_detuning;
        out_seq->t2_star_s = s.t2_star;
        out_seq->pi_pulse_fidelity = s.pi_pulse_fidelity;
        out_seq->gamma_inj_rad_s = s.gamma_inj;
    });
}

spinmech_status spinmech_run_sequence(const spinmech_model* m, const spinmech_sequence* seq,
                                      double* out_p_plus1, double* out_p_minus1) {
    if (auto st = require(m && seq && out_p_plus1 && out_p_minus1, "null argument")) return st;
    return guarded([&] {
        auto [p1, pm1] = run_sequence(to_sequence(seq));
        *out_p_plus1 = p1;
        *out_p_minus1 = pm1;
    });
}

spinmech_status spinmech_sweep_injection(const spinmech_model* m, double delta_sm,
                                         double omega_peak, const spinmech_sequence* seq,
                                         const double* grid_delta_si, size_t n,
                                         spinmech_sweep** out_sweep) {
    if (auto st = require(m && seq && grid_delta_si && out_sweep && n > 0, "null argument"))
        return st;
    return guarded([&] {
        // Peak drive stress implied by the peak Rabi rate through eta*g_str.
        double denom = kTau * m->spin.eta * m->spin.g_str;
        double stress_peak = denom > 0 ? omega_peak / denom : 0.0;
        std::vector<double> grid(grid_delta_si, grid_delta_si + n);
        auto s = new spinmech_sweep;
        try {
            s->result = sweep_injection_detuning(delta_sm, omega_peak, stress_peak, m->lock,
                                                 to_sequence(seq), grid);
        } catch (...) {
            delete s;
            throw;
        }
        *out_sweep = s;
    });
}

spinmech_status spinmech_sweep_stress(const spinmech_model* m, const double* stress_values_pa,
                                      size_t n, double delta_si, const spinmech_sequence* seq,
                                      spinmech_sweep** out_sweep) {
    if (auto st = require(m && seq && stress_values_pa && out_sweep && n > 0, "null argument"))
        return st;
    return guarded([&] {
        std::vector<double> values(stress_values_pa, stress_values_pa + n);
        auto s = new spinmech_sweep;
        try {
            s->result = sweep_stress(values, delta_si, m->spin, to_sequence(seq));
        } catch (...) {
            delete s;
            throw;
        }
        *out_sweep = s;
    });
}

spinmech_status spinmech_sweep_size(const spinmech_sweep* s, size_t* out_n) {
    if (auto st = require(s && out_n, "null argument")) return st;
    *out_n = s->result.delta_si.size();
    return SPINMECH_OK;
}

spinmech_status spinmech_sweep_get(const spinmech_sweep* s, spinmech_sweep_column column,
                                   size_t index, double* out_value) {
    if (auto st = require(s && out_value, "null argument")) return st;
    return guarded([&] {
        if (index >= s->result.delta_si.size()) throw RangeError("sweep index out of range");
        switch (column) {
            case SPINMECH_COL_DELTA_SI: *out_value = s->result.delta_si[index]; return;
            case SPINMECH_COL_STRESS: *out_value = s->result.stress[index]; return;
            case SPINMECH_COL_P_PLUS1: *out_value = s->result.p_plus1[index]; return;
            case SPINMECH_COL_P_MINUS1: *out_value = s->result.p_minus1[index]; return;
        }
        throw InvalidArgument("unknown sweep column");
    });
}

spinmech_status spinmech_sweep_fwhm(const spinmech_sweep* s, double* out_rad_s) {
    if (auto st = require(s && out_rad_s, "null argument")) return st;
    return guarded([&] {
        double baseline = plateau_baseline(s->result.p_minus1);
        *out_rad_s =
            fwhm_of_curve(s->result.delta_si, s->result.p_minus1, baseline, Extremum::Peak);
    });
}

spinmech_status spinmech_sweep_outside_tuning(const spinmech_sweep* s, int* out_flag) {
    if (auto st = require(s && out_flag, "null argument")) return st;
    *out_flag = s->result.any_outside_tuning ? 1 : 0;
    return SPINMECH_OK;
}

void spinmech_sweep_free(spinmech_sweep* s) { delete s; }

spinmech_status spinmech_fwhm_map(const spinmech_model* m, double delta_sm,
                                  const double* omega_grid, size_t n, spinmech_map** out_map) {
    if (auto st = require(m && out_map, "null argument")) return st;
    return guarded([&] {
        auto map = new spinmech_map;
        try {
            auto detunings = MapContext::default_detuning_grid();
            std::vector<double> omegas;
            if (omega_grid && n > 0)
                omegas.assign(omega_grid, omega_grid + n);
            else
                omegas = MapContext::default_omega_grid();
            // T2* bracket endpoints: the configured value plus the other end of
            // the documented 0.5/0.8 us bracket.
            double t2 = m->spin.t2_star;
            double bracket = (t2 == 0.5e-6) ? 0.8e-6 : 0.5e-6;
            map->ctx.primary = fwhm_vs_omega_map(omegas, t2, delta_sm, m->lock, detunings);
            map->ctx.bracket = fwhm_vs_omega_map(omegas, bracket, delta_sm, m->lock, detunings);
        } catch (...) {
            delete map;
            throw;
        }
        *out_map = map;
    });
}

spinmech_status spinmech_map_size(const spinmech_map* map, size_t* out_rows) {
    if (auto st = require(map && out_rows, "null argument")) return st;
    *out_rows = map->ctx.primary.rows.size();
    return SPINMECH_OK;
}

spinmech_status spinmech_map_row(const spinmech_map* map, size_t index, double* out_omega,
                                 double* out_fwhm, double* out_dp_minus1) {
    if (auto st = require(map && out_omega && out_fwhm && out_dp_minus1, "null argument"))
        return st;
    return guarded([&] {
        if (index >= map->ctx.primary.rows.size()) throw RangeError("map index out of range");
        const auto& row = map->ctx.primary.rows[index];
        *out_omega = row.omega;
        *out_fwhm = row.fwhm;
        *out_dp_minus1 = row.dp_minus1;
    });
}

spinmech_status spinmech_invert_fwhm(const spinmech_map* map, double fwhm_rad_s,
                                     double* out_omega, double* out_uncertainty) {
    if (auto st = require(map && out_omega, "null argument")) return st;
    return guarded([&] {
        ValueWithUncertainty v = invert_fwhm(fwhm_rad_s, map->ctx);
        *out_omega = v.value;
        if (out_uncertainty) *out_uncertainty = v.uncertainty;
    });
}

spinmech_status spinmech_contrast_lower_bound(const spinmech_map* map, double observed_change,
                                              double* out_omega_min) {
    if (auto st = require(map && out_omega_min, "null argument")) return st;
    return guarded([&] { *out_omega_min = contrast_lower_bound(observed_change, map->ctx); });
}

void spinmech_map_free(spinmech_map* map) { delete map; }

spinmech_status spinmech_correct_population(double p, double r, double* out_corrected) {
    if (auto st = require(out_corrected != nullptr, "null argument")) return st;
    return guarded([&] { *out_corrected = correct_population(p, r); });
}

spinmech_status spinmech_fit_sweep(const spinmech_model* m, double delta_sm, double t2_star_s,
                                   const double* delta_si, const double* p_plus1,
                                   const double* p_minus1, size_t n,
                                   spinmech_fit_report* out_report) {
    if (auto st = require(m && delta_si && p_plus1 && p_minus1 && out_report && n > 0,
                          "null argument"))
        return st;
    return guarded([&] {
        SweepData data;
        data.delta_si.assign(delta_si, delta_si + n);
        data.p_plus1.assign(p_plus1, p_plus1 + n);
        data.p_minus1.assign(p_minus1, p_minus1 + n);
        FitReport rep = fit_sweep(data, delta_sm, t2_star_s, m->lock);
        out_report->omega_m_rad_s = rep.omega_m;
        out_report->omega_m_err_rad_s = rep.omega_m_err;
        out_report->r = rep.r;
        out_report->r_err = rep.r_err;
        out_report->residual_norm = rep.residual_norm;
        out_report->fwhm_rad_s = rep.fwhm;
        out_report->low_confidence = rep.low_confidence ? 1 : 0;
    });
}

spinmech_status spinmech_roadmap_preset_count(const spinmech_model* m, size_t* out_count) {
    if (auto st = require(m && out_count, "null argument")) return st;
    return guarded([&] { *out_count = roadmap_presets(m->device, m->spin).size(); });
}

spinmech_status spinmech_roadmap_preset(const spinmech_model* m, size_t index, int factor4,
                                        spinmech_roadmap_entry* out_entry) {
    if (auto st = require(m && out_entry, "null argument")) return st;
    return guarded([&] {
        auto presets = roadmap_presets(m->device, m->spin, factor4 != 0);
        if (index >= presets.size()) throw RangeError("preset index out of range");
        const RoadmapEntry& e = presets[index];
        std::snprintf(out_entry->label, sizeof out_entry->label, "%s", e.label.c_str());
        std::snprintf(out_entry->assumptions, sizeof out_entry->assumptions, "%s",
                      e.assumptions.c_str());
        out_entry->g_sm_rad_s = e.g_sm;
        out_entry->gamma_spin_rad_s = e.gamma_spin;
        out_entry->gamma_m_rad_s = e.gamma_m;
        out_entry->g_om_rad_s = e.g_om;
        out_entry->kappa_rad_s = e.kappa;
        out_entry->n_photons = e.n_photons;
        out_entry->factor4 = e.factor4 ? 1 : 0;
    });
}

spinmech_status spinmech_cooperativity_sm(const spinmech_roadmap_entry* e, double* out_c_sm) {
    if (auto st = require(e && out_c_sm, "null argument")) return st;
    return guarded([&] {
        RoadmapEntry entry;
        entry.g_sm = e->g_sm_rad_s;
        entry.gamma_spin = e->gamma_spin_rad_s;
        entry.gamma_m = e->gamma_m_rad_s;
        entry.factor4 = e->factor4 != 0;
        *out_c_sm = cooperativity_sm(entry);
    });
}

spinmech_status spinmech_cooperativity_om_entry(const spinmech_roadmap_entry* e,
                                                double* out_c_om) {
    if (auto st = require(e && out_c_om, "null argument")) return st;
    return guarded([&] {
        RoadmapEntry entry;
        entry.g_om = e->g_om_rad_s;
        entry.kappa = e->kappa_rad_s;
        entry.gamma_m = e->gamma_m_rad_s;
        entry.n_photons = e->n_photons;
        *out_c_om = cooperativity_om_entry(entry);
    });
}

} // extern "C"
