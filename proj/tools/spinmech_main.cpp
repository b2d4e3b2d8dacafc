// Command-line surface for the spin-mechanics simulator. Talks to the library
// exclusively through the C API so it doubles as a reference client.

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinmech/spinmech.h"

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

#ifndef SPINMECH_DEFAULT_CONFIG
#define SPINMECH_DEFAULT_CONFIG "data/default_device.cfg"
#endif

int exit_code_for(spinmech_status st) {
    switch (st) {
        case SPINMECH_OK: return 0;
        case SPINMECH_ERR_IO:
        case SPINMECH_ERR_CONFIG:
        case SPINMECH_ERR_INVALID: return 2;
        default: return 3; // numeric/range/internal
    }
}

[[noreturn]] void fail(spinmech_status st) {
    std::cerr << "error: " << spinmech_last_error() << "\n";
    std::exit(exit_code_for(st));
}

void check(spinmech_status st) {
    if (st != SPINMECH_OK) fail(st);
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double khz(double rad_s) { return rad_s / (kTau * 1e3); }
double mhz(double rad_s) { return rad_s / (kTau * 1e6); }
double ghz(double rad_s) { return rad_s / (kTau * 1e9); }

struct Global {
    std::string config_path = SPINMECH_DEFAULT_CONFIG;
    std::vector<std::string> overrides;
    std::string out;
    std::string format; // empty = command default
    std::string stress_map_path;
};

spinmech_model* load_model(const Global& g) {
    spinmech_model* m = nullptr;
    check(spinmech_model_load(g.config_path.c_str(), &m));
    for (const auto& ov : g.overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: override must be key=value: " << ov << "\n";
            std::exit(2);
        }
        std::string key = ov.substr(0, eq);
        const std::string value_text = ov.substr(eq + 1);
        char* end = nullptr;
        double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0') {
            std::cerr << "error: override value must be numeric: " << ov << "\n";
            std::exit(2);
        }
        check(spinmech_model_set(m, key.c_str(), value));
    }
    if (!g.stress_map_path.empty())
        check(spinmech_model_load_stress_map(m, g.stress_map_path.c_str()));
    return m;
}

std::string manifest_timestamp() {
    std::time_t t = 0;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    else
        t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Writes the main output plus, when writing to a file, the run-manifest
// sidecar carrying the command line, parameters, and extracted results.
void emit(const Global& g, const std::string& command, const std::string& body,
          const ordered_json& parameters, const ordered_json& results) {
    std::string manifest_name = "none";
    if (!g.out.empty()) manifest_name = g.out + ".manifest.json";

    std::string text = body;
    if (!g.out.empty()) {
        std::ofstream f(g.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write output file: " << g.out << "\n";
            std::exit(2);
        }
        f << text;

        ordered_json manifest;
        manifest["command"] = command;
        manifest["config_path"] = g.config_path;
        manifest["overrides"] = g.overrides;
        manifest["outputs"] = {g.out};
        manifest["tool_version"] = spinmech_version();
        manifest["timestamp"] = manifest_timestamp();
        if (!parameters.is_null()) manifest["parameters"] = parameters;
        if (!results.is_null()) manifest["results"] = results;
        std::ofstream mf(manifest_name, std::ios::binary);
        if (!mf) {
            std::cerr << "error: cannot write manifest: " << manifest_name << "\n";
            std::exit(2);
        }
        mf << manifest.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string csv_comment(const Global& g) {
    if (g.out.empty()) return "# manifest: none\n";
    return "# manifest: " + g.out + ".manifest.json\n";
}

struct Grid {
    double start_khz = 0, stop_khz = 0, step_khz = 0;
    std::vector<double> values_rad_s() const {
        std::vector<double> v;
        long n = static_cast<long>((stop_khz - start_khz) / step_khz + 1e-9) + 1;
        for (long i = 0; i < n; ++i)
            v.push_back(kTau * (start_khz + static_cast<double>(i) * step_khz) * 1e3);
        return v;
    }
};

Grid parse_grid(const std::string& spec) {
    Grid grid;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> grid.start_khz >> c1 >> grid.stop_khz >> c2 >> grid.step_khz) || c1 != ':' ||
        c2 != ':' || grid.step_khz <= 0 || grid.stop_khz < grid.start_khz) {
        std::cerr << "error: grid must be start:stop:step in kHz with step > 0: " << spec << "\n";
        std::exit(2);
    }
    return grid;
}

// ------------------------------------------------------------- subcommands

int cmd_device_report(const Global& g) {
    spinmech_model* m = load_model(g);
    double kappa = 0, gamma_m = 0, n_th = 0, p_drop = 0, p_threshold_mw = 0;
    int sideband = 0;
    check(spinmech_derived_rates(m, &kappa, &gamma_m, &sideband));
    check(spinmech_threshold_photons(m, &n_th));
    check(spinmech_threshold_dropped_power(m, &p_drop));
    check(spinmech_model_get(m, "p_threshold_mw", &p_threshold_mw));

    ordered_json rep;
    rep["kappa_ghz"] = ghz(kappa);
    rep["gamma_m_khz"] = khz(gamma_m);
    rep["sideband_resolved"] = sideband != 0;
    rep["n_threshold_photons"] = n_th;
    rep["p_drop_threshold_mw"] = p_drop * 1e3;
    rep["dropping_efficiency"] = p_drop * 1e3 / p_threshold_mw;
    ordered_json table = ordered_json::array();
    for (double mult : {1.0, 1.2, 1.5, 2.0, 3.0, 5.0}) {
        double p_in = p_threshold_mw * 1e-3 * mult;
        double x = 0, stress = 0, phonons = 0;
        check(spinmech_clamped_amplitude(m, p_in, &x, &stress, &phonons));
        ordered_json row;
        row["p_in_mw"] = p_in * 1e3;
        row["displacement_pm"] = x * 1e12;
        row["stress_mpa"] = stress * 1e-6;
        row["phonon_number_equivalent"] = phonons;
        table.push_back(row);
    }
    rep["clamped_amplitude"] = table;

    emit(g, "device-report", rep.dump(2) + "\n", nullptr, nullptr);
    spinmech_model_free(m);
    return 0;
}

int cmd_lock_profile(const Global& g, double dmin_khz, double dmax_khz, long steps) {
    if (steps < 2 || dmax_khz <= dmin_khz) {
        std::cerr << "error: lock-profile needs delta-max > delta-min and steps >= 2\n";
        return 2;
    }
    spinmech_model* m = load_model(g);
    double p_max_mpa = 0;
    check(spinmech_model_get(m, "p_max_mpa", &p_max_mpa));

    bool any_outside = false;
    std::ostringstream csv;
    csv << csv_comment(g) << "delta_mi_khz,psd_norm,stress_mpa\n";
    ordered_json json_rows = ordered_json::array();
    for (long i = 0; i < steps; ++i) {
        double d_khz = dmin_khz + (dmax_khz - dmin_khz) * static_cast<double>(i) /
                                      static_cast<double>(steps - 1);
        double delta = kTau * d_khz * 1e3;
        double psd = 0, stress = 0;
        int outside = 0;
        check(spinmech_psd_vs_detuning(m, delta, &psd, &outside));
        check(spinmech_stress_vs_detuning(m, delta, p_max_mpa * 1e6, &stress));
        any_outside = any_outside || outside != 0;
        csv << fmt(d_khz) << "," << fmt(psd) << "," << fmt(stress * 1e-6) << "\n";
        if (g.format == "json") {
            ordered_json row;
            row["delta_mi_khz"] = d_khz;
            row["psd_norm"] = psd;
            row["stress_mpa"] = stress * 1e-6;
            json_rows.push_back(row);
        }
    }
    if (any_outside)
        std::cerr << "note: grid extends outside demonstrated +-5 MHz tuning range\n";

    ordered_json params{{"delta_min_khz", dmin_khz},
                        {"delta_max_khz", dmax_khz},
                        {"steps", steps},
                        {"stress_peak_mpa", p_max_mpa}};
    ordered_json results{{"outside_tuning_range", any_outside}};
    if (g.format == "json")
        emit(g, "lock-profile", json_rows.dump(2) + "\n", params, results);
    else
        emit(g, "lock-profile", csv.str(), params, results);
    spinmech_model_free(m);
    return 0;
}

int cmd_spin_report(const Global& g, double b_field_g, bool b_field_given) {
    spinmech_model* m = load_model(g);
    if (b_field_given) check(spinmech_model_set(m, "b_field_g", b_field_g));

    double omega_m_ghz = 0, p_max_mpa = 0;
    check(spinmech_model_get(m, "omega_m_ghz", &omega_m_ghz));
    check(spinmech_model_get(m, "p_max_mpa", &p_max_mpa));

    ordered_json rep;
    ordered_json transitions = ordered_json::array();
    double omega_s0 = 0;
    for (int mi : {-1, 0, +1}) {
        double omega_s = 0;
        check(spinmech_spin_splitting(m, mi, &omega_s));
        if (mi == 0) omega_s0 = omega_s;
        ordered_json row;
        row["nuclear_projection"] = mi;
        row["omega_s_ghz"] = ghz(omega_s);
        transitions.push_back(row);
    }
    rep["transitions"] = transitions;
    rep["delta_sm_mhz"] = mhz(omega_s0 - kTau * omega_m_ghz * 1e9);

    double rabi_max = 0;
    check(spinmech_rabi_from_stress(m, p_max_mpa * 1e6, &rabi_max));
    rep["rabi_at_p_max_khz"] = khz(rabi_max);

    double radius = 0, eta_comb = 0, stress = 0, rabi_spot = 0;
    check(spinmech_measurement_spot(m, &radius, &eta_comb, &stress, &rabi_spot));
    ordered_json spot;
    spot["radius_um"] = radius * 1e6;
    spot["eta_combined"] = eta_comb;
    spot["stress_mpa"] = stress * 1e-6;
    spot["rabi_khz"] = khz(rabi_spot);
    rep["measurement_spot"] = spot;

    emit(g, "spin-report", rep.dump(2) + "\n", nullptr, nullptr);
    spinmech_model_free(m);
    return 0;
}

std::string sweep_csv(const Global& g, spinmech_sweep* s) {
    size_t n = 0;
    check(spinmech_sweep_size(s, &n));
    std::ostringstream csv;
    csv << csv_comment(g) << "delta_si_khz,stress_mpa,p_plus1,p_minus1\n";
    for (size_t i = 0; i < n; ++i) {
        double d = 0, stress = 0, p1 = 0, pm1 = 0;
        check(spinmech_sweep_get(s, SPINMECH_COL_DELTA_SI, i, &d));
        check(spinmech_sweep_get(s, SPINMECH_COL_STRESS, i, &stress));
        check(spinmech_sweep_get(s, SPINMECH_COL_P_PLUS1, i, &p1));
        check(spinmech_sweep_get(s, SPINMECH_COL_P_MINUS1, i, &pm1));
        csv << fmt(khz(d)) << "," << fmt(stress * 1e-6) << "," << fmt(p1) << "," << fmt(pm1)
            << "\n";
    }
    return csv.str();
}

ordered_json sweep_json(spinmech_sweep* s) {
    size_t n = 0;
    check(spinmech_sweep_size(s, &n));
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < n; ++i) {
        double d = 0, stress = 0, p1 = 0, pm1 = 0;
        check(spinmech_sweep_get(s, SPINMECH_COL_DELTA_SI, i, &d));
        check(spinmech_sweep_get(s, SPINMECH_COL_STRESS, i, &stress));
        check(spinmech_sweep_get(s, SPINMECH_COL_P_PLUS1, i, &p1));
        check(spinmech_sweep_get(s, SPINMECH_COL_P_MINUS1, i, &pm1));
        ordered_json row;
        row["delta_si_khz"] = khz(d);
        row["stress_mpa"] = stress * 1e-6;
        row["p_plus1"] = p1;
        row["p_minus1"] = pm1;
        rows.push_back(row);
    }
    return rows;
}

int cmd_sweep(const Global& g, double delta_sm_khz, double omega_khz, double t2_us,
              bool t2_given, double drive_us, double fidelity, const std::string& grid_spec) {
    spinmech_model* m = load_model(g);
    spinmech_sequence seq{};
    check(spinmech_sequence_default(m, &seq));
    if (t2_given) seq.t2_star_s = t2_us * 1e-6;
    seq.drive_duration_s = drive_us * 1e-6;
    seq.pi_pulse_fidelity = fidelity;

    Grid grid = parse_grid(grid_spec);
    std::vector<double> detunings = grid.values_rad_s();
    spinmech_sweep* s = nullptr;
    check(spinmech_sweep_injection(m, kTau * delta_sm_khz * 1e3, kTau * omega_khz * 1e3, &seq,
                                   detunings.data(), detunings.size(), &s));

    double fwhm = 0;
    spinmech_status fwhm_st = spinmech_sweep_fwhm(s, &fwhm);
    int outside = 0;
    check(spinmech_sweep_outside_tuning(s, &outside));
    if (outside) std::cerr << "note: grid extends outside demonstrated +-5 MHz tuning range\n";

    ordered_json params{{"delta_sm_khz", delta_sm_khz},
                        {"omega_khz", omega_khz},
                        {"t2_star_us", seq.t2_star_s * 1e6},
                        {"drive_us", drive_us},
                        {"pi_pulse_fidelity", fidelity},
                        {"gamma_inj_khz", khz(seq.gamma_inj_rad_s)},
                        {"grid_khz", grid_spec}};
    ordered_json results;
    results["outside_tuning_range"] = outside != 0;
    if (fwhm_st == SPINMECH_OK)
        results["fwhm_khz"] = khz(fwhm);
    else
        results["fwhm_khz"] = nullptr;

    if (g.format == "json")
        emit(g, "sweep", sweep_json(s).dump(2) + "\n", params, results);
    else
        emit(g, "sweep", sweep_csv(g, s), params, results);
    spinmech_sweep_free(s);
    spinmech_model_free(m);
    return 0;
}

int cmd_stress_sweep(const Global& g, double delta_si_khz, double smin_mpa, double smax_mpa,
                     bool smax_given, long steps, double t2_us, bool t2_given, double drive_us) {
    if (steps < 2) {
        std::cerr << "error: stress-sweep needs steps >= 2\n";
        return 2;
    }
    spinmech_model* m = load_model(g);
    if (!smax_given) {
        double p_max_mpa = 0;
        check(spinmech_model_get(m, "p_max_mpa", &p_max_mpa));
        smax_mpa = 0.7 * p_max_mpa; // drive stress at the measurement spot
    }
    if (smax_mpa < smin_mpa || smin_mpa < 0) {
        std::cerr << "error: stress range must satisfy 0 <= min <= max\n";
        return 2;
    }
    spinmech_sequence seq{};
    check(spinmech_sequence_default(m, &seq));
    if (t2_given) seq.t2_star_s = t2_us * 1e-6;
    seq.drive_duration_s = drive_us * 1e-6;

    std::vector<double> stresses;
    for (long i = 0; i < steps; ++i)
        stresses.push_back((smin_mpa + (smax_mpa - smin_mpa) * static_cast<double>(i) /
                                           static_cast<double>(steps - 1)) *
                           1e6);
    spinmech_sweep* s = nullptr;
    check(spinmech_sweep_stress(m, stresses.data(), stresses.size(), kTau * delta_si_khz * 1e3,
                                &seq, &s));

    ordered_json params{{"delta_si_khz", delta_si_khz},
                        {"stress_min_mpa", smin_mpa},
                        {"stress_max_mpa", smax_mpa},
                        {"steps", steps},
                        {"t2_star_us", seq.t2_star_s * 1e6},
                        {"drive_us", drive_us},
                        {"gamma_inj_khz", khz(seq.gamma_inj_rad_s)}};
    if (g.format == "json")
        emit(g, "stress-sweep", sweep_json(s).dump(2) + "\n", params, nullptr);
    else
        emit(g, "stress-sweep", sweep_csv(g, s), params, nullptr);
    spinmech_sweep_free(s);
    spinmech_model_free(m);
    return 0;
}

int cmd_fwhm_map(const Global& g, double delta_sm_khz, double t2_us, bool t2_given,
                 const std::string& omega_spec) {
    spinmech_model* m = load_model(g);
    if (t2_given) check(spinmech_model_set(m, "t2_star_us", t2_us));
    double t2_effective = 0;
    check(spinmech_model_get(m, "t2_star_us", &t2_effective));

    Grid grid = parse_grid(omega_spec);
    std::vector<double> omegas = grid.values_rad_s();
    spinmech_map* map = nullptr;
    check(spinmech_fwhm_map(m, kTau * delta_sm_khz * 1e3, omegas.data(), omegas.size(), &map));

    size_t rows = 0;
    check(spinmech_map_size(map, &rows));
    std::ostringstream csv;
    csv << csv_comment(g) << "omega_khz,fwhm_khz,delta_p_minus1\n";
    ordered_json json_rows = ordered_json::array();
    for (size_t i = 0; i < rows; ++i) {
        double omega = 0, fwhm = 0, dp = 0;
        check(spinmech_map_row(map, i, &omega, &fwhm, &dp));
        csv << fmt(khz(omega)) << "," << fmt(khz(fwhm)) << "," << fmt(dp) << "\n";
        if (g.format == "json") {
            ordered_json row;
            row["omega_khz"] = khz(omega);
            row["fwhm_khz"] = khz(fwhm);
            row["delta_p_minus1"] = dp;
            json_rows.push_back(row);
        }
    }

    ordered_json params{{"delta_sm_khz", delta_sm_khz},
                        {"t2_star_us", t2_effective},
                        {"omega_grid_khz", omega_spec}};
    if (g.format == "json")
        emit(g, "fwhm-map", json_rows.dump(2) + "\n", params, nullptr);
    else
        emit(g, "fwhm-map", csv.str(), params, nullptr);
    spinmech_map_free(map);
    spinmech_model_free(m);
    return 0;
}

int cmd_fit(const Global& g, const std::string& data_path, double delta_sm_khz, double t2_us,
            bool t2_given) {
    std::ifstream in(data_path);
    if (!in) {
        std::cerr << "error: cannot open data file: " << data_path << "\n";
        return 2;
    }
    std::vector<double> delta_si, p_plus1, p_minus1;
    std::string line;
    int col_delta = -1, col_p1 = -1, col_pm1 = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (col_delta < 0) {
            for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
                if (cells[i] == "delta_si_khz") col_delta = i;
                if (cells[i] == "p_plus1") col_p1 = i;
                if (cells[i] == "p_minus1") col_pm1 = i;
            }
            if (col_delta < 0 || col_p1 < 0 || col_pm1 < 0) {
                std::cerr << "error: data header must contain delta_si_khz, p_plus1, p_minus1\n";
                return 2;
            }
            continue;
        }
        int needed = std::max({col_delta, col_p1, col_pm1});
        if (static_cast<int>(cells.size()) <= needed) {
            std::cerr << "error: short data row in " << data_path << "\n";
            return 2;
        }
        delta_si.push_back(kTau * std::strtod(cells[col_delta].c_str(), nullptr) * 1e3);
        p_plus1.push_back(std::strtod(cells[col_p1].c_str(), nullptr));
        p_minus1.push_back(std::strtod(cells[col_pm1].c_str(), nullptr));
    }

    spinmech_model* m = load_model(g);
    double t2_cfg_us = 0;
    check(spinmech_model_get(m, "t2_star_us", &t2_cfg_us));
    double t2_s = (t2_given ? t2_us : t2_cfg_us) * 1e-6;

    spinmech_fit_report rep{};
    check(spinmech_fit_sweep(m, kTau * delta_sm_khz * 1e3, t2_s, delta_si.data(),
                             p_plus1.data(), p_minus1.data(), delta_si.size(), &rep));

    ordered_json out;
    out["omega_m_khz"] = khz(rep.omega_m_rad_s);
    out["omega_m_err_khz"] = khz(rep.omega_m_err_rad_s);
    out["r"] = rep.r;
    out["r_err"] = rep.r_err;
    out["residual_norm"] = rep.residual_norm;
    out["fwhm_khz"] = khz(rep.fwhm_rad_s);
    out["low_confidence"] = rep.low_confidence != 0;

    ordered_json params{{"data", data_path},
                        {"delta_sm_khz", delta_sm_khz},
                        {"t2_star_us", t2_s * 1e6}};
    emit(g, "fit", out.dump(2) + "\n", params, out);
    spinmech_model_free(m);
    return 0;
}

int cmd_roadmap(const Global& g, bool no_factor4) {
    spinmech_model* m = load_model(g);
    size_t count = 0;
    check(spinmech_roadmap_preset_count(m, &count));

    std::ostringstream csv;
    csv << csv_comment(g)
        << "label,g_sm_khz,gamma_spin_khz,gamma_m_khz,g_om_khz,kappa_ghz,n_photons,c_sm,c_om,"
           "factor4,assumptions\n";
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
        spinmech_roadmap_entry e{};
        check(spinmech_roadmap_preset(m, i, no_factor4 ? 0 : 1, &e));
        double c_sm = 0, c_om = 0;
        check(spinmech_cooperativity_sm(&e, &c_sm));
        check(spinmech_cooperativity_om_entry(&e, &c_om));
        csv << '"' << e.label << '"' << "," << fmt(khz(e.g_sm_rad_s)) << ","
            << fmt(khz(e.gamma_spin_rad_s)) << "," << fmt(khz(e.gamma_m_rad_s)) << ","
            << fmt(khz(e.g_om_rad_s)) << "," << fmt(ghz(e.kappa_rad_s)) << ","
            << fmt(e.n_photons) << "," << fmt(c_sm) << "," << fmt(c_om) << ","
            << (e.factor4 ? "true" : "false") << "," << '"' << e.assumptions << '"' << "\n";
        ordered_json row;
        row["label"] = e.label;
        row["g_sm_khz"] = khz(e.g_sm_rad_s);
        row["gamma_spin_khz"] = khz(e.gamma_spin_rad_s);
        row["gamma_m_khz"] = khz(e.gamma_m_rad_s);
        row["g_om_khz"] = khz(e.g_om_rad_s);
        row["kappa_ghz"] = ghz(e.kappa_rad_s);
        row["n_photons"] = e.n_photons;
        row["c_sm"] = c_sm;
        row["c_om"] = c_om;
        row["factor4"] = e.factor4 != 0;
        row["assumptions"] = e.assumptions;
        rows.push_back(row);
    }

    ordered_json params{{"factor4", !no_factor4}};
    if (g.format == "json")
        emit(g, "roadmap", rows.dump(2) + "\n", params, nullptr);
    else
        emit(g, "roadmap", csv.str(), params, nullptr);
    spinmech_model_free(m);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-mechanics simulator: phonon lasing, injection locking, "
                 "stress-driven spin dynamics, coupling-rate extraction"};
    app.require_subcommand(1);

    Global g;
    app.add_option("--config", g.config_path, "Config file (documented key=value schema)");
    app.add_option("--override", g.overrides, "Override a config key, key=value (repeatable)");
    app.add_option("--out", g.out, "Output file (default stdout); also writes <out>.manifest.json");
    app.add_option("--format", g.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--stress-map", g.stress_map_path,
                   "Per-phonon stress map CSV (radius_um,stress_kpa_per_phonon_amp)");

    auto* dev = app.add_subcommand("device-report",
                                   "Derived cavity/mechanics rates, thresholds, amplitude table");

    auto* lock = app.add_subcommand("lock-profile", "Locked-oscillation amplitude vs detuning");
    double lp_min = -5000, lp_max = 5000;
    long lp_steps = 201;
    lock->add_option("--delta-min-khz", lp_min, "Grid start (kHz)");
    lock->add_option("--delta-max-khz", lp_max, "Grid stop (kHz)");
    lock->add_option("--steps", lp_steps, "Grid points");

    auto* spin = app.add_subcommand("spin-report", "Spin transition frequencies and drive rates");
    double sr_b = 0;
    auto* sr_b_opt = spin->add_option("--b-field-g", sr_b, "Magnetic field (gauss)");

    auto* sweep = app.add_subcommand("sweep", "Population transfer vs injection detuning");
    double sw_dsm = 182, sw_omega = 168, sw_t2 = 0, sw_drive = 7, sw_fid = 1;
    std::string sw_grid = "-1500:1500:10";
    sweep->add_option("--delta-sm-khz", sw_dsm, "Spin-mechanical detuning (kHz)");
    sweep->add_option("--omega-khz", sw_omega, "Peak Rabi rate at lock resonance (kHz)");
    auto* sw_t2_opt = sweep->add_option("--t2star-us", sw_t2, "Dephasing time (us)");
    sweep->add_option("--drive-us", sw_drive, "Drive duration (us)");
    sweep->add_option("--fidelity", sw_fid, "Pi-pulse fidelity in [0,1]");
    sweep->add_option("--grid-khz", sw_grid, "Detuning grid start:stop:step (kHz)");

    auto* ssw = app.add_subcommand("stress-sweep", "Population transfer vs drive stress");
    double ss_dsi = 263, ss_min = 0, ss_max = 0, ss_t2 = 0, ss_drive = 7;
    long ss_steps = 30;
    ssw->add_option("--delta-si-khz", ss_dsi, "Fixed spin-injection detuning (kHz)");
    ssw->add_option("--stress-min-mpa", ss_min, "Stress grid start (MPa)");
    auto* ss_max_opt = ssw->add_option("--stress-max-mpa", ss_max, "Stress grid stop (MPa)");
    ssw->add_option("--steps", ss_steps, "Grid points");
    auto* ss_t2_opt = ssw->add_option("--t2star-us", ss_t2, "Dephasing time (us)");
    ssw->add_option("--drive-us", ss_drive, "Drive duration (us)");

    auto* fmap = app.add_subcommand("fwhm-map", "Width/population-change map vs drive rate");
    double fm_dsm = 182, fm_t2 = 0;
    std::string fm_grid = "20:400:10";
    fmap->add_option("--delta-sm-khz", fm_dsm, "Spin-mechanical detuning (kHz)");
    auto* fm_t2_opt = fmap->add_option("--t2star-us", fm_t2, "Dephasing time (us)");
    fmap->add_option("--omega-khz", fm_grid, "Drive-rate grid start:stop:step (kHz)");

    auto* fit = app.add_subcommand("fit", "Fit (omega_m, r) to measured sweep data");
    std::string fit_data;
    double fit_dsm = 182, fit_t2 = 0;
    fit->add_option("--data", fit_data, "Sweep CSV (delta_si_khz,...,p_plus1,p_minus1)")
        ->required();
    fit->add_option("--delta-sm-khz", fit_dsm, "Spin-mechanical detuning (kHz)");
    auto* fit_t2_opt = fit->add_option("--t2star-us", fit_t2, "Dephasing time (us)");

    auto* road = app.add_subcommand("roadmap", "Cooperativity presets table");
    bool road_no4 = false;
    road->add_flag("--no-factor4", road_no4, "Drop the factor-4 cooperativity convention");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (dev->parsed()) return cmd_device_report(g);
    if (lock->parsed()) return cmd_lock_profile(g, lp_min, lp_max, lp_steps);
    if (spin->parsed()) return cmd_spin_report(g, sr_b, sr_b_opt->count() > 0);
    if (sweep->parsed())
        return cmd_sweep(g, sw_dsm, sw_omega, sw_t2, sw_t2_opt->count() > 0, sw_drive, sw_fid,
                         sw_grid);
    if (ssw->parsed())
        return cmd_stress_sweep(g, ss_dsi, ss_min, ss_max, ss_max_opt->count() > 0, ss_steps,
                                ss_t2, ss_t2_opt->count() > 0, ss_drive);
    if (fmap->parsed()) return cmd_fwhm_map(g, fm_dsm, fm_t2, fm_t2_opt->count() > 0, fm_grid);
    if (fit->parsed()) return cmd_fit(g, fit_data, fit_dsm, fit_t2, fit_t2_opt->count() > 0);
    if (road->parsed()) return cmd_roadmap(g, road_no4);
    return 2;
}
