#include "spinmech/params.hpp"

#include <cmath>
#include <string>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/nv_spin.hpp"

namespace spinmech {

namespace {

double positive(double v, const char* key) {
    if (!(v > 0) || !std::isfinite(v))
        throw ConfigError("non-positive value: " + std::string(key));
    return v;
}

} // namespace

DeviceParams DeviceParams::from_config(const Config& cfg) {
    DeviceParams d;
    d.lambda_o = positive(cfg.get("lambda_o_nm"), "lambda_o_nm") * 1e-9;
    d.q_optical = positive(cfg.get("q_optical"), "q_optical");
    d.omega_m = kTau * positive(cfg.get("omega_m_ghz"), "omega_m_ghz") * 1e9;
    d.q_mech = positive(cfg.get("q_mech"), "q_mech");
    d.g_om = kTau * positive(cfg.get("g_om_khz"), "g_om_khz") * 1e3;
    d.x_max = positive(cfg.get("x_max_pm"), "x_max_pm") * 1e-12;
    d.p_max = positive(cfg.get("p_max_mpa"), "p_max_mpa") * 1e6;
    d.p_single_phonon = positive(cfg.get("p_single_phonon_kpa"), "p_single_phonon_kpa") * 1e3;
    d.p_threshold_in = positive(cfg.get("p_threshold_mw"), "p_threshold_mw") * 1e-3;
    d.validate();
    return d;
}

void DeviceParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw InvalidArgument("non-positive value: " + std::string(name));
    };
    check(lambda_o, "lambda_o");
    check(q_optical, "q_optical");
    check(omega_m, "omega_m");
    check(q_mech, "q_mech");
    check(g_om, "g_om");
    check(x_max, "x_max");
    check(p_max, "p_max");
    check(p_single_phonon, "p_single_phonon");
    check(p_threshold_in, "p_threshold_in");
}

double DeviceParams::omega_o() const { return kTau * kSpeedOfLight / lambda_o; }

DerivedRates derived_rates(const DeviceParams& d) {
    DerivedRates r;
    r.kappa = d.omega_o() / d.q_optical;
    r.gamma_m = d.omega_m / d.q_mech;
    if (!std::isfinite(r.kappa) || !std::isfinite(r.gamma_m) || r.kappa <= 0 || r.gamma_m <= 0)
        throw NumericError("derived rates are not finite and positive");
    r.sideband_resolved = d.omega_m > r.kappa;
    return r;
}

SpinParams SpinParams::from_config(const Config& cfg) {
    SpinParams sp;
    sp.gamma_e = positive(cfg.get("gamma_e_mhz_per_g"), "gamma_e_mhz_per_g") * 1e6 * 1e4; // Hz/T
    sp.b_field = positive(cfg.get("b_field_g"), "b_field_g") * 1e-4;                      // T
    sp.g_str = positive(cfg.get("g_str_hz_per_kpa"), "g_str_hz_per_kpa") / 1e3;           // Hz/Pa
    sp.eta = cfg.get("eta");
    sp.t2_star = positive(cfg.get("t2_star_us"), "t2_star_us") * 1e-6;
    double hf = cfg.get("hyperfine_offset_mhz");
    if (hf < 0 || !std::isfinite(hf))
        throw ConfigError("non-positive value: hyperfine_offset_mhz");
    sp.hyperfine_offset = kTau * hf * 1e6;
    sp.validate();
    return sp;
}

void SpinParams::validate() const {
    if (!(eta >= 0 && eta <= 1))
        throw InvalidArgument("eta must lie in [0, 1]");
    if (!(t2_star > 0)) throw InvalidArgument("non-positive value: t2_star");
    if (!(g_str > 0)) throw InvalidArgument("non-positive value: g_str");
    if (!(gamma_e > 0)) throw InvalidArgument("non-positive value: gamma_e");
    if (b_field < 0) throw InvalidArgument("b_field must be nonnegative");
    if (hyperfine_offset < 0)
        throw InvalidArgument("hyperfine_offset must be nonnegative");
}

double SpinParams::hyperfine_offset_for(int nuclear_projection) const {
    switch (nuclear_projection) {
        case 0: return 0.0;
        case +1: return -hyperfine_offset; // m_I = +1 transition sits below m_I = 0
        case -1: return +hyperfine_offset;
        default:
            throw InvalidArgument("nuclear projection must be -1, 0, or +1, got " +
                                  std::to_string(nuclear_projection));
    }
}

DriveConfig DriveConfig::from_config(const Config& cfg, const DeviceParams& d, const SpinParams& sp) {
    DriveConfig drive;
    drive.omega_m_intrinsic = d.omega_m;
    drive.omega_inj = d.omega_m; // locked on resonance by default
    drive.gamma_tune = kTau * positive(cfg.get("gamma_tune_khz"), "gamma_tune_khz") * 1e3;
    drive.omega_s = spin_splitting(sp, 0);
    drive.drive_power_in = d.p_threshold_in;
    return drive;
}

} // namespace spinmech
