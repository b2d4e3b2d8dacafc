#include "spinmech/roadmap.hpp"

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/nv_spin.hpp"
#include "spinmech/optomech.hpp"

namespace spinmech {

double cooperativity_sm(const RoadmapEntry& e) {
    if (!(e.g_sm >= 0) || !(e.gamma_spin > 0) || !(e.gamma_m > 0))
        throw InvalidArgument("roadmap entry rates must be positive");
    double c = (e.g_sm / e.gamma_m) * (e.g_sm / e.gamma_spin);
    return e.factor4 ? 4.0 * c : c;
}

double cooperativity_om_entry(const RoadmapEntry& e) {
    if (!(e.kappa > 0) || !(e.gamma_m > 0) || e.n_photons < 0 || !(e.g_om >= 0))
        throw InvalidArgument("roadmap entry rates must be positive");
    return 4.0 * e.n_photons * (e.g_om / e.kappa) * (e.g_om / e.gamma_m);
}

std::vector<RoadmapEntry> roadmap_presets(const DeviceParams& d, const SpinParams& sp,
                                          bool factor4) {
    DerivedRates rates = derived_rates(d);
    std::vector<RoadmapEntry> presets;

    RoadmapEntry now;
    now.label = "NV microdisk (this work)";
    now.g_sm = rabi_from_stress(d.p_single_phonon, sp);
    now.gamma_spin = 2.0 / sp.t2_star; // angular FWHM of the 1/(pi T2*) line
    now.gamma_m = rates.gamma_m;
    now.g_om = d.g_om;
    now.kappa = rates.kappa;
    now.n_photons = threshold_photons(d);
    now.factor4 = factor4;
    now.assumptions = "gamma_spin = 2/T2*; N at self-oscillation threshold";
    presets.push_back(now);

    RoadmapEntry siv;
    siv.label = "SiV microdisk";
    siv.g_sm = kTau * 0.1e6;
    siv.gamma_spin = kTau * 1e6;
    siv.gamma_m = kTau * 200e3;
    siv.g_om = d.g_om;
    siv.kappa = rates.kappa;
    siv.n_photons = 1;
    siv.factor4 = factor4;
    siv.assumptions = "projected qubit; optical mode as measured device, N = 1 (assumed)";
    presets.push_back(siv);

    RoadmapEntry omc;
    omc.label = "NV optomechanical crystal";
    omc.g_sm = kTau * 2.5e6;
    omc.gamma_spin = kTau * 1e6;
    omc.gamma_m = kTau * 200e3;
    omc.g_om = kTau * 200e3;
    omc.kappa = kTau * 1e9;
    omc.n_photons = 1;
    omc.factor4 = factor4;
    omc.assumptions = "g_sm from 2-3 MHz band; kappa = 2pi*1 GHz, g_om = 2pi*200 kHz (assumed)";
    presets.push_back(omc);

    RoadmapEntry shield;
    shield.label = "OMC + phononic shield";
    shield.g_sm = kTau * 2.5e6;
    shield.gamma_spin = kTau * 1e6;
    shield.gamma_m = kTau * 5e9 / 1e9; // omega_m/2pi = 5 GHz at Q_m = 1e9
    shield.g_om = kTau * 200e3;
    shield.kappa = kTau * 1e9;
    shield.n_photons = 1;
    shield.factor4 = factor4;
    shield.assumptions = "omega_m = 2pi*5 GHz, Q_m = 1e9, kappa = 2pi*1 GHz (assumed)";
    presets.push_back(shield);

    return presets;
}

} // namespace spinmech
