#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinmech/dynamics.hpp"

namespace spinmech {

enum class Extremum { Peak, Dip };

// Mean of the outer 20% of grid points (10% from each end); the off-resonant
// plateau used as the FWHM baseline.
double plateau_baseline(const std::vector<double>& y);

// Full width at half extremum relative to the baseline, via linear
// interpolation of the two half crossings. Throws NumericError when the curve
// is flat or a crossing is missing on either side.
double fwhm_of_curve(const std::vector<double>& x, const std::vector<double>& y,
                     double baseline, Extremum kind);

struct FwhmMapRow {
    double omega = 0; // rad/s
    double fwhm = 0;  // rad/s
    double dp_minus1 = 0;
};

struct FwhmMap {
    double t2_star = 0;
    std::vector<FwhmMapRow> rows;
};

// Simulated width and extremal population change versus drive Rabi rate:
// one detuning sweep per omega_grid entry at the given T2*.
FwhmMap fwhm_vs_omega_map(const std::vector<double>& omega_grid, double t2_star,
                          double delta_sm, const LockProfile& lp,
                          const std::vector<double>& grid_delta_si,
                          double drive_duration = 7e-6);

// Default-map context for the inversion operations: maps at the T2* bracket
// endpoints {0.8, 0.5} us over the default omega and detuning grids.
struct MapContext {
    FwhmMap primary;   // at the nominal T2*
    FwhmMap bracket;   // at the other T2* endpoint
    MapContext() = default;

    static std::vector<double> default_omega_grid();    // 2pi * (20:400:10) kHz
    static std::vector<double> default_detuning_grid(); // 2pi * (-1500:1500:10) kHz
    static MapContext build(double delta_sm, const LockProfile& lp,
                            double t2_nominal = 0.8e-6, double t2_bracket = 0.5e-6,
                            double drive_duration = 7e-6);
};

struct ValueWithUncertainty {
    double value = 0;
    double uncertainty = 0;
};

// Inverts the width map for the drive Rabi rate via bisection on the strictly
// increasing piecewise-linear interpolant; uncertainty is the half-spread of
// re-inversion at the T2* bracket endpoint. Throws RangeError below the
// small-drive width floor ("unreachable width") or above the map's range.
ValueWithUncertainty invert_fwhm(double delta_target, const MapContext& ctx);

// Conservative drive-rate lower bound from an observed (r = 0) population
// change: inverts the rising branch of the map's population-change column.
// Throws RangeError when the change exceeds the saturation value.
double contrast_lower_bound(double observed_change, const MapContext& ctx);

// Pedestal-background correction p / (1 - r); companion population is
// 1 - corrected. Throws InvalidArgument for r outside [0, 1) or p < 0.
double correct_population(double p, double r);

struct FitReport {
    double omega_m = 0;        // rad/s
    double omega_m_err = 0;    // rad/s
    double r = 0;
    double r_err = 0;
    double residual_norm = 0;  // RMS residual over both population columns
    double fwhm = 0;           // rad/s, width of the fitted model curve
    bool low_confidence = false;
};

// Data for fitting: sweep-shaped arrays (detunings plus both populations).
struct SweepData {
    std::vector<double> delta_si; // rad/s
    std::vector<double> p_plus1;
    std::vector<double> p_minus1;
};

// Least-squares fit of (omega_m, r) to measured sweep data against the
// (1 - r)-scaled simulated curves, all other parameters fixed. Derivative-free
// Nelder-Mead from a data-derived initial guess; covariance from the residual
// quadratic form at the optimum. Throws NumericError on degenerate data or
// non-convergence.
FitReport fit_sweep(const SweepData& data, double delta_sm, double t2_star,
                    const LockProfile& lp, double drive_duration = 7e-6);

} // namespace spinmech
