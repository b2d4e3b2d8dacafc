#include "spinmech/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

double plateau_baseline(const std::vector<double>& y) {
    if (y.size() < 10) throw InvalidArgument("need at least 10 points for a plateau baseline");
    std::size_t k = std::max<std::size_t>(1, y.size() / 10);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += y[i] + y[y.size() - 1 - i];
    return sum / static_cast<double>(2 * k);
}

double fwhm_of_curve(const std::vector<double>& x, const std::vector<double>& y,
                     double baseline, Extremum kind) {
    if (x.size() != y.size()) throw InvalidArgument("x and y must have equal length");
    if (x.size() < 3) throw InvalidArgument("need at least 3 points for a width");
    if (!std::is_sorted(x.begin(), x.end())) throw InvalidArgument("x must be sorted");

    // Work on a peak-shaped curve; a dip is a peak of (-y) around (-baseline).
    std::vector<double> yy(y);
    double base = baseline;
    if (kind == Extremum::Dip) {
        for (double& v : yy) v = -v;
        base = -baseline;
    }

    auto it = std::max_element(yy.begin(), yy.end());
    std::size_t ip = static_cast<std::size_t>(it - yy.begin());
    double height = *it - base;
    double range = *it - *std::min_element(yy.begin(), yy.end());
    if (range <= 0 || height <= 0) throw NumericError("no extremum");
    if (ip == 0 || ip + 1 == yy.size()) throw NumericError("extremum at grid edge");
    // A second, non-adjacent grid point at the extremal value means the
    // extremum is not unique.
    for (std::size_t i = 0; i < yy.size(); ++i)
        if (yy[i] == *it && (i + 1 < ip || i > ip + 1))
            throw NumericError("non-unique extremum");

    double half = base + 0.5 * height;
    double left = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = ip; i > 0; --i) {
        if (yy[i - 1] <= half && half <= yy[i]) {
            double t = (half - yy[i - 1]) / (yy[i] - yy[i - 1]);
            left = x[i - 1] + t * (x[i] - x[i - 1]);
            break;
        }
    }
    double right = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = ip; i + 1 < yy.size(); ++i) {
        if (yy[i + 1] <= half && half <= yy[i]) {
            double t = (yy[i] - half) / (yy[i] - yy[i + 1]);
            right = x[i] + t * (x[i + 1] - x[i]);
            break;
        }
    }
    if (std::isnan(left)) throw NumericError("no half-maximum crossing on the left side");
    if (std::isnan(right)) throw NumericError("no half-maximum crossing on the right side");
    return right - left;
}

FwhmMap fwhm_vs_omega_map(const std::vector<double>& omega_grid, double t2_star,
                          double delta_sm, const LockProfile& lp,
                          const std::vector<double>& grid_delta_si, double drive_duration) {
    if (omega_grid.empty()) throw InvalidArgument("omega grid must be nonempty");
    if (!std::is_sorted(omega_grid.begin(), omega_grid.end()))
        throw InvalidArgument("omega grid must be sorted");
    for (double o : omega_grid)
        if (!(o > 0)) throw InvalidArgument("omega grid must be positive");

    PulseSequence tmpl = lock_driven_sequence(t2_star, lp, drive_duration);
    FwhmMap map;
    map.t2_star = t2_star;
    map.rows.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        SweepResult sweep =
            sweep_injection_detuning(delta_sm, omega, 0.0, lp, tmpl, grid_delta_si);
        double baseline = plateau_baseline(sweep.p_minus1);
        FwhmMapRow row;
        row.omega = omega;
        row.fwhm = fwhm_of_curve(sweep.delta_si, sweep.p_minus1, baseline, Extremum::Peak);
        row.dp_minus1 =
            *std::max_element(sweep.p_minus1.begin(), sweep.p_minus1.end()) - baseline;
        map.rows.push_back(row);
    }
    return map;
}

std::vector<double> MapContext::default_omega_grid() {
    std::vector<double> grid;
    for (int khz = 20; khz <= 400; khz += 10) grid.push_back(kTau * khz * 1e3);
    return grid;
}

std::vector<double> MapContext::default_detuning_grid() {
    std::vector<double> grid;
    for (int khz = -1500; khz <= 1500; khz += 10) grid.push_back(kTau * khz * 1e3);
    return grid;
}

MapContext MapContext::build(double delta_sm, const LockProfile& lp, double t2_nominal,
                             double t2_bracket, double drive_duration) {
    MapContext ctx;
    auto omegas = default_omega_grid();
    auto detunings = default_detuning_grid();
    ctx.primary = fwhm_vs_omega_map(omegas, t2_nominal, delta_sm, lp, detunings, drive_duration);
    ctx.bracket = fwhm_vs_omega_map(omegas, t2_bracket, delta_sm, lp, detunings, drive_duration);
    return ctx;
}

namespace {

// Piecewise-linear interpolation of column(map) over the omega column,
// restricted to rows [0, last].
double interp_column(const FwhmMap& map, std::size_t last, double omega,
                     double FwhmMapRow::* column) {
    const auto& rows = map.rows;
    if (omega <= rows.front().omega) return rows.front().*column;
    if (omega >= rows[last].omega) return rows[last].*column;
    for (std::size_t i = 1; i <= last; ++i) {
        if (omega <= rows[i].omega) {
            double t = (omega - rows[i - 1].omega) / (rows[i].omega - rows[i - 1].omega);
            return rows[i - 1].*column + t * (rows[i].*column - rows[i - 1].*column);
        }
    }
    return rows[last].*column;
}

// Bisection for the omega at which the strictly-increasing piecewise-linear
// column reaches the target.
double bisect_column(const FwhmMap& map, std::size_t last, double target,
                     double FwhmMapRow::* column) {
    double lo = map.rows.front().omega;
    double hi = map.rows[last].omega;
    for (int iter = 0; iter < 100; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (interp_column(map, last, mid, column) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void require_monotone_fwhm(const FwhmMap& map) {
    for (std::size_t i = 1; i < map.rows.size(); ++i)
        if (!(map.rows[i].fwhm > map.rows[i - 1].fwhm))
            throw NumericError("width map is not strictly increasing");
}

std::size_t dp_rising_branch_end(const FwhmMap& map) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < map.rows.size(); ++i)
        if (map.rows[i].dp_minus1 > map.rows[arg].dp_minus1) arg = i;
    for (std::size_t i = 1; i <= arg; ++i)
        if (!(map.rows[i].dp_minus1 > map.rows[i - 1].dp_minus1))
            throw NumericError("population-change map is not monotone on its rising branch");
    return arg;
}

double invert_width_once(const FwhmMap& map, double delta_target, bool clamp_into_range) {
    require_monotone_fwhm(map);
    std::size_t last = map.rows.size() - 1;
    double floor = map.rows.front().fwhm;
    double ceil = map.rows[last].fwhm;
    double target = delta_target;
    if (clamp_into_range) {
        target = std::clamp(target, floor, ceil);
    } else {
        if (target < floor)
            throw RangeError("unreachable width: target below the small-drive floor");
        if (target > ceil) throw RangeError("width outside the map range");
    }
    return bisect_column(map, last, target, &FwhmMapRow::fwhm);
}

} // namespace

ValueWithUncertainty invert_fwhm(double delta_target, const MapContext& ctx) {
    if (ctx.primary.rows.size() < 2) throw InvalidArgument("map needs at least two rows");
    if (!(delta_target > 0)) throw InvalidArgument("width must be positive");
    ValueWithUncertainty out;
    out.value = invert_width_once(ctx.primary, delta_target, false);
    if (ctx.bracket.rows.size() >= 2) {
        double alt = invert_width_once(ctx.bracket, delta_target, true);
        out.uncertainty = 0.5 * std::abs(out.value - alt);
    }
    return out;
}

double contrast_lower_bound(double observed_change, const MapContext& ctx) {
    if (ctx.primary.rows.size() < 2) throw InvalidArgument("map needs at least two rows");
    if (observed_change < 0) throw InvalidArgument("observed change must be nonnegative");
    if (observed_change == 0) return 0.0;
    const FwhmMap& map = ctx.primary;
    std::size_t arg = dp_rising_branch_end(map);
    if (observed_change > map.rows[arg].dp_minus1)
        throw RangeError("change exceeds the saturation value");
    // Below the first mapped row the transfer is quadratic in the drive rate;
    // interpolate toward (0, 0) with the square-root law.
    if (observed_change < map.rows.front().dp_minus1)
        return map.rows.front().omega *
               std::sqrt(observed_change / map.rows.front().dp_minus1);
    return bisect_column(map, arg, observed_change, &FwhmMapRow::dp_minus1);
}

double correct_population(double p, double r) {
    if (!(r >= 0 && r < 1)) throw InvalidArgument("r must lie in [0, 1)");
    if (p < 0) throw InvalidArgument("population must be nonnegative");
    return p / (1.0 - r);
}

namespace {

struct FitObjective {
    const SweepData& data;
    double delta_sm;
    const LockProfile& lp;
    PulseSequence tmpl;
    mutable long evals = 0;

    std::vector<double> model_pm1(double omega) const {
        ++evals;
        SweepResult sweep =
            sweep_injection_detuning(delta_sm, omega, 0.0, lp, tmpl, data.delta_si);
        return sweep.p_minus1;
    }

    // Sum of squared residuals over both population columns for the
    // (1-r)-scaled model.
    double ssr(double r, const std::vector<double>& sim_pm1) const {
        double s = 0.0;
        for (std::size_t i = 0; i < data.delta_si.size(); ++i) {
            double m_pm1 = (1.0 - r) * sim_pm1[i];
            double m_p1 = 1.0 - m_pm1;
            double d1 = m_pm1 - data.p_minus1[i];
            double d2 = m_p1 - data.p_plus1[i];
            s += d1 * d1 + d2 * d2;
        }
        return s;
    }

    double operator()(double omega, double r) const {
        // Smooth penalty outside the feasible box keeps the search inside
        // omega > 0, r in [0, 1).
        double omega_c = std::clamp(omega, kTau * 1e3, kTau * 2e6);
        double r_c = std::clamp(r, 0.0, 0.99);
        double penalty = 1e3 * ((omega - omega_c) / (kTau * 1e5)) * ((omega - omega_c) / (kTau * 1e5)) +
                         1e3 * (r - r_c) * (r - r_c);
        return ssr(r_c, model_pm1(omega_c)) + penalty;
    }
};

struct Simplex {
    std::array<std::array<double, 2>, 3> x;
    std::array<double, 3> f;
};

} // namespace

FitReport fit_sweep(const SweepData& data, double delta_sm, double t2_star,
                    const LockProfile& lp, double drive_duration) {
    const std::size_t n = data.delta_si.size();
    if (n < 5 || data.p_plus1.size() != n || data.p_minus1.size() != n)
        throw InvalidArgument("fit needs at least 5 detuning points with both populations");
    if (!std::is_sorted(data.delta_si.begin(), data.delta_si.end()))
        throw InvalidArgument("detunings must be sorted");

    double pm1_min = *std::min_element(data.p_minus1.begin(), data.p_minus1.end());
    double pm1_max = *std::max_element(data.p_minus1.begin(), data.p_minus1.end());
    if (!(pm1_max > pm1_min)) throw NumericError("degenerate data: no dip or peak");

    FitObjective obj{data, delta_sm, lp, lock_driven_sequence(t2_star, lp, drive_duration)};

    // Seed omega from the raw data width inverted on a coarse internal map;
    // fall back to mid-range when the data are too noisy for a clean width.
    double omega0 = kTau * 100e3;
    double baseline_data = plateau_baseline(data.p_minus1);
    double dp_data = pm1_max - baseline_data;
    std::vector<double> coarse;
    for (int khz = 20; khz <= 400; khz += 40) coarse.push_back(kTau * khz * 1e3);
    FwhmMap seed_map =
        fwhm_vs_omega_map(coarse, t2_star, delta_sm, lp, data.delta_si, drive_duration);
    try {
        double width = fwhm_of_curve(data.delta_si, data.p_minus1, baseline_data, Extremum::Peak);
        omega0 = invert_width_once(seed_map, width, true);
    } catch (const NumericError&) {
        // keep the fallback seed
    }
    // Seed r from the depth ratio against the model at the seed omega.
    double dp_model =
        interp_column(seed_map, seed_map.rows.size() - 1, omega0, &FwhmMapRow::dp_minus1);
    double r0 = (dp_model > 0) ? 1.0 - dp_data / dp_model : 0.0;
    r0 = std::clamp(r0, 0.0, 0.95);

    Simplex s;
    s.x = {{{omega0, r0}, {omega0 * 1.15, r0}, {omega0, std::min(0.97, r0 + 0.1)}}};
    for (int i = 0; i < 3; ++i) s.f[i] = obj(s.x[i][0], s.x[i][1]);

    const long max_evals = 10000;
    double omega_best = omega0, r_best = r0;
    // Nelder-Mead with standard reflection/expansion/contraction/shrink.
    while (true) {
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return s.f[a] < s.f[b]; });
        int best = order[0], mid = order[1], worst = order[2];

        double spread_omega = 0.0, spread_r = 0.0;
        for (int i = 0; i < 3; ++i) {
            spread_omega = std::max(spread_omega, std::abs(s.x[i][0] - s.x[best][0]));
            spread_r = std::max(spread_r, std::abs(s.x[i][1] - s.x[best][1]));
        }
        if (spread_omega <= 1e-6 * std::max(1.0, std::abs(s.x[best][0])) && spread_r <= 1e-6) {
            omega_best = s.x[best][0];
            r_best = s.x[best][1];
            break;
        }
        if (obj.evals > max_evals)
            throw NumericError("fit did not converge within 10000 evaluations");

        std::array<double, 2> centroid = {0.5 * (s.x[best][0] + s.x[mid][0]),
                                          0.5 * (s.x[best][1] + s.x[mid][1])};
        auto point = [&](double coef) {
            return std::array<double, 2>{centroid[0] + coef * (centroid[0] - s.x[worst][0]),
                                         centroid[1] + coef * (centroid[1] - s.x[worst][1])};
        };
        auto refl = point(1.0);
        double f_refl = obj(refl[0], refl[1]);
        if (f_refl < s.f[best]) {
            auto expd = point(2.0);
            double f_expd = obj(expd[0], expd[1]);
            if (f_expd < f_refl) {
                s.x[worst] = expd;
                s.f[worst] = f_expd;
            } else {
                s.x[worst] = refl;
                s.f[worst] = f_refl;
            }
        } else if (f_refl < s.f[mid]) {
            s.x[worst] = refl;
            s.f[worst] = f_refl;
        } else {
            auto contr = point(-0.5);
            double f_contr = obj(contr[0], contr[1]);
            if (f_contr < s.f[worst]) {
                s.x[worst] = contr;
                s.f[worst] = f_contr;
            } else {
                for (int i : {mid, worst}) {
                    s.x[i] = {0.5 * (s.x[i][0] + s.x[best][0]),
                              0.5 * (s.x[i][1] + s.x[best][1])};
                    s.f[i] = obj(s.x[i][0], s.x[i][1]);
                }
            }
        }
    }

    double omega_hat = std::clamp(omega_best, kTau * 1e3, kTau * 2e6);
    double r_hat = std::clamp(r_best, 0.0, 0.99);

    std::vector<double> sim = obj.model_pm1(omega_hat);
    double ssr_min = obj.ssr(r_hat, sim);

    // Covariance from the residual quadratic form: cov = 2 sigma^2 H^-1 with a
    // central-difference Hessian of the SSR surface.
    double h_omega = std::max(1e-4 * omega_hat, kTau * 10.0);
    double h_r = 1e-4;
    auto F = [&](double o, double r) { return obj(o, r); };
    double f0 = ssr_min;
    double f_po = F(omega_hat + h_omega, r_hat), f_mo = F(omega_hat - h_omega, r_hat);
    double f_pr = F(omega_hat, r_hat + h_r), f_mr = F(omega_hat, r_hat - h_r);
    double f_pp = F(omega_hat + h_omega, r_hat + h_r), f_mm = F(omega_hat - h_omega, r_hat - h_r);
    double h11 = (f_po - 2 * f0 + f_mo) / (h_omega * h_omega);
    double h22 = (f_pr - 2 * f0 + f_mr) / (h_r * h_r);
    double h12 = (f_pp - f_po - f_pr + 2 * f0 - f_mo - f_mr + f_mm) / (2 * h_omega * h_r);
    double det = h11 * h22 - h12 * h12;
    double sigma2 = ssr_min / std::max<double>(1, 2.0 * n - 2);
    double var_omega = 0.0, var_r = 0.0;
    if (det > 0 && h11 > 0 && h22 > 0) {
        var_omega = 2.0 * sigma2 * (h22 / det);
        var_r = 2.0 * sigma2 * (h11 / det);
    }

    FitReport report;
    report.omega_m = omega_hat;
    report.r = r_hat;
    report.omega_m_err = std::sqrt(std::max(0.0, var_omega));
    report.r_err = std::sqrt(std::max(0.0, var_r));
    report.residual_norm = std::sqrt(ssr_min / static_cast<double>(2 * n));

    double baseline_model = plateau_baseline(sim);
    try {
        report.fwhm = fwhm_of_curve(data.delta_si, sim, baseline_model, Extremum::Peak);
    } catch (const NumericError&) {
        report.fwhm = 0.0;
    }

    // Residuals comparable to the transfer signal itself mark the fit as
    // unreliable.
    double resid_pm1 = 0.0, signal = 0.0;
    double mean_pm1 = std::accumulate(data.p_minus1.begin(), data.p_minus1.end(), 0.0) /
                      static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = (1.0 - r_hat) * sim[i] - data.p_minus1[i];
        resid_pm1 += d * d;
        signal += (data.p_minus1[i] - mean_pm1) * (data.p_minus1[i] - mean_pm1);
    }
    report.low_confidence = signal <= 0 || std::sqrt(resid_pm1) >= 0.5 * std::sqrt(signal);
    return report;
}

} // namespace spinmech
