#include "ftjsim/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ftjsim {

namespace {

double* param_slot(FtjParams& p, const std::string& name) {
    if (name == "v_p0") return &p.v_p0;
    if (name == "dv_p") return &p.dv_p;
    if (name == "r_a0") return &p.r_a0;
    if (name == "e_c") return &p.e_c;
    if (name == "tau_p") return &p.tau_p;
    if (name == "alpha_e") return &p.alpha_e;
    throw std::invalid_argument("calibrate: unknown free parameter '" + name + "'");
}

// One search coordinate: either a bare parameter or a linear combination.
struct SearchCoordinate {
    std::function<double(const FtjParams&)> get;
    std::function<void(FtjParams&, double)> set;
};

// The leakage scales enter the current only through V_PE = v_p0 -+ dv_p at
// the two polarization extremes, which makes (v_p0, dv_p) almost perfectly
// correlated in the data. When both are free, search the decoupled pair
// (v_p0 - dv_p, v_p0 + dv_p) instead of the raw parameters.
std::vector<SearchCoordinate> build_coordinates(const std::vector<std::string>& names) {
    std::vector<SearchCoordinate> coords;
    const bool pair_leak_scales =
        std::find(names.begin(), names.end(), std::string("v_p0")) != names.end() &&
        std::find(names.begin(), names.end(), std::string("dv_p")) != names.end();
    bool pair_emitted = false;
    for (const auto& name : names) {
        if (pair_leak_scales && (name == "v_p0" || name == "dv_p")) {
            if (pair_emitted) {
                continue;
            }
            pair_emitted = true;
            coords.push_back({[](const FtjParams& p) { return p.v_p0 - p.dv_p; },
                              [](FtjParams& p, double x) {
                                  const double sum = p.v_p0 + p.dv_p;
                                  p.v_p0 = 0.5 * (sum + x);
                                  p.dv_p = 0.5 * (sum - x);
                              }});
            coords.push_back({[](const FtjParams& p) { return p.v_p0 + p.dv_p; },
                              [](FtjParams& p, double x) {
                                  const double diff = p.v_p0 - p.dv_p;
                                  p.v_p0 = 0.5 * (x + diff);
                                  p.dv_p = 0.5 * (x - diff);
                              }});
            continue;
        }
        coords.push_back({[name](const FtjParams& p) {
                              FtjParams copy = p;
                              return *param_slot(copy, name);
                          },
                          [name](FtjParams& p, double x) { *param_slot(p, name) = x; }});
    }
    return coords;
}

// Golden-section minimization on [a, b]; f is unimodal enough in practice
// and the bracket is narrow. Returns the argmin.
double golden_section(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while ((b - a) > rel_tol * std::abs(b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CalibrationData CalibrationData::from_device_trace(const DeviceTrace& trace) {
    CalibrationData data;
    data.t.reserve(trace.rows.size());
    data.v.reserve(trace.rows.size());
    data.i.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        data.t.push_back(row.t);
        data.v.push_back(row.v);
        data.i.push_back(row.i_total);
    }
    return data;
}

double calibration_residual(const FtjParams& candidate, const CalibrationData& data,
                            double current_floor) {
    if (data.t.size() < 2) {
        throw std::invalid_argument("calibration_residual: needs at least two samples");
    }
    candidate.validate();
    FtjState state = initial_state(candidate);
    double residual = 0.0;
    double t_prev = data.t.front() > 0.0 ? 0.0 : data.t.front() - 1e-9;
    // Replay the recorded drive sample by sample; the samples are the
    // accepted steps of the generating run, so no extra refinement is needed
    // for a matching candidate.
    for (std::size_t k = 0; k < data.t.size(); ++k) {
        const double dt = data.t[k] - t_prev;
        if (!(dt > 0.0)) {
            throw std::invalid_argument("calibration_residual: time column must increase");
        }
        const StepCurrents c = step(state, data.v[k], dt, candidate);
        const double err = (c.i_total - data.i[k]) / (std::abs(data.i[k]) + current_floor);
        residual += err * err;
        t_prev = data.t[k];
    }
    if (!std::isfinite(residual)) {
        throw std::runtime_error("calibration_residual: non-finite residual");
    }
    return residual;
}

FitResult calibrate(const FtjParams& start, const CalibrationData& data,
                    const FitOptions& options) {
    FitResult result;
    result.params = start;
    result.initial_residual = calibration_residual(start, data, options.current_floor);
    result.final_residual = result.initial_residual;
    if (options.free_params.empty()) {
        return result;
    }

    const auto safe_residual = [&](const FtjParams& candidate) {
        try {
            return calibration_residual(candidate, data, options.current_floor);
        } catch (const std::invalid_argument&) {
            return 1e300;  // outside the valid domain, e.g. dv_p >= v_p0
        }
    };

    const std::vector<SearchCoordinate> coords = build_coordinates(options.free_params);

    double best = result.initial_residual;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        const double before = best;
        const FtjParams sweep_start = result.params;

        for (const auto& coord : coords) {
            FtjParams trial = result.params;
            const double center = coord.get(trial);
            const auto line = [&](double x) {
                coord.set(trial, x);
                return safe_residual(trial);
            };
            const double x_best = golden_section(line, options.bracket_lo * center,
                                                 options.bracket_hi * center,
                                                 options.line_tol);
            const double f_best = line(x_best);
            if (f_best < best) {
                best = f_best;
                coord.set(result.params, x_best);
            }
        }

        if (options.pattern_acceleration) {
            // Pattern move along the sweep displacement: walks valley floors
            // that axis-aligned steps only zigzag across.
            std::vector<double> direction;
            direction.reserve(coords.size());
            bool moved = false;
            for (const auto& coord : coords) {
                const double d = coord.get(result.params) - coord.get(sweep_start);
                direction.push_back(d);
                moved = moved || d != 0.0;
            }
            if (moved) {
                const FtjParams base = result.params;
                const auto along = [&](double lambda) {
                    FtjParams trial = base;
                    for (std::size_t k = 0; k < coords.size(); ++k) {
                        coords[k].set(trial, coords[k].get(trial) + lambda * direction[k]);
                    }
                    return safe_residual(trial);
                };
                double hi = 1.0;
                double f_hi = along(hi);
                while (hi < 1e6) {  // expand while the valley keeps descending
                    const double f_next = along(2.0 * hi);
                    if (f_next >= f_hi) {
                        break;
                    }
                    hi *= 2.0;
                    f_hi = f_next;
                }
                const double lambda = golden_section(along, 0.0, 2.0 * hi, options.line_tol);
                const double f_best = along(lambda);
                if (f_best < best) {
                    best = f_best;
                    for (std::size_t k = 0; k < coords.size(); ++k) {
                        coords[k].set(result.params,
                                      coords[k].get(result.params) + lambda * direction[k]);
                    }
                }
            }
        }

        result.sweeps = sweep + 1;
        if (before - best <= options.sweep_rel_tol * std::max(before, 1e-300)) {
            break;
        }
    }
    result.final_residual = best;
    return result;
}

}  // namespace ftjsim
