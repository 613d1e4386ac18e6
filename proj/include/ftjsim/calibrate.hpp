#pragma once

#include <string>
#include <vector>

#include "ftjsim/ftj.hpp"
#include "ftjsim/trace.hpp"

namespace ftjsim {

/// Time-ordered (t, V, I) samples of a measured or synthetic device trace.
/// The voltage column doubles as the piecewise-linear replay drive.
struct CalibrationData {
    std::vector<double> t;
    std::vector<double> v;
    std::vector<double> i;

    static CalibrationData from_device_trace(const DeviceTrace& trace);
};

struct FitOptions {
    /// Subset of {v_p0, dv_p, r_a0, e_c, tau_p, alpha_e} to optimize.
    std::vector<std::string> free_params;
    int max_sweeps = 40;
    double sweep_rel_tol = 1e-9;     // stop when a sweep improves less than this
    double line_tol = 1e-6;          // golden-section relative width
    double bracket_lo = 0.5;         // search window per coordinate, x current
    double bracket_hi = 2.0;
    double current_floor = 1e-9;     // A, weight floor for the relative residual
    /// Extra line search along each sweep's net displacement. The leakage
    /// parameters are strongly correlated through the ON-state data, and
    /// plain per-coordinate steps crawl along that valley.
    bool pattern_acceleration = true;
};

struct FitResult {
    FtjParams params;
    double initial_residual = 0.0;
    double final_residual = 0.0;
    int sweeps = 0;
};

/// Residual of a candidate parameter set against the data: sum of squared
/// current errors, each normalized by |I_ref| + floor so the leakage-only
/// regions carry weight comparable to the switching peak.
double calibration_residual(const FtjParams& candidate, const CalibrationData& data,
                            double current_floor);

/// Cyclic coordinate descent with a golden-section line search on each free
/// parameter. Deterministic for identical inputs. Throws std::runtime_error
/// if the residual turns non-finite.
FitResult calibrate(const FtjParams& start, const CalibrationData& data,
                    const FitOptions& options);

}  // namespace ftjsim
