#pragma once

#include <functional>

#include "ftjsim/ftj.hpp"
#include "ftjsim/trace.hpp"
#include "ftjsim/waveform.hpp"

namespace ftjsim {

/// Fixed nominal step with automatic halving; a step is rejected while the
/// polarization moves by more than max_dp_fraction * P_sat.
struct DeviceSimOptions {
    double dt = 1.0e-6;
    double max_dp_fraction = 0.01;
    int max_halvings = 24;
    bool record = true;  // sweeps can skip trace rows
};

/// Called once per accepted step with the schedule time, the applied device
/// voltage, the post-step state and the step currents.
using StepSink = std::function<void(double t, double v, const FtjState&, const StepCurrents&)>;

/// Advances state along the piecewise-linear drive, landing on every
/// breakpoint exactly. Throws std::runtime_error if the step size collapses.
void run_pwl(FtjState& state, const Schedule& drive, const FtjParams& params,
             const DeviceSimOptions& opt, const StepSink& sink);

/// run_pwl with the standard device trace as the sink.
void run_schedule(FtjState& state, const Schedule& drive, const FtjParams& params,
                  const DeviceSimOptions& opt, DeviceTrace* trace);

}  // namespace ftjsim
