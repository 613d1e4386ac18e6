#include "ftjsim/device_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace ftjsim {

namespace {

// One step from (t0, state.v_prev) to (t1, v1), bisecting the interval while
// the polarization swing per piece exceeds the accuracy bound.
void advance(FtjState& state, double t0, double t1, double v1, int depth,
             const FtjParams& params, const DeviceSimOptions& opt, const StepSink& sink) {
    FtjState trial = state;
    const StepCurrents currents = step(trial, v1, t1 - t0, params);
    if (std::abs(trial.p_dyn - state.p_dyn) > opt.max_dp_fraction * params.p_sat) {
        if (depth >= opt.max_halvings) {
            throw std::runtime_error("run_pwl: step size collapsed at t=" + std::to_string(t0));
        }
        const double tm = 0.5 * (t0 + t1);
        const double vm = 0.5 * (state.v_prev + v1);  // drive is linear on the interval
        advance(state, t0, tm, vm, depth + 1, params, opt, sink);
        advance(state, tm, t1, v1, depth + 1, params, opt, sink);
        return;
    }
    state = trial;
    if (sink) {
        sink(t1, v1, state, currents);
    }
}

}  // namespace

void run_pwl(FtjState& state, const Schedule& drive, const FtjParams& params,
             const DeviceSimOptions& opt, const StepSink& sink) {
    if (drive.size() < 2) {
        return;
    }
    if (!(opt.dt > 0.0)) {
        throw std::invalid_argument("run_pwl: dt must be > 0");
    }
    const auto& bt = drive.times();
    const auto& bv = drive.values();
    for (std::size_t seg = 0; seg + 1 < bt.size(); ++seg) {
        const double t0 = bt[seg];
        const double t1 = bt[seg + 1];
        const double v0 = bv[seg];
        const double v1 = bv[seg + 1];
        // uniform sub-grid per segment: lands on the breakpoint exactly and
        // never produces sliver steps from accumulated rounding
        const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / opt.dt - 1e-9)));
        double t = t0;
        for (int i = 1; i <= n; ++i) {
            const double t_next = (i == n) ? t1 : t0 + (t1 - t0) * i / n;
            const double v_next = (i == n) ? v1 : v0 + (v1 - v0) * i / n;
            advance(state, t, t_next, v_next, 0, params, opt, sink);
            t = t_next;
        }
    }
}

void run_schedule(FtjState& state, const Schedule& drive, const FtjParams& params,
                  const DeviceSimOptions& opt, DeviceTrace* trace) {
    StepSink sink;
    if (opt.record && trace != nullptr) {
        sink = [trace, &params](double t, double v, const FtjState& s, const StepCurrents& c) {
            trace->rows.push_back({t, v, v / params.t_fe, s.p_dyn, c.i_pol, c.i_leak,
                                   c.i_disp, c.i_total});
        };
    }
    run_pwl(state, drive, params, opt, sink);
}

}  // namespace ftjsim
