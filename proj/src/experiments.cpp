#include "ftjsim/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ftjsim/device_sim.hpp"
#include "ftjsim/waveform.hpp"

namespace ftjsim {

namespace {

// Last crossing of v through zero in the stated direction; returns the
// linearly interpolated p there, or NaN if the loop never crosses.
double remanence_readoff(const DeviceTrace& trace, bool descending) {
    double p = std::nan("");
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        const auto& a = trace.rows[i - 1];
        const auto& b = trace.rows[i];
        const bool cross = descending ? (a.v > 0.0 && b.v <= 0.0) : (a.v < 0.0 && b.v >= 0.0);
        if (cross) {
            const double w = (0.0 - a.v) / (b.v - a.v);
            p = a.p_dyn + w * (b.p_dyn - a.p_dyn);
        }
    }
    return p;
}

// Last crossing of p through zero; returns the interpolated v there.
double coercive_readoff(const DeviceTrace& trace, bool ascending) {
    double v = std::nan("");
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        const auto& a = trace.rows[i - 1];
        const auto& b = trace.rows[i];
        const bool cross = ascending ? (a.p_dyn < 0.0 && b.p_dyn >= 0.0)
                                     : (a.p_dyn > 0.0 && b.p_dyn <= 0.0);
        if (cross) {
            const double w = (0.0 - a.p_dyn) / (b.p_dyn - a.p_dyn);
            v = a.v + w * (b.v - a.v);
        }
    }
    return v;
}

}  // namespace

HysteresisResult run_hysteresis(const FtjParams& ftj, const ExperimentConfig& exp) {
    ftj.validate();
    if (exp.hyst_cycles < 1 || !(exp.hyst_ramp_time > 0.0)) {
        throw std::invalid_argument("run_hysteresis: cycles >= 1 and ramp_time > 0 required");
    }
    const double a = exp.hyst_amplitude;
    const double rt = exp.hyst_ramp_time;

    Schedule drive;
    drive.append(0.0, 0.0);
    double t = 0.0;
    for (int c = 0; c < exp.hyst_cycles; ++c) {
        if (c == 0) {
            t += rt;
            drive.append(t, a);
        } else {
            t += 2.0 * rt;
            drive.append(t, a);
        }
        t += 2.0 * rt;
        drive.append(t, -a);
    }
    t += rt;
    drive.append(t, 0.0);

    HysteresisResult result;
    FtjState state = initial_state(ftj);
    DeviceSimOptions opt;
    opt.dt = exp.hyst_dt;
    run_schedule(state, drive, ftj, opt, &result.trace);

    result.p_remanent_pos = remanence_readoff(result.trace, true);
    result.p_remanent_neg = remanence_readoff(result.trace, false);
    result.v_coercive_pos = coercive_readoff(result.trace, true);
    result.v_coercive_neg = coercive_readoff(result.trace, false);
    return result;
}

PundResult run_pund(const FtjParams& ftj, const ExperimentConfig& exp) {
    ftj.validate();
    const double w = exp.pund_width;
    const double gap = exp.pund_gap < 0.0 ? w : exp.pund_gap;
    const double rise = exp.pund_rise_fraction * w;
    const double plateau = w - 2.0 * rise;

    Schedule drive;
    double t_pund0 = 0.0;
    if (exp.pund_preset) {
        // unmeasured reset pulse so P starts from the fully switched-off state
        drive.append(0.0, 0.0);
        drive.append(rise, -exp.pund_amplitude);
        drive.append(rise + plateau, -exp.pund_amplitude);
        drive.append(w, 0.0);
        drive.append(w + gap, 0.0);
        t_pund0 = w + gap;
    }
    drive = drive.then(pund_sequence(exp.pund_amplitude, w, exp.pund_rise_fraction, gap));

    PundResult result;
    FtjState state = initial_state(ftj);
    DeviceSimOptions opt;
    opt.dt = exp.pund_dt;
    run_schedule(state, drive, ftj, opt, &result.trace);

    // Window k covers pulse k and its relaxation gap.
    const auto window_of = [&](double time) -> int {
        if (time <= t_pund0) {
            return -1;
        }
        const int k = static_cast<int>((time - t_pund0 - 1e-15) / (w + gap));
        return k <= 3 ? k : -1;
    };

    double q[4] = {0.0, 0.0, 0.0, 0.0};
    double p_enter[4];
    double p_exit[4];
    bool entered[4] = {false, false, false, false};
    double t_prev = 0.0;
    double p_prev = result.trace.rows.empty() ? 0.0 : result.trace.rows.front().p_dyn;
    for (const auto& row : result.trace.rows) {
        const int win = window_of(row.t);
        if (win >= 0) {
            q[win] += row.i_total * (row.t - t_prev);
            result.peak_current = std::max(result.peak_current, std::abs(row.i_total));
            if (!entered[win]) {
                entered[win] = true;
                p_enter[win] = p_prev;
            }
            p_exit[win] = row.p_dyn;
        }
        t_prev = row.t;
        p_prev = row.p_dyn;
    }
    result.q_p = q[0];
    result.q_u = q[1];
    result.p_minus_u_charge = q[0] - q[1];
    result.dp_p = entered[0] ? p_exit[0] - p_enter[0] : 0.0;
    result.dp_u = entered[1] ? p_exit[1] - p_enter[1] : 0.0;
    return result;
}

namespace {

// Integrated device current over one drive section, advancing the state.
double integrate_charge(FtjState& state, const Schedule& drive, const FtjParams& ftj,
                        double dt) {
    DeviceSimOptions opt;
    opt.dt = dt;
    double q = 0.0;
    double t_prev = drive.start_time();
    run_pwl(state, drive, ftj, opt,
            [&](double t, double, const FtjState&, const StepCurrents& c) {
                q += c.i_total * (t - t_prev);
                t_prev = t;
            });
    return q;
}

void run_silent(FtjState& state, const Schedule& drive, const FtjParams& ftj, double dt) {
    DeviceSimOptions opt;
    opt.dt = dt;
    run_pwl(state, drive, ftj, opt, StepSink{});
}

Schedule rest_gap(double duration) {
    Schedule s;
    s.append(0.0, 0.0);
    s.append(duration, 0.0);
    return s;
}

// Back-switch pair: switching charge magnitude with the non-switching
// background removed. The switching current of the negative-going pulse is
// negative, so the first integral lies below the background one.
double backswitch_measurement(FtjState& state, const FtjParams& ftj, double dt) {
    const Schedule back = triangular_pulse(-5.0, 500e-6);
    const double q1 = integrate_charge(state, back, ftj, dt);
    run_silent(state, rest_gap(10e-6), ftj, dt);
    const double q2 = integrate_charge(state, back, ftj, dt);
    run_silent(state, rest_gap(10e-6), ftj, dt);
    return q2 - q1;
}

}  // namespace

AccumulateResult run_accumulate(const FtjParams& ftj, const ExperimentConfig& exp) {
    ftj.validate();
    if (exp.acc_amplitudes.empty()) {
        throw std::invalid_argument("run_accumulate: amplitude list must not be empty");
    }
    if (exp.acc_max_exponent < 0 || exp.acc_max_exponent > 20) {
        throw std::invalid_argument("run_accumulate: acc_max_exponent out of range");
    }

    // Full-switching reference: complete set with a +5 V / 500 us triangle.
    double q_full = 0.0;
    {
        FtjState state = initial_state(ftj);
        run_silent(state, triangular_pulse(-5.0, 500e-6), ftj, exp.acc_dt);
        run_silent(state, rest_gap(10e-6), ftj, exp.acc_dt);
        run_silent(state, triangular_pulse(5.0, 500e-6), ftj, exp.acc_dt);
        run_silent(state, rest_gap(10e-6), ftj, exp.acc_dt);
        q_full = backswitch_measurement(state, ftj, exp.acc_dt);
    }
    if (!(q_full > 0.0)) {
        throw std::runtime_error("run_accumulate: full-switching reference charge not positive");
    }

    std::vector<std::pair<double, double>> variants;
    for (const double amplitude : exp.acc_amplitudes) {
        variants.emplace_back(amplitude, exp.acc_width);
    }
    for (const double width : exp.acc_widths) {
        variants.emplace_back(exp.acc_amplitudes.front(), width);
    }

    AccumulateResult result;
    for (const auto& [amplitude, width] : variants) {
        AccumulateSeries series;
        series.amplitude = amplitude;
        series.width = width;
        for (int e = 0; e <= exp.acc_max_exponent; ++e) {
            const int n = 1 << e;
            FtjState state = initial_state(ftj);
            run_silent(state, triangular_pulse(-5.0, 500e-6), ftj, exp.acc_dt);
            run_silent(state, rest_gap(10e-6), ftj, exp.acc_dt);
            PulseSpec spec;
            spec.amplitude = amplitude;
            spec.width = width;
            run_silent(state, pulse_train(spec, n, exp.acc_gap), ftj, exp.acc_dt);
            run_silent(state, rest_gap(10e-6), ftj, exp.acc_dt);
            const double q_sw = backswitch_measurement(state, ftj, exp.acc_dt);
            series.points.push_back({n, q_sw / q_full});
        }
        result.series.push_back(std::move(series));
    }
    return result;
}

std::string AccumulateResult::to_csv() const {
    std::string out = "amplitude_v,width_s,n,normalized_p\n";
    for (const auto& s : series) {
        for (const auto& point : s.points) {
            out += format_double(s.amplitude) + "," + format_double(s.width) + "," +
                   std::to_string(point.n_pulses) + "," +
                   format_double(point.normalized_polarization) + "\n";
        }
    }
    return out;
}

AccumulateResult AccumulateResult::from_csv(const std::string& text) {
    AccumulateResult result;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("amplitude_v", 0) == 0) {
            continue;
        }
        double amplitude = 0.0;
        double width = 0.0;
        int n = 0;
        double value = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%d,%lf", &amplitude, &width, &n, &value) != 4) {
            throw std::runtime_error("AccumulateResult::from_csv: bad row '" + line + "'");
        }
        if (result.series.empty() || result.series.back().amplitude != amplitude ||
            result.series.back().width != width) {
            result.series.push_back({amplitude, width, {}});
        }
        result.series.back().points.push_back({n, value});
    }
    return result;
}

NeuronRunResult run_neuron_experiment(const FtjParams& ftj, const CircuitConfig& cfg,
                                      const ExperimentConfig& exp) {
    return run_neuron(ftj, cfg, exp.n_max_pulses, true);
}

SweepResult run_sweep_experiment(const FtjParams& ftj, const CircuitConfig& cfg,
                                 const ExperimentConfig& exp) {
    return sweep_pulses_to_fire(ftj, cfg, exp.sweep_amplitudes, exp.sweep_widths,
                                exp.n_max_pulses);
}

}  // namespace ftjsim
