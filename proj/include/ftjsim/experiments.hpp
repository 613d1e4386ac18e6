#pragma once

#include <string>
#include <vector>

#include "ftjsim/circuit.hpp"
#include "ftjsim/config.hpp"
#include "ftjsim/ftj.hpp"
#include "ftjsim/trace.hpp"

namespace ftjsim {

struct HysteresisResult {
    DeviceTrace trace;
    double p_remanent_pos = 0.0;  // P at V = 0 on the final descending pass [C/m^2]
    double p_remanent_neg = 0.0;  // P at V = 0 on the final ascending pass [C/m^2]
    double v_coercive_pos = 0.0;  // V at P = 0 on the final ascending pass [V]
    double v_coercive_neg = 0.0;  // V at P = 0 on the final descending pass [V]
};

/// Quasi-static triangular sweep; remanent and coercive points are read off
/// the last full loop by linear interpolation between trace rows.
HysteresisResult run_hysteresis(const FtjParams& ftj, const ExperimentConfig& exp);

struct PundResult {
    DeviceTrace trace;
    double peak_current = 0.0;      // max |i_total| over the four pulses [A]
    double q_p = 0.0;               // integrated current over the P pulse [C]
    double q_u = 0.0;               // integrated current over the U pulse [C]
    double p_minus_u_charge = 0.0;  // switching charge estimate Q_P - Q_U [C]
    double dp_p = 0.0;              // polarization swing during P [C/m^2]
    double dp_u = 0.0;              // polarization swing during U [C/m^2]
};

/// Trapezoidal P-U-N-D train; an optional unmeasured preset pulse first puts
/// the device into the fully reset state so the P pulse carries the full
/// switching charge.
PundResult run_pund(const FtjParams& ftj, const ExperimentConfig& exp);

struct AccumulatePoint {
    int n_pulses = 0;
    double normalized_polarization = 0.0;
};

struct AccumulateSeries {
    double amplitude = 0.0;  // V
    double width = 0.0;      // s
    std::vector<AccumulatePoint> points;
};

struct AccumulateResult {
    std::vector<AccumulateSeries> series;

    [[nodiscard]] std::string to_csv() const;
    static AccumulateResult from_csv(const std::string& text);
};

/// Gradual-switching protocol: per (amplitude, width, n) cell, start from
/// the back-switched state, apply the n-pulse train, then measure the
/// switched charge with a -5 V/500 us triangular back-switch minus the
/// non-switching charge of a second back-switch, normalized to a
/// full-switching run. Sweeps the amplitude list at the fixed width, and
/// the width list (when given) at the first amplitude.
AccumulateResult run_accumulate(const FtjParams& ftj, const ExperimentConfig& exp);

NeuronRunResult run_neuron_experiment(const FtjParams& ftj, const CircuitConfig& cfg,
                                      const ExperimentConfig& exp);

SweepResult run_sweep_experiment(const FtjParams& ftj, const CircuitConfig& cfg,
                                 const ExperimentConfig& exp);

}  // namespace ftjsim
