#pragma once

namespace ftjsim {

enum class MosPolarity { nmos, pmos };

/// Behavioral square-law transistor (level-1 with channel-length
/// modulation). v_th is the magnitude for both polarities.
struct MosfetParams {
    MosPolarity polarity = MosPolarity::nmos;
    double v_th = 0.45;      // V
    double beta = 200e-6;    // A/V^2
    double lambda = 0.05;    // 1/V

    void validate() const;
};

/// Drain current for terminal voltages referred to the source. For a PMOS
/// pass (v_gs, v_ds) as seen at its own terminals (both typically negative);
/// the returned current is the drain current with the usual sign (negative
/// for a conducting PMOS). The (1 + lambda*|v_ds|) factor multiplies both
/// regions so the triode/saturation boundary is continuous.
double mosfet_current(const MosfetParams& params, double v_gs, double v_ds);

/// DC output of the tunable-threshold inverter stage: NMOS driven by v_in,
/// PMOS load biased by v_p at the gate. Solves the current balance on the
/// output node by bisection to 0.1 mV; clamps to the rails when the balance
/// has no interior sign change.
double inverter_output(double v_in, double v_p, const MosfetParams& n,
                       const MosfetParams& p, double v_dd);

/// Input voltage at which the inverter output crosses `level` (defaults to
/// v_dd/2). Output is monotone non-increasing in v_in, so bisection applies.
double inverter_threshold(double v_p, const MosfetParams& n, const MosfetParams& p,
                          double v_dd, double level = -1.0);

}  // namespace ftjsim
