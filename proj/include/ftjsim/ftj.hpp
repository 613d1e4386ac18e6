#pragma once

namespace ftjsim {

enum class SweepDirection { ascending, descending };

/// Compact-model constants of the HZO/Al2O3 tunnel-junction stack.
/// All values are SI; defaults are the calibrated device.
struct FtjParams {
    double e_c = 3.3e8;        // effective coercive field [V/m]
    double k_init = 0.5;       // initial branch scaling factor
    double p_sat = 0.20;       // saturation polarization [C/m^2]
    double p_r = 0.199997;     // remanent polarization [C/m^2]
    double tau_p = 1.0e-5;     // switching time constant at |E| = E_C [s]
    double alpha_e = 0.25;     // kinetic field-broadening exponent
    double a_tot = 3.14e-8;    // device area [m^2]
    double r_a0 = 1.1e-4;      // leakage prefactor density [A/m^2]
    double v_p0 = 0.36;        // leakage voltage scale at zero polarization [V]
    double dv_p = 0.06;        // polarization modulation of the leakage scale [V]
    double t_fe = 1.0e-8;      // ferroelectric layer thickness [m]
    double c_de = 2.0e-14;     // parallel dielectric (non-FE phase) capacitance [F]
    bool minor_loop_tracking = true;  // re-solve (k, p_off) at field reversals

    /// Throws std::domain_error / std::invalid_argument on nonphysical values.
    void validate() const;

    /// Effective leakage prefactor G0 = r_a0 * a_tot [A].
    [[nodiscard]] double leak_prefactor() const { return r_a0 * a_tot; }
};

/// Mutable hysteresis state advanced by step(); plain value type, copyable
/// for trial evaluations inside implicit solvers.
struct FtjState {
    double p_dyn = 0.0;    // current dynamic polarization [C/m^2]
    double p_old = 0.0;    // polarization at the previous accepted step
    double k_loop = 1.0;   // current branch scaling factor
    double p_off = 0.0;    // current branch offset [C/m^2]
    SweepDirection direction = SweepDirection::ascending;
    double e_turn = 0.0;   // field at the last direction reversal [V/m]
    double p_turn = 0.0;   // polarization at the last reversal [C/m^2]
    double v_prev = 0.0;   // terminal voltage at the previous step [V]
};

/// Branch currents of one transient step, plus their sum.
struct StepCurrents {
    double i_pol = 0.0;
    double i_leak = 0.0;
    double i_disp = 0.0;
    double i_total = 0.0;
};

/// Tanh broadening field: delta = E_C / ln((1 + P_r/P_sat)/(1 - P_r/P_sat)).
/// By construction tanh(E_C / (2 delta)) == P_r/P_sat.
double delta_broadening(const FtjParams& p);

/// Branch polarization k*P_sat*tanh((E -+ E_C)/(2 delta)) + p_off, with
/// -E_C on the ascending branch and +E_C on the descending one.
double asymptotic_polarization(double e_eff, SweepDirection dir, double k_loop,
                               double p_off, const FtjParams& p);

/// Field-dependent switching time constant (strictly positive, may be
/// astronomically large at low field; the exponent is clamped so the
/// result stays finite).
double tau_pe(double e_eff, const FtjParams& p);

/// One backward-Euler relaxation step of the polarization toward the branch
/// asymptote at e_eff; p_old takes the pre-step p_dyn. Returns the new p_dyn.
double update_polarization(FtjState& s, double e_eff, double dt, const FtjParams& p);

/// Re-solves (k_loop, p_off) so the branch for the *current* direction of s
/// passes through (e_turn, p_turn) and saturates at the full +-P_sat
/// endpoint. k_loop is clamped to [1e-6, 1] in degenerate cases.
void reversal_rescale(FtjState& s, const FtjParams& p);

/// I_pol = (p_new - p_old)/dt * A_tot.
double polarization_current(double p_new, double p_old, double dt, const FtjParams& p);

/// I_leak = G0 * (exp(V / V_PE) - 1) with V_PE = V_P0 - dV_P * p/P_sat.
double leakage_current(double v, double p_dyn, const FtjParams& p);

/// Fully reset OFF state consistent with the initial ascending branch
/// (k = k_init, p_off = 0, evaluated at zero field).
FtjState initial_state(const FtjParams& p);

/// Advances the device one step under terminal voltage v_ftj: converts to
/// field, performs the reversal bookkeeping, relaxes the polarization and
/// returns the branch currents (displacement current from the finite
/// difference of the terminal voltage).
StepCurrents step(FtjState& s, double v_ftj, double dt, const FtjParams& p);

}  // namespace ftjsim
