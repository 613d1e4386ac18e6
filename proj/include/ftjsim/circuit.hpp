#pragma once

#include <optional>
#include <vector>

#include "ftjsim/ftj.hpp"
#include "ftjsim/mosfet.hpp"
#include "ftjsim/trace.hpp"

namespace ftjsim {

struct PulseDef {
    double amplitude = 0.0;  // V
    double width = 0.0;      // s (plateau)
};

enum class ResetScheme { pl_negative_pulse, bl_positive };

/// Operating point and timing of the integrate-and-fire neuron. The write
/// cell transistors T1..T3 act as ideal switches driven by the phase
/// protocol; T4..T7 form the two tunable-threshold inverters.
struct CircuitConfig {
    double v_dd = 1.8;
    double v_read = 1.5;
    double v_p1 = 0.9;   // gate bias of the first inverter's PMOS load (T5)
    double v_p2 = 0.9;   // gate bias of the second inverter's PMOS load (T7)

    // v_bl < 0 selects the automatic value: inverter-1 threshold minus
    // v_bl_offset, per the high-gain-region placement rule.
    double v_bl = -1.0;
    double v_bl_offset = 0.028;

    double c_n1 = 5.0e-14;       // lump at node n1 beyond the FTJ itself [F]
    double t_precharge = 2.0e-6;
    double t_integrate = 100.0e-6;
    double t_event_min = 150.0e-6;

    PulseDef set_pulse{3.5, 10.0e-6};
    PulseDef reset_pulse{-5.0, 10.0e-6};
    ResetScheme reset_scheme = ResetScheme::pl_negative_pulse;
    double bl_write = 0.0;  // BL level held during PL-driven writes [V]
    double wl_on = 1.8;     // word-line level reported in traces [V]

    MosfetParams t1{MosPolarity::nmos};
    MosfetParams t2{MosPolarity::nmos};
    MosfetParams t3{MosPolarity::nmos};
    MosfetParams t4{MosPolarity::nmos};
    MosfetParams t5{MosPolarity::pmos, 0.45, 80e-6, 0.05};
    MosfetParams t6{MosPolarity::nmos};
    MosfetParams t7{MosPolarity::pmos, 0.45, 80e-6, 0.05};

    // fire_threshold < 0 selects v_dd/2
    double fire_threshold = -1.0;
    double fire_hysteresis = 0.010;

    double dt_write = 2.0e-7;  // nominal step in write phases [s]
    double dt_read = 1.0e-6;   // nominal step in read phases [s]
    double max_dv_node = 1.0e-3;  // accuracy bound on n1 per step [V]

    /// Checks timing and bias invariants (read field well under E_C, phase
    /// budget inside t_event_min, conducting PMOS loads). Throws
    /// std::invalid_argument on violation.
    void validate(const FtjParams& ftj) const;

    [[nodiscard]] double fire_level() const {
        return fire_threshold > 0.0 ? fire_threshold : 0.5 * v_dd;
    }
};

/// Transient simulator of the neuron of the 2T1C-plus-inverters cell.
/// Phases follow the operating protocol: writes drive the plate line with
/// T3 off; pre-charge pins n1 to V_BL; integration leaves n1 floating and
/// lets the FTJ leakage charge it.
class NeuronSim {
public:
    NeuronSim(const FtjParams& ftj, const CircuitConfig& cfg, bool record_trace = true);

    void reset_phase();
    void set_phase(double amplitude, double width);
    /// Pre-charge followed by integration; returns true if the output fired.
    bool read_phase();
    void idle_phase(double duration);

    [[nodiscard]] const CircuitTrace& trace() const { return trace_; }
    [[nodiscard]] const FtjState& device_state() const { return state_; }
    [[nodiscard]] double v_n1() const { return v_n1_; }
    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] double v_bl() const { return v_bl_; }
    [[nodiscard]] double inv1_threshold() const { return inv1_threshold_; }
    [[nodiscard]] double fire_time() const { return fire_time_; }

private:
    void write_pulse(PhaseTag tag, const PulseDef& pulse, bool drive_bl);
    void emit(PhaseTag tag, double v_pl, double v_bl_now, double v_wl,
              double i_ftj, int fire);
    [[nodiscard]] double eval_inv1(double v_in) const;
    [[nodiscard]] double eval_inv2(double v_in) const;
    [[nodiscard]] double solve_node(double dt) const;
    void commit_integrate_step(double dt, double v_new);

    FtjParams ftj_;
    CircuitConfig cfg_;
    FtjState state_;
    CircuitTrace trace_;
    bool record_;
    double t_ = 0.0;
    double v_n1_ = 0.0;
    double v_bl_ = 0.0;
    double inv1_threshold_ = 0.0;
    double fire_time_ = -1.0;
    bool fire_armed_ = false;
    bool fired_this_read_ = false;
};

struct NeuronRunResult {
    /// Set pulses applied up to and including the one whose read fired;
    /// empty if the pulse budget ran out.
    std::optional<int> pulses_before_fire;
    CircuitTrace trace;
    double v_bl = 0.0;
    double inv1_threshold = 0.0;
    double fire_time = -1.0;
};

/// Reset, then repeat [set -> pre-charge -> integrate], padding each event
/// cycle to t_event_min, until the first fire or n_max_pulses.
NeuronRunResult run_neuron(const FtjParams& ftj, const CircuitConfig& cfg,
                           int n_max_pulses, bool record_trace = true);

struct SweepResult {
    std::vector<double> amplitudes;
    std::vector<double> widths;
    /// counts[a][w]; no-fire cells hold n_max + 1.
    std::vector<std::vector<int>> counts;
    int n_max = 0;

    [[nodiscard]] std::string to_csv() const;
    static SweepResult from_csv(const std::string& text);
};

/// One independent neuron run per (amplitude, width) cell, each from a fresh
/// reset. Honors the FTJSIM_THREADS environment variable.
SweepResult sweep_pulses_to_fire(const FtjParams& ftj, const CircuitConfig& cfg,
                                 const std::vector<double>& amplitudes,
                                 const std::vector<double>& widths, int n_max_pulses);

}  // namespace ftjsim
