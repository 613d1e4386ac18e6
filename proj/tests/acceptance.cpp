// Acceptance suite for the calibrated device model and the neuron circuit:
// one PASS/FAIL line per criterion, nonzero exit code if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ftjsim/calibrate.hpp"
#include "ftjsim/circuit.hpp"
#include "ftjsim/device_sim.hpp"
#include "ftjsim/experiments.hpp"
#include "ftjsim/mosfet.hpp"
#include "ftjsim/waveform.hpp"

using namespace ftjsim;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int index, std::string title)
        : index_(index), title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& detail) {
        ok_ = ok_ && ok;
        if (!ok) {
            details_ += "\n      FAILED: " + detail;
        }
    }

    void expect_runtime_below(double seconds) { budget_ = seconds; }

    ~Criterion() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (budget_ > 0.0 && elapsed > budget_) {
            ok_ = false;
            details_ += "\n      FAILED: runtime " + std::to_string(elapsed) + " s over budget " +
                        std::to_string(budget_) + " s";
        }
        std::printf("[%s] criterion %d: %s (%.2f s)%s\n", ok_ ? "PASS" : "FAIL", index_,
                    title_.c_str(), elapsed, details_.c_str());
        if (!ok_) {
            ++g_failures;
        }
    }

private:
    int index_;
    std::string title_;
    std::chrono::steady_clock::time_point start_;
    double budget_ = 0.0;
    bool ok_ = true;
    std::string details_;
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

void criterion_1_remanence() {
    Criterion c(1, "saturated-loop remanence at +-5 V");
    c.expect_runtime_below(5.0);
    const FtjParams ftj;
    const ExperimentConfig exp;
    const HysteresisResult hyst = run_hysteresis(ftj, exp);
    const double target = ftj.p_r;
    c.check(std::abs(std::abs(hyst.p_remanent_pos) - target) <= 0.01 * target,
            "P(V=0) descending = " + num(hyst.p_remanent_pos) + " C/m^2 vs " + num(target));
    c.check(std::abs(std::abs(hyst.p_remanent_neg) - target) <= 0.01 * target,
            "P(V=0) ascending = " + num(hyst.p_remanent_neg) + " C/m^2 vs -" + num(target));
}

void criterion_2_pund() {
    Criterion c(2, "PUND peak current and P-U switching charge");
    c.expect_runtime_below(5.0);
    const FtjParams ftj;
    const ExperimentConfig exp;
    const PundResult pund = run_pund(ftj, exp);
    const double peak_target = 2.1e-3;
    c.check(pund.peak_current >= 0.7 * peak_target && pund.peak_current <= 1.3 * peak_target,
            "peak = " + num(pund.peak_current) + " A vs 2.1 mA +-30%");
    const double q_target = 2.0 * ftj.p_r * ftj.a_tot;
    c.check(std::abs(pund.p_minus_u_charge - q_target) <= 0.05 * q_target,
            "P-U = " + num(pund.p_minus_u_charge) + " C vs " + num(q_target) + " +-5%");
}

void criterion_3_backward_euler() {
    Criterion c(3, "constant-field relaxation against the analytic exponential");
    c.expect_runtime_below(1.0);
    const FtjParams ftj;
    // At E = E_C the ascending asymptote is zero and tau_pE = tau_p: relax
    // p0 toward 0 over one time constant.
    const double p0 = -0.1;
    const auto rel_error = [&](int n_steps) {
        FtjState s;
        s.direction = SweepDirection::ascending;
        s.k_loop = 1.0;
        s.p_off = 0.0;
        s.p_dyn = s.p_old = p0;
        const double dt = ftj.tau_p / n_steps;
        for (int i = 0; i < n_steps; ++i) {
            update_polarization(s, ftj.e_c, dt, ftj);
        }
        return std::abs(s.p_dyn - p0 * std::exp(-1.0)) / std::abs(p0);
    };
    const double e2 = rel_error(100);
    const double e3 = rel_error(1000);
    const double e4 = rel_error(10000);
    c.check(e2 < 0.01, "error at dt = tau/100 is " + num(e2));
    const double r32 = e2 / e3;
    const double r43 = e3 / e4;
    c.check(r32 > 7.0 && r32 < 13.0, "decade ratio tau/100 -> tau/1000 is " + num(r32));
    c.check(r43 > 7.0 && r43 < 13.0, "decade ratio tau/1000 -> tau/10000 is " + num(r43));
}

void criterion_4_accumulation() {
    Criterion c(4, "accumulative switching at 4 V and the 3 V ordering");
    c.expect_runtime_below(30.0);
    const FtjParams ftj;
    ExperimentConfig exp;
    exp.acc_amplitudes = {3.0, 4.0};
    exp.acc_width = 10e-6;
    exp.acc_max_exponent = 9;  // n = 1 ... 512
    const AccumulateResult acc = run_accumulate(ftj, exp);
    const auto& at3 = acc.series[0].points;
    const auto& at4 = acc.series[1].points;

    bool monotone = true;
    for (std::size_t i = 1; i < at4.size(); ++i) {
        monotone = monotone &&
                   at4[i].normalized_polarization >= at4[i - 1].normalized_polarization - 1e-9;
    }
    for (std::size_t i = 1; i < at3.size(); ++i) {
        monotone = monotone &&
                   at3[i].normalized_polarization >= at3[i - 1].normalized_polarization - 1e-9;
    }
    c.check(monotone, "normalized polarization not monotone in n");
    c.check(at4.back().normalized_polarization >= 0.9,
            "4 V large-n level = " + num(at4.back().normalized_polarization));

    const auto pulses_to_saturation = [](const std::vector<AccumulatePoint>& series) {
        for (const auto& pt : series) {
            if (pt.normalized_polarization >= 0.9) {
                return pt.n_pulses;
            }
        }
        return 1 << 30;  // never saturates inside the budget
    };
    const int n4 = pulses_to_saturation(at4);
    const int n3 = pulses_to_saturation(at3);
    c.check(n3 > n4, "3 V saturates after " + std::to_string(n3) + " pulses vs " +
                         std::to_string(n4) + " at 4 V (must be strictly more)");
}

void criterion_5_neuron_tunability() {
    Criterion c(5, "pulses-before-fire map is monotone with the quoted dynamic range");
    c.expect_runtime_below(300.0);
    const FtjParams ftj;
    const CircuitConfig cfg;
    const ExperimentConfig exp;
    const SweepResult sweep = run_sweep_experiment(ftj, cfg, exp);

    bool monotone = true;
    for (std::size_t a = 0; a < sweep.amplitudes.size(); ++a) {
        for (std::size_t w = 1; w < sweep.widths.size(); ++w) {
            monotone = monotone && sweep.counts[a][w] <= sweep.counts[a][w - 1];
        }
    }
    for (std::size_t w = 0; w < sweep.widths.size(); ++w) {
        for (std::size_t a = 1; a < sweep.amplitudes.size(); ++a) {
            monotone = monotone && sweep.counts[a][w] <= sweep.counts[a - 1][w];
        }
    }
    c.check(monotone, "count matrix is not non-increasing along both axes");

    const auto col_of = [&](double width) {
        for (std::size_t w = 0; w < sweep.widths.size(); ++w) {
            if (std::abs(sweep.widths[w] - width) < 1e-12) {
                return w;
            }
        }
        return std::size_t(0);
    };
    const auto row_of = [&](double amp) {
        for (std::size_t a = 0; a < sweep.amplitudes.size(); ++a) {
            if (std::abs(sweep.amplitudes[a] - amp) < 1e-12) {
                return a;
            }
        }
        return std::size_t(0);
    };

    // amplitude axis at 10 us: at least 10:1 between 2.5 V and 5.0 V
    const std::size_t w10 = col_of(10e-6);
    const int lo_amp = sweep.counts[row_of(2.5)][w10];
    const int hi_amp = sweep.counts[row_of(5.0)][w10];
    c.check(lo_amp <= sweep.n_max, "2.5 V / 10 us cell did not fire");
    c.check(hi_amp >= 1 && lo_amp >= 10 * hi_amp,
            "amplitude dynamic range " + std::to_string(lo_amp) + ":" + std::to_string(hi_amp));

    // width axis at 3 V: the dominant drop sits between 1 us and 10 us
    const std::size_t a3 = row_of(3.0);
    double drop_inside = 0.0;
    double drop_outside = 0.0;
    for (std::size_t w = 1; w < sweep.widths.size(); ++w) {
        const double ratio = static_cast<double>(sweep.counts[a3][w - 1]) /
                             static_cast<double>(sweep.counts[a3][w]);
        if (sweep.widths[w] <= 10e-6 + 1e-12) {
            drop_inside = std::max(drop_inside, ratio);
        } else {
            drop_outside = std::max(drop_outside, ratio);
        }
    }
    c.check(sweep.counts[a3][0] <= sweep.n_max, "3 V / 1 us cell did not fire");
    c.check(drop_inside > drop_outside,
            "dominant width drop " + num(drop_inside) + " inside [1,10] us vs " +
                num(drop_outside) + " outside");
}

void criterion_6_read_non_disturb() {
    Criterion c(6, "one integrate phase moves the polarization by < 0.1% of P_sat");
    c.expect_runtime_below(5.0);
    const FtjParams ftj;
    const CircuitConfig cfg;
    NeuronSim sim(ftj, cfg);
    sim.reset_phase();
    sim.idle_phase(2e-6);
    const double p_before = sim.device_state().p_dyn;
    sim.read_phase();
    const double moved = std::abs(sim.device_state().p_dyn - p_before);
    c.check(moved < 1e-3 * ftj.p_sat,
            "polarization moved by " + num(moved) + " C/m^2 during the read");
}

void criterion_7_threshold_tuning() {
    Criterion c(7, "raising v_p1 lowers the inverter threshold and never delays the fire");
    c.expect_runtime_below(60.0);
    const FtjParams ftj;
    CircuitConfig base;
    base.set_pulse = PulseDef{3.0, 10e-6};
    NeuronSim probe(ftj, base);
    base.v_bl = probe.v_bl();  // freeze the bit line while the threshold moves

    const double th0 = inverter_threshold(base.v_p1, base.t4, base.t5, base.v_dd);
    const double th1 = inverter_threshold(base.v_p1 + 0.1, base.t4, base.t5, base.v_dd);
    c.check(th1 < th0, "threshold " + num(th0) + " -> " + num(th1) + " not strictly lower");

    CircuitConfig tuned = base;
    tuned.v_p1 = base.v_p1 + 0.1;
    const int n_base =
        run_neuron(ftj, base, 100, false).pulses_before_fire.value_or(101);
    const int n_tuned =
        run_neuron(ftj, tuned, 100, false).pulses_before_fire.value_or(101);
    c.check(n_tuned <= n_base, "pulses-before-fire rose from " + std::to_string(n_base) +
                                   " to " + std::to_string(n_tuned));
}

void criterion_8_invariants() {
    Criterion c(8, "invariant suite");
    c.expect_runtime_below(60.0);
    const FtjParams ftj;

    // charge consistency + boundedness under random piecewise drives
    {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> volt(-6.0, 6.0);
        std::uniform_real_distribution<double> span(5e-6, 150e-6);
        bool charge_ok = true;
        bool bounded = true;
        for (int trial = 0; trial < 8; ++trial) {
            Schedule drive;
            drive.append(0.0, 0.0);
            double t = 0.0;
            for (int k = 0; k < 6; ++k) {
                t += span(rng);
                drive.append(t, volt(rng));
            }
            FtjState s = initial_state(ftj);
            const double p_start = s.p_dyn;
            DeviceTrace trace;
            DeviceSimOptions opt;
            run_schedule(s, drive, ftj, opt, &trace);
            double q = 0.0;
            double t_prev = 0.0;
            for (const auto& row : trace.rows) {
                bounded = bounded && std::abs(row.p_dyn) <= ftj.p_sat * (1.0 + 1e-12);
                q += row.i_pol * (row.t - t_prev);
                t_prev = row.t;
            }
            charge_ok = charge_ok && std::abs(q - (s.p_dyn - p_start) * ftj.a_tot) /
                                             (2.0 * ftj.p_sat * ftj.a_tot) <
                                         1e-9;
        }
        c.check(charge_ok, "polarization charge does not telescope to 1e-9");
        c.check(bounded, "polarization left [-P_sat, P_sat]");
    }

    // dt-halving stability on the PUND drive
    {
        const Schedule drive = pund_sequence(5.0, 100e-6, 0.25);
        const auto final_p = [&](double dt) {
            FtjState s = initial_state(ftj);
            DeviceSimOptions opt;
            opt.dt = dt;
            run_schedule(s, drive, ftj, opt, nullptr);
            return s.p_dyn;
        };
        const double dt0 = 0.53e-6 / 20.0;  // tau_pE at the drive maximum, over 20
        const double diff = std::abs(final_p(dt0 / 2.0) - final_p(dt0)) / ftj.p_sat;
        c.check(diff < 0.005, "dt halving moved the endpoint by " + num(diff));
    }

    // minor-loop bookkeeping: turning-point anchoring and flat-region closure
    {
        FtjState s;
        s.direction = SweepDirection::descending;
        s.e_turn = 0.4 * ftj.e_c;
        s.p_turn = 0.12;
        reversal_rescale(s, ftj);
        const double back =
            asymptotic_polarization(s.e_turn, s.direction, s.k_loop, s.p_off, ftj);
        c.check(std::abs(back - s.p_turn) < 1e-12,
                "rescaled branch misses the turning point by " + num(back - s.p_turn));

        const auto sweep_to = [&](FtjState& state, double e_from, double e_to) {
            for (int i = 1; i <= 400; ++i) {
                step(state, (e_from + (e_to - e_from) * i / 400.0) * ftj.t_fe, 1e3, ftj);
            }
        };
        FtjState loop = initial_state(ftj);
        sweep_to(loop, 0.0, 2.0 * ftj.e_c);
        sweep_to(loop, 2.0 * ftj.e_c, 0.0);
        sweep_to(loop, 0.0, 2.0 * ftj.e_c);
        const double p_top_1 = loop.p_dyn;
        sweep_to(loop, 2.0 * ftj.e_c, 0.0);
        sweep_to(loop, 0.0, 2.0 * ftj.e_c);
        c.check(std::abs(loop.p_dyn - p_top_1) < 0.01 * ftj.p_sat,
                "remanence cycle does not close: " + num(loop.p_dyn - p_top_1));
    }

    // zero-field retention
    {
        FtjState s = initial_state(ftj);
        step(s, 5.0, 20e-6, ftj);
        step(s, 0.0, 1e-6, ftj);
        const double p0 = s.p_dyn;
        for (int i = 0; i < 1000; ++i) {
            step(s, 0.0, 1e-3, ftj);
        }
        c.check(std::abs(s.p_dyn - p0) <= 1e-6 * std::abs(p0),
                "polarization drifted at zero field by " + num(s.p_dyn - p0));
    }

    // reset-scheme equivalence
    {
        CircuitConfig a;
        a.reset_scheme = ResetScheme::pl_negative_pulse;
        NeuronSim sim_a(ftj, a);
        sim_a.reset_phase();
        sim_a.idle_phase(2e-6);
        CircuitConfig b;
        b.reset_scheme = ResetScheme::bl_positive;
        NeuronSim sim_b(ftj, b);
        sim_b.reset_phase();
        sim_b.idle_phase(2e-6);
        const double pa = sim_a.device_state().p_dyn;
        const double pb = sim_b.device_state().p_dyn;
        c.check(std::abs(pa + ftj.p_r) <= 0.01 * ftj.p_r,
                "PL reset landed at " + num(pa) + " vs -P_r");
        c.check(std::abs(pb + ftj.p_r) <= 0.01 * ftj.p_r,
                "BL reset landed at " + num(pb) + " vs -P_r");
    }

    // determinism: identical runs produce byte-identical CSV artifacts
    {
        const ExperimentConfig exp;
        const std::string pund_a = run_pund(ftj, exp).trace.to_csv();
        const std::string pund_b = run_pund(ftj, exp).trace.to_csv();
        c.check(pund_a == pund_b, "PUND trace differs between identical runs");

        CircuitConfig cfg;
        cfg.set_pulse = PulseDef{4.0, 10e-6};
        const std::string neuron_a = run_neuron(ftj, cfg, 5).trace.to_csv();
        const std::string neuron_b = run_neuron(ftj, cfg, 5).trace.to_csv();
        c.check(neuron_a == neuron_b, "neuron trace differs between identical runs");
    }
}

void criterion_9_calibration() {
    Criterion c(9, "calibration recovers the leakage parameters from synthetic data");
    c.expect_runtime_below(60.0);
    const FtjParams truth;
    const ExperimentConfig exp;
    const CalibrationData data =
        CalibrationData::from_device_trace(run_pund(truth, exp).trace);

    FtjParams start = truth;
    start.v_p0 *= 1.2;
    start.dv_p *= 0.8;
    start.r_a0 *= 1.2;
    FitOptions options;
    options.free_params = {"v_p0", "dv_p", "r_a0"};
    const FitResult fit = calibrate(start, data, options);

    c.check(std::abs(fit.params.v_p0 / truth.v_p0 - 1.0) <= 0.02,
            "v_p0 recovered to " + num(fit.params.v_p0) + " vs " + num(truth.v_p0));
    c.check(std::abs(fit.params.dv_p / truth.dv_p - 1.0) <= 0.02,
            "dv_p recovered to " + num(fit.params.dv_p) + " vs " + num(truth.dv_p));
    c.check(std::abs(fit.params.r_a0 / truth.r_a0 - 1.0) <= 0.02,
            "r_a0 recovered to " + num(fit.params.r_a0) + " vs " + num(truth.r_a0));
    c.check(fit.final_residual < fit.initial_residual, "residual did not improve");
}

}  // namespace

int main() {
    criterion_1_remanence();
    criterion_2_pund();
    criterion_3_backward_euler();
    criterion_4_accumulation();
    criterion_5_neuron_tunability();
    criterion_6_read_non_disturb();
    criterion_7_threshold_tuning();
    criterion_8_invariants();
    criterion_9_calibration();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
