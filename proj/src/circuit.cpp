#include "ftjsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "ftjsim/device_sim.hpp"
#include "ftjsim/waveform.hpp"

namespace ftjsim {

void CircuitConfig::validate(const FtjParams& ftj) const {
    if (!(v_dd > 0.0) || !(v_read > 0.0)) {
        throw std::invalid_argument("CircuitConfig: v_dd and v_read must be positive");
    }
    if (!(c_n1 > 0.0)) {
        throw std::invalid_argument("CircuitConfig: c_n1 must be positive");
    }
    if (!(t_precharge > 0.0) || !(t_integrate > 0.0)) {
        throw std::invalid_argument("CircuitConfig: phase durations must be positive");
    }
    if (t_precharge + t_integrate > t_event_min) {
        throw std::invalid_argument("CircuitConfig: t_precharge + t_integrate must fit in t_event_min");
    }
    // The read bias must stay well inside the non-disturbing window.
    if (!(v_read / ftj.t_fe < 0.8 * ftj.e_c)) {
        throw std::invalid_argument("CircuitConfig: v_read/t_fe too close to the coercive field");
    }
    if (!(v_p1 < v_dd - t5.v_th) || !(v_p2 < v_dd - t7.v_th)) {
        throw std::invalid_argument("CircuitConfig: PMOS loads are cut off; lower v_p1/v_p2");
    }
    if (fire_hysteresis < 0.0) {
        throw std::invalid_argument("CircuitConfig: fire_hysteresis must be >= 0");
    }
    for (const MosfetParams* m : {&t1, &t2, &t3, &t4, &t5, &t6, &t7}) {
        m->validate();
    }
    if (!(dt_write > 0.0) || !(dt_read > 0.0) || !(max_dv_node > 0.0)) {
        throw std::invalid_argument("CircuitConfig: step controls must be positive");
    }
}

NeuronSim::NeuronSim(const FtjParams& ftj, const CircuitConfig& cfg, bool record_trace)
    : ftj_(ftj), cfg_(cfg), record_(record_trace) {
    ftj_.validate();
    cfg_.validate(ftj_);
    inv1_threshold_ = inverter_threshold(cfg_.v_p1, cfg_.t4, cfg_.t5, cfg_.v_dd);
    v_bl_ = cfg_.v_bl >= 0.0 ? cfg_.v_bl : inv1_threshold_ - cfg_.v_bl_offset;
    if (!(v_bl_ > 0.0 && v_bl_ < cfg_.v_dd)) {
        throw std::invalid_argument("NeuronSim: V_BL outside the supply range");
    }
    state_ = initial_state(ftj_);
    v_n1_ = 0.0;
}

double NeuronSim::eval_inv1(double v_in) const {
    return inverter_output(v_in, cfg_.v_p1, cfg_.t4, cfg_.t5, cfg_.v_dd);
}

double NeuronSim::eval_inv2(double v_in) const {
    return inverter_output(v_in, cfg_.v_p2, cfg_.t6, cfg_.t7, cfg_.v_dd);
}

void NeuronSim::emit(PhaseTag tag, double v_pl, double v_bl_now, double v_wl,
                     double i_ftj, int fire) {
    const double v_inv1 = eval_inv1(v_n1_);
    const double v_out = eval_inv2(v_inv1);
    if (v_out < cfg_.fire_level() - cfg_.fire_hysteresis) {
        fire_armed_ = true;
    }
    if (record_) {
        trace_.rows.push_back({t_, tag, v_pl, v_bl_now, v_wl, v_n1_, v_inv1, v_out,
                               state_.p_dyn, i_ftj, fire});
    }
}

void NeuronSim::write_pulse(PhaseTag tag, const PulseDef& pulse, bool drive_bl) {
    PulseSpec spec;
    spec.amplitude = pulse.amplitude;
    spec.width = pulse.width;
    const Schedule terminal = pulse_train(spec, 1, 0.0);

    // T1/T2 on, T3 off: the FTJ hangs between PL and the BL level while n1
    // keeps its charge behind the open pass gate.
    Schedule device;
    for (std::size_t i = 0; i < terminal.size(); ++i) {
        const double v = terminal.values()[i];
        device.append(terminal.times()[i], drive_bl ? -v : v - cfg_.bl_write);
    }

    DeviceSimOptions opt;
    opt.dt = cfg_.dt_write;
    const double t_start = t_;
    run_pwl(state_, device, ftj_, opt,
            [&](double t, double v, const FtjState&, const StepCurrents& c) {
                t_ = t_start + t;
                const double v_pl = drive_bl ? 0.0 : v + cfg_.bl_write;
                const double v_bl_now = drive_bl ? -v : cfg_.bl_write;
                emit(tag, v_pl, v_bl_now, cfg_.wl_on, c.i_total, 0);
            });
    t_ = t_start + device.duration();
}

void NeuronSim::reset_phase() {
    if (cfg_.reset_scheme == ResetScheme::pl_negative_pulse) {
        write_pulse(PhaseTag::reset, cfg_.reset_pulse, false);
    } else {
        // 5 V at the BL while the PL stays at 0 V
        PulseDef bl_pulse{std::abs(cfg_.reset_pulse.amplitude), cfg_.reset_pulse.width};
        write_pulse(PhaseTag::reset, bl_pulse, true);
    }
}

void NeuronSim::set_phase(double amplitude, double width) {
    write_pulse(PhaseTag::set, PulseDef{amplitude, width}, false);
}

double NeuronSim::solve_node(double dt) const {
    // Backward-Euler node update: c_n1 * (V' - V)/dt = I_ftj(v_read - V').
    // The imbalance is monotone in V', so bisection is safe.
    const double v_start = v_n1_;
    const auto imbalance = [&](double v_node) {
        FtjState trial = state_;
        const StepCurrents c = step(trial, cfg_.v_read - v_node, dt, ftj_);
        return cfg_.c_n1 * (v_node - v_start) / dt - c.i_total;
    };
    double lo = v_start - 0.5;
    double hi = cfg_.v_read + 0.5;
    if (imbalance(lo) > 0.0 || imbalance(hi) < 0.0) {
        throw std::runtime_error("solve_node: node solve lost its bracket");
    }
    for (int i = 0; i < 64 && (hi - lo) > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (imbalance(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void NeuronSim::commit_integrate_step(double dt, double v_new) {
    v_n1_ = v_new;
    const StepCurrents c = step(state_, cfg_.v_read - v_n1_, dt, ftj_);

    int fire = 0;
    const double v_inv1 = eval_inv1(v_n1_);
    const double v_out = eval_inv2(v_inv1);
    if (fire_armed_ && v_out >= cfg_.fire_level()) {
        fire = 1;
        fire_armed_ = false;
        fired_this_read_ = true;
        if (fire_time_ < 0.0) {
            fire_time_ = t_;
        }
    }
    emit(PhaseTag::integrate, cfg_.v_read, v_bl_, 0.0, c.i_total, fire);
}

bool NeuronSim::read_phase() {
    fired_this_read_ = false;

    // Pre-charge: T1, T2, T3 on; n1 pinned to V_BL, PL already at v_read.
    v_n1_ = v_bl_;
    {
        DeviceSimOptions opt;
        opt.dt = std::min(cfg_.dt_read, cfg_.t_precharge / 2.0);
        Schedule flat;
        flat.append(0.0, cfg_.v_read - v_bl_);
        flat.append(cfg_.t_precharge, cfg_.v_read - v_bl_);
        const double t_start = t_;
        run_pwl(state_, flat, ftj_, opt,
                [&](double t, double, const FtjState&, const StepCurrents& c) {
                    t_ = t_start + t;
                    emit(PhaseTag::precharge, cfg_.v_read, v_bl_, cfg_.wl_on, c.i_total, 0);
                });
        t_ = t_start + cfg_.t_precharge;
    }

    // Integration: T1, T2 off, n1 floats and charges through the FTJ.
    const double phase_start = t_;
    const int n_targets =
        std::max(1, static_cast<int>(std::ceil(cfg_.t_integrate / cfg_.dt_read - 1e-9)));
    for (int i = 1; i <= n_targets; ++i) {
        const double target = cfg_.t_integrate * i / n_targets;
        double local = cfg_.t_integrate * (i - 1) / n_targets;
        while (target - local > 1e-15) {
            double dt = target - local;
            double v_new = solve_node(dt);
            while (std::abs(v_new - v_n1_) > cfg_.max_dv_node) {
                dt *= 0.5;
                if (dt < 1e-12) {
                    throw std::runtime_error("read_phase: node step collapsed");
                }
                v_new = solve_node(dt);
            }
            local += dt;
            t_ = phase_start + local;
            commit_integrate_step(dt, v_new);
        }
    }
    t_ = phase_start + cfg_.t_integrate;
    return fired_this_read_;
}

void NeuronSim::idle_phase(double duration) {
    if (duration <= 0.0) {
        return;
    }
    // Everything parked: PL at 0, BL disconnected, T3 off, n1 holds.
    DeviceSimOptions opt;
    opt.dt = std::max(duration / 4.0, 1e-9);
    Schedule flat;
    flat.append(0.0, 0.0);
    flat.append(duration, 0.0);
    const double t_start = t_;
    run_pwl(state_, flat, ftj_, opt,
            [&](double t, double, const FtjState&, const StepCurrents& c) {
                t_ = t_start + t;
                emit(PhaseTag::idle, 0.0, 0.0, 0.0, c.i_total, 0);
            });
    t_ = t_start + duration;
}

NeuronRunResult run_neuron(const FtjParams& ftj, const CircuitConfig& cfg,
                           int n_max_pulses, bool record_trace) {
    if (n_max_pulses < 1) {
        throw std::invalid_argument("run_neuron: n_max_pulses must be >= 1");
    }
    NeuronSim sim(ftj, cfg, record_trace);
    sim.reset_phase();
    sim.idle_phase(2e-6);

    NeuronRunResult result;
    for (int pulse = 1; pulse <= n_max_pulses; ++pulse) {
        const double t_cycle_start = sim.time();
        sim.set_phase(cfg.set_pulse.amplitude, cfg.set_pulse.width);
        const bool fired = sim.read_phase();
        const double elapsed = sim.time() - t_cycle_start;
        sim.idle_phase(std::max(cfg.t_event_min - elapsed, 1e-6));
        if (fired) {
            result.pulses_before_fire = pulse;
            break;
        }
    }
    result.trace = sim.trace();
    result.v_bl = sim.v_bl();
    result.inv1_threshold = sim.inv1_threshold();
    result.fire_time = sim.fire_time();
    return result;
}

std::string SweepResult::to_csv() const {
    std::string out = "amplitude_v";
    for (const double w : widths) {
        out += "," + format_double(w);
    }
    out += "\n";
    for (std::size_t a = 0; a < amplitudes.size(); ++a) {
        out += format_double(amplitudes[a]);
        for (std::size_t w = 0; w < widths.size(); ++w) {
            out += "," + std::to_string(counts[a][w]);
        }
        out += "\n";
    }
    return out;
}

SweepResult SweepResult::from_csv(const std::string& text) {
    SweepResult result;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        bool first_cell = true;
        std::vector<int> counts_row;
        while (std::getline(row, cell, ',')) {
            if (header) {
                if (!first_cell) {
                    result.widths.push_back(std::stod(cell));
                }
            } else if (first_cell) {
                result.amplitudes.push_back(std::stod(cell));
            } else {
                counts_row.push_back(std::stoi(cell));
            }
            first_cell = false;
        }
        if (!header) {
            if (counts_row.size() != result.widths.size()) {
                throw std::runtime_error("SweepResult::from_csv: ragged row '" + line + "'");
            }
            result.counts.push_back(std::move(counts_row));
        }
        header = false;
    }
    return result;
}

namespace {

int sweep_thread_count(std::size_t cells) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("FTJSIM_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) {
            n = static_cast<unsigned>(parsed);
        }
    }
    n = std::max(1u, std::min(n, static_cast<unsigned>(cells)));
    return static_cast<int>(n);
}

}  // namespace

SweepResult sweep_pulses_to_fire(const FtjParams& ftj, const CircuitConfig& cfg,
                                 const std::vector<double>& amplitudes,
                                 const std::vector<double>& widths, int n_max_pulses) {
    SweepResult result;
    result.amplitudes = amplitudes;
    result.widths = widths;
    result.n_max = n_max_pulses;
    result.counts.assign(amplitudes.size(), std::vector<int>(widths.size(), n_max_pulses + 1));

    const std::size_t cells = amplitudes.size() * widths.size();
    if (cells == 0) {
        return result;
    }
    const int n_threads = sweep_thread_count(cells);

    const auto worker = [&](std::size_t first, std::size_t stride) {
        for (std::size_t cell = first; cell < cells; cell += stride) {
            const std::size_t a = cell / widths.size();
            const std::size_t w = cell % widths.size();
            CircuitConfig cell_cfg = cfg;
            cell_cfg.set_pulse = PulseDef{amplitudes[a], widths[w]};
            const NeuronRunResult run = run_neuron(ftj, cell_cfg, n_max_pulses, false);
            result.counts[a][w] = run.pulses_before_fire.value_or(n_max_pulses + 1);
        }
    };

    if (n_threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker, static_cast<std::size_t>(i),
                              static_cast<std::size_t>(n_threads));
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return result;
}

}  // namespace ftjsim
