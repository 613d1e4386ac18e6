// ftjsim command-line front end: wires the device model, waveforms and the
// neuron circuit into the named experiments and emits plot-ready CSV files.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftjsim/calibrate.hpp"
#include "ftjsim/config.hpp"
#include "ftjsim/experiments.hpp"
#include "ftjsim/trace.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
};

struct LoadedConfig {
    ftjsim::FtjParams ftj;
    ftjsim::CircuitConfig circuit;
    ftjsim::ExperimentConfig experiment;
};

LoadedConfig load(const CommonArgs& args) {
    LoadedConfig out;
    if (!args.config_path.empty()) {
        const ftjsim::ConfigMap cfg = ftjsim::ConfigMap::load(args.config_path);
        out.ftj = ftjsim::ftj_params_from(cfg);
        out.circuit = ftjsim::circuit_config_from(cfg);
        out.experiment = ftjsim::experiment_config_from(cfg);
        out.circuit.validate(out.ftj);  // bias windows checked at load time
    }
    return out;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (key = value sections)");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
}

double micro(double x) { return x * 1e6; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FTJ compact-model and integrate-and-fire neuron simulator"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* hysteresis = app.add_subcommand("hysteresis", "quasi-static P-V / I-V loop");
    add_common(hysteresis, args);

    auto* pund = app.add_subcommand("pund", "trapezoidal PUND characterization");
    add_common(pund, args);

    auto* accumulate = app.add_subcommand("accumulate", "gradual switching vs. pulse count");
    add_common(accumulate, args);

    auto* neuron = app.add_subcommand("neuron", "single neuron run until the first fire");
    add_common(neuron, args);

    auto* sweep = app.add_subcommand("sweep", "pulses-before-fire vs. amplitude and width");
    add_common(sweep, args);

    auto* calibrate = app.add_subcommand("calibrate", "fit model parameters to a trace CSV");
    add_common(calibrate, args);
    std::string data_path;
    std::vector<std::string> free_params{"v_p0", "dv_p", "r_a0"};
    calibrate->add_option("--data", data_path, "device trace CSV (t,v,...,i_total)")
        ->required();
    calibrate->add_option("--free", free_params, "free parameters")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    LoadedConfig cfg;
    try {
        cfg = load(args);
        std::filesystem::create_directories(args.out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }

    try {
        if (hysteresis->parsed()) {
            const auto result = ftjsim::run_hysteresis(cfg.ftj, cfg.experiment);
            ftjsim::write_file_atomic(out_path(args, "hysteresis.csv"), result.trace.to_csv());
            std::printf("remanent polarization: %+.4f / %+.4f uC/cm^2\n",
                        result.p_remanent_pos * 1e2, result.p_remanent_neg * 1e2);
            std::printf("coercive voltage:      %+.3f / %+.3f V\n", result.v_coercive_pos,
                        result.v_coercive_neg);
            std::printf("wrote %s\n", out_path(args, "hysteresis.csv").c_str());
        } else if (pund->parsed()) {
            const auto result = ftjsim::run_pund(cfg.ftj, cfg.experiment);
            ftjsim::write_file_atomic(out_path(args, "pund.csv"), result.trace.to_csv());
            std::printf("peak switching current: %.4f mA\n", result.peak_current * 1e3);
            std::printf("P-U switched charge:    %.4f nC (2*P_r*A_tot = %.4f nC)\n",
                        result.p_minus_u_charge * 1e9,
                        2.0 * cfg.ftj.p_r * cfg.ftj.a_tot * 1e9);
            std::printf("U/P polarization swing: %.3f %%\n",
                        100.0 * result.dp_u / (result.dp_p != 0.0 ? result.dp_p : 1.0));
            std::printf("wrote %s\n", out_path(args, "pund.csv").c_str());
        } else if (accumulate->parsed()) {
            const auto result = ftjsim::run_accumulate(cfg.ftj, cfg.experiment);
            ftjsim::write_file_atomic(out_path(args, "accumulate.csv"), result.to_csv());
            for (const auto& series : result.series) {
                const auto& last = series.points.back();
                std::printf("%.2f V / %g us: normalized polarization %.4f after %d pulses\n",
                            series.amplitude, micro(series.width),
                            last.normalized_polarization, last.n_pulses);
            }
            std::printf("wrote %s\n", out_path(args, "accumulate.csv").c_str());
        } else if (neuron->parsed()) {
            const auto result = ftjsim::run_neuron_experiment(cfg.ftj, cfg.circuit, cfg.experiment);
            ftjsim::write_file_atomic(out_path(args, "neuron.csv"), result.trace.to_csv());
            std::printf("V_BL = %.4f V (inverter-1 threshold %.4f V)\n", result.v_bl,
                        result.inv1_threshold);
            if (result.pulses_before_fire) {
                std::printf("fired after %d set pulse(s) at t = %.1f us\n",
                            *result.pulses_before_fire, micro(result.fire_time));
            } else {
                std::printf("no fire within %d pulses\n", cfg.experiment.n_max_pulses);
            }
            std::printf("wrote %s\n", out_path(args, "neuron.csv").c_str());
        } else if (sweep->parsed()) {
            const auto result = ftjsim::run_sweep_experiment(cfg.ftj, cfg.circuit, cfg.experiment);
            ftjsim::write_file_atomic(out_path(args, "sweep.csv"), result.to_csv());
            int no_fire = 0;
            for (const auto& row : result.counts) {
                for (const int c : row) {
                    no_fire += (c > result.n_max) ? 1 : 0;
                }
            }
            std::printf("%zu x %zu cells, %d without fire (reported as %d)\n",
                        result.amplitudes.size(), result.widths.size(), no_fire,
                        result.n_max + 1);
            std::printf("wrote %s\n", out_path(args, "sweep.csv").c_str());
        } else if (calibrate->parsed()) {
            ftjsim::DeviceTrace trace;
            try {
                trace = ftjsim::DeviceTrace::from_csv(ftjsim::read_file(data_path));
            } catch (const std::exception& e) {
                std::fprintf(stderr, "config error: %s\n", e.what());
                return kExitConfigError;
            }
            const auto data = ftjsim::CalibrationData::from_device_trace(trace);
            ftjsim::FitOptions options;
            options.free_params = free_params;
            const auto result = ftjsim::calibrate(cfg.ftj, data, options);
            std::printf("residual: %.6e -> %.6e in %d sweep(s)\n", result.initial_residual,
                        result.final_residual, result.sweeps);
            const std::string fitted = ftjsim::to_config_text(result.params);
            ftjsim::write_file_atomic(out_path(args, "fitted.cfg"), fitted);
            std::printf("wrote %s\n", out_path(args, "fitted.cfg").c_str());
        }
    } catch (const ftjsim::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "simulation error: %s\n", e.what());
        return kExitNumericalError;
    }
    return 0;
}
