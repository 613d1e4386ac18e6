#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftjsim/circuit.hpp"
#include "ftjsim/ftj.hpp"

namespace ftjsim {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` text grouped into [section] blocks; '#' and ';' start
/// comments. Unknown keys are rejected when a section is mapped onto a
/// parameter struct, so typos fail loudly.
class ConfigMap {
public:
    static ConfigMap parse(const std::string& text);
    static ConfigMap load(const std::string& path);

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& section, const std::string& key,
                                    double fallback) const;
    [[nodiscard]] int get_int(const std::string& section, const std::string& key,
                              int fallback) const;
    [[nodiscard]] bool get_bool(const std::string& section, const std::string& key,
                                bool fallback) const;
    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                         const std::string& fallback) const;
    [[nodiscard]] std::vector<double> get_list(const std::string& section, const std::string& key,
                                               const std::vector<double>& fallback) const;

    /// Keys present in `section` but not in `known`: used to reject typos.
    [[nodiscard]] std::vector<std::string> unknown_keys(
        const std::string& section, const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Experiment knobs shared by the CLI subcommands ([experiment] section).
struct ExperimentConfig {
    // hysteresis
    double hyst_amplitude = 5.0;
    double hyst_ramp_time = 500e-6;  // per amplitude of sweep, one-sided
    int hyst_cycles = 2;
    double hyst_dt = 0.5e-6;

    // pund
    double pund_amplitude = 5.0;
    double pund_width = 100e-6;
    double pund_rise_fraction = 0.25;
    double pund_gap = -1.0;  // <0: one pulse width
    double pund_dt = 0.25e-6;
    bool pund_preset = true;

    // accumulate
    std::vector<double> acc_amplitudes{3.0, 3.5, 4.0};
    std::vector<double> acc_widths;  // optional width sweep at acc_amplitudes.front()
    double acc_width = 10e-6;
    double acc_gap = 10e-6;
    int acc_max_exponent = 9;  // pulse counts 1, 2, 4, ..., 2^max_exponent
    double acc_dt = 1.0e-6;

    // neuron / sweep
    int n_max_pulses = 100;
    std::vector<double> sweep_amplitudes;  // default 2.5:0.25:5.0
    std::vector<double> sweep_widths;      // default {1,3.3,10,33,100,330,1000} us

    ExperimentConfig();
};

FtjParams ftj_params_from(const ConfigMap& cfg);
CircuitConfig circuit_config_from(const ConfigMap& cfg);
ExperimentConfig experiment_config_from(const ConfigMap& cfg);

/// Serializes the parameter records back into config text (SI units, same
/// keys the parser accepts).
std::string to_config_text(const FtjParams& ftj);
std::string to_config_text(const FtjParams& ftj, const CircuitConfig& circuit);

}  // namespace ftjsim
