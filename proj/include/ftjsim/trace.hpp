#pragma once

#include <string>
#include <vector>

namespace ftjsim {

/// One accepted step of a device-only transient.
struct DeviceTraceRow {
    double t;
    double v;
    double e_eff;
    double p_dyn;
    double i_pol;
    double i_leak;
    double i_disp;
    double i_total;
};

struct DeviceTrace {
    std::vector<DeviceTraceRow> rows;

    [[nodiscard]] std::string to_csv() const;
    static DeviceTrace from_csv(const std::string& text);
};

enum class PhaseTag { reset, set, precharge, integrate, idle };

const char* phase_name(PhaseTag tag);

/// One accepted step of a neuron transient.
struct CircuitTraceRow {
    double t;
    PhaseTag phase;
    double v_pl;
    double v_bl;
    double v_wl;
    double v_n1;
    double v_inv1;
    double v_out;
    double p_dyn;
    double i_ftj;
    int fire;
};

struct CircuitTrace {
    std::vector<CircuitTraceRow> rows;

    [[nodiscard]] std::string to_csv() const;
    static CircuitTrace from_csv(const std::string& text);
};

/// Writes text to path atomically (temp file in the same directory, then
/// rename). Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

/// Number formatting used by every CSV emitter ("%.12g"): identical inputs
/// give byte-identical files.
std::string format_double(double x);

}  // namespace ftjsim
