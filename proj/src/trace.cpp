#include "ftjsim/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ftjsim {

std::string format_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

const char* phase_name(PhaseTag tag) {
    switch (tag) {
        case PhaseTag::reset: return "Reset";
        case PhaseTag::set: return "Set";
        case PhaseTag::precharge: return "Precharge";
        case PhaseTag::integrate: return "Integrate";
        case PhaseTag::idle: return "Idle";
    }
    return "?";
}

std::string DeviceTrace::to_csv() const {
    std::string out = "t,v,e_eff,p_dyn,i_pol,i_leak,i_disp,i_total\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      r.t, r.v, r.e_eff, r.p_dyn, r.i_pol, r.i_leak, r.i_disp, r.i_total);
        out += buf;
    }
    return out;
}

DeviceTrace DeviceTrace::from_csv(const std::string& text) {
    DeviceTrace trace;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (first) {
            first = false;
            if (line.rfind("t,", 0) == 0) {
                continue;  // header
            }
        }
        DeviceTraceRow r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                        &r.t, &r.v, &r.e_eff, &r.p_dyn, &r.i_pol, &r.i_leak,
                        &r.i_disp, &r.i_total) != 8) {
            throw std::runtime_error("DeviceTrace::from_csv: bad row '" + line + "'");
        }
        trace.rows.push_back(r);
    }
    return trace;
}

std::string CircuitTrace::to_csv() const {
    std::string out = "t,phase,v_pl,v_bl,v_wl,v_n1,v_inv1,v_out,p_dyn,i_ftj,fire\n";
    char buf[320];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.12g,%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                      r.t, phase_name(r.phase), r.v_pl, r.v_bl, r.v_wl, r.v_n1,
                      r.v_inv1, r.v_out, r.p_dyn, r.i_ftj, r.fire);
        out += buf;
    }
    return out;
}

CircuitTrace CircuitTrace::from_csv(const std::string& text) {
    CircuitTrace trace;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("t,phase", 0) == 0) {
            continue;
        }
        CircuitTraceRow r{};
        char phase[16] = {0};
        if (std::sscanf(line.c_str(),
                        "%lf,%15[^,],%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d",
                        &r.t, phase, &r.v_pl, &r.v_bl, &r.v_wl, &r.v_n1, &r.v_inv1,
                        &r.v_out, &r.p_dyn, &r.i_ftj, &r.fire) != 11) {
            throw std::runtime_error("CircuitTrace::from_csv: bad row '" + line + "'");
        }
        const std::string tag(phase);
        if (tag == "Reset") {
            r.phase = PhaseTag::reset;
        } else if (tag == "Set") {
            r.phase = PhaseTag::set;
        } else if (tag == "Precharge") {
            r.phase = PhaseTag::precharge;
        } else if (tag == "Integrate") {
            r.phase = PhaseTag::integrate;
        } else if (tag == "Idle") {
            r.phase = PhaseTag::idle;
        } else {
            throw std::runtime_error("CircuitTrace::from_csv: unknown phase '" + tag + "'");
        }
        trace.rows.push_back(r);
    }
    return trace;
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << text;
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ftjsim
