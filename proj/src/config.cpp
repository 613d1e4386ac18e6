#include "ftjsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ftjsim/trace.hpp"

namespace ftjsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& section, const std::string& key, const std::string& raw) {
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (trim(raw.substr(used)).empty()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw config_error("[" + section + "] " + key + ": cannot parse number '" + raw + "'");
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("line " + std::to_string(line_no) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw config_error("line " + std::to_string(line_no) + ": empty key");
        }
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool ConfigMap::has(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    return sec != sections_.end() && sec->second.count(key) > 0;
}

double ConfigMap::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    return parse_double(section, key, sections_.at(section).at(key));
}

int ConfigMap::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const double v = parse_double(section, key, sections_.at(section).at(key));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw config_error("[" + section + "] " + key + ": expected an integer");
    }
    return i;
}

bool ConfigMap::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    std::string v = sections_.at(section).at(key);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw config_error("[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::string ConfigMap::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    return sections_.at(section).at(key);
}

std::vector<double> ConfigMap::get_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    std::vector<double> out;
    std::istringstream in(sections_.at(section).at(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(parse_double(section, key, item));
        }
    }
    if (out.empty()) {
        throw config_error("[" + section + "] " + key + ": empty list");
    }
    return out;
}

std::vector<std::string> ConfigMap::unknown_keys(const std::string& section,
                                                 const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) {
        return out;
    }
    for (const auto& [key, value] : sec->second) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            out.push_back(key);
        }
    }
    return out;
}

namespace {

void reject_unknown(const ConfigMap& cfg, const std::string& section,
                    const std::vector<std::string>& known) {
    const auto unknown = cfg.unknown_keys(section, known);
    if (!unknown.empty()) {
        throw config_error("[" + section + "]: unknown key '" + unknown.front() + "'");
    }
}

MosfetParams mosfet_from(const ConfigMap& cfg, const std::string& prefix,
                         const MosfetParams& fallback) {
    MosfetParams m = fallback;
    const std::string pol = cfg.get_string("circuit", prefix + "_polarity",
                                           fallback.polarity == MosPolarity::nmos ? "n" : "p");
    if (pol == "n" || pol == "N" || pol == "nmos") {
        m.polarity = MosPolarity::nmos;
    } else if (pol == "p" || pol == "P" || pol == "pmos") {
        m.polarity = MosPolarity::pmos;
    } else {
        throw config_error("[circuit] " + prefix + "_polarity: expected n or p");
    }
    m.v_th = cfg.get_double("circuit", prefix + "_v_th", fallback.v_th);
    m.beta = cfg.get_double("circuit", prefix + "_beta", fallback.beta);
    m.lambda = cfg.get_double("circuit", prefix + "_lambda", fallback.lambda);
    return m;
}

}  // namespace

FtjParams ftj_params_from(const ConfigMap& cfg) {
    reject_unknown(cfg, "ftj",
                   {"e_c", "k_init", "p_sat", "p_r", "tau_p", "alpha_e", "a_tot", "r_a0",
                    "v_p0", "dv_p", "t_fe", "c_de", "minor_loop_tracking"});
    FtjParams p;
    p.e_c = cfg.get_double("ftj", "e_c", p.e_c);
    p.k_init = cfg.get_double("ftj", "k_init", p.k_init);
    p.p_sat = cfg.get_double("ftj", "p_sat", p.p_sat);
    p.p_r = cfg.get_double("ftj", "p_r", p.p_r);
    p.tau_p = cfg.get_double("ftj", "tau_p", p.tau_p);
    p.alpha_e = cfg.get_double("ftj", "alpha_e", p.alpha_e);
    p.a_tot = cfg.get_double("ftj", "a_tot", p.a_tot);
    p.r_a0 = cfg.get_double("ftj", "r_a0", p.r_a0);
    p.v_p0 = cfg.get_double("ftj", "v_p0", p.v_p0);
    p.dv_p = cfg.get_double("ftj", "dv_p", p.dv_p);
    p.t_fe = cfg.get_double("ftj", "t_fe", p.t_fe);
    p.c_de = cfg.get_double("ftj", "c_de", p.c_de);
    p.minor_loop_tracking = cfg.get_bool("ftj", "minor_loop_tracking", p.minor_loop_tracking);
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw config_error(std::string("[ftj]: ") + e.what());
    }
    return p;
}

CircuitConfig circuit_config_from(const ConfigMap& cfg) {
    std::vector<std::string> known = {
        "v_dd", "v_read", "v_p1", "v_p2", "v_bl", "v_bl_offset", "c_n1",
        "t_precharge", "t_integrate", "t_event_min", "set_amplitude", "set_width",
        "reset_amplitude", "reset_width", "reset_scheme", "bl_write", "wl_on",
        "fire_threshold", "fire_hysteresis", "dt_write", "dt_read", "max_dv_node"};
    for (const char* t : {"t1", "t2", "t3", "t4", "t5", "t6", "t7"}) {
        for (const char* suffix : {"_polarity", "_v_th", "_beta", "_lambda"}) {
            known.push_back(std::string(t) + suffix);
        }
    }
    reject_unknown(cfg, "circuit", known);

    CircuitConfig c;
    c.v_dd = cfg.get_double("circuit", "v_dd", c.v_dd);
    c.v_read = cfg.get_double("circuit", "v_read", c.v_read);
    c.v_p1 = cfg.get_double("circuit", "v_p1", c.v_p1);
    c.v_p2 = cfg.get_double("circuit", "v_p2", c.v_p2);
    const std::string v_bl = cfg.get_string("circuit", "v_bl", "auto");
    if (v_bl != "auto") {
        c.v_bl = cfg.get_double("circuit", "v_bl", c.v_bl);
    }
    c.v_bl_offset = cfg.get_double("circuit", "v_bl_offset", c.v_bl_offset);
    c.c_n1 = cfg.get_double("circuit", "c_n1", c.c_n1);
    c.t_precharge = cfg.get_double("circuit", "t_precharge", c.t_precharge);
    c.t_integrate = cfg.get_double("circuit", "t_integrate", c.t_integrate);
    c.t_event_min = cfg.get_double("circuit", "t_event_min", c.t_event_min);
    c.set_pulse.amplitude = cfg.get_double("circuit", "set_amplitude", c.set_pulse.amplitude);
    c.set_pulse.width = cfg.get_double("circuit", "set_width", c.set_pulse.width);
    c.reset_pulse.amplitude = cfg.get_double("circuit", "reset_amplitude", c.reset_pulse.amplitude);
    c.reset_pulse.width = cfg.get_double("circuit", "reset_width", c.reset_pulse.width);
    const std::string scheme = cfg.get_string("circuit", "reset_scheme", "pl_pulse");
    if (scheme == "pl_pulse") {
        c.reset_scheme = ResetScheme::pl_negative_pulse;
    } else if (scheme == "bl_positive") {
        c.reset_scheme = ResetScheme::bl_positive;
    } else {
        throw config_error("[circuit] reset_scheme: expected pl_pulse or bl_positive");
    }
    c.bl_write = cfg.get_double("circuit", "bl_write", c.bl_write);
    c.wl_on = cfg.get_double("circuit", "wl_on", c.wl_on);
    c.fire_threshold = cfg.get_double("circuit", "fire_threshold", c.fire_threshold);
    c.fire_hysteresis = cfg.get_double("circuit", "fire_hysteresis", c.fire_hysteresis);
    c.dt_write = cfg.get_double("circuit", "dt_write", c.dt_write);
    c.dt_read = cfg.get_double("circuit", "dt_read", c.dt_read);
    c.max_dv_node = cfg.get_double("circuit", "max_dv_node", c.max_dv_node);

    c.t1 = mosfet_from(cfg, "t1", c.t1);
    c.t2 = mosfet_from(cfg, "t2", c.t2);
    c.t3 = mosfet_from(cfg, "t3", c.t3);
    c.t4 = mosfet_from(cfg, "t4", c.t4);
    c.t5 = mosfet_from(cfg, "t5", c.t5);
    c.t6 = mosfet_from(cfg, "t6", c.t6);
    c.t7 = mosfet_from(cfg, "t7", c.t7);
    return c;
}

ExperimentConfig::ExperimentConfig() {
    for (double a = 2.5; a <= 5.0 + 1e-9; a += 0.25) {
        sweep_amplitudes.push_back(a);
    }
    sweep_widths = {1e-6, 3.3e-6, 10e-6, 33e-6, 100e-6, 330e-6, 1000e-6};
}

ExperimentConfig experiment_config_from(const ConfigMap& cfg) {
    reject_unknown(cfg, "experiment",
                   {"hyst_amplitude", "hyst_ramp_time", "hyst_cycles", "hyst_dt",
                    "pund_amplitude", "pund_width", "pund_rise_fraction", "pund_gap",
                    "pund_dt", "pund_preset", "acc_amplitudes", "acc_widths", "acc_width",
                    "acc_gap", "acc_max_exponent", "acc_dt", "n_max_pulses",
                    "sweep_amplitudes", "sweep_widths"});
    ExperimentConfig e;
    e.hyst_amplitude = cfg.get_double("experiment", "hyst_amplitude", e.hyst_amplitude);
    e.hyst_ramp_time = cfg.get_double("experiment", "hyst_ramp_time", e.hyst_ramp_time);
    e.hyst_cycles = cfg.get_int("experiment", "hyst_cycles", e.hyst_cycles);
    e.hyst_dt = cfg.get_double("experiment", "hyst_dt", e.hyst_dt);
    e.pund_amplitude = cfg.get_double("experiment", "pund_amplitude", e.pund_amplitude);
    e.pund_width = cfg.get_double("experiment", "pund_width", e.pund_width);
    e.pund_rise_fraction = cfg.get_double("experiment", "pund_rise_fraction", e.pund_rise_fraction);
    e.pund_gap = cfg.get_double("experiment", "pund_gap", e.pund_gap);
    e.pund_dt = cfg.get_double("experiment", "pund_dt", e.pund_dt);
    e.pund_preset = cfg.get_bool("experiment", "pund_preset", e.pund_preset);
    e.acc_amplitudes = cfg.get_list("experiment", "acc_amplitudes", e.acc_amplitudes);
    e.acc_widths = cfg.get_list("experiment", "acc_widths", e.acc_widths);
    e.acc_width = cfg.get_double("experiment", "acc_width", e.acc_width);
    e.acc_gap = cfg.get_double("experiment", "acc_gap", e.acc_gap);
    e.acc_max_exponent = cfg.get_int("experiment", "acc_max_exponent", e.acc_max_exponent);
    e.acc_dt = cfg.get_double("experiment", "acc_dt", e.acc_dt);
    e.n_max_pulses = cfg.get_int("experiment", "n_max_pulses", e.n_max_pulses);
    e.sweep_amplitudes = cfg.get_list("experiment", "sweep_amplitudes", e.sweep_amplitudes);
    e.sweep_widths = cfg.get_list("experiment", "sweep_widths", e.sweep_widths);
    return e;
}

namespace {

void emit_kv(std::string& out, const char* key, double value) {
    out += key;
    out += " = ";
    out += format_double(value);
    out += "\n";
}

void emit_mosfet(std::string& out, const char* prefix, const MosfetParams& m) {
    out += prefix;
    out += "_polarity = ";
    out += (m.polarity == MosPolarity::nmos) ? "n" : "p";
    out += "\n";
    emit_kv(out, (std::string(prefix) + "_v_th").c_str(), m.v_th);
    emit_kv(out, (std::string(prefix) + "_beta").c_str(), m.beta);
    emit_kv(out, (std::string(prefix) + "_lambda").c_str(), m.lambda);
}

}  // namespace

std::string to_config_text(const FtjParams& p) {
    std::string out = "[ftj]\n";
    emit_kv(out, "e_c", p.e_c);
    emit_kv(out, "k_init", p.k_init);
    emit_kv(out, "p_sat", p.p_sat);
    emit_kv(out, "p_r", p.p_r);
    emit_kv(out, "tau_p", p.tau_p);
    emit_kv(out, "alpha_e", p.alpha_e);
    emit_kv(out, "a_tot", p.a_tot);
    emit_kv(out, "r_a0", p.r_a0);
    emit_kv(out, "v_p0", p.v_p0);
    emit_kv(out, "dv_p", p.dv_p);
    emit_kv(out, "t_fe", p.t_fe);
    emit_kv(out, "c_de", p.c_de);
    out += "minor_loop_tracking = ";
    out += p.minor_loop_tracking ? "true" : "false";
    out += "\n";
    return out;
}

std::string to_config_text(const FtjParams& ftj, const CircuitConfig& c) {
    std::string out = to_config_text(ftj);
    out += "\n[circuit]\n";
    emit_kv(out, "v_dd", c.v_dd);
    emit_kv(out, "v_read", c.v_read);
    emit_kv(out, "v_p1", c.v_p1);
    emit_kv(out, "v_p2", c.v_p2);
    if (c.v_bl >= 0.0) {
        emit_kv(out, "v_bl", c.v_bl);
    } else {
        out += "v_bl = auto\n";
    }
    emit_kv(out, "v_bl_offset", c.v_bl_offset);
    emit_kv(out, "c_n1", c.c_n1);
    emit_kv(out, "t_precharge", c.t_precharge);
    emit_kv(out, "t_integrate", c.t_integrate);
    emit_kv(out, "t_event_min", c.t_event_min);
    emit_kv(out, "set_amplitude", c.set_pulse.amplitude);
    emit_kv(out, "set_width", c.set_pulse.width);
    emit_kv(out, "reset_amplitude", c.reset_pulse.amplitude);
    emit_kv(out, "reset_width", c.reset_pulse.width);
    out += "reset_scheme = ";
    out += (c.reset_scheme == ResetScheme::pl_negative_pulse) ? "pl_pulse" : "bl_positive";
    out += "\n";
    emit_kv(out, "bl_write", c.bl_write);
    emit_kv(out, "wl_on", c.wl_on);
    emit_kv(out, "fire_threshold", c.fire_threshold);
    emit_kv(out, "fire_hysteresis", c.fire_hysteresis);
    emit_kv(out, "dt_write", c.dt_write);
    emit_kv(out, "dt_read", c.dt_read);
    emit_kv(out, "max_dv_node", c.max_dv_node);
    emit_mosfet(out, "t1", c.t1);
    emit_mosfet(out, "t2", c.t2);
    emit_mosfet(out, "t3", c.t3);
    emit_mosfet(out, "t4", c.t4);
    emit_mosfet(out, "t5", c.t5);
    emit_mosfet(out, "t6", c.t6);
    emit_mosfet(out, "t7", c.t7);
    return out;
}

}  // namespace ftjsim
