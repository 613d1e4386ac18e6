#include "ftjsim/ftj.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftjsim {

namespace {

constexpr double kMinKLoop = 1e-6;
constexpr double kMaxTauExponent = 280.0;  // keeps tau_p * 10^x finite

double require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("FtjParams: ") + name + " must be positive and finite");
    }
    return value;
}

}  // namespace

void FtjParams::validate() const {
    require_positive(e_c, "e_c");
    require_positive(p_sat, "p_sat");
    require_positive(tau_p, "tau_p");
    require_positive(alpha_e, "alpha_e");
    require_positive(a_tot, "a_tot");
    require_positive(r_a0, "r_a0");
    require_positive(v_p0, "v_p0");
    require_positive(dv_p, "dv_p");
    require_positive(t_fe, "t_fe");
    require_positive(c_de, "c_de");
    if (!(p_r > 0.0 && p_r < p_sat)) {
        throw std::domain_error("FtjParams: requires 0 < p_r < p_sat");
    }
    if (!(k_init > 0.0 && k_init <= 1.0)) {
        throw std::invalid_argument("FtjParams: requires 0 < k_init <= 1");
    }
    if (!(dv_p < v_p0)) {
        throw std::invalid_argument("FtjParams: requires dv_p < v_p0 so V_PE stays positive");
    }
}

double delta_broadening(const FtjParams& p) {
    if (!(p.p_r > 0.0 && p.p_r < p.p_sat)) {
        throw std::domain_error("delta_broadening: requires 0 < p_r < p_sat");
    }
    const double r = p.p_r / p.p_sat;
    return p.e_c / std::log((1.0 + r) / (1.0 - r));
}

double asymptotic_polarization(double e_eff, SweepDirection dir, double k_loop,
                               double p_off, const FtjParams& p) {
    const double delta = delta_broadening(p);
    const double e_shift = (dir == SweepDirection::ascending) ? -p.e_c : +p.e_c;
    return k_loop * p.p_sat * std::tanh((e_eff + e_shift) / (2.0 * delta)) + p_off;
}

double tau_pe(double e_eff, const FtjParams& p) {
    const double e = std::abs(e_eff);
    double exponent = (p.e_c - e) / (p.alpha_e * (p.e_c / 10.0 + e));
    exponent = std::min(exponent, kMaxTauExponent);
    return p.tau_p * std::pow(10.0, exponent);
}

double update_polarization(FtjState& s, double e_eff, double dt, const FtjParams& p) {
    if (dt < 0.0) {
        throw std::invalid_argument("update_polarization: dt must be >= 0");
    }
    const double target = asymptotic_polarization(e_eff, s.direction, s.k_loop, s.p_off, p);
    const double tau = tau_pe(e_eff, p);
    s.p_old = s.p_dyn;
    s.p_dyn = (target * dt + s.p_old * tau) / (tau + dt);
    return s.p_dyn;
}

void reversal_rescale(FtjState& s, const FtjParams& p) {
    if (!p.minor_loop_tracking) {
        return;
    }
    const double delta = delta_broadening(p);
    // Saturation endpoint sign: the new branch must reach d * P_sat.
    const double d = (s.direction == SweepDirection::ascending) ? +1.0 : -1.0;
    const double t = std::tanh((s.e_turn - d * p.e_c) / (2.0 * delta));
    double k = (s.p_turn / p.p_sat - d) / (t - d);
    if (!std::isfinite(k)) {
        k = kMinKLoop;
    }
    s.k_loop = std::clamp(k, kMinKLoop, 1.0);
    s.p_off = d * p.p_sat * (1.0 - s.k_loop);
}

double polarization_current(double p_new, double p_old, double dt, const FtjParams& p) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("polarization_current: dt must be > 0");
    }
    return (p_new - p_old) / dt * p.a_tot;
}

double leakage_current(double v, double p_dyn, const FtjParams& p) {
    const double v_pe = p.v_p0 - p.dv_p * (p_dyn / p.p_sat);
    if (!(v_pe > 0.0)) {
        throw std::invalid_argument("leakage_current: V_PE must be positive");
    }
    const double arg = std::min(v / v_pe, 500.0);
    return p.leak_prefactor() * std::expm1(arg);
}

FtjState initial_state(const FtjParams& p) {
    FtjState s;
    s.direction = SweepDirection::ascending;
    s.k_loop = p.k_init;
    s.p_off = 0.0;
    s.p_dyn = asymptotic_polarization(0.0, s.direction, s.k_loop, s.p_off, p);
    s.p_old = s.p_dyn;
    s.e_turn = 0.0;
    s.p_turn = s.p_dyn;
    s.v_prev = 0.0;
    return s;
}

StepCurrents step(FtjState& s, double v_ftj, double dt, const FtjParams& p) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step: dt must be > 0");
    }
    const double e_eff = v_ftj / p.t_fe;
    const double e_prev = s.v_prev / p.t_fe;

    if (e_eff > e_prev && s.direction == SweepDirection::descending) {
        s.direction = SweepDirection::ascending;
        s.e_turn = e_prev;
        s.p_turn = s.p_dyn;
        reversal_rescale(s, p);
    } else if (e_eff < e_prev && s.direction == SweepDirection::ascending) {
        s.direction = SweepDirection::descending;
        s.e_turn = e_prev;
        s.p_turn = s.p_dyn;
        reversal_rescale(s, p);
    }

    update_polarization(s, e_eff, dt, p);

    StepCurrents out;
    out.i_pol = polarization_current(s.p_dyn, s.p_old, dt, p);
    out.i_leak = leakage_current(v_ftj, s.p_dyn, p);
    out.i_disp = p.c_de * (v_ftj - s.v_prev) / dt;
    out.i_total = out.i_pol + out.i_leak + out.i_disp;
    s.v_prev = v_ftj;
    return out;
}

}  // namespace ftjsim
