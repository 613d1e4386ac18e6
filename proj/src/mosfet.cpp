#include "ftjsim/mosfet.hpp"

#include <cmath>
#include <stdexcept>

namespace ftjsim {

void MosfetParams::validate() const {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("MosfetParams: beta must be > 0");
    }
    if (!(v_th > 0.0)) {
        throw std::invalid_argument("MosfetParams: v_th magnitude must be > 0");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("MosfetParams: lambda must be >= 0");
    }
}

namespace {

// Square-law core in NMOS-normalized coordinates (v_gs, v_ds >= 0 when
// conducting forward).
double nmos_core(double v_gs, double v_ds, double v_th, double beta, double lambda) {
    if (v_ds < 0.0) {
        // source/drain swap keeps the model symmetric
        return -nmos_core(v_gs - v_ds, -v_ds, v_th, beta, lambda);
    }
    const double v_ov = v_gs - v_th;
    if (v_ov <= 0.0) {
        return 0.0;
    }
    const double clm = 1.0 + lambda * v_ds;
    if (v_ds < v_ov) {
        return beta * (v_ov * v_ds - 0.5 * v_ds * v_ds) * clm;
    }
    return 0.5 * beta * v_ov * v_ov * clm;
}

}  // namespace

double mosfet_current(const MosfetParams& params, double v_gs, double v_ds) {
    if (params.polarity == MosPolarity::nmos) {
        return nmos_core(v_gs, v_ds, params.v_th, params.beta, params.lambda);
    }
    // PMOS: mirror into source-referred magnitudes, flip the sign back.
    return -nmos_core(-v_gs, -v_ds, params.v_th, params.beta, params.lambda);
}

double inverter_output(double v_in, double v_p, const MosfetParams& n,
                       const MosfetParams& p, double v_dd) {
    // Pull-down through the NMOS (gate v_in), pull-up through the PMOS
    // (source at v_dd, gate at v_p). Balance I_up(v_out) = I_down(v_out).
    const auto imbalance = [&](double v_out) {
        const double i_down = mosfet_current(n, v_in, v_out);
        const double i_up = -mosfet_current(p, v_p - v_dd, v_out - v_dd);
        return i_up - i_down;  // positive pulls the node up
    };

    const double f_lo = imbalance(0.0);
    const double f_hi = imbalance(v_dd);
    if (f_lo <= 0.0) {
        return 0.0;  // NMOS wins everywhere (or both off with a dead PMOS)
    }
    if (f_hi >= 0.0) {
        return v_dd;  // PMOS wins everywhere, e.g. NMOS in cutoff
    }
    double lo = 0.0;
    double hi = v_dd;
    while (hi - lo > 1.0e-4) {
        const double mid = 0.5 * (lo + hi);
        if (imbalance(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double inverter_threshold(double v_p, const MosfetParams& n, const MosfetParams& p,
                          double v_dd, double level) {
    if (level < 0.0) {
        level = 0.5 * v_dd;
    }
    const double out_lo = inverter_output(0.0, v_p, n, p, v_dd);
    const double out_hi = inverter_output(v_dd, v_p, n, p, v_dd);
    if (!(out_lo > level) || !(out_hi < level)) {
        throw std::runtime_error("inverter_threshold: transfer curve does not cross the level; "
                                 "check v_p bias");
    }
    double lo = 0.0;
    double hi = v_dd;
    // output is monotone non-increasing in v_in
    while (hi - lo > 1.0e-7) {
        const double mid = 0.5 * (lo + hi);
        if (inverter_output(mid, v_p, n, p, v_dd) > level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ftjsim
