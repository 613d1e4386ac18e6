#include "ftjsim/waveform.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ftjsim {

void Schedule::append(double t, double v) {
    if (!t_.empty()) {
        if (t < t_.back()) {
            throw std::invalid_argument("Schedule: breakpoints must be time-ordered");
        }
        if (t == t_.back()) {
            if (v == v_.back()) {
                return;  // duplicate corner, e.g. zero-length gap
            }
            throw std::invalid_argument("Schedule: step discontinuity at t=" + std::to_string(t));
        }
    }
    t_.push_back(t);
    v_.push_back(v);
}

double Schedule::value(double t) const {
    if (t_.empty()) {
        return 0.0;
    }
    if (t <= t_.front()) {
        return v_.front();
    }
    if (t >= t_.back()) {
        return v_.back();
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
    const std::size_t lo = hi - 1;
    if (t == t_[lo]) {
        return v_[lo];  // breakpoints evaluate bit-exactly
    }
    const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
    return v_[lo] + w * (v_[hi] - v_[lo]);
}

double Schedule::start_time() const {
    return t_.empty() ? 0.0 : t_.front();
}

double Schedule::end_time() const {
    return t_.empty() ? 0.0 : t_.back();
}

double Schedule::duration() const {
    return end_time() - start_time();
}

Schedule Schedule::then(const Schedule& other) const {
    Schedule out = *this;
    const double shift = out.end_time() - other.start_time();
    for (std::size_t i = 0; i < other.size(); ++i) {
        out.append(other.t_[i] + shift, other.v_[i]);
    }
    return out;
}

std::string Schedule::to_csv() const {
    std::string out = "t,v\n";
    char buf[64];
    for (std::size_t i = 0; i < t_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", t_[i], v_[i]);
        out += buf;
    }
    return out;
}

Schedule Schedule::from_csv(const std::string& text) {
    Schedule out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "t,v" || line[0] == '#') {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("Schedule::from_csv: bad row '" + line + "'");
        }
        out.append(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return out;
}

namespace {

// One trapezoid starting at t0, returning the end time.
double append_trapezoid(Schedule& s, double t0, double baseline, double amplitude,
                        double rise, double width, double fall) {
    s.append(t0, baseline);
    s.append(t0 + rise, baseline + amplitude);
    s.append(t0 + rise + width, baseline + amplitude);
    s.append(t0 + rise + width + fall, baseline);
    return t0 + rise + width + fall;
}

}  // namespace

Schedule pulse_train(const PulseSpec& spec, int n, double gap, double min_slew_fraction) {
    if (n < 1) {
        throw std::invalid_argument("pulse_train: n must be >= 1");
    }
    if (gap < 0.0) {
        throw std::invalid_argument("pulse_train: gap must be >= 0");
    }
    if (spec.width <= 0.0 || spec.rise < 0.0 || spec.fall < 0.0) {
        throw std::invalid_argument("pulse_train: width must be > 0, rise/fall >= 0");
    }
    const double min_slew = min_slew_fraction * spec.width;
    const double rise = spec.rise > 0.0 ? spec.rise : min_slew;
    const double fall = spec.fall > 0.0 ? spec.fall : min_slew;

    Schedule s;
    double t = 0.0;
    if (spec.delay > 0.0) {
        s.append(0.0, spec.baseline);
        t = spec.delay;
    }
    for (int i = 0; i < n; ++i) {
        t = append_trapezoid(s, t, spec.baseline, spec.amplitude, rise, spec.width, fall);
        if (i + 1 < n) {
            t += gap;
            if (gap > 0.0) {
                s.append(t, spec.baseline);
            }
        }
    }
    return s;
}

Schedule triangular_pulse(double amplitude, double width) {
    if (width <= 0.0) {
        throw std::invalid_argument("triangular_pulse: width must be > 0");
    }
    Schedule s;
    s.append(0.0, 0.0);
    s.append(width / 2.0, amplitude);
    s.append(width, 0.0);
    return s;
}

Schedule pund_sequence(double amplitude, double width, double rise_fraction, double gap) {
    if (!(rise_fraction > 0.0 && rise_fraction < 0.5)) {
        throw std::invalid_argument("pund_sequence: rise_fraction must be in (0, 0.5)");
    }
    if (width <= 0.0) {
        throw std::invalid_argument("pund_sequence: width must be > 0");
    }
    if (gap < 0.0) {
        gap = width;
    }
    const double rise = rise_fraction * width;
    const double plateau = width - 2.0 * rise;
    const double amps[4] = {amplitude, amplitude, -amplitude, -amplitude};

    Schedule s;
    double t = 0.0;
    for (int i = 0; i < 4; ++i) {
        t = append_trapezoid(s, t, 0.0, amps[i], rise, plateau, rise);
        if (i < 3 && gap > 0.0) {
            t += gap;
            s.append(t, 0.0);
        }
    }
    return s;
}

}  // namespace ftjsim
