#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ftjsim {

/// One voltage pulse: trapezoid riding on a baseline, optionally delayed.
/// A rise/fall of zero means "use the minimum slew" (see pulse_train).
struct PulseSpec {
    double amplitude = 0.0;  // V, relative to baseline
    double width = 0.0;      // s, plateau duration
    double rise = 0.0;       // s
    double fall = 0.0;       // s
    double baseline = 0.0;   // V
    double delay = 0.0;      // s before the first edge
};

/// Piecewise-linear voltage waveform, stored as strictly time-ordered
/// breakpoints. Evaluation outside the span clamps to the end values.
/// Immutable in spirit: build once, then share freely.
class Schedule {
public:
    Schedule() = default;

    void append(double t, double v);

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double start_time() const;
    [[nodiscard]] double end_time() const;
    [[nodiscard]] double duration() const;
    [[nodiscard]] bool empty() const { return t_.empty(); }
    [[nodiscard]] std::size_t size() const { return t_.size(); }

    [[nodiscard]] const std::vector<double>& times() const { return t_; }
    [[nodiscard]] const std::vector<double>& values() const { return v_; }

    /// Appends `other` after this schedule's end; total durations add.
    [[nodiscard]] Schedule then(const Schedule& other) const;

    [[nodiscard]] std::string to_csv() const;
    static Schedule from_csv(const std::string& text);

private:
    std::vector<double> t_;
    std::vector<double> v_;
};

/// Fraction of the pulse width used as rise/fall when a PulseSpec asks for
/// an ideal square edge. Ideal steps would make the displacement current
/// through the dielectric branch unbounded.
inline constexpr double kMinSlewFraction = 0.01;

/// n identical pulses separated by `gap` seconds at the baseline.
Schedule pulse_train(const PulseSpec& spec, int n, double gap,
                     double min_slew_fraction = kMinSlewFraction);

/// Symmetric triangle: 0 -> amplitude at width/2 -> 0 at width.
Schedule triangular_pulse(double amplitude, double width);

/// Positive-Up-Negative-Down train of four equal trapezoids (P and U at
/// +amplitude, N and D at -amplitude). `width` is the total duration of one
/// trapezoid; rise and fall each take rise_fraction * width. A negative gap
/// selects the default relaxation gap of one pulse width.
Schedule pund_sequence(double amplitude, double width, double rise_fraction,
                       double gap = -1.0);

}  // namespace ftjsim
