#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ftjsim/waveform.hpp"

using namespace ftjsim;

TEST_CASE("single pulse geometry") {
    PulseSpec spec;
    spec.amplitude = 4.0;
    spec.width = 10e-6;
    spec.rise = 1e-6;
    spec.fall = 1e-6;
    const Schedule s = pulse_train(spec, 1, 0.0);
    CHECK(s.size() == 4);
    CHECK(s.duration() == doctest::Approx(12e-6).epsilon(1e-12));
    CHECK(s.value(0.0) == 0.0);
    CHECK(s.value(1e-6) == 4.0);           // breakpoint, bit exact
    CHECK(s.value(6e-6) == 4.0);           // plateau
    CHECK(s.value(0.5e-6) == doctest::Approx(2.0));  // mid-rise
    CHECK(s.value(20e-6) == 0.0);          // clamped past the end
}

TEST_CASE("square pulses get the minimum slew") {
    PulseSpec spec;
    spec.amplitude = 4.0;
    spec.width = 10e-6;
    const Schedule s = pulse_train(spec, 1, 0.0);
    CHECK(s.duration() == doctest::Approx(10e-6 * 1.02).epsilon(1e-12));
}

TEST_CASE("pulse train duration and baseline between pulses") {
    PulseSpec spec;
    spec.amplitude = 4.0;
    spec.width = 10e-6;
    spec.rise = 0.5e-6;
    spec.fall = 0.5e-6;
    spec.baseline = 0.25;
    spec.delay = 2e-6;
    const int n = 8;
    const double gap = 3e-6;
    const Schedule s = pulse_train(spec, n, gap);
    const double expected = n * (spec.width + spec.rise + spec.fall) + (n - 1) * gap + spec.delay;
    CHECK(s.duration() == doctest::Approx(expected).epsilon(1e-12));
    // between pulses the waveform sits exactly at the baseline
    const double t_gap = spec.delay + (spec.width + spec.rise + spec.fall) + 0.5 * gap;
    CHECK(s.value(t_gap) == spec.baseline);
    CHECK_THROWS_AS(pulse_train(spec, 0, gap), std::invalid_argument);
    CHECK_THROWS_AS(pulse_train(spec, 2, -1.0), std::invalid_argument);
}

TEST_CASE("triangular pulse") {
    const Schedule s = triangular_pulse(-5.0, 500e-6);
    CHECK(s.value(250e-6) == -5.0);  // peak exactly at width/2
    CHECK(s.value(0.0) == 0.0);
    CHECK(s.value(500e-6) == 0.0);
    // integral of |dV/dt| equals twice the amplitude magnitude
    double total = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        total += std::abs(s.values()[i] - s.values()[i - 1]);
    }
    CHECK(total == doctest::Approx(10.0).epsilon(1e-12));
    CHECK_THROWS_AS(triangular_pulse(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("pund sequence shape") {
    const double w = 100e-6;
    const Schedule s = pund_sequence(5.0, w, 0.25);
    CHECK(s.duration() == doctest::Approx(7.0 * w).epsilon(1e-12));  // default gap = width
    // P and U plateaus positive, N and D negative
    CHECK(s.value(0.5 * w) == 5.0);
    CHECK(s.value(2.5 * w) == 5.0);
    CHECK(s.value(4.5 * w) == -5.0);
    CHECK(s.value(6.5 * w) == -5.0);
    // relaxation gaps at zero
    CHECK(s.value(1.5 * w) == 0.0);
    CHECK_THROWS_AS(pund_sequence(5.0, w, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(pund_sequence(5.0, w, 0.0), std::invalid_argument);

    const Schedule silent = pund_sequence(0.0, w, 0.25);
    for (const double v : silent.values()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("concatenation is associative and adds durations") {
    PulseSpec spec;
    spec.amplitude = 1.0;
    spec.width = 4e-6;
    spec.rise = 1e-6;
    spec.fall = 1e-6;
    const Schedule a = pulse_train(spec, 1, 0.0);
    const Schedule b = triangular_pulse(2.0, 10e-6);
    const Schedule c = pulse_train(spec, 2, 2e-6);

    const Schedule left = a.then(b).then(c);
    const Schedule right = a.then(b.then(c));
    REQUIRE(left.size() == right.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        CHECK(left.times()[i] == doctest::Approx(right.times()[i]).epsilon(1e-15));
        CHECK(left.values()[i] == right.values()[i]);
    }
    CHECK(left.duration() ==
          doctest::Approx(a.duration() + b.duration() + c.duration()).epsilon(1e-12));
}

TEST_CASE("schedule CSV round trip is stable") {
    const Schedule s = pund_sequence(3.3, 10e-6, 0.2, 5e-6);
    const std::string once = s.to_csv();
    const Schedule back = Schedule::from_csv(once);
    CHECK(back.to_csv() == once);
    CHECK(back.size() == s.size());
}

TEST_CASE("schedule rejects unordered or discontinuous points") {
    Schedule s;
    s.append(0.0, 0.0);
    s.append(1.0, 2.0);
    CHECK_THROWS_AS(s.append(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.append(1.0, 3.0), std::invalid_argument);
    s.append(1.0, 2.0);  // duplicate corner is a no-op
    CHECK(s.size() == 2);
}
