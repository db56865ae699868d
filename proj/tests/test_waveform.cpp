#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rdrag/errors.hpp"
#include "rdrag/units.hpp"
#include "rdrag/waveform.hpp"

using namespace rdrag;

namespace {

const EnvelopeSpec kFig1b{1.0, 5.0, 200.0, 5.0, 0.1};

std::string error_code_of(const EnvelopeSpec& spec) {
    try {
        sample_envelope(spec);
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("envelope sampling grid and continuum energy") {
    const IQWaveform wf = sample_envelope(kFig1b);
    CHECK(wf.size() == 2101);
    CHECK(wf.duration_ns() == doctest::Approx(210.0).epsilon(1e-12));
    const double continuum = 200.0 + 3.0 / 8.0 * 10.0;
    CHECK(std::abs(waveform_energy(wf) / continuum - 1.0) < 0.005);
}

TEST_CASE("envelope boundary, plateau and half-rise values") {
    const EnvelopeSpec spec{0.8, 5.0, 200.0, 5.0, 0.1};
    CHECK(spec.value_at(0.0) == 0.0);
    CHECK(spec.value_at(105.0) == doctest::Approx(0.8));
    CHECK(spec.value_at(2.5) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(spec.value_at(210.0) == doctest::Approx(0.0).epsilon(1e-14));

    const IQWaveform wf = sample_envelope(spec);
    CHECK(wf[0] == Complex(0.0, 0.0));
    CHECK(wf[25].real() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(wf[1050].real() == doctest::Approx(0.8));
}

TEST_CASE("analytic derivative") {
    const EnvelopeSpec spec{1.0, 5.0, 200.0, 5.0, 0.1};
    CHECK(spec.derivative_at(50.0) == 0.0);
    CHECK(spec.derivative_at(150.0) == 0.0);
    CHECK(spec.derivative_at(2.5) == doctest::Approx(std::numbers::pi / 10.0).epsilon(1e-12));

    SUBCASE("matches central differences away from segment joins") {
        const double h = 0.01;
        const double max_second = std::pow(std::numbers::pi / 5.0, 2) / 2.0;
        const double bound = 10.0 * h * h * max_second;
        for (double t = 0.05; t < 210.0; t += 0.37) {
            const bool near_join = std::abs(t - 5.0) < 2 * h || std::abs(t - 205.0) < 2 * h;
            if (near_join) continue;
            const double fd = (spec.value_at(t + h) - spec.value_at(t - h)) / (2 * h);
            CHECK(std::abs(fd - spec.derivative_at(t)) <= bound);
        }
    }

    SUBCASE("sampled derivative is the analytic one on the grid") {
        const IQWaveform d = envelope_derivative(spec);
        REQUIRE(d.size() == 2101);
        for (std::size_t n = 0; n < d.size(); n += 7) {
            CHECK(d[n].real() == spec.derivative_at(d.time_ns(n)));
            CHECK(d[n].imag() == 0.0);
        }
    }
}

TEST_CASE("envelope validation names the field") {
    CHECK(error_code_of(EnvelopeSpec{1.0, -1.0, 200.0, 5.0, 0.1}) == "invalid_rise_ns");
    CHECK(error_code_of(EnvelopeSpec{1.0, 5.0, -3.0, 5.0, 0.1}) == "invalid_plateau_ns");
    CHECK(error_code_of(EnvelopeSpec{1.0, 5.0, 200.0, 5.0, 0.0}) == "invalid_dt_ns");
    // 5-ns edge with 1-ns samples: only 5 samples per edge.
    CHECK(error_code_of(EnvelopeSpec{1.0, 5.0, 200.0, 5.0, 1.0}) == "invalid_dt_ns");
    CHECK(error_code_of(EnvelopeSpec{1.0, 0.0, 0.0, 0.0, 0.1}) != "");
    CHECK(error_code_of(kFig1b) == "");
}

TEST_CASE("DRAG transform") {
    const IQWaveform w = sample_envelope(kFig1b);
    const IQWaveform wd = envelope_derivative(kFig1b);
    const DragParams drag{50.0, true};
    const IQWaveform out = apply_drag(w, wd, drag);

    SUBCASE("linearity") {
        for (double c : {2.0, -1.0}) {
            const IQWaveform scaled = apply_drag(w.scaled(c), wd.scaled(c), drag);
            for (std::size_t n = 0; n < out.size(); ++n) {
                CHECK(std::abs(scaled[n] - c * out[n]) <= 1e-12 * std::abs(c * out[n]));
            }
        }
    }

    SUBCASE("quadrature is exactly zero on the plateau") {
        for (std::size_t n = 51; n < 2050; ++n) CHECK(out[n].imag() == 0.0);
    }

    SUBCASE("deviation bounded by |dW| / eta") {
        const double eta = units::angular_per_ns(50.0);
        for (std::size_t n = 0; n < out.size(); ++n) {
            CHECK(std::abs(out[n] - w[n]) <= std::abs(wd[n]) / eta * (1.0 + 1e-12));
        }
    }

    SUBCASE("energy grows by exactly the quadrature energy") {
        CHECK(waveform_energy(out) >= waveform_energy(w));
        const double eta = units::angular_per_ns(50.0);
        double quad = 0.0;
        for (std::size_t n = 0; n < wd.size(); ++n) quad += std::norm(wd[n] / eta);
        quad *= w.dt_ns();
        CHECK(waveform_energy(out) - waveform_energy(w) == doctest::Approx(quad).epsilon(1e-10));
    }

    SUBCASE("disabled DRAG is the identity") {
        const IQWaveform same = apply_drag(w, wd, DragParams{});
        for (std::size_t n = 0; n < w.size(); ++n) CHECK(same[n] == w[n]);
    }
}

TEST_CASE("DRAG energy equality when the derivative vanishes") {
    // Rectangular pulse: no edges, so W' == 0 and DRAG adds nothing.
    const EnvelopeSpec rect{1.0, 0.0, 100.0, 0.0, 0.1};
    const IQWaveform plain = build_pulse(rect, DragParams{});
    const IQWaveform dragged = build_pulse(rect, DragParams{30.0, true});
    CHECK(waveform_energy(dragged) == waveform_energy(plain));
}

TEST_CASE("far notch approaches the identity") {
    // Spectral width of a 5-ns edge is ~100 MHz; push the notch 1e6 further.
    const IQWaveform plain = build_pulse(kFig1b, DragParams{});
    const IQWaveform far = build_pulse(kFig1b, DragParams{1e8, true});
    CHECK(std::abs(waveform_energy(far) / waveform_energy(plain) - 1.0) < 1e-4);
}

TEST_CASE("DRAG at 13 MHz on a 2-us pulse costs a few percent of energy") {
    const EnvelopeSpec spec{1.0, 5.0, 2000.0, 5.0, 0.1};
    const IQWaveform plain = build_pulse(spec, DragParams{});
    const IQWaveform dragged = build_pulse(spec, DragParams{13.0, true});
    const IQWaveform deriv = envelope_derivative(spec);
    const double eta = units::angular_per_ns(13.0);
    double expected = 0.0;
    for (std::size_t n = 0; n < deriv.size(); ++n) expected += std::norm(deriv[n]) / (eta * eta);
    expected *= spec.dt_ns;
    const double increase = waveform_energy(dragged) - waveform_energy(plain);
    CHECK(increase == doctest::Approx(expected).epsilon(1e-10));
    CHECK(increase / waveform_energy(plain) < 0.05);
}

TEST_CASE("DRAG errors") {
    const IQWaveform w = sample_envelope(kFig1b);
    const IQWaveform wd = envelope_derivative(kFig1b);
    CHECK_THROWS_AS(apply_drag(w, wd, DragParams{0.0, true}), UndefinedNotchError);
    const IQWaveform other = sample_envelope(EnvelopeSpec{1.0, 5.0, 100.0, 5.0, 0.1});
    CHECK_THROWS_AS(apply_drag(other, wd, DragParams{50.0, true}), GridMismatchError);
    CHECK_THROWS_AS(build_pulse(kFig1b, DragParams{0.0, true}), UndefinedNotchError);
}

TEST_CASE("waveform energy") {
    CHECK(waveform_energy(IQWaveform(std::vector<Complex>(500, 0.0), 0.1)) == 0.0);
    CHECK(waveform_energy(IQWaveform(std::vector<Complex>(1000, 1.0), 0.1)) == doctest::Approx(100.0));
    const IQWaveform zero = sample_envelope(EnvelopeSpec{0.0, 5.0, 200.0, 5.0, 0.1});
    CHECK(waveform_energy(zero) == 0.0);
}
