#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rdrag/dephasing.hpp"
#include "rdrag/errors.hpp"
#include "rdrag/ramsey.hpp"
#include "rdrag/rng.hpp"
#include "rdrag/units.hpp"

using namespace rdrag;

namespace {

DispersiveParams paper(double delta_d = 0.0, double t2 = 18.0) { return {2.2, 1.05, delta_d, t2}; }

const EnvelopeSpec kTemplate{1.0, 5.0, 0.0, 5.0, 0.5};

std::vector<double> phases(std::size_t n) {
    std::vector<double> th(n);
    for (std::size_t k = 0; k < n; ++k) th[k] = units::kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    return th;
}

}  // namespace

TEST_CASE("unperturbed Ramsey fringe") {
    const IQWaveform idle = sample_envelope(EnvelopeSpec{0.0, 5.0, 100.0, 5.0, 0.5});
    const RamseySweep s = simulate_ramsey_point(paper(0.0, 1e9), idle, 1.0, 16, 0.0, 0);
    REQUIRE(s.thetas.size() == 16);
    for (std::size_t k = 0; k < s.thetas.size(); ++k) {
        CHECK(s.thetas[k] >= 0.0);
        CHECK(s.thetas[k] < units::kTwoPi);
        CHECK(s.signal[k] == doctest::Approx(0.5 + 0.5 * std::sin(s.thetas[k])).epsilon(1e-6));
    }
    const RamseyPoint pt = to_ramsey_point(fit_sinusoid(s.thetas, s.signal));
    CHECK(pt.contrast == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(pt.pe == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("free decay sets the contrast") {
    const DispersiveParams p = paper(0.0, 1.5);
    const IQWaveform idle = sample_envelope(EnvelopeSpec{0.0, 5.0, 300.0, 5.0, 0.5});
    const Coherence c = coherence_factor(p, idle, 1.0);
    CHECK(c.t_total_ns == doctest::Approx(310.0 + ringdown_window_ns(p)).epsilon(0.5 / 1033.0));
    const RamseySweep s = simulate_ramsey_point(p, idle, 1.0, 16, 0.0, 0);
    const RamseyPoint pt = to_ramsey_point(fit_sinusoid(s.thetas, s.signal));
    const double decay = std::exp(-c.t_total_ns * 1e-3 / p.t2_us);
    CHECK(pt.contrast == doctest::Approx(decay / 2).epsilon(1e-6));
    CHECK(std::abs(pt.pe - decay) < 1e-6);
}

TEST_CASE("fitted phase is the accumulated Stark phase") {
    const DispersiveParams p = paper(-3.0);
    const IQWaveform pulse = sample_envelope(EnvelopeSpec{0.3, 5.0, 150.0, 5.0, 0.5});
    const Coherence c = coherence_factor(p, pulse, 4.0);
    const RamseySweep s = simulate_ramsey_point(p, pulse, 4.0, 16, 0.0, 0);
    const SinusoidFit f = fit_sinusoid(s.thetas, s.signal);
    const double wrapped = std::remainder(c.stark_phase, units::kTwoPi);
    CHECK(f.theta0 == doctest::Approx(wrapped).epsilon(1e-9));
    CHECK(f.contrast == doctest::Approx(c.magnitude / 2).epsilon(1e-9));
}

TEST_CASE("sinusoid fit") {
    const auto th = phases(16);
    SUBCASE("exact recovery") {
        std::vector<double> sig(th.size());
        for (std::size_t k = 0; k < th.size(); ++k) sig[k] = 0.3 * std::sin(th[k] + 0.7) + 0.5;
        const SinusoidFit f = fit_sinusoid(th, sig);
        CHECK(std::abs(f.contrast - 0.3) < 1e-12);
        CHECK(std::abs(f.theta0 - 0.7) < 1e-12);
        CHECK(std::abs(f.offset - 0.5) < 1e-12);
    }
    SUBCASE("property over random parameters") {
        GaussianSource g(99);
        for (int trial = 0; trial < 50; ++trial) {
            const double c = 0.5 * std::abs(std::tanh(g.next()));
            const double t0 = std::remainder(3.0 * g.next(), units::kTwoPi);
            const double off = 0.5 + 0.1 * g.next();
            std::vector<double> sig(th.size());
            for (std::size_t k = 0; k < th.size(); ++k) sig[k] = c * std::sin(th[k] + t0) + off;
            const SinusoidFit f = fit_sinusoid(th, sig);
            CHECK(std::abs(f.contrast - c) < 1e-12);
            if (c > 1e-3) CHECK(std::abs(std::remainder(f.theta0 - t0, units::kTwoPi)) < 1e-10);
            CHECK(std::abs(f.offset - off) < 1e-12);
        }
    }
    SUBCASE("constant input has zero contrast") {
        const std::vector<double> flat(th.size(), 0.42);
        const SinusoidFit f = fit_sinusoid(th, flat);
        CHECK(std::abs(f.contrast) < 1e-14);
        CHECK(f.offset == doctest::Approx(0.42));
    }
    SUBCASE("noisy input, fixed seed") {
        const double sigma = 0.01;
        GaussianSource g(7);
        std::vector<double> sig(th.size());
        for (std::size_t k = 0; k < th.size(); ++k) sig[k] = 0.3 * std::sin(th[k] + 0.7) + 0.5 + sigma * g.next();
        const SinusoidFit f = fit_sinusoid(th, sig);
        const double bound = 3 * sigma / std::sqrt(static_cast<double>(th.size()));
        CHECK(std::abs(f.contrast - 0.3) <= bound);
        CHECK(std::abs(f.offset - 0.5) <= bound);
    }
    SUBCASE("rank deficiency") {
        const std::vector<double> same(8, 1.0);
        const std::vector<double> sig(8, 0.5);
        CHECK_THROWS_AS(fit_sinusoid(same, sig), FitError);
    }
}

TEST_CASE("decay fit") {
    std::vector<double> taus, cs;
    for (double tau = 0.0; tau <= 3000.0; tau += 10.0) {
        taus.push_back(tau);
        cs.push_back(0.5 * std::exp(-tau * 1e-3 / 1.41));
    }
    const DecayFit f = fit_decay(taus, cs);
    CHECK(f.t2_eff_us == doctest::Approx(1.41).epsilon(0.01));
    CHECK(f.c0 == doctest::Approx(0.5).epsilon(1e-9));

    const std::vector<double> two_t = {100.0, 600.0};
    const std::vector<double> two_c = {0.4 * std::exp(-0.1 / 2.0), 0.4 * std::exp(-0.6 / 2.0)};
    const DecayFit two = fit_decay(two_t, two_c);
    CHECK(two.t2_eff_us == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(two.c0 == doctest::Approx(0.4).epsilon(1e-12));

    const std::vector<double> flat(taus.size(), 0.3);
    const DecayFit capped = fit_decay(taus, flat);
    CHECK(capped.capped);
    CHECK(capped.t2_eff_us == kT2Cap_us);

    std::vector<double> bad = cs;
    bad[3] = 0.0;
    CHECK_THROWS_AS(fit_decay(taus, bad), DomainError);
}

TEST_CASE("idle plateau scan decays smoothly") {
    const DispersiveParams p = paper(-10.0, 2.0);
    EnvelopeSpec idle = kTemplate;
    idle.amplitude = 0.0;
    std::vector<double> taus;
    for (double t = 0.0; t <= 600.0; t += 20.0) taus.push_back(t);
    const BeatingScan s = scan_plateau(p, idle, taus, false, 10.0);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        CHECK(std::abs(s.t_total_ns[k] - (taus[k] + 10.0 + ringdown_window_ns(p))) <= 0.25);
        CHECK(s.points[k].contrast == doctest::Approx(0.5 * std::exp(-s.t_total_ns[k] * 1e-3 / p.t2_us)).epsilon(1e-9));
    }
    const DecayFit f = fit_decay(taus, contrasts_of(s));
    CHECK(f.t2_eff_us == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("detuned pulse beats at the detuning and DRAG removes it") {
    const DispersiveParams p = paper(-10.0);
    std::vector<double> taus;
    for (double t = 0.0; t <= 800.0; t += 5.0) taus.push_back(t);
    const BeatingScan plain = scan_plateau(p, kTemplate, taus, false, 25.0);
    const BeatingScan drag = scan_plateau(p, kTemplate, taus, true, 25.0);
    const auto cp = contrasts_of(plain);
    const auto cd = contrasts_of(drag);
    CHECK(beat_frequency(taus, cp, 1.0, 0.01) == doctest::Approx(10.0).epsilon(0.1));
    CHECK(modulation_depth(taus, cp, 100.0) >= 5.0 * modulation_depth(taus, cd, 100.0));
    CHECK(fit_decay(taus, cd).t2_eff_us > effective_decay_us(taus, cp));

    EnvelopeSpec resonant = kTemplate;
    CHECK_THROWS_AS(scan_plateau(paper(0.0), resonant, taus, true, 25.0), UndefinedNotchError);
}

TEST_CASE("noisy scans are reproducible per seed") {
    const DispersiveParams p = paper(-10.0);
    const std::vector<double> taus = {0.0, 50.0, 100.0, 150.0};
    const NoiseModel noise{16, 0.02, 1234};
    const BeatingScan a = scan_plateau(p, kTemplate, taus, false, 25.0, noise);
    const BeatingScan b = scan_plateau(p, kTemplate, taus, false, 25.0, noise);
    const BeatingScan c = scan_plateau(p, kTemplate, taus, false, 25.0, NoiseModel{16, 0.02, 1235});
    bool differs = false;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        CHECK(a.points[k].contrast == b.points[k].contrast);
        CHECK(a.points[k].theta0 == b.points[k].theta0);
        differs = differs || a.points[k].contrast != c.points[k].contrast;
    }
    CHECK(differs);
    CHECK(mix_seed(1234, 0) != mix_seed(1234, 1));
}

TEST_CASE("dominant frequency of a pure tone") {
    std::vector<double> taus, v;
    for (double t = 0.0; t < 1000.0; t += 5.0) {
        taus.push_back(t);
        v.push_back(1.0 + 0.3 * std::cos(units::kTwoPi * 7.0e-3 * t));
    }
    CHECK(dominant_frequency(taus, v, 0.5, 0.01) == doctest::Approx(7.0).epsilon(0.01));
}
