#include <doctest.h>

#include <cmath>
#include <random>

#include "rdrag/dephasing.hpp"
#include "rdrag/dispersive.hpp"
#include "rdrag/errors.hpp"
#include "rdrag/rng.hpp"
#include "rdrag/spectrum.hpp"
#include "rdrag/units.hpp"

using namespace rdrag;
using units::angular;

namespace {

DispersiveParams paper(double delta_d = 0.0) { return {2.2, 1.05, delta_d, 18.0}; }

// Closed form 2 kappa chi^2 |eps|^2 / |D|^2 with
// D = (i(d - chi) + k/2)(-i(d + chi) + k/2), written out independently.
double eq2(double kappa_mhz, double chi_mhz, double delta_mhz, double eps) {
    const double k = angular(kappa_mhz), c = angular(chi_mhz), d = angular(delta_mhz);
    const double re = k * k / 4 + d * d - c * c;
    const double im = k * c;
    return 2.0 * k * c * c * eps * eps / (re * re + im * im);
}

// Smooth, band-limited test drive: Gaussian with a slow phase ramp.
IQWaveform gaussian_drive(double dt_ns) {
    const double total = 240.0, sigma = 20.0;
    const auto n = static_cast<std::size_t>(std::lround(total / dt_ns)) + 1;
    std::vector<Complex> s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt_ns;
        s[k] = std::exp(-0.5 * std::pow((t - total / 2) / sigma, 2)) *
               std::polar(1.0, units::kTwoPi * 3e-3 * t);
    }
    return IQWaveform(s, dt_ns);
}

IQWaveform constant_drive(double duration_ns, double dt_ns) {
    const EnvelopeSpec spec{1.0, 5.0, duration_ns, 5.0, dt_ns};
    return sample_envelope(spec);
}

}  // namespace

TEST_CASE("steady state closed forms") {
    const auto [g0, e0] = steady_state_alpha(paper(), Complex(0.0, 0.0));
    CHECK(g0 == Complex(0.0, 0.0));
    CHECK(e0 == Complex(0.0, 0.0));

    const DispersiveParams sym{2.2, 0.0, 0.0, 18.0};
    const Complex eps(0.3, 1.1);
    const auto [gs, es] = steady_state_alpha(sym, eps);
    CHECK(std::abs(gs - eps / (angular(2.2) / 2)) < 1e-15);
    CHECK(gs == es);

    // Paper parameters on resonance, A = 0.1, amp_cal = 1.
    const Complex drive = drive_strength(paper(), 1.0, 0.1);
    CHECK(std::abs(drive - Complex(0.0, 0.1 * std::sqrt(angular(2.2)))) < 1e-15);
    const auto [ag, ae] = steady_state_alpha(paper(), drive);
    const Complex want_g = drive / Complex(angular(2.2) / 2, -angular(1.05));
    const Complex want_e = drive / Complex(angular(2.2) / 2, angular(1.05));
    CHECK(std::abs(ag - want_g) < 1e-15);
    CHECK(std::abs(ae - want_e) < 1e-15);
}

TEST_CASE("pointer-state identity reproduces the monochromatic rate") {
    for (double dd : {-10.0, -2.1, 0.0, 1.05, 6.0}) {
        for (double a : {0.05, 0.3, 1.0, 3.0, 10.0}) {
            const DispersiveParams p = paper(dd);
            const Complex eps = drive_strength(p, 1.0, a);
            const auto [ag, ae] = steady_state_alpha(p, eps);
            const double identity = 2.0 * angular(p.chi_mhz) * std::imag(ag * std::conj(ae));
            const double rate = monochromatic_rate(p, std::abs(eps));
            CHECK(std::abs(identity / rate - 1.0) <= 1e-12);
            CHECK(std::abs(eq2(2.2, 1.05, dd, std::abs(eps)) / rate - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("zero drive gives a zero trajectory") {
    const IQWaveform zero(std::vector<Complex>(1000, 0.0), 0.5);
    const CavityTrajectory t = simulate_cavity(paper(-3.0), zero, 2.0, 100.0);
    CHECK(t.times_ns.size() == 1200);
    for (std::size_t n = 0; n < t.times_ns.size(); ++n) {
        CHECK(t.alpha_g[n] == Complex(0.0, 0.0));
        CHECK(t.alpha_e[n] == Complex(0.0, 0.0));
    }
    CHECK(snr_proxy(t) == 0.0);
}

TEST_CASE("cavity ODE is linear in the drive") {
    const IQWaveform wf = build_pulse(EnvelopeSpec{1.0, 5.0, 100.0, 5.0, 0.5}, DragParams{10.0, true});
    const CavityTrajectory one = simulate_cavity(paper(-10.0), wf, 1.5, 200.0);
    const CavityTrajectory two = simulate_cavity(paper(-10.0), wf, 3.0, 200.0);
    for (std::size_t n = 1; n < one.times_ns.size(); ++n) {
        CHECK(std::abs(two.alpha_g[n] - 2.0 * one.alpha_g[n]) <= 1e-12 * std::abs(2.0 * one.alpha_g[n]));
        CHECK(std::abs(two.alpha_e[n] - 2.0 * one.alpha_e[n]) <= 1e-12 * std::abs(2.0 * one.alpha_e[n]));
    }
}

TEST_CASE("constant drive settles on the steady state") {
    for (double dd : {-10.0, 0.0, 3.0}) {
        const DispersiveParams p = paper(dd);
        // 10 / (kappa/2pi): the transient has decayed by exp(-10 pi).
        const double t_eval = 10.0 / p.kappa_mhz * 1e3;
        const double dt = 0.5;
        const CavityTrajectory t = simulate_cavity(p, constant_drive(t_eval + 50.0, dt), 1.0, 0.0);
        const auto k = static_cast<std::size_t>(std::lround(t_eval / dt));
        const auto [ag, ae] = steady_state_alpha(p, drive_strength(p, 1.0, 1.0));
        CHECK(std::abs(t.alpha_g[k] - ag) <= 1e-3 * std::abs(ag));
        CHECK(std::abs(t.alpha_e[k] - ae) <= 1e-3 * std::abs(ae));
    }
}

TEST_CASE("photons decay at kappa after the drive stops") {
    const DispersiveParams p = paper(-2.0);
    const IQWaveform wf = constant_drive(500.0, 0.5);
    const CavityTrajectory t = simulate_cavity(p, wf, 1.0, 1000.0);
    const std::size_t off = wf.size() - 1;
    const double n0 = std::norm(t.alpha_g[off]);
    for (std::size_t k = off + 100; k < t.times_ns.size(); k += 250) {
        const double elapsed_us = (t.times_ns[k] - t.times_ns[off]) * 1e-3;
        const double want = n0 * std::exp(-angular(p.kappa_mhz) * elapsed_us);
        CHECK(std::norm(t.alpha_g[k]) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("RK4 converges at fourth order") {
    const DispersiveParams p = paper(-10.0);
    SUBCASE("smooth drive") {
        std::vector<Complex> ends;
        for (double dt : {0.8, 0.4, 0.2}) ends.push_back(simulate_cavity(p, gaussian_drive(dt), 5.0, 0.0).alpha_e.back());
        const double order = std::log2(std::abs(ends[0] - ends[1]) / std::abs(ends[1] - ends[2]));
        CHECK(order == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("DRAG pulse with resolved edges") {
        std::vector<Complex> ends;
        for (double dt : {0.2, 0.1, 0.05}) {
            const IQWaveform wf = build_pulse(EnvelopeSpec{1.0, 8.0, 200.0, 8.0, dt}, DragParams{10.0, true});
            ends.push_back(simulate_cavity(p, wf, 5.0, 0.0).alpha_e.back());
        }
        const double order = std::log2(std::abs(ends[0] - ends[1]) / std::abs(ends[1] - ends[2]));
        CHECK(order > 3.5);
        CHECK(order < 4.5);
    }
}

TEST_CASE("coarse steps are rejected") {
    // f_max = 10 + 1.05 MHz: dt must stay below ~4.5 ns.
    const IQWaveform wf = sample_envelope(EnvelopeSpec{1.0, 50.0, 100.0, 50.0, 5.0});
    CHECK_THROWS_AS(simulate_cavity(paper(10.0), wf, 1.0, 0.0), ResolutionError);
    CHECK_NOTHROW(simulate_cavity(paper(1.0), wf, 1.0, 0.0));
}

TEST_CASE("snr proxy") {
    const IQWaveform wf = sample_envelope(EnvelopeSpec{1.0, 5.0, 500.0, 5.0, 0.5});
    const DispersiveParams no_chi{2.2, 0.0, 0.0, 18.0};
    CHECK(snr_proxy(simulate_cavity(no_chi, wf, 1.0, 100.0)) == 0.0);
    CHECK(snr_proxy(simulate_cavity(paper(), wf, 1.0, 100.0)) > 0.0);
}

TEST_CASE("DRAG leaves the resonant readout signal intact") {
    const EnvelopeSpec spec{1.0, 5.0, 2000.0, 5.0, 0.1};
    const DispersiveParams p = paper();
    const double ring = ringdown_window_ns(p);
    const double ref = snr_proxy(simulate_cavity(p, build_pulse(spec, DragParams{}), 1.0, ring));
    for (double notch : {13.0, 50.0, 201.0}) {
        const double snr = snr_proxy(simulate_cavity(p, build_pulse(spec, DragParams{notch, true}), 1.0, ring));
        CHECK(std::abs(snr / ref - 1.0) <= 0.05);
    }
}

TEST_CASE("S21 response") {
    const DispersiveParams p = paper();
    const std::vector<double> freqs = {-1.05, 1.05, -500.0, 500.0};
    const auto g = s21_response(p, freqs, QubitState::kGround);
    const auto e = s21_response(p, freqs, QubitState::kExcited);
    CHECK(std::abs(g[0]) < 1e-15);
    CHECK(std::abs(e[1]) < 1e-15);
    CHECK(std::abs(g[2] - 1.0) < 1e-2);
    CHECK(std::abs(e[3] - 1.0) < 1e-2);
}

TEST_CASE("S21 fit round trips") {
    const auto fit_for = [](double kappa, double two_chi, double sigma, std::uint64_t seed) {
        const DispersiveParams p{kappa, two_chi / 2.0, 0.0, 18.0};
        const double half = two_chi / 2 + 5 * kappa;
        const std::vector<double> freqs = uniform_grid(-half, half, kappa / 20.0);
        auto g = s21_response(p, freqs, QubitState::kGround);
        auto e = s21_response(p, freqs, QubitState::kExcited);
        if (sigma > 0.0) {
            GaussianSource noise(seed);
            for (auto* trace : {&g, &e}) {
                for (auto& v : *trace) v += Complex(sigma * noise.next(), sigma * noise.next());
            }
        }
        return fit_s21(freqs, g, e);
    };

    SUBCASE("paper linewidth and shift") {
        const S21Fit f = fit_for(2.2, 2.1, 0.0, 0);
        CHECK(f.kappa_mhz == doctest::Approx(2.2).epsilon(0.01));
        CHECK(f.two_chi_mhz == doctest::Approx(2.1).epsilon(0.01));
    }
    SUBCASE("noiseless identity over [0.5, 10]^2") {
        std::mt19937_64 rng(20240917);
        std::uniform_real_distribution<double> u(0.5, 10.0);
        for (int trial = 0; trial < 12; ++trial) {
            const double kappa = u(rng), two_chi = u(rng);
            const S21Fit f = fit_for(kappa, two_chi, 0.0, 0);
            CHECK(f.kappa_mhz == doctest::Approx(kappa).epsilon(1e-6));
            CHECK(f.two_chi_mhz == doctest::Approx(two_chi).epsilon(1e-6));
        }
    }
    SUBCASE("seeded noise") {
        const S21Fit f = fit_for(2.2, 2.1, 0.01, 42);
        CHECK(f.kappa_mhz == doctest::Approx(2.2).epsilon(0.05));
        CHECK(f.two_chi_mhz == doctest::Approx(2.1).epsilon(0.05));
    }
    SUBCASE("no dip") {
        const std::vector<double> freqs = uniform_grid(-10.0, 10.0, 0.1);
        const std::vector<Complex> flat(freqs.size(), Complex(1.0, 0.0));
        CHECK_THROWS_AS(fit_s21(freqs, flat, flat), FitError);
    }
}
