#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdrag/dispersive.hpp"
#include "rdrag/waveform.hpp"

namespace rdrag {

/// Phase-swept Ramsey fringe: excited-state probability per phase of the
/// second pi/2 pulse.
struct RamseySweep {
    std::vector<double> thetas;
    std::vector<double> signal;
    double t_total_ns = 0.0;  // pulse plus simulated ring-down
};

/// Fitted fringe c sin(theta + theta0) + offset, with P_e = 2c.
struct RamseyPoint {
    double contrast = 0.0;
    double theta0 = 0.0;
    double pe = 0.0;
};

struct BeatingScan {
    std::vector<double> taus_ns;        // plateau durations
    std::vector<double> t_total_ns;     // pulse + ring-down window per tau
    std::vector<RamseyPoint> points;
    bool drag_enabled = false;
};

/// Qubit coherence after a pseudo-readout pulse and its ring-down window:
/// C = exp(-D + i phi - T_tot / T2).
struct Coherence {
    double dephasing = 0.0;     // D
    double stark_phase = 0.0;   // phi, radians
    double t_total_ns = 0.0;    // pulse + ring-down
    double magnitude = 0.0;     // |C|
};

Coherence coherence_factor(const DispersiveParams& params, const IQWaveform& pulse,
                           double amp_cal);

/// signal(theta) = 1/2 - |C|/2 sin(theta + phi + pi) on n_theta uniform phases
/// in [0, 2 pi), plus Gaussian noise of scale noise_sigma from
/// GaussianSource(seed). The pi offset makes the fitted theta0 equal the
/// accumulated Stark phase phi.
RamseySweep simulate_ramsey_point(const DispersiveParams& params, const IQWaveform& pulse,
                                  double amp_cal, std::size_t n_theta, double noise_sigma,
                                  std::uint64_t seed);

struct SinusoidFit {
    double contrast = 0.0;
    double theta0 = 0.0;  // wrapped to (-pi, pi]
    double offset = 0.0;
};

/// Linear least squares onto {sin, cos, 1}. Throws FitError when the basis is
/// rank deficient (fewer than three distinct phases).
SinusoidFit fit_sinusoid(std::span<const double> thetas, std::span<const double> signal);

RamseyPoint to_ramsey_point(const SinusoidFit& fit);

struct NoiseModel {
    std::size_t n_theta = 16;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Ramsey contrast and phase versus plateau duration. The template's plateau is
/// replaced by each tau. With DRAG the notch is placed on the resonator
/// (notch = resonator_baseband_mhz(params)), which must therefore be nonzero.
/// Point k draws its noise from mix_seed(noise.seed, k).
BeatingScan scan_plateau(const DispersiveParams& params, const EnvelopeSpec& pulse_template,
                         std::span<const double> taus_ns, bool drag, double amp_cal,
                         const NoiseModel& noise = {});

/// Value returned by fit_decay when the contrast does not decay.
inline constexpr double kT2Cap_us = 1e9;

struct DecayFit {
    double t2_eff_us = 0.0;
    double c0 = 0.0;
    bool capped = false;
};

/// Log-linear least-squares fit of c0 exp(-tau / T2eff). Needs >= 2 points and
/// strictly positive contrasts (DomainError otherwise).
DecayFit fit_decay(std::span<const double> taus_ns, std::span<const double> contrasts);

/// Frequency (MHz) of the largest DTFT magnitude of values - mean, searched on
/// a uniform grid from f_min to the Nyquist frequency of the tau grid.
double dominant_frequency(std::span<const double> taus_ns, std::span<const double> values,
                          double f_min_mhz, double f_step_mhz);

/// (max - min) / mean of contrast / fitted-envelope over the first
/// `window_ns` of the scan.
double modulation_depth(std::span<const double> taus_ns, std::span<const double> contrasts,
                        double window_ns);

/// Effective decay time (us) of a beating scan: the last tau, relative to the
/// first, at which the contrast still exceeds contrasts[0] / e, log-interpolated
/// to the next sample. Unlike fit_decay it is not pulled around by beating
/// dips. Returns kT2Cap_us when the contrast never drops below that level.
double effective_decay_us(std::span<const double> taus_ns, std::span<const double> contrasts);

/// Beat frequency (MHz): dominant_frequency of the contrast divided by its
/// fit_decay envelope, searched from f_min_mhz upwards.
double beat_frequency(std::span<const double> taus_ns, std::span<const double> contrasts,
                      double f_min_mhz, double f_step_mhz);

std::vector<double> contrasts_of(const BeatingScan& scan);

}  // namespace rdrag
