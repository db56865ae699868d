#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rdrag/waveform.hpp"

namespace rdrag {

/// Dispersive qubit-resonator parameters. Frequencies are ordinary (x/2pi) in
/// MHz: kappa is the resonator linewidth, chi half the state-dependent pull
/// (the ground pointer resonance sits at -chi, the excited one at +chi),
/// delta_d = (w_r - w_d)/2pi. t2 is the bare qubit T2 in us.
struct DispersiveParams {
    double kappa_mhz = 2.2;
    double chi_mhz = 1.05;
    double delta_d_mhz = 0.0;
    double t2_us = 18.0;

    void validate() const;

    // Same parameters at a different drive detuning.
    DispersiveParams with_detuning(double delta_d_mhz) const;
};

enum class QubitState { kGround, kExcited };

/// Pointer-state cavity amplitudes alpha_g(t), alpha_e(t).
struct CavityTrajectory {
    std::vector<double> times_ns;
    std::vector<Complex> alpha_g;
    std::vector<Complex> alpha_e;
    DispersiveParams params;
};

/// Baseband frequency (MHz) at which the bare resonator sits in the cavity
/// frame: a waveform component at DTFT frequency +f drives the cavity at the
/// absolute frequency w_d - 2 pi f, so the resonator is at f = -delta_d.
/// DRAG notches that target a resonator are placed here.
inline double resonator_baseband_mhz(const DispersiveParams& params) {
    return -params.delta_d_mhz;
}

/// Drive strength eps = i sqrt(kappa) * amp_cal * amplitude, in rad/us.
/// amp_cal carries units of sqrt(1/us).
Complex drive_strength(const DispersiveParams& params, double amp_cal, Complex amplitude);

/// Steady-state amplitudes alpha_s = eps / (i (Delta_d + s chi) + kappa/2),
/// s = -1 (ground) and +1 (excited), angular units. Returns {alpha_g, alpha_e}.
std::pair<Complex, Complex> steady_state_alpha(const DispersiveParams& params, Complex eps);

/// Fixed-step RK4 integration of the two pointer-state amplitudes, driven by
/// eps(t) = i sqrt(kappa) amp_cal s(t), on the waveform grid and then for
/// `ringdown_ns` of free decay. The drive between samples is a cubic
/// interpolant of in-pulse samples; it is zero after the last sample.
///
/// Throws ResolutionError if dt > 1 / (20 f_max) with
/// f_max = max(|delta_d| + |chi|, kappa).
CavityTrajectory simulate_cavity(const DispersiveParams& params, const IQWaveform& drive,
                                 double amp_cal, double ringdown_ns);

/// Integral of |alpha_e - alpha_g|^2 over the trajectory (rectangle rule, us).
double snr_proxy(const CavityTrajectory& traj);

/// Notch-type feedline response S21(f) = 1 - (kappa/2) / (i (f - f_s) + kappa/2)
/// with f_s = -chi (ground) or +chi (excited). probe_freqs are relative to w_r.
std::vector<Complex> s21_response(const DispersiveParams& params,
                                  std::span<const double> probe_freqs_mhz, QubitState state);

struct S21Fit {
    double kappa_mhz = 0.0;     // mean of the per-state fits
    double two_chi_mhz = 0.0;   // f_e - f_g
    double f_ground_mhz = 0.0;
    double f_excited_mhz = 0.0;
    double kappa_ground_mhz = 0.0;
    double kappa_excited_mhz = 0.0;
    double residual_rms = 0.0;  // over both traces, complex residual
};

/// Levenberg-Marquardt fit of the s21_response model to both traces.
/// Throws FitError when no dip is present (min |S21| > 0.9) and
/// ResolutionError when fewer than 10 points fall within a linewidth of a dip.
S21Fit fit_s21(std::span<const double> freqs_mhz, std::span<const Complex> trace_g,
               std::span<const Complex> trace_e);

}  // namespace rdrag
