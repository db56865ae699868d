#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rdrag/dispersive.hpp"
#include "rdrag/waveform.hpp"

namespace rdrag {

/// Quadrature grid for the spectrally broadened rate. The integration
/// variable is the detuning of a spectral component from the resonator; the
/// grid spans [min(0, delta_d) - half_span, max(0, delta_d) + half_span].
struct IntegrationGrid {
    double step_mhz = 0.05;
    double half_span_mhz = 200.0;
};

/// Steady-state dephasing rate (1/us) for a monochromatic drive of strength
/// |eps| (rad/us) at detuning params.delta_d:
///   2 |eps|^2 chi^2 kappa / ([(D + chi)^2 + (kappa/2)^2] [(D - chi)^2 + (kappa/2)^2])
double monochromatic_rate(const DispersiveParams& params, double eps_mag);

/// Per-unit-|eps|^2 kernel of monochromatic_rate at angular detuning
/// `delta_rad_per_us`.
double dephasing_kernel(const DispersiveParams& params, double delta_rad_per_us);

/// Spectrally broadened dephasing rate (1/us).
///
/// Each spectral component at baseband f is detuned from the resonator by
/// Delta = delta_d + f (see resonator_baseband_mhz) and contributes with
/// the monochromatic kernel at that Delta. The spectral weight density is
///   rho(w) = kappa amp_cal^2 |S(w)|^2 / (2 pi T_eff),
/// with S the pulse transform and T_eff the equivalent rectangular duration
/// energy(I)/max|I|^2 of the in-phase envelope, so that a long constant pulse
/// reproduces monochromatic_rate. Rectangle-rule quadrature.
///
/// Throws ResolutionError if the step exceeds kappa/20 or 1/(4 T).
double spectral_rate(const DispersiveParams& params, const IQWaveform& pulse, double amp_cal,
                     const IntegrationGrid& grid = {});

/// Same, with an explicit equivalent duration in ns.
double spectral_rate(const DispersiveParams& params, const IQWaveform& pulse, double amp_cal,
                     const IntegrationGrid& grid, double t_eff_ns);

/// Equivalent rectangular duration (ns) of the in-phase envelope.
double equivalent_duration_ns(const IQWaveform& pulse);

/// exp(-(gamma + 1/t2) tau), gamma in 1/us, t2 and tau in us.
double excited_population(double gamma, double t2_us, double tau_us);

/// Ring-down window 10/kappa (kappa angular) in ns.
double ringdown_window_ns(const DispersiveParams& params);

/// Accumulated Stark phase integral of 2 chi Re[alpha_g conj(alpha_e)] dt
/// over a trajectory (radians).
double stark_phase(const CavityTrajectory& traj);

/// Accumulated measurement-induced dephasing exponent, integral of
/// 2 chi Im[alpha_g conj(alpha_e)] dt (dimensionless).
double dephasing_exponent(const CavityTrajectory& traj);

/// P_e and theta0 over amplitude x detuning. Row-major: index a * detunings + d.
struct DephasingMap {
    std::vector<double> amps;
    std::vector<double> detunings_mhz;
    std::vector<double> pe;
    std::vector<double> theta0;
    std::vector<double> gamma;  // 1/us, the rate behind each pe cell
    bool drag_enabled = false;

    double pe_at(std::size_t a, std::size_t d) const { return pe[a * detunings_mhz.size() + d]; }
    double theta0_at(std::size_t a, std::size_t d) const {
        return theta0[a * detunings_mhz.size() + d];
    }
};

struct MapOptions {
    IntegrationGrid grid{};
    // Cavity-simulation window appended after the pulse for theta0.
    // Defaults to ringdown_window_ns when unset.
    std::optional<double> ringdown_ns{};
};

/// Detuning grid with exact zeros removed: a DRAG map cannot place a notch on
/// a resonator driven at its own frequency.
std::vector<double> without_zero_detuning(std::span<const double> detunings_mhz);

/// Builds the dephasing map. With DRAG on the notch of every cell is placed on
/// the resonator (notch = resonator_baseband_mhz), so zero detuning is
/// rejected with UndefinedNotchError. `pulse_spec.amplitude` is replaced by each grid value.
DephasingMap dephasing_map(const DispersiveParams& params, const EnvelopeSpec& pulse_spec,
                           std::span<const double> amps, std::span<const double> detunings_mhz,
                           bool drag, double amp_cal, const MapOptions& options = {});

}  // namespace rdrag
