#include "rdrag/dephasing.hpp"

#include <algorithm>
#include <cmath>

#include "rdrag/errors.hpp"
#include "rdrag/spectrum.hpp"
#include "rdrag/units.hpp"

namespace rdrag {

double dephasing_kernel(const DispersiveParams& params, double delta) {
    const double chi = units::angular(params.chi_mhz);
    const double kappa = units::angular(params.kappa_mhz);
    const double hk2 = 0.25 * kappa * kappa;
    const double plus = (delta + chi) * (delta + chi) + hk2;
    const double minus = (delta - chi) * (delta - chi) + hk2;
    return 2.0 * chi * chi * kappa / (plus * minus);
}

double monochromatic_rate(const DispersiveParams& params, double eps_mag) {
    params.validate();
    return eps_mag * eps_mag * dephasing_kernel(params, units::angular(params.delta_d_mhz));
}

double equivalent_duration_ns(const IQWaveform& pulse) {
    const double peak = pulse.peak_in_phase_power();
    if (peak == 0.0) return 0.0;
    double energy = 0.0;
    for (const auto& s : pulse.samples()) energy += s.real() * s.real();
    return pulse.dt_ns() * energy / peak;
}

double spectral_rate(const DispersiveParams& params, const IQWaveform& pulse, double amp_cal,
                     const IntegrationGrid& grid) {
    return spectral_rate(params, pulse, amp_cal, grid, equivalent_duration_ns(pulse));
}

double spectral_rate(const DispersiveParams& params, const IQWaveform& pulse, double amp_cal,
                     const IntegrationGrid& grid, double t_eff_ns) {
    params.validate();
    if (!(grid.step_mhz > 0.0)) throw ValidationError("step_mhz", "must be > 0");
    if (!(grid.half_span_mhz > 0.0)) throw ValidationError("half_span_mhz", "must be > 0");
    const double duration_us = units::ns_to_us(pulse.duration_ns());
    if (grid.step_mhz > params.kappa_mhz / 20.0) {
        throw ResolutionError("integration step exceeds kappa/20");
    }
    if (duration_us > 0.0 && grid.step_mhz > 1.0 / (4.0 * duration_us)) {
        throw ResolutionError("integration step exceeds 1/(4 T_pulse)");
    }
    if (t_eff_ns <= 0.0) return 0.0;  // no in-phase drive

    // Delta grid (detuning of a component from the resonator), ascending.
    const double lo = std::min(0.0, params.delta_d_mhz) - grid.half_span_mhz;
    const double hi = std::max(0.0, params.delta_d_mhz) + grid.half_span_mhz;
    const std::vector<double> deltas = uniform_grid(lo, hi, grid.step_mhz);

    // In the cavity frame a baseband component at f is detuned from the
    // resonator by Delta = delta_d + f.
    std::vector<double> freqs(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) freqs[k] = deltas[k] - params.delta_d_mhz;
    const SpectrumGrid spec = dtft(pulse, freqs);

    const double kappa = units::angular(params.kappa_mhz);
    const double t_eff_us = units::ns_to_us(t_eff_ns);
    const double d_omega = units::angular(grid.step_mhz);
    const double weight_scale = kappa * amp_cal * amp_cal / (units::kTwoPi * t_eff_us);

    double sum = 0.0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double s_us = std::abs(spec.amps[k]) * 1e-3;  // ns -> us
        const double rho = weight_scale * s_us * s_us;
        sum += rho * dephasing_kernel(params, units::angular(deltas[k]));
    }
    return sum * d_omega;
}

double excited_population(double gamma, double t2_us, double tau_us) {
    if (!(gamma >= 0.0)) throw ValidationError("gamma", "must be >= 0");
    if (!(t2_us > 0.0)) throw ValidationError("t2_us", "must be > 0");
    if (!(tau_us >= 0.0)) throw ValidationError("tau_us", "must be >= 0");
    return std::exp(-(gamma + 1.0 / t2_us) * tau_us);
}

double ringdown_window_ns(const DispersiveParams& params) {
    return units::us_to_ns(10.0 / units::angular(params.kappa_mhz));
}

namespace {

template <class Part>
double pointer_overlap_integral(const CavityTrajectory& traj, Part part) {
    if (traj.times_ns.size() < 2) return 0.0;
    const double h = units::ns_to_us(traj.times_ns[1] - traj.times_ns[0]);
    const double two_chi = 2.0 * units::angular(traj.params.chi_mhz);
    double sum = 0.0;
    for (std::size_t n = 0; n < traj.alpha_g.size(); ++n) {
        sum += part(traj.alpha_g[n] * std::conj(traj.alpha_e[n]));
    }
    return two_chi * h * sum;
}

}  // namespace

double stark_phase(const CavityTrajectory& traj) {
    return pointer_overlap_integral(traj, [](Complex z) { return z.real(); });
}

double dephasing_exponent(const CavityTrajectory& traj) {
    return pointer_overlap_integral(traj, [](Complex z) { return z.imag(); });
}

std::vector<double> without_zero_detuning(std::span<const double> detunings_mhz) {
    std::vector<double> out;
    for (double d : detunings_mhz) {
        if (d != 0.0) out.push_back(d);
    }
    return out;
}

DephasingMap dephasing_map(const DispersiveParams& params, const EnvelopeSpec& pulse_spec,
                           std::span<const double> amps, std::span<const double> detunings_mhz,
                           bool drag, double amp_cal, const MapOptions& options) {
    params.validate();
    if (amps.empty()) throw ValidationError("amps", "empty amplitude axis");
    if (detunings_mhz.empty()) throw ValidationError("detunings_mhz", "empty detuning axis");
    if (drag) {
        for (double d : detunings_mhz) {
            if (d == 0.0) {
                throw UndefinedNotchError("DRAG map requested at zero detuning");
            }
        }
    }

    DephasingMap map;
    map.amps.assign(amps.begin(), amps.end());
    map.detunings_mhz.assign(detunings_mhz.begin(), detunings_mhz.end());
    map.drag_enabled = drag;
    const std::size_t cells = amps.size() * detunings_mhz.size();
    map.pe.resize(cells);
    map.theta0.resize(cells);
    map.gamma.resize(cells);

    const double ringdown = options.ringdown_ns.value_or(ringdown_window_ns(params));
    const double tau_us = units::ns_to_us(pulse_spec.duration_ns());

    for (std::size_t a = 0; a < amps.size(); ++a) {
        EnvelopeSpec spec = pulse_spec;
        spec.amplitude = amps[a];
        spec.validate();
        // The in-phase reference duration depends only on the envelope shape.
        EnvelopeSpec unit_spec = spec;
        unit_spec.amplitude = 1.0;
        const double t_eff = equivalent_duration_ns(sample_envelope(unit_spec));
        for (std::size_t d = 0; d < detunings_mhz.size(); ++d) {
            const DispersiveParams cell = params.with_detuning(detunings_mhz[d]);
            const DragParams drag_params{resonator_baseband_mhz(cell), drag};
            const IQWaveform pulse = build_pulse(spec, drag_params);

            const double gamma = spec.amplitude == 0.0
                                     ? 0.0
                                     : spectral_rate(cell, pulse, amp_cal, options.grid, t_eff);
            const std::size_t idx = a * detunings_mhz.size() + d;
            map.gamma[idx] = gamma;
            map.pe[idx] = excited_population(gamma, params.t2_us, tau_us);
            map.theta0[idx] = spec.amplitude == 0.0
                                  ? 0.0
                                  : stark_phase(simulate_cavity(cell, pulse, amp_cal, ringdown));
        }
    }
    return map;
}

}  // namespace rdrag
