#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rdrag {

using Complex = std::complex<double>;

/// Cosine-flattop probe envelope. Times in ns, amplitude normalized to [0, 1].
///
/// Rise and fall are given per edge. The pulse starts at t = 0 and lasts
/// rise_ns + plateau_ns + fall_ns.
struct EnvelopeSpec {
    double amplitude = 1.0;
    double rise_ns = 5.0;
    double plateau_ns = 200.0;
    double fall_ns = 5.0;
    double dt_ns = 0.1;

    double duration_ns() const { return rise_ns + plateau_ns + fall_ns; }

    // N = round(duration / dt) + 1 samples at t = n * dt.
    std::size_t sample_count() const;

    // Throws ValidationError naming the offending field.
    void validate() const;

    // Analytic envelope and its time derivative (per ns) at time t.
    double value_at(double t_ns) const;
    double derivative_at(double t_ns) const;
};

/// Uniformly sampled complex baseband envelope. Samples sit at
/// t_start + n * dt for n = 0..N-1; the carrier is implicit.
class IQWaveform {
public:
    IQWaveform(std::vector<Complex> samples, double dt_ns, double t_start_ns = 0.0);

    std::span<const Complex> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double dt_ns() const { return dt_ns_; }
    double t_start_ns() const { return t_start_ns_; }
    double time_ns(std::size_t n) const { return t_start_ns_ + static_cast<double>(n) * dt_ns_; }
    double duration_ns() const { return static_cast<double>(samples_.size() - 1) * dt_ns_; }

    const Complex& operator[](std::size_t n) const { return samples_[n]; }

    IQWaveform scaled(Complex factor) const;

    // max |s_n|^2 of the in-phase (real) component.
    double peak_in_phase_power() const;

    bool same_grid(const IQWaveform& other) const;

private:
    std::vector<Complex> samples_;
    double dt_ns_;
    double t_start_ns_;
};

/// Notch frequency is an ordinary baseband frequency in MHz; the angular
/// notch used by the transform is 2*pi*notch_mhz.
struct DragParams {
    double notch_mhz = 0.0;
    bool enabled = false;

    void validate() const;
};

IQWaveform sample_envelope(const EnvelopeSpec& spec);

/// Analytic derivative of the envelope (per ns) on the sample_envelope grid.
IQWaveform envelope_derivative(const EnvelopeSpec& spec);

/// W + i * dW/dt / eta with eta = 2*pi*notch (rad/ns). Returns the envelope
/// unchanged when DRAG is disabled.
IQWaveform apply_drag(const IQWaveform& envelope, const IQWaveform& derivative,
                      const DragParams& drag);

/// Convenience: sample_envelope + envelope_derivative + apply_drag.
IQWaveform build_pulse(const EnvelopeSpec& spec, const DragParams& drag);

/// dt * sum |s_n|^2, in ns (samples are dimensionless).
double waveform_energy(const IQWaveform& wf);

}  // namespace rdrag
