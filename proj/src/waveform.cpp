#include "rdrag/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rdrag/errors.hpp"
#include "rdrag/units.hpp"

namespace rdrag {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* field, const std::string& detail) {
    if (!ok) throw ValidationError(field, detail);
}

}  // namespace

std::size_t EnvelopeSpec::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_ns() / dt_ns)) + 1;
}

void EnvelopeSpec::validate() const {
    require(std::isfinite(amplitude) && amplitude >= 0.0 && amplitude <= 1.0, "amplitude",
            "must lie in [0, 1]");
    require(std::isfinite(rise_ns) && rise_ns >= 0.0, "rise_ns", "must be >= 0");
    require(std::isfinite(plateau_ns) && plateau_ns >= 0.0, "plateau_ns", "must be >= 0");
    require(std::isfinite(fall_ns) && fall_ns >= 0.0, "fall_ns", "must be >= 0");
    require(duration_ns() > 0.0, "duration", "total duration must be > 0");
    require(std::isfinite(dt_ns) && dt_ns > 0.0, "dt_ns", "must be > 0");
    // Each nonzero edge needs at least 10 samples.
    for (const auto& [edge, name] : {std::pair{rise_ns, "rise_ns"}, std::pair{fall_ns, "fall_ns"}}) {
        if (edge > 0.0) {
            require(dt_ns <= edge / 10.0 * (1.0 + 1e-12), "dt_ns",
                    std::string("edge ") + name + " resolved by fewer than 10 samples");
        }
    }
}

double EnvelopeSpec::value_at(double t) const {
    const double total = duration_ns();
    if (t < 0.0 || t > total) return 0.0;
    if (t < rise_ns) return amplitude * 0.5 * (1.0 - std::cos(kPi * t / rise_ns));
    const double fall_start = rise_ns + plateau_ns;
    if (t <= fall_start) return amplitude;
    return amplitude * 0.5 * (1.0 + std::cos(kPi * (t - fall_start) / fall_ns));
}

double EnvelopeSpec::derivative_at(double t) const {
    const double total = duration_ns();
    if (t < 0.0 || t > total) return 0.0;
    if (t < rise_ns) return amplitude * kPi / (2.0 * rise_ns) * std::sin(kPi * t / rise_ns);
    const double fall_start = rise_ns + plateau_ns;
    if (t <= fall_start) return 0.0;
    return -amplitude * kPi / (2.0 * fall_ns) * std::sin(kPi * (t - fall_start) / fall_ns);
}

IQWaveform::IQWaveform(std::vector<Complex> samples, double dt_ns, double t_start_ns)
    : samples_(std::move(samples)), dt_ns_(dt_ns), t_start_ns_(t_start_ns) {
    if (samples_.empty()) throw ValidationError("samples", "waveform must be non-empty");
    if (!(std::isfinite(dt_ns_) && dt_ns_ > 0.0)) throw ValidationError("dt_ns", "must be > 0");
    if (!std::isfinite(t_start_ns_)) throw ValidationError("t_start_ns", "must be finite");
}

IQWaveform IQWaveform::scaled(Complex factor) const {
    std::vector<Complex> out(samples_);
    for (auto& s : out) s *= factor;
    return IQWaveform(std::move(out), dt_ns_, t_start_ns_);
}

double IQWaveform::peak_in_phase_power() const {
    double peak = 0.0;
    for (const auto& s : samples_) peak = std::max(peak, s.real() * s.real());
    return peak;
}

bool IQWaveform::same_grid(const IQWaveform& other) const {
    return samples_.size() == other.samples_.size() && dt_ns_ == other.dt_ns_ &&
           t_start_ns_ == other.t_start_ns_;
}

void DragParams::validate() const {
    if (!std::isfinite(notch_mhz)) throw ValidationError("notch_mhz", "must be finite");
    if (enabled && notch_mhz == 0.0) {
        throw UndefinedNotchError("DRAG notch frequency is zero");
    }
}

IQWaveform sample_envelope(const EnvelopeSpec& spec) {
    spec.validate();
    const std::size_t n = spec.sample_count();
    std::vector<Complex> samples(n);
    for (std::size_t k = 0; k < n; ++k) {
        samples[k] = spec.value_at(static_cast<double>(k) * spec.dt_ns);
    }
    return IQWaveform(std::move(samples), spec.dt_ns);
}

IQWaveform envelope_derivative(const EnvelopeSpec& spec) {
    spec.validate();
    const std::size_t n = spec.sample_count();
    std::vector<Complex> samples(n);
    for (std::size_t k = 0; k < n; ++k) {
        samples[k] = spec.derivative_at(static_cast<double>(k) * spec.dt_ns);
    }
    return IQWaveform(std::move(samples), spec.dt_ns);
}

IQWaveform apply_drag(const IQWaveform& envelope, const IQWaveform& derivative,
                      const DragParams& drag) {
    drag.validate();
    if (!envelope.same_grid(derivative)) {
        throw GridMismatchError("envelope and derivative are sampled on different grids");
    }
    if (!drag.enabled) return envelope;

    const double eta = units::angular_per_ns(drag.notch_mhz);
    const Complex quad_gain(0.0, 1.0 / eta);
    std::vector<Complex> out(envelope.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = envelope[n] + quad_gain * derivative[n];
    }
    return IQWaveform(std::move(out), envelope.dt_ns(), envelope.t_start_ns());
}

IQWaveform build_pulse(const EnvelopeSpec& spec, const DragParams& drag) {
    return apply_drag(sample_envelope(spec), envelope_derivative(spec), drag);
}

double waveform_energy(const IQWaveform& wf) {
    double sum = 0.0;
    for (const auto& s : wf.samples()) sum += std::norm(s);
    return wf.dt_ns() * sum;
}

}  // namespace rdrag
