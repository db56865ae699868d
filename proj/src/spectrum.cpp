#include "rdrag/spectrum.hpp"

#include <cmath>

#include "rdrag/errors.hpp"
#include "rdrag/units.hpp"

namespace rdrag {

namespace {

// The running phasor is re-anchored from an exact polar value this often to
// keep the accumulated rotation error near machine precision.
constexpr std::size_t kReanchorStride = 256;

Complex transform_one(const IQWaveform& wf, double f_mhz) {
    const double omega = -units::angular_per_ns(f_mhz);  // rad/ns
    const Complex step = std::polar(1.0, omega * wf.dt_ns());
    Complex sum(0.0, 0.0);
    Complex phasor;
    const auto samples = wf.samples();
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (n % kReanchorStride == 0) {
            phasor = std::polar(1.0, omega * wf.time_ns(n));
        } else {
            phasor *= step;
        }
        sum += samples[n] * phasor;
    }
    return wf.dt_ns() * sum;
}

}  // namespace

void SpectrumGrid::validate() const {
    if (freqs_mhz.size() != amps.size()) {
        throw ValidationError("amps", "length differs from freqs");
    }
    for (std::size_t k = 1; k < freqs_mhz.size(); ++k) {
        if (!(freqs_mhz[k] > freqs_mhz[k - 1])) {
            throw ValidationError("freqs_mhz", "must be strictly increasing");
        }
    }
}

SpectrumGrid dtft(const IQWaveform& wf, std::span<const double> freqs_mhz) {
    if (freqs_mhz.empty()) throw ValidationError("freqs_mhz", "frequency list is empty");
    SpectrumGrid out;
    out.freqs_mhz.assign(freqs_mhz.begin(), freqs_mhz.end());
    out.amps.resize(freqs_mhz.size());
    for (std::size_t k = 0; k < freqs_mhz.size(); ++k) {
        if (!std::isfinite(freqs_mhz[k])) throw ValidationError("freqs_mhz", "non-finite value");
        if (k > 0 && !(freqs_mhz[k] > freqs_mhz[k - 1])) {
            throw ValidationError("freqs_mhz", "must be strictly increasing");
        }
        out.amps[k] = transform_one(wf, freqs_mhz[k]);
    }
    return out;
}

Complex dtft_at(const IQWaveform& wf, double f_mhz) {
    const double f[] = {f_mhz};
    return dtft(wf, f).amps.front();
}

double notch_depth(const IQWaveform& plain, const IQWaveform& dragged, double f_mhz) {
    if (f_mhz == 0.0) throw ValidationError("f_mhz", "notch depth is undefined at DC");
    const double ref = std::abs(dtft_at(plain, f_mhz));
    if (ref == 0.0) {
        throw DomainError("reference spectrum vanishes at the probe frequency");
    }
    return 20.0 * std::log10(std::abs(dtft_at(dragged, f_mhz)) / ref);
}

std::vector<double> uniform_grid(double f_min_mhz, double f_max_mhz, double step_mhz) {
    if (!(step_mhz > 0.0) || !std::isfinite(step_mhz)) {
        throw ValidationError("step_mhz", "must be > 0");
    }
    if (!(f_max_mhz >= f_min_mhz)) throw ValidationError("f_max_mhz", "must be >= f_min_mhz");
    const auto count =
        static_cast<std::size_t>(std::floor((f_max_mhz - f_min_mhz) / step_mhz + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = f_min_mhz + static_cast<double>(k) * step_mhz;
    }
    return grid;
}

}  // namespace rdrag
