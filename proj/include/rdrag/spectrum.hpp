#pragma once

#include <span>
#include <vector>

#include "rdrag/waveform.hpp"

namespace rdrag {

/// Complex spectral amplitudes (dimensionless * ns) on a strictly increasing
/// grid of baseband frequencies in MHz.
struct SpectrumGrid {
    std::vector<double> freqs_mhz;
    std::vector<Complex> amps;

    void validate() const;
};

/// S(f) = dt * sum_n s_n exp(-i 2 pi f t_n), evaluated by direct summation.
///
/// With this sign convention the DRAG transform W + i W'/eta places its
/// spectral zero at f = +notch. Each frequency is computed independently, so
/// results do not depend on evaluation order.
SpectrumGrid dtft(const IQWaveform& wf, std::span<const double> freqs_mhz);

/// Single-frequency convenience overload.
Complex dtft_at(const IQWaveform& wf, double f_mhz);

/// 20 log10(|S_dragged(f)| / |S_plain(f)|). Negative means suppression.
double notch_depth(const IQWaveform& plain, const IQWaveform& dragged, double f_mhz);

/// Uniform frequency grid f_min, f_min + step, ... <= f_max.
std::vector<double> uniform_grid(double f_min_mhz, double f_max_mhz, double step_mhz);

}  // namespace rdrag
