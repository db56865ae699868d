#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "rdrag/dephasing.hpp"
#include "rdrag/dispersive.hpp"
#include "rdrag/ramsey.hpp"
#include "rdrag/spectrum.hpp"
#include "rdrag/waveform.hpp"

// CSV serializers. Header row, LF endings, 17 significant digits.
namespace rdrag::output {

// t_ns,i,q
std::string waveform_csv(const IQWaveform& wf);

// f_mhz,re,im,abs_db. abs_db is relative to |reference_dc| and floored at
// -300 dB; pass the un-DRAGged pulse's S(0) so both traces share a scale.
std::string spectrum_csv(const SpectrumGrid& spec, Complex reference_dc);

// t_ns,re_ag,im_ag,re_ae,im_ae
std::string trajectory_csv(const CavityTrajectory& traj);

// f_mhz,re_g,im_g,re_e,im_e
std::string s21_csv(std::span<const double> freqs_mhz, std::span<const Complex> trace_g,
                    std::span<const Complex> trace_e);

// amp,detuning_mhz,pe,theta0_rad
std::string map_csv(const DephasingMap& map);

// tau_ns,contrast,theta0_rad,pe
std::string scan_csv(const BeatingScan& scan);

// theta_rad,signal
std::string sweep_csv(const RamseySweep& sweep);

}  // namespace rdrag::output
