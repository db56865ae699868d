#include "rdrag/output.hpp"

#include <cmath>
#include <sstream>

#include "rdrag/errors.hpp"
#include "rdrag/io.hpp"

namespace rdrag::output {

namespace {

using io::format_double;

constexpr double kDbFloor = -300.0;

// Appends one comma-separated row of full-precision numbers.
void row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string waveform_csv(const IQWaveform& wf) {
    std::string out = "t_ns,i,q\n";
    for (std::size_t n = 0; n < wf.size(); ++n) row(out, {wf.time_ns(n), wf[n].real(), wf[n].imag()});
    return out;
}

std::string spectrum_csv(const SpectrumGrid& spec, Complex reference_dc) {
    const double ref = std::abs(reference_dc);
    std::string out = "f_mhz,re,im,abs_db\n";
    for (std::size_t k = 0; k < spec.freqs_mhz.size(); ++k) {
        const double mag = std::abs(spec.amps[k]);
        double db = kDbFloor;
        if (ref > 0.0 && mag > 0.0) db = std::max(kDbFloor, 20.0 * std::log10(mag / ref));
        row(out, {spec.freqs_mhz[k], spec.amps[k].real(), spec.amps[k].imag(), db});
    }
    return out;
}

std::string trajectory_csv(const CavityTrajectory& traj) {
    std::string out = "t_ns,re_ag,im_ag,re_ae,im_ae\n";
    for (std::size_t n = 0; n < traj.times_ns.size(); ++n) {
        row(out, {traj.times_ns[n], traj.alpha_g[n].real(), traj.alpha_g[n].imag(),
                  traj.alpha_e[n].real(), traj.alpha_e[n].imag()});
    }
    return out;
}

std::string s21_csv(std::span<const double> freqs_mhz, std::span<const Complex> trace_g,
                    std::span<const Complex> trace_e) {
    if (trace_g.size() != freqs_mhz.size() || trace_e.size() != freqs_mhz.size()) {
        throw GridMismatchError("s21 traces and frequency grid differ in length");
    }
    std::string out = "f_mhz,re_g,im_g,re_e,im_e\n";
    for (std::size_t k = 0; k < freqs_mhz.size(); ++k) {
        row(out, {freqs_mhz[k], trace_g[k].real(), trace_g[k].imag(), trace_e[k].real(),
                  trace_e[k].imag()});
    }
    return out;
}

std::string map_csv(const DephasingMap& map) {
    std::string out = "amp,detuning_mhz,pe,theta0_rad\n";
    for (std::size_t a = 0; a < map.amps.size(); ++a) {
        for (std::size_t d = 0; d < map.detunings_mhz.size(); ++d) {
            row(out, {map.amps[a], map.detunings_mhz[d], map.pe_at(a, d), map.theta0_at(a, d)});
        }
    }
    return out;
}

std::string scan_csv(const BeatingScan& scan) {
    std::string out = "tau_ns,contrast,theta0_rad,pe\n";
    for (std::size_t k = 0; k < scan.taus_ns.size(); ++k) {
        const auto& p = scan.points[k];
        row(out, {scan.taus_ns[k], p.contrast, p.theta0, p.pe});
    }
    return out;
}

std::string sweep_csv(const RamseySweep& sweep) {
    std::string out = "theta_rad,signal\n";
    for (std::size_t k = 0; k < sweep.thetas.size(); ++k) row(out, {sweep.thetas[k], sweep.signal[k]});
    return out;
}

}  // namespace rdrag::output
