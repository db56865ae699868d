#include "rdrag/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "rdrag/dephasing.hpp"
#include "rdrag/errors.hpp"
#include "rdrag/rng.hpp"
#include "rdrag/spectrum.hpp"
#include "rdrag/units.hpp"

namespace rdrag {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double x) {
    x = std::remainder(x, 2.0 * kPi);
    return x <= -kPi ? x + 2.0 * kPi : x;
}

}  // namespace

Coherence coherence_factor(const DispersiveParams& params, const IQWaveform& pulse,
                           double amp_cal) {
    const CavityTrajectory traj =
        simulate_cavity(params, pulse, amp_cal, ringdown_window_ns(params));
    Coherence c;
    c.dephasing = dephasing_exponent(traj);
    c.stark_phase = stark_phase(traj);
    c.t_total_ns = traj.times_ns.back() - traj.times_ns.front();
    c.magnitude = std::exp(-c.dephasing - units::ns_to_us(c.t_total_ns) / params.t2_us);
    return c;
}

RamseySweep simulate_ramsey_point(const DispersiveParams& params, const IQWaveform& pulse,
                                  double amp_cal, std::size_t n_theta, double noise_sigma,
                                  std::uint64_t seed) {
    if (n_theta < 8) throw ValidationError("n_theta", "need at least 8 phases");
    if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma", "must be >= 0");
    const Coherence c = coherence_factor(params, pulse, amp_cal);

    GaussianSource noise(seed);
    RamseySweep sweep;
    sweep.t_total_ns = c.t_total_ns;
    sweep.thetas.resize(n_theta);
    sweep.signal.resize(n_theta);
    for (std::size_t k = 0; k < n_theta; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_theta);
        double p = 0.5 - 0.5 * c.magnitude * std::sin(theta + c.stark_phase + kPi);
        if (noise_sigma > 0.0) p += noise_sigma * noise.next();
        sweep.thetas[k] = theta;
        sweep.signal[k] = p;
    }
    return sweep;
}

SinusoidFit fit_sinusoid(std::span<const double> thetas, std::span<const double> signal) {
    if (thetas.size() != signal.size()) {
        throw ValidationError("signal", "length differs from thetas");
    }
    if (thetas.size() < 3) throw FitError("need at least three phases");

    Eigen::MatrixXd basis(thetas.size(), 3);
    Eigen::VectorXd y(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        basis(row, 0) = std::sin(thetas[k]);
        basis(row, 1) = std::cos(thetas[k]);
        basis(row, 2) = 1.0;
        y(row) = signal[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw FitError("sinusoid basis is rank deficient");
    const Eigen::Vector3d coef = qr.solve(y);

    SinusoidFit fit;
    fit.contrast = std::hypot(coef(0), coef(1));
    fit.theta0 = fit.contrast == 0.0 ? 0.0 : wrap_phase(std::atan2(coef(1), coef(0)));
    fit.offset = coef(2);
    return fit;
}

RamseyPoint to_ramsey_point(const SinusoidFit& fit) {
    RamseyPoint p;
    p.contrast = fit.contrast;
    p.theta0 = fit.theta0;
    p.pe = 2.0 * fit.contrast;
    return p;
}

BeatingScan scan_plateau(const DispersiveParams& params, const EnvelopeSpec& pulse_template,
                         std::span<const double> taus_ns, bool drag, double amp_cal,
                         const NoiseModel& noise) {
    params.validate();
    if (taus_ns.empty()) throw ValidationError("taus_ns", "empty scan");
    for (std::size_t k = 1; k < taus_ns.size(); ++k) {
        if (!(taus_ns[k] > taus_ns[k - 1])) {
            throw ValidationError("taus_ns", "must be strictly increasing");
        }
    }
    if (drag && params.delta_d_mhz == 0.0) {
        throw UndefinedNotchError("DRAG scan requested with the pulse on resonance");
    }

    BeatingScan scan;
    scan.drag_enabled = drag;
    scan.taus_ns.assign(taus_ns.begin(), taus_ns.end());
    for (std::size_t k = 0; k < taus_ns.size(); ++k) {
        EnvelopeSpec spec = pulse_template;
        spec.plateau_ns = taus_ns[k];
        const IQWaveform pulse = build_pulse(spec, DragParams{resonator_baseband_mhz(params), drag});
        const RamseySweep sweep = simulate_ramsey_point(params, pulse, amp_cal, noise.n_theta,
                                                        noise.sigma, mix_seed(noise.seed, k));
        scan.points.push_back(to_ramsey_point(fit_sinusoid(sweep.thetas, sweep.signal)));
        scan.t_total_ns.push_back(sweep.t_total_ns);
    }
    return scan;
}

DecayFit fit_decay(std::span<const double> taus_ns, std::span<const double> contrasts) {
    if (taus_ns.size() != contrasts.size()) {
        throw ValidationError("contrasts", "length differs from taus");
    }
    if (taus_ns.size() < 2) throw ValidationError("taus_ns", "need at least two points");

    const auto n = static_cast<double>(taus_ns.size());
    double mean_t = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = 0; k < taus_ns.size(); ++k) {
        if (!(contrasts[k] > 0.0)) throw DomainError("contrast must be > 0 for a log fit");
        mean_t += taus_ns[k];
        mean_y += std::log(contrasts[k]);
    }
    mean_t /= n;
    mean_y /= n;
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t k = 0; k < taus_ns.size(); ++k) {
        const double dt = taus_ns[k] - mean_t;
        stt += dt * dt;
        sty += dt * (std::log(contrasts[k]) - mean_y);
    }
    if (stt == 0.0) throw FitError("all taus are equal");
    const double slope = sty / stt;  // 1/ns

    DecayFit fit;
    fit.c0 = std::exp(mean_y - slope * mean_t);
    const double t2_us = slope < 0.0 ? units::ns_to_us(-1.0 / slope) : kT2Cap_us;
    fit.capped = !(t2_us < kT2Cap_us);
    fit.t2_eff_us = fit.capped ? kT2Cap_us : t2_us;
    return fit;
}

double dominant_frequency(std::span<const double> taus_ns, std::span<const double> values,
                          double f_min_mhz, double f_step_mhz) {
    if (taus_ns.size() != values.size() || taus_ns.size() < 4) {
        throw ValidationError("values", "need at least four matching samples");
    }
    const double dt = taus_ns[1] - taus_ns[0];
    for (std::size_t k = 2; k < taus_ns.size(); ++k) {
        if (std::abs((taus_ns[k] - taus_ns[k - 1]) - dt) > 1e-9 * dt) {
            throw GridMismatchError("dominant_frequency needs a uniform tau grid");
        }
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    std::vector<Complex> centered(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) centered[k] = values[k] - mean;

    const IQWaveform series(std::move(centered), dt, taus_ns.front());
    const double nyquist_mhz = 1e3 / (2.0 * dt);
    const std::vector<double> freqs = uniform_grid(f_min_mhz, nyquist_mhz, f_step_mhz);
    const SpectrumGrid s = dtft(series, freqs);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.amps.size(); ++k) {
        if (std::abs(s.amps[k]) > std::abs(s.amps[best])) best = k;
    }
    return s.freqs_mhz[best];
}

double modulation_depth(std::span<const double> taus_ns, std::span<const double> contrasts,
                        double window_ns) {
    const DecayFit env = fit_decay(taus_ns, contrasts);
    const double slope = env.capped ? 0.0 : -1.0 / units::us_to_ns(env.t2_eff_us);
    double lo = INFINITY;
    double hi = -INFINITY;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < taus_ns.size(); ++k) {
        if (taus_ns[k] > taus_ns.front() + window_ns) break;
        const double r = contrasts[k] / (env.c0 * std::exp(slope * taus_ns[k]));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        sum += r;
        ++count;
    }
    return (hi - lo) / (sum / static_cast<double>(count));
}

double effective_decay_us(std::span<const double> taus_ns, std::span<const double> contrasts) {
    if (taus_ns.size() != contrasts.size() || taus_ns.empty()) {
        throw GridMismatchError("taus and contrasts must be non-empty and of equal length");
    }
    const double target = contrasts.front() / std::exp(1.0);
    std::size_t k = contrasts.size();
    while (k > 0 && contrasts[k - 1] <= target) --k;
    if (k == contrasts.size()) return kT2Cap_us;
    if (k == 0) return 0.0;
    const double prev = contrasts[k - 1];
    const double next = contrasts[k];
    const double frac = next > 0.0 ? std::log(prev / target) / std::log(prev / next) : 1.0;
    const double tau = taus_ns[k - 1] + frac * (taus_ns[k] - taus_ns[k - 1]);
    return (tau - taus_ns.front()) * 1e-3;
}

double beat_frequency(std::span<const double> taus_ns, std::span<const double> contrasts,
                      double f_min_mhz, double f_step_mhz) {
    const DecayFit env = fit_decay(taus_ns, contrasts);
    std::vector<double> detrended(contrasts.size());
    for (std::size_t k = 0; k < contrasts.size(); ++k) {
        detrended[k] = contrasts[k] / (env.c0 * std::exp(-taus_ns[k] * 1e-3 / env.t2_eff_us));
    }
    return dominant_frequency(taus_ns, detrended, f_min_mhz, f_step_mhz);
}

std::vector<double> contrasts_of(const BeatingScan& scan) {
    std::vector<double> c;
    c.reserve(scan.points.size());
    for (const auto& p : scan.points) c.push_back(p.contrast);
    return c;
}

}  // namespace rdrag
