#include "rdrag/dispersive.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "rdrag/errors.hpp"
#include "rdrag/units.hpp"

namespace rdrag {

namespace {

constexpr Complex kI(0.0, 1.0);

// Cubic Lagrange interpolation of the drive at sample position n + 1/2 over
// four in-range samples. The stencil is chosen ENO-style: the centred one
// unless a one-sided stencil has a much smaller third difference, so that
// kinks at the envelope knots (DRAG quadrature at the edge boundaries) are
// not interpolated across. Falls back to linear for very short pulses.
Complex midpoint_sample(std::span<const Complex> s, std::size_t n) {
    const std::size_t size = s.size();
    if (n + 1 >= size) return {0.0, 0.0};
    if (size < 4) return 0.5 * (s[n] + s[n + 1]);

    const auto third_diff = [&](std::size_t j) {
        return std::abs(s[j + 3] - 3.0 * s[j + 2] + 3.0 * s[j + 1] - s[j]);
    };
    const std::size_t lo = n >= 2 ? n - 2 : 0;
    const std::size_t hi = std::min(n, size - 4);
    std::size_t j0 = std::clamp(n == 0 ? std::size_t{0} : n - 1, lo, hi);
    double best = third_diff(j0);
    for (std::size_t j = lo; j <= hi; ++j) {
        const double d = third_diff(j);
        if (d < 0.5 * best) {
            best = d;
            j0 = j;
        }
    }

    const double x = static_cast<double>(n) + 0.5;
    Complex acc(0.0, 0.0);
    for (std::size_t a = 0; a < 4; ++a) {
        double w = 1.0;
        const double xa = static_cast<double>(j0 + a);
        for (std::size_t b = 0; b < 4; ++b) {
            if (b == a) continue;
            const double xb = static_cast<double>(j0 + b);
            w *= (x - xb) / (xa - xb);
        }
        acc += w * s[j0 + a];
    }
    return acc;
}

struct DipModel {
    double f0;
    double kappa;

    Complex value(double f) const {
        return 1.0 - (0.5 * kappa) / (kI * (f - f0) + 0.5 * kappa);
    }
};

struct DipFit {
    DipModel model;
    double sse;
};

DipFit fit_dip(std::span<const double> freqs, std::span<const Complex> trace) {
    // Initial guess from the deepest point and the half-power width.
    std::size_t imin = 0;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        if (std::abs(trace[k]) < std::abs(trace[imin])) imin = k;
    }
    if (std::abs(trace[imin]) > 0.9) throw FitError("no resonance dip found (min |S21| > 0.9)");

    std::size_t lo = imin;
    std::size_t hi = imin;
    while (lo > 0 && std::norm(trace[lo - 1]) <= 0.5) --lo;
    while (hi + 1 < trace.size() && std::norm(trace[hi + 1]) <= 0.5) ++hi;
    double width = freqs[hi] - freqs[lo];
    if (width <= 0.0) {
        const std::size_t nb = imin + 1 < freqs.size() ? imin + 1 : imin - 1;
        width = 2.0 * std::abs(freqs[nb] - freqs[imin]);
    }
    DipModel model{freqs[imin], width};

    const auto in_band = std::count_if(freqs.begin(), freqs.end(), [&](double f) {
        return std::abs(f - model.f0) <= model.kappa;
    });
    if (in_band < 10) {
        throw ResolutionError("fewer than 10 S21 points within one linewidth of the dip");
    }

    const auto sse_of = [&](const DipModel& m) {
        double s = 0.0;
        for (std::size_t k = 0; k < freqs.size(); ++k) s += std::norm(m.value(freqs[k]) - trace[k]);
        return s;
    };

    double sse = sse_of(model);
    double lambda = 1e-3;
    for (int iter = 0; iter < 500; ++iter) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            const Complex z = kI * (freqs[k] - model.f0) + 0.5 * model.kappa;
            const Complex r = model.value(freqs[k]) - trace[k];
            const Complex d_f0 = -kI * (0.5 * model.kappa) / (z * z);
            const Complex d_kappa = -0.5 / z + 0.25 * model.kappa / (z * z);
            const Eigen::Vector2d j_re(d_f0.real(), d_kappa.real());
            const Eigen::Vector2d j_im(d_f0.imag(), d_kappa.imag());
            jtj += j_re * j_re.transpose() + j_im * j_im.transpose();
            jtr += j_re * r.real() + j_im * r.imag();
        }

        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::Matrix2d damped = jtj;
            damped.diagonal() *= (1.0 + lambda);
            const Eigen::Vector2d step = damped.ldlt().solve(-jtr);
            const DipModel trial{model.f0 + step(0), model.kappa + step(1)};
            if (trial.kappa > 0.0 && std::isfinite(trial.f0)) {
                const double trial_sse = sse_of(trial);
                if (trial_sse <= sse) {
                    const bool converged =
                        std::abs(step(0)) <= 1e-13 * (1.0 + std::abs(model.f0)) &&
                        std::abs(step(1)) <= 1e-13 * model.kappa;
                    model = trial;
                    sse = trial_sse;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    if (converged) return {model, sse};
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) break;  // no further descent possible
    }
    return {model, sse};
}

}  // namespace

void DispersiveParams::validate() const {
    if (!(std::isfinite(kappa_mhz) && kappa_mhz > 0.0)) {
        throw ValidationError("kappa_mhz", "must be > 0");
    }
    if (!std::isfinite(chi_mhz)) throw ValidationError("chi_mhz", "must be finite");
    if (!std::isfinite(delta_d_mhz)) throw ValidationError("delta_d_mhz", "must be finite");
    if (!(t2_us > 0.0)) throw ValidationError("t2_us", "must be > 0");
}

DispersiveParams DispersiveParams::with_detuning(double delta_d) const {
    DispersiveParams out = *this;
    out.delta_d_mhz = delta_d;
    return out;
}

Complex drive_strength(const DispersiveParams& params, double amp_cal, Complex amplitude) {
    return kI * std::sqrt(units::angular(params.kappa_mhz)) * amp_cal * amplitude;
}

std::pair<Complex, Complex> steady_state_alpha(const DispersiveParams& params, Complex eps) {
    params.validate();
    const double delta = units::angular(params.delta_d_mhz);
    const double chi = units::angular(params.chi_mhz);
    const double half_kappa = 0.5 * units::angular(params.kappa_mhz);
    const Complex alpha_g = eps / (kI * (delta - chi) + half_kappa);
    const Complex alpha_e = eps / (kI * (delta + chi) + half_kappa);
    return {alpha_g, alpha_e};
}

CavityTrajectory simulate_cavity(const DispersiveParams& params, const IQWaveform& drive,
                                 double amp_cal, double ringdown_ns) {
    params.validate();
    if (!(ringdown_ns >= 0.0) || !std::isfinite(ringdown_ns)) {
        throw ValidationError("ringdown_ns", "must be >= 0");
    }
    const double f_max = std::max(std::abs(params.delta_d_mhz) + std::abs(params.chi_mhz),
                                  params.kappa_mhz);
    const double dt_ns = drive.dt_ns();
    if (dt_ns > 1e3 / (20.0 * f_max)) {
        throw ResolutionError("cavity step dt = " + std::to_string(dt_ns) +
                              " ns exceeds 1/(20 f_max)");
    }

    const double h = units::ns_to_us(dt_ns);
    const double half_kappa = 0.5 * units::angular(params.kappa_mhz);
    const double delta = units::angular(params.delta_d_mhz);
    const double chi = units::angular(params.chi_mhz);
    // Decay rates a_s = i (Delta + s chi) + kappa/2.
    const Complex rate_g = kI * (delta - chi) + half_kappa;
    const Complex rate_e = kI * (delta + chi) + half_kappa;
    const Complex eps_gain = drive_strength(params, amp_cal, 1.0);

    const auto samples = drive.samples();
    const std::size_t n_drive = samples.size();
    const auto n_ring = static_cast<std::size_t>(std::llround(ringdown_ns / dt_ns));
    const std::size_t n_total = n_drive + n_ring;

    const auto eps_at = [&](std::size_t n) -> Complex {
        return n < n_drive ? eps_gain * samples[n] : Complex(0.0, 0.0);
    };

    CavityTrajectory traj;
    traj.params = params;
    traj.times_ns.resize(n_total);
    traj.alpha_g.resize(n_total);
    traj.alpha_e.resize(n_total);

    Complex ag(0.0, 0.0);
    Complex ae(0.0, 0.0);
    for (std::size_t n = 0; n < n_total; ++n) {
        traj.times_ns[n] = drive.time_ns(n);
        traj.alpha_g[n] = ag;
        traj.alpha_e[n] = ae;
        if (n + 1 == n_total) break;

        const Complex e0 = eps_at(n);
        const Complex em = eps_gain * midpoint_sample(samples, n);
        const Complex e1 = eps_at(n + 1);
        const auto rk4 = [&](Complex a, Complex rate) {
            const Complex k1 = -rate * a + e0;
            const Complex k2 = -rate * (a + 0.5 * h * k1) + em;
            const Complex k3 = -rate * (a + 0.5 * h * k2) + em;
            const Complex k4 = -rate * (a + h * k3) + e1;
            return a + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        };
        ag = rk4(ag, rate_g);
        ae = rk4(ae, rate_e);
    }
    return traj;
}

double snr_proxy(const CavityTrajectory& traj) {
    if (traj.times_ns.size() < 2) return 0.0;
    const double h = units::ns_to_us(traj.times_ns[1] - traj.times_ns[0]);
    double sum = 0.0;
    for (std::size_t n = 0; n < traj.alpha_g.size(); ++n) {
        sum += std::norm(traj.alpha_e[n] - traj.alpha_g[n]);
    }
    return h * sum;
}

std::vector<Complex> s21_response(const DispersiveParams& params,
                                  std::span<const double> probe_freqs_mhz, QubitState state) {
    params.validate();
    const double f_s = state == QubitState::kExcited ? params.chi_mhz : -params.chi_mhz;
    const DipModel model{f_s, params.kappa_mhz};
    std::vector<Complex> out(probe_freqs_mhz.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = model.value(probe_freqs_mhz[k]);
    return out;
}

S21Fit fit_s21(std::span<const double> freqs_mhz, std::span<const Complex> trace_g,
               std::span<const Complex> trace_e) {
    if (freqs_mhz.size() != trace_g.size() || freqs_mhz.size() != trace_e.size()) {
        throw ValidationError("trace", "frequency and trace lengths differ");
    }
    if (freqs_mhz.size() < 10) throw ValidationError("freqs_mhz", "need at least 10 points");
    for (std::size_t k = 1; k < freqs_mhz.size(); ++k) {
        if (!(freqs_mhz[k] > freqs_mhz[k - 1])) {
            throw ValidationError("freqs_mhz", "must be strictly increasing");
        }
    }
    const DipFit g = fit_dip(freqs_mhz, trace_g);
    const DipFit e = fit_dip(freqs_mhz, trace_e);

    S21Fit out;
    out.f_ground_mhz = g.model.f0;
    out.f_excited_mhz = e.model.f0;
    out.kappa_ground_mhz = g.model.kappa;
    out.kappa_excited_mhz = e.model.kappa;
    out.kappa_mhz = 0.5 * (g.model.kappa + e.model.kappa);
    out.two_chi_mhz = e.model.f0 - g.model.f0;
    out.residual_rms = std::sqrt((g.sse + e.sse) / (2.0 * static_cast<double>(freqs_mhz.size())));
    return out;
}

}  // namespace rdrag
