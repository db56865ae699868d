#include "rdrag/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rdrag/errors.hpp"
#include "rdrag/io.hpp"

namespace rdrag {

namespace {

constexpr double kTieTolerance = 1e-9;

DispersiveParams victim_params(const ResonatorEntry& victim, double carrier_mhz) {
    return DispersiveParams{victim.kappa_mhz, victim.chi_mhz, victim.f_r_mhz - carrier_mhz,
                            victim.t2_us};
}

struct PreparedPulse {
    IQWaveform waveform;
    double t_eff_ns;
};

PreparedPulse prepare(const PulseAssignment& p, bool use_drag) {
    EnvelopeSpec spec = p.envelope;
    spec.amplitude = p.amplitude;
    EnvelopeSpec unit = spec;
    unit.amplitude = 1.0;
    const DragParams drag = use_drag && p.drag ? *p.drag : DragParams{};
    return {build_pulse(spec, drag), equivalent_duration_ns(sample_envelope(unit))};
}

std::vector<double> column(const FrequencyPlan& plan, std::size_t j, bool use_drag,
                           double amp_cal, const CrosstalkOptions& options) {
    const PulseAssignment& p = plan.pulses[j];
    const PreparedPulse pulse = prepare(p, use_drag);
    std::vector<double> out(plan.resonators.size());
    for (std::size_t i = 0; i < plan.resonators.size(); ++i) {
        const DispersiveParams params = victim_params(plan.resonators[i], p.carrier_mhz);
        out[i] = p.amplitude == 0.0 ? 0.0
                                    : spectral_rate(params, pulse.waveform, amp_cal,
                                                    options.grid, pulse.t_eff_ns);
    }
    return out;
}

std::vector<std::vector<double>> full_matrix(const FrequencyPlan& plan, bool use_drag,
                                             double amp_cal, const CrosstalkOptions& options) {
    std::vector<std::vector<double>> m(plan.resonators.size(),
                                       std::vector<double>(plan.pulses.size()));
    for (std::size_t j = 0; j < plan.pulses.size(); ++j) {
        const auto col = column(plan, j, use_drag, amp_cal, options);
        for (std::size_t i = 0; i < col.size(); ++i) m[i][j] = col[i];
    }
    return m;
}

double suppression(double gamma, double baseline) {
    if (gamma == baseline) return 0.0;
    if (baseline == 0.0) return INFINITY;
    if (gamma == 0.0) return -INFINITY;
    return 10.0 * std::log10(gamma / baseline);
}

CrosstalkReport assemble(const FrequencyPlan& plan, std::vector<std::vector<double>> gamma,
                         std::vector<std::vector<double>> baseline) {
    CrosstalkReport r;
    for (const auto& res : plan.resonators) r.victims.push_back(res.id);
    for (const auto& p : plan.pulses) r.pulses.push_back(p.target);
    r.suppression_db.assign(gamma.size(), std::vector<double>(plan.pulses.size()));
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        for (std::size_t j = 0; j < plan.pulses.size(); ++j) {
            r.suppression_db[i][j] = suppression(gamma[i][j], baseline[i][j]);
        }
    }
    r.gamma = std::move(gamma);
    r.baseline = std::move(baseline);
    return r;
}

double max_off_diagonal(const std::vector<double>& col, std::size_t target) {
    double m = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (i != target) m = std::max(m, col[i]);
    }
    return m;
}

}  // namespace

void FrequencyPlan::validate() const {
    if (resonators.empty()) throw ValidationError("resonators", "plan has no resonators");
    std::set<std::string> ids;
    for (const auto& r : resonators) {
        if (!ids.insert(r.id).second) throw ValidationError("id", "duplicate resonator " + r.id);
        DispersiveParams{r.kappa_mhz, r.chi_mhz, 0.0, r.t2_us}.validate();
        if (!std::isfinite(r.f_r_mhz)) throw ValidationError("f_r_mhz", "must be finite");
    }
    for (std::size_t j = 0; j < pulses.size(); ++j) {
        const auto& p = pulses[j];
        if (!ids.contains(p.target)) {
            throw ValidationError("target", "pulse targets unknown resonator " + p.target);
        }
        if (!(p.amplitude >= 0.0 && p.amplitude <= 1.0)) {
            throw ValidationError("amplitude", "must lie in [0, 1]");
        }
        EnvelopeSpec spec = p.envelope;
        spec.amplitude = p.amplitude;
        spec.validate();
        if (p.drag) p.drag->validate();
        for (std::size_t k = 0; k < j; ++k) {
            if (pulses[k].carrier_mhz == p.carrier_mhz) {
                throw ValidationError("carrier_mhz", "two pulses share a carrier frequency");
            }
        }
    }
}

std::size_t FrequencyPlan::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < resonators.size(); ++i) {
        if (resonators[i].id == id) return i;
    }
    throw ValidationError("target", "unknown resonator " + id);
}

double notch_for_victim(const ResonatorEntry& victim, double carrier_mhz) {
    return resonator_baseband_mhz(victim_params(victim, carrier_mhz));
}

CrosstalkReport crosstalk_matrix(const FrequencyPlan& plan, double amp_cal,
                                 const CrosstalkOptions& options) {
    plan.validate();
    return assemble(plan, full_matrix(plan, true, amp_cal, options),
                    full_matrix(plan, false, amp_cal, options));
}

void require_notchable(const FrequencyPlan& plan) {
    for (std::size_t j = 0; j < plan.pulses.size(); ++j) {
        const auto& pulse = plan.pulses[j];
        for (const auto& r : plan.resonators) {
            if (r.id != pulse.target && notch_for_victim(r, pulse.carrier_mhz) == 0.0) {
                throw UndefinedNotchError("pulse " + std::to_string(j) + " carrier sits on resonator " +
                                          r.id);
            }
        }
    }
}

NotchSelection select_notches(const FrequencyPlan& plan, double amp_cal,
                              const CrosstalkOptions& options) {
    plan.validate();

    FrequencyPlan out = plan;
    std::vector<NotchChoice> choices;
    for (std::size_t j = 0; j < out.pulses.size(); ++j) {
        PulseAssignment& pulse = out.pulses[j];
        const std::size_t target = out.index_of(pulse.target);
        const std::vector<double> base = column(out, j, false, amp_cal, options);

        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (i != target) order.push_back(i);
        }
        const auto detuning = [&](std::size_t i) {
            return std::abs(out.resonators[i].f_r_mhz - pulse.carrier_mhz);
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double scale = std::max(base[a], base[b]);
            if (std::abs(base[a] - base[b]) > kTieTolerance * scale) return base[a] > base[b];
            return detuning(a) < detuning(b);
        });

        NotchChoice choice{j, std::nullopt, 0.0};
        const double base_max = max_off_diagonal(base, target);
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const std::size_t victim = order[rank];
            const double notch = notch_for_victim(out.resonators[victim], pulse.carrier_mhz);
            if (notch == 0.0) {
                if (rank == 0) {
                    throw UndefinedNotchError("worst victim " + out.resonators[victim].id +
                                              " sits on the carrier of pulse " +
                                              std::to_string(j));
                }
                continue;
            }
            PulseAssignment trial = pulse;
            trial.drag = DragParams{notch, true};
            FrequencyPlan trial_plan = out;
            trial_plan.pulses[j] = trial;
            const std::vector<double> col = column(trial_plan, j, true, amp_cal, options);
            if (col[victim] < base[victim] && max_off_diagonal(col, target) <= base_max) {
                pulse = trial;
                choice.victim = victim;
                choice.notch_mhz = notch;
                break;
            }
        }
        if (!choice.victim) pulse.drag = DragParams{};
        choices.push_back(choice);
    }

    NotchSelection result{out, crosstalk_matrix(out, amp_cal, options)};
    result.report.notches = std::move(choices);
    return result;
}

namespace {

EnvelopeSpec envelope_from_json(io::StrictObject obj) {
    EnvelopeSpec spec;
    spec.rise_ns = obj.number("rise_ns");
    spec.plateau_ns = obj.number("plateau_ns");
    spec.fall_ns = obj.number("fall_ns");
    spec.dt_ns = obj.number("dt_ns");
    obj.finish();
    return spec;
}

}  // namespace

FrequencyPlan plan_from_json(const nlohmann::json& doc) {
    io::StrictObject root(doc, "plan");
    FrequencyPlan plan;
    for (const auto& item : root.array("resonators")) {
        io::StrictObject r(item, "plan.resonators[]");
        ResonatorEntry e;
        e.id = r.string("id");
        e.f_r_mhz = r.number("f_r_mhz");
        e.kappa_mhz = r.number("kappa_mhz");
        e.chi_mhz = r.number("chi_mhz");
        e.t2_us = r.number("t2_us");
        r.finish();
        plan.resonators.push_back(e);
    }
    for (const auto& item : root.array("pulses")) {
        io::StrictObject p(item, "plan.pulses[]");
        PulseAssignment a;
        a.target = p.string("target");
        a.carrier_mhz = p.number("carrier_mhz");
        a.amplitude = p.number("amplitude");
        a.envelope = envelope_from_json(p.object("envelope"));
        if (p.has("drag")) {
            io::StrictObject d = p.object("drag");
            DragParams drag;
            drag.enabled = d.boolean_or("enabled", true);
            drag.notch_mhz = d.number("notch_mhz");
            d.finish();
            a.drag = drag;
        }
        p.finish();
        plan.pulses.push_back(a);
    }
    root.finish();
    plan.validate();
    return plan;
}

nlohmann::json plan_to_json(const FrequencyPlan& plan) {
    nlohmann::json doc;
    doc["resonators"] = nlohmann::json::array();
    for (const auto& r : plan.resonators) {
        doc["resonators"].push_back({{"id", r.id},
                                     {"f_r_mhz", r.f_r_mhz},
                                     {"kappa_mhz", r.kappa_mhz},
                                     {"chi_mhz", r.chi_mhz},
                                     {"t2_us", r.t2_us}});
    }
    doc["pulses"] = nlohmann::json::array();
    for (const auto& p : plan.pulses) {
        nlohmann::json j{{"target", p.target},
                         {"carrier_mhz", p.carrier_mhz},
                         {"amplitude", p.amplitude},
                         {"envelope",
                          {{"rise_ns", p.envelope.rise_ns},
                           {"plateau_ns", p.envelope.plateau_ns},
                           {"fall_ns", p.envelope.fall_ns},
                           {"dt_ns", p.envelope.dt_ns}}}};
        if (p.drag) j["drag"] = {{"enabled", p.drag->enabled}, {"notch_mhz", p.drag->notch_mhz}};
        doc["pulses"].push_back(j);
    }
    return doc;
}

nlohmann::json report_to_json(const CrosstalkReport& report) {
    nlohmann::json doc;
    doc["victims"] = report.victims;
    doc["pulses"] = report.pulses;
    doc["gamma_per_us"] = report.gamma;
    doc["baseline_per_us"] = report.baseline;
    doc["suppression_db"] = report.suppression_db;
    doc["notches"] = nlohmann::json::array();
    for (const auto& n : report.notches) {
        nlohmann::json j{{"pulse", n.pulse}, {"notch_mhz", n.notch_mhz}};
        j["victim"] = n.victim ? nlohmann::json(report.victims[*n.victim]) : nlohmann::json();
        doc["notches"].push_back(j);
    }
    return doc;
}

std::string report_to_csv(const CrosstalkReport& report) {
    std::ostringstream out;
    out << "victim,pulse,gamma_per_us,baseline_per_us,suppression_db\n";
    for (std::size_t i = 0; i < report.victims.size(); ++i) {
        for (std::size_t j = 0; j < report.pulses.size(); ++j) {
            out << report.victims[i] << ',' << j << ',' << io::format_double(report.gamma[i][j])
                << ',' << io::format_double(report.baseline[i][j]) << ','
                << io::format_double(report.suppression_db[i][j]) << '\n';
        }
    }
    return out.str();
}

}  // namespace rdrag
