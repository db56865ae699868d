#include "rdrag/config.hpp"

#include <cmath>

#include "rdrag/errors.hpp"
#include "rdrag/io.hpp"

namespace rdrag::config {

namespace {

using nlohmann::json;
using io::StrictObject;

EnvelopeSpec parse_envelope(StrictObject obj, bool with_amplitude, bool with_plateau) {
    EnvelopeSpec spec;
    spec.amplitude = with_amplitude ? obj.number("amplitude") : 1.0;
    spec.rise_ns = obj.number("rise_ns");
    spec.plateau_ns = with_plateau ? obj.number("plateau_ns") : 0.0;
    spec.fall_ns = obj.number("fall_ns");
    spec.dt_ns = obj.number("dt_ns");
    obj.finish();
    return spec;
}

DragParams parse_drag(StrictObject obj) {
    DragParams drag;
    drag.enabled = obj.boolean_or("enabled", false);
    drag.notch_mhz = obj.number_or("notch_mhz", 0.0);
    obj.finish();
    return drag;
}

DispersiveParams parse_dispersive(StrictObject obj, bool with_detuning) {
    DispersiveParams p;
    p.kappa_mhz = obj.number("kappa_mhz");
    p.chi_mhz = obj.number("chi_mhz");
    p.delta_d_mhz = with_detuning ? obj.number("delta_d_mhz") : 0.0;
    p.t2_us = obj.number("t2_us");
    obj.finish();
    p.validate();
    return p;
}

// {start, stop, step} inclusive of stop within 1e-9 steps.
std::vector<double> parse_range(StrictObject obj) {
    const double start = obj.number("start");
    const double stop = obj.number("stop");
    const double step = obj.number("step");
    obj.finish();
    if (!(step > 0.0) || stop < start) throw ConfigError("range: need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = start + static_cast<double>(k) * step;
    return out;
}

// {start, stop, count} with both ends included.
std::vector<double> parse_linspace(StrictObject obj) {
    const double start = obj.number("start");
    const double stop = obj.number("stop");
    const double count_d = obj.number("count");
    obj.finish();
    if (!(count_d >= 1.0) || count_d != std::floor(count_d)) {
        throw ConfigError("linspace: count must be a positive integer");
    }
    const auto count = static_cast<std::size_t>(count_d);
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = count == 1 ? start
                            : start + (stop - start) * static_cast<double>(k) /
                                          static_cast<double>(count - 1);
    }
    return out;
}

std::size_t parse_count(StrictObject& obj, const std::string& key, std::size_t fallback) {
    if (!obj.has(key)) return fallback;
    const double v = obj.number(key);
    if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(key + ": expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

}  // namespace

WaveformConfig parse_waveform(const json& doc) {
    StrictObject root(doc, "config");
    WaveformConfig c;
    c.envelope = parse_envelope(root.object("envelope"), true, true);
    if (root.has("drag")) c.drag = parse_drag(root.object("drag"));
    root.finish();
    c.envelope.validate();
    return c;
}

SpectrumConfig parse_spectrum(const json& doc) {
    StrictObject root(doc, "config");
    SpectrumConfig c;
    c.envelope = parse_envelope(root.object("envelope"), true, true);
    if (root.has("drag")) c.drag = parse_drag(root.object("drag"));
    StrictObject grid = root.object("spectrum");
    c.f_min_mhz = grid.number("f_min_mhz");
    c.f_max_mhz = grid.number("f_max_mhz");
    c.step_mhz = grid.number("step_mhz");
    c.probe_mhz = grid.number("probe_mhz");
    grid.finish();
    root.finish();
    c.envelope.validate();
    return c;
}

RamseyConfig parse_ramsey(const json& doc) {
    StrictObject root(doc, "config");
    RamseyConfig c;
    c.params = parse_dispersive(root.object("dispersive"), true);
    c.pulse = parse_envelope(root.object("pulse"), true, false);
    c.taus_ns = parse_range(root.object("taus_ns"));
    c.amp_cal = root.number("amp_cal");
    c.noise.n_theta = parse_count(root, "n_theta", 16);
    c.noise.sigma = root.number_or("noise_sigma", 0.0);
    c.noise.seed = parse_count(root, "seed", 0);
    root.finish();
    return c;
}

MapConfig parse_map(const json& doc) {
    StrictObject root(doc, "config");
    MapConfig c;
    c.params = parse_dispersive(root.object("dispersive"), false);
    c.pulse = parse_envelope(root.object("pulse"), false, true);
    c.amps = parse_linspace(root.object("amps"));
    c.detunings_mhz = parse_linspace(root.object("detunings_mhz"));
    c.amp_cal = root.number("amp_cal");
    if (root.has("integration")) {
        StrictObject g = root.object("integration");
        c.grid.step_mhz = g.number("step_mhz");
        c.grid.half_span_mhz = g.number("half_span_mhz");
        g.finish();
    }
    root.finish();
    return c;
}

CrosstalkConfig parse_crosstalk(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    CrosstalkConfig c;
    json plan_doc = doc;
    if (doc.contains("amp_cal")) {
        if (!doc["amp_cal"].is_number()) throw ConfigError("config.amp_cal: expected a number");
        c.amp_cal = doc["amp_cal"].get<double>();
        plan_doc.erase("amp_cal");
    }
    if (doc.contains("integration")) {
        StrictObject g(doc["integration"], "config.integration");
        c.options.grid.step_mhz = g.number("step_mhz");
        c.options.grid.half_span_mhz = g.number("half_span_mhz");
        g.finish();
        plan_doc.erase("integration");
    }
    c.plan = plan_from_json(plan_doc);
    return c;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig1b",  "fig1c-200ns", "fig1c-2us",
                                                   "fig2",   "fig2-edge10", "fig3",
                                                   "crosstalk-2", "crosstalk-4"};
    return names;
}

namespace {

json envelope_json(double plateau_ns) {
    return {{"amplitude", 1.0}, {"rise_ns", 5.0}, {"plateau_ns", plateau_ns},
            {"fall_ns", 5.0},   {"dt_ns", 0.1}};
}

// Paper resonator: kappa/2pi = 2.2 MHz, 2chi/2pi = 2.1 MHz, T2 = 18 us.
json paper_dispersive(bool with_detuning, double delta_d_mhz = 0.0) {
    json d{{"kappa_mhz", 2.2}, {"chi_mhz", 1.05}, {"t2_us", 18.0}};
    if (with_detuning) d["delta_d_mhz"] = delta_d_mhz;
    return d;
}

json plan_pulse(const std::string& target, double carrier) {
    return {{"target", target},
            {"carrier_mhz", carrier},
            {"amplitude", 1.0},
            {"envelope", {{"rise_ns", 5.0}, {"plateau_ns", 200.0}, {"fall_ns", 5.0}, {"dt_ns", 0.5}}}};
}

json ramsey_preset(double edge_ns) {
    // Pulse sits 10 MHz above the resonator: delta_d = w_r - w_d = -10 MHz.
    // amp_cal is not given in the source data; 25 sqrt(1/us) puts the DRAG
    // scan's fitted T2eff near 1.4 us.
    return {{"dispersive", paper_dispersive(true, -10.0)},
            {"pulse", {{"amplitude", 1.0}, {"rise_ns", edge_ns}, {"fall_ns", edge_ns}, {"dt_ns", 0.5}}},
            {"taus_ns", {{"start", 0.0}, {"stop", 2000.0}, {"step", 5.0}}},
            {"amp_cal", 25.0},
            {"n_theta", 16},
            {"noise_sigma", 0.0},
            {"seed", 0}};
}

}  // namespace

json preset(const std::string& name) {
    if (name == "fig1b") {
        return {{"envelope", envelope_json(200.0)}, {"drag", {{"enabled", true}, {"notch_mhz", 50.0}}}};
    }
    if (name == "fig1c-200ns" || name == "fig1c-2us") {
        const double plateau = name == "fig1c-200ns" ? 200.0 : 2000.0;
        return {{"envelope", envelope_json(plateau)},
                {"drag", {{"enabled", true}, {"notch_mhz", 50.0}}},
                {"spectrum",
                 {{"f_min_mhz", -150.0}, {"f_max_mhz", 150.0}, {"step_mhz", 0.1}, {"probe_mhz", 50.0}}}};
    }
    if (name == "fig2") return ramsey_preset(5.0);
    if (name == "fig2-edge10") return ramsey_preset(10.0);
    if (name == "fig3") {
        // amp_cal is a free calibration: 2.5 sqrt(1/us) drops P_e to ~0.2 on
        // resonance at full amplitude.
        return {{"dispersive", paper_dispersive(false)},
                {"pulse", {{"rise_ns", 5.0}, {"plateau_ns", 200.0}, {"fall_ns", 5.0}, {"dt_ns", 0.5}}},
                {"amps", {{"start", 0.0}, {"stop", 1.0}, {"count", 21}}},
                {"detunings_mhz", {{"start", -20.0}, {"stop", 20.0}, {"count", 41}}},
                {"amp_cal", 2.5},
                {"integration", {{"step_mhz", 0.1}, {"half_span_mhz", 200.0}}}};
    }
    if (name == "crosstalk-2") {
        return {{"resonators",
                 {{{"id", "R0"}, {"f_r_mhz", 7000.0}, {"kappa_mhz", 2.2}, {"chi_mhz", 1.05}, {"t2_us", 18.0}},
                  {{"id", "R1"}, {"f_r_mhz", 7050.0}, {"kappa_mhz", 2.2}, {"chi_mhz", 1.05}, {"t2_us", 18.0}}}},
                {"pulses", {plan_pulse("R0", 7000.0), plan_pulse("R1", 7050.0)}},
                {"amp_cal", 2.5}};
    }
    if (name == "crosstalk-4") {
        // Illustrative plan, not measured data.
        return {{"resonators",
                 {{{"id", "R0"}, {"f_r_mhz", 6900.0}, {"kappa_mhz", 2.2}, {"chi_mhz", 1.05}, {"t2_us", 18.0}},
                  {{"id", "R1"}, {"f_r_mhz", 6950.0}, {"kappa_mhz", 3.0}, {"chi_mhz", 1.5}, {"t2_us", 25.0}},
                  {{"id", "R2"}, {"f_r_mhz", 7020.0}, {"kappa_mhz", 2.5}, {"chi_mhz", 1.2}, {"t2_us", 15.0}},
                  {{"id", "R3"}, {"f_r_mhz", 7100.0}, {"kappa_mhz", 4.0}, {"chi_mhz", 2.0}, {"t2_us", 20.0}}}},
                {"pulses",
                 {plan_pulse("R0", 6900.0), plan_pulse("R1", 6950.0), plan_pulse("R2", 7020.0),
                  plan_pulse("R3", 7100.0)}},
                {"amp_cal", 2.5}};
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace rdrag::config
