// rdrag: command-line front end for pulse synthesis, spectra, Ramsey scans,
// dephasing maps and multiplexed crosstalk reports.
//
//   rdrag <command> [--config file.json] [--preset name] [--out dir] [--seed n] [--svg]
//
// Exit codes: 0 ok, 1 failed self-test, 2 validation, 3 numeric resolution, 4 IO.
// Errors are reported on stderr as a single line `error:<code>:<detail>`.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdrag/acceptance.hpp"
#include "rdrag/config.hpp"
#include "rdrag/crosstalk.hpp"
#include "rdrag/dephasing.hpp"
#include "rdrag/errors.hpp"
#include "rdrag/io.hpp"
#include "rdrag/output.hpp"
#include "rdrag/ramsey.hpp"
#include "rdrag/rng.hpp"
#include "rdrag/spectrum.hpp"
#include "rdrag/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rdrag;

namespace {

struct Options {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool svg = false;
};

// Output settings may also come from an optional "io" block in the config.
struct IoSettings {
    fs::path out_dir;
    bool svg = false;
};

// Loads the command's config (file, preset, or the command's default preset)
// and splits off the "io" block.
json load_config(const Options& opt, const std::string& default_preset, IoSettings& io_out) {
    if (!opt.config_path.empty() && !opt.preset.empty()) {
        throw ConfigError("use either --config or --preset, not both");
    }
    json doc;
    if (!opt.config_path.empty()) {
        const std::string text = io::read_text_file(opt.config_path);
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& ex) {
            throw ConfigError(opt.config_path + ": " + ex.what());
        }
    } else {
        doc = config::preset(opt.preset.empty() ? default_preset : opt.preset);
    }

    io_out.out_dir = opt.out_dir;
    io_out.svg = opt.svg;
    if (doc.is_object() && doc.contains("io")) {
        io::StrictObject block(doc["io"], "config.io");
        if (block.has("out_dir") && opt.out_dir == ".") io_out.out_dir = block.string("out_dir");
        io_out.svg = block.boolean_or("svg", false) || opt.svg;
        block.finish();
        doc.erase("io");
    }
    return doc;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
    io::write_text_file(dir / name, content);
}

std::string rounded(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

json envelope_json(const EnvelopeSpec& e) {
    return {{"amplitude", e.amplitude}, {"rise_ns", e.rise_ns}, {"plateau_ns", e.plateau_ns},
            {"fall_ns", e.fall_ns},     {"dt_ns", e.dt_ns}};
}

json params_json(const DispersiveParams& p) {
    return {{"kappa_mhz", p.kappa_mhz}, {"chi_mhz", p.chi_mhz}, {"delta_d_mhz", p.delta_d_mhz},
            {"t2_us", p.t2_us}};
}

std::vector<double> column_of(const IQWaveform& wf, bool quadrature) {
    std::vector<double> v(wf.size());
    for (std::size_t n = 0; n < wf.size(); ++n) v[n] = quadrature ? wf[n].imag() : wf[n].real();
    return v;
}

std::vector<double> times_of(const IQWaveform& wf) {
    std::vector<double> t(wf.size());
    for (std::size_t n = 0; n < wf.size(); ++n) t[n] = wf.time_ns(n);
    return t;
}

// ---- commands ----------------------------------------------------------------

int cmd_waveform(const Options& opt) {
    IoSettings out;
    const auto cfg = config::parse_waveform(load_config(opt, "fig1b", out));
    const IQWaveform plain = build_pulse(cfg.envelope, DragParams{});
    std::optional<IQWaveform> dragged;
    if (cfg.drag.enabled) dragged = build_pulse(cfg.envelope, cfg.drag);
    else cfg.drag.validate();

    prepare_dir(out.out_dir);
    emit(out.out_dir, "waveform_nodrag.csv", output::waveform_csv(plain));
    if (dragged) emit(out.out_dir, "waveform_drag.csv", output::waveform_csv(*dragged));
    if (out.svg) {
        std::vector<svg::Series> series{{"I (no DRAG)", times_of(plain), column_of(plain, false)}};
        if (dragged) {
            series.push_back({"I (DRAG)", times_of(*dragged), column_of(*dragged, false)});
            series.push_back({"Q (DRAG)", times_of(*dragged), column_of(*dragged, true)});
        }
        emit(out.out_dir, "waveform.svg", svg::line_plot("Readout pulse envelopes", "t (ns)", "amplitude", series));
    }

    const double e_plain = waveform_energy(plain);
    std::cout << "energy_nodrag_ns=" << rounded(e_plain, 6);
    if (dragged) {
        const double e_drag = waveform_energy(*dragged);
        std::cout << " energy_drag_ns=" << rounded(e_drag, 6)
                  << " ratio=" << rounded(e_plain > 0.0 ? e_drag / e_plain : 1.0, 6);
    }
    std::cout << "\n";
    return 0;
}

int cmd_spectrum(const Options& opt) {
    IoSettings out;
    const auto cfg = config::parse_spectrum(load_config(opt, "fig1c-200ns", out));
    const std::vector<double> freqs = uniform_grid(cfg.f_min_mhz, cfg.f_max_mhz, cfg.step_mhz);
    const IQWaveform plain = build_pulse(cfg.envelope, DragParams{});
    std::optional<IQWaveform> dragged;
    if (cfg.drag.enabled) dragged = build_pulse(cfg.envelope, cfg.drag);
    else cfg.drag.validate();

    const Complex dc = dtft_at(plain, 0.0);
    const SpectrumGrid s_plain = dtft(plain, freqs);
    std::optional<SpectrumGrid> s_drag;
    if (dragged) s_drag = dtft(*dragged, freqs);

    prepare_dir(out.out_dir);
    emit(out.out_dir, "spectrum_nodrag.csv", output::spectrum_csv(s_plain, dc));
    if (s_drag) emit(out.out_dir, "spectrum_drag.csv", output::spectrum_csv(*s_drag, dc));
    if (out.svg) {
        const auto db = [&](const SpectrumGrid& s) {
            std::vector<double> v(s.amps.size());
            for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] = std::max(-120.0, 20.0 * std::log10(std::abs(s.amps[k]) / std::abs(dc)));
            }
            return v;
        };
        std::vector<svg::Series> series{{"no DRAG", freqs, db(s_plain)}};
        if (s_drag) series.push_back({"DRAG", freqs, db(*s_drag)});
        emit(out.out_dir, "spectrum.svg",
             svg::line_plot("Pulse spectra", "f (MHz)", "|S(f)/S(0)| (dB)", series));
    }

    // Without DRAG the comparison is against itself: 0 dB by definition.
    const double depth = dragged ? notch_depth(plain, *dragged, cfg.probe_mhz) : 0.0;
    std::cout << "notch_depth_db=" << rounded(depth) << " at f_mhz=" << rounded(cfg.probe_mhz) << "\n";
    return 0;
}

int cmd_ramsey(const Options& opt) {
    IoSettings out;
    auto cfg = config::parse_ramsey(load_config(opt, "fig2", out));
    if (opt.seed) cfg.noise.seed = *opt.seed;

    json summary;
    summary["dispersive"] = params_json(cfg.params);
    summary["pulse"] = envelope_json(cfg.pulse);
    summary["amp_cal"] = cfg.amp_cal;
    summary["noise"] = {{"n_theta", cfg.noise.n_theta}, {"sigma", cfg.noise.sigma}, {"seed", cfg.noise.seed}};

    prepare_dir(out.out_dir);
    std::vector<svg::Series> series;
    for (const bool drag : {false, true}) {
        const std::string tag = drag ? "drag" : "nodrag";
        const BeatingScan scan = scan_plateau(cfg.params, cfg.pulse, cfg.taus_ns, drag, cfg.amp_cal, cfg.noise);
        const std::vector<double> c = contrasts_of(scan);
        emit(out.out_dir, "scan_" + tag + ".csv", output::scan_csv(scan));

        // Phase sweep behind the first scan point, with that point's noise seed.
        EnvelopeSpec first = cfg.pulse;
        first.plateau_ns = cfg.taus_ns.front();
        const DragParams dp{drag ? resonator_baseband_mhz(cfg.params) : 0.0, drag};
        const RamseySweep sweep = simulate_ramsey_point(cfg.params, build_pulse(first, dp), cfg.amp_cal,
                                                        cfg.noise.n_theta, cfg.noise.sigma,
                                                        mix_seed(cfg.noise.seed, 0));
        emit(out.out_dir, "sweep_" + tag + ".csv", output::sweep_csv(sweep));

        json entry;
        if (c.size() >= 2) {
            const DecayFit fit = fit_decay(cfg.taus_ns, c);
            entry["t2_eff_us"] = fit.t2_eff_us;
            entry["t2_capped"] = fit.capped;
            entry["c0"] = fit.c0;
            entry["effective_decay_us"] = effective_decay_us(cfg.taus_ns, c);
        }
        if (c.size() >= 4) {
            entry["modulation_depth_200ns"] = modulation_depth(cfg.taus_ns, c, 200.0);
        }
        summary[tag] = entry;
        series.push_back({drag ? "DRAG" : "no DRAG", cfg.taus_ns, c});
        std::cout << tag << ": t2_eff_us=" << (entry.contains("t2_eff_us") ? rounded(entry["t2_eff_us"].get<double>()) : "n/a")
                  << "\n";
    }
    emit(out.out_dir, "ramsey_summary.json", io::dump_json(summary));
    if (out.svg) {
        emit(out.out_dir, "ramsey.svg", svg::line_plot("Ramsey contrast vs plateau", "tau (ns)", "contrast", series));
    }
    return 0;
}

int cmd_dephasing_map(const Options& opt) {
    IoSettings out;
    const auto cfg = config::parse_map(load_config(opt, "fig3", out));
    const MapOptions mopts{cfg.grid, std::nullopt};

    const std::vector<double> drag_dets = without_zero_detuning(cfg.detunings_mhz);
    std::vector<double> omitted;
    for (double d : cfg.detunings_mhz) {
        if (d == 0.0) omitted.push_back(d);
    }
    if (!omitted.empty()) {
        std::cerr << "warning:zero_detuning_skipped:DRAG map omits detuning 0 MHz (no notch can be placed)\n";
    }

    const DephasingMap plain =
        dephasing_map(cfg.params, cfg.pulse, cfg.amps, cfg.detunings_mhz, false, cfg.amp_cal, mopts);
    std::optional<DephasingMap> dragged;
    if (!drag_dets.empty()) {
        dragged = dephasing_map(cfg.params, cfg.pulse, cfg.amps, drag_dets, true, cfg.amp_cal, mopts);
    }

    prepare_dir(out.out_dir);
    emit(out.out_dir, "map_nodrag.csv", output::map_csv(plain));
    if (dragged) emit(out.out_dir, "map_drag.csv", output::map_csv(*dragged));

    json meta;
    meta["dispersive"] = params_json(cfg.params);
    meta["pulse"] = envelope_json(cfg.pulse);
    meta["amp_cal"] = cfg.amp_cal;
    meta["amps"] = cfg.amps;
    meta["detunings_mhz"] = cfg.detunings_mhz;
    meta["drag_detunings_mhz"] = drag_dets;
    meta["omitted_detunings_mhz"] = omitted;
    meta["drag_policy"] = "notch on the resonator: notch_mhz = f_d - f_r";
    meta["integration"] = {{"step_mhz", cfg.grid.step_mhz}, {"half_span_mhz", cfg.grid.half_span_mhz}};
    meta["ringdown_ns"] = ringdown_window_ns(cfg.params);
    emit(out.out_dir, "map_meta.json", io::dump_json(meta));

    if (out.svg) {
        emit(out.out_dir, "map_nodrag.svg",
             svg::heatmap("P_e without DRAG", "detuning (MHz)", "amplitude", plain.detunings_mhz, plain.amps, plain.pe));
        if (dragged) {
            emit(out.out_dir, "map_drag.svg",
                 svg::heatmap("P_e with DRAG", "detuning (MHz)", "amplitude", dragged->detunings_mhz,
                              dragged->amps, dragged->pe));
        }
    }

    double min_plain = 1.0;
    for (double v : plain.pe) min_plain = std::min(min_plain, v);
    std::cout << "cells_nodrag=" << plain.pe.size() << " cells_drag=" << (dragged ? dragged->pe.size() : 0)
              << " min_pe_nodrag=" << rounded(min_plain) << "\n";
    return 0;
}

int cmd_crosstalk(const Options& opt, bool select) {
    IoSettings out;
    const auto cfg = config::parse_crosstalk(load_config(opt, "crosstalk-2", out));
    cfg.plan.validate();
    require_notchable(cfg.plan);

    CrosstalkReport report;
    std::optional<FrequencyPlan> notched;
    if (select) {
        NotchSelection sel = select_notches(cfg.plan, cfg.amp_cal, cfg.options);
        report = std::move(sel.report);
        notched = std::move(sel.plan);
    } else {
        report = crosstalk_matrix(cfg.plan, cfg.amp_cal, cfg.options);
    }

    prepare_dir(out.out_dir);
    emit(out.out_dir, "crosstalk_report.json", io::dump_json(report_to_json(report)));
    emit(out.out_dir, "crosstalk_matrix.csv", report_to_csv(report));
    if (notched) emit(out.out_dir, "plan_notched.json", io::dump_json(plan_to_json(*notched)));

    for (std::size_t i = 0; i < report.victims.size(); ++i) {
        for (std::size_t j = 0; j < report.pulses.size(); ++j) {
            if (report.victims[i] == report.pulses[j]) continue;
            std::cout << report.victims[i] << "<-" << report.pulses[j]
                      << " gamma_per_us=" << rounded(report.gamma[i][j])
                      << " suppression_db=" << rounded(report.suppression_db[i][j]) << "\n";
        }
    }
    return 0;
}

int cmd_selftest(const Options& opt, const std::vector<std::string>& ids) {
    std::optional<fs::path> dir;
    if (opt.out_dir != ".") {
        dir = opt.out_dir;
        prepare_dir(*dir);
        // Fail early on an unwritable directory rather than after the suite.
        emit(*dir, "selftest_report.json", "{}\n");
    }
    bool all_passed = true;
    json report = json::array();
    acceptance::run_suite(ids, [&](const acceptance::CriterionResult& r) {
        std::cout << acceptance::format_line(r) << std::endl;
        all_passed = all_passed && r.passed;
        report.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    });
    if (dir) emit(*dir, "selftest_report.json", io::dump_json(report));
    std::cout << (all_passed ? "selftest: all criteria passed" : "selftest: FAILED") << "\n";
    return all_passed ? 0 : 1;
}

int cmd_presets(const std::string& name) {
    if (name.empty()) {
        for (const auto& n : config::preset_names()) std::cout << n << "\n";
    } else {
        std::cout << io::dump_json(config::preset(name));
    }
    return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "Strict JSON config file");
    cmd->add_option("--preset", opt.preset, "Named preset (see `rdrag presets`)");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--seed", opt.seed, "RNG seed (overrides the config)");
    cmd->add_flag("--svg", opt.svg, "Also write SVG plots");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRAG readout-pulse design and dephasing analysis"};
    app.require_subcommand(1);
    Options opt;

    auto* waveform = app.add_subcommand("waveform", "Sample pulse envelopes (I/Q CSV)");
    auto* spectrum = app.add_subcommand("spectrum", "Pulse spectra and notch depth");
    auto* ramsey = app.add_subcommand("ramsey", "Paired Ramsey plateau scans with and without DRAG");
    auto* map = app.add_subcommand("dephasing-map", "P_e and Stark phase over amplitude x detuning");
    auto* crosstalk = app.add_subcommand("crosstalk", "Crosstalk dephasing matrix for a frequency plan");
    auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    auto* presets = app.add_subcommand("presets", "List presets, or print one as JSON");
    for (auto* cmd : {waveform, spectrum, ramsey, map, crosstalk, selftest}) add_common(cmd, opt);

    bool select = false;
    crosstalk->add_flag("--select-notches", select, "Greedy DRAG notch assignment");
    std::vector<std::string> criteria;
    selftest->add_option("criteria", criteria, "Subset of criteria, e.g. A1 A3");
    std::string preset_name;
    presets->add_option("name", preset_name, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error:usage:" << e.what() << "\n";
        return static_cast<int>(ExitCode::kValidation);
    }

    try {
        if (*waveform) return cmd_waveform(opt);
        if (*spectrum) return cmd_spectrum(opt);
        if (*ramsey) return cmd_ramsey(opt);
        if (*map) return cmd_dephasing_map(opt);
        if (*crosstalk) return cmd_crosstalk(opt, select);
        if (*selftest) return cmd_selftest(opt, criteria);
        if (*presets) return cmd_presets(preset_name);
    } catch (const Error& e) {
        std::cerr << "error:" << e.code() << ":" << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const json::exception& e) {
        std::cerr << "error:config:" << e.what() << "\n";
        return static_cast<int>(ExitCode::kValidation);
    }
    return 0;
}
