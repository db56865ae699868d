#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rdrag/crosstalk.hpp"
#include "rdrag/dephasing.hpp"
#include "rdrag/dispersive.hpp"
#include "rdrag/ramsey.hpp"
#include "rdrag/waveform.hpp"

// Typed run configurations and the named presets that reproduce the figures.
// Every parser is strict: unknown keys raise ConfigError.
namespace rdrag::config {

struct WaveformConfig {
    EnvelopeSpec envelope;
    DragParams drag;
};

struct SpectrumConfig {
    EnvelopeSpec envelope;
    DragParams drag;
    double f_min_mhz = -150.0;
    double f_max_mhz = 150.0;
    double step_mhz = 0.1;
    double probe_mhz = 50.0;
};

struct RamseyConfig {
    DispersiveParams params;
    EnvelopeSpec pulse;  // plateau is replaced by each tau
    std::vector<double> taus_ns;
    double amp_cal = 1.0;
    NoiseModel noise;
};

struct MapConfig {
    DispersiveParams params;
    EnvelopeSpec pulse;  // amplitude is replaced by each grid value
    std::vector<double> amps;
    std::vector<double> detunings_mhz;
    double amp_cal = 1.0;
    IntegrationGrid grid;
};

struct CrosstalkConfig {
    FrequencyPlan plan;
    double amp_cal = 1.0;
    CrosstalkOptions options;
};

WaveformConfig parse_waveform(const nlohmann::json& doc);
SpectrumConfig parse_spectrum(const nlohmann::json& doc);
RamseyConfig parse_ramsey(const nlohmann::json& doc);
MapConfig parse_map(const nlohmann::json& doc);
CrosstalkConfig parse_crosstalk(const nlohmann::json& doc);

/// Names: fig1b, fig1c-200ns, fig1c-2us, fig2, fig2-edge10, fig3,
/// crosstalk-2, crosstalk-4.
const std::vector<std::string>& preset_names();

/// Config document for a preset. Throws ConfigError for unknown names.
nlohmann::json preset(const std::string& name);

}  // namespace rdrag::config
