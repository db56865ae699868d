#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdrag/dephasing.hpp"
#include "rdrag/waveform.hpp"

namespace rdrag {

struct ResonatorEntry {
    std::string id;
    double f_r_mhz = 0.0;  // absolute resonator frequency
    double kappa_mhz = 0.0;
    double chi_mhz = 0.0;
    double t2_us = 0.0;
};

/// Probe pulse aimed at one resonator. `amplitude` overrides envelope.amplitude.
struct PulseAssignment {
    std::string target;
    EnvelopeSpec envelope;
    double carrier_mhz = 0.0;
    double amplitude = 1.0;
    std::optional<DragParams> drag;
};

struct FrequencyPlan {
    std::vector<ResonatorEntry> resonators;
    std::vector<PulseAssignment> pulses;

    // Unique ids, kappa > 0, existing targets, distinct carriers.
    void validate() const;
    std::size_t index_of(const std::string& id) const;
};

struct NotchChoice {
    std::size_t pulse = 0;
    std::optional<std::size_t> victim;  // unset when no notch improved the column
    double notch_mhz = 0.0;
};

/// gamma[i][j]: dephasing rate (1/us) induced on qubit i by pulse j.
/// suppression_db[i][j] = 10 log10(gamma / gamma_baseline) where the baseline
/// is the same plan with DRAG disabled everywhere; 0 when both vanish.
struct CrosstalkReport {
    std::vector<std::string> victims;
    std::vector<std::string> pulses;  // pulse target ids, in plan order
    std::vector<std::vector<double>> gamma;
    std::vector<std::vector<double>> baseline;
    std::vector<std::vector<double>> suppression_db;
    std::vector<NotchChoice> notches;  // filled by select_notches
};

struct CrosstalkOptions {
    IntegrationGrid grid{0.05, 200.0};
};

/// Spectral dephasing rate of every (victim, pulse) pair. The victim sees
/// pulse j at drive detuning delta_d = f_r,i - f_d,j.
CrosstalkReport crosstalk_matrix(const FrequencyPlan& plan, double amp_cal,
                                 const CrosstalkOptions& options = {});

/// Baseband notch (MHz) that places a DRAG zero on `victim` for a pulse with
/// carrier `carrier_mhz`.
double notch_for_victim(const ResonatorEntry& victim, double carrier_mhz);

struct NotchSelection {
    FrequencyPlan plan;
    CrosstalkReport report;
};

/// Throws UndefinedNotchError if some pulse carrier coincides with a
/// resonator other than its target: no DRAG notch can protect that victim.
void require_notchable(const FrequencyPlan& plan);

/// Greedy single-notch assignment. For each pulse the off-diagonal victims are
/// ranked by baseline dephasing (ties within 1e-9 relative go to the smaller
/// |detuning|, then to the earlier resonator in the plan). The highest-ranked
/// victim whose notch lowers its own entry without raising the column maximum
/// receives the notch; if none qualifies the pulse keeps DRAG disabled.
///
/// Throws UndefinedNotchError if the worst victim sits exactly on the carrier
/// (see require_notchable).
NotchSelection select_notches(const FrequencyPlan& plan, double amp_cal,
                              const CrosstalkOptions& options = {});

// JSON interface. Parsing is strict: unknown keys raise ConfigError.
FrequencyPlan plan_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const FrequencyPlan& plan);
nlohmann::json report_to_json(const CrosstalkReport& report);

// CSV: header `victim,pulse,gamma_per_us,baseline_per_us,suppression_db`.
std::string report_to_csv(const CrosstalkReport& report);

}  // namespace rdrag
