#pragma once

#include <functional>
#include <string>
#include <vector>

// Acceptance suite shared by the `selftest` command and the acceptance test
// binary. Each criterion reproduces one headline result at pinned tolerances.
namespace rdrag::acceptance {

struct CriterionResult {
    std::string id;       // "A1" .. "A9"
    std::string title;
    bool passed = false;
    std::string detail;   // measured values vs limits
    double seconds = 0.0;
};

const std::vector<std::string>& criterion_ids();

/// Runs one criterion. Unexpected exceptions are reported as failures.
CriterionResult run_criterion(const std::string& id);

/// Runs the given criteria (all when empty) in order, calling `on_result`
/// after each one.
std::vector<CriterionResult> run_suite(const std::vector<std::string>& ids = {},
                                       const std::function<void(const CriterionResult&)>& on_result = {});

/// "A1 PASS notch depth: ... [0.21 s]"
std::string format_line(const CriterionResult& result);

}  // namespace rdrag::acceptance
