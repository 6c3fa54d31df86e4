#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthsim/scenarios.hpp"

namespace growthsim
{

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;   // headline quantity compared against `threshold`
    double threshold = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, double>> table;   // supporting numbers
};

// Acceptance checks. Each runs its own scenarios at the documented defaults.

CriterionResult check_non_normal_oracle();                  // 1
CriterionResult check_quasistatic_limit();                  // 2
CriterionResult check_pressure_uniformity();                // 3
CriterionResult check_fdm_steady_state();                   // 4
CriterionResult check_transport_characteristics();          // 5
CriterionResult check_inverse_motion();                     // 6
CriterionResult check_determinant_transport();              // 7
CriterionResult check_reconstruction(const std::vector<ScenarioKind>& kinds);   // 8
CriterionResult check_jump_residuals(const std::vector<ScenarioKind>& kinds);   // 9
CriterionResult check_thermal_properties();                 // 10
/// Two runs per scenario written below `work_dir` (a fresh temporary
/// directory when absent), compared byte for byte.
CriterionResult check_determinism(const std::vector<ScenarioKind>& kinds,
                                  const std::optional<std::filesystem::path>& work_dir = std::nullopt); // 11

/// Names accepted by verify_scenario.
const std::vector<std::string>& verify_scenario_names();

/// Criteria relevant to one scenario: non_normal, fdm_shear, thermal,
/// transport, inverse_motion, determinism or all. Throws UsageError for an
/// unknown name.
std::vector<CriterionResult> verify_scenario(const std::string& name);

/// One line per criterion: "PASS [id] name: measured <= threshold (detail)".
std::string format_result(const CriterionResult& result);

} // namespace growthsim
