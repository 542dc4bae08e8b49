#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "povs/simulation.hpp"
#include "povs/statistics.hpp"

namespace povs {

/// Shortest decimal string that reads back to the same double.
std::string format_number(double v);

/// Parses a JSON campaign config. Absent keys take CampaignConfig defaults;
/// unknown keys are rejected. Throws InputError.
CampaignConfig parse_config(const std::string& json_text);
std::string config_to_json(const CampaignConfig& cfg);

inline constexpr const char* kResultsHeader =
    "n_a,n_b,n_c,rho,dist,delta,method,replicates,rejections,errors,nhrr,classification";

/// One row per (cell, method), in design order.
void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells,
                       RobustnessBand band = {});

/// Inverse of write_results_csv; consecutive rows with the same design
/// point form one cell. Throws InputError on schema problems.
std::vector<CellResult> read_results_csv(std::istream& in);

/// Config, every cell and the robustness summary as one JSON document.
void write_report_json(std::ostream& out, const CampaignReport& report, RobustnessBand band = {});

enum class TableFormat { Csv, Text };

void write_robustness_table(std::ostream& out, const std::vector<RobustnessCount>& counts,
                            TableFormat format);

/// Rows and the six method columns in power-table order; "-" marks a gap.
/// Standard errors, included-cell counts and the whole-group exclusion
/// variant follow as extra columns.
void write_power_table(std::ostream& out, const std::vector<PowerRow>& rows, TableFormat format);

enum class ResultFormat { Text, Json, Csv };

void write_test_results(std::ostream& out, const std::vector<MethodOutcome>& outcomes,
                        ResultFormat format);

}  // namespace povs
