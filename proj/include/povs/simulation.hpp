#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "povs/rng.hpp"
#include "povs/statistics.hpp"

namespace povs {

struct CampaignConfig {
    std::vector<std::size_t> n_a_grid{5, 10, 30, 50, 100, 500};
    std::vector<std::size_t> n_b_grid{5, 10, 30, 50, 100, 500};
    std::vector<std::size_t> n_c_grid{5, 10, 30, 50, 100, 500};
    std::vector<double> rho_grid{-0.75, -0.50, -0.25, 0.0, 0.25, 0.50, 0.75};
    std::vector<DistributionKind> distributions{DistributionKind::Normal};
    double delta = 0.0;
    std::size_t replicates = 10000;
    double alpha = 0.05;
    std::uint64_t master_seed = 1;
    std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
    // INT offset c; 0 is Van der Waerden.
    double int_c = 0.0;
};

/// Throws InputError naming the first problem (empty grid, |rho| > 1, a
/// count combination with n_j < 2, ...).
void validate_config(const CampaignConfig& cfg);

/// Cartesian product, distribution outermost, then n_a, n_b, n_c, rho.
/// The cell index is the position in this list.
std::vector<CellParams> enumerate_design(const CampaignConfig& cfg);

enum class Robustness { Robust, Liberal, Conservative, Undefined };

std::string_view to_string(Robustness r);
std::optional<Robustness> parse_robustness(std::string_view name);

struct RobustnessBand {
    double lower = 0.025;
    double upper = 0.075;
};

/// Inclusive band: lower <= nhrr <= upper is robust.
Robustness classify_robustness(double nhrr, RobustnessBand band = {});

struct MethodTally {
    Method method = Method::New1;
    std::size_t rejections = 0;
    std::size_t errors = 0;  // degenerate replicates, excluded from the rate
    double nhrr = 0.0;
};

struct CellResult {
    std::size_t cell_index = 0;
    CellParams params;
    std::size_t replicates_run = 0;
    std::vector<MethodTally> tallies;  // in configured method order

    /// True when some method had no usable replicate.
    bool pathological() const;
};

/// NHRR over non-degenerate replicates; Undefined when there are none.
Robustness classify(const MethodTally& t, std::size_t replicates_run, RobustnessBand band = {});

/// Runs every replicate of one cell on its own substreams.
CellResult run_cell(const CellParams& params, std::size_t cell_index, const CampaignConfig& cfg);

struct RobustnessCount {
    DistributionKind dist = DistributionKind::Normal;
    Method method = Method::New1;
    std::size_t robust = 0;
    std::size_t liberal = 0;
    std::size_t conservative = 0;
    std::size_t undefined = 0;
    double min_nhrr = 0.0;
    double max_nhrr = 0.0;
};

/// Per (distribution, method) counts of each classification.
std::vector<RobustnessCount> robustness_summary(const std::vector<CellResult>& cells,
                                                RobustnessBand band = {});

struct CampaignReport {
    CampaignConfig config;
    std::vector<CellResult> cells;  // design order
    std::vector<RobustnessCount> robustness;
};

/// Executes all cells on up to `threads` workers. The result does not
/// depend on the worker count.
CampaignReport run_campaign(const CampaignConfig& cfg, unsigned threads = 1);

enum class RhoSign { Positive, Zero, Negative };

struct PowerEntry {
    Method method = Method::New1;
    // Mean H1 rate over cells whose H0 rate is robust; empty when none is.
    std::optional<double> power;
    // Mean over the whole group, empty as soon as one cell is non-robust.
    std::optional<double> power_all_robust;
    double standard_error = 0.0;
    std::size_t cells_included = 0;
    std::size_t cells_total = 0;
};

struct PowerRow {
    DistributionKind dist = DistributionKind::Normal;
    bool equal_sizes = true;  // n_a == n_b
    RhoSign rho_sign = RhoSign::Positive;
    std::vector<PowerEntry> entries;
};

/// Grouped power aggregation of an H1 campaign, screened by the matching
/// H0 campaign. Throws InputError when the two designs differ.
std::vector<PowerRow> aggregate_power(const std::vector<CellResult>& h1,
                                      const std::vector<CellResult>& h0,
                                      RobustnessBand band = {});

}  // namespace povs
