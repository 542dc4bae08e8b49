#include "povs/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>

#include "povs/error.hpp"

namespace povs {

namespace {

double rate(const MethodTally& t, std::size_t replicates_run) {
    const std::size_t usable = replicates_run - t.errors;
    return usable == 0 ? 0.0 : static_cast<double>(t.rejections) / static_cast<double>(usable);
}

RhoSign sign_of(double rho) {
    if (rho > 0.0) return RhoSign::Positive;
    if (rho < 0.0) return RhoSign::Negative;
    return RhoSign::Zero;
}

bool same_design_point(const CellParams& a, const CellParams& b) {
    return a.n_a == b.n_a && a.n_b == b.n_b && a.n_c == b.n_c && a.rho == b.rho &&
           a.dist == b.dist;
}

}  // namespace

void validate_config(const CampaignConfig& cfg) {
    if (cfg.n_a_grid.empty()) throw InputError("config: grid 'n_a' is empty");
    if (cfg.n_b_grid.empty()) throw InputError("config: grid 'n_b' is empty");
    if (cfg.n_c_grid.empty()) throw InputError("config: grid 'n_c' is empty");
    if (cfg.rho_grid.empty()) throw InputError("config: grid 'rho' is empty");
    if (cfg.distributions.empty()) throw InputError("config: grid 'distributions' is empty");
    if (cfg.methods.empty()) throw InputError("config: grid 'methods' is empty");
    if (cfg.replicates < 1) throw InputError("config: 'replicates' must be at least 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InputError("config: 'alpha' must lie in (0, 1)");
    if (!std::isfinite(cfg.delta)) throw InputError("config: 'delta' must be finite");
    if (!(cfg.int_c >= 0.0 && cfg.int_c <= 0.5)) throw InputError("config: 'int_c' must lie in [0, 0.5]");
    for (double rho : cfg.rho_grid) {
        if (!(rho >= -1.0 && rho <= 1.0)) {
            throw InputError("config: rho " + std::to_string(rho) + " outside [-1, 1]");
        }
    }
    const std::size_t min_a = *std::min_element(cfg.n_a_grid.begin(), cfg.n_a_grid.end());
    const std::size_t min_b = *std::min_element(cfg.n_b_grid.begin(), cfg.n_b_grid.end());
    const std::size_t min_c = *std::min_element(cfg.n_c_grid.begin(), cfg.n_c_grid.end());
    if (min_a + min_c < 2) throw InputError("config: some cells have n_1 = n_a + n_c < 2");
    if (min_b + min_c < 2) throw InputError("config: some cells have n_2 = n_b + n_c < 2");
}

std::vector<CellParams> enumerate_design(const CampaignConfig& cfg) {
    validate_config(cfg);
    std::vector<CellParams> cells;
    cells.reserve(cfg.distributions.size() * cfg.n_a_grid.size() * cfg.n_b_grid.size() *
                  cfg.n_c_grid.size() * cfg.rho_grid.size());
    for (DistributionKind dist : cfg.distributions)
        for (std::size_t na : cfg.n_a_grid)
            for (std::size_t nb : cfg.n_b_grid)
                for (std::size_t nc : cfg.n_c_grid)
                    for (double rho : cfg.rho_grid)
                        cells.push_back({na, nb, nc, rho, dist, cfg.delta});
    return cells;
}

std::string_view to_string(Robustness r) {
    switch (r) {
        case Robustness::Robust: return "robust";
        case Robustness::Liberal: return "liberal";
        case Robustness::Conservative: return "conservative";
        case Robustness::Undefined: return "undefined";
    }
    return "?";
}

std::optional<Robustness> parse_robustness(std::string_view name) {
    for (Robustness r : {Robustness::Robust, Robustness::Liberal, Robustness::Conservative,
                         Robustness::Undefined})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

Robustness classify_robustness(double nhrr, RobustnessBand band) {
    if (nhrr > band.upper) return Robustness::Liberal;
    if (nhrr < band.lower) return Robustness::Conservative;
    return Robustness::Robust;
}

bool CellResult::pathological() const {
    return std::any_of(tallies.begin(), tallies.end(),
                       [&](const MethodTally& t) { return t.errors >= replicates_run; });
}

Robustness classify(const MethodTally& t, std::size_t replicates_run, RobustnessBand band) {
    if (t.errors >= replicates_run) return Robustness::Undefined;
    return classify_robustness(t.nhrr, band);
}

CellResult run_cell(const CellParams& params, std::size_t cell_index, const CampaignConfig& cfg) {
    CellResult out;
    out.cell_index = cell_index;
    out.params = params;
    out.tallies.resize(cfg.methods.size());
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) out.tallies[k].method = cfg.methods[k];

    for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
        DeviateStream stream(substream_seed(cfg.master_seed, cell_index, rep));
        const PartiallyOverlappingSample sample = gen_cell_sample(params, stream);
        const auto outcomes = run_tests(sample, cfg.methods, cfg.alpha, cfg.int_c);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            if (!outcomes[k].result) {
                ++out.tallies[k].errors;
            } else if (outcomes[k].result->reject) {
                ++out.tallies[k].rejections;
            }
        }
    }
    out.replicates_run = cfg.replicates;
    for (MethodTally& t : out.tallies) t.nhrr = rate(t, out.replicates_run);
    return out;
}

std::vector<RobustnessCount> robustness_summary(const std::vector<CellResult>& cells,
                                                RobustnessBand band) {
    std::map<std::pair<DistributionKind, Method>, RobustnessCount> groups;
    for (const CellResult& cell : cells) {
        for (const MethodTally& t : cell.tallies) {
            auto [it, inserted] = groups.try_emplace({cell.params.dist, t.method});
            RobustnessCount& g = it->second;
            if (inserted) {
                g.dist = cell.params.dist;
                g.method = t.method;
                g.min_nhrr = t.nhrr;
                g.max_nhrr = t.nhrr;
            }
            switch (classify(t, cell.replicates_run, band)) {
                case Robustness::Robust: ++g.robust; break;
                case Robustness::Liberal: ++g.liberal; break;
                case Robustness::Conservative: ++g.conservative; break;
                case Robustness::Undefined: ++g.undefined; continue;
            }
            g.min_nhrr = std::min(g.min_nhrr, t.nhrr);
            g.max_nhrr = std::max(g.max_nhrr, t.nhrr);
        }
    }
    std::vector<RobustnessCount> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) out.push_back(g);
    return out;
}

CampaignReport run_campaign(const CampaignConfig& cfg, unsigned threads) {
    const std::vector<CellParams> design = enumerate_design(cfg);
    CampaignReport report;
    report.config = cfg;
    report.cells.resize(design.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < design.size(); i = next++) {
            try {
                report.cells[i] = run_cell(design[i], i, cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(design.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    report.robustness = robustness_summary(report.cells);
    return report;
}

std::vector<PowerRow> aggregate_power(const std::vector<CellResult>& h1,
                                      const std::vector<CellResult>& h0, RobustnessBand band) {
    if (h1.size() != h0.size()) {
        throw InputError("H0 and H1 results cover different designs (" + std::to_string(h0.size()) +
                         " vs " + std::to_string(h1.size()) + " cells)");
    }
    for (std::size_t i = 0; i < h1.size(); ++i) {
        if (!same_design_point(h1[i].params, h0[i].params)) {
            throw InputError("H0 and H1 results differ at cell " + std::to_string(i));
        }
        const bool same_methods = std::equal(
            h1[i].tallies.begin(), h1[i].tallies.end(), h0[i].tallies.begin(), h0[i].tallies.end(),
            [](const MethodTally& a, const MethodTally& b) { return a.method == b.method; });
        if (!same_methods) {
            throw InputError("H0 and H1 results have different methods at cell " + std::to_string(i));
        }
    }
    if (h1.empty()) return {};

    struct Accumulator {
        double sum = 0.0;
        double sum_all = 0.0;
        double variance = 0.0;
        std::size_t included = 0;
        std::size_t total = 0;
    };
    using Key = std::tuple<int, int, int>;  // distribution, unequal sizes, sign
    std::map<Key, std::vector<Accumulator>> groups;
    const std::size_t n_methods = h1.front().tallies.size();

    for (std::size_t i = 0; i < h1.size(); ++i) {
        const CellParams& p = h1[i].params;
        const Key key{static_cast<int>(p.dist), p.n_a == p.n_b ? 0 : 1,
                      static_cast<int>(sign_of(p.rho))};
        auto& accs = groups[key];
        accs.resize(n_methods);
        for (std::size_t k = 0; k < n_methods; ++k) {
            const MethodTally& power = h1[i].tallies[k];
            const bool robust =
                classify(h0[i].tallies[k], h0[i].replicates_run, band) == Robustness::Robust &&
                power.errors < h1[i].replicates_run;
            Accumulator& acc = accs[k];
            ++acc.total;
            acc.sum_all += power.nhrr;
            if (robust) {
                ++acc.included;
                acc.sum += power.nhrr;
                const double usable = static_cast<double>(h1[i].replicates_run - power.errors);
                acc.variance += power.nhrr * (1.0 - power.nhrr) / usable;
            }
        }
    }

    std::vector<PowerRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, accs] : groups) {
        PowerRow row;
        row.dist = static_cast<DistributionKind>(std::get<0>(key));
        row.equal_sizes = std::get<1>(key) == 0;
        row.rho_sign = static_cast<RhoSign>(std::get<2>(key));
        for (std::size_t k = 0; k < n_methods; ++k) {
            const Accumulator& acc = accs[k];
            PowerEntry e;
            e.method = h1.front().tallies[k].method;
            e.cells_included = acc.included;
            e.cells_total = acc.total;
            if (acc.included > 0) {
                const double n = static_cast<double>(acc.included);
                e.power = acc.sum / n;
                e.standard_error = std::sqrt(acc.variance) / n;
            }
            if (acc.included == acc.total) e.power_all_robust = acc.sum_all / static_cast<double>(acc.total);
            row.entries.push_back(e);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace povs
