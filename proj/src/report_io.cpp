#include "povs/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "povs/error.hpp"

namespace povs {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_value(const std::string& text, std::size_t row, const char* column) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw InputError("results row " + std::to_string(row) + ": bad value '" + text +
                         "' in column " + column);
    }
    return value;
}

std::string sign_label(RhoSign s) {
    switch (s) {
        case RhoSign::Positive: return ">0";
        case RhoSign::Zero: return "0";
        case RhoSign::Negative: return "<0";
    }
    return "?";
}

template <typename T, typename Parse>
std::vector<T> read_list(const ordered_json& j, const char* key, Parse parse) {
    if (!j.is_array()) throw InputError(std::string("config: '") + key + "' must be an array");
    std::vector<T> out;
    for (const auto& item : j) out.push_back(parse(item));
    return out;
}

std::size_t read_count(const ordered_json& j, const char* key) {
    if (!j.is_number_unsigned()) {
        throw InputError(std::string("config: '") + key + "' must hold non-negative integers");
    }
    return j.get<std::size_t>();
}

double read_real(const ordered_json& j, const char* key) {
    if (!j.is_number()) throw InputError(std::string("config: '") + key + "' must be numeric");
    return j.get<double>();
}

ordered_json tally_json(const MethodTally& t, std::size_t replicates, RobustnessBand band) {
    ordered_json j;
    j["method"] = std::string(to_string(t.method));
    j["rejections"] = t.rejections;
    j["errors"] = t.errors;
    j["nhrr"] = t.nhrr;
    j["classification"] = std::string(to_string(classify(t, replicates, band)));
    return j;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return {buf, end};
}

CampaignConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("config: top level must be a JSON object");

    CampaignConfig cfg;
    for (const auto& [key, value] : j.items()) {
        const char* k = key.c_str();
        if (key == "n_a" || key == "n_b" || key == "n_c") {
            auto grid = read_list<std::size_t>(value, k, [&](const ordered_json& v) { return read_count(v, k); });
            (key == "n_a" ? cfg.n_a_grid : key == "n_b" ? cfg.n_b_grid : cfg.n_c_grid) = std::move(grid);
        } else if (key == "rho") {
            cfg.rho_grid = read_list<double>(value, k, [&](const ordered_json& v) { return read_real(v, k); });
        } else if (key == "distributions") {
            cfg.distributions = read_list<DistributionKind>(value, k, [](const ordered_json& v) {
                const auto d = v.is_string() ? parse_distribution(v.get<std::string>()) : std::nullopt;
                if (!d) throw InputError("config: unknown distribution " + v.dump());
                return *d;
            });
        } else if (key == "methods") {
            cfg.methods = read_list<Method>(value, k, [](const ordered_json& v) {
                const auto m = v.is_string() ? parse_method(v.get<std::string>()) : std::nullopt;
                if (!m) throw InputError("config: unknown method " + v.dump());
                return *m;
            });
        } else if (key == "delta") {
            cfg.delta = read_real(value, k);
        } else if (key == "alpha") {
            cfg.alpha = read_real(value, k);
        } else if (key == "int_c") {
            cfg.int_c = read_real(value, k);
        } else if (key == "replicates") {
            cfg.replicates = read_count(value, k);
        } else if (key == "master_seed") {
            if (!value.is_number_unsigned()) throw InputError("config: 'master_seed' must be a non-negative integer");
            cfg.master_seed = value.get<std::uint64_t>();
        } else {
            throw InputError("config: unknown key '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

std::string config_to_json(const CampaignConfig& cfg) {
    ordered_json j;
    j["n_a"] = cfg.n_a_grid;
    j["n_b"] = cfg.n_b_grid;
    j["n_c"] = cfg.n_c_grid;
    j["rho"] = cfg.rho_grid;
    j["distributions"] = ordered_json::array();
    for (auto d : cfg.distributions) j["distributions"].push_back(std::string(to_string(d)));
    j["delta"] = cfg.delta;
    j["replicates"] = cfg.replicates;
    j["alpha"] = cfg.alpha;
    j["master_seed"] = cfg.master_seed;
    j["methods"] = ordered_json::array();
    for (auto m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
    j["int_c"] = cfg.int_c;
    return j.dump(2);
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells, RobustnessBand band) {
    out << kResultsHeader << '\n';
    for (const CellResult& cell : cells) {
        const CellParams& p = cell.params;
        for (const MethodTally& t : cell.tallies) {
            out << p.n_a << ',' << p.n_b << ',' << p.n_c << ',' << format_number(p.rho) << ','
                << to_string(p.dist) << ',' << format_number(p.delta) << ',' << to_string(t.method)
                << ',' << cell.replicates_run << ',' << t.rejections << ',' << t.errors << ','
                << format_number(t.nhrr) << ',' << to_string(classify(t, cell.replicates_run, band))
                << '\n';
        }
    }
}

std::vector<CellResult> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("results: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw InputError("results: unexpected header '" + line + "'");

    std::vector<CellResult> cells;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 12) {
            throw InputError("results row " + std::to_string(row) + ": expected 12 columns");
        }
        CellParams p;
        p.n_a = parse_value<std::size_t>(f[0], row, "n_a");
        p.n_b = parse_value<std::size_t>(f[1], row, "n_b");
        p.n_c = parse_value<std::size_t>(f[2], row, "n_c");
        p.rho = parse_value<double>(f[3], row, "rho");
        const auto dist = parse_distribution(f[4]);
        if (!dist) throw InputError("results row " + std::to_string(row) + ": unknown distribution");
        p.dist = *dist;
        p.delta = parse_value<double>(f[5], row, "delta");
        const auto method = parse_method(f[6]);
        if (!method) throw InputError("results row " + std::to_string(row) + ": unknown method");

        MethodTally t;
        t.method = *method;
        const auto replicates = parse_value<std::size_t>(f[7], row, "replicates");
        t.rejections = parse_value<std::size_t>(f[8], row, "rejections");
        t.errors = parse_value<std::size_t>(f[9], row, "errors");
        t.nhrr = parse_value<double>(f[10], row, "nhrr");
        if (!parse_robustness(f[11])) {
            throw InputError("results row " + std::to_string(row) + ": unknown classification");
        }
        if (t.rejections + t.errors > replicates) {
            throw InputError("results row " + std::to_string(row) + ": counts exceed replicates");
        }

        const bool continues =
            !cells.empty() && cells.back().params == p &&
            cells.back().replicates_run == replicates &&
            std::none_of(cells.back().tallies.begin(), cells.back().tallies.end(),
                         [&](const MethodTally& x) { return x.method == t.method; });
        if (!continues) {
            CellResult cell;
            cell.cell_index = cells.size();
            cell.params = p;
            cell.replicates_run = replicates;
            cells.push_back(std::move(cell));
        }
        cells.back().tallies.push_back(t);
    }
    return cells;
}

void write_report_json(std::ostream& out, const CampaignReport& report, RobustnessBand band) {
    ordered_json j;
    j["config"] = ordered_json::parse(config_to_json(report.config));
    j["band"] = {{"lower", band.lower}, {"upper", band.upper}};
    j["cells"] = ordered_json::array();
    for (const CellResult& cell : report.cells) {
        ordered_json c;
        c["cell_index"] = cell.cell_index;
        c["n_a"] = cell.params.n_a;
        c["n_b"] = cell.params.n_b;
        c["n_c"] = cell.params.n_c;
        c["rho"] = cell.params.rho;
        c["dist"] = std::string(to_string(cell.params.dist));
        c["delta"] = cell.params.delta;
        c["replicates"] = cell.replicates_run;
        c["pathological"] = cell.pathological();
        c["methods"] = ordered_json::array();
        for (const MethodTally& t : cell.tallies)
            c["methods"].push_back(tally_json(t, cell.replicates_run, band));
        j["cells"].push_back(std::move(c));
    }
    j["robustness"] = ordered_json::array();
    for (const RobustnessCount& r : report.robustness) {
        j["robustness"].push_back({{"dist", std::string(to_string(r.dist))},
                                   {"method", std::string(to_string(r.method))},
                                   {"robust", r.robust},
                                   {"liberal", r.liberal},
                                   {"conservative", r.conservative},
                                   {"undefined", r.undefined},
                                   {"min_nhrr", r.min_nhrr},
                                   {"max_nhrr", r.max_nhrr}});
    }
    out << j.dump(2) << '\n';
}

void write_robustness_table(std::ostream& out, const std::vector<RobustnessCount>& counts,
                            TableFormat format) {
    if (format == TableFormat::Csv) {
        out << "dist,method,robust,liberal,conservative,undefined,min_nhrr,max_nhrr\n";
        for (const RobustnessCount& r : counts) {
            out << to_string(r.dist) << ',' << to_string(r.method) << ',' << r.robust << ','
                << r.liberal << ',' << r.conservative << ',' << r.undefined << ','
                << format_number(r.min_nhrr) << ',' << format_number(r.max_nhrr) << '\n';
        }
        return;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %-6s %8s %8s %13s %10s %9s %9s\n", "dist", "method",
                  "robust", "liberal", "conservative", "undefined", "min_nhrr", "max_nhrr");
    out << buf;
    for (const RobustnessCount& r : counts) {
        std::snprintf(buf, sizeof buf, "%-12s %-6s %8zu %8zu %13zu %10zu %9.4f %9.4f\n",
                      std::string(to_string(r.dist)).c_str(),
                      std::string(display_name(r.method)).c_str(), r.robust, r.liberal,
                      r.conservative, r.undefined, r.min_nhrr, r.max_nhrr);
        out << buf;
    }
}

void write_power_table(std::ostream& out, const std::vector<PowerRow>& rows, TableFormat format) {
    if (rows.empty()) return;
    const auto& methods = rows.front().entries;
    const auto cell = [&](const std::optional<double>& v) {
        if (!v) return std::string("-");
        return format == TableFormat::Csv ? format_number(*v) : fixed(*v, 3);
    };

    if (format == TableFormat::Csv) {
        out << "distribution,sample_size,rho";
        for (const auto& e : methods) out << ',' << to_string(e.method);
        for (const auto& e : methods) out << ',' << to_string(e.method) << "_se";
        for (const auto& e : methods) out << ',' << to_string(e.method) << "_cells";
        for (const auto& e : methods) out << ',' << to_string(e.method) << "_all_robust";
        out << '\n';
        for (const PowerRow& row : rows) {
            out << to_string(row.dist) << ',' << (row.equal_sizes ? "n_a=n_b" : "n_a!=n_b") << ','
                << sign_label(row.rho_sign);
            for (const auto& e : row.entries) out << ',' << cell(e.power);
            for (const auto& e : row.entries)
                out << ',' << (e.power ? format_number(e.standard_error) : "-");
            for (const auto& e : row.entries) out << ',' << e.cells_included << '/' << e.cells_total;
            for (const auto& e : row.entries) out << ',' << cell(e.power_all_robust);
            out << '\n';
        }
        return;
    }

    char buf[64];
    std::snprintf(buf, sizeof buf, "%-12s %-9s %-3s", "distribution", "size", "rho");
    out << buf;
    for (const auto& e : methods) {
        std::snprintf(buf, sizeof buf, " %6s", std::string(display_name(e.method)).c_str());
        out << buf;
    }
    out << '\n';
    for (const PowerRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%-12s %-9s %-3s", std::string(to_string(row.dist)).c_str(),
                      row.equal_sizes ? "n_a=n_b" : "n_a!=n_b", sign_label(row.rho_sign).c_str());
        out << buf;
        for (const auto& e : row.entries) {
            std::snprintf(buf, sizeof buf, " %6s", cell(e.power).c_str());
            out << buf;
        }
        out << '\n';
    }
}

void write_test_results(std::ostream& out, const std::vector<MethodOutcome>& outcomes,
                        ResultFormat format) {
    switch (format) {
        case ResultFormat::Json: {
            ordered_json arr = ordered_json::array();
            for (const MethodOutcome& o : outcomes) {
                ordered_json j;
                j["method"] = std::string(display_name(o.method));
                if (o.result) {
                    j["statistic"] = o.result->statistic;
                    j["df"] = o.result->df;
                    j["p_value"] = o.result->p_value;
                    j["reject"] = o.result->reject;
                    j["alpha"] = o.result->alpha;
                    j["warnings"] = o.result->warnings;
                } else {
                    j["error"] = o.error;
                }
                arr.push_back(std::move(j));
            }
            out << arr.dump(2) << '\n';
            return;
        }
        case ResultFormat::Csv: {
            out << "method,statistic,df,p_value,reject,alpha,warnings,error\n";
            for (const MethodOutcome& o : outcomes) {
                out << display_name(o.method) << ',';
                if (o.result) {
                    std::string warnings;
                    for (const auto& w : o.result->warnings) warnings += (warnings.empty() ? "" : "; ") + w;
                    out << format_number(o.result->statistic) << ',' << format_number(o.result->df)
                        << ',' << format_number(o.result->p_value) << ','
                        << (o.result->reject ? "true" : "false") << ','
                        << format_number(o.result->alpha) << ',' << quote_csv(warnings) << ",\n";
                } else {
                    out << ",,,,,," << quote_csv(o.error) << '\n';
                }
            }
            return;
        }
        case ResultFormat::Text: {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%-6s %14s %12s %12s  %s\n", "method", "statistic", "df",
                          "p_value", "decision");
            out << buf;
            for (const MethodOutcome& o : outcomes) {
                const std::string name(display_name(o.method));
                if (!o.result) {
                    out << name << "  error: " << o.error << '\n';
                    continue;
                }
                const TestResult& r = *o.result;
                std::snprintf(buf, sizeof buf, "%-6s %14.6f %12.4f %12.6g  %s at alpha=%g\n",
                              name.c_str(), r.statistic, r.df, r.p_value,
                              r.reject ? "reject H0" : "do not reject H0", r.alpha);
                out << buf;
                for (const auto& w : r.warnings) out << "       warning: " << w << '\n';
            }
            return;
        }
    }
}

}  // namespace povs
