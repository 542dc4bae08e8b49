// povs: partially overlapping samples tests and simulation campaigns.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "povs/error.hpp"
#include "povs/report_io.hpp"
#include "povs/sample.hpp"
#include "povs/simulation.hpp"
#include "povs/statistics.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw povs::InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<povs::CellResult> load_results(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw povs::InputError("cannot open '" + path + "'");
    return povs::read_results_csv(in);
}

int cmd_test(const std::string& input, const std::string& method, double alpha,
             const std::string& format) {
    std::vector<povs::Method> methods;
    if (method == "all") {
        methods.assign(povs::kAllMethods.begin(), povs::kAllMethods.end());
    } else if (const auto m = povs::parse_method(method)) {
        methods.push_back(*m);
    } else {
        throw povs::InputError("unknown method '" + method + "'");
    }

    std::ifstream in(input, std::ios::binary);
    if (!in) throw povs::InputError("cannot open '" + input + "'");
    const povs::PartiallyOverlappingSample sample = povs::ingest_csv(in);
    const auto outcomes = povs::run_tests(sample, methods, alpha);

    const auto fmt = format == "json"  ? povs::ResultFormat::Json
                     : format == "csv" ? povs::ResultFormat::Csv
                                       : povs::ResultFormat::Text;
    povs::write_test_results(std::cout, outcomes, fmt);

    int code = kExitOk;
    for (const auto& o : outcomes) {
        if (!o.result) {
            std::cerr << "povs: " << o.error << '\n';
            code = kExitDegenerate;
        }
    }
    return code;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, unsigned threads) {
    const povs::CampaignConfig cfg = povs::parse_config(read_file(config_path));

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw povs::InputError("cannot create output directory '" + out_dir + "'");
    const fs::path results_path = dir / "results.csv";
    const fs::path report_path = dir / "report.json";

    const auto start = std::chrono::steady_clock::now();
    try {
        const povs::CampaignReport report = povs::run_campaign(cfg, threads);
        std::ofstream results(results_path, std::ios::binary);
        povs::write_results_csv(results, report.cells);
        std::ofstream json(report_path, std::ios::binary);
        povs::write_report_json(json, report);
        if (!results || !json) throw povs::InputError("failed writing to '" + out_dir + "'");
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "cells=" << report.cells.size() << " replicates=" << cfg.replicates
                  << " methods=" << cfg.methods.size() << " wall_time=" << seconds << "s -> "
                  << results_path.string() << '\n';
    } catch (...) {
        fs::remove(results_path, ec);
        fs::remove(report_path, ec);
        throw;
    }
    return kExitOk;
}

int cmd_report(const std::string& h0_path, const std::string& h1_path, const std::string& style,
               const std::string& format) {
    const auto fmt = format == "csv" ? povs::TableFormat::Csv : povs::TableFormat::Text;
    const auto h0 = load_results(h0_path);
    if (style == "robustness") {
        povs::write_robustness_table(std::cout, povs::robustness_summary(h0), fmt);
        return kExitOk;
    }
    if (h1_path.empty()) throw povs::InputError("--style power requires --h1");
    const auto h1 = load_results(h1_path);
    povs::write_power_table(std::cout, povs::aggregate_power(h1, h0), fmt);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tests for partially overlapping samples, and Monte Carlo campaigns"};
    app.name("povs");
    app.require_subcommand(1);

    std::string input;
    std::string method = "all";
    double alpha = 0.05;
    std::string test_format = "text";
    auto* test = app.add_subcommand("test", "Run tests on a two-column CSV");
    test->add_option("--input", input, "CSV with header group1,group2")->required();
    test->add_option("--method", method, "new1|new2|rnk1|rnk2|int1|int2|all")
        ->check(CLI::IsMember({"new1", "new2", "rnk1", "rnk2", "int1", "int2", "all"},
                              CLI::ignore_case));
    test->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    test->add_option("--format", test_format, "text|json|csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    std::string config;
    std::string out_dir;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto* simulate = app.add_subcommand("simulate", "Run a simulation campaign");
    simulate->add_option("--config", config, "JSON campaign config")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    std::string h0;
    std::string h1;
    std::string style;
    std::string report_format = "text";
    auto* report = app.add_subcommand("report", "Aggregate campaign results");
    report->add_option("--h0", h0, "results.csv of the H0 campaign")->required();
    report->add_option("--h1", h1, "results.csv of the matching H1 campaign");
    report->add_option("--style", style, "robustness|power")
        ->required()
        ->check(CLI::IsMember({"robustness", "power"}));
    report->add_option("--format", report_format, "csv|text")->check(CLI::IsMember({"csv", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*test) return cmd_test(input, method, alpha, test_format);
        if (*simulate) return cmd_simulate(config, out_dir, threads);
        if (*report) return cmd_report(h0, h1, style, report_format);
    } catch (const povs::InputError& e) {
        std::cerr << "povs: " << e.what() << '\n';
        return kExitInput;
    } catch (const povs::DegenerateError& e) {
        std::cerr << "povs: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "povs: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
