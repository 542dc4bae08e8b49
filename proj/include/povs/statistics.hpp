#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "povs/sample.hpp"

namespace povs {

// NEW* use the raw values, RNK* pooled midranks, INT* Van der Waerden
// scores. The *1 variants assume equal variances, *2 do not.
enum class Method { New1, New2, Rnk1, Rnk2, Int1, Int2 };

inline constexpr std::array<Method, 6> kAllMethods{Method::New1, Method::New2, Method::Rnk1,
                                                   Method::Rnk2, Method::Int1, Method::Int2};

std::string_view to_string(Method m);       // "new1", ...
std::string_view display_name(Method m);    // "NEW1", ...
std::optional<Method> parse_method(std::string_view name);  // case-insensitive

struct TestResult {
    Method method = Method::New1;
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    std::vector<std::string> warnings;
};

/// Equal-variance partially overlapping samples statistic.
double t_new1(const SampleSummary& s);

/// Degrees of freedom for t_new1; depends on the counts only.
double df_v1(std::size_t n_a, std::size_t n_b, std::size_t n_c);

/// Unequal-variance partially overlapping samples statistic.
double t_new2(const SampleSummary& s);

/// Welch-type effective df (the gamma term) interpolated towards n_c - 1.
double welch_gamma(const SampleSummary& s);
double df_v2(const SampleSummary& s);

/// Statistic, df, p-value and decision for `m`, from the summary of the
/// values `m` consumes (raw, ranks or scores).
TestResult test_from_summary(const SampleSummary& s, Method m, double alpha);

/// Full pipeline for one method. Errors carry the method name.
TestResult run_test(const PartiallyOverlappingSample& s, Method m, double alpha = 0.05);

// One slot per requested method; `error` is set instead of `result` when
// the statistic is degenerate for that method.
struct MethodOutcome {
    Method method = Method::New1;
    std::optional<TestResult> result;
    std::string error;
};

/// Runs several methods sharing the rank and score transforms. Input
/// errors (sample too small) still throw.
std::vector<MethodOutcome> run_tests(const PartiallyOverlappingSample& s,
                                     std::span<const Method> methods, double alpha = 0.05,
                                     double int_c = 0.0);

}  // namespace povs
