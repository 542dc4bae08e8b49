#include "povs/statistics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "povs/error.hpp"
#include "povs/special_functions.hpp"
#include "povs/transforms.hpp"

namespace povs {

namespace {

// A bracket that has cancelled to within this fraction of its positive part
// is rounding noise, not a variance.
constexpr double kCancellation = 1e-12;
constexpr double kFloor = 1e-300;

enum class Family { Pooled, Welch };
enum class Input { Raw, Ranks, Scores };

Family family_of(Method m) {
    switch (m) {
        case Method::New1:
        case Method::Rnk1:
        case Method::Int1: return Family::Pooled;
        default: return Family::Welch;
    }
}

Input input_of(Method m) {
    switch (m) {
        case Method::New1:
        case Method::New2: return Input::Raw;
        case Method::Rnk1:
        case Method::Rnk2: return Input::Ranks;
        default: return Input::Scores;
    }
}

void check_bracket(double bracket, double positive_part, const char* what) {
    if (!(positive_part > 0.0) || !(bracket > kCancellation * positive_part) ||
        !(bracket > kFloor)) {
        throw DegenerateError(std::string(what) + ": standard error is zero");
    }
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::New1: return "new1";
        case Method::New2: return "new2";
        case Method::Rnk1: return "rnk1";
        case Method::Rnk2: return "rnk2";
        case Method::Int1: return "int1";
        case Method::Int2: return "int2";
    }
    return "?";
}

std::string_view display_name(Method m) {
    switch (m) {
        case Method::New1: return "NEW1";
        case Method::New2: return "NEW2";
        case Method::Rnk1: return "RNK1";
        case Method::Rnk2: return "RNK2";
        case Method::Int1: return "INT1";
        case Method::Int2: return "INT2";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (Method m : kAllMethods)
        if (to_string(m) == lower) return m;
    return std::nullopt;
}

double t_new1(const SampleSummary& s) {
    const double n1 = static_cast<double>(s.n_1);
    const double n2 = static_cast<double>(s.n_2);
    const double nc = static_cast<double>(s.n_c);
    const double pooled_var = ((n1 - 1.0) * s.var_1 + (n2 - 1.0) * s.var_2) / (n1 + n2 - 2.0);
    if (!(pooled_var > 0.0)) throw DegenerateError("t_new1: pooled variance is zero");
    // 1/n1 + 1/n2 - 2 r n_c / (n1 n2), rearranged so that r -> 1 does not cancel.
    const double unpaired = static_cast<double>(s.n_a + s.n_b);
    const double bracket = (unpaired + 2.0 * nc * (1.0 - s.r)) / (n1 * n2);
    check_bracket(bracket, 1.0 / n1 + 1.0 / n2, "t_new1");
    return (s.mean_1 - s.mean_2) / (std::sqrt(pooled_var) * std::sqrt(bracket));
}

double df_v1(std::size_t n_a, std::size_t n_b, std::size_t n_c) {
    if (n_a + n_c < 2 || n_b + n_c < 2) throw InputError("df_v1: each sample needs n_j >= 2");
    const double na = static_cast<double>(n_a);
    const double nb = static_cast<double>(n_b);
    const double nc = static_cast<double>(n_c);
    const double df = (nc - 1.0) + ((na + nb + nc - 1.0) / (na + nb + 2.0 * nc)) * (na + nb);
    if (!(df > 0.0)) throw DegenerateError("df_v1: degrees of freedom not positive");
    return df;
}

double t_new2(const SampleSummary& s) {
    const double n1 = static_cast<double>(s.n_1);
    const double n2 = static_cast<double>(s.n_2);
    const double nc = static_cast<double>(s.n_c);
    const double u1 = s.var_1 / n1;
    const double u2 = s.var_2 / n2;
    // u1 + u2 - 2 r k sqrt(u1 u2) with k = n_c / sqrt(n1 n2) <= 1, written as
    // a sum of non-negative terms for r <= 1.
    const double k = nc / std::sqrt(n1 * n2);
    const double root1 = std::sqrt(u1);
    const double root2 = std::sqrt(u2);
    const double bracket = (root1 - root2) * (root1 - root2) +
                           2.0 * root1 * root2 * ((1.0 - k) + k * (1.0 - s.r));
    check_bracket(bracket, u1 + u2, "t_new2");
    return (s.mean_1 - s.mean_2) / std::sqrt(bracket);
}

double welch_gamma(const SampleSummary& s) {
    const double n1 = static_cast<double>(s.n_1);
    const double n2 = static_cast<double>(s.n_2);
    const double u1 = s.var_1 / n1;
    const double u2 = s.var_2 / n2;
    if (!(u1 + u2 > 0.0)) throw DegenerateError("df_v2: both sample variances are zero");
    return (u1 + u2) * (u1 + u2) / (u1 * u1 / (n1 - 1.0) + u2 * u2 / (n2 - 1.0));
}

double df_v2(const SampleSummary& s) {
    if (s.n_1 < 2 || s.n_2 < 2) throw InputError("df_v2: each sample needs n_j >= 2");
    const double na = static_cast<double>(s.n_a);
    const double nb = static_cast<double>(s.n_b);
    const double nc = static_cast<double>(s.n_c);
    const double gamma = welch_gamma(s);
    const double df = (nc - 1.0) + ((gamma - nc + 1.0) / (na + nb + 2.0 * nc)) * (na + nb);
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw DegenerateError("df_v2: degrees of freedom not positive");
    }
    return df;
}

TestResult test_from_summary(const SampleSummary& s, Method m, double alpha) {
    TestResult out;
    out.method = m;
    out.alpha = alpha;
    if (family_of(m) == Family::Pooled) {
        out.statistic = t_new1(s);
        out.df = df_v1(s.n_a, s.n_b, s.n_c);
    } else {
        out.statistic = t_new2(s);
        out.df = df_v2(s);
    }
    out.p_value = t_p_two_sided(out.statistic, out.df);
    out.reject = out.p_value < alpha;
    return out;
}

TestResult run_test(const PartiallyOverlappingSample& s, Method m, double alpha) {
    const Method methods[] = {m};
    auto outcomes = run_tests(s, methods, alpha);
    if (!outcomes.front().result) throw DegenerateError(outcomes.front().error);
    return std::move(*outcomes.front().result);
}

std::vector<MethodOutcome> run_tests(const PartiallyOverlappingSample& s,
                                     std::span<const Method> methods, double alpha,
                                     double int_c) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");

    std::vector<std::string> base_warnings;
    for (const Diagnostic& d : validate(s)) {
        if (d.severity == Severity::Fatal) throw InputError(d.message);
        base_warnings.push_back(d.message);
    }

    std::optional<SampleSummary> raw;
    std::optional<TransformedSample> ranks;
    std::optional<TransformedSample> scores;
    std::optional<SampleSummary> rank_summary;
    std::optional<SampleSummary> score_summary;

    std::vector<MethodOutcome> out;
    out.reserve(methods.size());
    for (Method m : methods) {
        MethodOutcome outcome;
        outcome.method = m;
        std::vector<std::string> warnings = base_warnings;
        const SampleSummary* summary = nullptr;
        const TransformedSample* transformed = nullptr;
        switch (input_of(m)) {
            case Input::Raw:
                if (!raw) raw = summarize(s);
                summary = &*raw;
                break;
            case Input::Ranks:
                if (!rank_summary) {
                    if (!ranks) ranks = pooled_ranks(s);
                    rank_summary = transformed_summary(*ranks);
                }
                summary = &*rank_summary;
                transformed = &*ranks;
                break;
            case Input::Scores:
                if (!scores) {
                    if (!ranks) ranks = pooled_ranks(s);
                    scores = normal_scores_from_ranks(*ranks, int_c);
                    score_summary = transformed_summary(*scores);
                }
                summary = &*score_summary;
                transformed = &*scores;
                break;
        }
        if (transformed != nullptr) {
            if (transformed->tie_count > 0) {
                warnings.push_back(std::to_string(transformed->tie_count) +
                                   " tied observations received midranks");
            }
            if (summary->r_defaulted && s.n_c() >= 2 &&
                std::find_if(warnings.begin(), warnings.end(), [](const std::string& w) {
                    return w.starts_with("r undefined");
                }) == warnings.end()) {
                warnings.push_back("r undefined for constant transformed pairs, treated as 0");
            }
        }
        try {
            TestResult result = test_from_summary(*summary, m, alpha);
            result.warnings = std::move(warnings);
            outcome.result = std::move(result);
        } catch (const DegenerateError& e) {
            outcome.error = std::string(display_name(m)) + ": " + e.what();
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace povs
