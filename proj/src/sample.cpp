#include "povs/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <string_view>

#include "povs/error.hpp"

namespace povs {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_field(std::string_view field, std::size_t row) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    std::string_view digits = field;
    if (digits.front() == '+') digits.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || end != digits.data() + digits.size() || !std::isfinite(value)) {
        throw InputError("row " + std::to_string(row) + ": not a finite number: '" +
                         std::string(field) + "'");
    }
    return value;
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

// Two-pass mean and (n - 1)-divisor variance over the concatenation of the
// paired coordinate and the unpaired list.
template <typename Coord>
Moments sample_moments(std::span<const Pair> paired, std::span<const double> unpaired,
                       Coord coord) {
    const double n = static_cast<double>(paired.size() + unpaired.size());
    double sum = 0.0;
    for (const Pair& p : paired) sum += coord(p);
    for (double v : unpaired) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (const Pair& p : paired) ss += (coord(p) - mean) * (coord(p) - mean);
    for (double v : unpaired) ss += (v - mean) * (v - mean);
    return {mean, ss / (n - 1.0)};
}

bool constant_coordinate(std::span<const Pair> pairs, bool first) {
    for (const Pair& p : pairs) {
        const double a = first ? p.first : p.second;
        const double b = first ? pairs.front().first : pairs.front().second;
        if (a != b) return false;
    }
    return true;
}

}  // namespace

PartiallyOverlappingSample ingest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("missing header: expected 'group1,group2'");

    std::string_view header = line;
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto comma = header.find(',');
    if (comma == std::string_view::npos || trim(header.substr(0, comma)) != "group1" ||
        trim(header.substr(comma + 1)) != "group2") {
        throw InputError("missing header: expected 'group1,group2', got '" + std::string(header) +
                         "'");
    }

    PartiallyOverlappingSample s;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view text = line;
        if (trim(text).empty()) continue;
        const auto sep = text.find(',');
        if (sep == std::string_view::npos || text.find(',', sep + 1) != std::string_view::npos) {
            throw InputError("row " + std::to_string(row) + ": expected exactly 2 fields");
        }
        const auto g1 = parse_field(text.substr(0, sep), row);
        const auto g2 = parse_field(text.substr(sep + 1), row);
        if (g1 && g2) {
            s.paired.push_back({*g1, *g2});
        } else if (g1) {
            s.unpaired_a.push_back(*g1);
        } else if (g2) {
            s.unpaired_b.push_back(*g2);
        } else {
            throw InputError("row " + std::to_string(row) + ": both fields empty");
        }
    }
    return s;
}

double pearson_r(std::span<const Pair> pairs) {
    if (pairs.size() < 2) throw InputError("pearson_r: need at least 2 pairs");
    const double n = static_cast<double>(pairs.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const Pair& p : pairs) {
        sx += p.first;
        sy += p.second;
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const Pair& p : pairs) {
        const double dx = p.first - mx;
        const double dy = p.second - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0) || constant_coordinate(pairs, true) ||
        constant_coordinate(pairs, false)) {
        throw DegenerateError("pearson_r: a paired coordinate is constant");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<Diagnostic> validate(const PartiallyOverlappingSample& s) {
    std::vector<Diagnostic> out;
    auto all_finite = [](auto const& values, auto get) {
        for (const auto& v : values)
            if (!std::isfinite(get(v))) return false;
        return true;
    };
    const auto identity = [](double v) { return v; };
    if (!all_finite(s.paired, [](const Pair& p) { return p.first; }) ||
        !all_finite(s.paired, [](const Pair& p) { return p.second; }) ||
        !all_finite(s.unpaired_a, identity) || !all_finite(s.unpaired_b, identity)) {
        out.push_back({Severity::Fatal, "non-finite observation"});
    }
    if (s.n_1() < 2) {
        out.push_back({Severity::Fatal, "Sample 1 too small (n_1 = " + std::to_string(s.n_1()) +
                                            ", need at least 2)"});
    }
    if (s.n_2() < 2) {
        out.push_back({Severity::Fatal, "Sample 2 too small (n_2 = " + std::to_string(s.n_2()) +
                                            ", need at least 2)"});
    }
    if (s.n_c() == 1) {
        out.push_back({Severity::Warning, "r undefined for a single pair, treated as 0"});
    } else if (s.n_c() >= 2 &&
               (constant_coordinate(s.paired, true) || constant_coordinate(s.paired, false))) {
        out.push_back({Severity::Warning, "r undefined for a constant paired coordinate, treated as 0"});
    }
    if (s.n_1() >= 2 && s.n_2() >= 2) {
        const auto first = [](const Pair& p) { return p.first; };
        const auto second = [](const Pair& p) { return p.second; };
        if (sample_moments(s.paired, s.unpaired_a, first).var == 0.0)
            out.push_back({Severity::Warning, "Sample 1 has zero variance"});
        if (sample_moments(s.paired, s.unpaired_b, second).var == 0.0)
            out.push_back({Severity::Warning, "Sample 2 has zero variance"});
    }
    return out;
}

SampleSummary summarize(const PartiallyOverlappingSample& s) {
    if (s.n_1() < 2) throw InputError("Sample 1 too small (n_1 < 2)");
    if (s.n_2() < 2) throw InputError("Sample 2 too small (n_2 < 2)");

    const auto m1 = sample_moments(s.paired, s.unpaired_a, [](const Pair& p) { return p.first; });
    const auto m2 = sample_moments(s.paired, s.unpaired_b, [](const Pair& p) { return p.second; });

    SampleSummary out;
    out.n_a = s.n_a();
    out.n_b = s.n_b();
    out.n_c = s.n_c();
    out.n_1 = s.n_1();
    out.n_2 = s.n_2();
    out.pooled_size = s.pooled_size();
    out.mean_1 = m1.mean;
    out.mean_2 = m2.mean;
    out.var_1 = m1.var;
    out.var_2 = m2.var;
    out.r = 0.0;
    out.r_defaulted = s.n_c() == 1;
    if (s.n_c() >= 2) {
        try {
            out.r = pearson_r(s.paired);
        } catch (const DegenerateError&) {
            out.r_defaulted = true;
        }
    }
    return out;
}

}  // namespace povs
