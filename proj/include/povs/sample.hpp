#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace povs {

struct Pair {
    double first = 0.0;   // Sample 1 coordinate
    double second = 0.0;  // Sample 2 coordinate

    friend bool operator==(const Pair&, const Pair&) = default;
};

// Two samples sharing n_c paired observations, plus observations exclusive
// to each sample. List order is preserved by every transform.
struct PartiallyOverlappingSample {
    std::vector<Pair> paired;
    std::vector<double> unpaired_a;  // only in Sample 1
    std::vector<double> unpaired_b;  // only in Sample 2

    std::size_t n_a() const { return unpaired_a.size(); }
    std::size_t n_b() const { return unpaired_b.size(); }
    std::size_t n_c() const { return paired.size(); }
    std::size_t n_1() const { return n_a() + n_c(); }
    std::size_t n_2() const { return n_b() + n_c(); }
    // Pooled size n_a + n_b + 2 n_c.
    std::size_t pooled_size() const { return n_a() + n_b() + 2 * n_c(); }

    friend bool operator==(const PartiallyOverlappingSample&,
                           const PartiallyOverlappingSample&) = default;
};

// Sufficient statistics for every test. Variances use the n_j - 1 divisor.
struct SampleSummary {
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::size_t n_c = 0;
    std::size_t n_1 = 0;
    std::size_t n_2 = 0;
    std::size_t pooled_size = 0;
    double mean_1 = 0.0;
    double mean_2 = 0.0;
    double var_1 = 0.0;
    double var_2 = 0.0;
    double r = 0.0;
    // Set when r was forced to 0 (fewer than two pairs or a constant coordinate).
    bool r_defaulted = false;
};

enum class Severity { Warning, Fatal };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Reads a two-column CSV with header `group1,group2`. A row with both
/// fields present is a pair; a row with one field is an unpaired
/// observation of that group. Throws InputError naming the row (the header
/// is row 1).
PartiallyOverlappingSample ingest_csv(std::istream& in);

/// Pearson product-moment correlation. Throws DegenerateError when a
/// coordinate is constant and InputError for fewer than two pairs.
double pearson_r(std::span<const Pair> pairs);

/// Warnings and fatal problems; empty for a well-formed sample.
std::vector<Diagnostic> validate(const PartiallyOverlappingSample& s);

/// Throws InputError when n_1 < 2 or n_2 < 2. r falls back to 0 (with
/// r_defaulted set) when it is undefined.
SampleSummary summarize(const PartiallyOverlappingSample& s);

}  // namespace povs
