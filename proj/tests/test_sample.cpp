#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "povs/error.hpp"
#include "povs/sample.hpp"
#include "reference.hpp"

using namespace povs;

namespace {

PartiallyOverlappingSample parse(const std::string& text) {
    std::istringstream in(text);
    return ingest_csv(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("sample_model") {

TEST_CASE("ingest_csv routes rows by which fields are present") {
    const auto s = parse("group1,group2\n1,2\n3,4\n5,\n,6\n");
    CHECK(s.n_c() == 2);
    CHECK(s.n_a() == 1);
    CHECK(s.n_b() == 1);
    CHECK(s.paired == std::vector<Pair>{{1, 2}, {3, 4}});
    CHECK(s.unpaired_a == std::vector<double>{5});
    CHECK(s.unpaired_b == std::vector<double>{6});

    const auto one = parse("group1,group2\n1,2\n");
    CHECK(one.n_c() == 1);
    CHECK(one.n_a() == 0);
    CHECK(one.n_b() == 0);
}

TEST_CASE("ingest_csv accepts CRLF, BOM, spaces, signs and exponents") {
    const auto s = parse("\xEF\xBB\xBFgroup1, group2\r\n -1.5e2 , +3\r\n\r\n,2E-3\r\n");
    CHECK(s.paired == std::vector<Pair>{{-150.0, 3.0}});
    CHECK(s.unpaired_b == std::vector<double>{0.002});
}

TEST_CASE("ingest_csv errors name the row") {
    CHECK(error_of("group1,group2\n,\n") == "row 2: both fields empty");
    CHECK(error_of("group1,group2\n1,2\n3,abc\n").starts_with("row 3: not a finite number"));
    CHECK(error_of("group1,group2\n1,nan\n").starts_with("row 2:"));
    CHECK(error_of("group1,group2\n1,2,3\n").starts_with("row 2: expected exactly 2 fields"));
    CHECK(error_of("1,2\n3,4\n").starts_with("missing header"));
    CHECK(error_of("").starts_with("missing header"));
}

TEST_CASE("pearson_r examples") {
    const std::vector<Pair> up{{1, 1}, {2, 2}, {3, 3}};
    const std::vector<Pair> down{{1, 3}, {2, 2}, {3, 1}};
    const std::vector<Pair> mixed{{1, 2}, {2, 1}, {3, 4}};
    CHECK(pearson_r(up) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_r(down) == doctest::Approx(-1.0).epsilon(1e-15));
    // product-moment value sqrt(3/7), checked against numpy.corrcoef
    CHECK(pearson_r(mixed) == doctest::Approx(0.6546536707079771).epsilon(1e-14));

    const std::vector<Pair> flat{{1, 5}, {2, 5}, {3, 5}};
    CHECK_THROWS_AS(pearson_r(flat), DegenerateError);
    const std::vector<Pair> single{{1, 5}};
    CHECK_THROWS_AS(pearson_r(single), InputError);
}

TEST_CASE("summarize hand-computed example") {
    PartiallyOverlappingSample s;
    s.paired = {{1, 2}, {2, 4}};
    s.unpaired_a = {3};
    s.unpaired_b = {6};
    const auto sum = summarize(s);
    CHECK(sum.n_1 == 3);
    CHECK(sum.n_2 == 3);
    CHECK(sum.pooled_size == 6);
    CHECK(sum.mean_1 == doctest::Approx(2.0));
    CHECK(sum.mean_2 == doctest::Approx(4.0));
    CHECK(sum.var_1 == doctest::Approx(1.0));
    CHECK(sum.var_2 == doctest::Approx(4.0));
    CHECK(sum.r == doctest::Approx(1.0));
    CHECK_FALSE(sum.r_defaulted);
}

TEST_CASE("summarize edge cases") {
    SUBCASE("constant data") {
        PartiallyOverlappingSample s;
        s.paired = {{7.5, 7.5}, {7.5, 7.5}};
        s.unpaired_a = {7.5};
        const auto sum = summarize(s);
        CHECK(sum.var_1 == 0.0);
        CHECK(sum.var_2 == 0.0);
        CHECK(sum.mean_1 == 7.5);
        CHECK(sum.mean_2 == 7.5);
        CHECK(sum.r == 0.0);
        CHECK(sum.r_defaulted);
    }
    SUBCASE("no pairs") {
        PartiallyOverlappingSample s;
        s.unpaired_a = {1, 2, 3};
        s.unpaired_b = {2, 4, 6};
        const auto sum = summarize(s);
        CHECK(sum.r == 0.0);
        CHECK_FALSE(sum.r_defaulted);
    }
    SUBCASE("single pair") {
        PartiallyOverlappingSample s;
        s.paired = {{1, 2}};
        s.unpaired_a = {3};
        s.unpaired_b = {4};
        const auto sum = summarize(s);
        CHECK(sum.r == 0.0);
        CHECK(sum.r_defaulted);
    }
    SUBCASE("too small") {
        PartiallyOverlappingSample s;
        s.paired = {{1, 2}};
        s.unpaired_b = {4};
        CHECK_THROWS_AS(summarize(s), InputError);
    }
}

TEST_CASE("validate diagnostics") {
    PartiallyOverlappingSample good;
    good.paired = {{1, 2}, {2, 3.5}, {3, 3}};
    good.unpaired_a = {4};
    CHECK(validate(good).empty());

    PartiallyOverlappingSample single = good;
    single.paired = {{1, 2}};
    single.unpaired_b = {5, 6};
    const auto w = validate(single);
    REQUIRE(w.size() == 1);
    CHECK(w[0].severity == Severity::Warning);
    CHECK(w[0].message == "r undefined for a single pair, treated as 0");

    PartiallyOverlappingSample tiny;
    tiny.unpaired_a = {1};
    tiny.unpaired_b = {1, 2};
    const auto f = validate(tiny);
    REQUIRE_FALSE(f.empty());
    CHECK(f[0].severity == Severity::Fatal);
    CHECK(f[0].message.starts_with("Sample 1 too small"));

    PartiallyOverlappingSample flat;
    flat.paired = {{1, 2}, {1, 3}};
    flat.unpaired_a = {1};
    const auto fw = validate(flat);
    CHECK(std::any_of(fw.begin(), fw.end(), [](const Diagnostic& d) {
        return d.message.starts_with("r undefined for a constant");
    }));
    CHECK(std::any_of(fw.begin(), fw.end(), [](const Diagnostic& d) {
        return d.message == "Sample 1 has zero variance";
    }));
}

TEST_CASE("summary properties on random samples") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<std::size_t> count(0, 12);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t nc = count(gen);
        const std::size_t na = count(gen) + (nc < 2 ? 2 : 0);
        const std::size_t nb = count(gen) + (nc < 2 ? 2 : 0);
        auto s = ref::random_sample(gen, na, nb, nc);
        const auto base = summarize(s);

        CHECK(base.pooled_size == base.n_a + base.n_b + 2 * base.n_c);
        CHECK(base.r >= -1.0);
        CHECK(base.r <= 1.0);

        auto shuffled = s;
        std::shuffle(shuffled.paired.begin(), shuffled.paired.end(), gen);
        std::shuffle(shuffled.unpaired_a.begin(), shuffled.unpaired_a.end(), gen);
        std::shuffle(shuffled.unpaired_b.begin(), shuffled.unpaired_b.end(), gen);
        const auto perm = summarize(shuffled);
        CHECK(ref::close(perm.mean_1, base.mean_1, 1e-12));
        CHECK(ref::close(perm.var_2, base.var_2, 1e-12));
        CHECK(ref::close(perm.r, base.r, 1e-12));

        const double c = 3.25;
        auto shifted = s;
        for (auto& p : shifted.paired) p = {p.first + c, p.second + c};
        for (auto& v : shifted.unpaired_a) v += c;
        for (auto& v : shifted.unpaired_b) v += c;
        const auto sh = summarize(shifted);
        CHECK(std::fabs(sh.mean_1 - (base.mean_1 + c)) <= 1e-12 * (1 + std::fabs(c)));
        CHECK(std::fabs(sh.mean_2 - (base.mean_2 + c)) <= 1e-12 * (1 + std::fabs(c)));
        CHECK(ref::close(sh.var_1, base.var_1, 1e-12));
        CHECK(ref::close(sh.var_2, base.var_2, 1e-12));
        CHECK(std::fabs(sh.r - base.r) <= 1e-12);
    }
}

}
