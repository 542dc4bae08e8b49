#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "povs/special_functions.hpp"
#include "povs/transforms.hpp"
#include "reference.hpp"

using namespace povs;

namespace {

std::vector<double> all_values(const PartiallyOverlappingSample& s) {
    std::vector<double> out;
    for (const auto& p : s.paired) {
        out.push_back(p.first);
        out.push_back(p.second);
    }
    out.insert(out.end(), s.unpaired_a.begin(), s.unpaired_a.end());
    out.insert(out.end(), s.unpaired_b.begin(), s.unpaired_b.end());
    return out;
}

template <typename F>
PartiallyOverlappingSample map_values(PartiallyOverlappingSample s, F f) {
    for (auto& p : s.paired) p = {f(p.first), f(p.second)};
    for (auto& v : s.unpaired_a) v = f(v);
    for (auto& v : s.unpaired_b) v = f(v);
    return s;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("pooled_ranks examples") {
    PartiallyOverlappingSample s;
    s.unpaired_a = {5, 1};
    s.unpaired_b = {3, 8};
    auto t = pooled_ranks(s);
    CHECK(t.values.unpaired_a == std::vector<double>{3, 1});
    CHECK(t.values.unpaired_b == std::vector<double>{2, 4});
    CHECK(t.tie_count == 0);
    CHECK(t.kind == TransformKind::Ranks);

    PartiallyOverlappingSample tied;
    tied.unpaired_a = {2, 2};
    tied.unpaired_b = {7, 9};
    t = pooled_ranks(tied);
    CHECK(t.values.unpaired_a == std::vector<double>{1.5, 1.5});
    CHECK(t.values.unpaired_b == std::vector<double>{3, 4});
    CHECK(t.tie_count == 2);

    PartiallyOverlappingSample shaped;
    shaped.paired = {{1, 4}};
    shaped.unpaired_a = {2};
    shaped.unpaired_b = {3};
    t = pooled_ranks(shaped);
    CHECK(t.values.paired == std::vector<Pair>{{1, 4}});
    CHECK(t.values.unpaired_a == std::vector<double>{2});
    CHECK(t.values.unpaired_b == std::vector<double>{3});
    CHECK(t.pooled_size == 4);
}

TEST_CASE("vdw_scores examples") {
    PartiallyOverlappingSample s;
    s.unpaired_a = {10.0, -4.0};
    s.unpaired_b = {0.5};
    const auto t = vdw_scores(s);
    CHECK(t.kind == TransformKind::VdwScores);
    // ranks 3, 1, 2 of N = 3 -> Phi^-1(0.75), Phi^-1(0.25), Phi^-1(0.5)
    CHECK(t.values.unpaired_a[0] == doctest::Approx(0.674490).epsilon(1e-6));
    CHECK(t.values.unpaired_a[1] == doctest::Approx(-0.674490).epsilon(1e-6));
    CHECK(t.values.unpaired_b[0] == 0.0);

    const auto blom = normal_scores(s, 0.375);
    CHECK(blom.values.unpaired_a[0] == doctest::Approx(normal_quantile(2.625 / 3.25)));
    CHECK_THROWS(normal_scores(s, 0.7));
}

TEST_CASE("transformed_summary examples") {
    PartiallyOverlappingSample s;
    s.unpaired_a = {1, 2};
    s.unpaired_b = {3, 4};
    const auto sum = transformed_summary(pooled_ranks(s));
    CHECK(sum.mean_1 == 1.5);
    CHECK(sum.mean_2 == 3.5);
    CHECK(sum.var_1 == 0.5);
    CHECK(sum.var_2 == 0.5);
    CHECK(sum.r == 0.0);

    PartiallyOverlappingSample flat;
    flat.paired = {{4, 4}, {4, 4}};
    flat.unpaired_a = {4};
    const auto fsum = transformed_summary(pooled_ranks(flat));
    CHECK(fsum.var_1 == 0.0);
    CHECK(fsum.var_2 == 0.0);

    // Mirror-image groups give opposite mean scores.
    PartiallyOverlappingSample mirror;
    mirror.unpaired_a = {-3, -1, -0.5};
    mirror.unpaired_b = {3, 1, 0.5};
    const auto msum = transformed_summary(vdw_scores(mirror));
    CHECK(msum.mean_1 == doctest::Approx(-msum.mean_2).epsilon(1e-12));
}

TEST_CASE("rank and score invariants on random samples") {
    std::mt19937_64 gen(4242);
    std::uniform_int_distribution<std::size_t> count(0, 15);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t nc = count(gen);
        auto s = ref::random_sample(gen, count(gen) + 2, count(gen) + 2, nc);
        if (coin(gen) == 0) {
            // introduce ties by coarse rounding
            s = map_values(s, [](double v) { return std::round(v); });
        }
        const double n = static_cast<double>(s.pooled_size());

        const auto ranks = pooled_ranks(s);
        const auto rv = all_values(ranks.values);
        CHECK(std::fabs(std::accumulate(rv.begin(), rv.end(), 0.0) - n * (n + 1) / 2) <= 1e-9);
        CHECK(*std::min_element(rv.begin(), rv.end()) >= 1.0);
        CHECK(*std::max_element(rv.begin(), rv.end()) <= n);
        CHECK(ranks.values.n_a() == s.n_a());
        CHECK(ranks.values.n_b() == s.n_b());
        CHECK(ranks.values.n_c() == s.n_c());

        // Structure preservation: slot k keeps the rank of source value k.
        const auto src = all_values(s);
        for (std::size_t i = 0; i < src.size(); ++i) {
            const double below = static_cast<double>(std::count_if(src.begin(), src.end(), [&](double v) { return v < src[i]; }));
            const double equal = static_cast<double>(std::count(src.begin(), src.end(), src[i]));
            CHECK(rv[i] == below + (equal + 1) / 2);
        }

        // Monotone invariance, bit for bit.
        const auto g = map_values(s, [](double v) { return std::exp(v / 3.0) * 2.0 + 1.0; });
        CHECK(pooled_ranks(g).values == ranks.values);
        CHECK(vdw_scores(g).values == vdw_scores(s).values);

        const auto scores = vdw_scores(s);
        CHECK(scores.tie_count == ranks.tie_count);
        if (ranks.tie_count == 0) {
            auto sv = all_values(scores.values);
            std::sort(sv.begin(), sv.end());
            for (std::size_t i = 0; i < sv.size(); ++i)
                CHECK(std::fabs(sv[i] + sv[sv.size() - 1 - i]) <= 1e-9);
            CHECK(std::fabs(std::accumulate(sv.begin(), sv.end(), 0.0)) <= 1e-9);
        }
    }
}

}
