#include "povs/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "povs/special_functions.hpp"

namespace povs {

namespace {

// Pooled layout: paired firsts, paired seconds, unpaired_a, unpaired_b.
std::vector<double> flatten(const PartiallyOverlappingSample& s) {
    std::vector<double> pooled;
    pooled.reserve(s.pooled_size());
    for (const Pair& p : s.paired) pooled.push_back(p.first);
    for (const Pair& p : s.paired) pooled.push_back(p.second);
    pooled.insert(pooled.end(), s.unpaired_a.begin(), s.unpaired_a.end());
    pooled.insert(pooled.end(), s.unpaired_b.begin(), s.unpaired_b.end());
    return pooled;
}

PartiallyOverlappingSample unflatten(const PartiallyOverlappingSample& shape,
                                     const std::vector<double>& pooled) {
    PartiallyOverlappingSample out;
    const std::size_t nc = shape.n_c();
    out.paired.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) out.paired[i] = {pooled[i], pooled[nc + i]};
    auto it = pooled.begin() + static_cast<std::ptrdiff_t>(2 * nc);
    out.unpaired_a.assign(it, it + static_cast<std::ptrdiff_t>(shape.n_a()));
    it += static_cast<std::ptrdiff_t>(shape.n_a());
    out.unpaired_b.assign(it, it + static_cast<std::ptrdiff_t>(shape.n_b()));
    return out;
}

struct Ranking {
    std::vector<double> ranks;
    std::size_t ties = 0;
};

Ranking midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    Ranking out;
    out.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 (0-based) hold ranks i+1..j
        const double rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) out.ranks[order[k]] = rank;
        if (j - i > 1) out.ties += j - i;
        i = j;
    }
    return out;
}

}  // namespace

TransformedSample pooled_ranks(const PartiallyOverlappingSample& s) {
    const Ranking ranking = midranks(flatten(s));
    return {unflatten(s, ranking.ranks), TransformKind::Ranks, s.pooled_size(), ranking.ties};
}

TransformedSample normal_scores_from_ranks(const TransformedSample& ranks, double c) {
    if (ranks.kind != TransformKind::Ranks) {
        throw std::invalid_argument("normal_scores_from_ranks: input is not a ranking");
    }
    if (!(c >= 0.0 && c <= 0.5)) throw std::domain_error("normal_scores: c must lie in [0, 0.5]");
    const double denom = static_cast<double>(ranks.pooled_size) - 2.0 * c + 1.0;
    const auto score = [&](double y) { return normal_quantile((y - c) / denom); };

    TransformedSample out = ranks;
    out.kind = TransformKind::VdwScores;
    for (Pair& p : out.values.paired) p = {score(p.first), score(p.second)};
    for (double& v : out.values.unpaired_a) v = score(v);
    for (double& v : out.values.unpaired_b) v = score(v);
    return out;
}

TransformedSample normal_scores(const PartiallyOverlappingSample& s, double c) {
    return normal_scores_from_ranks(pooled_ranks(s), c);
}

TransformedSample vdw_scores(const PartiallyOverlappingSample& s) { return normal_scores(s, 0.0); }

SampleSummary transformed_summary(const TransformedSample& t) { return summarize(t.values); }

}  // namespace povs
