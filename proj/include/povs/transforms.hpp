#pragma once

#include <cstddef>

#include "povs/sample.hpp"

namespace povs {

enum class TransformKind { Ranks, VdwScores };

// Pooled-rank or normal-score version of a sample. `values` has exactly the
// shape of the source sample; position k of each list holds the transform
// of the source value at position k.
struct TransformedSample {
    PartiallyOverlappingSample values;
    TransformKind kind = TransformKind::Ranks;
    std::size_t pooled_size = 0;
    // Observations that share their value with at least one other.
    std::size_t tie_count = 0;
};

/// Ascending midranks over all n_a + n_b + 2 n_c pooled observations.
TransformedSample pooled_ranks(const PartiallyOverlappingSample& s);

/// Rank-based inverse normal scores Phi^-1((y - c) / (N - 2c + 1)) of the
/// pooled midranks y. c = 0 gives Van der Waerden scores; c must lie in
/// [0, 0.5] so the argument stays inside (0, 1).
TransformedSample normal_scores(const PartiallyOverlappingSample& s, double c);

/// Same as normal_scores, starting from an existing pooled ranking.
TransformedSample normal_scores_from_ranks(const TransformedSample& ranks, double c);

/// Van der Waerden scores, normal_scores(s, 0).
TransformedSample vdw_scores(const PartiallyOverlappingSample& s);

/// summarize() applied to the transformed values.
SampleSummary transformed_summary(const TransformedSample& t);

}  // namespace povs
