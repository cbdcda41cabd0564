#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ranklearn/graph_model.hpp"
#include "ranklearn/objective.hpp"

namespace ranklearn {

/// Judged documents ordered by descending score; ties by ascending doc id.
std::vector<LabeledDoc> rank_by_score(const Vector& scores, std::span<const LabeledDoc> judged);

/// DCG@k / IDCG@k with gain 2^label - 1 and discount 1 / log2(position + 1).
/// `ranking` is already in ranked order. Returns 1 when IDCG is 0.
double ndcg_at(std::size_t k, std::span<const LabeledDoc> ranking);

struct NdcgSummary {
  double mean = 0.0;
  std::size_t queries = 0;
  /// Queries without judged documents (scored 1 by convention).
  std::size_t degenerate = 0;
};

/// Mean NDCG@k over queries; dists[q] scores the documents of queries[q].
NdcgSummary mean_ndcg(std::size_t k, std::span<const Vector> dists,
                      std::span<const QueryProblem> queries, const JudgmentSet& judgments);

}  // namespace ranklearn
