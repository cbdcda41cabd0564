#include "ranklearn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ranklearn/errors.hpp"

namespace ranklearn {

namespace {

double dcg(std::size_t k, std::span<const LabeledDoc> ranking) {
  double total = 0.0;
  const std::size_t n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double gain = std::exp2(static_cast<double>(ranking[i].label)) - 1.0;
    total += gain / std::log2(static_cast<double>(i) + 2.0);
  }
  return total;
}

}  // namespace

std::vector<LabeledDoc> rank_by_score(const Vector& scores, std::span<const LabeledDoc> judged) {
  std::vector<LabeledDoc> out(judged.begin(), judged.end());
  for (const auto& d : out) {
    if (d.doc >= static_cast<std::size_t>(scores.size())) {
      throw IndexOutOfRange("judged document " + std::to_string(d.doc) + " has no score");
    }
  }
  std::sort(out.begin(), out.end(), [&](const LabeledDoc& a, const LabeledDoc& b) {
    const double sa = scores[static_cast<Eigen::Index>(a.doc)];
    const double sb = scores[static_cast<Eigen::Index>(b.doc)];
    if (sa != sb) {
      return sa > sb;
    }
    return a.doc < b.doc;
  });
  return out;
}

double ndcg_at(std::size_t k, std::span<const LabeledDoc> ranking) {
  if (k == 0) {
    throw ConfigError("NDCG cutoff must be at least 1");
  }
  std::vector<LabeledDoc> ideal(ranking.begin(), ranking.end());
  std::stable_sort(ideal.begin(), ideal.end(),
                   [](const LabeledDoc& a, const LabeledDoc& b) { return a.label > b.label; });
  const double idcg = dcg(k, ideal);
  if (idcg == 0.0) {
    return 1.0;
  }
  return dcg(k, ranking) / idcg;
}

NdcgSummary mean_ndcg(std::size_t k, std::span<const Vector> dists,
                      std::span<const QueryProblem> queries, const JudgmentSet& judgments) {
  NdcgSummary s;
  double total = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto it = judgments.queries().find(queries[q].graph.query_id());
    if (it == judgments.queries().end() || it->second.empty()) {
      ++s.degenerate;
      total += 1.0;
      continue;
    }
    total += ndcg_at(k, rank_by_score(dists[q], it->second));
  }
  s.queries = queries.size();
  s.mean = queries.empty() ? 0.0 : total / static_cast<double>(queries.size());
  return s;
}

}  // namespace ranklearn
