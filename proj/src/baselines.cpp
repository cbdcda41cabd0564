#include "ranklearn/baselines.hpp"

#include "ranklearn/stationary.hpp"

namespace ranklearn {

std::vector<Vector> run_pr_baseline(std::span<const QueryProblem> queries, double alpha,
                                    std::size_t n_terms) {
  const WalkConfig walk(alpha);
  std::vector<Vector> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    out.push_back(
        stationary_series(uniform_restart(q.graph), uniform_transition(q.graph), walk, n_terms).pi);
  }
  return out;
}

LearnReport run_gf1_baseline(const LearningProblem& problem, std::size_t iterations, double step,
                             std::size_t n_terms, gfo::Rng& rng) {
  return learn_fixed(problem, iterations, step, n_terms, rng);
}

}  // namespace ranklearn
