#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ranklearn/objective.hpp"
#include "ranklearn/pipeline.hpp"

namespace ranklearn {

/// Classical PageRank per query: uniform restart over the seed set and uniform
/// transitions over out-edges, solved with the same truncated series.
std::vector<Vector> run_pr_baseline(std::span<const QueryProblem> queries, double alpha,
                                    std::size_t n_terms);

/// The untuned gradient-free configuration: fixed iteration count, step and
/// series length, everything else as in learn().
LearnReport run_gf1_baseline(const LearningProblem& problem, std::size_t iterations, double step,
                             std::size_t n_terms, gfo::Rng& rng);

}  // namespace ranklearn
