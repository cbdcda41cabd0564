#pragma once

#include <cstddef>
#include <vector>

#include "ranklearn/gfo.hpp"
#include "ranklearn/graph_model.hpp"
#include "ranklearn/objective.hpp"

namespace ranklearn {

/// Everything the two-level learner needs. r and b are always recomputed
/// from the judged pairs.
struct LearningProblem {
  std::vector<QueryProblem> queries;
  double alpha = 0.15;
  ParamVector phi0;
  double L = 1.0;
  double R = 1.0;
  double epsilon = 1e-2;
  /// Strong convexity parameter; 0 for merely convex objectives.
  double tau = 0.0;
  /// When set, the objective is f + (tau/2)||phi - phi0||^2. Centering at the
/// start matters: the loss is constant along rays, so a pull toward the
/// origin drives phi to the domain boundary.
  bool regularize = false;
  std::size_t max_threads = 1;
  std::size_t max_doublings = 20;

  std::size_t m1() const { return phi0.m1(); }
  std::size_t dim() const { return phi0.dim(); }
  LossConstants constants() const { return loss_constants(queries); }

  /// Throws ConfigError when graphs disagree with phi0's dimensions.
  void validate() const;
};

struct LearnReport {
  ParamVector best_phi;
  double best_value = 0.0;
  std::vector<gfo::TraceRow> trace;
  std::size_t iterations = 0;  // M for the gradient method, N for the fast one
  std::size_t n_terms = 0;     // series terms per stationary solve
  double mu = 0.0;
  double delta = 0.0;
  double step = 0.0;
  std::size_t matvecs = 0;
  std::size_t oracle_calls = 0;
  std::size_t runs = 1;
  double final_L = 0.0;
  double wall_seconds = 0.0;
};

/// Gradient-type method driven by the inexact loss; the series length is the
/// smallest one whose certificate meets the schedule's oracle budget.
LearnReport learn(const LearningProblem& problem, gfo::Rng& rng);

/// Accelerated variant with its own schedule and oracle budget.
LearnReport learn_fast(const LearningProblem& problem, gfo::Rng& rng);

/// learn() with L doubled from L_init until the best value stabilizes within
/// epsilon. Counters accumulate over all runs.
LearnReport learn_with_L_restarts(const LearningProblem& problem, double L_init, gfo::Rng& rng);

/// Gradient-type method with a caller-fixed iteration count, step and series
/// length (the untuned configuration); mu still comes from the schedule.
LearnReport learn_fixed(const LearningProblem& problem, std::size_t iterations, double step,
                        std::size_t n_terms, gfo::Rng& rng);

struct CostEstimate {
  double operations = 0.0;      // leading_factor * log_term
  double leading_factor = 0.0;  // 64 m p s |Q| L R^2 / (alpha epsilon)
  double log_term = 0.0;
  double fast_operations = 0.0; // order-of-magnitude form, unit constant
  std::size_t max_vertices = 0; // p
  std::size_t sparsity = 0;     // s
};

/// Arithmetic-operation estimate for learn() to reach accuracy epsilon.
CostEstimate predicted_cost(const LearningProblem& problem);

/// Structural column sparsity (max in-degree) over all graphs.
std::size_t max_sparsity(const std::vector<QueryProblem>& queries);
std::size_t max_vertices(const std::vector<QueryProblem>& queries);

}  // namespace ranklearn
