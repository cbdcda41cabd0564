#include "ranklearn/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ranklearn/errors.hpp"

namespace ranklearn {

void LearningProblem::validate() const {
  if (phi0.m1() == 0 && phi0.m2() == 0) {
    throw ConfigError("initial parameter vector is empty");
  }
  for (const auto& q : queries) {
    if (q.graph.m1() != phi0.m1() || q.graph.m2() != phi0.m2()) {
      throw ConfigError("query " + q.graph.query_id() +
                        ": feature dimensions differ from the parameter vector");
    }
  }
  (void)WalkConfig{alpha};
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

gfo::InexactOracle make_oracle(InexactObjective& objective, const LearningProblem& problem,
                               double delta) {
  const std::size_t m1 = problem.m1();
  gfo::InexactOracle oracle{
      [&objective, m1](const gfo::Vector& x) { return objective(ParamVector::from_concat(x, m1)); },
      delta};
  return problem.regularize ? gfo::regularize(std::move(oracle), problem.tau, problem.phi0.concat())
                            : oracle;
}

void fill_from_result(LearnReport& report, const gfo::GfoResult& res, const LearningProblem& problem) {
  report.best_phi = ParamVector::from_concat(res.best_x, problem.m1());
  report.best_value = res.best_value;
  report.trace = res.trace;
  report.oracle_calls = res.oracle_calls;
}

}  // namespace

LearnReport learn(const LearningProblem& problem, gfo::Rng& rng) {
  problem.validate();
  const auto start = Clock::now();
  const auto sched = gfo::make_schedule(problem.epsilon, problem.L, problem.R, problem.dim(), problem.tau);
  const auto c = problem.constants();
  const std::size_t n_terms = terms_for_objective_accuracy(problem.alpha, sched.delta, c.r, c.b);

  InexactObjective objective(problem.queries, WalkConfig{problem.alpha}, n_terms, problem.max_threads);
  const auto oracle = make_oracle(objective, problem, sched.delta);
  const auto res = gfo::gradient_type_method(oracle, problem.phi0.concat(), sched, rng);

  LearnReport report;
  fill_from_result(report, res, problem);
  report.iterations = sched.M;
  report.n_terms = n_terms;
  report.mu = sched.mu;
  report.delta = sched.delta;
  report.step = sched.h;
  report.matvecs = objective.matvecs();
  report.final_L = problem.L;
  report.wall_seconds = seconds_since(start);
  return report;
}

LearnReport learn_fast(const LearningProblem& problem, gfo::Rng& rng) {
  problem.validate();
  const auto start = Clock::now();
  const auto sched = gfo::make_fast_schedule(problem.epsilon, problem.L, problem.R, problem.dim(),
                                             problem.tau);
  const auto c = problem.constants();
  const std::size_t n_terms =
      sched.N == 0 ? 0 : terms_for_objective_accuracy(problem.alpha, sched.delta, c.r, c.b);

  InexactObjective objective(problem.queries, WalkConfig{problem.alpha}, n_terms, problem.max_threads);
  const auto oracle = make_oracle(objective, problem, sched.delta);
  const auto res = gfo::fast_method(oracle, problem.phi0.concat(), sched, rng);

  LearnReport report;
  fill_from_result(report, res, problem);
  report.iterations = sched.N;
  report.n_terms = n_terms;
  report.mu = sched.mu;
  report.delta = sched.delta;
  report.step = sched.h;
  report.matvecs = objective.matvecs();
  report.final_L = problem.L;
  report.wall_seconds = seconds_since(start);
  return report;
}

LearnReport learn_with_L_restarts(const LearningProblem& problem, double L_init, gfo::Rng& rng) {
  const auto start = Clock::now();
  LearnReport last;
  std::size_t matvecs = 0;
  std::size_t calls = 0;
  auto run = [&](double L) {
    LearningProblem attempt = problem;
    attempt.L = L;
    last = learn(attempt, rng);
    matvecs += last.matvecs;
    calls += last.oracle_calls;
    gfo::GfoResult r;
    r.best_value = last.best_value;
    return r;
  };
  const auto outcome = gfo::restart_on_lipschitz(run, L_init, problem.epsilon, problem.max_doublings);
  last.matvecs = matvecs;
  last.oracle_calls = calls;
  last.runs = outcome.runs;
  last.final_L = outcome.L;
  last.wall_seconds = seconds_since(start);
  return last;
}

LearnReport learn_fixed(const LearningProblem& problem, std::size_t iterations, double step,
                        std::size_t n_terms, gfo::Rng& rng) {
  problem.validate();
  const auto start = Clock::now();
  auto sched = gfo::make_schedule(problem.epsilon, problem.L, problem.R, problem.dim(), problem.tau);
  sched.M = iterations;
  sched.h = step;
  const auto c = problem.constants();
  const double delta = delta_from_Delta(series_certificate(problem.alpha, n_terms), c.r, c.b);

  InexactObjective objective(problem.queries, WalkConfig{problem.alpha}, n_terms, problem.max_threads);
  const auto oracle = make_oracle(objective, problem, delta);
  const auto res = gfo::gradient_type_method(oracle, problem.phi0.concat(), sched, rng);

  LearnReport report;
  fill_from_result(report, res, problem);
  report.iterations = iterations;
  report.n_terms = n_terms;
  report.mu = sched.mu;
  report.delta = delta;
  report.step = step;
  report.matvecs = objective.matvecs();
  report.final_L = problem.L;
  report.wall_seconds = seconds_since(start);
  return report;
}

std::size_t max_sparsity(const std::vector<QueryProblem>& queries) {
  std::size_t s = 0;
  for (const auto& q : queries) {
    s = std::max(s, uniform_transition(q.graph).sparsity());
  }
  return s;
}

std::size_t max_vertices(const std::vector<QueryProblem>& queries) {
  std::size_t p = 0;
  for (const auto& q : queries) {
    p = std::max(p, q.graph.num_vertices());
  }
  return p;
}

CostEstimate predicted_cost(const LearningProblem& problem) {
  const double m = static_cast<double>(problem.dim());
  const double nq = static_cast<double>(problem.queries.size());
  const double L = problem.L;
  const double R = problem.R;
  const double eps = problem.epsilon;
  const double alpha = problem.alpha;
  const auto c = problem.constants();

  CostEstimate est;
  est.max_vertices = max_vertices(problem.queries);
  est.sparsity = max_sparsity(problem.queries);
  const double ps = static_cast<double>(est.max_vertices) * static_cast<double>(est.sparsity);

  est.leading_factor = 64.0 * m * ps * nq * L * R * R / (alpha * eps);
  const double budget = 4.0 * (2.0 * c.r + c.b * std::sqrt(2.0 * c.r));
  const double inverse_delta = 32.0 * m * R * std::sqrt(L * (m + 8.0)) / (std::pow(eps, 1.5) * std::sqrt(2.0));
  est.log_term = std::log(budget * inverse_delta);
  est.operations = est.leading_factor * est.log_term;

  est.fast_operations = m * ps * nq * std::sqrt(L * R * R / (alpha * alpha * eps)) *
                        std::log((c.r + c.b * std::sqrt(c.r)) * m * R * L / eps);
  return est;
}

}  // namespace ranklearn
