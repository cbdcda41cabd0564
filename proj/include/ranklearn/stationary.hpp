#pragma once

#include <cstddef>

#include "ranklearn/graph_model.hpp"

namespace ranklearn {

/// Damping factor of the walk: probability of restarting at each step.
class WalkConfig {
 public:
  /// Throws ConfigError unless 0 < alpha < 1.
  explicit WalkConfig(double alpha);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// Truncated-series stationary distribution together with its L1 certificate.
struct StationaryApprox {
  Vector pi;
  std::size_t n_terms = 0;
  /// 2 (1 - alpha)^(n_terms + 1); bounds the L1 distance to the exact solution.
  double delta_cert = 0.0;
  /// Transposed sparse products performed; always equals n_terms.
  std::size_t matvecs = 0;
};

/// Largest graph accepted by the dense reference solver.
inline constexpr std::size_t kDenseSolveLimit = 2000;

/// Solves pi = alpha pi0 + (1 - alpha) P^T pi by dense LU factorization.
/// Dangling rows of P are replaced by pi0. Throws SizeGuard above kDenseSolveLimit.
Vector stationary_exact_dense(const Vector& pi0, const TransitionMatrix& p, WalkConfig walk);

/// Normalized partial sum
///   alpha / (1 - (1-alpha)^(N+1)) * sum_{i=0..N} (1-alpha)^i (P^T)^i pi0
/// computed with N sparse products and a single carried vector.
StationaryApprox stationary_series(const Vector& pi0, const TransitionMatrix& p, WalkConfig walk,
                                   std::size_t n_terms);

/// Certificate 2 (1 - alpha)^(N+1) for N series terms.
double series_certificate(double alpha, std::size_t n_terms);

/// Smallest N with 2 (1 - alpha)^(N+1) <= delta. Requires 0 < delta.
std::size_t terms_for_accuracy(double alpha, double delta);

/// The closed-form estimate (1/alpha) ln(2/delta); an upper bound on terms_for_accuracy.
double terms_upper_estimate(double alpha, double delta);

}  // namespace ranklearn
