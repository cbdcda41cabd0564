#include "ranklearn/stationary.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "ranklearn/errors.hpp"

namespace ranklearn {

WalkConfig::WalkConfig(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("damping factor must lie in (0, 1), got " + std::to_string(alpha));
  }
}

Vector stationary_exact_dense(const Vector& pi0, const TransitionMatrix& p, WalkConfig walk) {
  const std::size_t n = p.size();
  if (n > kDenseSolveLimit) {
    throw SizeGuard("dense stationary solve refused for p = " + std::to_string(n));
  }
  const double alpha = walk.alpha();
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(dim, dim);
  system.noalias() -= (1.0 - alpha) * p.to_dense(pi0).transpose();
  Vector rhs = alpha * pi0;
  return system.partialPivLu().solve(rhs);
}

StationaryApprox stationary_series(const Vector& pi0, const TransitionMatrix& p, WalkConfig walk,
                                   std::size_t n_terms) {
  const double alpha = walk.alpha();
  const double decay = 1.0 - alpha;

  StationaryApprox out;
  out.n_terms = n_terms;
  out.pi = alpha * pi0;

  Vector carried = pi0;
  Vector next(pi0.size());
  double weight = alpha;
  for (std::size_t i = 1; i <= n_terms; ++i) {
    p.multiply_transpose(carried, pi0, next);
    carried.swap(next);
    weight *= decay;
    out.pi.noalias() += weight * carried;
    ++out.matvecs;
  }

  out.pi /= 1.0 - std::pow(decay, static_cast<double>(n_terms + 1));
  out.delta_cert = series_certificate(alpha, n_terms);
  return out;
}

double series_certificate(double alpha, std::size_t n_terms) {
  return 2.0 * std::pow(1.0 - alpha, static_cast<double>(n_terms + 1));
}

std::size_t terms_for_accuracy(double alpha, double delta) {
  (void)WalkConfig{alpha};
  if (!(delta > 0.0)) {
    throw ConfigError("solver accuracy must be positive");
  }
  if (series_certificate(alpha, 0) <= delta) {
    return 0;
  }
  // Log-space guess, then fix rounding against the exact inequality.
  const double guess = std::ceil(std::log(delta / 2.0) / std::log1p(-alpha)) - 1.0;
  auto n = static_cast<std::size_t>(std::max(guess, 0.0));
  while (series_certificate(alpha, n) > delta) {
    ++n;
  }
  while (n > 0 && series_certificate(alpha, n - 1) <= delta) {
    --n;
  }
  return n;
}

double terms_upper_estimate(double alpha, double delta) {
  return std::log(2.0 / delta) / alpha;
}

}  // namespace ranklearn
