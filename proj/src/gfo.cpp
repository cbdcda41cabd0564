#include "ranklearn/gfo.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ranklearn/errors.hpp"

namespace ranklearn::gfo {

Vector sample_sphere(std::size_t m, Rng& rng) {
  if (m == 0) {
    throw ConfigError("sphere dimension must be at least 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector s(static_cast<Eigen::Index>(m));
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s[i] = normal(rng);
    }
    norm = s.norm();
  } while (norm == 0.0);
  return s / norm;
}

OracleSample biased_oracle(const InexactOracle& f, const Vector& x, double mu, const Vector& s) {
  return biased_oracle(f, x, f(x), mu, s);
}

OracleSample biased_oracle(const InexactOracle& f, const Vector& x, double f_x, double mu,
                           const Vector& s) {
  OracleSample out;
  out.f_x = f_x;
  out.f_x_plus = f(x + mu * s);
  const double m = static_cast<double>(x.size());
  out.g = (m / mu) * (out.f_x_plus - out.f_x) * s;
  return out;
}

Vector project_ball(const Vector& x, const FeasibleBall& ball) {
  const Vector d = x - ball.center;
  const double dist = d.norm();
  if (dist <= ball.radius) {
    return x;
  }
  return ball.center + (ball.radius / dist) * d;
}

GfoSchedule make_schedule(double epsilon, double L, double R, std::size_t m, double tau) {
  if (!(epsilon > 0.0 && L > 0.0 && R > 0.0) || m == 0 || !(tau >= 0.0)) {
    throw ConfigError("schedule requires epsilon, L, R > 0, m >= 1 and tau >= 0");
  }
  const double md = static_cast<double>(m);
  GfoSchedule s;
  s.epsilon = epsilon;
  s.L = L;
  s.R = R;
  s.m = m;
  s.tau = tau;
  s.M = static_cast<std::size_t>(std::ceil(32.0 * md * L * R * R / epsilon));
  s.mu = std::sqrt(2.0 * epsilon / (L * (md + 8.0)));
  s.delta = std::pow(epsilon, 1.5) * std::sqrt(2.0) / (32.0 * md * R * std::sqrt(L * (md + 8.0)));
  s.h = 1.0 / (8.0 * md * L);
  return s;
}

namespace {

// f(x + mu s) with fresh directions whenever the perturbed point is outside
// the oracle's domain. Returns the accepted direction and value.
std::pair<Vector, double> perturbed_value(const InexactOracle& f, const Vector& x, double mu,
                                          Rng& rng, const MethodOptions& opts, GfoResult& res,
                                          std::size_t iter) {
  const auto m = static_cast<std::size_t>(x.size());
  for (std::size_t attempt = 0;; ++attempt) {
    Vector s = sample_sphere(m, rng);
    try {
      const double value = f(x + mu * s);
      ++res.oracle_calls;
      return {std::move(s), value};
    } catch (const DomainError& e) {
      if (attempt >= opts.max_resamples) {
        throw OracleDomainError("iteration " + std::to_string(iter) +
                                ": perturbed point outside domain after " +
                                std::to_string(attempt + 1) + " directions: " + e.what());
      }
      ++res.resamples;
    }
  }
}

double base_value(const InexactOracle& f, const Vector& x, GfoResult& res, std::size_t iter) {
  try {
    const double value = f(x);
    ++res.oracle_calls;
    return value;
  } catch (const DomainError& e) {
    throw OracleDomainError("iteration " + std::to_string(iter) + ": " + e.what());
  }
}

}  // namespace

GfoResult gradient_type_method(const InexactOracle& f, const Vector& x0, const GfoSchedule& sched,
                               Rng& rng, const MethodOptions& opts) {
  const FeasibleBall ball = FeasibleBall::around(x0, sched.R);
  const double m = static_cast<double>(x0.size());

  GfoResult res;
  res.best_x = x0;
  res.best_value = std::numeric_limits<double>::infinity();
  res.trace.reserve(sched.M + 1);

  Vector x = x0;
  if (opts.keep_iterates) {
    res.iterates.push_back(x);
  }
  for (std::size_t k = 0; k <= sched.M; ++k) {
    const double f_x = base_value(f, x, res, k);
    if (f_x < res.best_value) {
      res.best_value = f_x;
      res.best_x = x;
    }
    auto [s, f_plus] = perturbed_value(f, x, sched.mu, rng, opts, res, k);
    const Vector g = (m / sched.mu) * (f_plus - f_x) * s;
    Vector next = project_ball(x - sched.h * g, ball);

    res.trace.push_back({k, f_x, f_plus, (next - x).norm(), (next - x0).norm()});
    x = std::move(next);
    if (opts.keep_iterates) {
      res.iterates.push_back(x);
    }
  }
  res.last_x = x;
  return res;
}

FastSchedule make_fast_schedule(double epsilon, double L, double R, std::size_t m, double tau) {
  if (!(epsilon > 0.0 && L > 0.0 && R > 0.0) || m == 0 || !(tau >= 0.0)) {
    throw ConfigError("schedule requires epsilon, L, R > 0, m >= 1 and tau >= 0");
  }
  const double md = static_cast<double>(m);
  FastSchedule s;
  s.epsilon = epsilon;
  s.L = L;
  s.R = R;
  s.m = m;
  s.tau = tau;
  s.N = static_cast<std::size_t>(std::floor(16.0 * md * std::sqrt(3.0 * L * R * R / epsilon)));
  const double n = static_cast<double>(s.N);
  s.mu = std::sqrt(64.0 * epsilon / (3.0 * L * (5.0 * n + 64.0)));
  s.delta = s.N == 0 ? 0.0 : std::sqrt(4.0 * epsilon * s.mu * s.mu * L / (3.0 * n));
  s.theta = 1.0 / (64.0 * md * md * L);
  s.h = 1.0 / (8.0 * md * L);
  s.gamma0 = L;
  return s;
}

double fast_step_coefficient(double gamma, double tau, double theta) {
  // alpha^2 + theta (gamma - tau) alpha - theta gamma = 0
  const double p = theta * (gamma - tau);
  const double q = theta * gamma;
  const double disc = p * p + 4.0 * q;
  if (!(theta > 0.0) || gamma < 0.0 || tau < 0.0 || !(disc >= 0.0)) {
    throw NoPositiveRoot("step coefficient equation has no real root");
  }
  const double root = (-p + std::sqrt(disc)) / 2.0;
  if (!(root > 0.0)) {
    throw NoPositiveRoot("step coefficient equation has no positive root");
  }
  return root;
}

GfoResult fast_method(const InexactOracle& f, const Vector& x0, const FastSchedule& sched, Rng& rng,
                      const MethodOptions& opts) {
  const double m = static_cast<double>(x0.size());

  GfoResult res;
  res.trace.reserve(sched.N);
  Vector x = x0;
  Vector v = x0;
  double gamma = sched.gamma0;
  if (opts.keep_iterates) {
    res.iterates.push_back(x);
  }
  for (std::size_t k = 0; k < sched.N; ++k) {
    const double a = fast_step_coefficient(gamma, sched.tau, sched.theta);
    const double gamma_next = a * a / sched.theta;
    const double lambda = a * sched.tau / gamma_next;
    const double beta = a * gamma / (gamma + a * sched.tau);
    const Vector y = (1.0 - beta) * x + beta * v;

    const double f_y = base_value(f, y, res, k);
    auto [s, f_plus] = perturbed_value(f, y, sched.mu, rng, opts, res, k);
    const Vector g = (m / sched.mu) * (f_plus - f_y) * s;

    Vector next = y - sched.h * g;
    v = (1.0 - lambda) * v + lambda * y - (sched.theta / a) * g;
    gamma = gamma_next;

    res.trace.push_back({k, f_y, f_plus, (next - x).norm(), (next - x0).norm()});
    x = std::move(next);
    if (opts.keep_iterates) {
      res.iterates.push_back(x);
    }
  }
  res.last_x = x;
  res.best_x = x;
  res.best_value = base_value(f, x, res, sched.N);
  return res;
}

GfoResult fast_method(const InexactOracle& f, const Vector& x0, double L, double tau, double R,
                      double epsilon, Rng& rng) {
  const auto sched = make_fast_schedule(epsilon, L, R, static_cast<std::size_t>(x0.size()), tau);
  return fast_method(f, x0, sched, rng);
}

InexactOracle regularize(InexactOracle f, double tau, Vector center) {
  if (!(tau >= 0.0)) {
    throw ConfigError("regularization weight must be non-negative");
  }
  if (tau == 0.0) {
    return f;
  }
  const double delta = f.delta;
  if (center.size() == 0) {
    return {[inner = std::move(f.eval), tau](const Vector& x) {
              return inner(x) + 0.5 * tau * x.squaredNorm();
            },
            delta};
  }
  return {[inner = std::move(f.eval), tau, c = std::move(center)](const Vector& x) {
            if (x.size() != c.size()) throw ConfigError("regularization center has the wrong dimension");
            return inner(x) + 0.5 * tau * (x - c).squaredNorm();
          },
          delta};
}

RestartOutcome restart_on_lipschitz(const std::function<GfoResult(double)>& run, double L_init,
                                    double epsilon, std::size_t max_doublings) {
  if (!(L_init > 0.0)) {
    throw ConfigError("initial Lipschitz estimate must be positive");
  }
  RestartOutcome out;
  double L = L_init;
  for (std::size_t doubling = 0; doubling <= max_doublings; ++doubling) {
    out.result = run(L);
    out.L = L;
    ++out.runs;
    out.best_values.push_back(out.result.best_value);
    const std::size_t n = out.best_values.size();
    if (n >= 2 && std::abs(out.best_values[n - 1] - out.best_values[n - 2]) <= epsilon) {
      return out;
    }
    L *= 2.0;
  }
  throw RestartLimit("best value did not stabilize after " + std::to_string(max_doublings) +
                     " doublings of L");
}

}  // namespace ranklearn::gfo
