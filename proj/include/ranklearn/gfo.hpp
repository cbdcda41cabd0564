#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ranklearn::gfo {

using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Zero-order oracle whose values are within `delta` of the true function.
struct InexactOracle {
  std::function<double(const Vector&)> eval;
  double delta = 0.0;

  double operator()(const Vector& x) const { return eval(x); }
};

/// Uniform point on the unit sphere in R^m (normalized Gaussian draw).
Vector sample_sphere(std::size_t m, Rng& rng);

struct OracleSample {
  Vector g;
  double f_x = 0.0;
  double f_x_plus = 0.0;
};

/// (m / mu) (f(x + mu s) - f(x)) s. Makes two oracle calls.
OracleSample biased_oracle(const InexactOracle& f, const Vector& x, double mu, const Vector& s);

/// Same estimator reusing an already observed f(x); one oracle call.
OracleSample biased_oracle(const InexactOracle& f, const Vector& x, double f_x, double mu,
                           const Vector& s);

/// Euclidean ball {x : ||x - center|| <= radius}.
struct FeasibleBall {
  Vector center;
  double radius = 0.0;

  /// The set used by the gradient-type method: radius 2R around x0.
  static FeasibleBall around(const Vector& x0, double R) { return {x0, 2.0 * R}; }
};

Vector project_ball(const Vector& x, const FeasibleBall& ball);

/// Constants of the gradient-type method for target accuracy epsilon.
struct GfoSchedule {
  double epsilon = 0.0;
  double L = 0.0;
  double R = 0.0;
  std::size_t m = 0;
  double tau = 0.0;

  std::size_t M = 0;   // iterations: ceil(32 m L R^2 / epsilon)
  double mu = 0.0;     // sqrt(2 epsilon / (L (m + 8)))
  double delta = 0.0;  // epsilon^{3/2} sqrt(2) / (32 m R sqrt(L (m + 8)))
  double h = 0.0;      // 1 / (8 m L)
};

/// Throws ConfigError unless epsilon, L, R > 0, m >= 1 and tau >= 0.
GfoSchedule make_schedule(double epsilon, double L, double R, std::size_t m, double tau = 0.0);

/// One row of the optimizer trace.
struct TraceRow {
  std::size_t iter = 0;
  double f_delta_x = 0.0;
  double f_delta_x_plus = 0.0;
  double step_norm = 0.0;
  double dist_to_x0 = 0.0;
};

struct GfoResult {
  Vector best_x;
  double best_value = 0.0;
  Vector last_x;
  std::vector<TraceRow> trace;
  /// x_0 .. x_M, filled only when MethodOptions::keep_iterates is set.
  std::vector<Vector> iterates;
  std::size_t oracle_calls = 0;
  std::size_t resamples = 0;
};

struct MethodOptions {
  bool keep_iterates = false;
  /// Fresh directions tried when f(x + mu s) leaves the oracle's domain.
  std::size_t max_resamples = 16;
};

/// Projected random gradient-free descent: for k = 0..M,
///   x_{k+1} = Proj_X(x_k - h g(x_k)),  X = ball(x0, 2R).
/// Returns the iterate among x_0..x_M with the smallest observed oracle value.
GfoResult gradient_type_method(const InexactOracle& f, const Vector& x0, const GfoSchedule& sched,
                               Rng& rng, const MethodOptions& opts = {});

/// Constants of the accelerated method.
struct FastSchedule {
  double epsilon = 0.0;
  double L = 0.0;
  double R = 0.0;
  std::size_t m = 0;
  double tau = 0.0;

  std::size_t N = 0;  // floor(16 m sqrt(3 L R^2 / epsilon))
  double mu = 0.0;    // sqrt(64 epsilon / (3 L (5N + 64)))
  double delta = 0.0; // sqrt(4 epsilon mu^2 L / (3N)); 0 when N == 0
  double theta = 0.0; // 1 / (64 m^2 L)
  double h = 0.0;     // 1 / (8 m L)
  double gamma0 = 0.0;
};

FastSchedule make_fast_schedule(double epsilon, double L, double R, std::size_t m, double tau);

/// Positive root alpha of alpha^2 / theta = (1 - alpha) gamma + alpha tau.
/// Throws NoPositiveRoot when none exists.
double fast_step_coefficient(double gamma, double tau, double theta);

/// Accelerated random gradient-free method. Runs N iterations and returns
/// x_N as best_x; best_value is one extra oracle call at x_N.
GfoResult fast_method(const InexactOracle& f, const Vector& x0, const FastSchedule& sched, Rng& rng,
                      const MethodOptions& opts = {});

GfoResult fast_method(const InexactOracle& f, const Vector& x0, double L, double tau, double R,
                      double epsilon, Rng& rng);

/// f(x) + (tau / 2) ||x - center||^2 with the same error promise. An empty
/// center means the origin.
InexactOracle regularize(InexactOracle f, double tau, Vector center = {});

struct RestartOutcome {
  GfoResult result;
  double L = 0.0;
  std::size_t runs = 0;
  std::vector<double> best_values;
};

/// Runs `run(L)` for L = L_init, 2 L_init, ... until two consecutive best
/// values differ by at most epsilon. Throws RestartLimit after max_doublings
/// doublings without stabilization.
RestartOutcome restart_on_lipschitz(const std::function<GfoResult(double)>& run, double L_init,
                                    double epsilon, std::size_t max_doublings = 20);

}  // namespace ranklearn::gfo
