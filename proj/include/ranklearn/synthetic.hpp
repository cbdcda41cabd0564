#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ranklearn/io.hpp"

namespace ranklearn {

/// Parameters of a planted-model benchmark.
struct SyntheticSpec {
  std::size_t n_queries = 50;
  std::size_t vertices = 60;       // p per query
  double mean_out_degree = 3.0;    // out-degrees uniform in [0, 2 * mean]
  double seed_fraction = 0.3;
  std::size_t m1 = 6;
  std::size_t m2 = 12;
  /// Edge features are (V_src, V_dst); forces m2 = 2 m1.
  bool concat_edge_features = true;
  /// Spread of the log-normal feature values.
  double feature_spread = 1.0;
  int labels = 5;
  std::size_t judged_per_query = 10;
  /// Probability that a judged label is replaced by a uniform random label.
  double label_noise = 0.0;
  double margin = 1e-4;
  /// Damping factor of the planted walk that produces the labels.
  double alpha = 0.15;
  /// Planted coefficients are drawn uniformly from [phi_low, phi_high].
  double phi_low = 1.0;
  double phi_high = 3.0;
  /// Distance of the initial point from the planted parameter.
  double phi0_distance = 2.5;
  std::uint64_t seed = 1;

  /// Throws SpecInfeasible on contradictory settings.
  void validate() const;
};

/// Builds a spec from `key = value` pairs (unknown keys are a ConfigError).
SyntheticSpec synthetic_spec_from(const std::map<std::string, std::string>& kv);

struct SyntheticData {
  io::Dataset dataset;  // dataset.phi0 holds the initial point
  ParamVector phi_star;
};

/// Random graphs with positive log-normal features and a positive planted
/// parameter; labels come from binning the exact planted stationary scores of
/// the judged documents into `labels` equal-size groups. Deterministic per seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace ranklearn
