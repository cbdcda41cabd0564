#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ranklearn/graph_model.hpp"
#include "ranklearn/objective.hpp"

namespace testutil {

using ranklearn::EdgeInput;
using ranklearn::QueryGraph;
using ranklearn::RowMatrix;
using ranklearn::Vector;

inline RowMatrix rows(const std::vector<std::vector<double>>& v) {
  RowMatrix m(static_cast<Eigen::Index>(v.size()),
              v.empty() ? 0 : static_cast<Eigen::Index>(v.front().size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j];
    }
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Graph whose nodes and edges all carry the constant feature 1 (m1 = m2 = 1).
inline QueryGraph unit_graph(const std::string& id, std::size_t p,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                             std::vector<std::uint8_t> seeds) {
  std::vector<EdgeInput> e;
  for (auto [s, d] : edges) e.push_back({s, d, {1.0}});
  return QueryGraph(id, 1, 1, RowMatrix::Ones(static_cast<Eigen::Index>(p), 1), std::move(seeds),
                    std::move(e));
}

/// Random graph with positive features, at least one seed, no self loops.
inline QueryGraph random_graph(std::mt19937_64& rng, const std::string& id, std::size_t p,
                               std::size_t m1, std::size_t m2, double edge_prob = 0.15,
                               double seed_prob = 0.4) {
  std::uniform_real_distribution<double> feat(0.1, 2.0);
  std::bernoulli_distribution has_edge(edge_prob), is_seed(seed_prob);
  RowMatrix nodes(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m1));
  for (Eigen::Index i = 0; i < nodes.rows(); ++i)
    for (Eigen::Index j = 0; j < nodes.cols(); ++j) nodes(i, j) = feat(rng);
  std::vector<std::uint8_t> seeds(p);
  bool any = false;
  for (auto& s : seeds) {
    s = is_seed(rng) ? 1 : 0;
    any = any || s;
  }
  if (!any) seeds[0] = 1;
  std::vector<EdgeInput> edges;
  for (std::size_t u = 0; u < p; ++u) {
    for (std::size_t v = 0; v < p; ++v) {
      if (u == v || !has_edge(rng)) continue;
      EdgeInput e{u, v, {}};
      for (std::size_t j = 0; j < m2; ++j) e.features.push_back(feat(rng));
      edges.push_back(std::move(e));
    }
  }
  return QueryGraph(id, m1, m2, std::move(nodes), std::move(seeds), std::move(edges));
}

/// Fixed-point iteration of pi = alpha pi0 + (1 - alpha) P^T pi on a dense P
/// (dangling rows already replaced), run far past convergence.
inline Vector power_reference(const Vector& pi0, const Eigen::MatrixXd& p, double alpha) {
  Vector pi = pi0;
  const int iters = static_cast<int>(std::ceil(40.0 / alpha)) + 200;
  for (int it = 0; it < iters; ++it) {
    pi = alpha * pi0 + (1.0 - alpha) * p.transpose() * pi;
  }
  return pi;
}

inline ranklearn::ParamVector ones(std::size_t m1, std::size_t m2) {
  return {Vector::Ones(static_cast<Eigen::Index>(m1)), Vector::Ones(static_cast<Eigen::Index>(m2))};
}

}  // namespace testutil
