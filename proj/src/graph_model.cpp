#include "ranklearn/graph_model.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "ranklearn/errors.hpp"

namespace ranklearn {

Vector ParamVector::concat() const {
  Vector x(static_cast<Eigen::Index>(dim()));
  x << phi1, phi2;
  return x;
}

ParamVector ParamVector::from_concat(const Vector& x, std::size_t m1) {
  const auto head = static_cast<Eigen::Index>(m1);
  if (head > x.size()) {
    throw ConfigError("parameter vector shorter than m1");
  }
  return ParamVector{x.head(head), x.tail(x.size() - head)};
}

QueryGraph::QueryGraph(std::string query_id, std::size_t m1, std::size_t m2,
                       RowMatrix node_features, std::vector<std::uint8_t> seed_mask,
                       std::vector<EdgeInput> edges)
    : query_id_(std::move(query_id)),
      m1_(m1),
      m2_(m2),
      node_features_(std::move(node_features)),
      seed_mask_(std::move(seed_mask)) {
  const std::size_t p = seed_mask_.size();
  if (p == 0) {
    throw ConfigError("query " + query_id_ + ": graph has no vertices");
  }
  if (static_cast<std::size_t>(node_features_.rows()) != p ||
      static_cast<std::size_t>(node_features_.cols()) != m1_) {
    throw ConfigError("query " + query_id_ + ": node feature matrix must be p x m1");
  }
  if (std::none_of(seed_mask_.begin(), seed_mask_.end(), [](auto s) { return s != 0; })) {
    throw ConfigError("query " + query_id_ + ": seed set is empty");
  }
  for (const auto& e : edges) {
    if (e.src >= p || e.dst >= p) {
      throw ConfigError("query " + query_id_ + ": edge endpoint out of range");
    }
    if (e.features.size() != m2_) {
      throw ConfigError("query " + query_id_ + ": edge feature dimension differs from m2");
    }
  }

  // Stable sort by source keeps the file order of each vertex's out-edges.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a].src < edges[b].src;
  });

  offsets_.assign(p + 1, 0);
  for (const auto& e : edges) {
    ++offsets_[e.src + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  targets_.resize(edges.size());
  edge_features_.resize(static_cast<Eigen::Index>(edges.size()), static_cast<Eigen::Index>(m2_));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& e = edges[order[k]];
    targets_[k] = e.dst;
    for (std::size_t j = 0; j < m2_; ++j) {
      edge_features_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = e.features[j];
    }
  }

  for (std::size_t v = 0; v < p; ++v) {
    std::vector<std::size_t> out(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                                 targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
      throw ConfigError("query " + query_id_ + ": duplicate edge from vertex " +
                        std::to_string(v));
    }
  }
}

std::size_t QueryGraph::edge_source(std::size_t e) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

TransitionMatrix::TransitionMatrix(std::vector<std::size_t> offsets, std::vector<std::size_t> cols,
                                   std::vector<double> values)
    : offsets_(std::move(offsets)), cols_(std::move(cols)), values_(std::move(values)) {
  const std::size_t p = size();
  std::vector<std::size_t> column_count(p, 0);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] != 0.0) {
      ++column_count[cols_[k]];
    }
  }
  sparsity_ = column_count.empty() ? 0 : *std::max_element(column_count.begin(), column_count.end());
  for (std::size_t r = 0; r < p; ++r) {
    if (is_dangling(r)) {
      has_dangling_ = true;
      break;
    }
  }
}

void TransitionMatrix::multiply_transpose(const Vector& x, const Vector& fallback, Vector& y) const {
  const std::size_t p = size();
  y.setZero(static_cast<Eigen::Index>(p));
  double dangling_mass = 0.0;
  for (std::size_t r = 0; r < p; ++r) {
    const double xr = x[static_cast<Eigen::Index>(r)];
    const std::size_t begin = offsets_[r];
    const std::size_t end = offsets_[r + 1];
    if (begin == end) {
      dangling_mass += xr;
      continue;
    }
    for (std::size_t k = begin; k < end; ++k) {
      y[static_cast<Eigen::Index>(cols_[k])] += values_[k] * xr;
    }
  }
  if (dangling_mass != 0.0) {
    y.noalias() += dangling_mass * fallback;
  }
}

Eigen::MatrixXd TransitionMatrix::to_dense() const {
  const auto p = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) += values_[k];
    }
  }
  return dense;
}

Eigen::MatrixXd TransitionMatrix::to_dense(const Vector& fallback) const {
  Eigen::MatrixXd dense = to_dense();
  for (std::size_t r = 0; r < size(); ++r) {
    if (is_dangling(r)) {
      dense.row(static_cast<Eigen::Index>(r)) = fallback.transpose();
    }
  }
  return dense;
}

TransitionMatrix TransitionMatrix::from_dense(const Eigen::MatrixXd& p) {
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> values;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
      if (p(r, c) != 0.0) {
        cols.push_back(static_cast<std::size_t>(c));
        values.push_back(p(r, c));
      }
    }
    offsets.push_back(cols.size());
  }
  return TransitionMatrix(std::move(offsets), std::move(cols), std::move(values));
}

double node_weight(const QueryGraph& g, const Vector& phi1, std::size_t i) {
  if (!g.is_seed(i)) {
    return 0.0;
  }
  const double w = g.node_features().row(static_cast<Eigen::Index>(i)).dot(phi1);
  return std::max(w, 0.0);
}

double edge_weight(const QueryGraph& g, const Vector& phi2, std::size_t e) {
  const double w = g.edge_features().row(static_cast<Eigen::Index>(e)).dot(phi2);
  return std::max(w, 0.0);
}

Vector restart_distribution(const QueryGraph& g, const Vector& phi1) {
  const std::size_t p = g.num_vertices();
  Vector pi0(static_cast<Eigen::Index>(p));
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double w = node_weight(g, phi1, i);
    pi0[static_cast<Eigen::Index>(i)] = w;
    total += w;
  }
  if (!(total > 0.0)) {
    throw DegenerateRestart();
  }
  pi0 /= total;
  return pi0;
}

TransitionMatrix transition_matrix(const QueryGraph& g, const Vector& phi2) {
  const std::size_t p = g.num_vertices();
  std::vector<std::size_t> offsets(p + 1);
  for (std::size_t v = 0; v <= p; ++v) {
    offsets[v] = v < p ? g.edge_begin(v) : g.num_edges();
  }
  std::vector<double> values(g.num_edges());
  for (std::size_t v = 0; v < p; ++v) {
    double total = 0.0;
    for (std::size_t e = g.edge_begin(v); e < g.edge_end(v); ++e) {
      values[e] = edge_weight(g, phi2, e);
      total += values[e];
    }
    if (g.out_degree(v) == 0) {
      continue;
    }
    if (!(total > 0.0)) {
      throw DegenerateRow(v);
    }
    for (std::size_t e = g.edge_begin(v); e < g.edge_end(v); ++e) {
      values[e] /= total;
    }
  }
  return TransitionMatrix(std::move(offsets), g.targets(), std::move(values));
}

Vector uniform_restart(const QueryGraph& g) {
  const std::size_t p = g.num_vertices();
  Vector pi0 = Vector::Zero(static_cast<Eigen::Index>(p));
  double seeds = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    if (g.is_seed(i)) {
      pi0[static_cast<Eigen::Index>(i)] = 1.0;
      seeds += 1.0;
    }
  }
  return pi0 / seeds;
}

TransitionMatrix uniform_transition(const QueryGraph& g) {
  const std::size_t p = g.num_vertices();
  std::vector<std::size_t> offsets(p + 1);
  std::vector<double> values(g.num_edges());
  for (std::size_t v = 0; v < p; ++v) {
    offsets[v] = g.edge_begin(v);
    const double share = 1.0 / static_cast<double>(std::max<std::size_t>(g.out_degree(v), 1));
    for (std::size_t e = g.edge_begin(v); e < g.edge_end(v); ++e) {
      values[e] = share;
    }
  }
  offsets[p] = g.num_edges();
  return TransitionMatrix(std::move(offsets), g.targets(), std::move(values));
}

}  // namespace ranklearn
