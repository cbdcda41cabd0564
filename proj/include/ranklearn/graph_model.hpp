#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ranklearn {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Model parameter split into node-weight and edge-weight coefficients.
struct ParamVector {
  Vector phi1;
  Vector phi2;

  std::size_t m1() const { return static_cast<std::size_t>(phi1.size()); }
  std::size_t m2() const { return static_cast<std::size_t>(phi2.size()); }
  std::size_t dim() const { return m1() + m2(); }

  /// (phi1, phi2) stacked into one vector of length m1 + m2.
  Vector concat() const;
  static ParamVector from_concat(const Vector& x, std::size_t m1);
};

struct EdgeInput {
  std::size_t src;
  std::size_t dst;
  std::vector<double> features;
};

/// Query-dependent graph: vertex/edge features and the seed set.
///
/// Out-edges are stored in CSR order by source vertex; edge k of vertex u
/// lives at index edge_begin(u) + k in targets() and edge_features().
class QueryGraph {
 public:
  QueryGraph() = default;

  /// Validates endpoints, feature dimensions and the seed set; throws
  /// ConfigError on violation.
  QueryGraph(std::string query_id, std::size_t m1, std::size_t m2, RowMatrix node_features,
             std::vector<std::uint8_t> seed_mask, std::vector<EdgeInput> edges);

  const std::string& query_id() const { return query_id_; }
  std::size_t num_vertices() const { return seed_mask_.size(); }
  std::size_t num_edges() const { return targets_.size(); }
  std::size_t m1() const { return m1_; }
  std::size_t m2() const { return m2_; }

  bool is_seed(std::size_t v) const { return seed_mask_[v] != 0; }
  const std::vector<std::uint8_t>& seed_mask() const { return seed_mask_; }
  const RowMatrix& node_features() const { return node_features_; }
  const RowMatrix& edge_features() const { return edge_features_; }

  std::size_t edge_begin(std::size_t v) const { return offsets_[v]; }
  std::size_t edge_end(std::size_t v) const { return offsets_[v + 1]; }
  std::size_t out_degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  const std::vector<std::size_t>& targets() const { return targets_; }
  std::size_t edge_source(std::size_t e) const;

 private:
  std::string query_id_;
  std::size_t m1_ = 0;
  std::size_t m2_ = 0;
  RowMatrix node_features_;
  std::vector<std::uint8_t> seed_mask_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  RowMatrix edge_features_;
};

/// Row-stochastic sparse matrix in CSR form. Rows of dangling vertices
/// (no out-edges) are empty and flagged.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::vector<std::size_t> offsets, std::vector<std::size_t> cols,
                   std::vector<double> values);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t nnz() const { return values_.size(); }
  bool is_dangling(std::size_t row) const { return offsets_[row] == offsets_[row + 1]; }
  bool has_dangling() const { return has_dangling_; }

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<std::size_t>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  /// Maximum number of non-zero entries over columns.
  std::size_t sparsity() const { return sparsity_; }

  /// y = P^T x, where dangling rows contribute x[row] * fallback.
  /// `fallback` must have size() entries (typically the restart distribution).
  void multiply_transpose(const Vector& x, const Vector& fallback, Vector& y) const;

  Eigen::MatrixXd to_dense() const;

  /// Dense P in which dangling rows are replaced by `fallback`.
  Eigen::MatrixXd to_dense(const Vector& fallback) const;

  static TransitionMatrix from_dense(const Eigen::MatrixXd& p);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
  std::size_t sparsity_ = 0;
  bool has_dangling_ = false;
};

/// Clamped node weight max(<phi1, V_i>, 0); zero outside the seed set.
double node_weight(const QueryGraph& g, const Vector& phi1, std::size_t i);

/// Clamped edge weight max(<phi2, E_e>, 0) for edge index e.
double edge_weight(const QueryGraph& g, const Vector& phi2, std::size_t e);

/// Normalized clamped seed weights. Throws DegenerateRestart when they sum to zero.
Vector restart_distribution(const QueryGraph& g, const Vector& phi1);

/// Normalized clamped out-edge weights. Throws DegenerateRow(v) when a vertex
/// with out-edges has a zero weight sum.
TransitionMatrix transition_matrix(const QueryGraph& g, const Vector& phi2);

/// Restart distribution uniform over seeds and uniform out-edge transitions,
/// i.e. the classical unparameterized walk.
Vector uniform_restart(const QueryGraph& g);
TransitionMatrix uniform_transition(const QueryGraph& g);

}  // namespace ranklearn
