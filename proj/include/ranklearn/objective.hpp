#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "ranklearn/graph_model.hpp"
#include "ranklearn/stationary.hpp"

namespace ranklearn {

/// Margins b_{j1 j2} indexed by relevance group (group 1 holds the highest label).
class MarginTable {
 public:
  /// Throws ConfigError unless default_margin > 0.
  explicit MarginTable(double default_margin);

  /// Throws ConfigError unless j2 < j1 and b > 0.
  void set(int j1, int j2, double b);
  double get(int j1, int j2) const;
  double default_margin() const { return default_; }
  const std::map<std::pair<int, int>, double>& overrides() const { return overrides_; }

 private:
  double default_;
  std::map<std::pair<int, int>, double> overrides_;
};

struct LabeledDoc {
  std::size_t doc;
  int label;
};

/// A judged pair: `worse` sits in a lower relevance group than `better`.
struct JudgedPair {
  std::size_t worse;
  std::size_t better;
  double margin;
};

/// Assessor labels 1..k per query plus the margins between label groups.
class JudgmentSet {
 public:
  JudgmentSet(int num_labels, MarginTable margins);

  /// Throws ConfigError for labels outside 1..k or a document judged twice.
  void add(const std::string& query_id, std::size_t doc, int label);

  int num_labels() const { return num_labels_; }
  const MarginTable& margins() const { return margins_; }
  const std::map<std::string, std::vector<LabeledDoc>>& queries() const { return queries_; }

  /// Group index j = k + 1 - label.
  int group_of(int label) const { return num_labels_ + 1 - label; }

  /// Every (worse, better) pair of the query with its group margin.
  std::vector<JudgedPair> pairs_for(const std::string& query_id) const;

 private:
  int num_labels_;
  MarginTable margins_;
  std::map<std::string, std::vector<LabeledDoc>> queries_;
};

/// Graph of one query together with its judged pairs.
struct QueryProblem {
  QueryGraph graph;
  std::vector<JudgedPair> pairs;
};

/// Attaches judgments to graphs. Throws IndexOutOfRange when a judged document
/// is not a vertex and ConfigError when judgments name an unknown query.
std::vector<QueryProblem> bind_judgments(std::vector<QueryGraph> graphs,
                                         const JudgmentSet& judgments);

/// Matrix form of one query's pairs: rows e_worse - e_better, offsets -b.
struct PairMatrix {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a;
  Vector b;
};

PairMatrix build_pair_matrix(std::span<const JudgedPair> pairs, std::size_t num_vertices);

/// (min{x + b, 0})^2 for x = score(better) - score(worse).
double pair_loss(double x, double margin);

/// Loss of one query's scores, summed over pairs.
double query_loss(const Vector& pi, std::span<const JudgedPair> pairs);

/// ||(A pi + b)_+||^2, the matrix form of query_loss.
double query_loss_matrix_form(const Vector& pi, const PairMatrix& pm);

/// Average of query_loss over queries; dists[q] pairs with queries[q].
double loss(std::span<const Vector> dists, std::span<const QueryProblem> queries);

/// r = max_q r_q and b = max_q ||b_q||_2 over the queries.
struct LossConstants {
  double r = 0.0;
  double b = 0.0;
};
LossConstants loss_constants(std::span<const QueryProblem> queries);

/// Objective accuracy guaranteed by an L1 solver accuracy Delta:
/// Delta sqrt(2r) (2 sqrt(2r) + 2b).
double delta_from_Delta(double solver_accuracy, double r, double b);

/// Inverse of delta_from_Delta.
double Delta_from_delta(double objective_accuracy, double r, double b);

/// Series terms that buy objective accuracy `objective_accuracy`.
std::size_t terms_for_objective_accuracy(double alpha, double objective_accuracy, double r,
                                         double b);

/// Stationary approximation for one graph at parameter phi.
StationaryApprox stationary_at(const QueryGraph& g, const ParamVector& phi, WalkConfig walk,
                               std::size_t n_terms);

/// Exact (dense) stationary distribution for one graph at phi.
Vector stationary_exact_at(const QueryGraph& g, const ParamVector& phi, WalkConfig walk);

/// f^delta: the loss evaluated on truncated-series distributions with a fixed
/// number of terms. Holds a non-owning view of the queries.
class InexactObjective {
 public:
  InexactObjective(std::span<const QueryProblem> queries, WalkConfig walk, std::size_t n_terms,
                   std::size_t max_threads = 1);

  /// Throws OracleDomainError (naming the query) if phi leaves the model domain.
  double operator()(const ParamVector& phi);

  /// Same value without touching the counters.
  double evaluate(const ParamVector& phi, std::size_t* matvecs = nullptr) const;

  std::vector<Vector> distributions(const ParamVector& phi) const;

  std::size_t n_terms() const { return n_terms_; }
  std::size_t matvecs() const { return matvecs_; }
  std::size_t evaluations() const { return evaluations_; }
  std::size_t num_queries() const { return queries_.size(); }

 private:
  std::span<const QueryProblem> queries_;
  WalkConfig walk_;
  std::size_t n_terms_;
  std::size_t max_threads_;
  std::size_t matvecs_ = 0;
  std::size_t evaluations_ = 0;
};

/// f evaluated on exact dense solutions (reference for small problems).
double exact_loss(std::span<const QueryProblem> queries, const ParamVector& phi, WalkConfig walk);

}  // namespace ranklearn
