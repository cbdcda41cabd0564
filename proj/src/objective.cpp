#include "ranklearn/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "ranklearn/errors.hpp"
#include "ranklearn/parallel.hpp"

namespace ranklearn {

MarginTable::MarginTable(double default_margin) : default_(default_margin) {
  if (!(default_margin > 0.0)) {
    throw ConfigError("default margin must be positive");
  }
}

void MarginTable::set(int j1, int j2, double b) {
  if (!(j2 < j1) || j2 < 1) {
    throw ConfigError("margin indices must satisfy 1 <= j2 < j1");
  }
  if (!(b > 0.0)) {
    throw ConfigError("margins must be strictly positive");
  }
  overrides_[{j1, j2}] = b;
}

double MarginTable::get(int j1, int j2) const {
  auto it = overrides_.find({j1, j2});
  return it == overrides_.end() ? default_ : it->second;
}

JudgmentSet::JudgmentSet(int num_labels, MarginTable margins)
    : num_labels_(num_labels), margins_(std::move(margins)) {
  if (num_labels < 1) {
    throw ConfigError("label count must be at least 1");
  }
}

void JudgmentSet::add(const std::string& query_id, std::size_t doc, int label) {
  if (label < 1 || label > num_labels_) {
    throw ConfigError("query " + query_id + ": label " + std::to_string(label) +
                      " outside 1.." + std::to_string(num_labels_));
  }
  auto& docs = queries_[query_id];
  for (const auto& d : docs) {
    if (d.doc == doc) {
      throw ConfigError("query " + query_id + ": document " + std::to_string(doc) +
                        " judged twice");
    }
  }
  docs.push_back({doc, label});
}

std::vector<JudgedPair> JudgmentSet::pairs_for(const std::string& query_id) const {
  std::vector<JudgedPair> pairs;
  auto it = queries_.find(query_id);
  if (it == queries_.end()) {
    return pairs;
  }
  std::vector<LabeledDoc> docs = it->second;
  std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.doc < b.doc; });
  for (const auto& worse : docs) {
    for (const auto& better : docs) {
      if (better.label > worse.label) {
        const int j1 = group_of(worse.label);
        const int j2 = group_of(better.label);
        pairs.push_back({worse.doc, better.doc, margins_.get(j1, j2)});
      }
    }
  }
  return pairs;
}

std::vector<QueryProblem> bind_judgments(std::vector<QueryGraph> graphs,
                                         const JudgmentSet& judgments) {
  std::set<std::string> known;
  for (const auto& g : graphs) {
    if (!known.insert(g.query_id()).second) {
      throw ConfigError("duplicate graph for query " + g.query_id());
    }
  }
  for (const auto& [query, docs] : judgments.queries()) {
    if (!known.contains(query)) {
      throw ConfigError("judgments reference unknown query " + query);
    }
  }

  std::vector<QueryProblem> out;
  out.reserve(graphs.size());
  for (auto& g : graphs) {
    auto pairs = judgments.pairs_for(g.query_id());
    auto it = judgments.queries().find(g.query_id());
    if (it != judgments.queries().end()) {
      for (const auto& d : it->second) {
        if (d.doc >= g.num_vertices()) {
          throw IndexOutOfRange("query " + g.query_id() + ": judged document " +
                                std::to_string(d.doc) + " is not a vertex");
        }
      }
    }
    out.push_back({std::move(g), std::move(pairs)});
  }
  return out;
}

PairMatrix build_pair_matrix(std::span<const JudgedPair> pairs, std::size_t num_vertices) {
  PairMatrix pm;
  const auto rows = static_cast<Eigen::Index>(pairs.size());
  pm.a.resize(rows, static_cast<Eigen::Index>(num_vertices));
  pm.b.resize(rows);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * pairs.size());
  for (Eigen::Index k = 0; k < rows; ++k) {
    const auto& pr = pairs[static_cast<std::size_t>(k)];
    entries.emplace_back(k, static_cast<Eigen::Index>(pr.worse), 1.0);
    entries.emplace_back(k, static_cast<Eigen::Index>(pr.better), -1.0);
    pm.b[k] = -pr.margin;
  }
  pm.a.setFromTriplets(entries.begin(), entries.end());
  return pm;
}

double pair_loss(double x, double margin) {
  const double t = std::min(x + margin, 0.0);
  return t * t;
}

double query_loss(const Vector& pi, std::span<const JudgedPair> pairs) {
  double total = 0.0;
  const auto p = static_cast<std::size_t>(pi.size());
  for (const auto& pr : pairs) {
    if (pr.better >= p || pr.worse >= p) {
      throw IndexOutOfRange("judged document " + std::to_string(std::max(pr.better, pr.worse)) +
                            " is not a vertex");
    }
    const double x = pi[static_cast<Eigen::Index>(pr.better)] - pi[static_cast<Eigen::Index>(pr.worse)];
    total += pair_loss(x, pr.margin);
  }
  return total;
}

double query_loss_matrix_form(const Vector& pi, const PairMatrix& pm) {
  const Vector v = pm.a * pi + pm.b;
  return v.cwiseMax(0.0).squaredNorm();
}

double loss(std::span<const Vector> dists, std::span<const QueryProblem> queries) {
  if (dists.size() != queries.size()) {
    throw ConfigError("one distribution per query is required");
  }
  if (queries.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (static_cast<std::size_t>(dists[q].size()) != queries[q].graph.num_vertices()) {
      throw IndexOutOfRange("distribution size does not match query " +
                            queries[q].graph.query_id());
    }
    total += query_loss(dists[q], queries[q].pairs);
  }
  return total / static_cast<double>(queries.size());
}

LossConstants loss_constants(std::span<const QueryProblem> queries) {
  LossConstants c;
  for (const auto& q : queries) {
    c.r = std::max(c.r, static_cast<double>(q.pairs.size()));
    double sq = 0.0;
    for (const auto& pr : q.pairs) {
      sq += pr.margin * pr.margin;
    }
    c.b = std::max(c.b, std::sqrt(sq));
  }
  return c;
}

double delta_from_Delta(double solver_accuracy, double r, double b) {
  const double s = std::sqrt(2.0 * r);
  return solver_accuracy * s * (2.0 * s + 2.0 * b);
}

double Delta_from_delta(double objective_accuracy, double r, double b) {
  const double s = std::sqrt(2.0 * r);
  const double factor = s * (2.0 * s + 2.0 * b);
  if (factor == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return objective_accuracy / factor;
}

std::size_t terms_for_objective_accuracy(double alpha, double objective_accuracy, double r,
                                         double b) {
  return terms_for_accuracy(alpha, Delta_from_delta(objective_accuracy, r, b));
}

StationaryApprox stationary_at(const QueryGraph& g, const ParamVector& phi, WalkConfig walk,
                               std::size_t n_terms) {
  const Vector pi0 = restart_distribution(g, phi.phi1);
  const TransitionMatrix p = transition_matrix(g, phi.phi2);
  return stationary_series(pi0, p, walk, n_terms);
}

Vector stationary_exact_at(const QueryGraph& g, const ParamVector& phi, WalkConfig walk) {
  const Vector pi0 = restart_distribution(g, phi.phi1);
  const TransitionMatrix p = transition_matrix(g, phi.phi2);
  return stationary_exact_dense(pi0, p, walk);
}

InexactObjective::InexactObjective(std::span<const QueryProblem> queries, WalkConfig walk,
                                   std::size_t n_terms, std::size_t max_threads)
    : queries_(queries), walk_(walk), n_terms_(n_terms), max_threads_(max_threads) {}

double InexactObjective::operator()(const ParamVector& phi) {
  std::size_t mv = 0;
  const double value = evaluate(phi, &mv);
  matvecs_ += mv;
  ++evaluations_;
  return value;
}

double InexactObjective::evaluate(const ParamVector& phi, std::size_t* matvecs) const {
  const std::size_t nq = queries_.size();
  std::vector<double> terms(nq, 0.0);
  std::vector<std::size_t> counts(nq, 0);
  parallel_for(nq, max_threads_, [&](std::size_t q) {
    const auto& query = queries_[q];
    try {
      const StationaryApprox approx = stationary_at(query.graph, phi, walk_, n_terms_);
      terms[q] = query_loss(approx.pi, query.pairs);
      counts[q] = approx.matvecs;
    } catch (const DomainError& e) {
      throw OracleDomainError("query " + query.graph.query_id() + ": " + e.what());
    }
  });
  if (matvecs != nullptr) {
    *matvecs = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  }
  if (nq == 0) {
    return 0.0;
  }
  // Fixed ascending reduction order keeps results independent of threading.
  double total = 0.0;
  for (double t : terms) {
    total += t;
  }
  return total / static_cast<double>(nq);
}

std::vector<Vector> InexactObjective::distributions(const ParamVector& phi) const {
  std::vector<Vector> out(queries_.size());
  parallel_for(queries_.size(), max_threads_, [&](std::size_t q) {
    out[q] = stationary_at(queries_[q].graph, phi, walk_, n_terms_).pi;
  });
  return out;
}

double exact_loss(std::span<const QueryProblem> queries, const ParamVector& phi, WalkConfig walk) {
  std::vector<Vector> dists;
  dists.reserve(queries.size());
  for (const auto& q : queries) {
    dists.push_back(stationary_exact_at(q.graph, phi, walk));
  }
  return loss(dists, queries);
}

}  // namespace ranklearn
