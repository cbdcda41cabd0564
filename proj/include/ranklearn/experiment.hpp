#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ranklearn/gfo.hpp"
#include "ranklearn/io.hpp"

namespace ranklearn {

enum class Method { Gf2, Gf2Fast, Gf1, Pr };

std::string method_name(Method m);  // "gf2", "gf2-fast", "gf1", "pr"
Method parse_method(const std::string& name);

struct ExperimentConfig {
  double alpha = 0.15;
  double epsilon = 4e-4;
  double L = 1.6e-4;
  double R = 1.0;
  double tau = 0.0;
  bool regularize = false;
  /// Default pair margin for datasets without a margins file.
  double margin = 1e-4;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::Gf2, Method::Gf1, Method::Pr};
  bool l_restarts = false;
  std::size_t max_threads = 1;
  std::size_t gf1_iterations = 10;
  double gf1_step = 10.0;
  /// Series length for reported losses, NDCG and the PR baseline.
  std::size_t eval_terms = 117;
  double train_fraction = 0.8;

  void validate() const;
};

/// `key = value` pairs; unknown keys and method names are a ConfigError.
ExperimentConfig experiment_config_from(const std::map<std::string, std::string>& kv);

/// Canonical `key = value` text, readable by experiment_config_from.
std::string config_text(const ExperimentConfig& config);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Orders query ids by a seeded hash and puts the first round(fraction * n)
/// into the training part. Independent of input order.
Split split_queries(const std::vector<std::string>& query_ids, double train_fraction,
                    std::uint64_t seed);

struct MethodResult {
  Method method = Method::Pr;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double ndcg3 = 0.0;
  double ndcg5 = 0.0;
  std::size_t degenerate_queries = 0;
  std::size_t iterations = 0;
  std::size_t n_terms = 0;
  std::size_t oracle_calls = 0;
  std::size_t matvecs = 0;
  std::size_t runs = 0;
  bool has_model = false;
  ParamVector phi;
  std::vector<gfo::TraceRow> trace;
};

struct EvalReport {
  ExperimentConfig config;
  Split split;
  std::vector<MethodResult> results;
};

EvalReport run_experiment(const ExperimentConfig& config, const io::Dataset& data);

/// report.csv, report.md, config.txt, trace_<method>.csv and model_<method>.txt.
void write_report(const std::filesystem::path& dir, const EvalReport& report);

struct ModelEvaluation {
  double loss = 0.0;
  double ndcg3 = 0.0;
  double ndcg5 = 0.0;
  std::size_t queries = 0;
  std::size_t degenerate_queries = 0;
};

/// Loss and NDCG of a fixed parameter over every query of the dataset.
ModelEvaluation evaluate_model(const ParamVector& phi, const io::Dataset& data, double alpha,
                               std::size_t n_terms);

struct RunSummaryRow {
  std::string method;
  std::size_t runs = 0;
  double median_test_loss = 0.0;
  double median_ndcg3 = 0.0;
  double median_ndcg5 = 0.0;
};

/// Medians per method over every report.csv found directly in `dir` or one
/// level below it; writes summary.csv and summary.md into `dir`.
std::vector<RunSummaryRow> summarize_runs(const std::filesystem::path& dir);

}  // namespace ranklearn
