#include "ranklearn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ranklearn/baselines.hpp"
#include "ranklearn/errors.hpp"
#include "ranklearn/metrics.hpp"
#include "ranklearn/pipeline.hpp"
#include "ranklearn/stationary.hpp"

namespace ranklearn {

namespace fs = std::filesystem;
using io::format_double;

std::string method_name(Method m) {
  switch (m) {
    case Method::Gf2: return "gf2";
    case Method::Gf2Fast: return "gf2-fast";
    case Method::Gf1: return "gf1";
    case Method::Pr: return "pr";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "gf2") return Method::Gf2;
  if (name == "gf2-fast") return Method::Gf2Fast;
  if (name == "gf1") return Method::Gf1;
  if (name == "pr") return Method::Pr;
  throw ConfigError("unknown method '" + name + "' (expected gf2, gf2-fast, gf1 or pr)");
}

void ExperimentConfig::validate() const {
  (void)WalkConfig{alpha};
  if (!(epsilon > 0.0 && L > 0.0 && R > 0.0)) throw ConfigError("epsilon, L and R must be positive");
  if (!(tau >= 0.0)) throw ConfigError("tau must be non-negative");
  if (!(margin > 0.0)) throw ConfigError("margin must be positive");
  if (methods.empty()) throw ConfigError("no methods selected");
  if (max_threads == 0) throw ConfigError("max_threads must be at least 1");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1]");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_switch(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError(key + " must be on or off");
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  const long long v = io::parse_int(value);
  if (v < 0) throw ConfigError(key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig experiment_config_from(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "alpha") c.alpha = io::parse_double(value);
    else if (key == "epsilon") c.epsilon = io::parse_double(value);
    else if (key == "L") c.L = io::parse_double(value);
    else if (key == "R") c.R = io::parse_double(value);
    else if (key == "tau") c.tau = io::parse_double(value);
    else if (key == "regularize") c.regularize = parse_switch(key, value);
    else if (key == "margin") c.margin = io::parse_double(value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(io::parse_int(value));
    else if (key == "method" || key == "methods") {
      c.methods.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const Method m = parse_method(trim(item));
        if (std::find(c.methods.begin(), c.methods.end(), m) == c.methods.end()) {
          c.methods.push_back(m);
        }
      }
    } else if (key == "l_restarts") c.l_restarts = parse_switch(key, value);
    else if (key == "max_threads") c.max_threads = parse_count(key, value);
    else if (key == "gf1_iterations") c.gf1_iterations = parse_count(key, value);
    else if (key == "gf1_step") c.gf1_step = io::parse_double(value);
    else if (key == "eval_terms") c.eval_terms = parse_count(key, value);
    else if (key == "train_fraction") c.train_fraction = io::parse_double(value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

std::string config_text(const ExperimentConfig& c) {
  std::string methods;
  for (const auto m : c.methods) {
    methods += (methods.empty() ? "" : ",") + method_name(m);
  }
  std::ostringstream out;
  out << "alpha = " << format_double(c.alpha) << '\n'
      << "epsilon = " << format_double(c.epsilon) << '\n'
      << "L = " << format_double(c.L) << '\n'
      << "R = " << format_double(c.R) << '\n'
      << "tau = " << format_double(c.tau) << '\n'
      << "regularize = " << (c.regularize ? "on" : "off") << '\n'
      << "margin = " << format_double(c.margin) << '\n'
      << "seed = " << c.seed << '\n'
      << "method = " << methods << '\n'
      << "l_restarts = " << (c.l_restarts ? "on" : "off") << '\n'
      << "max_threads = " << c.max_threads << '\n'
      << "gf1_iterations = " << c.gf1_iterations << '\n'
      << "gf1_step = " << format_double(c.gf1_step) << '\n'
      << "eval_terms = " << c.eval_terms << '\n'
      << "train_fraction = " << format_double(c.train_fraction) << '\n';
  return out.str();
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Split split_queries(const std::vector<std::string>& query_ids, double train_fraction,
                    std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::string>> keyed;
  keyed.reserve(query_ids.size());
  for (const auto& id : query_ids) {
    keyed.emplace_back(splitmix(fnv1a(id) ^ splitmix(seed)), id);
  }
  std::sort(keyed.begin(), keyed.end());
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(keyed.size())));
  Split s;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    (i < n_train ? s.train : s.test).push_back(keyed[i].second);
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

namespace {

std::vector<QueryProblem> select(const std::vector<QueryProblem>& all,
                                 const std::vector<std::string>& ids) {
  std::vector<QueryProblem> out;
  for (const auto& q : all) {
    if (std::binary_search(ids.begin(), ids.end(), q.graph.query_id())) {
      out.push_back(q);
    }
  }
  return out;
}

std::vector<Vector> series_dists(const std::vector<QueryProblem>& queries, const ParamVector& phi,
                                 double alpha, std::size_t n_terms) {
  std::vector<Vector> out;
  out.reserve(queries.size());
  for (const auto& q : queries) {
    out.push_back(stationary_at(q.graph, phi, WalkConfig{alpha}, n_terms).pi);
  }
  return out;
}

void score(MethodResult& r, const std::vector<Vector>& train_dists,
           const std::vector<Vector>& test_dists, const std::vector<QueryProblem>& train,
           const std::vector<QueryProblem>& test, const JudgmentSet& judgments) {
  r.train_loss = loss(train_dists, train);
  r.test_loss = loss(test_dists, test);
  const auto n3 = mean_ndcg(3, test_dists, test, judgments);
  const auto n5 = mean_ndcg(5, test_dists, test, judgments);
  r.ndcg3 = n3.mean;
  r.ndcg5 = n5.mean;
  r.degenerate_queries = n3.degenerate;
}

ParamVector initial_point(const io::Dataset& data) {
  if (data.phi0) return *data.phi0;
  if (data.graphs.empty()) throw ConfigError("dataset has no graphs");
  const auto& g = data.graphs.front();
  return ParamVector{Vector::Ones(static_cast<Eigen::Index>(g.m1())),
                     Vector::Ones(static_cast<Eigen::Index>(g.m2()))};
}

}  // namespace

EvalReport run_experiment(const ExperimentConfig& config, const io::Dataset& data) {
  config.validate();
  EvalReport report;
  report.config = config;

  const auto all = bind_judgments(data.graphs, data.judgments);
  std::vector<std::string> ids;
  for (const auto& q : all) ids.push_back(q.graph.query_id());
  report.split = split_queries(ids, config.train_fraction, config.seed);
  const auto train = select(all, report.split.train);
  const auto test = select(all, report.split.test);

  LearningProblem problem;
  problem.queries = train;
  problem.alpha = config.alpha;
  problem.phi0 = initial_point(data);
  problem.L = config.L;
  problem.R = config.R;
  problem.epsilon = config.epsilon;
  problem.tau = config.tau;
  problem.regularize = config.regularize;
  problem.max_threads = config.max_threads;

  for (const Method m : config.methods) {
    MethodResult r;
    r.method = m;
    if (m == Method::Pr) {
      r.n_terms = config.eval_terms;
      score(r, run_pr_baseline(train, config.alpha, config.eval_terms),
            run_pr_baseline(test, config.alpha, config.eval_terms), train, test, data.judgments);
      report.results.push_back(std::move(r));
      continue;
    }
    gfo::Rng rng(config.seed);
    LearnReport lr;
    if (m == Method::Gf2) {
      lr = config.l_restarts ? learn_with_L_restarts(problem, config.L, rng) : learn(problem, rng);
    } else if (m == Method::Gf2Fast) {
      lr = learn_fast(problem, rng);
    } else {
      lr = run_gf1_baseline(problem, config.gf1_iterations, config.gf1_step, config.eval_terms, rng);
    }
    r.iterations = lr.iterations;
    r.n_terms = lr.n_terms;
    r.oracle_calls = lr.oracle_calls;
    r.matvecs = lr.matvecs;
    r.runs = lr.runs;
    r.has_model = true;
    r.phi = lr.best_phi;
    r.trace = std::move(lr.trace);
    score(r, series_dists(train, r.phi, config.alpha, config.eval_terms),
          series_dists(test, r.phi, config.alpha, config.eval_terms), train, test, data.judgments);
    report.results.push_back(std::move(r));
  }
  return report;
}

namespace {

std::string display_name(Method m) {
  switch (m) {
    case Method::Gf2: return "GF2";
    case Method::Gf2Fast: return "GF2-fast";
    case Method::Gf1: return "GF1";
    case Method::Pr: return "PR";
  }
  return "?";
}

std::string published_loss(const std::string& method) {
  if (method == "gf2") return "0.00107";
  if (method == "gf1") return "0.001305";
  if (method == "pr") return "0.0118";
  return "-";
}

}  // namespace

void write_report(const fs::path& dir, const EvalReport& report) {
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "method,train_loss,test_loss,ndcg3,ndcg5,iterations,n_terms,oracle_calls,matvecs,runs\n";
  for (const auto& r : report.results) {
    csv << method_name(r.method) << ',' << format_double(r.train_loss) << ','
        << format_double(r.test_loss) << ',' << format_double(r.ndcg3) << ','
        << format_double(r.ndcg5) << ',' << r.iterations << ',' << r.n_terms << ','
        << r.oracle_calls << ',' << r.matvecs << ',' << r.runs << '\n';
  }
  io::write_text(dir / "report.csv", csv.str());

  std::ostringstream md;
  md << "# Ranking experiment\n\n"
     << "Train queries: " << report.split.train.size()
     << ", test queries: " << report.split.test.size() << "\n\n"
     << "| method | train loss | test loss | NDCG@3 | NDCG@5 | matvecs | published loss (not reproduced) |\n"
     << "|---|---|---|---|---|---|---|\n";
  std::size_t degenerate = 0;
  for (const auto& r : report.results) {
    md << "| " << display_name(r.method) << " | " << format_double(r.train_loss) << " | "
       << format_double(r.test_loss) << " | " << format_double(r.ndcg3) << " | "
       << format_double(r.ndcg5) << " | " << r.matvecs << " | "
       << published_loss(method_name(r.method)) << " |\n";
    degenerate = std::max(degenerate, r.degenerate_queries);
  }
  md << "\nPublished losses come from a proprietary web-search dataset and are shown for "
        "orientation only.\n";
  if (degenerate > 0) {
    md << "\n" << degenerate << " test queries have no judged documents; their NDCG is taken as 1.\n";
  }
  io::write_text(dir / "report.md", md.str());
  io::write_text(dir / "config.txt", config_text(report.config));

  std::ostringstream split;
  for (const auto& id : report.split.train) split << "train " << id << '\n';
  for (const auto& id : report.split.test) split << "test " << id << '\n';
  io::write_text(dir / "split.txt", split.str());

  for (const auto& r : report.results) {
    if (!r.has_model) continue;
    const std::string name = method_name(r.method);
    std::ostringstream trace;
    trace << "iter,f_delta_x,f_delta_x_plus,step_norm,dist_to_x0\n";
    for (const auto& t : r.trace) {
      trace << t.iter << ',' << format_double(t.f_delta_x) << ','
            << format_double(t.f_delta_x_plus) << ',' << format_double(t.step_norm) << ','
            << format_double(t.dist_to_x0) << '\n';
    }
    io::write_text(dir / ("trace_" + name + ".csv"), trace.str());
    std::ostringstream model;
    io::write_params(model, r.phi);
    io::write_text(dir / ("model_" + name + ".txt"), model.str());
  }
}

ModelEvaluation evaluate_model(const ParamVector& phi, const io::Dataset& data, double alpha,
                               std::size_t n_terms) {
  const auto all = bind_judgments(data.graphs, data.judgments);
  const auto dists = series_dists(all, phi, alpha, n_terms);
  ModelEvaluation e;
  e.loss = loss(dists, all);
  const auto n3 = mean_ndcg(3, dists, all, data.judgments);
  e.ndcg3 = n3.mean;
  e.ndcg5 = mean_ndcg(5, dists, all, data.judgments).mean;
  e.queries = all.size();
  e.degenerate_queries = n3.degenerate;
  return e;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Samples {
  std::vector<double> test_loss, ndcg3, ndcg5;
};

void read_report_csv(const fs::path& path, std::map<std::string, Samples>& into) {
  std::istringstream in(io::read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty report");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) throw ParseError(path.string() + ": short row '" + line + "'");
    auto& s = into[cells[0]];
    s.test_loss.push_back(io::parse_double(cells[2]));
    s.ndcg3.push_back(io::parse_double(cells[3]));
    s.ndcg5.push_back(io::parse_double(cells[4]));
  }
}

}  // namespace

std::vector<RunSummaryRow> summarize_runs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError(dir.string() + " is not a directory");
  std::set<fs::path> reports;
  if (fs::exists(dir / "report.csv")) reports.insert(dir / "report.csv");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "report.csv")) {
      reports.insert(entry.path() / "report.csv");
    }
  }
  if (reports.empty()) throw ConfigError("no report.csv under " + dir.string());

  std::map<std::string, Samples> samples;
  for (const auto& p : reports) read_report_csv(p, samples);

  std::vector<RunSummaryRow> rows;
  for (const char* name : {"gf2", "gf2-fast", "gf1", "pr"}) {
    const auto it = samples.find(name);
    if (it == samples.end()) continue;
    rows.push_back({name, it->second.test_loss.size(), median(it->second.test_loss),
                    median(it->second.ndcg3), median(it->second.ndcg5)});
  }

  std::ostringstream csv, md;
  csv << "method,runs,median_test_loss,median_ndcg3,median_ndcg5\n";
  md << "| method | runs | median test loss | median NDCG@3 | median NDCG@5 |\n"
     << "|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    csv << r.method << ',' << r.runs << ',' << format_double(r.median_test_loss) << ','
        << format_double(r.median_ndcg3) << ',' << format_double(r.median_ndcg5) << '\n';
    md << "| " << display_name(parse_method(r.method)) << " | " << r.runs << " | "
       << format_double(r.median_test_loss) << " | " << format_double(r.median_ndcg3) << " | "
       << format_double(r.median_ndcg5) << " |\n";
  }
  io::write_text(dir / "summary.csv", csv.str());
  io::write_text(dir / "summary.md", md.str());
  return rows;
}

}  // namespace ranklearn
