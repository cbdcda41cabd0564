#include "ranklearn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ranklearn/errors.hpp"
#include "ranklearn/gfo.hpp"
#include "ranklearn/stationary.hpp"

namespace ranklearn {

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& why) { throw SpecInfeasible("synthetic spec: " + why); };
  if (n_queries == 0 || vertices == 0) fail("need at least one query and one vertex");
  if (m1 == 0 || m2 == 0) fail("feature dimensions must be positive");
  if (concat_edge_features && m2 != 2 * m1) fail("concatenated edge features need m2 = 2 m1");
  if (!(mean_out_degree >= 0.0)) fail("mean out-degree must be non-negative");
  if (std::lround(2.0 * mean_out_degree) > static_cast<long>(vertices) - 1) {
    fail("out-degree range exceeds p - 1");
  }
  if (!(seed_fraction > 0.0 && seed_fraction <= 1.0)) fail("seed fraction must lie in (0, 1]");
  if (labels < 1) fail("need at least one label");
  if (judged_per_query > vertices) fail("more judged documents than vertices");
  if (!(label_noise >= 0.0 && label_noise <= 1.0)) fail("label noise must lie in [0, 1]");
  if (!(margin > 0.0)) fail("margin must be positive");
  if (!(feature_spread >= 0.0)) fail("feature spread must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (!(phi0_distance >= 0.0)) fail("phi0 distance must be non-negative");
  if (!(phi_low > 0.0 && phi_high >= phi_low)) fail("planted range needs 0 < phi_low <= phi_high");
}

SyntheticSpec synthetic_spec_from(const std::map<std::string, std::string>& kv) {
  SyntheticSpec s;
  for (const auto& [key, value] : kv) {
    auto as_size = [&] {
      const long long v = io::parse_int(value);
      if (v < 0) throw ConfigError("synthetic spec: " + key + " must be non-negative");
      return static_cast<std::size_t>(v);
    };
    if (key == "n_queries") s.n_queries = as_size();
    else if (key == "p" || key == "vertices") s.vertices = as_size();
    else if (key == "mean_out_degree" || key == "density") s.mean_out_degree = io::parse_double(value);
    else if (key == "seed_fraction") s.seed_fraction = io::parse_double(value);
    else if (key == "m1") s.m1 = as_size();
    else if (key == "m2") s.m2 = as_size();
    else if (key == "edge_features") {
      if (value != "concat" && value != "independent") {
        throw ConfigError("synthetic spec: edge_features must be concat or independent");
      }
      s.concat_edge_features = value == "concat";
    } else if (key == "feature_spread") s.feature_spread = io::parse_double(value);
    else if (key == "labels" || key == "k") s.labels = static_cast<int>(io::parse_int(value));
    else if (key == "judged_per_query") s.judged_per_query = as_size();
    else if (key == "label_noise" || key == "noise") s.label_noise = io::parse_double(value);
    else if (key == "margin") s.margin = io::parse_double(value);
    else if (key == "alpha") s.alpha = io::parse_double(value);
    else if (key == "phi0_distance") s.phi0_distance = io::parse_double(value);
    else if (key == "phi_low") s.phi_low = io::parse_double(value);
    else if (key == "phi_high") s.phi_high = io::parse_double(value);
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(io::parse_int(value));
    else throw ConfigError("synthetic spec: unknown key '" + key + "'");
  }
  return s;
}

namespace {

using Rng = std::mt19937_64;

std::string query_name(std::size_t q) {
  std::string digits = std::to_string(q);
  return "q" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

Vector exact_scores(const QueryGraph& g, const ParamVector& phi, WalkConfig walk) {
  if (g.num_vertices() <= kDenseSolveLimit) {
    return stationary_exact_at(g, phi, walk);
  }
  return stationary_at(g, phi, walk, terms_for_accuracy(walk.alpha(), 1e-13)).pi;
}

QueryGraph make_graph(const SyntheticSpec& spec, std::size_t q, Rng& rng) {
  const std::size_t p = spec.vertices;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution is_seed(spec.seed_fraction);
  const auto max_degree = static_cast<std::size_t>(std::lround(2.0 * spec.mean_out_degree));
  std::uniform_int_distribution<std::size_t> degree(0, max_degree);

  RowMatrix nodes(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(spec.m1));
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    for (Eigen::Index j = 0; j < nodes.cols(); ++j) {
      nodes(i, j) = std::exp(spec.feature_spread * normal(rng));
    }
  }
  std::vector<std::uint8_t> seeds(p);
  for (auto& s : seeds) {
    s = is_seed(rng) ? 1 : 0;
  }
  if (std::none_of(seeds.begin(), seeds.end(), [](auto s) { return s != 0; })) {
    seeds[std::uniform_int_distribution<std::size_t>(0, p - 1)(rng)] = 1;
  }

  std::vector<EdgeInput> edges;
  std::vector<std::size_t> others(p > 0 ? p - 1 : 0);
  for (std::size_t v = 0; v < p; ++v) {
    std::iota(others.begin(), others.end(), std::size_t{0});
    for (auto& o : others) {
      if (o >= v) ++o;
    }
    const std::size_t d = std::min(degree(rng), others.size());
    // Partial Fisher-Yates for d distinct targets.
    for (std::size_t k = 0; k < d; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, others.size() - 1);
      std::swap(others[k], others[pick(rng)]);
      EdgeInput e{v, others[k], {}};
      if (spec.concat_edge_features) {
        for (std::size_t j = 0; j < spec.m1; ++j) e.features.push_back(nodes(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)));
        for (std::size_t j = 0; j < spec.m1; ++j) e.features.push_back(nodes(static_cast<Eigen::Index>(others[k]), static_cast<Eigen::Index>(j)));
      } else {
        for (std::size_t j = 0; j < spec.m2; ++j) e.features.push_back(std::exp(spec.feature_spread * normal(rng)));
      }
      edges.push_back(std::move(e));
    }
  }
  return QueryGraph(query_name(q), spec.m1, spec.m2, std::move(nodes), std::move(seeds), std::move(edges));
}

bool in_domain(const std::vector<QueryGraph>& graphs, const ParamVector& phi) {
  try {
    for (const auto& g : graphs) {
      (void)restart_distribution(g, phi.phi1);
      (void)transition_matrix(g, phi.phi2);
    }
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const WalkConfig walk(spec.alpha);

  std::uniform_real_distribution<double> coef(spec.phi_low, spec.phi_high);
  ParamVector phi_star{Vector(static_cast<Eigen::Index>(spec.m1)), Vector(static_cast<Eigen::Index>(spec.m2))};
  for (Eigen::Index i = 0; i < phi_star.phi1.size(); ++i) phi_star.phi1[i] = coef(rng);
  for (Eigen::Index i = 0; i < phi_star.phi2.size(); ++i) phi_star.phi2[i] = coef(rng);

  std::vector<QueryGraph> graphs;
  graphs.reserve(spec.n_queries);
  for (std::size_t q = 0; q < spec.n_queries; ++q) {
    graphs.push_back(make_graph(spec, q, rng));
  }

  // Every group pair is listed explicitly so the saved dataset carries its margins.
  MarginTable margins(spec.margin);
  for (int j1 = 2; j1 <= spec.labels; ++j1) {
    for (int j2 = 1; j2 < j1; ++j2) {
      margins.set(j1, j2, spec.margin);
    }
  }
  JudgmentSet judgments(spec.labels, std::move(margins));
  std::bernoulli_distribution flip(spec.label_noise);
  std::uniform_int_distribution<int> any_label(1, spec.labels);
  for (const auto& g : graphs) {
    const Vector scores = exact_scores(g, phi_star, walk);
    std::vector<std::size_t> docs(g.num_vertices());
    std::iota(docs.begin(), docs.end(), std::size_t{0});
    std::shuffle(docs.begin(), docs.end(), rng);
    docs.resize(spec.judged_per_query);
    std::sort(docs.begin(), docs.end(), [&](std::size_t a, std::size_t b) {
      const double sa = scores[static_cast<Eigen::Index>(a)];
      const double sb = scores[static_cast<Eigen::Index>(b)];
      return sa != sb ? sa > sb : a < b;
    });
    const std::size_t n = docs.size();
    for (std::size_t rank = 0; rank < n; ++rank) {
      int label = spec.labels - static_cast<int>(rank * static_cast<std::size_t>(spec.labels) / n);
      if (flip(rng)) {
        label = any_label(rng);
      }
      judgments.add(g.query_id(), docs[rank], label);
    }
  }

  // Initial point at a fixed distance from the planted one, kept inside the domain.
  gfo::Rng dir_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const Vector star = phi_star.concat();
  ParamVector phi0 = phi_star;
  bool placed = spec.phi0_distance == 0.0;
  for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
    const Vector x = star + spec.phi0_distance * gfo::sample_sphere(static_cast<std::size_t>(star.size()), dir_rng);
    phi0 = ParamVector::from_concat(x, spec.m1);
    placed = in_domain(graphs, phi0);
  }
  if (!placed) {
    throw SpecInfeasible("synthetic spec: no initial point in the model domain at the requested distance");
  }

  SyntheticData out{io::Dataset{std::move(graphs), std::move(judgments), phi0}, phi_star};
  return out;
}

}  // namespace ranklearn
