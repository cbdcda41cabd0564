#include "ranklearn/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "ranklearn/errors.hpp"

namespace ranklearn::io {

namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back(line.substr(start, i - start));
    }
  }
  return out;
}

bool skip_line(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().starts_with('#');
}

std::string where(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no) + ": ";
}

std::size_t parse_index(std::string_view text) {
  const long long v = parse_int(text);
  if (v < 0) {
    throw ParseError("negative index '" + std::string(text) + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    throw Error("failed to format number");
  }
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("invalid number '" + std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("invalid integer '" + std::string(text) + "'");
  }
  return v;
}

QueryGraph read_graph(std::istream& in, const std::string& query_id) {
  const std::string src = "graph " + query_id;
  std::string line;
  std::size_t line_no = 0;
  std::size_t p = 0, m1 = 0, m2 = 0;
  bool have_header = false;
  RowMatrix node_features;
  std::vector<std::uint8_t> seeds;
  std::vector<bool> seen;
  std::vector<EdgeInput> edges;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (skip_line(tok)) {
      continue;
    }
    try {
      if (!have_header) {
        if (tok.size() != 3) {
          throw ParseError("header must be 'p m1 m2'");
        }
        p = parse_index(tok[0]);
        m1 = parse_index(tok[1]);
        m2 = parse_index(tok[2]);
        node_features.setZero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m1));
        seeds.assign(p, 0);
        seen.assign(p, false);
        have_header = true;
      } else if (tok[0] == "node") {
        if (tok.size() != 3 + m1) {
          throw ParseError("node line needs id, seed flag and " + std::to_string(m1) + " features");
        }
        const std::size_t id = parse_index(tok[1]);
        if (id >= p) {
          throw ParseError("node id " + std::to_string(id) + " out of range");
        }
        if (seen[id]) {
          throw ParseError("node id " + std::to_string(id) + " listed twice");
        }
        seen[id] = true;
        const long long seed = parse_int(tok[2]);
        if (seed != 0 && seed != 1) {
          throw ParseError("seed flag must be 0 or 1");
        }
        seeds[id] = static_cast<std::uint8_t>(seed);
        for (std::size_t j = 0; j < m1; ++j) {
          node_features(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(j)) =
              parse_double(tok[3 + j]);
        }
      } else if (tok[0] == "edge") {
        if (tok.size() != 3 + m2) {
          throw ParseError("edge line needs src, dst and " + std::to_string(m2) + " features");
        }
        EdgeInput e{parse_index(tok[1]), parse_index(tok[2]), {}};
        e.features.reserve(m2);
        for (std::size_t j = 0; j < m2; ++j) {
          e.features.push_back(parse_double(tok[3 + j]));
        }
        edges.push_back(std::move(e));
      } else {
        throw ParseError("unknown record '" + std::string(tok[0]) + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(where(src, line_no) + e.what());
    }
  }
  if (!have_header) {
    throw ParseError(src + ": missing header");
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParseError(src + ": every node id 0..p-1 needs a node line");
  }
  return QueryGraph(query_id, m1, m2, std::move(node_features), std::move(seeds), std::move(edges));
}

void write_graph(std::ostream& out, const QueryGraph& g) {
  out << g.num_vertices() << ' ' << g.m1() << ' ' << g.m2() << '\n';
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    out << "node " << v << ' ' << (g.is_seed(v) ? 1 : 0);
    for (std::size_t j = 0; j < g.m1(); ++j) {
      out << ' ' << format_double(g.node_features()(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    for (std::size_t e = g.edge_begin(v); e < g.edge_end(v); ++e) {
      out << "edge " << v << ' ' << g.targets()[e];
      for (std::size_t j = 0; j < g.m2(); ++j) {
        out << ' ' << format_double(g.edge_features()(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(j)));
      }
      out << '\n';
    }
  }
}

JudgmentSet read_judgments(std::istream& in, MarginTable margins, std::optional<int> num_labels) {
  struct Row {
    std::string query;
    std::size_t doc;
    int label;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  int max_label = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (skip_line(tok)) {
      continue;
    }
    try {
      if (tok.size() != 4 || tok[0] != "judgment") {
        throw ParseError("expected 'judgment <query_id> <node_id> <label>'");
      }
      const long long label = parse_int(tok[3]);
      if (label < 1) {
        throw ParseError("labels start at 1");
      }
      rows.push_back({std::string(tok[1]), parse_index(tok[2]), static_cast<int>(label)});
      max_label = std::max(max_label, static_cast<int>(label));
    } catch (const ParseError& e) {
      throw ParseError(where("judgments", line_no) + e.what());
    }
  }
  JudgmentSet set(num_labels.value_or(max_label), std::move(margins));
  for (const auto& r : rows) {
    set.add(r.query, r.doc, r.label);
  }
  return set;
}

void write_judgments(std::ostream& out, const JudgmentSet& judgments) {
  for (const auto& [query, docs] : judgments.queries()) {
    for (const auto& d : docs) {
      out << "judgment " << query << ' ' << d.doc << ' ' << d.label << '\n';
    }
  }
}

MarginTable read_margins(std::istream& in, double default_margin) {
  MarginTable table(default_margin);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (skip_line(tok)) {
      continue;
    }
    try {
      if (tok.size() != 4 || tok[0] != "margin") {
        throw ParseError("expected 'margin <j1> <j2> <b>'");
      }
      table.set(static_cast<int>(parse_int(tok[1])), static_cast<int>(parse_int(tok[2])),
                parse_double(tok[3]));
    } catch (const ConfigError& e) {
      throw ParseError(where("margins", line_no) + e.what());
    }
  }
  return table;
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
      return std::string_view{};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(where("config", line_no) + "expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) {
      throw ParseError(where("config", line_no) + "empty key");
    }
    kv[std::string(key)] = std::string(trim(view.substr(eq + 1)));
  }
  return kv;
}

ParamVector read_params(std::istream& in) {
  std::optional<std::size_t> m1, m2;
  std::vector<double> phi1, phi2;
  bool have1 = false, have2 = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = split_ws(line);
    if (skip_line(tok)) {
      continue;
    }
    if (tok[0] == "m1" && tok.size() == 2) {
      m1 = parse_index(tok[1]);
    } else if (tok[0] == "m2" && tok.size() == 2) {
      m2 = parse_index(tok[1]);
    } else if (tok[0] == "phi1" || tok[0] == "phi2") {
      auto& dst = tok[0] == "phi1" ? phi1 : phi2;
      (tok[0] == "phi1" ? have1 : have2) = true;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        dst.push_back(parse_double(tok[i]));
      }
    } else {
      throw ParseError("parameter file: unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!m1 || !m2 || !have1 || !have2 || phi1.size() != *m1 || phi2.size() != *m2) {
    throw ParseError("parameter file must give m1, m2 and matching phi1/phi2 rows");
  }
  ParamVector phi;
  phi.phi1 = Eigen::Map<const Vector>(phi1.data(), static_cast<Eigen::Index>(phi1.size()));
  phi.phi2 = Eigen::Map<const Vector>(phi2.data(), static_cast<Eigen::Index>(phi2.size()));
  return phi;
}

void write_params(std::ostream& out, const ParamVector& phi) {
  out << "m1 " << phi.m1() << "\nm2 " << phi.m2() << "\nphi1";
  for (Eigen::Index i = 0; i < phi.phi1.size(); ++i) {
    out << ' ' << format_double(phi.phi1[i]);
  }
  out << "\nphi2";
  for (Eigen::Index i = 0; i < phi.phi2.size(); ++i) {
    out << ' ' << format_double(phi.phi2[i]);
  }
  out << '\n';
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  out << text;
}

Dataset load_dataset(const fs::path& dir, double default_margin) {
  const fs::path graph_dir = dir / "graphs";
  if (!fs::is_directory(graph_dir)) {
    throw ConfigError("dataset " + dir.string() + " has no graphs/ directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(graph_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".graph") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<QueryGraph> graphs;
  graphs.reserve(files.size());
  for (const auto& f : files) {
    std::istringstream in(read_text(f));
    graphs.push_back(read_graph(in, f.stem().string()));
  }

  MarginTable margins(default_margin);
  if (fs::exists(dir / "margins.txt")) {
    std::istringstream in(read_text(dir / "margins.txt"));
    margins = read_margins(in, default_margin);
  }
  std::istringstream jin(read_text(dir / "judgments.txt"));
  Dataset data{std::move(graphs), read_judgments(jin, std::move(margins)), std::nullopt};
  if (fs::exists(dir / "phi0.txt")) {
    std::istringstream in(read_text(dir / "phi0.txt"));
    data.phi0 = read_params(in);
  }
  return data;
}

void save_dataset(const fs::path& dir, const Dataset& data) {
  fs::create_directories(dir / "graphs");
  for (const auto& g : data.graphs) {
    std::ostringstream out;
    write_graph(out, g);
    write_text(dir / "graphs" / (g.query_id() + ".graph"), out.str());
  }
  std::ostringstream jout;
  write_judgments(jout, data.judgments);
  write_text(dir / "judgments.txt", jout.str());
  if (!data.judgments.margins().overrides().empty()) {
    std::ostringstream mout;
    for (const auto& [key, b] : data.judgments.margins().overrides()) {
      mout << "margin " << key.first << ' ' << key.second << ' ' << format_double(b) << '\n';
    }
    write_text(dir / "margins.txt", mout.str());
  }
  if (data.phi0) {
    std::ostringstream pout;
    write_params(pout, *data.phi0);
    write_text(dir / "phi0.txt", pout.str());
  }
}

}  // namespace ranklearn::io
