#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ranklearn/graph_model.hpp"
#include "ranklearn/objective.hpp"

namespace ranklearn::io {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Locale-independent decimal/scientific parse; throws ParseError.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

/// Graph text format:
///   p m1 m2
///   node <id> <seed:0|1> <m1 floats>      (p lines, each id once)
///   edge <src> <dst> <m2 floats>
/// Blank lines and lines starting with '#' are ignored.
QueryGraph read_graph(std::istream& in, const std::string& query_id);
void write_graph(std::ostream& out, const QueryGraph& g);

/// Lines `judgment <query_id> <node_id> <label>`. The label count k is the
/// largest label present unless `num_labels` is given.
JudgmentSet read_judgments(std::istream& in, MarginTable margins,
                           std::optional<int> num_labels = std::nullopt);
void write_judgments(std::ostream& out, const JudgmentSet& judgments);

/// Lines `margin <j1> <j2> <b>`; unlisted pairs fall back to default_margin.
MarginTable read_margins(std::istream& in, double default_margin);

/// `key = value` lines; '#' starts a comment. Later keys overwrite earlier ones.
std::map<std::string, std::string> read_key_values(std::istream& in);

/// Parameter file: lines `m1 <n>`, `m2 <n>`, `phi1 <values>`, `phi2 <values>`.
ParamVector read_params(std::istream& in);
void write_params(std::ostream& out, const ParamVector& phi);

/// On-disk dataset:
///   <dir>/graphs/<query_id>.graph
///   <dir>/judgments.txt
///   <dir>/margins.txt   (optional)
///   <dir>/phi0.txt      (optional initial point)
struct Dataset {
  std::vector<QueryGraph> graphs;
  JudgmentSet judgments;
  std::optional<ParamVector> phi0;
};

Dataset load_dataset(const std::filesystem::path& dir, double default_margin);
void save_dataset(const std::filesystem::path& dir, const Dataset& data);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ranklearn::io
