#include "vnom_cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace vnom::cli {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

// Tokens of one line with any '#' comment removed.
std::vector<std::string> tokens_of(const std::string& line) {
  const std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

template <typename Line>
void for_each_line(const std::string& path, Line&& fn) {
  std::ifstream in = open_input(path);
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto toks = tokens_of(line);
    if (!toks.empty()) fn(no, toks);
  }
}

long long parse_id(const std::string& path, std::size_t line, const std::string& tok) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v < 0)
    throw ParseError(path, line, "'" + tok + "' is not a non-negative vertex id");
  return v;
}

double parse_real(const std::string& path, std::size_t line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(path, line, "'" + tok + "' is not a finite number");
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}

RawEdgeList read_edge_list(const std::string& path, bool weighted) {
  RawEdgeList out;
  for_each_line(path, [&](std::size_t no, const std::vector<std::string>& t) {
    if (t.size() < 2 || t.size() > 3) throw ParseError(path, no, "expected 'u v' or 'u v w'");
    if (t.size() == 3 && !weighted) throw ParseError(path, no, "weight column in an unweighted edge list");
    const long long a = parse_id(path, no, t[0]);
    const long long b = parse_id(path, no, t[1]);
    const double w = t.size() == 3 ? parse_real(path, no, t[2]) : 1.0;
    out.ids.push_back(a);
    out.ids.push_back(b);
    if (a == b) {
      ++out.self_loops;
      return;
    }
    out.edges.emplace_back(a, b, w);
  });
  return out;
}

VertexIndex VertexIndex::build(std::vector<long long> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  VertexIndex out;
  if (ids.empty()) return out;
  const long long lo = ids.front();
  out.one_based_ = lo == 1;
  const long long shift = lo <= 1 ? lo : 0;
  const bool dense = ids.back() - shift + 1 == static_cast<long long>(ids.size());
  out.compacted_ = !dense;
  if (dense) {
    for (long long id = shift; id <= ids.back(); ++id) out.ids_.push_back(id);
  } else {
    out.ids_ = ids;
  }
  for (std::size_t v = 0; v < out.ids_.size(); ++v) out.index_.emplace(out.ids_[v], static_cast<Index>(v));
  return out;
}

std::optional<Index> VertexIndex::find(long long id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Graph build_graph(const RawEdgeList& raw, const VertexIndex& index, bool weighted, EdgeListStats* stats) {
  const Index n = index.size();
  Matrix adj = Matrix::Zero(n, n);
  std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
  EdgeListStats s;
  s.self_loops = raw.self_loops;
  for (const auto& [a, b, w] : raw.edges) {
    const auto i = index.find(a);
    const auto j = index.find(b);
    if (!i || !j) throw std::invalid_argument("edge endpoint missing from the vertex index");
    char& mark = seen[static_cast<std::size_t>(std::min(*i, *j) * n + std::max(*i, *j))];
    const double weight = weighted ? w : 1.0;
    if (mark) {
      ++s.duplicates;
      if (weight <= adj(*i, *j)) continue;
    }
    mark = 1;
    adj(*i, *j) = weight;
    adj(*j, *i) = weight;
  }
  if (stats) *stats = s;
  return Graph::from_adjacency(std::move(adj), weighted);
}

LoadedGraph load_edge_list(const std::string& path, bool weighted, std::ostream& warn,
                           const std::vector<long long>& extra_ids) {
  RawEdgeList raw = read_edge_list(path, weighted);
  std::vector<long long> ids = raw.ids;
  ids.insert(ids.end(), extra_ids.begin(), extra_ids.end());
  LoadedGraph out{Graph(), VertexIndex::build(std::move(ids)), {}};
  out.graph = build_graph(raw, out.index, weighted, &out.stats);
  if (out.stats.self_loops > 0) warn << "warning: " << path << ": dropped " << out.stats.self_loops << " self-loop(s)\n";
  if (out.stats.duplicates > 0)
    warn << "warning: " << path << ": collapsed " << out.stats.duplicates << " duplicate edge(s)\n";
  if (out.index.compacted()) warn << "warning: " << path << ": vertex ids are not contiguous, compacting\n";
  return out;
}

void write_edge_list(const Graph& graph, const std::string& path) {
  std::ofstream out = open_output(path);
  out.precision(17);
  out << "# " << graph.size() << " vertices\n";
  for (Index i = 0; i < graph.size(); ++i)
    for (Index j = i + 1; j < graph.size(); ++j) {
      if (graph(i, j) == 0.0) continue;
      out << i << ' ' << j;
      if (graph.weighted()) out << ' ' << graph(i, j);
      out << '\n';
    }
}

void write_vertex_mapping(const VertexIndex& index, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "# index original_id\n";
  for (Index v = 0; v < index.size(); ++v) out << v << ' ' << index.id_of(v) << '\n';
}

RawLabels read_labels(const std::string& path) {
  RawLabels out;
  for_each_line(path, [&](std::size_t no, const std::vector<std::string>& t) {
    if (t.size() != 2) throw ParseError(path, no, "expected 'vertex block'");
    out.entries.emplace_back(parse_id(path, no, t[0]), t[1]);
  });
  return out;
}

LoadedLabels assign_labels(const RawLabels& raw, const VertexIndex& index,
                           const std::optional<std::string>& interest_block) {
  std::vector<std::string> names;
  for (const auto& [id, name] : raw.entries)
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  if (interest_block) {
    const auto it = std::find(names.begin(), names.end(), *interest_block);
    if (it == names.end()) throw std::invalid_argument("interest block '" + *interest_block + "' has no vertices");
    std::rotate(names.begin(), it, it + 1);
  }
  std::map<std::string, int> block_of;
  for (std::size_t k = 0; k < names.size(); ++k) block_of[names[k]] = static_cast<int>(k);

  std::vector<int> labels(static_cast<std::size_t>(index.size()), -1);
  for (const auto& [id, name] : raw.entries) {
    const auto v = index.find(id);
    if (!v) throw std::invalid_argument("labelled vertex " + std::to_string(id) + " is not in the graph");
    int& slot = labels[static_cast<std::size_t>(*v)];
    if (slot >= 0) throw std::invalid_argument("vertex " + std::to_string(id) + " is labelled twice");
    slot = block_of[name];
  }
  for (Index v = 0; v < index.size(); ++v)
    if (labels[static_cast<std::size_t>(v)] < 0)
      throw std::invalid_argument("vertex " + std::to_string(index.id_of(v)) + " has no label");
  return {BlockAssignment(std::move(labels), static_cast<int>(names.size())), std::move(names)};
}

FeatureSet load_features(const std::string& path, const VertexIndex& index) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(index.size()));
  std::size_t dim = 0;
  for_each_line(path, [&](std::size_t no, const std::vector<std::string>& t) {
    if (t.size() < 2) throw ParseError(path, no, "expected 'vertex x1 ... xd'");
    if (dim == 0) dim = t.size() - 1;
    if (t.size() - 1 != dim) throw ParseError(path, no, "inconsistent feature dimension");
    const long long id = parse_id(path, no, t[0]);
    const auto v = index.find(id);
    if (!v) throw ParseError(path, no, "vertex " + std::to_string(id) + " is not in the graph");
    auto& row = rows[static_cast<std::size_t>(*v)];
    if (!row.empty()) throw ParseError(path, no, "vertex " + std::to_string(id) + " listed twice");
    for (std::size_t d = 1; d < t.size(); ++d) row.push_back(parse_real(path, no, t[d]));
  });
  FeatureSet out{Matrix(index.size(), static_cast<Index>(dim))};
  for (Index v = 0; v < index.size(); ++v) {
    const auto& row = rows[static_cast<std::size_t>(v)];
    if (row.empty()) throw std::invalid_argument("vertex " + std::to_string(index.id_of(v)) + " has no features");
    for (std::size_t d = 0; d < dim; ++d) out.x(v, static_cast<Index>(d)) = row[d];
  }
  return out;
}

void write_labels(const BlockAssignment& labels, const std::string& path) {
  std::ofstream out = open_output(path);
  for (Index v = 0; v < labels.size(); ++v) out << v << ' ' << labels[v] << '\n';
}

}  // namespace vnom::cli
