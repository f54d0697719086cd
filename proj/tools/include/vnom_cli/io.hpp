#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vnom/features.hpp"
#include "vnom/sbm.hpp"

namespace vnom::cli {

// Parse errors carry the 1-based line number in the message.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what);
};

struct RawEdgeList {
  std::vector<std::tuple<long long, long long, double>> edges;  // self-loops removed
  std::vector<long long> ids;                                   // every id seen, in file order
  Index self_loops = 0;
};

// "u v [w]" per line, '#' starts a comment. Weights are only accepted when
// weighted is set.
RawEdgeList read_edge_list(const std::string& path, bool weighted);

// Maps file ids to dense vertex indices. Ids are shifted by the smallest id
// when it is 0 or 1; if the shifted ids still leave gaps they are compacted in
// ascending order.
class VertexIndex {
 public:
  static VertexIndex build(std::vector<long long> ids);

  Index size() const { return static_cast<Index>(ids_.size()); }
  bool one_based() const { return one_based_; }
  bool compacted() const { return compacted_; }
  std::optional<Index> find(long long id) const;
  long long id_of(Index v) const { return ids_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<long long> ids_;
  std::unordered_map<long long, Index> index_;
  bool one_based_ = false;
  bool compacted_ = false;
};

struct EdgeListStats {
  Index self_loops = 0;
  Index duplicates = 0;
};

// Undirected graph; duplicate edges keep the largest weight.
Graph build_graph(const RawEdgeList& raw, const VertexIndex& index, bool weighted, EdgeListStats* stats = nullptr);

struct LoadedGraph {
  Graph graph;
  VertexIndex index;
  EdgeListStats stats;
};

// read_edge_list + VertexIndex + build_graph. Warnings (self-loops,
// duplicates, compaction) go to warn. extra_ids adds vertices that may have
// no edges.
LoadedGraph load_edge_list(const std::string& path, bool weighted, std::ostream& warn,
                           const std::vector<long long>& extra_ids = {});

void write_edge_list(const Graph& graph, const std::string& path);
void write_vertex_mapping(const VertexIndex& index, const std::string& path);

struct RawLabels {
  std::vector<std::pair<long long, std::string>> entries;
};

RawLabels read_labels(const std::string& path);

struct LoadedLabels {
  BlockAssignment assignment;
  std::vector<std::string> block_names;  // block k's name in the file
};

// Blocks are numbered by first appearance; interest_block, when given, names
// the block moved to index 0. Every vertex of index must be labelled exactly
// once and every labelled vertex must be in index.
LoadedLabels assign_labels(const RawLabels& raw, const VertexIndex& index,
                           const std::optional<std::string>& interest_block = std::nullopt);

// "v x1 ... xd" per line; every vertex exactly once.
FeatureSet load_features(const std::string& path, const VertexIndex& index);

void write_labels(const BlockAssignment& labels, const std::string& path);

}  // namespace vnom::cli
