// Copyright 2026 The exforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exforce {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint64_t;
// Original ids as they appear in input files.
using ExternalId = std::uint64_t;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raw edge set as read from disk. May hold duplicates, self-loops and both
// orientations of an edge.
struct EdgeList {
  std::vector<std::pair<ExternalId, ExternalId>> edges;
};

// Parses a whitespace separated edge list. Lines starting with '#' or '%'
// are comments; tokens past the second (weights, timestamps) are ignored.
EdgeList load_edge_list(std::istream& in);
EdgeList load_edge_list_file(const std::string& path);

// Immutable undirected simple graph in compressed adjacency form.
//
// Nodes are densely numbered 0..n-1 in ascending order of their original id.
// Every neighbor list is strictly increasing and there are no isolated
// nodes, self-loops or parallel edges.
class Graph {
 public:
  Graph() = default;

  NodeId num_nodes() const { return static_cast<NodeId>(original_ids_.size()); }
  EdgeIndex num_edges() const { return neighbors_.size() / 2; }

  std::uint32_t degree(NodeId v) const {
    check_node(v);
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    check_node(v);
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  // Membership test by binary search in the shorter of the two lists.
  bool has_edge(NodeId u, NodeId v) const;

  double avg_degree() const;
  std::uint32_t max_degree() const;

  ExternalId original_id(NodeId v) const {
    check_node(v);
    return original_ids_[v];
  }
  std::span<const ExternalId> original_ids() const { return original_ids_; }
  std::span<const EdgeIndex> offsets() const { return offsets_; }
  std::span<const NodeId> adjacency() const { return neighbors_; }

  // Unchecked accessors for hot loops. Callers guarantee v < num_nodes().
  std::uint32_t degree_unchecked(NodeId v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  std::span<const NodeId> neighbors_unchecked(NodeId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  friend Graph build_graph(const EdgeList& edges);

 private:
  void check_node(NodeId v) const {
    if (v >= num_nodes()) {
      throw std::domain_error("node id " + std::to_string(v) +
                              " out of range (n=" + std::to_string(num_nodes()) + ")");
    }
  }

  std::vector<EdgeIndex> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<ExternalId> original_ids_;
};

// Drops self-loops, symmetrizes and deduplicates, removes isolated nodes and
// densely relabels the survivors.
Graph build_graph(const EdgeList& edges);

// Number of (i, v, j) triplets with i < j both adjacent to v, i.e.
// sum over v of deg(v) choose 2.
std::uint64_t cluster_count(const Graph& g);

// Writes one edge per line in original-id space, smaller id first, sorted.
void write_edge_list(const Graph& g, std::ostream& out);

struct RmatParams {
  int scale = 10;
  int avg_degree = 8;
  std::array<double, 4> quadrant_probs{0.57, 0.19, 0.19, 0.05};
  std::uint64_t seed = 1;

  void validate() const;
};

struct RmatResult {
  Graph graph;
  std::uint64_t target_edges = 0;
  std::uint64_t attempts = 0;
  // Attempt cap hit before reaching the target edge count.
  bool truncated = false;
};

// Samples directed pairs by recursive quadrant descent on a 2^scale square
// matrix until floor(2^scale * avg_degree / 2) distinct undirected non-loop
// edges exist, or 20x that many samples have been drawn.
RmatResult generate_rmat(const RmatParams& params);

}  // namespace exforce
