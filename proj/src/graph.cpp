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

#include "exforce/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <string_view>

namespace exforce {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Returns the next whitespace-delimited token, advancing pos.
std::string_view next_token(std::string_view line, std::size_t& pos) {
  while (pos < line.size() && is_space(line[pos])) ++pos;
  const std::size_t start = pos;
  while (pos < line.size() && !is_space(line[pos])) ++pos;
  return line.substr(start, pos - start);
}

ExternalId parse_id(std::string_view token, std::size_t line_no) {
  ExternalId value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ParseError(line_no, "expected non-negative integer node id, got '" +
                                  std::string(token) + "'");
  }
  return value;
}

}  // namespace

EdgeList load_edge_list(std::istream& in) {
  EdgeList result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    const std::string_view view(line);
    const std::string_view first = next_token(view, pos);
    if (first.empty() || first.front() == '#' || first.front() == '%') continue;
    const std::string_view second = next_token(view, pos);
    if (second.empty()) {
      throw ParseError(line_no, "expected two node ids");
    }
    result.edges.emplace_back(parse_id(first, line_no), parse_id(second, line_no));
  }
  return result;
}

EdgeList load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in);
}

Graph build_graph(const EdgeList& input) {
  std::vector<std::pair<ExternalId, ExternalId>> edges;
  edges.reserve(input.edges.size() * 2);
  for (auto [u, v] : input.edges) {
    if (u == v) continue;
    edges.emplace_back(u, v);
    edges.emplace_back(v, u);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  // Sources in sorted order are exactly the non-isolated nodes.
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (k == 0 || edges[k].first != edges[k - 1].first) {
      g.original_ids_.push_back(edges[k].first);
    }
  }
  if (g.original_ids_.size() >= (std::size_t{1} << 31)) {
    throw std::length_error("graph has more than 2^31 nodes");
  }

  const auto dense = [&](ExternalId x) {
    auto it = std::lower_bound(g.original_ids_.begin(), g.original_ids_.end(), x);
    return static_cast<NodeId>(it - g.original_ids_.begin());
  };

  const std::size_t n = g.original_ids_.size();
  g.offsets_.assign(n + 1, 0);
  g.neighbors_.reserve(edges.size());
  for (auto [u, v] : edges) {
    ++g.offsets_[dense(u) + 1];
    g.neighbors_.push_back(dense(v));
  }
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
  // Relabeling is monotone, so each list stays sorted.
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  if (degree_unchecked(u) > degree_unchecked(v)) std::swap(u, v);
  const auto adj = neighbors_unchecked(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

double Graph::avg_degree() const {
  if (num_nodes() == 0) return 0.0;
  return 2.0 * static_cast<double>(num_edges()) / static_cast<double>(num_nodes());
}

std::uint32_t Graph::max_degree() const {
  std::uint32_t best = 0;
  for (NodeId v = 0; v < num_nodes(); ++v) best = std::max(best, degree_unchecked(v));
  return best;
}

std::uint64_t cluster_count(const Graph& g) {
  std::uint64_t total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::uint64_t d = g.degree_unchecked(v);
    total += d * (d - 1) / 2;
  }
  return total;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  std::vector<std::pair<ExternalId, ExternalId>> edges;
  edges.reserve(g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (NodeId u : g.neighbors_unchecked(v)) {
      if (v < u) edges.emplace_back(g.original_id(v), g.original_id(u));
    }
  }
  // Dense order already matches original order, but be explicit.
  std::sort(edges.begin(), edges.end());
  for (auto [a, b] : edges) out << a << ' ' << b << '\n';
}

}  // namespace exforce
