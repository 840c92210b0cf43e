#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aec/errors.hpp"
#include "aec/rng.hpp"

namespace aec {

/// Simple undirected graph with the fixed total orders everything else
/// depends on: vertices are 0..n-1 in integer order, edges are (u,v) pairs
/// with u < v sorted lexicographically and identified by their index in that
/// order.
class Graph {
 public:
  static Graph from_edge_list(std::vector<std::pair<int, int>> edges,
                              int min_vertex_count = 0) {
    Graph g;
    for (auto& [u, v] : edges) {
      if (u == v) throw input_error("loop edge (" + std::to_string(u) + "," +
                                    std::to_string(v) + ")");
      if (u > v) std::swap(u, v);
      if (u < 0) throw input_error("negative vertex id");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw input_error("duplicate edge");
    g.edges_ = std::move(edges);
    g.n_ = min_vertex_count;
    for (const auto& [u, v] : g.edges_) g.n_ = std::max(g.n_, v + 1);
    g.adjacency_.assign(g.n_, {});
    for (int id = 0; id < static_cast<int>(g.edges_.size()); ++id) {
      g.adjacency_[g.edges_[id].first].push_back(id);
      g.adjacency_[g.edges_[id].second].push_back(id);
    }
    g.max_degree_ = 0;
    for (const auto& inc : g.adjacency_)
      g.max_degree_ = std::max(g.max_degree_, static_cast<int>(inc.size()));
    return g;
  }

  /// Parses an edge-list document: one "u v" pair per line, '#' starts a
  /// comment line, blank lines ignored. Vertex count is 1 + max vertex id.
  static Graph parse(std::string_view text) {
    std::vector<std::pair<int, int>> edges;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      long long u = -1, v = -1;
      std::string rest;
      if (!(ls >> u >> v) || (ls >> rest)) {
        throw input_error("line " + std::to_string(line_no) +
                          ": malformed edge line: '" + line + "'");
      }
      if (u < 0 || v < 0)
        throw input_error("line " + std::to_string(line_no) +
                          ": negative vertex id");
      if (u == v)
        throw input_error("line " + std::to_string(line_no) + ": loop edge " +
                          std::to_string(u) + " " + std::to_string(v));
      int a = static_cast<int>(u), b = static_cast<int>(v);
      if (a > b) std::swap(a, b);
      if (std::find(edges.begin(), edges.end(), std::make_pair(a, b)) !=
          edges.end())
        throw input_error("line " + std::to_string(line_no) +
                          ": duplicate edge " + std::to_string(u) + " " +
                          std::to_string(v));
      edges.emplace_back(a, b);
    }
    return from_edge_list(std::move(edges));
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::pair<int, int> edge(int id) const { return edges_.at(id); }
  int max_degree() const { return max_degree_; }

  /// Ascending edge ids incident to v.
  const std::vector<int>& incident_edges(int v) const {
    if (v < 0 || v >= n_)
      throw input_error("vertex " + std::to_string(v) + " out of range");
    return adjacency_[v];
  }

  int other_endpoint(int e, int v) const {
    const auto& [a, b] = edges_.at(e);
    if (v == a) return b;
    if (v == b) return a;
    throw input_error("vertex " + std::to_string(v) + " not on edge " +
                      std::to_string(e));
  }

  std::optional<int> edge_id(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(),
                               std::make_pair(u, v));
    if (it != edges_.end() && *it == std::make_pair(u, v))
      return static_cast<int>(it - edges_.begin());
    return std::nullopt;
  }

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
  int max_degree_ = 0;
};

inline std::string format_edge_list(const Graph& g) {
  std::string out;
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

/// A simple cycle held in canonical form: the edge sequence starts at the
/// smallest edge id and proceeds toward the smaller of its two neighbouring
/// edge ids, so cycle equality is plain sequence equality. vertex_ids[i] is
/// the vertex shared by edge_ids[i-1] and edge_ids[i] (cyclically), i.e.
/// edge_ids[i] joins vertex_ids[i] to vertex_ids[i+1 mod len].
struct Cycle {
  std::vector<int> edge_ids;
  std::vector<int> vertex_ids;

  int length() const { return static_cast<int>(edge_ids.size()); }
  bool is_even() const { return length() % 2 == 0; }
  bool contains_edge(int e) const {
    return std::find(edge_ids.begin(), edge_ids.end(), e) != edge_ids.end();
  }
  int position_of(int e) const {
    auto it = std::find(edge_ids.begin(), edge_ids.end(), e);
    if (it == edge_ids.end())
      throw input_error("edge " + std::to_string(e) + " not on cycle");
    return static_cast<int>(it - edge_ids.begin());
  }

  friend bool operator==(const Cycle& a, const Cycle& b) {
    return a.edge_ids == b.edge_ids;
  }
  /// Fixed order on cycles: fewer edges first, then lexicographic on the
  /// canonical edge-id sequence.
  friend std::strong_ordering operator<=>(const Cycle& a, const Cycle& b) {
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    return a.edge_ids <=> b.edge_ids;
  }

  /// Canonicalizes a closed walk given as consecutive edge ids. Validates
  /// that consecutive edges (cyclically) share a vertex and that the
  /// traversal visits distinct vertices.
  static Cycle from_closed_walk(const Graph& g, const std::vector<int>& walk) {
    const int len = static_cast<int>(walk.size());
    if (len < 3) throw input_error("cycle needs at least 3 edges");
    const int start =
        static_cast<int>(std::min_element(walk.begin(), walk.end()) -
                         walk.begin());
    const bool forward =
        walk[(start + 1) % len] < walk[(start + len - 1) % len];
    Cycle c;
    c.edge_ids.reserve(len);
    for (int j = 0; j < len; ++j) {
      const int idx = forward ? (start + j) % len : (start - j + len) % len;
      c.edge_ids.push_back(walk[idx]);
    }
    c.vertex_ids = trace_vertices(g, c.edge_ids);
    return c;
  }

 private:
  static std::vector<int> trace_vertices(const Graph& g,
                                         const std::vector<int>& seq) {
    const int len = static_cast<int>(seq.size());
    auto shared_vertex = [&](int e1, int e2) -> int {
      auto [a, b] = g.edge(e1);
      auto [c, d] = g.edge(e2);
      if (a == c || a == d) return a;
      if (b == c || b == d) return b;
      throw input_error("edges " + std::to_string(e1) + " and " +
                        std::to_string(e2) + " do not share a vertex");
    };
    std::vector<int> verts(len);
    for (int i = 0; i < len; ++i)
      verts[i] = shared_vertex(seq[(i + len - 1) % len], seq[i]);
    std::vector<int> sorted = verts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw input_error("closed walk revisits a vertex");
    return verts;
  }
};

/// Pairing-model sampler for a simple d-regular graph on n vertices,
/// rejecting whole samples that contain loops or parallel edges. The result
/// is a pure function of the seed.
inline Graph generate_random_regular(int n, int d, std::uint64_t seed,
                                     int max_attempts = 10000) {
  if (n <= 0 || d < 0) throw input_error("need n > 0 and d >= 0");
  if (d >= n) throw input_error("degree d must satisfy d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw input_error("infeasible: n*d is odd");
  RandomStream rng(seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    stubs.clear();
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i)
      std::swap(stubs[i], stubs[rng.uniform_int(0, i)]);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(stubs.size() / 2);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      edges.emplace_back(u, v);
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      continue;
    return Graph::from_edge_list(std::move(edges), n);
  }
  throw input_error("random regular sampling failed after " +
                    std::to_string(max_attempts) + " attempts");
}

/// Brute-force enumeration of every simple cycle with 3..max_len edges, each
/// exactly once and in canonical form. Exponential in general; meant for
/// desk-scale graphs and test oracles only.
inline std::vector<Cycle> enumerate_cycles_upto(const Graph& g, int max_len) {
  std::vector<Cycle> out;
  const int n = g.vertex_count();
  std::vector<char> on_path(n, 0);
  std::vector<int> path;

  auto emit = [&](const std::vector<int>& verts) {
    std::vector<int> walk;
    walk.reserve(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
      auto id = g.edge_id(verts[i], verts[(i + 1) % verts.size()]);
      walk.push_back(*id);
    }
    out.push_back(Cycle::from_closed_walk(g, walk));
  };

  // Each cycle is rooted at its smallest vertex; the direction is fixed by
  // requiring the second vertex to be smaller than the last.
  auto dfs = [&](auto&& self, int root, int cur) -> void {
    for (int e : g.incident_edges(cur)) {
      const int w = g.other_endpoint(e, cur);
      if (w == root && path.size() >= 3) {
        if (path[1] < path.back()) emit(path);
      } else if (w > root && !on_path[w] &&
                 static_cast<int>(path.size()) < max_len) {
        on_path[w] = 1;
        path.push_back(w);
        self(self, root, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };

  for (int s = 0; s < n; ++s) {
    on_path.assign(n, 0);
    on_path[s] = 1;
    path = {s};
    dfs(dfs, s, s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace aec
