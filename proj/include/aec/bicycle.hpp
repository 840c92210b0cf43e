#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aec/errors.hpp"
#include "aec/graph.hpp"
#include "aec/palette.hpp"

namespace aec {

/// A badly colored edge together with the smallest properly bichromatic
/// cycle through it and that cycle's color pair.
struct BadEdgeReport {
  int edge = -1;
  Cycle cycle;
  std::pair<int, int> colors{0, 0};
};

namespace detail {

/// Extends a partial alternating walk to `target`. In a proper coloring
/// every vertex has at most one incident edge of each color, so the
/// {a,b}-colored subgraph is a union of paths and even cycles and each
/// extension step is forced. `walk` holds the edges already traversed,
/// `seen` the vertices that may not be revisited (target excluded), `cur`
/// the walk's current endpoint and `expected` the color of the next edge.
inline std::optional<std::vector<int>> extend_alternating_walk(
    const ColoringState& st, const Graph& g, std::vector<int> walk,
    std::vector<char> seen, int cur, int expected, int other_color,
    int target) {
  while (true) {
    int next_edge = -1;
    for (int h : g.incident_edges(cur)) {
      if (st.color[h] == expected &&
          !std::count(walk.begin(), walk.end(), h)) {
        next_edge = h;
        break;
      }
    }
    if (next_edge < 0) return std::nullopt;
    const int w = g.other_endpoint(next_edge, cur);
    walk.push_back(next_edge);
    if (w == target) {
      if (walk.size() % 2 != 0)
        throw invariant_error("alternating walk closed at odd length");
      return walk;
    }
    if (seen[w]) return std::nullopt;
    seen[w] = 1;
    cur = w;
    std::swap(expected, other_color);
  }
}

}  // namespace detail

/// The unique cycle through e alternating between e's color and b, if one
/// exists. Walks the forced two-colored path from one endpoint of e; a cycle
/// exists exactly when the walk closes back through e.
inline std::optional<Cycle> bichromatic_cycle_through(const ColoringState& st,
                                                      const Graph& g, int e,
                                                      int b) {
  const int a = st.color[e];
  if (a == 0) throw input_error("edge " + std::to_string(e) + " is uncolored");
  if (b == a || b <= 0)
    throw input_error("second color must be a positive color distinct from "
                      "the edge's own");
  const auto [u, v] = g.edge(e);
  std::vector<char> seen(g.vertex_count(), 0);
  seen[v] = 1;
  auto walk =
      detail::extend_alternating_walk(st, g, {e}, std::move(seen), v, b, a, u);
  if (!walk) return std::nullopt;
  return Cycle::from_closed_walk(g, *walk);
}

/// The unique properly bichromatic cycle containing the adjacent edges e1
/// and e2 consecutively, if any. Uniqueness holds because the cycle's color
/// pair is forced to be (color(e1), color(e2)) and the alternating walk is
/// forced edge by edge.
inline std::optional<Cycle> bichromatic_cycle_through_pair(
    const ColoringState& st, const Graph& g, int e1, int e2) {
  if (e1 == e2) throw input_error("pair needs two distinct edges");
  const int a = st.color[e1];
  const int b = st.color[e2];
  if (a == 0 || b == 0) throw input_error("pair edges must be colored");
  const auto [p, q] = g.edge(e1);
  const auto [r, s] = g.edge(e2);
  int u;  // shared vertex
  if (p == r || p == s)
    u = p;
  else if (q == r || q == s)
    u = q;
  else
    throw input_error("edges " + std::to_string(e1) + " and " +
                      std::to_string(e2) + " are not adjacent");
  if (a == b) return std::nullopt;  // cannot both lie on a proper cycle
  const int v = g.other_endpoint(e1, u);
  const int w = g.other_endpoint(e2, u);
  std::vector<char> seen(g.vertex_count(), 0);
  seen[v] = 1;
  seen[u] = 1;
  seen[w] = 1;
  auto walk = detail::extend_alternating_walk(st, g, {e1, e2}, std::move(seen),
                                              w, a, b, v);
  if (!walk) return std::nullopt;
  return Cycle::from_closed_walk(g, *walk);
}

/// The smallest properly bichromatic cycle through e under the fixed cycle
/// order (fewest edges, then canonical edge-id sequence), or nothing when e
/// is well colored.
inline std::optional<BadEdgeReport> smallest_bichromatic_cycle(
    const ColoringState& st, const Graph& g, int e) {
  const int a = st.color[e];
  if (a == 0) throw input_error("edge " + std::to_string(e) + " is uncolored");
  std::optional<BadEdgeReport> best;
  for (int b = 1; b <= st.num_colors; ++b) {
    if (b == a) continue;
    auto cycle = bichromatic_cycle_through(st, g, e, b);
    if (!cycle) continue;
    if (!best || *cycle < best->cycle)
      best = BadEdgeReport{e, std::move(*cycle), {a, b}};
  }
  return best;
}

/// All badly colored edges, largest edge id first. Requires a full coloring.
inline std::vector<int> badly_colored_edges(const ColoringState& st,
                                            const Graph& g) {
  std::vector<int> bad;
  for (int e = g.edge_count() - 1; e >= 0; --e) {
    if (st.color[e] == 0)
      throw input_error("edge " + std::to_string(e) + " is uncolored");
    if (smallest_bichromatic_cycle(st, g, e)) bad.push_back(e);
  }
  return bad;
}

/// Diagnosis of why a full coloring fails to be acyclic: either a
/// monochromatic cherry (two adjacent edges, same color) or a properly
/// bichromatic cycle.
struct AcyclicityViolation {
  std::optional<std::pair<int, int>> cherry;
  std::optional<Cycle> cycle;
};

inline std::optional<AcyclicityViolation> find_acyclicity_violation(
    const ColoringState& st, const Graph& g) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (st.color[e] == 0)
      throw input_error("edge " + std::to_string(e) + " is uncolored");
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incident_edges(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j)
        if (st.color[inc[i]] == st.color[inc[j]])
          return AcyclicityViolation{std::make_pair(inc[i], inc[j]),
                                     std::nullopt};
  }
  // Full re-check, 4-cycles included: the walk finds bichromatic cycles of
  // every even length, independent of the state invariant.
  for (int e = 0; e < g.edge_count(); ++e)
    if (auto report = smallest_bichromatic_cycle(st, g, e))
      return AcyclicityViolation{std::nullopt, std::move(report->cycle)};
  return std::nullopt;
}

/// True iff the coloring is proper and no cycle of G carries only two
/// colors.
inline bool is_acyclic_proper(const ColoringState& st, const Graph& g) {
  return !find_acyclicity_violation(st, g).has_value();
}

/// Independent oracle for is_acyclic_proper: enumerate every cycle of up to
/// max_len edges and count colors on each. The caller is responsible for
/// max_len reaching the circumference; exponential cost, desk-scale only.
inline bool brute_force_acyclic(const ColoringState& st, const Graph& g,
                                int max_len) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (st.color[e] == 0)
      throw input_error("edge " + std::to_string(e) + " is uncolored");
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incident_edges(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j)
        if (st.color[inc[i]] == st.color[inc[j]]) return false;
  }
  for (const Cycle& c : enumerate_cycles_upto(g, max_len)) {
    std::vector<int> colors;
    for (int e : c.edge_ids) colors.push_back(st.color[e]);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    if (colors.size() < 3) return false;
  }
  return true;
}

}  // namespace aec
