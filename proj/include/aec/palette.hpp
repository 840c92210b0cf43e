#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aec/errors.hpp"
#include "aec/graph.hpp"
#include "aec/rng.hpp"

namespace aec {

/// Palette size N = ceil((2+gamma)(delta-1)) + 1.
inline int num_colors(double gamma, int delta) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (delta < 2) throw input_error("maximum degree must be at least 2");
  return static_cast<int>(std::ceil((2.0 + gamma) * (delta - 1))) + 1;
}

/// Sampling quota K = ceil(gamma*(delta-1)) + 1: the number of smallest
/// available colors the random draw ranges over.
inline int quota(double gamma, int delta) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (delta < 2) throw input_error("maximum degree must be at least 2");
  return static_cast<int>(std::ceil(gamma * (delta - 1))) + 1;
}

/// Partial edge coloring with assignment timestamps. color[e] == 0 means
/// uncolored; stamp[e] is the global instant of e's most recent assignment
/// (-1 while uncolored). Every assignment increments the clock, so stamps
/// are distinct across the whole run.
struct ColoringState {
  std::vector<int> color;
  std::vector<std::int64_t> stamp;
  std::int64_t clock = 0;
  int num_colors = 0;  // N
  int quota = 0;       // K
};

inline ColoringState make_coloring_state(const Graph& g, double gamma,
                                         int n_colors_override = 0) {
  ColoringState st;
  st.num_colors = n_colors_override > 0 ? n_colors_override
                                        : num_colors(gamma, g.max_degree());
  st.quota = quota(gamma, g.max_degree());
  if (st.quota < 1 || st.quota > st.num_colors)
    throw input_error("palette quota out of range: K=" +
                      std::to_string(st.quota) +
                      " N=" + std::to_string(st.num_colors));
  st.color.assign(g.edge_count(), 0);
  st.stamp.assign(g.edge_count(), -1);
  return st;
}

/// The available-color set D(e,w), ascending: all of [1..N] except (i) the
/// colors on edges adjacent to e and (ii) any color that would close a
/// properly bichromatic 4-cycle through e. The edge's own current color is
/// ignored, so the same computation serves first coloring and recoloring.
/// Throws invariant_error if |D| falls below the quota K, which the greedy
/// guarantee rules out for any reachable state.
inline std::vector<int> available_colors(const ColoringState& st,
                                         const Graph& g, int e) {
  const auto [u, v] = g.edge(e);
  std::vector<char> forbidden(st.num_colors + 1, 0);
  for (int h : g.incident_edges(u))
    if (h != e && st.color[h] > 0) forbidden[st.color[h]] = 1;
  for (int f : g.incident_edges(v))
    if (f != e && st.color[f] > 0) forbidden[st.color[f]] = 1;
  // Bichromatic 4-cycle closure: h={u,x} and f={v,y} share a color and the
  // opposite edge {x,y} is colored c. Assigning c to e would complete the
  // 4-cycle e,f,{x,y},h with exactly two colors.
  for (int h : g.incident_edges(u)) {
    if (h == e || st.color[h] == 0) continue;
    const int x = g.other_endpoint(h, u);
    for (int f : g.incident_edges(v)) {
      if (f == e || st.color[f] != st.color[h]) continue;
      const int y = g.other_endpoint(f, v);
      if (x == y) continue;
      if (auto opposite = g.edge_id(x, y);
          opposite && st.color[*opposite] > 0)
        forbidden[st.color[*opposite]] = 1;
    }
  }
  std::vector<int> avail;
  avail.reserve(st.num_colors);
  for (int c = 1; c <= st.num_colors; ++c)
    if (!forbidden[c]) avail.push_back(c);
  if (static_cast<int>(avail.size()) < st.quota)
    throw invariant_error(
        "available-color quota breached at edge " + std::to_string(e) + ": " +
        std::to_string(avail.size()) + " < K=" + std::to_string(st.quota));
  return avail;
}

/// One random assignment: draw r uniform in [1..K] and give e the r-th
/// smallest available color. Only the K smallest candidates are ever used;
/// widening the draw to all of D would change the success probabilities the
/// run-length analysis depends on.
inline int assign_random(ColoringState& st, const Graph& g, int e,
                         RandomStream& rng) {
  const auto avail = available_colors(st, g, e);
  const int r = rng.uniform_int(1, st.quota);
  st.color[e] = avail[r - 1];
  st.stamp[e] = st.clock;
  ++st.clock;
  return st.color[e];
}

/// Colors all edges in edge-id order; the result is proper and free of
/// bichromatic 4-cycles by construction of D.
inline ColoringState initial_coloring(const Graph& g, double gamma,
                                      RandomStream& rng,
                                      int n_colors_override = 0) {
  if (g.max_degree() < 2)
    throw input_error("coloring runs need maximum degree >= 2");
  ColoringState st = make_coloring_state(g, gamma, n_colors_override);
  for (int e = 0; e < g.edge_count(); ++e) assign_random(st, g, e, rng);
  return st;
}

/// Local state check around edge e: no monochromatic cherry at either
/// endpoint and no properly bichromatic 4-cycle through e. Used by tests and
/// by the engine's instrumented mode after every assignment.
inline bool local_invariants_ok(const ColoringState& st, const Graph& g,
                                int e) {
  if (st.color[e] == 0) return true;
  const auto [u, v] = g.edge(e);
  for (int h : g.incident_edges(u))
    if (h != e && st.color[h] == st.color[e]) return false;
  for (int f : g.incident_edges(v))
    if (f != e && st.color[f] == st.color[e]) return false;
  for (int h : g.incident_edges(u)) {
    if (h == e || st.color[h] == 0) continue;
    const int x = g.other_endpoint(h, u);
    for (int f : g.incident_edges(v)) {
      if (f == e || st.color[f] != st.color[h]) continue;
      const int y = g.other_endpoint(f, v);
      if (x == y) continue;
      if (auto opposite = g.edge_id(x, y);
          opposite && st.color[*opposite] == st.color[e])
        return false;
    }
  }
  return true;
}

/// Text form of a full or partial coloring: one "edge_id color" line per
/// colored edge, ascending edge id.
inline std::string format_coloring(const ColoringState& st) {
  std::string out;
  for (std::size_t e = 0; e < st.color.size(); ++e) {
    if (st.color[e] == 0) continue;
    out += std::to_string(e);
    out += ' ';
    out += std::to_string(st.color[e]);
    out += '\n';
  }
  return out;
}

/// Reads a coloring produced by format_coloring back against a graph. Every
/// edge must appear exactly once with a positive color; stamps are synthetic
/// (edge order) since the file does not carry timing.
inline ColoringState parse_coloring(const Graph& g, std::string_view text) {
  ColoringState st;
  st.color.assign(g.edge_count(), 0);
  st.stamp.assign(g.edge_count(), -1);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int max_color = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long e = -1, c = -1;
    std::string rest;
    if (!(ls >> e >> c) || (ls >> rest))
      throw input_error("line " + std::to_string(line_no) +
                        ": malformed coloring line: '" + line + "'");
    if (e < 0 || e >= g.edge_count())
      throw input_error("line " + std::to_string(line_no) +
                        ": edge id out of range: " + std::to_string(e));
    if (c <= 0)
      throw input_error("line " + std::to_string(line_no) +
                        ": color must be positive");
    if (st.color[static_cast<int>(e)] != 0)
      throw input_error("line " + std::to_string(line_no) +
                        ": duplicate line for edge " + std::to_string(e));
    st.color[static_cast<int>(e)] = static_cast<int>(c);
    st.stamp[static_cast<int>(e)] = e;
    max_color = std::max(max_color, static_cast<int>(c));
  }
  for (int e = 0; e < g.edge_count(); ++e)
    if (st.color[e] == 0)
      throw input_error("coloring is missing edge " + std::to_string(e));
  st.clock = g.edge_count();
  st.num_colors = max_color;
  st.quota = 0;
  return st;
}

}  // namespace aec
