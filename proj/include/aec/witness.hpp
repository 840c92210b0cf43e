#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aec/engine.hpp"
#include "aec/errors.hpp"
#include "aec/graph.hpp"

namespace aec {

/// A vertex of the witness forest. Internal vertices carry an (edge, cycle)
/// label plus the seed that was exempt from resampling at that step; leaves
/// carry (edge, nothing). Children are plane-ordered: step children in step
/// order first, then filled leaves in ascending edge id.
struct ForestNode {
  int edge = -1;
  std::optional<Cycle> cycle;
  std::pair<int, int> seed{-1, -1};
  std::vector<ForestNode> children;

  bool is_internal() const { return cycle.has_value(); }
};

/// Exactly m rooted plane trees: trees carrying phases in phase order, then
/// one isolated vertex per remaining edge in ascending edge id.
struct WitnessForest {
  std::vector<ForestNode> trees;
  std::size_t internal_count = 0;
};

/// An ordered adjacent edge pair plus half the length of some cycle through
/// it: first_edge = {v,u} with v < u, second_edge contains u, and a cycle of
/// length 2*half_length contains the pair consecutively.
struct AdmissibleTriple {
  int first_edge = -1;
  int second_edge = -1;
  int half_length = 0;

  friend auto operator<=>(const AdmissibleTriple&,
                          const AdmissibleTriple&) = default;
};

namespace detail {

inline std::vector<int> cycle_minus_seed(const Cycle& c,
                                         std::pair<int, int> seed) {
  std::vector<int> rest;
  for (int f : c.edge_ids)
    if (f != seed.first && f != seed.second) rest.push_back(f);
  std::sort(rest.begin(), rest.end());
  return rest;
}

}  // namespace detail

/// Builds the witness forest of a terminated run. Within each phase, step i
/// attaches below the most recent earlier step whose resampled set contains
/// step i's edge (checking the previous step, then its ancestors); the
/// construction guarantees such a vertex exists. Afterwards every internal
/// vertex is padded with leaves so it has exactly |C|-2 children, and every
/// edge that roots no phase becomes an isolated leaf-labeled tree.
inline WitnessForest build_forest(const ExecutionRecord& record,
                                  const Graph& g) {
  if (!record.terminated)
    throw input_error("witness forest requires a terminated record");
  WitnessForest forest;
  forest.internal_count = record.steps.size();

  const std::size_t n_phases = record.phase_roots.size();
  std::vector<char> is_phase_root_edge(g.edge_count(), 0);

  for (std::size_t s = 0; s < n_phases; ++s) {
    const std::size_t begin = record.phase_roots[s];
    const std::size_t end =
        s + 1 < n_phases ? record.phase_roots[s + 1] : record.steps.size();
    const std::size_t count = end - begin;

    // Parent links within the phase, by the ancestor-chain rule.
    std::vector<int> parent(count, -1);
    for (std::size_t i = 1; i < count; ++i) {
      const int edge_i = record.steps[begin + i].edge;
      int cand = static_cast<int>(i) - 1;
      while (cand >= 0) {
        const auto& step = record.steps[begin + cand];
        const auto rest = detail::cycle_minus_seed(step.cycle, step.seed);
        if (std::count(rest.begin(), rest.end(), edge_i)) break;
        cand = parent[cand];
      }
      if (cand < 0)
        throw invariant_error(
            "no ancestor's resampled set contains step edge " +
            std::to_string(edge_i));
      parent[i] = cand;
    }

    std::vector<std::vector<int>> kids(count);
    for (std::size_t i = 1; i < count; ++i)
      kids[parent[i]].push_back(static_cast<int>(i));

    // Materialize bottom-up over step indices (children have larger index).
    std::vector<ForestNode> nodes(count);
    for (int i = static_cast<int>(count) - 1; i >= 0; --i) {
      const auto& step = record.steps[begin + i];
      ForestNode node;
      node.edge = step.edge;
      node.cycle = step.cycle;
      node.seed = step.seed;
      std::set<int> child_edges;
      for (int c : kids[i]) {
        child_edges.insert(nodes[c].edge);
        node.children.push_back(std::move(nodes[c]));
      }
      for (int f : detail::cycle_minus_seed(step.cycle, step.seed)) {
        if (child_edges.count(f)) continue;
        ForestNode leaf;
        leaf.edge = f;
        node.children.push_back(std::move(leaf));
      }
      nodes[i] = std::move(node);
    }
    is_phase_root_edge[record.steps[begin].edge] = 1;
    forest.trees.push_back(std::move(nodes[0]));
  }

  for (int e = 0; e < g.edge_count(); ++e) {
    if (is_phase_root_edge[e]) continue;
    ForestNode isolated;
    isolated.edge = e;
    forest.trees.push_back(std::move(isolated));
  }
  return forest;
}

/// Structural checks on a witness forest. Violations come back as data (one
/// line each) so the checker doubles as a fuzz-test oracle; an empty report
/// means all properties hold.
inline std::vector<std::string> check_properties(const WitnessForest& forest,
                                                 const Graph& g) {
  std::vector<std::string> report;
  auto complain = [&](std::string msg) { report.push_back(std::move(msg)); };

  if (static_cast<int>(forest.trees.size()) != g.edge_count())
    complain("forest has " + std::to_string(forest.trees.size()) +
             " trees, expected m=" + std::to_string(g.edge_count()));

  std::vector<int> root_edges;
  for (const auto& tree : forest.trees) root_edges.push_back(tree.edge);
  auto sorted_roots = root_edges;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  for (int e = 0; e < g.edge_count(); ++e)
    if (e >= static_cast<int>(sorted_roots.size()) || sorted_roots[e] != e) {
      complain("tree root labels do not exhaust the edge set exactly once");
      break;
    }

  std::size_t internal_seen = 0;
  auto walk = [&](auto&& self, const ForestNode& node) -> void {
    if (node.edge < 0 || node.edge >= g.edge_count())
      complain("node edge label out of range: " + std::to_string(node.edge));
    if (!node.is_internal()) {
      if (!node.children.empty())
        complain("leaf node with children at edge " +
                 std::to_string(node.edge));
      return;
    }
    ++internal_seen;
    const Cycle& c = *node.cycle;
    if (!c.is_even() || c.length() < 6)
      complain("internal cycle label is not an even cycle of length >= 6");
    if (!c.contains_edge(node.edge))
      complain("internal vertex edge " + std::to_string(node.edge) +
               " is not on its own cycle label");
    if (!c.contains_edge(node.seed.first) ||
        !c.contains_edge(node.seed.second))
      complain("seed edges are not on the cycle at edge " +
               std::to_string(node.edge));
    else if ((c.position_of(node.seed.first) -
              c.position_of(node.seed.second)) %
                 2 ==
             0)
      complain("seed edges share a traversal parity at edge " +
               std::to_string(node.edge));
    if (static_cast<int>(node.children.size()) != c.length() - 2)
      complain("internal vertex at edge " + std::to_string(node.edge) +
               " has " + std::to_string(node.children.size()) +
               " children, expected " + std::to_string(c.length() - 2));
    std::set<int> sibling_edges;
    for (const auto& child : node.children) {
      if (!c.contains_edge(child.edge))
        complain("child edge " + std::to_string(child.edge) +
                 " is outside the parent cycle");
      else if (child.edge == node.seed.first ||
               child.edge == node.seed.second)
        complain("child edge " + std::to_string(child.edge) +
                 " lies in the parent seed");
      if (!sibling_edges.insert(child.edge).second)
        complain("sibling edge label " + std::to_string(child.edge) +
                 " repeats under edge " + std::to_string(node.edge));
      self(self, child);
    }
  };
  for (const auto& tree : forest.trees) walk(walk, tree);

  if (internal_seen != forest.internal_count)
    complain("internal vertex count " + std::to_string(internal_seen) +
             " does not match recorded " +
             std::to_string(forest.internal_count));
  return report;
}

/// The admissible sequence read off the internal vertices in global
/// depth-first order: for each (e, C), the second edge is C's neighbor of e
/// through e's larger endpoint, and k is half the cycle length.
inline std::vector<AdmissibleTriple> admissible_sequence_of(
    const WitnessForest& forest, const Graph& g) {
  std::vector<AdmissibleTriple> seq;
  auto walk = [&](auto&& self, const ForestNode& node) -> void {
    if (!node.is_internal()) return;
    const Cycle& c = *node.cycle;
    if (!c.is_even())
      throw invariant_error("odd cycle label in witness forest");
    const int len = c.length();
    const int pos = c.position_of(node.edge);
    const int larger = std::max(g.edge(node.edge).first,
                                g.edge(node.edge).second);
    const int next = c.edge_ids[(pos + 1) % len];
    const int prev = c.edge_ids[(pos + len - 1) % len];
    int second = -1;
    const auto [nu, nv] = g.edge(next);
    const auto [pu, pv] = g.edge(prev);
    if (nu == larger || nv == larger)
      second = next;
    else if (pu == larger || pv == larger)
      second = prev;
    if (second < 0)
      throw invariant_error("no ordered neighbor for edge " +
                            std::to_string(node.edge) + " on its cycle");
    seq.push_back({node.edge, second, len / 2});
    for (const auto& child : node.children) self(self, child);
  };
  for (const auto& tree : forest.trees) walk(walk, tree);
  return seq;
}

namespace detail {

inline void append_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline void encode_node(std::string& out, const ForestNode& node) {
  append_u32(out, static_cast<std::uint32_t>(node.edge));
  out.push_back(node.is_internal() ? '\1' : '\0');
  if (!node.is_internal()) return;
  const Cycle& c = *node.cycle;
  append_u32(out, static_cast<std::uint32_t>(c.length()));
  for (int e : c.edge_ids) append_u32(out, static_cast<std::uint32_t>(e));
  append_u32(out, static_cast<std::uint32_t>(node.children.size()));
  for (const auto& child : node.children) encode_node(out, child);
}

}  // namespace detail

/// Canonical byte encoding of the labeled forest. The layout is
/// self-delimiting and all orderings are fixed by construction, so two
/// forests are equal exactly when their encodings are equal.
inline std::string encode_forest(const WitnessForest& forest) {
  std::string out;
  detail::append_u32(out, static_cast<std::uint32_t>(forest.trees.size()));
  for (const auto& tree : forest.trees) detail::encode_node(out, tree);
  return out;
}

inline std::string to_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

/// Indented text rendering, one node per line.
inline std::string format_forest(const WitnessForest& forest) {
  std::string out;
  auto walk = [&](auto&& self, const ForestNode& node, int depth) -> void {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "(e=" + std::to_string(node.edge);
    if (node.is_internal()) {
      out += ", C=[";
      const auto& ids = node.cycle->edge_ids;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ids[i]);
      }
      out += "])\n";
    } else {
      out += ", -)\n";
    }
    for (const auto& child : node.children) self(self, child, depth + 1);
  };
  for (std::size_t i = 0; i < forest.trees.size(); ++i) {
    out += "tree " + std::to_string(i) + ":\n";
    walk(walk, forest.trees[i], 1);
  }
  return out;
}

}  // namespace aec
