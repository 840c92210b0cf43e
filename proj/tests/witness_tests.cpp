#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "aec/engine.hpp"
#include "aec/validator.hpp"
#include "aec/witness.hpp"
#include "test_graphs.hpp"

using aec::ForestNode;
using aec::Graph;
using aec::WitnessForest;

namespace {

/// Internal (edge, cycle) labels of one tree in depth-first order.
void dfs_internal_labels(const ForestNode& node,
                         std::vector<std::pair<int, aec::Cycle>>& out) {
  if (!node.is_internal()) return;
  out.emplace_back(node.edge, *node.cycle);
  for (const auto& child : node.children) dfs_internal_labels(child, out);
}

}  // namespace

TEST_CASE("empty record: m isolated vertices, nothing internal") {
  const auto g = testutil::path_graph(5);
  const auto res = aec::run(g, 1.569, 3);
  REQUIRE(res.stats.n_steps == 0);
  const auto forest = aec::build_forest(res.record, g);
  CHECK(forest.trees.size() == 5);
  CHECK(forest.internal_count == 0);
  for (int e = 0; e < 5; ++e) {
    CHECK(forest.trees[e].edge == e);
    CHECK_FALSE(forest.trees[e].is_internal());
    CHECK(forest.trees[e].children.empty());
  }
  CHECK(aec::check_properties(forest, g).empty());
  CHECK(aec::admissible_sequence_of(forest, g).empty());
}

TEST_CASE("build_forest refuses truncated records") {
  const auto g = testutil::cycle_graph(6);
  aec::ExecutionRecord record;  // terminated defaults to false
  CHECK_THROWS_AS(aec::build_forest(record, g), aec::input_error);
}

TEST_CASE("single step: one root with |C|-2 leaves plus m-1 isolated") {
  const auto g = testutil::cycle_graph(6);
  // find a seed whose run is exactly one step
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    if (res.stats.n_steps != 1) continue;
    const auto forest = aec::build_forest(res.record, g);
    REQUIRE(forest.trees.size() == 6);
    const auto& root = forest.trees[0];
    CHECK(root.is_internal());
    CHECK(root.edge == res.record.steps[0].edge);
    REQUIRE(root.children.size() == 4);  // |C| - 2
    std::vector<int> leaf_edges;
    for (const auto& child : root.children) {
      CHECK_FALSE(child.is_internal());
      leaf_edges.push_back(child.edge);
    }
    CHECK(std::is_sorted(leaf_edges.begin(), leaf_edges.end()));
    const auto& s = res.record.steps[0];
    for (int f : s.cycle.edge_ids)
      if (f != s.seed.first && f != s.seed.second)
        CHECK(std::count(leaf_edges.begin(), leaf_edges.end(), f) == 1);
    for (std::size_t t = 1; t < 6; ++t)
      CHECK_FALSE(forest.trees[t].is_internal());
    CHECK(aec::check_properties(forest, g).empty());
    return;
  }
  FAIL("no single-step seed found");
}

TEST_CASE("a second step inside the first cycle hangs off the root") {
  const auto g = testutil::cycle_graph(6);
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    if (res.stats.n_steps < 2 || res.stats.n_phases != 1) continue;
    // on a lone C6 every later step's edge lies in the root's resampled set
    const auto forest = aec::build_forest(res.record, g);
    const auto& root = forest.trees[0];
    REQUIRE(root.is_internal());
    bool has_internal_child = false;
    for (const auto& child : root.children)
      has_internal_child |= child.is_internal();
    CHECK(has_internal_child);
    // step children precede filled leaves
    CHECK(root.children.front().edge == res.record.steps[1].edge);
    CHECK(root.children.front().is_internal());
    CHECK(aec::check_properties(forest, g).empty());
    return;
  }
  FAIL("no two-step single-phase seed found");
}

TEST_CASE("forest structure checks pass across runs on several graphs") {
  for (const Graph& g :
       {testutil::complete_bipartite(3, 3), testutil::cube_graph(),
        testutil::theta_graph()}) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto res = aec::run(g, 1.569, seed);
      REQUIRE(res.record.terminated);
      const auto forest = aec::build_forest(res.record, g);
      const auto report = aec::check_properties(forest, g);
      CAPTURE(report);
      CHECK(report.empty());
      CHECK(forest.internal_count == res.stats.n_steps);

      // depth-first relabeling of each phase tree reproduces the step list
      std::size_t phase = 0;
      for (const auto& tree : forest.trees) {
        if (!tree.is_internal()) continue;
        std::vector<std::pair<int, aec::Cycle>> labels;
        dfs_internal_labels(tree, labels);
        const std::size_t begin = res.record.phase_roots[phase];
        const std::size_t end = phase + 1 < res.record.phase_roots.size()
                                    ? res.record.phase_roots[phase + 1]
                                    : res.record.steps.size();
        REQUIRE(labels.size() == end - begin);
        for (std::size_t i = 0; i < labels.size(); ++i) {
          CHECK(labels[i].first == res.record.steps[begin + i].edge);
          CHECK(labels[i].second == res.record.steps[begin + i].cycle);
        }
        ++phase;
      }
      CHECK(phase == res.stats.n_phases);
    }
  }
}

TEST_CASE("planted defects are reported as data") {
  const auto g = testutil::cycle_graph(6);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    if (res.stats.n_steps != 1) continue;
    const auto forest = aec::build_forest(res.record, g);

    auto dup = forest;
    dup.trees[0].children[1].edge = dup.trees[0].children[0].edge;
    bool found_dup = false;
    for (const auto& line : aec::check_properties(dup, g))
      found_dup |= line.find("sibling") != std::string::npos;
    CHECK(found_dup);

    auto short_one = forest;
    short_one.trees[0].children.pop_back();
    bool found_count = false;
    for (const auto& line : aec::check_properties(short_one, g))
      found_count |= line.find("children, expected") != std::string::npos;
    CHECK(found_count);

    auto missing_tree = forest;
    missing_tree.trees.pop_back();
    CHECK_FALSE(aec::check_properties(missing_tree, g).empty());
    return;
  }
  FAIL("no single-step seed found");
}

TEST_CASE("admissible sequence: ordered pairs through the larger endpoint") {
  const auto g = testutil::complete_bipartite(3, 3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    if (res.stats.n_steps == 0) continue;
    const auto forest = aec::build_forest(res.record, g);
    const auto seq = aec::admissible_sequence_of(forest, g);
    REQUIRE(seq.size() == res.stats.n_steps);
    for (const auto& t : seq) {
      CHECK(t.half_length == 3);  // K33 has no even cycle beyond hexagons
      const auto [v, u] = g.edge(t.first_edge);
      CHECK(v < u);
      const auto [a, b] = g.edge(t.second_edge);
      CHECK((a == u || b == u));
      CHECK(aec::is_admissible(g, t));
    }
  }
}

TEST_CASE("encoding: stable for rebuilds, sensitive to any label change") {
  const auto g = testutil::complete_bipartite(3, 3);
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    if (res.stats.n_steps == 0) continue;
    const auto f1 = aec::build_forest(res.record, g);
    const auto f2 = aec::build_forest(res.record, g);
    CHECK(aec::encode_forest(f1) == aec::encode_forest(f2));
    auto mutated = f1;
    for (auto& tree : mutated.trees) {
      if (!tree.is_internal()) continue;
      auto& leaf = tree.children.back();
      leaf.edge = leaf.edge == 0 ? 1 : 0;
      break;
    }
    CHECK(aec::encode_forest(mutated) != aec::encode_forest(f1));
    return;
  }
  FAIL("no stepped run found");
}

TEST_CASE("record-to-encoding map is injective across 300 K33 runs") {
  const auto g = testutil::complete_bipartite(3, 3);
  std::map<std::string, aec::ExecutionRecord> by_encoding;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    REQUIRE(res.record.terminated);
    const auto code = aec::encode_forest(aec::build_forest(res.record, g));
    auto [it, inserted] = by_encoding.try_emplace(code, res.record);
    if (!inserted) CHECK(it->second == res.record);
  }
}

TEST_CASE("attachment rule: a step can land above the previous step") {
  // Synthetic single-phase record on the theta graph: root (eA, X6), then
  // (eB, rim), then (chord, X8). The chord is not on the rim, so the third
  // step must climb past the second vertex and attach to the root.
  const auto g = testutil::theta_graph();
  const auto cycles = aec::enumerate_cycles_upto(g, 12);
  REQUIRE(cycles.size() == 3);
  const auto& hexagon = cycles[0];
  const auto& octagon = cycles[1];
  const auto& rim = cycles[2];
  const int chord = *g.edge_id(0, 5);
  REQUIRE(hexagon.contains_edge(chord));
  REQUIRE(octagon.contains_edge(chord));
  REQUIRE(!rim.contains_edge(chord));

  // seed of the hexagon: an adjacent-position pair that spares the chord
  const int chord_pos = hexagon.position_of(chord);
  const int s0 = (chord_pos + 1) % 6, s1 = (chord_pos + 2) % 6;
  const std::pair<int, int> hex_seed{hexagon.edge_ids[s0],
                                     hexagon.edge_ids[s1]};
  // two hexagon edges outside the seed and distinct from the chord
  std::vector<int> free_edges;
  for (int e : hexagon.edge_ids)
    if (e != chord && e != hex_seed.first && e != hex_seed.second)
      free_edges.push_back(e);
  REQUIRE(free_edges.size() == 3);
  const int root_edge = free_edges[0];
  const int mid_edge = free_edges[1];

  auto seed_avoiding = [](const aec::Cycle& c, int avoid) {
    for (int i = 0; i < c.length(); ++i) {
      const int a = c.edge_ids[i], b = c.edge_ids[(i + 1) % c.length()];
      if (a != avoid && b != avoid) return std::make_pair(a, b);
    }
    FAIL("no seed pair found");
    return std::make_pair(-1, -1);
  };

  aec::ExecutionRecord record;
  record.terminated = true;
  record.phase_roots = {0};
  record.steps.push_back({root_edge, hexagon, hex_seed, 0, 0, 13});
  record.steps.push_back(
      {mid_edge, rim, seed_avoiding(rim, mid_edge), 0, 1, 17});
  record.steps.push_back(
      {chord, octagon, seed_avoiding(octagon, chord), 0, 2, 27});
  record.total_instants = 13 + 4 + 10 + 6;

  const auto forest = aec::build_forest(record, g);
  REQUIRE(forest.trees.size() == static_cast<std::size_t>(g.edge_count()));
  const auto& root = forest.trees[0];
  CHECK(root.edge == root_edge);
  REQUIRE(root.children.size() == 4);
  CHECK(root.children[0].edge == mid_edge);
  CHECK(root.children[0].is_internal());
  CHECK(root.children[1].edge == chord);      // attached by the ancestor walk
  CHECK(root.children[1].is_internal());
  CHECK(root.children[0].children.size() == 10);  // |rim| - 2 filled leaves
  CHECK(root.children[1].children.size() == 6);   // |octagon| - 2
  CHECK(aec::check_properties(forest, g).empty());

  // DFS of the phase tree reproduces the synthetic step list
  std::vector<std::pair<int, aec::Cycle>> labels;
  dfs_internal_labels(root, labels);
  REQUIRE(labels.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(labels[i].first == record.steps[i].edge);
    CHECK(labels[i].second == record.steps[i].cycle);
  }

  // and when no ancestor's resampled set contains the edge, that is a bug
  auto broken = record;
  const int far_edge = *g.edge_id(7, 8);  // on the rim and octagon only
  broken.steps[1] = {far_edge, octagon, seed_avoiding(octagon, far_edge),
                     0, 1, 17};
  CHECK_THROWS_AS(aec::build_forest(broken, g), aec::invariant_error);
}

TEST_CASE("tight-palette 4-cube runs exercise deep phases and still check out") {
  // gamma far below the certified threshold with the minimum legal palette:
  // runs get multi-step phases and steps that attach above their
  // predecessor, which the easy regime never produces.
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 16; ++u)
    for (int bit : {1, 2, 4, 8})
      if ((u ^ bit) > u) edges.emplace_back(u, u ^ bit);
  const auto g = aec::Graph::from_edge_list(std::move(edges));

  std::vector<std::uint64_t> seeds{3, 143, 443, 1224, 1519, 1860, 1887, 1966};
  for (std::uint64_t s = 0; s < 120; ++s) seeds.push_back(s);
  int ancestor_jumps = 0;
  std::size_t longest_phase = 0;
  for (const auto seed : seeds) {
    aec::RunOptions opt;
    opt.gamma = 0.3;
    opt.seed = seed;
    opt.step_cap = 100000;
    opt.instrumented = true;
    opt.n_colors_override = 8;  // 2(delta-1) + K exactly
    const auto res = aec::run(g, opt);
    REQUIRE(res.record.terminated);
    const auto forest = aec::build_forest(res.record, g);
    const auto report = aec::check_properties(forest, g);
    CAPTURE(seed, report);
    CHECK(report.empty());

    const auto& record = res.record;
    for (std::size_t p = 0; p < record.phase_roots.size(); ++p) {
      const std::size_t begin = record.phase_roots[p];
      const std::size_t end = p + 1 < record.phase_roots.size()
                                  ? record.phase_roots[p + 1]
                                  : record.steps.size();
      longest_phase = std::max(longest_phase, end - begin);
      for (std::size_t i = begin + 1; i < end; ++i) {
        const auto& prev = record.steps[i - 1];
        bool in_prev_resample = false;
        for (int f : prev.cycle.edge_ids)
          if (f != prev.seed.first && f != prev.seed.second &&
              f == record.steps[i].edge)
            in_prev_resample = true;
        if (!in_prev_resample) ++ancestor_jumps;
      }
    }
  }
  CHECK(ancestor_jumps >= 3);   // the pinned seeds guarantee several
  CHECK(longest_phase >= 5);
}

TEST_CASE("forest text rendering shows roots and leaves") {
  const auto g = testutil::path_graph(3);
  const auto res = aec::run(g, 1.569, 0);
  const auto forest = aec::build_forest(res.record, g);
  const auto text = aec::format_forest(forest);
  CHECK(text.find("tree 0:") != std::string::npos);
  CHECK(text.find("(e=0, -)") != std::string::npos);
  const auto hex = aec::to_hex(aec::encode_forest(forest));
  CHECK(hex.size() == aec::encode_forest(forest).size() * 2);
}
