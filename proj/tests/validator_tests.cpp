#include <cmath>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "aec/validator.hpp"
#include "test_graphs.hpp"

using aec::AdmissibleTriple;
using aec::Graph;
using aec::RandomStream;

namespace {

/// Oracle: does any enumerated cycle of length 2k contain e1 and e2 as
/// consecutive edges?
bool oracle_admissible(const Graph& g, const AdmissibleTriple& t) {
  for (const auto& c : aec::enumerate_cycles_upto(g, 2 * t.half_length)) {
    if (c.length() != 2 * t.half_length) continue;
    if (!c.contains_edge(t.first_edge) || !c.contains_edge(t.second_edge))
      continue;
    const int p = c.position_of(t.first_edge);
    const int len = c.length();
    if (c.edge_ids[(p + 1) % len] == t.second_edge ||
        c.edge_ids[(p + len - 1) % len] == t.second_edge)
      return true;
  }
  return false;
}

/// All ordered adjacent pairs (e1, e2) of a graph.
std::vector<std::pair<int, int>> ordered_pairs(const Graph& g) {
  std::vector<std::pair<int, int>> out;
  for (int e1 = 0; e1 < g.edge_count(); ++e1) {
    const int larger = std::max(g.edge(e1).first, g.edge(e1).second);
    for (int e2 : g.incident_edges(larger))
      if (e2 != e1) out.emplace_back(e1, e2);
  }
  return out;
}

}  // namespace

TEST_CASE("K33: every ordered adjacent pair is admissible with k=3 only") {
  const auto g = testutil::complete_bipartite(3, 3);
  for (const auto& [e1, e2] : ordered_pairs(g)) {
    const AdmissibleTriple k3{e1, e2, 3};
    const AdmissibleTriple k4{e1, e2, 4};
    CHECK(aec::is_admissible(g, k3));
    CHECK(aec::is_admissible(g, k3) == oracle_admissible(g, k3));
    CHECK_FALSE(aec::is_admissible(g, k4));  // only 6 vertices
  }
}

TEST_CASE("C6: the lone cycle makes k=3 admissible and k=4 not") {
  const auto g = testutil::cycle_graph(6);
  // edges (0,1)=id0 and (1,2)=id2 meet at vertex 1, the larger endpoint of id0
  CHECK(aec::is_admissible(g, {0, 2, 3}));
  CHECK_FALSE(aec::is_admissible(g, {0, 2, 4}));
}

TEST_CASE("trees admit nothing") {
  const auto g = testutil::path_graph(4);
  CHECK_FALSE(aec::is_admissible(g, {0, 1, 3}));
  CHECK_FALSE(aec::is_admissible(g, {0, 1, 5}));
}

TEST_CASE("admissibility preconditions") {
  const auto g = testutil::cycle_graph(6);
  // non-adjacent pair
  CHECK_THROWS_AS(aec::is_admissible(g, {0, 4, 3}), aec::input_error);
  // adjacent but through the smaller endpoint of e1: ids 2=(1,2), 0=(0,1)
  CHECK_THROWS_AS(aec::is_admissible(g, {2, 0, 3}), aec::input_error);
  // k too small
  CHECK_THROWS_AS(aec::is_admissible(g, {0, 2, 2}), aec::input_error);
  CHECK_THROWS_AS(aec::is_admissible(g, {0, 0, 3}), aec::input_error);
}

TEST_CASE("colorval on an empty sequence succeeds using exactly m instants") {
  const auto g = testutil::complete_bipartite(3, 3);
  const auto out = aec::colorval_run(g, {}, 1.569, 42);
  CHECK(out.success);
  CHECK(out.cycles.empty());
  CHECK(out.instants == g.edge_count());
}

TEST_CASE("colorval single triple on C6: bichromatic start means success") {
  const auto g = testutil::cycle_graph(6);
  const AdmissibleTriple t{0, 2, 3};
  bool seen_success = false, seen_failure = false;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    RandomStream probe(seed);
    const auto initial = aec::initial_coloring(g, 1.569, probe);
    const bool starts_bichromatic =
        !aec::badly_colored_edges(initial, g).empty();
    const auto out = aec::colorval_run(g, {t}, 1.569, seed);
    CHECK(out.success == starts_bichromatic);
    CHECK(out.instants == 6 + 4);  // m + (2k - 2)
    REQUIRE(out.cycles.size() == 1);
    CHECK(out.cycles[0].length() == 6);  // the C6 itself, either way
    seen_success |= out.success;
    seen_failure |= !out.success;
    if (seen_success && seen_failure) break;
  }
  CHECK(seen_success);
  CHECK(seen_failure);
}

TEST_CASE("colorval rejects inadmissible input") {
  const auto g = testutil::path_graph(4);
  CHECK_THROWS_AS(aec::colorval_run(g, {{0, 1, 3}}, 1.569, 1),
                  aec::input_error);
}

TEST_CASE("success bound: the frozen single-triple value") {
  const std::vector<AdmissibleTriple> s{{0, 3, 3}};
  const double expected = 729.0 / 78125.0;  // (1/5) * (1 - (4/5)^2)^3
  CHECK(std::abs(aec::colorval_success_bound(s, 1.569, 3) - expected) < 1e-12);
  CHECK(std::abs(aec::colorval_success_bound(s, 1.569, 3) - 0.0093312) < 1e-12);
  CHECK(aec::colorval_success_bound({}, 1.569, 3) == 1.0);
  const std::vector<AdmissibleTriple> twice{{0, 3, 3}, {0, 3, 3}};
  CHECK(std::abs(aec::colorval_success_bound(twice, 1.569, 3) - expected * expected) <
        1e-15);
}

TEST_CASE("simplified bound: frozen value and dominance over the exact form") {
  const std::vector<AdmissibleTriple> s{{0, 3, 3}};
  const double q = 1.0 - std::exp(-1.0 / 1.569);
  const double expected = 0.5 * (1.0 / 1.569) * q * q * q;
  CHECK(std::abs(aec::colorval_success_bound_relaxed(s, 1.569, 3) - expected) <
        1e-12);
  CHECK(std::abs(aec::colorval_success_bound_relaxed(s, 1.569, 3) -
                 0.033362654098749694) < 1e-12);
  CHECK(aec::colorval_success_bound_relaxed({}, 1.569, 3) == 1.0);
  CHECK(aec::colorval_success_bound(s, 1.569, 3) <=
        aec::colorval_success_bound_relaxed(s, 1.569, 3));
}

TEST_CASE("dominance fuzz: simplified bound is never below the exact bound") {
  RandomStream rng(808);
  for (int round = 0; round < 1000; ++round) {
    const double gamma = 0.2 + rng.uniform_int(0, 4800) / 1000.0;
    const int delta = rng.uniform_int(2, 10);
    std::vector<AdmissibleTriple> s;
    const int n = rng.uniform_int(0, 5);
    for (int i = 0; i < n; ++i)
      s.push_back({0, 1, rng.uniform_int(3, 8)});
    CHECK(aec::colorval_success_bound(s, gamma, delta) <=
          aec::colorval_success_bound_relaxed(s, gamma, delta) + 1e-15);
  }
}

TEST_CASE("monte carlo: estimate stays under the bound and is deterministic") {
  const auto g = testutil::complete_bipartite(3, 3);
  const std::vector<AdmissibleTriple> s{{0, 3, 3}};
  const auto r1 = aec::monte_carlo_success(g, s, 1.569, 20000, 99);
  const auto r2 = aec::monte_carlo_success(g, s, 1.569, 20000, 99);
  CHECK(r1.estimate == r2.estimate);
  CHECK(r1.std_error == r2.std_error);
  const double bound = aec::colorval_success_bound(s, 1.569, 3);
  CHECK(r1.estimate <= bound + 3.0 * r1.std_error);
  CHECK(r1.estimate > 0.0);  // the event is rare but clearly not impossible
}

TEST_CASE("monte carlo: a practically impossible sequence estimates zero") {
  // Success would require eight consecutive bichromatic choices; the odds
  // are below 1e-16 per trial, so the frozen-seed estimate is exactly zero.
  const auto g = testutil::complete_bipartite(3, 3);
  const std::vector<AdmissibleTriple> s(8, AdmissibleTriple{0, 3, 3});
  const auto r = aec::monte_carlo_success(g, s, 1.569, 2000, 7);
  CHECK(r.estimate == 0.0);
  CHECK(r.std_error == 0.0);
}

TEST_CASE("monte carlo input checks") {
  const auto g = testutil::complete_bipartite(3, 3);
  CHECK_THROWS_AS(aec::monte_carlo_success(g, {}, 1.569, 0, 1),
                  aec::input_error);
}

TEST_CASE("monte carlo grid on K33 and the cube stays under the bound") {
  struct GridPoint {
    aec::Graph g;
    std::vector<AdmissibleTriple> s;
  };
  const auto k33 = testutil::complete_bipartite(3, 3);
  const auto cube = testutil::cube_graph();
  const int cube_e1 = *cube.edge_id(0, 1);
  const int cube_e2 = *cube.edge_id(1, 3);
  std::vector<GridPoint> grid;
  grid.push_back({k33, {{0, 3, 3}}});
  grid.push_back({k33, {{4, 7, 3}}});
  grid.push_back({k33, {{0, 3, 3}, {4, 7, 3}}});  // two-step sequence
  grid.push_back({cube, {{cube_e1, cube_e2, 3}}});
  grid.push_back({cube, {{cube_e1, cube_e2, 4}}});  // 8-cycles exist in Q3
  grid.push_back({cube, {{cube_e1, cube_e2, 3}, {cube_e1, cube_e2, 3}}});
  for (const auto& point : grid) {
    const auto r = aec::monte_carlo_success(point.g, point.s, 1.569, 20000, 1);
    const double bound =
        aec::colorval_success_bound(point.s, 1.569, point.g.max_degree());
    CHECK(r.estimate <= bound + 3.0 * r.std_error);
  }
}

TEST_CASE("soft check: forest frequencies stay under ColorVal success rates") {
  // For a fixed admissible sequence S, the total probability of the main
  // algorithm producing a witness forest whose admissible sequence is S is
  // bounded by the ColorVal success probability on S. Sampled on C6, where
  // the map from records to sequences is easy to hit.
  const auto g = testutil::cycle_graph(6);
  const std::size_t runs = 30000;
  std::map<std::vector<aec::AdmissibleTriple>, std::size_t> freq;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    const auto res = aec::run(g, 1.569, seed);
    REQUIRE(res.record.terminated);
    if (res.stats.n_steps == 0) continue;
    const auto forest = aec::build_forest(res.record, g);
    freq[aec::admissible_sequence_of(forest, g)]++;
  }
  REQUIRE(!freq.empty());
  for (const auto& [seq, count] : freq) {
    if (count < 5) continue;  // too rare to compare against noise
    const double lhs = static_cast<double>(count) / runs;
    const double lhs_se = std::sqrt(lhs * (1.0 - lhs) / runs);
    const auto mc = aec::monte_carlo_success(g, seq, 1.569, runs, 991);
    CHECK(lhs <= mc.estimate + 3.0 * (lhs_se + mc.std_error));
  }
}

TEST_CASE("colorval instant accounting holds for longer sequences") {
  const auto g = testutil::cube_graph();
  // ordered pair on the cube lying on 6-cycles: edges (0,1)=id0 shares
  // vertex 1 with (1,3) and (1,5)
  const int e1 = *g.edge_id(0, 1);
  const int e2 = *g.edge_id(1, 3);
  const AdmissibleTriple t{e1, e2, 3};
  REQUIRE(aec::is_admissible(g, t));
  const std::vector<AdmissibleTriple> seq{t, t, t};
  const auto out = aec::colorval_run(g, seq, 1.569, 5);
  CHECK(out.instants == g.edge_count() + 3 * 4);
  CHECK(out.cycles.size() == 3);
  for (const auto& c : out.cycles) CHECK(c.length() == 6);
}
