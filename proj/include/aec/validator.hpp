#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aec/bicycle.hpp"
#include "aec/engine.hpp"
#include "aec/errors.hpp"
#include "aec/graph.hpp"
#include "aec/palette.hpp"
#include "aec/rng.hpp"
#include "aec/witness.hpp"

namespace aec {

/// Output of one ColorVal execution over an admissible sequence.
struct ColorValOutcome {
  bool success = true;
  std::vector<Cycle> cycles;
  std::vector<bool> chosen_bichromatic;
  std::int64_t instants = 0;
};

namespace detail {

struct OrderedPair {
  int shared;  // the larger endpoint of first_edge, shared with second_edge
  int open_first;   // endpoint of first_edge away from the pair
  int open_second;  // endpoint of second_edge away from the pair
};

inline OrderedPair ordered_pair_of(const Graph& g, const AdmissibleTriple& t) {
  if (t.first_edge == t.second_edge)
    throw input_error("triple needs two distinct edges");
  const auto [v, u] = g.edge(t.first_edge);  // v < u by edge canonical form
  const auto [a, b] = g.edge(t.second_edge);
  if (a != u && b != u)
    throw input_error("pair is not ordered: edge " +
                      std::to_string(t.second_edge) +
                      " misses the larger endpoint of edge " +
                      std::to_string(t.first_edge));
  return {u, v, g.other_endpoint(t.second_edge, u)};
}

/// Depth-first search for simple cycles of exactly `target_len` edges that
/// traverse first_edge then second_edge. Neighbors are scanned in ascending
/// edge order, so enumeration order is deterministic. When `collect_all` is
/// false the search stops at the first hit.
inline void cycles_of_length_through_pair(const Graph& g,
                                          const AdmissibleTriple& t,
                                          int target_len, bool collect_all,
                                          std::vector<Cycle>& out) {
  const auto pair = ordered_pair_of(g, t);
  const int extra = target_len - 2;  // edges beyond the pair itself
  if (extra < 1) return;
  std::vector<char> used(g.vertex_count(), 0);
  used[pair.open_first] = 1;
  used[pair.shared] = 1;
  used[pair.open_second] = 1;
  std::vector<int> walk{t.first_edge, t.second_edge};

  auto dfs = [&](auto&& self, int cur, int remaining) -> bool {
    for (int e : g.incident_edges(cur)) {
      const int w = g.other_endpoint(e, cur);
      if (remaining == 1) {
        if (w != pair.open_first) continue;
        walk.push_back(e);
        out.push_back(Cycle::from_closed_walk(g, walk));
        walk.pop_back();
        if (!collect_all) return true;
        continue;
      }
      if (used[w] || w == pair.open_first) continue;
      used[w] = 1;
      walk.push_back(e);
      const bool done = self(self, w, remaining - 1);
      walk.pop_back();
      used[w] = 0;
      if (done) return true;
    }
    return false;
  };
  dfs(dfs, pair.open_second, extra);
}

}  // namespace detail

/// True iff some cycle of length 2k contains the ordered pair (e1, e2)
/// consecutively. Bounded depth-first path search; exponential in the worst
/// case, intended for desk-scale graphs.
inline bool is_admissible(const Graph& g, const AdmissibleTriple& t) {
  if (t.half_length < 3)
    throw input_error("admissible triples need k >= 3");
  std::vector<Cycle> hits;
  detail::cycles_of_length_through_pair(g, t, 2 * t.half_length, false, hits);
  return !hits.empty();
}

/// ColorVal: initial coloring exactly as the main algorithm, then one step
/// per triple. A step is "chosen as bichromatic" when the unique properly
/// bichromatic cycle through the pair exists and has the prescribed length;
/// otherwise the smallest cycle of that length through the pair stands in.
/// Either way the cycle minus its seed is resampled in ascending edge order.
inline ColorValOutcome colorval_run(const Graph& g,
                                    const std::vector<AdmissibleTriple>& seq,
                                    double gamma, std::uint64_t seed) {
  for (const auto& t : seq)
    if (!is_admissible(g, t))
      throw input_error("inadmissible triple (" +
                        std::to_string(t.first_edge) + ", " +
                        std::to_string(t.second_edge) + ", " +
                        std::to_string(t.half_length) + ")");
  RandomStream rng(seed);
  ColoringState st = initial_coloring(g, gamma, rng);
  ColorValOutcome out;
  for (const auto& t : seq) {
    const int target_len = 2 * t.half_length;
    std::optional<Cycle> chosen;
    bool bichromatic = false;
    if (auto c = bichromatic_cycle_through_pair(st, g, t.first_edge,
                                                t.second_edge);
        c && c->length() == target_len) {
      chosen = std::move(*c);
      bichromatic = true;
    } else {
      std::vector<Cycle> all;
      detail::cycles_of_length_through_pair(g, t, target_len, true, all);
      if (all.empty())
        throw invariant_error("admissible triple found no cycle");
      chosen = *std::min_element(all.begin(), all.end());
    }
    const auto cycle_seed = seed_of(st, *chosen);
    for (int f : detail::cycle_minus_seed(*chosen, cycle_seed))
      assign_random(st, g, f, rng);
    out.success = out.success && bichromatic;
    out.chosen_bichromatic.push_back(bichromatic);
    out.cycles.push_back(std::move(*chosen));
  }
  out.instants = st.clock;
  std::int64_t expected = g.edge_count();
  for (const auto& t : seq) expected += 2 * t.half_length - 2;
  if (expected != out.instants)
    throw invariant_error("ColorVal instant accounting mismatch");
  return out;
}

/// Closed-form success bound for ColorVal on a sequence:
/// (1/K)^n * prod_s (1 - (1 - 1/K)^(delta-1))^(2k_s - 3), K the quota.
inline double colorval_success_bound(const std::vector<AdmissibleTriple>& seq,
                           double gamma, int delta) {
  const int k_quota = quota(gamma, delta);
  double p = 1.0;
  for (const auto& t : seq) {
    const double block =
        1.0 - std::pow(1.0 - 1.0 / k_quota, delta - 1);
    p *= (1.0 / k_quota) * std::pow(block, 2 * t.half_length - 3);
  }
  return p;
}

/// Relaxed form of the success bound:
/// (delta-1)^(-n) * prod_s (1/gamma)(1 - e^(-1/gamma))^(2k_s - 3).
/// Always dominates colorval_success_bound.
inline double colorval_success_bound_relaxed(const std::vector<AdmissibleTriple>& seq,
                                      double gamma, int delta) {
  if (!(gamma > 0)) throw input_error("gamma must be positive");
  if (delta < 2) throw input_error("maximum degree must be at least 2");
  const double base = 1.0 - std::exp(-1.0 / gamma);
  double p = 1.0;
  for (const auto& t : seq)
    p *= (1.0 / (delta - 1)) * (1.0 / gamma) *
         std::pow(base, 2 * t.half_length - 3);
  return p;
}

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Empirical ColorVal success frequency over independent trials. Trial i
/// runs on the documented sub-seed RandomStream::subseed(seed, i), so the
/// aggregate is reproducible and order-independent.
inline MonteCarloResult monte_carlo_success(
    const Graph& g, const std::vector<AdmissibleTriple>& seq, double gamma,
    std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw input_error("need at least one trial");
  std::size_t successes = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto outcome =
        colorval_run(g, seq, gamma, RandomStream::subseed(seed, i));
    if (outcome.success) ++successes;
  }
  MonteCarloResult r;
  r.trials = trials;
  r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  r.std_error =
      std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  return r;
}

}  // namespace aec
