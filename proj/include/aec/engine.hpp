#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "aec/bicycle.hpp"
#include "aec/errors.hpp"
#include "aec/graph.hpp"
#include "aec/palette.hpp"
#include "aec/rng.hpp"

namespace aec {

/// One step: the pair (e,C) resampled, the seed S(C) that was exempt from
/// resampling, and where the step sits in the run.
struct StepRecord {
  int edge = -1;
  Cycle cycle;
  std::pair<int, int> seed{-1, -1};
  int phase_index = 0;
  int step_in_phase = 0;
  std::int64_t clock_at_start = 0;

  friend bool operator==(const StepRecord& a, const StepRecord& b) {
    return a.edge == b.edge && a.cycle == b.cycle && a.seed == b.seed &&
           a.phase_index == b.phase_index &&
           a.step_in_phase == b.step_in_phase &&
           a.clock_at_start == b.clock_at_start;
  }
};

/// The record L of a run: all steps in execution order, grouped into phases
/// by the index of each phase's first step.
struct ExecutionRecord {
  std::vector<StepRecord> steps;
  std::vector<std::size_t> phase_roots;
  bool terminated = false;
  std::int64_t total_instants = 0;

  friend bool operator==(const ExecutionRecord& a, const ExecutionRecord& b) {
    return a.steps == b.steps && a.phase_roots == b.phase_roots &&
           a.terminated == b.terminated &&
           a.total_instants == b.total_instants;
  }
};

struct RunStats {
  std::size_t n_steps = 0;
  std::size_t n_phases = 0;
  std::int64_t instants = 0;
  bool verified = false;
  double wall_seconds = 0.0;
};

struct RunResult {
  ColoringState state;
  ExecutionRecord record;
  RunStats stats;
};

/// Called after the initial coloring and after every step's recoloring pass,
/// i.e. on every full proper coloring the run produces.
using StepObserver = std::function<void(const ColoringState&, const Graph&)>;

/// The seed S(C) = (f1, f2): f1 carries the earliest assignment instant on
/// the cycle, f2 the earliest among the positions of opposite parity to f1
/// in the canonical traversal. Stamps are globally distinct, so there are
/// no ties.
inline std::pair<int, int> seed_of(const ColoringState& st, const Cycle& c) {
  if (!c.is_even()) throw input_error("seed is defined for even cycles only");
  const int len = c.length();
  for (int e : c.edge_ids)
    if (st.stamp[e] < 0)
      throw input_error("unstamped edge " + std::to_string(e) + " in cycle");
  int p1 = 0;
  for (int i = 1; i < len; ++i)
    if (st.stamp[c.edge_ids[i]] < st.stamp[c.edge_ids[p1]]) p1 = i;
  int p2 = -1;
  for (int i = 0; i < len; ++i) {
    if ((i - p1) % 2 == 0) continue;
    if (p2 < 0 || st.stamp[c.edge_ids[i]] < st.stamp[c.edge_ids[p2]]) p2 = i;
  }
  return {c.edge_ids[p1], c.edge_ids[p2]};
}

enum class RecolorStatus { completed, truncated };

namespace detail {

inline std::vector<char> well_colored_set(const ColoringState& st,
                                          const Graph& g) {
  std::vector<char> well(g.edge_count(), 0);
  for (int e = 0; e < g.edge_count(); ++e)
    well[e] = !smallest_bichromatic_cycle(st, g, e).has_value();
  return well;
}

}  // namespace detail

/// Recolor(e, C), realized with an explicit stack so recursion depth is
/// bounded by the step budget rather than the call stack. Appends one
/// StepRecord per step; opens a new phase when called at top level. Returns
/// truncated (with the partial record kept) once `step_budget` steps have
/// been spent.
///
/// Always checked: the resampled edge never lies in its cycle's seed. In
/// instrumented mode additionally: per-assignment local invariants, and at
/// every frame exit the well-colored set at entry plus C\S(C) must be well
/// colored (an O(m * N * len) scan per frame).
inline RecolorStatus recolor(ColoringState& st, const Graph& g, int e,
                             const Cycle& cycle, RandomStream& rng,
                             ExecutionRecord& record, std::size_t step_budget,
                             bool instrumented = false,
                             const StepObserver& observer = {}) {
  if (!cycle.contains_edge(e))
    throw input_error("edge " + std::to_string(e) + " is not on the cycle");

  struct Frame {
    int edge;
    Cycle cycle;
    std::pair<int, int> seed;
    std::vector<char> well_before;
  };
  std::vector<Frame> stack;
  std::size_t used = 0;
  bool phase_opened = false;  // a top-level call is one phase; opened lazily
                              // so a zero-budget call leaves no empty phase

  auto resample_set = [](const Cycle& c, std::pair<int, int> s) {
    std::vector<int> edges;
    for (int f : c.edge_ids)
      if (f != s.first && f != s.second) edges.push_back(f);
    std::sort(edges.begin(), edges.end());
    return edges;
  };

  auto push = [&](int step_edge, const Cycle& c) -> bool {
    if (used == step_budget) return false;
    const auto s = seed_of(st, c);
    if (step_edge == s.first || step_edge == s.second)
      throw invariant_error("edge " + std::to_string(step_edge) +
                            " lies in the seed of its own cycle");
    Frame fr{step_edge, c, s, {}};
    if (instrumented) fr.well_before = detail::well_colored_set(st, g);
    if (!phase_opened) {
      record.phase_roots.push_back(record.steps.size());
      phase_opened = true;
    }
    const int phase_index = static_cast<int>(record.phase_roots.size()) - 1;
    const int step_in_phase =
        static_cast<int>(record.steps.size() - record.phase_roots.back());
    record.steps.push_back(
        {step_edge, c, s, phase_index, step_in_phase, st.clock});
    ++used;
    for (int f : resample_set(c, s)) {
      assign_random(st, g, f, rng);
      if (instrumented && !local_invariants_ok(st, g, f))
        throw invariant_error("state invariant broken after recoloring edge " +
                              std::to_string(f));
    }
    if (observer) observer(st, g);
    stack.push_back(std::move(fr));
    return true;
  };

  if (!push(e, cycle)) return RecolorStatus::truncated;
  while (!stack.empty()) {
    const Frame& top = stack.back();
    std::optional<BadEdgeReport> bad;
    auto pass = resample_set(top.cycle, top.seed);
    for (auto it = pass.rbegin(); it != pass.rend() && !bad; ++it)
      bad = smallest_bichromatic_cycle(st, g, *it);
    if (bad) {
      if (bad->cycle.length() < 6)
        throw invariant_error("bichromatic 4-cycle selected during a run");
      if (!push(bad->edge, bad->cycle)) return RecolorStatus::truncated;
      continue;
    }
    if (instrumented) {
      // The well-colored set only grows and gains C\S(C).
      auto gained = resample_set(top.cycle, top.seed);
      for (int f = 0; f < g.edge_count(); ++f) {
        const bool must_be_well =
            top.well_before[f] ||
            std::count(gained.begin(), gained.end(), f) > 0;
        if (must_be_well && smallest_bichromatic_cycle(st, g, f))
          throw invariant_error("well-colored set shrank across a call: edge " +
                                std::to_string(f));
      }
    }
    stack.pop_back();
  }
  return RecolorStatus::completed;
}

struct RunOptions {
  double gamma = 1.569;
  std::uint64_t seed = 0;
  std::size_t step_cap = 1'000'000;
  bool instrumented = false;
  int n_colors_override = 0;
  StepObserver observer;
};

/// The full coloring algorithm: color everything in edge order, then while
/// some edge lies on a properly bichromatic cycle, take the largest such
/// edge, its smallest bichromatic cycle, and run Recolor on the pair (one
/// phase per top-level call). The entire result is a pure function of
/// (graph, gamma, seed).
inline RunResult run(const Graph& g, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(opt.seed);
  RunResult res;
  res.state = initial_coloring(g, opt.gamma, rng, opt.n_colors_override);
  if (opt.observer) opt.observer(res.state, g);

  const int m = g.edge_count();
  std::vector<char> root_seen(m, 0);
  bool truncated = false;
  while (true) {
    std::optional<BadEdgeReport> bad;
    for (int e = m - 1; e >= 0 && !bad; --e)
      bad = smallest_bichromatic_cycle(res.state, g, e);
    if (!bad) break;
    if (bad->cycle.length() < 6)
      throw invariant_error("bichromatic 4-cycle selected during a run");
    if (root_seen[bad->edge])
      throw invariant_error("phase root edge " + std::to_string(bad->edge) +
                            " repeated");
    root_seen[bad->edge] = 1;
    if (res.record.phase_roots.size() >= static_cast<std::size_t>(m))
      throw invariant_error("phase count exceeded the edge count");
    const std::size_t budget = opt.step_cap - res.record.steps.size();
    if (recolor(res.state, g, bad->edge, bad->cycle, rng, res.record, budget,
                opt.instrumented, opt.observer) == RecolorStatus::truncated) {
      truncated = true;
      break;
    }
  }
  res.record.terminated = !truncated;
  res.record.total_instants = res.state.clock;

  std::int64_t expected_instants = m;
  for (const auto& step : res.record.steps)
    expected_instants += step.cycle.length() - 2;
  if (expected_instants != res.state.clock)
    throw invariant_error("instant accounting mismatch: expected " +
                          std::to_string(expected_instants) + ", clock is " +
                          std::to_string(res.state.clock));

  res.stats.n_steps = res.record.steps.size();
  res.stats.n_phases = res.record.phase_roots.size();
  res.stats.instants = res.state.clock;
  res.stats.verified =
      res.record.terminated && is_acyclic_proper(res.state, g);
  res.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

inline RunResult run(const Graph& g, double gamma, std::uint64_t seed,
                     std::size_t step_cap = 1'000'000) {
  RunOptions opt;
  opt.gamma = gamma;
  opt.seed = seed;
  opt.step_cap = step_cap;
  return run(g, opt);
}

}  // namespace aec
