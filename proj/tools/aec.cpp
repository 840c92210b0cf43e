// Command-line surface for the acyclic edge coloring toolkit: graph
// generation, coloring runs, verification, witness forests, ColorVal
// Monte-Carlo and the generating-function bound. Every command with a fixed
// seed produces byte-identical output across runs.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aec/bicycle.hpp"
#include "aec/bounds.hpp"
#include "aec/engine.hpp"
#include "aec/graph.hpp"
#include "aec/palette.hpp"
#include "aec/validator.hpp"
#include "aec/witness.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aec::input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw aec::input_error("cannot write file: " + path);
  out << content;
}

aec::AdmissibleTriple parse_triple(const std::string& text) {
  aec::AdmissibleTriple t;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> t.first_edge >> c1 >> t.second_edge >> c2 >> t.half_length) ||
      c1 != ':' || c2 != ':' || (ss >> std::ws && !ss.eof()))
    throw aec::input_error("malformed triple '" + text +
                           "', expected e1:e2:k");
  return t;
}

json triples_json(const std::vector<aec::AdmissibleTriple>& seq) {
  json arr = json::array();
  for (const auto& t : seq)
    arr.push_back({t.first_edge, t.second_edge, t.half_length});
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acyclic edge coloring: randomized recoloring algorithm, "
               "validation and bound certification"};
  app.require_subcommand(1);
  std::function<int()> action;

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a random d-regular graph");
  int gen_n = 0, gen_d = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--d", gen_d, "degree")->required();
  gen->add_option("--seed", gen_seed, "random seed")->required();
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->callback([&] {
    action = [&]() -> int {
      const auto g = aec::generate_random_regular(gen_n, gen_d, gen_seed);
      std::string text = "# " + std::to_string(gen_d) + "-regular graph n=" +
                         std::to_string(gen_n) + " seed=" +
                         std::to_string(gen_seed) + "\n" +
                         aec::format_edge_list(g);
      write_output(gen_out, text);
      return 0;
    };
  });

  // --- color -------------------------------------------------------------
  auto* color = app.add_subcommand("color", "run the coloring algorithm");
  std::string color_graph, color_coloring_out, color_stats_out;
  double color_gamma = 1.569;
  std::uint64_t color_seed = 0;
  std::size_t color_cap = 1'000'000;
  int color_n_override = 0;
  bool color_instrumented = false;
  color->add_option("--graph", color_graph, "edge-list file")->required();
  color->add_option("--gamma", color_gamma, "palette parameter (default 1.569)");
  color->add_option("--seed", color_seed, "random seed")->required();
  color->add_option("--step-cap", color_cap, "step cap (default 1e6)");
  color->add_option("--colors", color_n_override,
                    "override the palette size N");
  color->add_flag("--instrumented", color_instrumented,
                  "enable the slow per-step invariant assertions");
  color->add_option("--coloring-out", color_coloring_out,
                    "write the final coloring here");
  color->add_option("--stats-out", color_stats_out,
                    "write the stats JSON here (default stdout)");
  color->callback([&] {
    action = [&]() -> int {
      const auto g = aec::Graph::parse(read_file(color_graph));
      if (color_n_override > 0 &&
          color_n_override < aec::num_colors(color_gamma, g.max_degree()))
        std::cerr << "warning: N override " << color_n_override
                  << " is below the formula value "
                  << aec::num_colors(color_gamma, g.max_degree())
                  << "; quota breaches become likely\n";
      aec::RunOptions opt;
      opt.gamma = color_gamma;
      opt.seed = color_seed;
      opt.step_cap = color_cap;
      opt.instrumented = color_instrumented;
      opt.n_colors_override = color_n_override;
      const auto res = aec::run(g, opt);
      if (!color_coloring_out.empty())
        write_output(color_coloring_out, aec::format_coloring(res.state));
      json stats = {
          {"n_steps", res.stats.n_steps},
          {"n_phases", res.stats.n_phases},
          {"instants", res.stats.instants},
          {"terminated", res.record.terminated},
          {"verified", res.stats.verified},
          {"seed", color_seed},
          {"gamma", color_gamma},
          {"N", res.state.num_colors},
          {"K", res.state.quota},
      };
      write_output(color_stats_out, stats.dump(2) + "\n");
      if (!res.record.terminated) return 2;
      return res.stats.verified ? 0 : 3;
    };
  });

  // --- verify ------------------------------------------------------------
  auto* verify = app.add_subcommand("verify",
                                    "check a coloring for acyclic properness");
  std::string verify_graph, verify_coloring;
  verify->add_option("--graph", verify_graph, "edge-list file")->required();
  verify->add_option("--coloring", verify_coloring, "coloring file")
      ->required();
  verify->callback([&] {
    action = [&]() -> int {
      const auto g = aec::Graph::parse(read_file(verify_graph));
      const auto st = aec::parse_coloring(g, read_file(verify_coloring));
      const auto violation = aec::find_acyclicity_violation(st, g);
      if (!violation) {
        std::cout << "acyclic proper coloring\n";
        return 0;
      }
      if (violation->cherry) {
        const auto [e1, e2] = *violation->cherry;
        std::cout << "monochromatic cherry: edges " << e1 << " and " << e2
                  << " share color " << st.color[e1] << "\n";
      } else {
        std::cout << "bichromatic cycle:";
        for (int e : violation->cycle->edge_ids)
          std::cout << " " << e << "(c" << st.color[e] << ")";
        std::cout << "\n";
      }
      return 1;
    };
  });

  // --- bound -------------------------------------------------------------
  auto* bound = app.add_subcommand(
      "bound", "generating-function bound: rho for a gamma, or the gamma "
               "threshold by bisection");
  double bound_gamma = 1.569, bound_tol = 1e-4;
  int bound_delta = 3;
  bool bound_threshold = false;
  bound->add_option("--gamma", bound_gamma, "palette parameter");
  bound->add_option("--delta", bound_delta,
                    "maximum degree used to report N and K (default 3)");
  bound->add_flag("--threshold", bound_threshold,
                  "bisect for the smallest gamma with rho < 1");
  bound->add_option("--tol", bound_tol, "bisection tolerance (default 1e-4)");
  bound->callback([&] {
    action = [&]() -> int {
      json out;
      if (bound_threshold) {
        const double g_star = aec::gamma_threshold(bound_tol);
        out = {{"threshold", g_star},
               {"constant", 2.0 + g_star},
               {"tol", bound_tol}};
      } else {
        const auto r = aec::rho(bound_gamma);
        out = {{"gamma", bound_gamma},
               {"delta", bound_delta},
               {"rho", r.rho},
               {"xstar", r.xstar},
               {"N", aec::num_colors(bound_gamma, bound_delta)},
               {"K", aec::quota(bound_gamma, bound_delta)}};
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    };
  });

  // --- colorval-mc -------------------------------------------------------
  auto* mc = app.add_subcommand(
      "colorval-mc", "Monte-Carlo ColorVal success rate against the bound");
  std::string mc_graph;
  std::vector<std::string> mc_triples;
  double mc_gamma = 1.569;
  std::size_t mc_trials = 10000;
  std::uint64_t mc_seed = 0;
  mc->add_option("--graph", mc_graph, "edge-list file")->required();
  mc->add_option("--triple", mc_triples,
                 "admissible triple e1:e2:k (repeatable)")
      ->required();
  mc->add_option("--gamma", mc_gamma, "palette parameter (default 1.569)");
  mc->add_option("--trials", mc_trials, "trial count (default 1e4)");
  mc->add_option("--seed", mc_seed, "master seed")->required();
  mc->callback([&] {
    action = [&]() -> int {
      const auto g = aec::Graph::parse(read_file(mc_graph));
      std::vector<aec::AdmissibleTriple> seq;
      for (const auto& text : mc_triples) seq.push_back(parse_triple(text));
      const auto result =
          aec::monte_carlo_success(g, seq, mc_gamma, mc_trials, mc_seed);
      json out = {
          {"triples", triples_json(seq)},
          {"trials", result.trials},
          {"estimate", result.estimate},
          {"stderr", result.std_error},
          {"bound", aec::colorval_success_bound(seq, mc_gamma, g.max_degree())},
          {"simplified_bound",
           aec::colorval_success_bound_relaxed(seq, mc_gamma, g.max_degree())},
          {"gamma", mc_gamma},
          {"seed", mc_seed},
      };
      std::cout << out.dump(2) << "\n";
      return 0;
    };
  });

  // --- forest ------------------------------------------------------------
  auto* forest = app.add_subcommand(
      "forest", "run the algorithm and dump the witness forest");
  std::string forest_graph;
  double forest_gamma = 1.569;
  std::uint64_t forest_seed = 0;
  std::size_t forest_cap = 1'000'000;
  forest->add_option("--graph", forest_graph, "edge-list file")->required();
  forest->add_option("--gamma", forest_gamma,
                     "palette parameter (default 1.569)");
  forest->add_option("--seed", forest_seed, "random seed")->required();
  forest->add_option("--step-cap", forest_cap, "step cap (default 1e6)");
  forest->callback([&] {
    action = [&]() -> int {
      const auto g = aec::Graph::parse(read_file(forest_graph));
      const auto res = aec::run(g, forest_gamma, forest_seed, forest_cap);
      if (!res.record.terminated) {
        std::cerr << "run hit the step cap; no witness forest\n";
        return 2;
      }
      const auto wf = aec::build_forest(res.record, g);
      std::cout << aec::format_forest(wf);
      std::cout << "encoding: " << aec::to_hex(aec::encode_forest(wf))
                << "\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return action();
  } catch (const aec::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aec::invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
