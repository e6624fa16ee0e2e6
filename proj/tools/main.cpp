#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "submod/algorithms.hpp"
#include "submod/bench.hpp"
#include "submod/bounds.hpp"
#include "submod/objectives.hpp"

namespace {

int cmd_run(const std::string& spec_path) {
  const auto spec = submod::ExperimentSpec::load(spec_path);
  const auto records = submod::run_experiment(spec);
  std::printf("wrote %zu records to %s\n", records.size(),
              spec.output_path.c_str());
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& axis_name) {
  const auto spec = submod::ExperimentSpec::load(spec_path);
  const auto axis = axis_name == "kappa" ? submod::SweepAxis::kappa
                                         : submod::SweepAxis::epsilon;
  const auto rows = submod::sweep(spec, axis);
  std::printf("wrote %zu aggregate rows next to %s\n", rows.size(),
              spec.output_path.c_str());
  return 0;
}

int cmd_verify(const std::string& spec_path) {
  const auto spec = submod::ExperimentSpec::load(spec_path);
  const auto report = submod::verify(spec);
  for (const auto& c : report.checks)
    std::printf("[%s] %-32s measured=%.6g required=%.6g (%s)\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                c.required, c.detail.c_str());
  return report.all_pass() ? 0 : 2;
}

int cmd_bounds(int n, int kappa, double epsilon, double delta, double alpha,
               double range_r, double phi) {
  namespace b = submod::bounds;
  std::printf("n=%d\nkappa=%d\nepsilon=%.17g\ndelta=%.17g\nalpha=%.17g\n"
              "range_r=%.17g\n",
              n, kappa, epsilon, delta, alpha, range_r);
  std::printf("h_alpha=%.17g\n", b::h_alpha(kappa, alpha));
  std::printf("rounds_upper=%d\n", b::rounds_upper(kappa, alpha));
  const auto n1 = b::n1_budget(n, delta, epsilon, range_r);
  const auto n2 = b::n2_budget(n, delta, epsilon, range_r, kappa, alpha);
  std::printf("n1_budget=%lld\n", static_cast<long long>(n1));
  std::printf("n2_budget=%lld\n", static_cast<long long>(n2));
  std::printf("confidence_radius_t1=%.17g\n",
              b::confidence_radius(1, n, delta, range_r, kappa, alpha));
  std::printf("confidence_radius_t100=%.17g\n",
              b::confidence_radius(100, n, delta, range_r, kappa, alpha));
  std::printf("confidence_radius_at_n2=%.17g\n",
              b::confidence_radius(n2, n, delta, range_r, kappa, alpha));
  if (phi > 0.0) {
    const auto detail =
        b::call_sample_bound_detail(phi, n, delta, range_r, kappa, alpha,
                                      epsilon);
    std::printf("call_bound_phi=%.17g\n", phi);
    std::printf("call_bound=%lld\n", static_cast<long long>(detail.bound));
    std::printf("call_bound_adaptive_branch=%.17g\n", detail.adaptive_real);
    std::printf("call_bound_clamped=%d\n", detail.clamped ? 1 : 0);
  }
  return 0;
}

int cmd_gen_coverage(int items, int tags, std::uint64_t seed, double zipf,
                     int min_tags, int max_tags, const std::string& out) {
  const auto obj =
      submod::CoverageObjective::generate(items, tags, seed, zipf, min_tags,
                                          max_tags);
  obj.save(out);
  std::printf("wrote %d items over %d tags to %s\n", obj.universe_size(),
              obj.tag_universe_size(), out.c_str());
  return 0;
}

int cmd_gen_graph(int nodes, int edges, std::uint64_t seed,
                  const std::string& out) {
  const auto graph = submod::InfluenceGraph::generate(nodes, edges, seed);
  graph.save(out);
  std::printf("wrote %d nodes, %zu edges to %s\n", graph.node_count,
              graph.edges.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy-submod: cardinality-constrained submodular maximization "
               "from noisy marginal-gain samples"};
  app.require_subcommand(1);

  std::string spec_path;
  auto* run = app.add_subcommand("run", "run an experiment spec");
  run->add_option("spec", spec_path, "spec file")->required();

  std::string sweep_spec, axis = "epsilon";
  auto* sw = app.add_subcommand("sweep", "run a grid sweep and aggregate");
  sw->add_option("spec", sweep_spec, "spec file")->required();
  sw->add_option("--axis", axis, "epsilon or kappa")
      ->check(CLI::IsMember({"epsilon", "kappa"}));

  std::string verify_spec;
  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("spec", verify_spec, "spec file")->required();

  int n = 60, kappa = 10;
  double epsilon = 0.1, delta = 0.2, alpha = 0.2, range_r = 2.0, phi = 0.0;
  auto* bnd = app.add_subcommand("bounds", "print the closed-form quantities");
  bnd->add_option("--n", n, "universe size")->required();
  bnd->add_option("--kappa", kappa, "budget")->required();
  bnd->add_option("--epsilon", epsilon, "precision")->required();
  bnd->add_option("--delta", delta, "failure probability")->required();
  bnd->add_option("--alpha", alpha, "threshold decay")->required();
  bnd->add_option("--R", range_r, "sample range scale")->required();
  bnd->add_option("--phi", phi, "also print the per-call bound at this gap");

  auto* gen = app.add_subcommand("gen", "generate synthetic datasets");
  gen->require_subcommand(1);
  int items = 60, tags = 30, min_tags = 2, max_tags = 6;
  std::uint64_t gen_seed = 1;
  double zipf = 1.0;
  std::string gen_out;
  auto* gen_cov = gen->add_subcommand("coverage", "tagged-item dataset");
  gen_cov->add_option("--items", items, "item count");
  gen_cov->add_option("--tags", tags, "tag universe size");
  gen_cov->add_option("--seed", gen_seed, "generator seed");
  gen_cov->add_option("--zipf", zipf, "tag popularity exponent");
  gen_cov->add_option("--min-tags", min_tags, "min tags per item");
  gen_cov->add_option("--max-tags", max_tags, "max tags per item");
  gen_cov->add_option("-o,--output", gen_out, "output path")->required();
  int nodes = 29, edges = 116;
  auto* gen_gr = gen->add_subcommand("graph", "weighted directed graph");
  gen_gr->add_option("--nodes", nodes, "node count");
  gen_gr->add_option("--edges", edges, "edge count");
  gen_gr->add_option("--seed", gen_seed, "generator seed");
  gen_gr->add_option("-o,--output", gen_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(spec_path);
    if (sw->parsed()) return cmd_sweep(sweep_spec, axis);
    if (ver->parsed()) return cmd_verify(verify_spec);
    if (bnd->parsed())
      return cmd_bounds(n, kappa, epsilon, delta, alpha, range_r, phi);
    if (gen->parsed()) {
      if (gen_cov->parsed())
        return cmd_gen_coverage(items, tags, gen_seed, zipf, min_tags,
                                max_tags, gen_out);
      return cmd_gen_graph(nodes, edges, gen_seed, gen_out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
