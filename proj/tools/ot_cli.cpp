#include "eot/bench.hpp"
#include "eot/core.hpp"
#include "eot/io.hpp"
#include "eot/pdasmd.hpp"
#include "eot/sinkhorn.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct EpsArgs {
  std::optional<double> abs;
  std::optional<double> rel;

  // Resolves to an absolute accuracy for the given cost scale.
  double resolve(double cost_scale) const {
    if (abs && rel) throw eot::Error(eot::ErrorCode::BadParameter, "give either --eps or --eps-rel, not both");
    if (abs) return *abs;
    if (rel) return *rel * cost_scale;
    throw eot::Error(eot::ErrorCode::BadParameter, "one of --eps or --eps-rel is required");
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw eot::Error(eot::ErrorCode::FileNotFound, "cannot write '" + path + "'");
  out << text;
}

int finish_bench(const std::vector<eot::ExperimentRecord>& recs, const std::string& csv) {
  std::ostringstream os;
  eot::write_csv(os, recs);
  emit(csv, os.str());
  for (const auto& r : recs) {
    if (!r.converged) {
      std::cerr << "warning: " << r.algo << " n=" << r.n << " seed=" << r.seed << " did not converge\n";
      return kExitNotConverged;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic optimal transport solvers and complexity benchmarks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_path, problem_path, csv_path;
  EpsArgs eps;
  int jobs = 1;
  bool wall_clock = false;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "Random seed")->envname("OT_SEED"); };
  auto add_eps = [&](CLI::App* sub) {
    sub->add_option("--eps", eps.abs, "Target accuracy in cost units");
    sub->add_option("--eps-rel", eps.rel, "Target accuracy as a fraction of max cost");
  };
  auto add_bench = [&](CLI::App* sub) {
    sub->add_option("--seeds", seeds, "Seeds to average over")->delimiter(',');
    sub->add_option("--csv", csv_path, "Output CSV file (stdout if omitted)");
    sub->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
    sub->add_flag("--wall-clock", wall_clock, "Record wall time (output is then not reproducible)");
  };

  Eigen::Index side = 0;
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic image-pair problem");
  gen->add_option("--side", side, "Image side length (n = side^2)")->required()->check(CLI::Range(2, 1000));
  add_seed(gen);
  gen->add_option("--out", out_path, "Output JSON file")->required();

  std::string algo = "pdasmd", norm = "linf";
  std::int64_t batch = 1;
  auto* solve = app.add_subcommand("solve", "Compute an approximate OT plan");
  solve->add_option("--algo", algo, "Solver")
      ->check(CLI::IsMember({"pdasmd", "pdasmd-b", "sinkhorn", "stoch-sinkhorn"}));
  solve->add_option("--norm", norm, "Geometry for PDASMD")->check(CLI::IsMember({"l2", "linf"}));
  add_eps(solve);
  solve->add_option("--batch", batch, "Batch size for pdasmd-b")->check(CLI::PositiveNumber);
  add_seed(solve);
  solve->add_option("--problem", problem_path, "Problem JSON file")->required();
  solve->add_option("--out", out_path, "Output JSON file (stdout if omitted)");

  std::vector<Eigen::Index> sides = {4, 6, 8, 10};
  std::vector<std::string> algos = {"pdasmd_l2", "pdasmd_linf", "sinkhorn", "stochastic_sinkhorn"};
  auto* bench_n = app.add_subcommand("bench-n", "Operation count versus problem size");
  bench_n->add_option("--sides", sides, "Image sides")->delimiter(',');
  bench_n->add_option("--algos", algos, "Algorithms")->delimiter(',');
  add_eps(bench_n);
  add_bench(bench_n);

  Eigen::Index bench_side = 8;
  std::vector<std::int64_t> batches = {1, 2, 4, 8, 16};
  auto* bench_b = app.add_subcommand("bench-batch", "Operation count versus batch size (PDASMD, linf)");
  bench_b->add_option("--side", bench_side, "Image side");
  bench_b->add_option("--batches", batches, "Batch sizes")->delimiter(',');
  add_eps(bench_b);
  add_bench(bench_b);

  std::vector<double> eps_list, eps_rel_list;
  auto* bench_e = app.add_subcommand("bench-eps", "Operation count versus accuracy");
  bench_e->add_option("--side", bench_side, "Image side");
  bench_e->add_option("--eps-list", eps_list, "Accuracies in cost units")->delimiter(',');
  bench_e->add_option("--eps-rel-list", eps_rel_list, "Accuracies as fractions of max cost")->delimiter(',');
  bench_e->add_option("--algos", algos, "Algorithms")->delimiter(',');
  add_bench(bench_e);

  auto* oracle = app.add_subcommand("oracle", "Exact OT value for n <= 32");
  oracle->add_option("--problem", problem_path, "Problem JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    eot::ExperimentOptions opts;
    opts.jobs = jobs;
    opts.wall_clock = wall_clock;

    if (gen->parsed()) {
      eot::io::write_problem(out_path, eot::image_instance(side, seed));
      return kExitOk;
    }

    if (solve->parsed()) {
      const eot::OtInstance inst = eot::io::read_problem(problem_path);
      const double e = eps.resolve(inst.cost.max_abs());
      eot::ApproxResult res;
      if (algo == "pdasmd" || algo == "pdasmd-b") {
        if (algo == "pdasmd" && batch != 1)
          throw eot::Error(eot::ErrorCode::BadParameter, "--batch needs --algo pdasmd-b");
        eot::SolverConfig cfg;
        cfg.norm_kind = norm == "l2" ? eot::NormKind::L2 : eot::NormKind::LInf;
        cfg.batch = batch;
        cfg.seed = seed;
        res = eot::approximate_ot(inst.cost, inst.p, inst.q, e, cfg);
      } else if (algo == "sinkhorn") {
        res = eot::approximate_ot_sinkhorn(inst.cost, inst.p, inst.q, e);
      } else {
        res = eot::approximate_ot_stochastic(inst.cost, inst.p, inst.q, e, seed);
      }
      nlohmann::json j = eot::io::plan_to_json(res.plan);
      j["algo"] = algo;
      if (algo.rfind("pdasmd", 0) == 0) j["norm"] = norm;
      j["batch"] = batch;
      j["eps"] = e;
      j["eta"] = res.params.eta;
      j["seed"] = seed;
      j["converged"] = res.converged;
      j["cost"] = eot::transport_cost(inst.cost, res.plan);
      j["marginal_residual"] = eot::marginal_residual(res.plan, inst.p, inst.q);
      j["iterations"] = res.solve.iterations;
      j["ops_total"] = res.ops.total();
      emit(out_path, j.dump(1) + "\n");
      if (!res.converged) {
        std::cerr << "warning: solver hit its iteration cap before reaching the stopping criteria\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (bench_n->parsed()) {
      const double e = eps.resolve(1.0);
      opts.eps_relative = eps.rel.has_value();
      std::vector<eot::ExperimentRecord> all;
      for (const auto& a : algos) {
        auto recs = eot::run_scaling_experiment(sides, e, eot::parse_algo(a), seeds, opts);
        all.insert(all.end(), recs.begin(), recs.end());
      }
      eot::sort_records(all);
      return finish_bench(all, csv_path);
    }

    if (bench_b->parsed()) {
      const double e = eps.resolve(1.0);
      opts.eps_relative = eps.rel.has_value();
      return finish_bench(eot::run_batch_experiment(bench_side, batches, e, seeds, opts), csv_path);
    }

    if (bench_e->parsed()) {
      if (eps_list.empty() == eps_rel_list.empty())
        throw eot::Error(eot::ErrorCode::BadParameter, "give exactly one of --eps-list or --eps-rel-list");
      opts.eps_relative = !eps_rel_list.empty();
      std::vector<eot::Algo> parsed;
      for (const auto& a : algos) parsed.push_back(eot::parse_algo(a));
      return finish_bench(
          eot::run_eps_experiment(bench_side, opts.eps_relative ? eps_rel_list : eps_list, parsed, seeds, opts),
          csv_path);
    }

    if (oracle->parsed()) {
      const eot::OtInstance inst = eot::io::read_problem(problem_path);
      std::printf("%.15g\n", eot::exact_ot_small(inst.cost, inst.p, inst.q));
      return kExitOk;
    }
  } catch (const eot::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
