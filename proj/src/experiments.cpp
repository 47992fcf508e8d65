#include "eot/bench.hpp"

#include "eot/core.hpp"
#include "eot/pdasmd.hpp"
#include "eot/sinkhorn.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

namespace eot {

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two points");
  const double k = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorCode::DegenerateInput, "log-log fit needs positive data");
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw Error(ErrorCode::DegenerateInput, "need at least two distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

SlopeFit slope_of_mean_ops(const std::vector<ExperimentRecord>& records,
                           const std::function<double(const ExperimentRecord&)>& x_of) {
  std::map<double, std::pair<double, int>> groups;
  for (const auto& r : records) {
    auto& g = groups[x_of(r)];
    g.first += static_cast<double>(r.ops_total);
    g.second += 1;
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [x, g] : groups) points.emplace_back(x, g.first / g.second);
  return fit_loglog_slope(points);
}

const char* to_string(Algo algo) {
  switch (algo) {
    case Algo::PdasmdL2: return "pdasmd_l2";
    case Algo::PdasmdLInf: return "pdasmd_linf";
    case Algo::Sinkhorn: return "sinkhorn";
    case Algo::StochasticSinkhorn: return "stochastic_sinkhorn";
  }
  return "unknown";
}

Algo parse_algo(const std::string& name) {
  for (Algo a : {Algo::PdasmdL2, Algo::PdasmdLInf, Algo::Sinkhorn, Algo::StochasticSinkhorn}) {
    if (name == to_string(a)) return a;
  }
  throw Error(ErrorCode::BadParameter, "unknown algorithm '" + name + "'");
}

ExperimentRecord run_cell(Algo algo, Index side, std::int64_t batch, double eps, std::uint64_t seed,
                          const ExperimentOptions& opts) {
  const OtInstance inst = image_instance(side, seed);
  const double abs_eps = opts.eps_relative ? eps * inst.cost.max_abs() : eps;
  const auto start = std::chrono::steady_clock::now();

  ApproxResult res;
  switch (algo) {
    case Algo::PdasmdL2:
    case Algo::PdasmdLInf: {
      SolverConfig cfg;
      cfg.norm_kind = algo == Algo::PdasmdL2 ? NormKind::L2 : NormKind::LInf;
      cfg.batch = batch;
      cfg.seed = seed;
      res = approximate_ot(inst.cost, inst.p, inst.q, abs_eps, cfg);
      break;
    }
    case Algo::Sinkhorn:
      res = approximate_ot_sinkhorn(inst.cost, inst.p, inst.q, abs_eps);
      break;
    case Algo::StochasticSinkhorn:
      res = approximate_ot_stochastic(inst.cost, inst.p, inst.q, abs_eps, seed);
      break;
  }
  const auto stop = std::chrono::steady_clock::now();

  ExperimentRecord rec;
  rec.algo = to_string(algo);
  rec.n = static_cast<std::int64_t>(inst.cost.size());
  rec.batch = batch;
  rec.eps = abs_eps;
  rec.ops_total = res.ops.total();
  rec.iterations = res.solve.iterations;
  rec.residual = res.solve.residual_history.empty() ? 0.0 : res.solve.residual_history.back();
  rec.cost = transport_cost(inst.cost, res.plan);
  rec.seed = seed;
  rec.wall_ms = opts.wall_clock ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
  rec.converged = res.converged;
  return rec;
}

namespace {

struct Cell {
  Algo algo;
  Index side;
  std::int64_t batch;
  double eps;
  std::uint64_t seed;
};

std::vector<ExperimentRecord> run_cells(const std::vector<Cell>& cells, const ExperimentOptions& opts) {
  std::vector<ExperimentRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const Cell& c = cells[k];
      out[k] = run_cell(c.algo, c.side, c.batch, c.eps, c.seed, opts);
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  sort_records(out);
  return out;
}

}  // namespace

std::vector<ExperimentRecord> run_scaling_experiment(const std::vector<Index>& sides, double eps, Algo algo,
                                                     const std::vector<std::uint64_t>& seeds,
                                                     const ExperimentOptions& opts) {
  std::vector<Cell> cells;
  for (Index side : sides)
    for (auto seed : seeds) cells.push_back({algo, side, 1, eps, seed});
  return run_cells(cells, opts);
}

std::vector<ExperimentRecord> run_batch_experiment(Index side, const std::vector<std::int64_t>& batches, double eps,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const ExperimentOptions& opts) {
  std::vector<Cell> cells;
  for (auto b : batches) {
    if (b < 1 || b > side * side) throw Error(ErrorCode::BadParameter, "batch size must lie in [1, n]");
    for (auto seed : seeds) cells.push_back({Algo::PdasmdLInf, side, b, eps, seed});
  }
  return run_cells(cells, opts);
}

std::vector<ExperimentRecord> run_eps_experiment(Index side, const std::vector<double>& eps_list,
                                                 const std::vector<Algo>& algos,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 const ExperimentOptions& opts) {
  std::vector<Cell> cells;
  for (Algo a : algos)
    for (double e : eps_list)
      for (auto seed : seeds) cells.push_back({a, side, 1, e, seed});
  return run_cells(cells, opts);
}

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.algo, a.n, a.batch, a.eps, a.seed) < std::tie(b.algo, b.n, b.batch, b.eps, b.seed);
  });
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%.17g,%llu,%lld,%.17g,%.17g,%llu,%.17g\n", r.algo.c_str(),
                  static_cast<long long>(r.n), static_cast<long long>(r.batch), r.eps,
                  static_cast<unsigned long long>(r.ops_total), static_cast<long long>(r.iterations), r.residual,
                  r.cost, static_cast<unsigned long long>(r.seed), r.wall_ms);
    os << buf;
  }
}

}  // namespace eot
