#include "eot/bench.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace eot {

namespace {

constexpr double kReducedCostTol = 1e-12;

// Basis of the transportation simplex: m + n - 1 cells forming a spanning
// tree over row nodes [0, m) and column nodes [m, m + n).
struct Basis {
  Index m, n;
  std::vector<bool> basic;  // row-major m x n
  Matrix flow;

  bool is_basic(Index i, Index j) const { return basic[static_cast<std::size_t>(i * n + j)]; }
  void set(Index i, Index j, bool b) { basic[static_cast<std::size_t>(i * n + j)] = b; }
};

Basis northwest_corner(const Vector& supply, const Vector& demand) {
  const Index m = supply.size(), n = demand.size();
  Basis b{m, n, std::vector<bool>(static_cast<std::size_t>(m * n), false), Matrix::Zero(m, n)};
  Vector s = supply, d = demand;
  Index i = 0, j = 0;
  while (i < m && j < n) {
    const double x = std::min(s[i], d[j]);
    b.flow(i, j) = std::max(0.0, x);
    b.set(i, j, true);
    s[i] -= x;
    d[j] -= x;
    if (i == m - 1 && j == n - 1) break;
    // Advance exactly one index per cell so the basis keeps m + n - 1 cells.
    if ((s[i] <= d[j] && i < m - 1) || j == n - 1) {
      ++i;
    } else {
      ++j;
    }
  }
  return b;
}

void potentials(const Basis& b, const Matrix& cost, Vector& u, Vector& v) {
  const Index m = b.m, n = b.n;
  u.setConstant(m, std::numeric_limits<double>::quiet_NaN());
  v.setConstant(n, std::numeric_limits<double>::quiet_NaN());
  u[0] = 0.0;
  std::queue<Index> frontier;  // node ids: rows [0, m), cols [m, m + n)
  frontier.push(0);
  while (!frontier.empty()) {
    const Index node = frontier.front();
    frontier.pop();
    if (node < m) {
      for (Index j = 0; j < n; ++j) {
        if (b.is_basic(node, j) && std::isnan(v[j])) {
          v[j] = cost(node, j) - u[node];
          frontier.push(m + j);
        }
      }
    } else {
      const Index j = node - m;
      for (Index i = 0; i < m; ++i) {
        if (b.is_basic(i, j) && std::isnan(u[i])) {
          u[i] = cost(i, j) - v[j];
          frontier.push(i);
        }
      }
    }
  }
}

// Tree path from row node `row` to column node `col`, as a list of cells.
std::vector<std::pair<Index, Index>> tree_path(const Basis& b, Index row, Index col) {
  const Index m = b.m, n = b.n;
  std::vector<Index> parent(static_cast<std::size_t>(m + n), -1);
  std::vector<bool> seen(static_cast<std::size_t>(m + n), false);
  std::queue<Index> frontier;
  frontier.push(row);
  seen[static_cast<std::size_t>(row)] = true;
  const Index target = m + col;
  while (!frontier.empty() && !seen[static_cast<std::size_t>(target)]) {
    const Index node = frontier.front();
    frontier.pop();
    if (node < m) {
      for (Index j = 0; j < n; ++j) {
        const auto id = static_cast<std::size_t>(m + j);
        if (b.is_basic(node, j) && !seen[id]) {
          seen[id] = true;
          parent[id] = node;
          frontier.push(m + j);
        }
      }
    } else {
      for (Index i = 0; i < m; ++i) {
        const auto id = static_cast<std::size_t>(i);
        if (b.is_basic(i, node - m) && !seen[id]) {
          seen[id] = true;
          parent[id] = node;
          frontier.push(i);
        }
      }
    }
  }
  std::vector<std::pair<Index, Index>> cells;
  for (Index node = target; node != row;) {
    const Index up = parent[static_cast<std::size_t>(node)];
    cells.push_back(node < m ? std::pair{node, up - m} : std::pair{up, node - m});
    node = up;
  }
  std::reverse(cells.begin(), cells.end());
  return cells;
}

}  // namespace

Matrix transportation_simplex(const Matrix& cost, const Vector& supply, const Vector& demand) {
  const Index m = supply.size(), n = demand.size();
  if (cost.rows() != m || cost.cols() != n) throw Error(ErrorCode::ShapeMismatch, "cost shape differs from marginals");
  Basis b = northwest_corner(supply, demand);
  Vector u, v;
  // Bland's rule bounds the number of pivots; the cap only guards bugs.
  const std::int64_t max_pivots = 1000000;
  for (std::int64_t pivot = 0; pivot < max_pivots; ++pivot) {
    potentials(b, cost, u, v);
    Index ei = -1, ej = -1;
    for (Index i = 0; i < m && ei < 0; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (!b.is_basic(i, j) && cost(i, j) - u[i] - v[j] < -kReducedCostTol) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei < 0) return b.flow;

    // Cycle: entering cell (+), then alternating -,+,... along the tree path
    // from row ei to column ej (the path has an odd number of cells).
    const auto path = tree_path(b, ei, ej);
    double theta = std::numeric_limits<double>::infinity();
    Index leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [i, j] = path[k];
      const double x = b.flow(i, j);
      const Index id = i * n + j;
      if (x < theta || (x == theta && id < leave)) {
        theta = x;
        leave = id;
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [i, j] = path[k];
      b.flow(i, j) += (k % 2 == 0) ? -theta : theta;
    }
    b.flow(ei, ej) = theta;
    b.set(ei, ej, true);
    b.set(leave / n, leave % n, false);
    b.flow(leave / n, leave % n) = 0.0;
  }
  throw Error(ErrorCode::DegenerateInput, "transportation simplex did not terminate");
}

double exact_ot_small(const CostMatrix& c, const SimplexVector& p, const SimplexVector& q) {
  const Index n = c.size();
  if (n > kExactOtMaxSize) throw Error(ErrorCode::TooLarge, "exact oracle is limited to n <= 32");
  if (p.size() != n || q.size() != n) throw Error(ErrorCode::ShapeMismatch, "marginal length differs from cost");
  if (n == 1) return c(0, 0);
  if (n == 2) {
    // X = [[t, p1 - t], [q1 - t, p2 - q1 + t]]; cost is affine in t.
    const double p1 = p[0], q1 = q[0], p2 = p[1];
    const double lo = std::max(0.0, p1 + q1 - 1.0);
    const double hi = std::min(p1, q1);
    const double slope = c(0, 0) - c(0, 1) - c(1, 0) + c(1, 1);
    const double t = slope > 0.0 ? lo : hi;
    return c(0, 0) * t + c(0, 1) * (p1 - t) + c(1, 0) * (q1 - t) + c(1, 1) * (p2 - q1 + t);
  }
  const Matrix x = transportation_simplex(c.entries(), p.values(), q.values());
  return c.entries().cwiseProduct(x).sum();
}

}  // namespace eot
