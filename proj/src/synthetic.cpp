#include "eot/bench.hpp"
#include "eot/rng.hpp"

#include <cmath>

namespace eot {

ImageMarginal gen_synthetic_image(Index side, std::uint64_t seed) {
  if (side < 2) throw Error(ErrorCode::TooSmallProblem, "image side must be at least 2");
  Rng rng(seed);
  ImageMarginal img;
  img.side = side;
  img.fg_side = std::max<Index>(1, static_cast<Index>(std::floor(static_cast<double>(side) * std::sqrt(0.2))));
  const auto span = static_cast<std::uint64_t>(side - img.fg_side + 1);
  img.fg_row = static_cast<Index>(rng.index(span));
  img.fg_col = static_cast<Index>(rng.index(span));

  img.pixels.resize(side, side);
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      const bool fg = r >= img.fg_row && r < img.fg_row + img.fg_side && c >= img.fg_col && c < img.fg_col + img.fg_side;
      img.pixels(r, c) = fg ? rng.uniform(0.0, 3.0) : rng.uniform(0.0, 1.0);
    }
  }

  const Index n = side * side;
  Vector flat = Eigen::Map<const Vector>(img.pixels.data(), n);
  flat /= flat.sum();
  flat.array() += 1e-6 / static_cast<double>(n);
  flat /= flat.sum();
  Index k = 0;
  flat.maxCoeff(&k);
  flat[k] += 1.0 - flat.sum();
  img.normalized = SimplexVector(std::move(flat));
  return img;
}

OtInstance image_pair_to_problem(const ImageMarginal& a, const ImageMarginal& b) {
  if (a.side != b.side) throw Error(ErrorCode::ShapeMismatch, "images differ in side length");
  const Index s = a.side;
  const Index n = s * s;
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      c(i, j) = static_cast<double>(std::abs(i / s - j / s) + std::abs(i % s - j % s));
    }
  }
  return {a.normalized, b.normalized, CostMatrix(std::move(c))};
}

OtInstance image_instance(Index side, std::uint64_t seed) {
  const auto s = static_cast<std::uint64_t>(side);
  return image_pair_to_problem(gen_synthetic_image(side, mix_seed(seed, 2 * s)),
                               gen_synthetic_image(side, mix_seed(seed, 2 * s + 1)));
}

OtInstance random_instance(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) c(i, j) = rng.uniform();
  auto simplex = [&] {
    Vector w(n);
    for (Index i = 0; i < n; ++i) w[i] = 1.0 - rng.uniform();
    w /= w.sum();
    Index k = 0;
    w.maxCoeff(&k);
    w[k] += 1.0 - w.sum();
    return SimplexVector(std::move(w));
  };
  SimplexVector p = simplex();
  SimplexVector q = simplex();
  return {std::move(p), std::move(q), CostMatrix(std::move(c))};
}

}  // namespace eot
