#pragma once

// Seeded sampling and grids. All randomness in the project comes from one
// 64-bit seed through splitmix64 so sample sets are reproducible anywhere.

#include <cstdint>
#include <vector>

#include "cmv/exprfield.hpp"

namespace cmv {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();

  bool valid() const { return (min.array() <= max.array()).all() && min.allFinite() && max.allFinite(); }
};

inline Point uniform_point(SplitMix64& rng, const Box& box) {
  return {rng.uniform(box.min[0], box.max[0]), rng.uniform(box.min[1], box.max[1]),
          rng.uniform(box.min[2], box.max[2])};
}

inline std::vector<Point> uniform_points(std::uint64_t seed, const Box& box, std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(uniform_point(rng, box));
  return pts;
}

inline Vec3 uniform_vector(SplitMix64& rng) {
  return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

/// n points per axis including both ends, x fastest. n == 1 gives the centre.
inline std::vector<Point> grid_points(const Box& box, int n) {
  std::vector<Point> pts;
  if (n <= 0) return pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  auto coord = [&](int axis, int i) {
    if (n == 1) return 0.5 * (box.min[axis] + box.max[axis]);
    const double t = static_cast<double>(i) / (n - 1);
    return box.min[axis] + t * (box.max[axis] - box.min[axis]);
  };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) pts.push_back({coord(0, i), coord(1, j), coord(2, k)});
  return pts;
}

}  // namespace cmv
