#pragma once

#include <type_traits>

#include "cmv/exprfield.hpp"

namespace cmv {

inline constexpr double kFrameStep = 1e-4;

/// Central difference of f along `dir` at p with one Richardson
/// extrapolation step (h and h/2). f may return double or Vec3.
template <class F>
auto directional_derivative(F&& f, const Point& p, const Vec3& dir, double h = kFrameStep) {
  using R = std::decay_t<decltype(f(p))>;
  auto central = [&](double step) -> R {
    const Point fwd = Point::from(p.vec() + step * dir);
    const Point bwd = Point::from(p.vec() - step * dir);
    return (f(fwd) - f(bwd)) / (2.0 * step);
  };
  const R coarse = central(h);
  const R fine = central(0.5 * h);
  return R((4.0 * fine - coarse) / 3.0);
}

}  // namespace cmv
