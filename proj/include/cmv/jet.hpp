#pragma once

// Truncated Taylor arithmetic on a 3-dimensional chart.
//
// Jet2 carries value, gradient and Hessian and is what expression trees
// evaluate to. Jet1 carries value and gradient only; it is used for derived
// fields (inverse metric, unit normal, frame fields) whose first derivatives
// are needed exactly but whose second derivatives would require third
// derivatives of the inputs.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace cmv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Symmetric 3x3 stored as (xx, xy, xz, yy, yz, zz).
class Sym3 {
 public:
  Sym3() = default;

  static Sym3 from_matrix(const Mat3& m) {
    Sym3 s;
    s.c_ = {m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)};
    return s;
  }

  double operator()(int i, int j) const { return c_[index(i, j)]; }
  double& operator()(int i, int j) { return c_[index(i, j)]; }

  Mat3 matrix() const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  const std::array<double, 6>& components() const { return c_; }

  Sym3& operator+=(const Sym3& o) {
    for (int i = 0; i < 6; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Sym3& operator-=(const Sym3& o) {
    for (int i = 0; i < 6; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Sym3& operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  /// a b^T + b a^T
  static Sym3 sym_outer(const Vec3& a, const Vec3& b) {
    Sym3 s;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) s(i, j) = a[i] * b[j] + a[j] * b[i];
    return s;
  }

 private:
  static int index(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int base[3] = {0, 3, 5};
    return base[i] + (j - i);
  }

  std::array<double, 6> c_{};
};

inline Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
inline Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }
inline Sym3 operator*(double s, Sym3 a) { return a *= s; }

struct Jet1 {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();

  Jet1() = default;
  Jet1(double v) : value(v) {}  // NOLINT: constants promote implicitly
  Jet1(double v, const Vec3& g) : value(v), grad(g) {}

  static Jet1 coordinate(int axis, double v) {
    Jet1 j(v);
    j.grad[axis] = 1.0;
    return j;
  }
};

inline Jet1 operator-(const Jet1& a) { return {-a.value, -a.grad}; }
inline Jet1 operator+(const Jet1& a, const Jet1& b) {
  return {a.value + b.value, a.grad + b.grad};
}
inline Jet1 operator-(const Jet1& a, const Jet1& b) {
  return {a.value - b.value, a.grad - b.grad};
}
inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return {a.value * b.value, a.value * b.grad + b.value * a.grad};
}
inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  const double q = a.value / b.value;
  return {q, (a.grad - q * b.grad) / b.value};
}
inline Jet1 sqrt(const Jet1& a) {
  const double r = std::sqrt(a.value);
  return {r, a.grad / (2.0 * r)};
}

struct Jet2 {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  Sym3 hess;

  Jet2() = default;
  Jet2(double v) : value(v) {}  // NOLINT
  Jet2(double v, const Vec3& g, const Sym3& h) : value(v), grad(g), hess(h) {}

  static Jet2 coordinate(int axis, double v) {
    Jet2 j(v);
    j.grad[axis] = 1.0;
    return j;
  }

  Jet1 first_order() const { return {value, grad}; }

  /// The partial derivative along `axis`, itself known to first order.
  Jet1 partial(int axis) const {
    return {grad[axis], Vec3(hess(axis, 0), hess(axis, 1), hess(axis, 2))};
  }
};

inline Jet2 operator-(const Jet2& a) {
  return {-a.value, -a.grad, -1.0 * a.hess};
}
inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.value * b.grad + b.value * a.grad,
          a.value * b.hess + b.value * a.hess + Sym3::sym_outer(a.grad, b.grad)};
}

/// Chain rule for a scalar function with derivatives d1 = phi'(a), d2 = phi''(a).
inline Jet2 compose(const Jet2& a, double phi, double d1, double d2) {
  Sym3 h = d1 * a.hess;
  h += (0.5 * d2) * Sym3::sym_outer(a.grad, a.grad);
  return {phi, d1 * a.grad, h};
}

}  // namespace cmv
