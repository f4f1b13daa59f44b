#pragma once

// Levi-Civita connection and Riemann curvature of a metric on one chart.
//
// Sign convention: R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, so that
// ⟨R(u,v)v,u⟩ is the sectional curvature of span(u,v) for orthonormal u, v.
// The fully lowered tensor is stored as R(i,j,k,l) = ⟨R(∂_i,∂_j)∂_k, ∂_l⟩.

#include <array>
#include <string_view>

#include "cmv/exprfield.hpp"

namespace cmv {

/// Symmetric 3x3 array of expressions; entries in coordinate order x, y, z.
class MetricField {
 public:
  MetricField() = default;
  /// Uses the upper triangle of `entries`.
  explicit MetricField(const std::array<std::array<ScalarFieldExpr, 3>, 3>& entries);

  const ScalarFieldExpr& operator()(int i, int j) const {
    return i <= j ? upper_[i][j] : upper_[j][i];
  }

  /// All six independent entries as 2-jets, symmetric-filled.
  std::array<std::array<Jet2, 3>, 3> eval(const Point& p, const ParamTable& params) const;
  Mat3 eval_value(const Point& p, const ParamTable& params) const;

 private:
  std::array<std::array<ScalarFieldExpr, 3>, 3> upper_;
};

struct MetricJet {
  Point point;
  Mat3 g;
  Mat3 g_inv;
  std::array<Mat3, 3> dg;                    // dg[k](i,j) = ∂_k g_ij
  std::array<std::array<Mat3, 3>, 3> d2g;    // d2g[k][l](i,j) = ∂_k ∂_l g_ij
  std::array<Mat3, 3> dg_inv;                // dg_inv[k](i,j) = ∂_k g^ij

  double inner(const Vec3& u, const Vec3& v) const { return u.dot(g * v); }
  double norm(const Vec3& u) const { return std::sqrt(inner(u, u)); }
};

/// Throws Error{NotPositiveDefinite} when a leading principal minor of g is
/// at most 1e-12.
MetricJet metric_jet(const MetricField& g, const Point& p, const ParamTable& params);

/// Throws Error{NotPositiveDefinite}; shared with the jet-level helpers.
void require_positive_definite(const Mat3& g, const Point& p);

struct Christoffel {
  std::array<Mat3, 3> upper;  // upper[l](i,j) = Γ^l_ij
  std::array<Mat3, 3> lower;  // lower[m](i,j) = Γ_ij,m

  /// Γ(u, v)^l = Γ^l_ij u^i v^j
  Vec3 contract(const Vec3& u, const Vec3& v) const;
};

Christoffel christoffel(const MetricJet& mj);

class RiemannTensor {
 public:
  double operator()(int i, int j, int k, int l) const { return r_[i][j][k][l]; }
  double& operator()(int i, int j, int k, int l) { return r_[i][j][k][l]; }

  /// ⟨R(a,b)c, d⟩
  double eval(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) const;

 private:
  double r_[3][3][3][3] = {};
};

/// ∂Γ is assembled analytically from g, ∂g, ∂²g, g⁻¹ and ∂(g⁻¹).
RiemannTensor riemann_tensor(const MetricJet& mj);

/// Throws Error{DegeneratePlane} when the Gram determinant is at most 1e-12.
double sectional_curvature(const MetricJet& mj, const Vec3& u, const Vec3& v);
double sectional_curvature(const MetricJet& mj, const RiemannTensor& r, const Vec3& u,
                           const Vec3& v);

enum class BivectorOrdering {
  Lemma,     // (X∧Y, X∧N, Y∧N) for frame (X, Y, N)
  Section4,  // (e1∧e2, e1∧e3, e2∧e3) for frame (e1, e2, e3)
};

std::string_view to_string(BivectorOrdering o);

using Frame3 = std::array<Vec3, 3>;

struct CurvatureMatrix {
  Mat3 m = Mat3::Zero();
  BivectorOrdering ordering = BivectorOrdering::Lemma;
  Frame3 frame{};
};

/// M(a,b) = ⟨R(u_a, v_a) v_b, u_b⟩ for bivectors u∧v = (f0∧f1, f0∧f2, f1∧f2).
/// Both orderings use this index pattern; the tag records what the frame
/// vectors mean. Throws Error{FrameNotOrthonormal} when the Gram matrix is
/// more than 1e-9 from the identity.
CurvatureMatrix curvature_matrix(const MetricJet& mj, const Frame3& frame,
                                 BivectorOrdering ordering);
CurvatureMatrix curvature_matrix(const MetricJet& mj, const RiemannTensor& r,
                                 const Frame3& frame, BivectorOrdering ordering);

/// Maximum deviation of the frame's Gram matrix from the identity.
double orthonormality_defect(const MetricJet& mj, const Frame3& frame);

/// Vector field given by three component expressions.
using VectorFieldExpr = std::array<ScalarFieldExpr, 3>;

/// (∇_X Y)^l = X^i ∂_i Y^l + Γ^l_ij X^i Y^j at mj.point.
Vec3 covariant_derivative(const MetricJet& mj, const VectorFieldExpr& x,
                          const VectorFieldExpr& y, const ParamTable& params);

/// Same, for a field known by its value and Jacobian dy(l,i) = ∂_i Y^l.
Vec3 covariant_derivative(const Christoffel& gamma, const Vec3& x, const Vec3& y,
                          const Mat3& dy);

}  // namespace cmv
