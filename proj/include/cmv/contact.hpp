#pragma once

// Contact forms, Reeb fields and metric compatibility on one chart.

#include <optional>
#include <string>
#include <vector>

#include "cmv/riemann.hpp"

namespace cmv {

class OneFormField {
 public:
  OneFormField() = default;
  explicit OneFormField(std::array<ScalarFieldExpr, 3> components)
      : c_(std::move(components)) {}

  const ScalarFieldExpr& operator[](int i) const { return c_[i]; }
  std::array<Jet2, 3> eval(const Point& p, const ParamTable& params) const;

 private:
  std::array<ScalarFieldExpr, 3> c_;  // coefficients of dx, dy, dz
};

/// dα at a point: m(i,j) = ∂_i α_j − ∂_j α_i, dα(u,v) = uᵀ m v.
struct TwoFormValue {
  Mat3 m = Mat3::Zero();
  double operator()(const Vec3& u, const Vec3& v) const { return u.dot(m * v); }
};

TwoFormValue exterior_derivative(const OneFormField& alpha, const Point& p,
                                 const ParamTable& params);

struct ContactSample {
  Point point;
  double density = 0.0;  // α∧dα = density · dx∧dy∧dz
  bool contact = false;  // |density| > 1e-9
};

std::vector<ContactSample> is_contact(const OneFormField& alpha,
                                      const std::vector<Point>& points,
                                      const ParamTable& params = {});

/// Throws Error{NotContact} when α∧dα vanishes at p.
Vec3 reeb_field(const OneFormField& alpha, const Point& p, const ParamTable& params = {});

/// A vector field known at one point to first order: value and
/// jacobian(l, i) = ∂_i V^l.
struct FieldJet {
  Vec3 value = Vec3::Zero();
  Mat3 jacobian = Mat3::Zero();

  FieldJet operator-() const { return {-value, -jacobian}; }
};

/// [U, V] at the point.
Vec3 lie_bracket(const FieldJet& u, const FieldJet& v);

/// Everything about a (metric, 1-form) pair that is known exactly at a point
/// from the 2-jets of their coefficients.
struct ContactGeometry {
  Point point;
  MetricJet metric;
  Christoffel gamma;
  Vec3 alpha = Vec3::Zero();
  Mat3 alpha_jacobian = Mat3::Zero();  // (i, k) = ∂_k α_i
  TwoFormValue dalpha;
  double density = 0.0;
  std::optional<FieldJet> reeb;  // absent where α is not contact
  Vec3 alpha_sharp = Vec3::Zero();
  double alpha_sharp_norm = 0.0;
  FieldJet normal;  // α♯ / |α♯|, the unit normal of ker α
  FieldJet e2;      // g-orthonormal frame of ker α with dα(e2, e3) ≥ 0
  FieldJet e3;
  double k = 0.0;  // dα(e2, e3)

  double inner(const Vec3& u, const Vec3& v) const { return metric.inner(u, v); }
  /// ∇_u V for a field known by its jet.
  Vec3 nabla(const Vec3& u, const FieldJet& v) const {
    return covariant_derivative(gamma, u, v.value, v.jacobian);
  }
};

/// Throws Error{NotPositiveDefinite}; α need not be contact.
ContactGeometry contact_geometry(const MetricField& g, const OneFormField& alpha,
                                 const Point& p, const ParamTable& params = {});

struct CompatPoint {
  Point point;
  Vec3 reeb = Vec3::Zero();
  Vec3 alpha_sharp = Vec3::Zero();
  double alpha_sharp_norm = 0.0;
  double unit_normal_defect = 0.0;  // max(|α♯ − N|∞, | |α♯| − 1 |)
  bool unit_normal = false;
  Vec3 e2 = Vec3::Zero();
  Vec3 e3 = Vec3::Zero();
  double k = 0.0;
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  // in the (e2, e3) frame
  double j_squared_defect = 0.0;                // |J² + I|∞
  double calibration_defect = 0.0;              // max |k⟨u,Jv⟩ − dα(u,v)| on the frame
  double geodesic_defect = 0.0;                 // |∇_N N|_g
  double mean_curvature = 0.0;
};

struct CompatReport {
  std::vector<CompatPoint> points;
  double k_fit = 0.0;  // mean of the per-point k
  double k_min = 0.0;
  double k_max = 0.0;
  bool k_constant = false;
  bool is_compatible = false;
  std::vector<std::string> failed_predicates;  // unit-normal, j-structure, ...
};

inline constexpr double kUnitNormalTol = 1e-9;
inline constexpr double kStructureTol = 1e-9;
inline constexpr double kMinimalityTol = 1e-8;
inline constexpr double kConstancyTol = 1e-8;

/// Checks ⟨N, X⟩ = α(X) and k⟨X, JY⟩ = dα(X, Y) with k constant over the
/// samples, plus the consequences ∇_N N = 0 and H = 0. Throws
/// Error{NotContact} or Error{NotPositiveDefinite} at the first bad sample.
CompatReport compatibility_check(const MetricField& g, const OneFormField& alpha,
                                 const std::vector<Point>& points,
                                 const ParamTable& params = {});

/// Pointwise part of the compatibility predicate: α♯ is the unit Reeb field.
bool unit_normal_holds(const ContactGeometry& cg);

/// ⟨[e2, e3], N⟩ for the canonical ξ-frame; equals ±k on compatible pairs.
double bracket_normal_component(const MetricField& g, const OneFormField& alpha,
                                const Point& p, const ParamTable& params = {});
double bracket_normal_component(const ContactGeometry& cg, const FieldJet& u,
                                const FieldJet& v);

}  // namespace cmv
