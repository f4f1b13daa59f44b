#pragma once

// Extrinsic geometry of the plane field ker α: second fundamental form
// II(X, Y) = ½⟨∇_X Y + ∇_Y X, N⟩, shape operator and principal frame.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmv/contact.hpp"
#include "cmv/sampling.hpp"

namespace cmv {

using Mat2 = Eigen::Matrix2d;

/// How the vectors of ξ at the point are extended to ξ-valued fields before
/// differentiating. II is tensorial, so every scheme must agree.
enum class Extension {
  Projection,  // project the constant field onto ker α, renormalize
  Solved,      // subtract the multiple of N(p) that solves α(·) = 0
  Weingarten,  // no extension: II(u, v) = −½(⟨v, ∇_u N⟩ + ⟨u, ∇_v N⟩)
};

/// II in the canonical ξ-frame (e2, e3) of `cg`.
Mat2 second_fundamental_form(const ContactGeometry& cg,
                             Extension scheme = Extension::Projection);
/// II in a caller-supplied orthonormal frame (f1, f2) of ξ at the point.
Mat2 second_fundamental_form(const ContactGeometry& cg, const Vec3& f1, const Vec3& f2,
                             Extension scheme = Extension::Projection);
Mat2 second_fundamental_form(const MetricField& g, const OneFormField& alpha,
                             const Point& p, const ParamTable& params = {});

inline constexpr double kUmbilicTol = 1e-6;

struct ShapeData {
  Mat2 II = Mat2::Zero();   // in the frame (e2, e3)
  Mat2 A_N = Mat2::Zero();  // equal to II: the frame is orthonormal
  Vec3 e2 = Vec3::Zero();
  Vec3 e3 = Vec3::Zero();
  double lambda = 0.0;       // largest principal curvature
  double lambda_minus = 0.0; // smallest principal curvature
  double H = 0.0;            // ½ trace A_N
  double K_e = 0.0;          // det A_N
  bool umbilic = false;      // principal curvatures within 1e-6 of each other
  /// (X, Y) for (lambda, lambda_minus) in chart coordinates; absent at umbilics.
  std::optional<std::pair<Vec3, Vec3>> principal_dirs;
};

ShapeData shape_data(const ContactGeometry& cg);
ShapeData shape_data(const MetricField& g, const OneFormField& alpha, const Point& p,
                     const ParamTable& params = {});

/// Orthonormal principal frame (X, Y, N) at a non-umbilic point.
struct PrincipalFrame {
  Point point;
  Vec3 X = Vec3::Zero();
  Vec3 Y = Vec3::Zero();
  Vec3 N = Vec3::Zero();
  double lambda = 0.0;
};

/// Throws Error{UmbilicPoint}.
PrincipalFrame principal_frame(const ContactGeometry& cg);
PrincipalFrame principal_frame(const MetricField& g, const OneFormField& alpha,
                               const Point& p, const ParamTable& params = {});

/// Principal frame at q with the signs of X and Y chosen for maximal overlap
/// with `reference`, so that the frame varies continuously across nearby points.
PrincipalFrame tracked_principal_frame(const MetricField& g, const OneFormField& alpha,
                                       const Point& q, const ParamTable& params,
                                       const PrincipalFrame& reference);

struct PrincipalBracket {
  double nabla_x_y = 0.0;  // ⟨∇_X Y, N⟩
  double nabla_y_x = 0.0;  // ⟨∇_Y X, N⟩
  double k = 0.0;
};

/// Evaluates ⟨∇_X Y, N⟩ and ⟨∇_Y X, N⟩ on the principal frame; on compatible
/// pairs these are ∓k/2. Throws Error{UmbilicPoint}.
PrincipalBracket principal_frame_bracket_check(const MetricField& g,
                                               const OneFormField& alpha, const Point& p,
                                               const ParamTable& params = {});

struct UmbilicSample {
  Point point;
  double lambda = 0.0;
  bool umbilic = false;
  bool evaluated = false;
};

struct UmbilicScan {
  std::vector<UmbilicSample> samples;  // one per grid point, in grid order
  std::vector<Point> umbilic_points;
  std::size_t evaluated = 0;
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  std::vector<std::pair<Point, std::string>> skipped;
};

/// n points per axis over `box`, ordered by grid index.
UmbilicScan umbilic_scan(const MetricField& g, const OneFormField& alpha, const Box& box,
                         int n, const ParamTable& params = {});

}  // namespace cmv
