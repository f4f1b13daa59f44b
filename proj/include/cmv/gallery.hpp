#pragma once

// Built-in (metric, contact form) pairs and the local-counterexample family
//   g = [[A e^z, 1, 0], [1, x² + B e^{−z}, x], [0, x, 1]],  α = dz + x dy,
// together with its reference closed-form curvature matrix and the verdict machinery.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmv/blair.hpp"

namespace cmv {

struct Pair {
  std::string name;
  MetricField metric;
  OneFormField alpha;
  ParamTable params;
  Box domain;
};

/// A = 1, B = 2 unless overridden.
struct CounterexampleParams {
  double A = 1.0;
  double B = 2.0;

  double det() const { return A * B - 1.0; }
  double k() const { return 1.0 / std::sqrt(det()); }
  ParamTable table() const { return {{"A", A}, {"B", B}}; }
  /// Throws Error{InvalidParams} unless A > 0 and AB > 1.
  void validate() const;
};

Pair counterexample_pair(const CounterexampleParams& p);
Pair flat_torus_pair();
/// g = z⁻² I on z > 0.1, α = dz + x dy.
Pair hyperbolic_pair();

struct GalleryEntry {
  std::string_view name;
  std::string_view description;
  std::string_view parameters;
};

const std::vector<GalleryEntry>& gallery_entries();

/// Built-in pair by name ("flat-torus", "counterexample", "hyperbolic");
/// `overrides` replace default parameters. Throws Error{Schema} for an
/// unknown name and Error{InvalidParams} for bad counterexample parameters.
Pair gallery_pair(std::string_view name, const ParamTable& overrides = {});

/// (e1, e2, e3) = (∂z, ∂x/√(Ae^z), √(Ae^z/(AB−1)) (−∂x/(Ae^z) + ∂y − x∂z)).
Frame3 section4_frame(const CounterexampleParams& p, const Point& pt);

/// Reference closed-form curvature matrix (ordering SECTION4).
CurvatureMatrix section4_closed_form(const CounterexampleParams& p, const Point& pt);

struct SectionalSample {
  std::string plane;  // "e1^e2", "e1^e3", "e2^e3" or "random-<i>"
  Vec3 u = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double value = 0.0;
};

struct VerdictPoint {
  Point point;
  Mat3 direct = Mat3::Zero();
  Mat3 closed_form = Mat3::Zero();
  Mat3 residual = Mat3::Zero();
  double max_residual = 0.0;
  Vec3 direct_eigenvalues = Vec3::Zero();  // ascending
  std::array<double, 3> frame_sectional{};  // e1^e2, e1^e3, e2^e3
  std::vector<SectionalSample> random_sectional;
  double min_sectional = 0.0;
  double max_sectional = 0.0;
  bool matrix_negative_definite = false;
  bool closed_form_negative_definite = false;
};

struct CounterexamplePoint {
  Point point;
  std::string plane;
  double value = 0.0;
};

struct MismatchEntry {
  int row = 0;
  int col = 0;
  double max_residual = 0.0;
  Point worst_point;
};

/// Signed reordering of the direct bivector basis (e1^e2, e1^e3, e2^e3):
/// relabeled(a, b) = signs[a] signs[b] direct(order[a], order[b]).
struct Relabeling {
  std::array<int, 3> order{0, 1, 2};
  std::array<int, 3> signs{1, 1, 1};
  double max_residual = 0.0;
  std::vector<MismatchEntry> mismatches;  // against the closed form, entries above 1e-6
};

/// The signed reordering of `direct` that agrees with `closed_form` on the
/// most entries over all points, ties broken by the summed worst residuals,
/// then by fewer sign flips, then lexicographic order.
Relabeling best_relabeling(const std::vector<Point>& points, const std::vector<Mat3>& direct,
                           const std::vector<Mat3>& closed_form);

struct VerdictReport {
  CounterexampleParams params;
  double radius = 0.0;
  int grid = 0;
  std::uint64_t seed = 0;
  std::vector<VerdictPoint> points;

  double max_residual = 0.0;
  std::vector<MismatchEntry> mismatches;  // entries whose residual exceeds 1e-6
  bool closed_form_matches = false;
  Relabeling best_relabeling;
  bool matrix_negative_definite_everywhere = false;
  bool closed_form_negative_definite_everywhere = false;
  bool all_sectional_negative_everywhere = false;
  std::vector<CounterexamplePoint> counterexample_points;  // sectional ≥ 0
  double min_sectional = 0.0;
  double max_sectional = 0.0;
};

inline constexpr int kRandomPlanesPerPoint = 20;
inline constexpr double kClosedFormTol = 1e-6;

/// Grid of n points per axis on [−r, r]³, restricted to the closed ball of
/// radius r (x fastest).
std::vector<Point> ball_grid(double radius, int n);

/// Evaluates the family on ball_grid(radius, n): direct curvature matrix in
/// the frame above versus the closed form, frame-plane and random-plane
/// sectional curvatures. Throws Error{InvalidParams}.
VerdictReport section4_verdict(const CounterexampleParams& p, double radius, int n,
                               std::uint64_t seed);

}  // namespace cmv
