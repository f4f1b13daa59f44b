#include "cmv/gallery.hpp"

#include <algorithm>
#include <limits>
#include <bit>
#include <cmath>
#include <numbers>
#include <tuple>

#include "cmv/errors.hpp"

namespace cmv {

namespace {

MetricField metric_from(const std::array<std::array<const char*, 3>, 3>& src,
                        const ParamNames& names) {
  std::array<std::array<ScalarFieldExpr, 3>, 3> e;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) e[i][j] = parse(src[i][j], names);
  return MetricField(e);
}

OneFormField form_from(const std::array<const char*, 3>& src, const ParamNames& names) {
  return OneFormField({parse(src[0], names), parse(src[1], names), parse(src[2], names)});
}

}  // namespace

void CounterexampleParams::validate() const {
  if (!(A > 0.0) || !(A * B > 1.0) || !std::isfinite(A) || !std::isfinite(B))
    throw Error(ErrorKind::InvalidParams,
                "counterexample needs A > 0 and AB > 1 (got A=" + std::to_string(A) +
                    ", B=" + std::to_string(B) + ")");
}

Pair counterexample_pair(const CounterexampleParams& p) {
  p.validate();
  const ParamNames names{"A", "B"};
  Pair pair;
  pair.name = "counterexample";
  pair.metric = metric_from({{{"A*exp(z)", "1", "0"},
                              {"1", "x^2 + B*exp(-z)", "x"},
                              {"0", "x", "1"}}},
                            names);
  pair.alpha = form_from({"0", "x", "1"}, names);
  pair.params = p.table();
  pair.domain = {Vec3(-0.4, -0.4, -0.4), Vec3(0.4, 0.4, 0.4)};
  return pair;
}

Pair flat_torus_pair() {
  Pair pair;
  pair.name = "flat-torus";
  pair.metric = metric_from({{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}}, {});
  pair.alpha = form_from({"cos(z)", "sin(z)", "0"}, {});
  const double two_pi = 2.0 * std::numbers::pi;
  pair.domain = {Vec3::Zero(), Vec3(two_pi, two_pi, two_pi)};
  return pair;
}

Pair hyperbolic_pair() {
  Pair pair;
  pair.name = "hyperbolic";
  pair.metric = metric_from({{{"1/z^2", "0", "0"}, {"0", "1/z^2", "0"}, {"0", "0", "1/z^2"}}}, {});
  pair.alpha = form_from({"0", "x", "1"}, {});
  pair.domain = {Vec3(-1.0, -1.0, 0.1), Vec3(1.0, 1.0, 2.0)};
  return pair;
}

const std::vector<GalleryEntry>& gallery_entries() {
  static const std::vector<GalleryEntry> entries{
      {"flat-torus", "Euclidean metric with alpha = cos(z) dx + sin(z) dy", ""},
      {"counterexample",
       "g = [[A e^z, 1, 0], [1, x^2 + B e^-z, x], [0, x, 1]] with alpha = dz + x dy",
       "A=1 B=2 (A > 0, AB > 1)"},
      {"hyperbolic", "half-space metric z^-2 I on z > 0.1 with alpha = dz + x dy", ""},
  };
  return entries;
}

Pair gallery_pair(std::string_view name, const ParamTable& overrides) {
  if (name == "counterexample") {
    CounterexampleParams p;
    for (const auto& [key, value] : overrides) {
      if (key == "A") p.A = value;
      else if (key == "B") p.B = value;
      else throw Error(ErrorKind::Schema, "counterexample has no parameter '" + key + "'");
    }
    return counterexample_pair(p);
  }
  Pair pair;
  if (name == "flat-torus") pair = flat_torus_pair();
  else if (name == "hyperbolic") pair = hyperbolic_pair();
  else throw Error(ErrorKind::Schema, "unknown gallery entry '" + std::string(name) + "'");
  if (!overrides.empty())
    throw Error(ErrorKind::Schema, "gallery entry '" + std::string(name) + "' takes no parameters");
  return pair;
}

Frame3 section4_frame(const CounterexampleParams& p, const Point& pt) {
  p.validate();
  const double a = p.A * std::exp(pt.z);
  const double s = std::sqrt(a / p.det());
  return {Vec3(0.0, 0.0, 1.0), Vec3(1.0 / std::sqrt(a), 0.0, 0.0),
          s * Vec3(-1.0 / a, 1.0, -pt.x)};
}

CurvatureMatrix section4_closed_form(const CounterexampleParams& p, const Point& pt) {
  p.validate();
  const double ab = p.A * p.B;
  const double a = p.A * std::exp(pt.z);
  const double x = pt.x;
  CurvatureMatrix cm;
  cm.ordering = BivectorOrdering::Section4;
  cm.frame = section4_frame(p, pt);
  Mat3& m = cm.m;
  m(0, 0) = 0.25 * (ab - 3.0 - 2.0 * x * x * a) / (ab - 1.0);
  m(0, 1) = m(1, 0) = -0.5 * x * std::sqrt(a / (ab - 1.0));
  m(0, 2) = m(2, 0) = 0.5 * x * std::sqrt(a) / (ab - 1.0);
  m(1, 1) = -0.25;
  m(1, 2) = m(2, 1) = 0.0;
  m(2, 2) = 0.25;
  return cm;
}

Relabeling best_relabeling(const std::vector<Point>& points, const std::vector<Mat3>& direct,
                           const std::vector<Mat3>& closed_form) {
  std::array<int, 3> order{0, 1, 2};
  Relabeling best;
  std::tuple<std::size_t, double, int> best_score{10, 0.0, 0};
  do {
    for (int mask = 0; mask < 8; ++mask) {
      Relabeling cand;
      cand.order = order;
      for (int a = 0; a < 3; ++a) cand.signs[a] = (mask >> a) & 1 ? -1 : 1;
      std::array<MismatchEntry, 9> worst{};
      for (std::size_t i = 0; i < points.size(); ++i)
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) {
            const double v = cand.signs[r] * cand.signs[c] * direct[i](order[r], order[c]);
            const double res = std::abs(v - closed_form[i](r, c));
            MismatchEntry& w = worst[3 * r + c];
            if (res > w.max_residual) w = {r, c, res, points[i]};
          }
      double total = 0.0;
      for (const MismatchEntry& w : worst) {
        cand.max_residual = std::max(cand.max_residual, w.max_residual);
        total += w.max_residual;
        if (w.max_residual > kClosedFormTol) cand.mismatches.push_back(w);
      }
      // Residual sums are compared at 1e-9 so that float noise does not beat
      // the preference for fewer sign flips.
      const std::tuple<std::size_t, double, int> score{
          cand.mismatches.size(), std::round(total * 1e9), std::popcount(unsigned(mask))};
      if (score < best_score) {
        best_score = score;
        best = std::move(cand);
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

std::vector<Point> ball_grid(double radius, int n) {
  std::vector<Point> out;
  const Box cube{Vec3::Constant(-radius), Vec3::Constant(radius)};
  // Slack so grid points on the sphere itself are not lost to rounding.
  const double limit = radius * radius * (1.0 + 1e-12);
  for (const Point& p : grid_points(cube, n))
    if (p.vec().squaredNorm() <= limit) out.push_back(p);
  return out;
}

VerdictReport section4_verdict(const CounterexampleParams& params, double radius, int n,
                               std::uint64_t seed) {
  params.validate();
  const Pair pair = counterexample_pair(params);
  VerdictReport rep;
  rep.params = params;
  rep.radius = radius;
  rep.grid = n;
  rep.seed = seed;
  rep.min_sectional = std::numeric_limits<double>::infinity();
  rep.max_sectional = -std::numeric_limits<double>::infinity();
  rep.matrix_negative_definite_everywhere = true;
  rep.closed_form_negative_definite_everywhere = true;
  rep.all_sectional_negative_everywhere = true;

  SplitMix64 rng(seed);
  std::array<MismatchEntry, 9> entry_worst{};
  static constexpr const char* kFramePlanes[3] = {"e1^e2", "e1^e3", "e2^e3"};
  static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

  for (const Point& pt : ball_grid(radius, n)) {
    const MetricJet mj = metric_jet(pair.metric, pt, pair.params);
    const RiemannTensor rt = riemann_tensor(mj);
    const Frame3 frame = section4_frame(params, pt);

    VerdictPoint vp;
    vp.point = pt;
    vp.direct = curvature_matrix(mj, rt, frame, BivectorOrdering::Section4).m;
    vp.closed_form = section4_closed_form(params, pt).m;
    vp.residual = (vp.direct - vp.closed_form).cwiseAbs();
    vp.max_residual = vp.residual.maxCoeff();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        MismatchEntry& w = entry_worst[3 * r + c];
        if (vp.residual(r, c) > w.max_residual) {
          w = {r, c, vp.residual(r, c), pt};
        }
      }

    Eigen::SelfAdjointEigenSolver<Mat3> direct_eig(vp.direct, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Mat3> closed_eig(vp.closed_form, Eigen::EigenvaluesOnly);
    vp.direct_eigenvalues = direct_eig.eigenvalues();
    vp.matrix_negative_definite = vp.direct_eigenvalues.maxCoeff() < 0.0;
    vp.closed_form_negative_definite = closed_eig.eigenvalues().maxCoeff() < 0.0;

    vp.min_sectional = std::numeric_limits<double>::infinity();
    vp.max_sectional = -std::numeric_limits<double>::infinity();
    auto record = [&](const std::string& plane, double value) {
      vp.min_sectional = std::min(vp.min_sectional, value);
      vp.max_sectional = std::max(vp.max_sectional, value);
      if (value >= 0.0) rep.counterexample_points.push_back({pt, plane, value});
    };
    for (int i = 0; i < 3; ++i) {
      vp.frame_sectional[i] =
          sectional_curvature(mj, rt, frame[kPairs[i][0]], frame[kPairs[i][1]]);
      record(kFramePlanes[i], vp.frame_sectional[i]);
    }
    for (int i = 0; i < kRandomPlanesPerPoint; ++i) {
      SectionalSample s;
      s.plane = "random-" + std::to_string(i);
      s.u = uniform_vector(rng);
      s.v = uniform_vector(rng);
      s.value = sectional_curvature(mj, rt, s.u, s.v);
      record(s.plane, s.value);
      vp.random_sectional.push_back(std::move(s));
    }

    rep.max_residual = std::max(rep.max_residual, vp.max_residual);
    rep.matrix_negative_definite_everywhere &= vp.matrix_negative_definite;
    rep.closed_form_negative_definite_everywhere &= vp.closed_form_negative_definite;
    rep.all_sectional_negative_everywhere &= vp.max_sectional < 0.0;
    rep.min_sectional = std::min(rep.min_sectional, vp.min_sectional);
    rep.max_sectional = std::max(rep.max_sectional, vp.max_sectional);
    rep.points.push_back(std::move(vp));
  }

  for (const MismatchEntry& w : entry_worst)
    if (w.max_residual > kClosedFormTol) rep.mismatches.push_back(w);
  rep.closed_form_matches = rep.mismatches.empty();
  {
    std::vector<Point> pts;
    std::vector<Mat3> direct, closed;
    for (const VerdictPoint& vp : rep.points) {
      pts.push_back(vp.point);
      direct.push_back(vp.direct);
      closed.push_back(vp.closed_form);
    }
    rep.best_relabeling = best_relabeling(pts, direct, closed);
  }
  if (rep.points.empty()) {
    rep.min_sectional = rep.max_sectional = 0.0;
    rep.matrix_negative_definite_everywhere = false;
    rep.closed_form_negative_definite_everywhere = false;
    rep.all_sectional_negative_everywhere = false;
  }
  return rep;
}

}  // namespace cmv
