#include "cmv/shape.hpp"

#include <cmath>
#include <limits>

#include "cmv/errors.hpp"

namespace cmv {

namespace {

using JVec = std::array<Jet1, 3>;

Jet1 metric_entry(const ContactGeometry& cg, int i, int j) {
  const MetricJet& m = cg.metric;
  return {m.g(i, j), Vec3(m.dg[0](i, j), m.dg[1](i, j), m.dg[2](i, j))};
}

Jet1 metric_inner(const ContactGeometry& cg, const JVec& u, const JVec& v) {
  Jet1 s(0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s = s + u[i] * metric_entry(cg, i, j) * v[j];
  return s;
}

JVec jets_of(const FieldJet& f) {
  return {Jet1(f.value[0], f.jacobian.row(0).transpose()),
          Jet1(f.value[1], f.jacobian.row(1).transpose()),
          Jet1(f.value[2], f.jacobian.row(2).transpose())};
}

FieldJet field_of(const JVec& v) {
  FieldJet f;
  for (int l = 0; l < 3; ++l) {
    f.value[l] = v[l].value;
    f.jacobian.row(l) = v[l].grad.transpose();
  }
  return f;
}

// q ↦ P_q(u) |u|_p / |P_q(u)|_q, with P_q the g-orthogonal projection onto ker α.
FieldJet projection_extension(const ContactGeometry& cg, const Vec3& u) {
  const JVec n = jets_of(cg.normal);
  const JVec uc{Jet1(u[0]), Jet1(u[1]), Jet1(u[2])};
  const Jet1 un = metric_inner(cg, uc, n);
  JVec proj;
  for (int l = 0; l < 3; ++l) proj[l] = uc[l] - un * n[l];
  const Jet1 scale = Jet1(cg.metric.norm(u)) / sqrt(metric_inner(cg, proj, proj));
  for (auto& c : proj) c = c * scale;
  return field_of(proj);
}

// q ↦ u − (α_q(u) / α_q(N_p)) N_p
FieldJet solved_extension(const ContactGeometry& cg, const Vec3& u) {
  const Vec3 np = cg.normal.value;
  Jet1 au(0.0), an(0.0);
  for (int i = 0; i < 3; ++i) {
    const Jet1 ai(cg.alpha[i], cg.alpha_jacobian.row(i).transpose());
    au = au + ai * Jet1(u[i]);
    an = an + ai * Jet1(np[i]);
  }
  const Jet1 ratio = au / an;
  JVec out;
  for (int l = 0; l < 3; ++l) out[l] = Jet1(u[l]) - ratio * Jet1(np[l]);
  return field_of(out);
}

double second_form_entry(const ContactGeometry& cg, const Vec3& u, const Vec3& v,
                         Extension scheme) {
  const Vec3& n = cg.normal.value;
  switch (scheme) {
    case Extension::Projection: {
      const FieldJet ue = projection_extension(cg, u);
      const FieldJet ve = projection_extension(cg, v);
      return 0.5 * cg.inner(cg.nabla(u, ve) + cg.nabla(v, ue), n);
    }
    case Extension::Solved: {
      const FieldJet ue = solved_extension(cg, u);
      const FieldJet ve = solved_extension(cg, v);
      return 0.5 * cg.inner(cg.nabla(u, ve) + cg.nabla(v, ue), n);
    }
    case Extension::Weingarten:
      return -0.5 * (cg.inner(v, cg.nabla(u, cg.normal)) + cg.inner(u, cg.nabla(v, cg.normal)));
  }
  return 0.0;
}

Vec3 positive_first_coordinate(Vec3 v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

Mat2 second_fundamental_form(const ContactGeometry& cg, const Vec3& f1, const Vec3& f2,
                             Extension scheme) {
  Mat2 ii;
  ii(0, 0) = second_form_entry(cg, f1, f1, scheme);
  ii(1, 1) = second_form_entry(cg, f2, f2, scheme);
  ii(0, 1) = ii(1, 0) = second_form_entry(cg, f1, f2, scheme);
  return ii;
}

Mat2 second_fundamental_form(const ContactGeometry& cg, Extension scheme) {
  return second_fundamental_form(cg, cg.e2.value, cg.e3.value, scheme);
}

Mat2 second_fundamental_form(const MetricField& g, const OneFormField& alpha,
                             const Point& p, const ParamTable& params) {
  return second_fundamental_form(contact_geometry(g, alpha, p, params));
}

ShapeData shape_data(const ContactGeometry& cg) {
  ShapeData s;
  s.e2 = cg.e2.value;
  s.e3 = cg.e3.value;
  s.II = second_fundamental_form(cg);
  s.A_N = s.II;
  const double a = s.A_N(0, 0), b = s.A_N(0, 1), c = s.A_N(1, 1);
  s.H = 0.5 * (a + c);
  s.K_e = a * c - b * b;
  const double half_gap = std::hypot(0.5 * (a - c), b);
  s.lambda = s.H + half_gap;
  s.lambda_minus = s.H - half_gap;
  s.umbilic = half_gap < kUmbilicTol;
  if (!s.umbilic) {
    const double theta = 0.5 * std::atan2(2.0 * b, a - c);
    const double ct = std::cos(theta), st = std::sin(theta);
    const Vec3 x = positive_first_coordinate(ct * s.e2 + st * s.e3);
    const Vec3 y = positive_first_coordinate(-st * s.e2 + ct * s.e3);
    s.principal_dirs = std::make_pair(x, y);
  }
  return s;
}

ShapeData shape_data(const MetricField& g, const OneFormField& alpha, const Point& p,
                     const ParamTable& params) {
  return shape_data(contact_geometry(g, alpha, p, params));
}

PrincipalFrame principal_frame(const ContactGeometry& cg) {
  const ShapeData s = shape_data(cg);
  if (!s.principal_dirs)
    throw Error(ErrorKind::UmbilicPoint, "umbilic point: principal frame undefined");
  PrincipalFrame f;
  f.point = cg.point;
  f.X = s.principal_dirs->first;
  f.Y = s.principal_dirs->second;
  f.N = cg.normal.value;
  f.lambda = s.lambda;
  return f;
}

PrincipalFrame principal_frame(const MetricField& g, const OneFormField& alpha,
                               const Point& p, const ParamTable& params) {
  return principal_frame(contact_geometry(g, alpha, p, params));
}

PrincipalFrame tracked_principal_frame(const MetricField& g, const OneFormField& alpha,
                                       const Point& q, const ParamTable& params,
                                       const PrincipalFrame& reference) {
  PrincipalFrame f = principal_frame(g, alpha, q, params);
  if (f.X.dot(reference.X) < 0.0) f.X = -f.X;
  if (f.Y.dot(reference.Y) < 0.0) f.Y = -f.Y;
  return f;
}

PrincipalBracket principal_frame_bracket_check(const MetricField& g,
                                               const OneFormField& alpha, const Point& p,
                                               const ParamTable& params) {
  const ContactGeometry cg = contact_geometry(g, alpha, p, params);
  const PrincipalFrame f = principal_frame(cg);
  // Y and X stay in ξ, so ⟨∇_X Y, N⟩ = −⟨Y, ∇_X N⟩.
  PrincipalBracket out;
  out.nabla_x_y = -cg.inner(f.Y, cg.nabla(f.X, cg.normal));
  out.nabla_y_x = -cg.inner(f.X, cg.nabla(f.Y, cg.normal));
  out.k = cg.k;
  return out;
}

UmbilicScan umbilic_scan(const MetricField& g, const OneFormField& alpha, const Box& box,
                         int n, const ParamTable& params) {
  UmbilicScan scan;
  scan.min_lambda = std::numeric_limits<double>::infinity();
  scan.max_lambda = -std::numeric_limits<double>::infinity();
  for (const Point& p : grid_points(box, n)) {
    UmbilicSample& sample = scan.samples.emplace_back();
    sample.point = p;
    try {
      const ShapeData s = shape_data(g, alpha, p, params);
      ++scan.evaluated;
      const double gap = s.lambda - s.H;
      sample.lambda = gap;
      sample.umbilic = s.umbilic;
      sample.evaluated = true;
      scan.min_lambda = std::min(scan.min_lambda, gap);
      scan.max_lambda = std::max(scan.max_lambda, gap);
      if (s.umbilic) scan.umbilic_points.push_back(p);
    } catch (const Error& e) {
      scan.skipped.emplace_back(p, e.what());
    }
  }
  if (scan.evaluated == 0) scan.min_lambda = scan.max_lambda = 0.0;
  return scan;
}

}  // namespace cmv
