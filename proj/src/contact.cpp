#include "cmv/contact.hpp"

#include <algorithm>
#include <limits>

#include "cmv/errors.hpp"
#include "cmv/shape.hpp"

namespace cmv {

namespace {

using JVec = std::array<Jet1, 3>;
using JMat = std::array<std::array<Jet1, 3>, 3>;

Jet1 dot(const JVec& a, const JVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

JVec mul(const JMat& m, const JVec& v) {
  JVec out;
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

Jet1 inner(const JMat& g, const JVec& u, const JVec& v) { return dot(u, mul(g, v)); }

JVec scale(const JVec& v, const Jet1& s) { return {v[0] * s, v[1] * s, v[2] * s}; }
JVec sub(const JVec& a, const JVec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

JMat adjugate_inverse(const JMat& g) {
  auto c = [&](int r0, int r1, int c0, int c1) {
    return g[r0][c0] * g[r1][c1] - g[r0][c1] * g[r1][c0];
  };
  JMat adj;
  adj[0][0] = c(1, 2, 1, 2);
  adj[0][1] = -c(0, 2, 1, 2);
  adj[0][2] = c(0, 1, 1, 2);
  adj[1][0] = -c(1, 2, 0, 2);
  adj[1][1] = c(0, 2, 0, 2);
  adj[1][2] = -c(0, 1, 0, 2);
  adj[2][0] = c(1, 2, 0, 1);
  adj[2][1] = -c(0, 2, 0, 1);
  adj[2][2] = c(0, 1, 0, 1);
  const Jet1 det = g[0][0] * adj[0][0] + g[0][1] * adj[1][0] + g[0][2] * adj[2][0];
  JMat inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[i][j] = adj[i][j] / det;
  return inv;
}

FieldJet to_field(const JVec& v) {
  FieldJet f;
  for (int l = 0; l < 3; ++l) {
    f.value[l] = v[l].value;
    f.jacobian.row(l) = v[l].grad.transpose();
  }
  return f;
}

Vec3 values(const std::array<Jet2, 3>& a) { return {a[0].value, a[1].value, a[2].value}; }

TwoFormValue two_form_from_jets(const std::array<Jet2, 3>& a) {
  TwoFormValue d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.m(i, j) = a[j].grad[i] - a[i].grad[j];
  return d;
}

// curl α as first-order jets; its kernel-direction role: ι_w dα = 0.
JVec curl(const std::array<Jet2, 3>& a) {
  return {a[2].partial(1) - a[1].partial(2), a[0].partial(2) - a[2].partial(0),
          a[1].partial(0) - a[0].partial(1)};
}

double density_of(const std::array<Jet2, 3>& a) {
  const JVec w = curl(a);
  return a[0].value * w[0].value + a[1].value * w[1].value + a[2].value * w[2].value;
}

constexpr double kContactTol = 1e-9;
constexpr double kFrameResidualTol = 1e-6;

}  // namespace

std::array<Jet2, 3> OneFormField::eval(const Point& p, const ParamTable& params) const {
  return {eval_jet2(c_[0], p, params), eval_jet2(c_[1], p, params),
          eval_jet2(c_[2], p, params)};
}

TwoFormValue exterior_derivative(const OneFormField& alpha, const Point& p,
                                 const ParamTable& params) {
  return two_form_from_jets(alpha.eval(p, params));
}

std::vector<ContactSample> is_contact(const OneFormField& alpha,
                                      const std::vector<Point>& points,
                                      const ParamTable& params) {
  std::vector<ContactSample> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    const double d = density_of(alpha.eval(p, params));
    out.push_back({p, d, std::abs(d) > kContactTol});
  }
  return out;
}

// α∧dα = (α · curl α) dx∧dy∧dz, and ι_w dα = 0 exactly for w = curl α, so
// the Reeb field is the solution w / α(w) of {α(N) = 1, ι_N dα = 0}.
Vec3 reeb_field(const OneFormField& alpha, const Point& p, const ParamTable& params) {
  const auto a = alpha.eval(p, params);
  const JVec w = curl(a);
  const double den = density_of(a);
  if (!(std::abs(den) > kContactTol))
    throw Error(ErrorKind::NotContact, "alpha is not contact at the point (α∧dα = 0)");
  return Vec3(w[0].value, w[1].value, w[2].value) / den;
}

Vec3 lie_bracket(const FieldJet& u, const FieldJet& v) {
  return v.jacobian * u.value - u.jacobian * v.value;
}

ContactGeometry contact_geometry(const MetricField& g, const OneFormField& alpha,
                                 const Point& p, const ParamTable& params) {
  ContactGeometry cg;
  cg.point = p;
  cg.metric = metric_jet(g, p, params);
  cg.gamma = christoffel(cg.metric);

  const auto a2 = alpha.eval(p, params);
  cg.alpha = values(a2);
  for (int i = 0; i < 3; ++i) cg.alpha_jacobian.row(i) = a2[i].grad.transpose();
  cg.dalpha = two_form_from_jets(a2);

  const JVec w = curl(a2);
  JVec a;
  for (int i = 0; i < 3; ++i) a[i] = a2[i].first_order();
  const Jet1 den = dot(a, w);
  cg.density = den.value;
  if (std::abs(den.value) > kContactTol) cg.reeb = to_field(scale(w, Jet1(1.0) / den));

  const auto g2 = g.eval(p, params);
  JMat gm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gm[i][j] = g2[i][j].first_order();
  const JMat g_inv = adjugate_inverse(gm);

  const JVec sharp = mul(g_inv, a);
  const Jet1 norm = sqrt(dot(a, sharp));
  cg.alpha_sharp = Vec3(sharp[0].value, sharp[1].value, sharp[2].value);
  cg.alpha_sharp_norm = norm.value;
  const JVec n = scale(sharp, Jet1(1.0) / norm);
  cg.normal = to_field(n);

  // Gram-Schmidt on the projections of ∂x, ∂y, ∂z onto ker α, keeping the
  // first two whose residual norm exceeds the threshold.
  std::vector<JVec> basis;
  for (int c = 0; c < 3 && basis.size() < 2; ++c) {
    JVec v{Jet1(0.0), Jet1(0.0), Jet1(0.0)};
    v[c] = Jet1(1.0);
    JVec r = sub(v, scale(n, inner(gm, v, n)));
    for (const JVec& e : basis) r = sub(r, scale(e, inner(gm, r, e)));
    const Jet1 len = sqrt(inner(gm, r, r));
    if (len.value > kFrameResidualTol) basis.push_back(scale(r, Jet1(1.0) / len));
  }
  if (basis.size() < 2)
    throw Error(ErrorKind::Domain, "could not build a frame of ker alpha");

  cg.e2 = to_field(basis[0]);
  cg.e3 = to_field(basis[1]);
  cg.k = cg.dalpha(cg.e2.value, cg.e3.value);
  if (cg.k < 0.0) {
    std::swap(cg.e2, cg.e3);
    cg.k = -cg.k;
  }
  return cg;
}

bool unit_normal_holds(const ContactGeometry& cg) {
  if (!cg.reeb) return false;
  const double defect = std::max((cg.alpha_sharp - cg.reeb->value).cwiseAbs().maxCoeff(),
                                 std::abs(cg.alpha_sharp_norm - 1.0));
  return defect < kUnitNormalTol;
}

CompatReport compatibility_check(const MetricField& g, const OneFormField& alpha,
                                 const std::vector<Point>& points,
                                 const ParamTable& params) {
  CompatReport report;
  bool unit_normal = true, j_ok = true, geodesic = true, minimal = true;
  report.k_min = std::numeric_limits<double>::infinity();
  report.k_max = -std::numeric_limits<double>::infinity();
  double k_sum = 0.0;

  for (const Point& p : points) {
    const ContactGeometry cg = contact_geometry(g, alpha, p, params);
    if (!cg.reeb)
      throw Error(ErrorKind::NotContact, "alpha is not contact at a sample point");

    CompatPoint cp;
    cp.point = p;
    cp.reeb = cg.reeb->value;
    cp.alpha_sharp = cg.alpha_sharp;
    cp.alpha_sharp_norm = cg.alpha_sharp_norm;
    cp.unit_normal_defect =
        std::max((cg.alpha_sharp - cg.reeb->value).cwiseAbs().maxCoeff(),
                 std::abs(cg.alpha_sharp_norm - 1.0));
    cp.unit_normal = cp.unit_normal_defect < kUnitNormalTol;
    cp.e2 = cg.e2.value;
    cp.e3 = cg.e3.value;
    cp.k = cg.k;

    // J e2 = −e3, J e3 = e2: the rotation by π/2 with k⟨X, JY⟩ = dα(X, Y), k ≥ 0.
    cp.J << 0.0, 1.0, -1.0, 0.0;
    cp.j_squared_defect = (cp.J * cp.J + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
    const std::array<Vec3, 2> xi{cg.e2.value, cg.e3.value};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const Vec3 jv = cp.J(0, b) * xi[0] + cp.J(1, b) * xi[1];
        const double lhs = cg.k * cg.inner(xi[a], jv);
        cp.calibration_defect =
            std::max(cp.calibration_defect, std::abs(lhs - cg.dalpha(xi[a], xi[b])));
      }

    const Vec3 nn = cg.nabla(cg.reeb->value, *cg.reeb);
    cp.geodesic_defect = cg.metric.norm(nn);
    cp.mean_curvature = 0.5 * second_fundamental_form(cg).trace();

    unit_normal = unit_normal && cp.unit_normal;
    j_ok = j_ok && cp.j_squared_defect < 1e-10 && cp.calibration_defect < kStructureTol;
    geodesic = geodesic && cp.geodesic_defect < kMinimalityTol;
    minimal = minimal && std::abs(cp.mean_curvature) < kMinimalityTol;

    report.k_min = std::min(report.k_min, cp.k);
    report.k_max = std::max(report.k_max, cp.k);
    k_sum += cp.k;
    report.points.push_back(cp);
  }

  if (!report.points.empty()) {
    report.k_fit = k_sum / static_cast<double>(report.points.size());
    report.k_constant = (report.k_max - report.k_min) <
                        kConstancyTol * std::max(1.0, std::abs(report.k_fit));
  } else {
    report.k_min = report.k_max = 0.0;
  }

  if (!unit_normal) report.failed_predicates.push_back("unit-normal");
  if (!j_ok) report.failed_predicates.push_back("j-structure");
  if (!report.k_constant) report.failed_predicates.push_back("k-constant");
  if (!geodesic) report.failed_predicates.push_back("reeb-geodesic");
  if (!minimal) report.failed_predicates.push_back("minimal");
  report.is_compatible = !report.points.empty() && report.failed_predicates.empty();
  return report;
}

double bracket_normal_component(const ContactGeometry& cg, const FieldJet& u,
                                const FieldJet& v) {
  if (!cg.reeb) throw Error(ErrorKind::NotContact, "alpha is not contact at the point");
  return cg.inner(lie_bracket(u, v), cg.reeb->value);
}

double bracket_normal_component(const MetricField& g, const OneFormField& alpha,
                                const Point& p, const ParamTable& params) {
  const ContactGeometry cg = contact_geometry(g, alpha, p, params);
  return bracket_normal_component(cg, cg.e2, cg.e3);
}

}  // namespace cmv
