#include "cmv/blair.hpp"

#include <numeric>

#include "cmv/errors.hpp"
#include "cmv/finite_diff.hpp"

namespace cmv {

CurvatureMatrix lemma_matrix(const LemmaScalars& s) {
  const double k2 = s.k * s.k;
  const double l2 = s.lambda * s.lambda;
  CurvatureMatrix cm;
  cm.ordering = BivectorOrdering::Lemma;
  cm.frame = {s.frame.X, s.frame.Y, s.frame.N};
  Mat3& m = cm.m;
  m(0, 0) = -0.75 * k2 + l2 + s.webster_K;
  m(1, 1) = 0.25 * k2 - l2 + s.N_lambda;
  m(2, 2) = 0.25 * k2 - l2 - s.N_lambda;
  m(0, 1) = m(1, 0) = -s.Y_lambda - 2.0 * s.lambda * s.cXXY;
  m(0, 2) = m(2, 0) = s.X_lambda - 2.0 * s.lambda * s.cYYX;
  m(1, 2) = m(2, 1) = 2.0 * s.lambda * s.cNXY;
  return cm;
}

namespace {

void require_compatible(const ContactGeometry& cg) {
  if (!unit_normal_holds(cg))
    throw Error(ErrorKind::NotCompatible,
                "metric dual of alpha is not the unit Reeb field at the point");
}

}  // namespace

LemmaScalars extract_lemma_scalars(const MetricField& g, const OneFormField& alpha,
                                   const Point& p, const ParamTable& params) {
  const ContactGeometry cg = contact_geometry(g, alpha, p, params);
  const PrincipalFrame f0 = principal_frame(cg);
  require_compatible(cg);

  auto frame_at = [&](const Point& q, const PrincipalFrame& ref) {
    return tracked_principal_frame(g, alpha, q, params, ref);
  };
  // ⟨∇_U U', V⟩-type scalar at q with U, U', V taken from the frame tracked to fq.
  auto frame_derivatives = [&](const Point& q, const PrincipalFrame& fq,
                               const ContactGeometry& cq) {
    auto dX = [&](const Vec3& dir) {
      return directional_derivative([&](const Point& r) { return frame_at(r, fq).X; }, q, dir);
    };
    auto dY = [&](const Vec3& dir) {
      return directional_derivative([&](const Point& r) { return frame_at(r, fq).Y; }, q, dir);
    };
    struct {
      double cXXY, cYYX, cNXY, cNYX;
    } out;
    const Vec3 nxx = dX(fq.X) + cq.gamma.contract(fq.X, fq.X);
    const Vec3 nyy = dY(fq.Y) + cq.gamma.contract(fq.Y, fq.Y);
    const Vec3 nnx = dX(fq.N) + cq.gamma.contract(fq.N, fq.X);
    const Vec3 nny = dY(fq.N) + cq.gamma.contract(fq.N, fq.Y);
    out.cXXY = cq.inner(nxx, fq.Y);
    out.cYYX = cq.inner(nyy, fq.X);
    out.cNXY = cq.inner(nnx, fq.Y);
    out.cNYX = cq.inner(nny, fq.X);
    return out;
  };

  LemmaScalars s;
  s.frame = f0;
  s.lambda = f0.lambda;
  s.k = cg.k;

  auto lambda_at = [&](const Point& q) { return principal_frame(g, alpha, q, params).lambda; };
  s.X_lambda = directional_derivative(lambda_at, p, f0.X);
  s.Y_lambda = directional_derivative(lambda_at, p, f0.Y);
  s.N_lambda = directional_derivative(lambda_at, p, f0.N);

  const auto d0 = frame_derivatives(p, f0, cg);
  s.cXXY = d0.cXXY;
  s.cYYX = d0.cYYX;
  s.cNXY = d0.cNXY;

  auto cYYX_at = [&](const Point& q) {
    const ContactGeometry cq = contact_geometry(g, alpha, q, params);
    PrincipalFrame fq = principal_frame(cq);
    if (fq.X.dot(f0.X) < 0.0) fq.X = -fq.X;
    if (fq.Y.dot(f0.Y) < 0.0) fq.Y = -fq.Y;
    return frame_derivatives(q, fq, cq).cYYX;
  };
  auto cXXY_at = [&](const Point& q) {
    const ContactGeometry cq = contact_geometry(g, alpha, q, params);
    PrincipalFrame fq = principal_frame(cq);
    if (fq.X.dot(f0.X) < 0.0) fq.X = -fq.X;
    if (fq.Y.dot(f0.Y) < 0.0) fq.Y = -fq.Y;
    return frame_derivatives(q, fq, cq).cXXY;
  };
  s.X_of_cYYX = directional_derivative(cYYX_at, p, f0.X);
  s.Y_of_cXXY = directional_derivative(cXXY_at, p, f0.Y);

  // ⟨∇_X Y, N⟩ = −⟨Y, ∇_X N⟩ since Y stays in ξ; likewise for ⟨∇_Y X, N⟩.
  const Vec3 nabla_x_n = cg.nabla(f0.X, cg.normal);
  const Vec3 nabla_y_n = cg.nabla(f0.Y, cg.normal);
  s.bracket_XY_N = -cg.inner(f0.Y, nabla_x_n) + cg.inner(f0.X, nabla_y_n);
  s.bracket_NY_X = d0.cNYX - cg.inner(nabla_y_n, f0.X);

  s.webster_K = s.X_of_cYYX + s.Y_of_cXXY - s.cYYX * s.cYYX - s.cXXY * s.cXXY -
                s.bracket_XY_N * s.bracket_NY_X;
  return s;
}

LemmaResidualReport lemma_consistency_check(const MetricField& g, const OneFormField& alpha,
                                            const Point& p, const ParamTable& params,
                                            double tol) {
  LemmaResidualReport r;
  r.point = p;
  r.scalars = extract_lemma_scalars(g, alpha, p, params);
  const LemmaScalars& s = r.scalars;
  const MetricJet mj = metric_jet(g, p, params);
  r.direct = curvature_matrix(mj, {s.frame.X, s.frame.Y, s.frame.N}, BivectorOrdering::Lemma);
  r.lemma = lemma_matrix(s);
  r.residual = (r.lemma.m - r.direct.m).cwiseAbs();
  r.max_residual = r.residual.maxCoeff();
  r.webster_K_formula = s.webster_K;
  r.webster_K_from_direct = r.direct.m(0, 0) + 0.75 * s.k * s.k - s.lambda * s.lambda;
  r.webster_K_gap = std::abs(r.webster_K_formula - r.webster_K_from_direct);
  r.n_lambda_significant = std::abs(s.N_lambda) > 1e-8;
  r.pass = r.max_residual < tol;
  return r;
}

RicReebIdentity ric_reeb_identity(const MetricField& g, const OneFormField& alpha,
                                  const Point& p, const ParamTable& params) {
  const ContactGeometry cg = contact_geometry(g, alpha, p, params);
  require_compatible(cg);
  const RiemannTensor rt = riemann_tensor(cg.metric);
  const Vec3& n = cg.reeb->value;
  RicReebIdentity out;
  out.lhs = sectional_curvature(cg.metric, rt, cg.e2.value, n) +
            sectional_curvature(cg.metric, rt, cg.e3.value, n);
  const ShapeData sd = shape_data(cg);
  out.lambda = sd.lambda;
  out.k = cg.k;
  out.rhs = 0.5 * out.k * out.k - 2.0 * out.lambda * out.lambda;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

double umbilic_obstruction(double k) {
  if (k == 0.0) throw Error(ErrorKind::ZeroK, "k = 0: not a contact metric structure");
  return 0.5 * k * k;
}

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(ErrorKind::Domain, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  return {n / (g == 0 ? 1 : g), d / (g == 0 ? 1 : g)};
}

Rational operator+(Rational a, Rational b) {
  return Rational::make(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rational operator-(Rational a, Rational b) {
  return Rational::make(a.num * b.den - b.num * a.den, a.den * b.den);
}
Rational operator*(Rational a, Rational b) { return Rational::make(a.num * b.num, a.den * b.den); }
Rational operator/(Rational a, Rational b) { return Rational::make(a.num * b.den, a.den * b.num); }

namespace {

// Square root of a rational that is a perfect square, else nullopt.
std::optional<Rational> exact_sqrt(Rational r) {
  auto isqrt = [](std::int64_t v) -> std::optional<std::int64_t> {
    if (v < 0) return std::nullopt;
    auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::int64_t c = std::max<std::int64_t>(0, s - 1); c <= s + 1; ++c)
      if (c * c == v) return c;
    return std::nullopt;
  };
  const auto n = isqrt(r.num);
  const auto d = isqrt(r.den);
  if (!n || !d) return std::nullopt;
  return Rational::make(*n, *d);
}

}  // namespace

// Every quantity is a rational multiple of k² (λ² included). With the
// off-diagonal connection terms zero and N(λ) = 0:
//   K = k²/2,   M11 = −3k²/4 + K + λ²,   M22 = M33 = k²/4 − λ².
// M11 = M22 gives 2λ² = k²/4 + 3k²/4 − K.
SpaceFormSolution space_form_constraints(double k) {
  if (!(k > 0.0)) throw Error(ErrorKind::NonpositiveK, "space form analysis needs k > 0");
  SpaceFormSolution sol;
  const Rational quarter = Rational::make(1, 4);
  const Rational three_quarters = Rational::make(3, 4);
  sol.webster_over_k_sq = Rational::make(1, 2);
  sol.lambda_sq_over_k_sq =
      (quarter + three_quarters - sol.webster_over_k_sq) / Rational::make(2, 1);
  sol.sectional_over_k_sq = quarter - sol.lambda_sq_over_k_sq;

  const Rational m11 = Rational::make(0, 1) - three_quarters + sol.webster_over_k_sq +
                       sol.lambda_sq_over_k_sq;
  const Rational m22 = quarter - sol.lambda_sq_over_k_sq;
  sol.diagonal_residual_12 = m11 - m22;
  sol.diagonal_residual_2s = m22 - sol.sectional_over_k_sq;

  const auto ratio = exact_sqrt(sol.lambda_sq_over_k_sq);
  // λ/k is rational here (1/2), so λ = k · (num/den) is computed without a sqrt.
  sol.lambda = ratio ? k * static_cast<double>(ratio->num) / static_cast<double>(ratio->den)
                     : k * std::sqrt(sol.lambda_sq_over_k_sq.value());
  sol.sectional = sol.sectional_over_k_sq.num == 0
                      ? 0.0
                      : sol.sectional_over_k_sq.value() * k * k;
  return sol;
}

bool constant_curvature_admissible(double k, double sectional) {
  return space_form_constraints(k).sectional == sectional;
}

}  // namespace cmv
