#include "cmv/riemann.hpp"

#include <cstdio>
#include <string>

#include "cmv/errors.hpp"

namespace cmv {

MetricField::MetricField(const std::array<std::array<ScalarFieldExpr, 3>, 3>& entries) {
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) upper_[i][j] = entries[i][j];
}

std::array<std::array<Jet2, 3>, 3> MetricField::eval(const Point& p,
                                                     const ParamTable& params) const {
  std::array<std::array<Jet2, 3>, 3> out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      out[i][j] = eval_jet2(upper_[i][j], p, params);
      out[j][i] = out[i][j];
    }
  return out;
}

Mat3 MetricField::eval_value(const Point& p, const ParamTable& params) const {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) g(i, j) = g(j, i) = cmv::eval_value(upper_[i][j], p, params);
  return g;
}

void require_positive_definite(const Mat3& g, const Point& p) {
  const double m1 = g(0, 0);
  const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double m3 = g.determinant();
  if (m1 <= 1e-12 || m2 <= 1e-12 || m3 <= 1e-12 || !g.allFinite()) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "metric not positive definite at (%g, %g, %g): minors %g, %g, %g", p.x,
                  p.y, p.z, m1, m2, m3);
    throw Error(ErrorKind::NotPositiveDefinite, buf);
  }
}

namespace {

Mat3 adjugate_inverse(const Mat3& g) {
  Mat3 adj;
  adj(0, 0) = g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1);
  adj(0, 1) = g(0, 2) * g(2, 1) - g(0, 1) * g(2, 2);
  adj(0, 2) = g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1);
  adj(1, 0) = g(1, 2) * g(2, 0) - g(1, 0) * g(2, 2);
  adj(1, 1) = g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0);
  adj(1, 2) = g(0, 2) * g(1, 0) - g(0, 0) * g(1, 2);
  adj(2, 0) = g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0);
  adj(2, 1) = g(0, 1) * g(2, 0) - g(0, 0) * g(2, 1);
  adj(2, 2) = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const double det = g(0, 0) * adj(0, 0) + g(0, 1) * adj(1, 0) + g(0, 2) * adj(2, 0);
  Mat3 inv = adj / det;
  return 0.5 * (inv + inv.transpose());
}

}  // namespace

MetricJet metric_jet(const MetricField& field, const Point& p, const ParamTable& params) {
  const auto jets = field.eval(p, params);
  MetricJet mj;
  mj.point = p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Jet2& e = jets[i][j];
      mj.g(i, j) = e.value;
      for (int k = 0; k < 3; ++k) {
        mj.dg[k](i, j) = e.grad[k];
        for (int l = 0; l < 3; ++l) mj.d2g[k][l](i, j) = e.hess(k, l);
      }
    }
  require_positive_definite(mj.g, p);
  mj.g_inv = adjugate_inverse(mj.g);
  for (int k = 0; k < 3; ++k) mj.dg_inv[k] = -mj.g_inv * mj.dg[k] * mj.g_inv;
  return mj;
}

Vec3 Christoffel::contract(const Vec3& u, const Vec3& v) const {
  return {u.dot(upper[0] * v), u.dot(upper[1] * v), u.dot(upper[2] * v)};
}

Christoffel christoffel(const MetricJet& mj) {
  Christoffel c;
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        c.lower[m](i, j) = 0.5 * (mj.dg[i](j, m) + mj.dg[j](i, m) - mj.dg[m](i, j));
  for (int l = 0; l < 3; ++l) {
    c.upper[l].setZero();
    for (int m = 0; m < 3; ++m) c.upper[l] += mj.g_inv(l, m) * c.lower[m];
  }
  return c;
}

double RiemannTensor::eval(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double ab = a[i] * b[j];
      if (ab == 0.0) continue;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += ab * c[k] * d[l] * r_[i][j][k][l];
    }
  return s;
}

RiemannTensor riemann_tensor(const MetricJet& mj) {
  const Christoffel c = christoffel(mj);

  // dgamma[m][l](i,j) = ∂_m Γ^l_ij
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int m = 0; m < 3; ++m) {
    std::array<Mat3, 3> dlower;  // dlower[q](i,j) = ∂_m Γ_ij,q
    for (int q = 0; q < 3; ++q)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dlower[q](i, j) =
              0.5 * (mj.d2g[m][i](j, q) + mj.d2g[m][j](i, q) - mj.d2g[m][q](i, j));
    for (int l = 0; l < 3; ++l) {
      Mat3 acc = Mat3::Zero();
      for (int q = 0; q < 3; ++q)
        acc += mj.dg_inv[m](l, q) * c.lower[q] + mj.g_inv(l, q) * dlower[q];
      dgamma[m][l] = acc;
    }
  }

  // (R(∂_i,∂_j)∂_k)^l = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^m_jk Γ^l_im − Γ^m_ik Γ^l_jm
  RiemannTensor r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Vec3 up;
        for (int l = 0; l < 3; ++l) {
          double s = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < 3; ++m)
            s += c.upper[m](j, k) * c.upper[l](i, m) - c.upper[m](i, k) * c.upper[l](j, m);
          up[l] = s;
        }
        const Vec3 down = mj.g * up;
        for (int l = 0; l < 3; ++l) r(i, j, k, l) = down[l];
      }
  return r;
}

double sectional_curvature(const MetricJet& mj, const RiemannTensor& r, const Vec3& u,
                           const Vec3& v) {
  const double uu = mj.inner(u, u);
  const double vv = mj.inner(v, v);
  const double uv = mj.inner(u, v);
  const double gram = uu * vv - uv * uv;
  if (!(gram > 1e-12)) throw Error(ErrorKind::DegeneratePlane, "plane is degenerate");
  return r.eval(u, v, v, u) / gram;
}

double sectional_curvature(const MetricJet& mj, const Vec3& u, const Vec3& v) {
  return sectional_curvature(mj, riemann_tensor(mj), u, v);
}

std::string_view to_string(BivectorOrdering o) {
  return o == BivectorOrdering::Lemma ? "LEMMA" : "SECTION4";
}

double orthonormality_defect(const MetricJet& mj, const Frame3& frame) {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(mj.inner(frame[a], frame[b]) - target));
    }
  return worst;
}

CurvatureMatrix curvature_matrix(const MetricJet& mj, const RiemannTensor& r,
                                 const Frame3& frame, BivectorOrdering ordering) {
  const double defect = orthonormality_defect(mj, frame);
  if (!(defect <= 1e-9))
    throw Error(ErrorKind::FrameNotOrthonormal,
                "frame Gram matrix deviates from identity by " + std::to_string(defect));
  static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  CurvatureMatrix cm;
  cm.ordering = ordering;
  cm.frame = frame;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Vec3& ua = frame[pairs[a][0]];
      const Vec3& va = frame[pairs[a][1]];
      const Vec3& ub = frame[pairs[b][0]];
      const Vec3& vb = frame[pairs[b][1]];
      cm.m(a, b) = r.eval(ua, va, vb, ub);
    }
  return cm;
}

CurvatureMatrix curvature_matrix(const MetricJet& mj, const Frame3& frame,
                                 BivectorOrdering ordering) {
  return curvature_matrix(mj, riemann_tensor(mj), frame, ordering);
}

Vec3 covariant_derivative(const Christoffel& gamma, const Vec3& x, const Vec3& y,
                          const Mat3& dy) {
  return dy * x + gamma.contract(x, y);
}

Vec3 covariant_derivative(const MetricJet& mj, const VectorFieldExpr& x,
                          const VectorFieldExpr& y, const ParamTable& params) {
  Vec3 xv, yv;
  Mat3 dy;
  for (int l = 0; l < 3; ++l) {
    xv[l] = eval_value(x[l], mj.point, params);
    const Jet2 yl = eval_jet2(y[l], mj.point, params);
    yv[l] = yl.value;
    dy.row(l) = yl.grad.transpose();
  }
  return covariant_derivative(christoffel(mj), xv, yv, dy);
}

}  // namespace cmv
