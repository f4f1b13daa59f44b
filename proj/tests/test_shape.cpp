#include <doctest.h>

#include "cmv/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cmv;

namespace {

Pair euclid_dz() {
  Pair p = flat_torus_pair();
  p.name = "euclid-dz";
  p.alpha = OneFormField({parse("0"), parse("0"), parse("1")});
  p.domain = {Vec3::Zero(), Vec3::Ones()};
  return p;
}

}  // namespace

TEST_SUITE("shape") {

TEST_CASE("horizontal planes are totally geodesic") {
  const Pair e = euclid_dz();
  const ShapeData s = shape_data(e.metric, e.alpha, {0.2, 0.3, 0.4});
  CHECK(s.II.norm() == 0.0);
  CHECK(s.lambda == 0.0);
  CHECK(s.umbilic);
  CHECK_FALSE(s.principal_dirs.has_value());
}

TEST_CASE("flat torus second fundamental form") {
  const Pair t = flat_torus_pair();
  SplitMix64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const Point p = uniform_point(rng, t.domain);
    const ContactGeometry cg = contact_geometry(t.metric, t.alpha, p);
    const ShapeData s = shape_data(cg);
    // diagonal vanishes, off-diagonal ±1/2 in any orthonormal frame built from ∂z and the rotating vector
    CHECK(std::abs(s.II(0, 0)) < 1e-12);
    CHECK(std::abs(s.II(1, 1)) < 1e-12);
    CHECK(std::abs(std::abs(s.II(0, 1)) - 0.5) < 1e-12);
    CHECK(s.lambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.H) < 1e-12);
    CHECK(s.K_e == doctest::Approx(-0.25).epsilon(1e-12));
    REQUIRE(s.principal_dirs);
    const Vec3 d1 = (s.e2 + s.e3) / std::sqrt(2.0), d2 = (s.e2 - s.e3) / std::sqrt(2.0);
    const Vec3 X = s.principal_dirs->first;
    CHECK(std::min((X - d1).norm(), std::min((X + d1).norm(),
                                             std::min((X - d2).norm(), (X + d2).norm()))) <
          1e-12);
  }
}

TEST_CASE("counterexample at the origin") {
  const Pair pr = counterexample_pair({1, 2});
  const ContactGeometry cg = contact_geometry(pr.metric, pr.alpha, {0, 0, 0}, pr.params);
  const Frame3 f = section4_frame({1, 2}, {0, 0, 0});
  Mat2 expected;
  expected << -0.5, 0.5, 0.5, 0.5;
  CHECK((second_fundamental_form(cg, f[1], f[2]) - expected).cwiseAbs().maxCoeff() < 1e-12);
  const ShapeData s = shape_data(cg);
  CHECK(s.lambda == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(s.H) < 1e-12);
  CHECK(s.K_e == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("extension schemes agree (tensoriality)") {
  SplitMix64 rng(15);
  std::vector<Pair> pairs{flat_torus_pair(), counterexample_pair({1, 2}),
                          counterexample_pair({2, 1.25}), hyperbolic_pair()};
  for (const Pair& pr : pairs) {
    for (int i = 0; i < 10; ++i) {
      const ContactGeometry cg =
          contact_geometry(pr.metric, pr.alpha, uniform_point(rng, pr.domain), pr.params);
      const Mat2 a = second_fundamental_form(cg, Extension::Projection);
      const Mat2 b = second_fundamental_form(cg, Extension::Solved);
      const Mat2 c = second_fundamental_form(cg, Extension::Weingarten);
      CAPTURE(pr.name);
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((a - c).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(std::abs(a(0, 1) - a(1, 0)) == 0.0);
    }
  }
}

TEST_CASE("principal frame properties on compatible pairs") {
  SplitMix64 rng(16);
  for (const Pair& pr : {flat_torus_pair(), counterexample_pair({1, 2})}) {
    for (int i = 0; i < 20; ++i) {
      const ContactGeometry cg =
          contact_geometry(pr.metric, pr.alpha, uniform_point(rng, pr.domain), pr.params);
      const ShapeData s = shape_data(cg);
      const PrincipalFrame f = principal_frame(cg);
      CHECK(std::abs(s.H) < 1e-8);
      CHECK(std::abs(s.K_e + s.lambda * s.lambda) < 1e-8);
      const Frame3 fr{f.X, f.Y, f.N};
      CHECK(orthonormality_defect(cg.metric, fr) < 1e-8);
      // A_N X = λ X, A_N Y = −λ Y in frame coordinates
      const Eigen::Vector2d x(cg.inner(f.X, s.e2), cg.inner(f.X, s.e3));
      const Eigen::Vector2d y(cg.inner(f.Y, s.e2), cg.inner(f.Y, s.e3));
      CHECK((s.A_N * x - s.lambda * x).norm() < 1e-8);
      CHECK((s.A_N * y + s.lambda * y).norm() < 1e-8);
      // sign convention: first nonzero coordinate positive
      for (const Vec3& v : {f.X, f.Y}) {
        int i0 = 0;
        while (std::abs(v[i0]) < 1e-12) ++i0;
        CHECK(v[i0] > 0.0);
      }
    }
  }
}

TEST_CASE("principal bracket: <nabla_X Y, N> = -<nabla_Y X, N> = +-k/2") {
  SplitMix64 rng(18);
  for (const Pair& pr : {flat_torus_pair(), counterexample_pair({1, 2})}) {
    for (int i = 0; i < 10; ++i) {
      const Point p = uniform_point(rng, pr.domain);
      const PrincipalBracket b = principal_frame_bracket_check(pr.metric, pr.alpha, p, pr.params);
      CHECK(std::abs(std::abs(b.nabla_x_y) - 0.5 * b.k) < 1e-5);
      CHECK(std::abs(b.nabla_y_x + b.nabla_x_y) < 1e-5);
      // ⟨[X,Y],N⟩ = ⟨∇_X Y − ∇_Y X, N⟩, checked against differenced frames
      const double fd = oracle::principal_bracket_normal(pr.metric, pr.alpha, p, pr.params);
      CHECK(std::abs(fd - (b.nabla_x_y - b.nabla_y_x)) < 1e-5);
    }
  }
  const Pair pr = counterexample_pair({1, 2});
  const PrincipalBracket o = principal_frame_bracket_check(pr.metric, pr.alpha, {0, 0, 0}, pr.params);
  CHECK(std::abs(o.nabla_x_y) == doctest::Approx(0.5).epsilon(1e-9));

  const Pair e = euclid_dz();
  try {
    principal_frame_bracket_check(e.metric, e.alpha, {0.5, 0.5, 0.5});
    FAIL("expected UmbilicPoint");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::UmbilicPoint);
  }
}

TEST_CASE("tracked frame is continuous") {
  const Pair pr = counterexample_pair({1, 2});
  const Point p{0.1, 0.05, -0.2};
  const PrincipalFrame f0 = principal_frame(pr.metric, pr.alpha, p, pr.params);
  for (double h : {1e-4, -1e-4, 1e-3}) {
    for (const Vec3& dir : {f0.X, f0.Y, f0.N}) {
      const PrincipalFrame f = tracked_principal_frame(
          pr.metric, pr.alpha, Point::from(p.vec() + h * dir), pr.params, f0);
      CHECK((f.X - f0.X).norm() < 50 * std::abs(h));
      CHECK((f.Y - f0.Y).norm() < 50 * std::abs(h));
    }
  }
}

TEST_CASE("umbilic scans") {
  const Pair e = euclid_dz();
  const UmbilicScan all = umbilic_scan(e.metric, e.alpha, e.domain, 5);
  CHECK(all.umbilic_points.size() == 125);
  CHECK(all.evaluated == 125);

  const Pair t = flat_torus_pair();
  const UmbilicScan none = umbilic_scan(t.metric, t.alpha, {Vec3::Zero(), Vec3::Ones()}, 11);
  CHECK(none.umbilic_points.empty());
  CHECK(none.min_lambda == doctest::Approx(0.5).epsilon(1e-9));

  const Pair pr = counterexample_pair({1, 2});
  const Box box{Vec3(-0.25, -0.25, -0.25), Vec3(0.25, 0.25, 0.25)};
  const UmbilicScan coarse = umbilic_scan(pr.metric, pr.alpha, box, 11, pr.params);
  const UmbilicScan fine = umbilic_scan(pr.metric, pr.alpha, box, 7, pr.params);
  CHECK(coarse.umbilic_points.empty());
  CHECK(fine.umbilic_points.empty());
  CHECK(coarse.min_lambda > 0.1);
}

}  // TEST_SUITE
