#pragma once

// Curvature of a compatible metric written in the principal frame
// (X, Y, N) of the contact plane field, in terms of extrinsic quantities:
//
//        | −3k²/4 + λ² + K          −Y(λ) − 2λ⟨∇_X X,Y⟩   X(λ) − 2λ⟨∇_Y Y,X⟩ |
//   M =  |                          k²/4 − λ² + N(λ)      2λ⟨∇_N X,Y⟩        |
//        |  (symmetric)                                   k²/4 − λ² − N(λ)   |
//
// in the bivector basis (X∧Y, X∧N, Y∧N), where K is the Webster curvature
//   K = X⟨∇_Y Y,X⟩ + Y⟨∇_X X,Y⟩ − ⟨∇_Y Y,X⟩² − ⟨∇_X X,Y⟩² − ⟨[X,Y],N⟩⟨[N,Y],X⟩.
//
// The (3,3) entry carries −N(λ): (X, λ) ↦ (Y, −λ) maps the (2,2) entry onto
// it. Reports flag points where |N(λ)| is large enough for a +N(λ) variant to
// be distinguishable.

#include <cstdint>

#include "cmv/shape.hpp"

namespace cmv {

struct LemmaScalars {
  double lambda = 0.0;
  double k = 0.0;
  double X_lambda = 0.0;
  double Y_lambda = 0.0;
  double N_lambda = 0.0;
  double cXXY = 0.0;  // ⟨∇_X X, Y⟩
  double cYYX = 0.0;  // ⟨∇_Y Y, X⟩
  double cNXY = 0.0;  // ⟨∇_N X, Y⟩
  double webster_K = 0.0;

  // Ingredients of webster_K, kept for reports.
  double X_of_cYYX = 0.0;
  double Y_of_cXXY = 0.0;
  double bracket_XY_N = 0.0;  // ⟨[X,Y],N⟩
  double bracket_NY_X = 0.0;  // ⟨[N,Y],X⟩

  PrincipalFrame frame;
};

CurvatureMatrix lemma_matrix(const LemmaScalars& s);

/// Principal-frame derivatives come from central differences of the tracked
/// frame (step 1e-4, Richardson-refined). Throws Error{UmbilicPoint} or
/// Error{NotCompatible}.
LemmaScalars extract_lemma_scalars(const MetricField& g, const OneFormField& alpha,
                                   const Point& p, const ParamTable& params = {});

inline constexpr double kLemmaTol = 1e-5;

struct LemmaResidualReport {
  Point point;
  LemmaScalars scalars;
  CurvatureMatrix direct;
  CurvatureMatrix lemma;
  Mat3 residual = Mat3::Zero();
  double max_residual = 0.0;
  double webster_K_formula = 0.0;
  double webster_K_from_direct = 0.0;  // solved from the direct (1,1) entry
  double webster_K_gap = 0.0;
  bool n_lambda_significant = false;  // |N(λ)| > 1e-8
  bool pass = false;
};

LemmaResidualReport lemma_consistency_check(const MetricField& g, const OneFormField& alpha,
                                            const Point& p, const ParamTable& params = {},
                                            double tol = kLemmaTol);

struct RicReebIdentity {
  double lhs = 0.0;  // K(e2, N) + K(e3, N) by direct curvature
  double rhs = 0.0;  // k²/2 − 2λ²
  double residual = 0.0;
  double lambda = 0.0;
  double k = 0.0;
};

/// Throws Error{NotCompatible}. Works at umbilic points too.
RicReebIdentity ric_reeb_identity(const MetricField& g, const OneFormField& alpha,
                                  const Point& p, const ParamTable& params = {});

/// Ric(N, N) forced at an umbilic point: k²/2. Throws Error{ZeroK} for k = 0.
double umbilic_obstruction(double k);

/// Exact rational number for the constant-curvature constraint system.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

struct SpaceFormSolution {
  double lambda = 0.0;
  double sectional = 0.0;
  Rational lambda_sq_over_k_sq;     // λ² / k²
  Rational webster_over_k_sq;       // K / k²
  Rational sectional_over_k_sq;     // constant sectional curvature / k²
  /// Residuals of M11 = M22 and M22 = sectional with the solution substituted.
  Rational diagonal_residual_12;
  Rational diagonal_residual_2s;
};

/// Solves the constraints a constant-curvature compatible metric must meet
/// (vanishing off-diagonal entries, K = k²/2, equal diagonal entries).
/// Throws Error{NonpositiveK} for k ≤ 0.
SpaceFormSolution space_form_constraints(double k);

/// Whether a compatible metric of constant sectional curvature `sectional`
/// is consistent with the constraint system for this k.
bool constant_curvature_admissible(double k, double sectional);

}  // namespace cmv
