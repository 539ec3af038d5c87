#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ovmkit/algmaps.hpp"
#include "ovmkit/random.hpp"

using namespace ovmkit;
using algmaps::AlgebraicDilation;
using algmaps::FiniteAlgebra;
using algmaps::LinearMapOnAlgebra;

namespace {

/// Structure constants are correct iff reconstructing basis[b] * basis[l]
/// from the stored coordinates reproduces the product matrix.
void check_multiplication_table(const FiniteAlgebra& a, double tolerance) {
  for (Index l = 0; l < a.size(); ++l)
    for (Index b = 0; b < a.size(); ++b) {
      const Matrix product = a.basis[b] * a.basis[l];
      const double diff =
          (a.element(a.right_mult[l].col(b)) - product).cwiseAbs().maxCoeff();
      REQUIRE(diff <= tolerance);
    }
  REQUIRE((a.identity() - Matrix::Identity(a.ambient, a.ambient))
              .cwiseAbs()
              .maxCoeff() <= tolerance);
}

}  // namespace

TEST_CASE("factory algebras carry exact multiplication tables") {
  check_multiplication_table(algmaps::diagonal_algebra(4), 0.0);
  check_multiplication_table(algmaps::upper_triangular_2(), 0.0);
  check_multiplication_table(algmaps::full_matrix_algebra(2), 0.0);
  check_multiplication_table(algmaps::full_matrix_algebra(3), 0.0);
}

TEST_CASE("make_algebra recovers the factory tables from raw bases") {
  const FiniteAlgebra factory = algmaps::upper_triangular_2();
  const FiniteAlgebra rebuilt = algmaps::make_algebra(2, factory.basis);
  check_multiplication_table(rebuilt, 1e-12);
  for (Index l = 0; l < 3; ++l)
    REQUIRE((rebuilt.right_mult[l] - factory.right_mult[l]).norm() < 1e-12);
  REQUIRE((rebuilt.identity_coords - factory.identity_coords).norm() < 1e-12);
}

TEST_CASE("make_algebra rejects non-algebras") {
  const Matrix eye = Matrix::Identity(2, 2);
  REQUIRE_THROWS_AS(algmaps::make_algebra(2, {eye, 2.0 * eye}),
                    precondition_error);

  Matrix e11 = Matrix::Zero(2, 2), e12 = Matrix::Zero(2, 2);
  e11(0, 0) = Scalar(1.0, 0.0);
  e12(0, 1) = Scalar(1.0, 0.0);
  REQUIRE_THROWS_AS(algmaps::make_algebra(2, {e11, e12}), precondition_error);

  // The square of E11 + E23 is E11, which escapes the two dimensional span.
  Matrix gen = Matrix::Zero(3, 3);
  gen(0, 0) = Scalar(1.0, 0.0);
  gen(1, 2) = Scalar(1.0, 0.0);
  REQUIRE_THROWS_AS(algmaps::make_algebra(3, {Matrix::Identity(3, 3), gen}),
                    precondition_error);

  REQUIRE_THROWS_AS(algmaps::make_algebra(2, {Matrix::Zero(3, 3)}),
                    malformed_input);
  REQUIRE_THROWS_AS(algmaps::make_algebra(2, {}), malformed_input);
}

TEST_CASE("right multiplication coordinates act like right multiplication") {
  for (const FiniteAlgebra& a :
       {algmaps::upper_triangular_2(), algmaps::full_matrix_algebra(2)}) {
    random::Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = rng.vector(a.size());
      const Vector y = rng.vector(a.size());
      const Matrix direct = a.element(x) * a.element(y);
      const Matrix via = a.element(a.right_mult_of(y) * x);
      REQUIRE((direct - via).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("maps evaluate by linearity and the transpose map transposes") {
  const LinearMapOnAlgebra t3 = algmaps::transpose_map(3);
  random::Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector c = rng.vector(9);
    const Matrix a = t3.algebra.element(c);
    REQUIRE((t3.apply(c) - a.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  }

  const FiniteAlgebra d3 = algmaps::diagonal_algebra(3);
  const LinearMapOnAlgebra id = algmaps::identity_representation(d3);
  const Vector c = rng.vector(3);
  REQUIRE((id.apply(c) - d3.element(c)).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE_THROWS_AS(algmaps::make_map(d3, {Matrix::Zero(2, 2)}),
                    malformed_input);
  REQUIRE_THROWS_AS(
      algmaps::make_map(d3, {Matrix::Zero(2, 3), Matrix::Zero(2, 3),
                             Matrix::Zero(2, 3)}),
      malformed_input);
}

TEST_CASE("generic maps on a full matrix algebra dilate canonically") {
  const FiniteAlgebra m2 = algmaps::full_matrix_algebra(2);
  const LinearMapOnAlgebra phi = random::random_map(m2, 3, 211);
  const AlgebraicDilation dil = algmaps::build_algebraic_dilation(phi);
  REQUIRE(dil.canonical);
  REQUIRE(dil.w_dim == 12);

  const Matrix unit = algmaps::dilation_pi(dil, m2.identity_coords);
  REQUIRE((unit - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);

  random::Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = rng.vector(4);
    const Vector y = rng.vector(4);
    const Matrix lhs = algmaps::dilation_pi(dil, m2.right_mult_of(y) * x);
    const Matrix rhs =
        algmaps::dilation_pi(dil, x) * algmaps::dilation_pi(dil, y);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

    const Matrix factored =
        dil.s_map * algmaps::dilation_pi(dil, x) * dil.t_map;
    REQUIRE((factored - phi.apply(x)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("rank deficient spans still dilate, with pi exactly unital") {
  // Maps on the upper triangular algebra never see the full coordinate
  // space, so this always takes the compressed route.
  const LinearMapOnAlgebra phi =
      random::random_map(algmaps::upper_triangular_2(), 2, 223);
  const AlgebraicDilation dil = algmaps::build_algebraic_dilation(phi);
  REQUIRE(!dil.canonical);
  REQUIRE(dil.w_dim <= 4);

  const Matrix unit =
      algmaps::dilation_pi(dil, phi.algebra.identity_coords);
  REQUIRE((unit - Matrix::Identity(dil.w_dim, dil.w_dim)).cwiseAbs().maxCoeff() ==
          0.0);

  random::Rng rng(13);
  const Vector x = rng.vector(3);
  REQUIRE((dil.s_map * algmaps::dilation_pi(dil, x) * dil.t_map - phi.apply(x))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

  // The identity representation of the diagonal algebra spans only the
  // diagonal coordinate matrices.
  const AlgebraicDilation diag = algmaps::build_algebraic_dilation(
      algmaps::identity_representation(algmaps::diagonal_algebra(2)));
  REQUIRE(diag.w_dim == 2);
  REQUIRE(!diag.canonical);
}

TEST_CASE("the zero map dilates through the zero space") {
  const FiniteAlgebra d2 = algmaps::diagonal_algebra(2);
  const LinearMapOnAlgebra zero =
      algmaps::make_map(d2, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)});
  const AlgebraicDilation dil = algmaps::build_algebraic_dilation(zero);
  REQUIRE(dil.w_dim == 0);

  Vector c(2);
  c << Scalar(1.0, -2.0), Scalar(0.5, 0.25);
  REQUIRE((dil.s_map * algmaps::dilation_pi(dil, c) * dil.t_map).norm() == 0.0);

  const algmaps::DilationNorms norms = algmaps::dilation_operator_norms(dil, zero);
  REQUIRE(norms.s_norm == 0.0);
  REQUIRE(norms.t_norm == 0.0);
  REQUIRE(norms.pi_ratio_max == 0.0);
}

TEST_CASE("ball image norms match closed forms on the diagonal algebra") {
  const FiniteAlgebra d4 = algmaps::diagonal_algebra(4);

  Matrix pick = Matrix::Zero(1, 4);
  pick(0, 2) = Scalar(1.0, 0.0);
  const double single = algmaps::algebra_ball_image_norm(pick, d4);
  REQUIRE(std::abs(single - 1.0) < 1e-9);

  const double all = algmaps::algebra_ball_image_norm(Matrix::Identity(4, 4), d4);
  REQUIRE(std::abs(all - 2.0) < 1e-9);

  const double sum =
      algmaps::algebra_ball_image_norm(Matrix::Ones(1, 4), d4);
  REQUIRE(std::abs(sum - 4.0) < 1e-9);

  REQUIRE_THROWS_AS(algmaps::algebra_ball_image_norm(Matrix::Ones(1, 3), d4),
                    malformed_input);
}

TEST_CASE("amplification levels of the transpose map step up to the rank") {
  const LinearMapOnAlgebra t2 = algmaps::transpose_map(2);
  const algmaps::CbProfile profile = algmaps::cb_profile(t2, 3);
  REQUIRE(profile.levels.size() == 3);
  const double expected[] = {1.0, 2.0, 2.0};
  for (int n = 0; n < 3; ++n) {
    REQUIRE(profile.levels[n] == n + 1);
    REQUIRE(std::abs(profile.lower_bounds[n] - expected[n]) < 1e-6);
    if (n > 0) REQUIRE(profile.lower_bounds[n] >= profile.lower_bounds[n - 1]);
  }

  // The identity representation is completely contractive, so every level
  // reports exactly one.
  const LinearMapOnAlgebra id =
      algmaps::identity_representation(algmaps::full_matrix_algebra(2));
  for (int level = 1; level <= 2; ++level)
    REQUIRE(std::abs(algmaps::amplification_norm(id, level) - 1.0) < 1e-9);

  REQUIRE_THROWS_AS(algmaps::amplification_norm(t2, 0), malformed_input);
  REQUIRE_THROWS_AS(algmaps::amplification_norm(algmaps::transpose_map(4), 17),
                    resource_error);
}

TEST_CASE("dilation operator norms of the transpose map are tame") {
  const LinearMapOnAlgebra t2 = algmaps::transpose_map(2);
  const AlgebraicDilation dil = algmaps::build_algebraic_dilation(t2);
  const algmaps::DilationNorms norms = algmaps::dilation_operator_norms(dil, t2);
  REQUIRE(std::abs(norms.t_norm - 1.0) < 1e-9);
  REQUIRE(norms.s_norm > 0.5);
  REQUIRE(norms.s_norm < 1.0 + 1e-6);
  REQUIRE(norms.pi_ratio_max > 0.5);
  REQUIRE(norms.pi_ratio_max < 1.0 + 1e-6);
}
