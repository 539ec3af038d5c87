#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ovmkit/framings.hpp"
#include "ovmkit/random.hpp"

using namespace ovmkit;
using framings::Framing;

namespace {

/// Simpson evaluation of c_n = 2 * integral over [0,1] of exp(-2 pi i n s^2),
/// kept deliberately different from the library quadrature.
Scalar simpson_coefficient(int n, int intervals) {
  const double h = 1.0 / intervals;
  Scalar acc(0.0, 0.0);
  for (int k = 0; k <= intervals; ++k) {
    const double s = k * h;
    const double weight = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += weight * std::polar(1.0, -2.0 * std::numbers::pi * n * s * s);
  }
  return 2.0 * acc * (h / 3.0);
}

Framing pair_as_framing(const frames::Frame& x, const frames::Frame& y) {
  return Framing(x.dim, x.vectors, y.vectors);
}

}  // namespace

TEST_CASE("verify_framing measures the duality defect") {
  const auto [x, y] = random::random_dual_pair(3, 8, 41);
  const framings::FramingCheck good = framings::verify_framing(pair_as_framing(x, y));
  REQUIRE(good.ok);
  REQUIRE(good.residual < 1e-10);

  // Doubling one vector on one side breaks the identity by a known rank-one gap.
  std::vector<Vector> bent = x.vectors;
  bent[0] *= 2.0;
  const framings::FramingCheck bad =
      framings::verify_framing(Framing(3, bent, y.vectors));
  REQUIRE(!bad.ok);
  const double expected = (x.vectors[0] * y.vectors[0].adjoint()).norm();
  REQUIRE(bad.residual > 0.5 * expected);
}

TEST_CASE("balanced rescaling equalizes norms and preserves the pairing") {
  const framings::Framing fr = random::random_framing(4, 10, 7);
  REQUIRE(framings::verify_framing(fr).ok);

  const framings::RescalingResult res = framings::rescale_balanced(fr);
  REQUIRE(res.rescaled_x.size() == fr.size());
  for (Index i = 0; i < fr.size(); ++i) {
    REQUIRE(std::abs(res.rescaled_x.vectors[i].norm() -
                     res.rescaled_y.vectors[i].norm()) < 1e-12);
    REQUIRE(res.alphas[i].imag() == 0.0);
    REQUIRE(res.alphas[i].real() > 0.0);
  }
  const framings::FramingCheck after = framings::verify_framing(
      pair_as_framing(res.rescaled_x, res.rescaled_y));
  REQUIRE(after.residual < 1e-10);
  REQUIRE(res.x_bounds.lower > 0.0);
  REQUIRE(res.y_bounds.lower > 0.0);
  REQUIRE(res.is_dual_pair_after);
}

TEST_CASE("rescaling drops doubly vanishing pairs and rejects half-vanishing ones") {
  const auto [x, y] = random::random_dual_pair(2, 5, 13);
  std::vector<Vector> xs = x.vectors, ys = y.vectors;
  xs.push_back(Vector::Zero(2));
  ys.push_back(Vector::Zero(2));
  const framings::RescalingResult res =
      framings::rescale_balanced(Framing(2, xs, ys));
  REQUIRE(res.rescaled_x.size() == 5);

  ys.back() = x.vectors[0];
  REQUIRE_THROWS_AS(framings::rescale_balanced(Framing(2, xs, ys)),
                    precondition_error);

  REQUIRE_THROWS_AS(
      framings::rescale_balanced(Framing(2, {Vector::Zero(2)}, {Vector::Zero(2)})),
      precondition_error);
}

TEST_CASE("composite quadrature integrates oscillatory functions") {
  std::vector<double> nodes, weights;
  framings::gauss_legendre_composite(256, nodes, weights);
  REQUIRE(nodes.size() == weights.size());

  double total = 0.0, cosine = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    REQUIRE(nodes[k] > 0.0);
    REQUIRE(nodes[k] < 1.0);
    total += weights[k];
    cosine += weights[k] * std::cos(10.0 * nodes[k]);
  }
  REQUIRE(std::abs(total - 1.0) < 1e-13);
  REQUIRE(std::abs(cosine - std::sin(10.0) / 10.0) < 1e-13);
}

TEST_CASE("fourier coefficients match an independent quadrature") {
  const framings::DivergenceReport report =
      framings::fourier_framing_report({8}, 64L * 8);
  REQUIRE(!report.accuracy_warning);
  REQUIRE(std::abs(report.coefficients[0] - Scalar(2.0, 0.0)) < 1e-13);
  for (int n = 1; n <= 8; ++n) {
    const Scalar oracle = simpson_coefficient(n, 20000);
    REQUIRE(std::abs(report.coefficients[n] - oracle) < 1e-9);
  }
}

TEST_CASE("tail products approach one half and partial sums keep growing") {
  const framings::DivergenceReport report =
      framings::fourier_framing_report({8, 64, 128, 256}, 64L * 256);
  for (std::size_t j = 1; j < report.partial_sums.size(); ++j)
    REQUIRE(report.partial_sums[j] > report.partial_sums[j - 1]);
  // n |c_n|^2 settles near 1/2, the signature of square-summability failure.
  for (std::size_t j = 1; j < report.tail_products.size(); ++j)
    REQUIRE(std::abs(report.tail_products[j] - 0.5) < 0.1);

  const framings::DivergenceReport coarse =
      framings::fourier_framing_report({8, 64, 128, 256}, 32L * 256);
  for (int n = 0; n <= 256; ++n)
    REQUIRE(std::abs(report.coefficients[n] - coarse.coefficients[n]) < 1e-6);

  const framings::DivergenceReport thin = framings::fourier_framing_report({8}, 16);
  REQUIRE(thin.accuracy_warning);
}

TEST_CASE("degenerate divergence requests are rejected") {
  REQUIRE_THROWS_AS(framings::fourier_framing_report({}, 64), malformed_input);
  REQUIRE_THROWS_AS(framings::fourier_framing_report({8, 8}, 64), malformed_input);
  REQUIRE_THROWS_AS(framings::fourier_framing_report({-1}, 64), malformed_input);
  REQUIRE_THROWS_AS(framings::fourier_framing_report({8}, 0), malformed_input);
}

TEST_CASE("framing construction validates shapes") {
  REQUIRE_THROWS_AS(Framing(2, {Vector::Zero(2)}, {}), malformed_input);
  REQUIRE_THROWS_AS(Framing(2, {Vector::Zero(3)}, {Vector::Zero(2)}),
                    malformed_input);
  REQUIRE_THROWS_AS(Framing(0, {}, {}), malformed_input);
}
