#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ovmkit/frames.hpp"
#include "ovmkit/random.hpp"

using namespace ovmkit;
using frames::Frame;

namespace {

Frame standard_basis(Index d) {
  std::vector<Vector> vs;
  for (Index i = 0; i < d; ++i) {
    Vector v = Vector::Zero(d);
    v(i) = Scalar(1.0, 0.0);
    vs.push_back(v);
  }
  return Frame(d, vs);
}

/// Three equiangular vectors of norm sqrt(2/3) in C^2; their frame operator
/// is the identity.
Frame mercedes_frame() {
  std::vector<Vector> vs;
  const double scale = std::sqrt(2.0 / 3.0);
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 3.0;
    Vector v(2);
    v << Scalar(scale * std::cos(angle), 0.0), Scalar(scale * std::sin(angle), 0.0);
    vs.push_back(v);
  }
  return Frame(2, vs);
}

Frame repeated_e1_frame() {
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1(0) = Scalar(1.0, 0.0);
  e2(1) = Scalar(1.0, 0.0);
  return Frame(2, {e1, e1, e2});
}

}  // namespace

TEST_CASE("analysis operator rows are the conjugated vectors") {
  const Frame onb = standard_basis(2);
  REQUIRE((frames::analysis_operator(onb) - Matrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);

  const Frame f = repeated_e1_frame();
  const Matrix theta = frames::analysis_operator(f);
  REQUIRE(theta.rows() == 3);
  REQUIRE(theta.cols() == 2);
  for (Index i = 0; i < 3; ++i)
    REQUIRE((theta.adjoint().col(i) - f.vectors[i]).norm() == 0.0);

  const Frame r = random::random_frame(4, 9, 11);
  const Matrix tr = frames::analysis_operator(r);
  for (Index i = 0; i < r.size(); ++i)
    REQUIRE((tr.adjoint().col(i) - r.vectors[i]).norm() == 0.0);
}

TEST_CASE("frame operator equals brute force rank-one accumulation") {
  const Frame f = random::random_frame(5, 12, 3);
  Matrix brute = Matrix::Zero(5, 5);
  for (const auto& v : f.vectors) brute += v * v.adjoint();
  REQUIRE((frames::frame_operator(f) - brute).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix theta = frames::analysis_operator(f);
  REQUIRE((theta.adjoint() * theta - brute).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frame bounds of simple families") {
  const frames::FrameBounds onb = frames::frame_bounds(standard_basis(3));
  REQUIRE(std::abs(onb.lower - 1.0) < 1e-12);
  REQUIRE(std::abs(onb.upper - 1.0) < 1e-12);

  const frames::FrameBounds rep = frames::frame_bounds(repeated_e1_frame());
  REQUIRE(std::abs(rep.lower - 1.0) < 1e-12);
  REQUIRE(std::abs(rep.upper - 2.0) < 1e-12);

  const frames::FrameBounds merc = frames::frame_bounds(mercedes_frame());
  REQUIRE(std::abs(merc.lower - 1.0) < 1e-10);
  REQUIRE(std::abs(merc.upper - 1.0) < 1e-10);
  REQUIRE(frames::is_parseval(mercedes_frame()));
}

TEST_CASE("bounds satisfy the energy inequality on random unit vectors") {
  const Frame f = random::random_frame(4, 10, 21);
  const frames::FrameBounds b = frames::frame_bounds(f);
  const Matrix theta = frames::analysis_operator(f);
  random::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = rng.vector(4).normalized();
    const double energy = (theta * x).squaredNorm();
    REQUIRE(energy >= b.lower - 1e-10);
    REQUIRE(energy <= b.upper + 1e-10);
  }
}

TEST_CASE("non-spanning and all-zero families report lower bound zero") {
  Vector e1 = Vector::Zero(3);
  e1(0) = Scalar(1.0, 0.0);
  const Frame partial(3, {e1, 2.0 * e1});
  REQUIRE(frames::frame_bounds(partial).lower < 1e-14);
  REQUIRE(!frames::is_frame(partial));

  const Frame zero(2, {Vector::Zero(2), Vector::Zero(2)});
  const frames::FrameBounds zb = frames::frame_bounds(zero);
  REQUIRE(zb.lower == 0.0);
  REQUIRE(zb.upper == 0.0);
}

TEST_CASE("canonical dual reconstructs and inverts the frame operator") {
  const Frame rep = repeated_e1_frame();
  const Frame dual = frames::canonical_dual(rep);
  REQUIRE((dual.vectors[0] - 0.5 * rep.vectors[0]).norm() < 1e-14);
  REQUIRE((dual.vectors[1] - 0.5 * rep.vectors[1]).norm() < 1e-14);
  REQUIRE((dual.vectors[2] - rep.vectors[2]).norm() < 1e-14);

  const Frame f = random::random_frame(5, 11, 17);
  const Frame fd = frames::canonical_dual(f);
  Matrix recon = Matrix::Zero(5, 5);
  for (Index i = 0; i < f.size(); ++i)
    recon += f.vectors[i] * fd.vectors[i].adjoint();
  REQUIRE((recon - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE(frames::duality_defect(f, fd) < 1e-10);

  // Parseval frames are their own canonical dual.
  const Frame p = random::random_parseval_frame(3, 8, 5);
  const Frame pd = frames::canonical_dual(p);
  for (Index i = 0; i < p.size(); ++i)
    REQUIRE((p.vectors[i] - pd.vectors[i]).norm() < 1e-12);

  REQUIRE_THROWS_AS(frames::canonical_dual(Frame(2, {Vector::Zero(2)})),
                    precondition_error);
}

TEST_CASE("riesz basis requires exactly dim independent vectors") {
  REQUIRE(frames::is_riesz_basis(standard_basis(4)));
  REQUIRE(!frames::is_riesz_basis(repeated_e1_frame()));

  const Frame f = random::random_frame(5, 5, 2);
  Matrix square(5, 5);
  for (Index i = 0; i < 5; ++i) square.col(i) = f.vectors[i];
  REQUIRE(frames::is_riesz_basis(f) == (std::abs(square.determinant()) > 1e-10));
  REQUIRE(frames::is_riesz_basis(f));
}

TEST_CASE("parseval dilation compresses an orthonormal basis") {
  const frames::OrthogonalDilation triv = frames::dilate_parseval(standard_basis(3));
  REQUIRE((triv.embed - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((triv.projection - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  for (const Frame& f :
       {mercedes_frame(), random::random_parseval_frame(4, 13, 7)}) {
    const frames::OrthogonalDilation d = frames::dilate_parseval(f);
    const Matrix theta = frames::analysis_operator(f);
    REQUIRE(d.ambient_dim == f.size());
    REQUIRE((d.embed.adjoint() * d.embed - Matrix::Identity(f.dim, f.dim))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    const Matrix& p = d.projection;
    REQUIRE(operator_norm(p * p - p) < 1e-10);
    REQUIRE(operator_norm(p - p.adjoint()) < 1e-10);
    REQUIRE(rank_by_singular_values(p) == f.dim);
    for (Index i = 0; i < f.size(); ++i)
      REQUIRE((p * d.basis[i] - d.embed * f.vectors[i]).norm() < 1e-10);
  }

  REQUIRE_THROWS_AS(frames::dilate_parseval(repeated_e1_frame()),
                    precondition_error);
}

TEST_CASE("dual pair dilation yields a riesz basis with biorthogonal dual") {
  const Frame onb = standard_basis(2);
  const frames::OrthogonalDilation triv = frames::dilate_dual_pair(onb, onb);
  for (Index i = 0; i < 2; ++i) {
    REQUIRE((triv.basis[i] - onb.vectors[i]).norm() < 1e-12);
    REQUIRE((triv.dual_basis[i] - onb.vectors[i]).norm() < 1e-12);
  }

  const auto [x, y] = random::random_dual_pair(3, 9, 13);
  const frames::OrthogonalDilation d = frames::dilate_dual_pair(x, y);
  const Index m = x.size();
  Matrix basis(m, m), dual(m, m);
  for (Index i = 0; i < m; ++i) {
    basis.col(i) = d.basis[i];
    dual.col(i) = d.dual_basis[i];
  }
  REQUIRE((dual.adjoint() * basis - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <
          1e-8);
  REQUIRE(rank_by_singular_values(basis) == m);
  const Matrix& p = d.projection;
  REQUIRE(operator_norm(p * p - p) < 1e-8);
  REQUIRE(operator_norm(p - p.adjoint()) < 1e-8);
  for (Index i = 0; i < m; ++i) {
    REQUIRE((p * d.basis[i] - d.embed * x.vectors[i]).norm() < 1e-8);
    REQUIRE((p * d.dual_basis[i] - d.embed * y.vectors[i]).norm() < 1e-8);
  }

  // Fewer vectors than dimensions cannot satisfy duality.
  Vector e1 = Vector::Zero(3);
  e1(0) = Scalar(1.0, 0.0);
  REQUIRE_THROWS_AS(frames::dilate_dual_pair(Frame(3, {e1}), Frame(3, {e1})),
                    precondition_error);

  bool labeled = false;
  try {
    const Frame a = random::random_frame(2, 4, 1);
    const Frame b = random::random_frame(2, 4, 2);
    frames::dilate_dual_pair(a, b);
  } catch (const precondition_error& e) {
    labeled = std::string(e.what()).find("not-a-dual-pair") != std::string::npos;
  }
  REQUIRE(labeled);
}

TEST_CASE("compression never worsens frame bounds") {
  random::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 3 + trial % 4;
    const Frame f = random::random_frame(d, d + 2 + trial % 5, 400 + trial);
    const frames::FrameBounds before = frames::frame_bounds(f);

    const Index r = 1 + trial % (d - 1);
    const Eigen::HouseholderQR<Matrix> qr(rng.matrix(d, d));
    const Matrix u = Matrix(qr.householderQ()).leftCols(r);
    std::vector<Vector> compressed;
    for (const auto& v : f.vectors) {
      Vector w = u.adjoint() * v;
      if (w.norm() > 0.0) compressed.push_back(w);
    }
    const frames::FrameBounds after =
        frames::frame_bounds(Frame(r, compressed));
    REQUIRE(after.lower >= before.lower - 1e-10);
    REQUIRE(after.upper <= before.upper + 1e-10);
  }
}

TEST_CASE("quadrature bounds recover the circle frame integral") {
  // F(t) = (cos t, sin t) on [0, 2pi]: the integral of F F* is pi times the
  // identity, so uniform weights 2pi/n give bounds near pi.
  const int n = 256;
  std::vector<Vector> samples;
  std::vector<double> weights(n, 2.0 * std::numbers::pi / n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    Vector v(2);
    v << Scalar(std::cos(t), 0.0), Scalar(std::sin(t), 0.0);
    samples.push_back(v);
  }
  const frames::FrameBounds b = frames::quadrature_frame_bounds(samples, weights);
  REQUIRE(std::abs(b.lower - std::numbers::pi) < 0.01 * std::numbers::pi);
  REQUIRE(std::abs(b.upper - std::numbers::pi) < 0.01 * std::numbers::pi);

  const frames::FrameBounds single =
      frames::quadrature_frame_bounds({samples[0]}, {1.0});
  REQUIRE(single.lower < 1e-14);

  REQUIRE_THROWS_AS(frames::quadrature_frame_bounds({samples[0]}, {-1.0}),
                    malformed_input);
}

TEST_CASE("malformed frames are rejected") {
  REQUIRE_THROWS_AS(Frame(2, {Vector::Zero(3)}), malformed_input);
  REQUIRE_THROWS_AS(Frame(0, {}), malformed_input);
  Vector bad(2);
  bad << Scalar(std::nan(""), 0.0), Scalar(0.0, 0.0);
  REQUIRE_THROWS_AS(Frame(2, {bad}), malformed_input);
}
