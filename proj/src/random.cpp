#include "ovmkit/random.hpp"

#include <cmath>
#include <numbers>

namespace ovmkit::random {

double Rng::uniform() {
  // Map to (0, 1] so logarithms below are always finite.
  const std::uint64_t bits = gen_();
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  return radius * std::cos(2.0 * std::numbers::pi * uniform());
}

Scalar Rng::complex_normal() {
  const double radius = std::sqrt(-std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  return Scalar(radius * std::cos(angle), radius * std::sin(angle));
}

Vector Rng::vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_normal();
  return v;
}

Matrix Rng::matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = complex_normal();
  return m;
}

frames::Frame random_frame(Index dim, Index count, std::uint64_t seed) {
  if (count < dim)
    throw precondition_error("random frame: need at least dim vectors to span");
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Vector> vs;
    vs.reserve(count);
    for (Index i = 0; i < count; ++i) vs.push_back(rng.vector(dim));
    frames::Frame f(dim, std::move(vs));
    if (frames::is_frame(f)) return f;
  }
  throw error("random frame: sampling kept producing degenerate families");
}

frames::Frame random_parseval_frame(Index dim, Index count, std::uint64_t seed) {
  if (count < dim)
    throw precondition_error("random frame: need at least dim vectors to span");
  Rng rng(seed);
  const Matrix g = rng.matrix(count, dim);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = Matrix(qr.householderQ()).leftCols(dim);
  std::vector<Vector> vs;
  vs.reserve(count);
  for (Index i = 0; i < count; ++i) vs.push_back(q.row(i).adjoint());
  return frames::Frame(dim, std::move(vs));
}

std::pair<frames::Frame, frames::Frame> random_dual_pair(Index dim, Index count,
                                                         std::uint64_t seed) {
  frames::Frame x = random_frame(dim, count, seed);
  frames::Frame y = frames::canonical_dual(x);
  return {std::move(x), std::move(y)};
}

framings::Framing random_framing(Index dim, Index count, std::uint64_t seed) {
  auto [x, y] = random_dual_pair(dim, count, seed);
  Rng rng(seed ^ 0x5eed5eedULL);
  std::vector<Vector> sx, sy;
  sx.reserve(count);
  sy.reserve(count);
  for (Index i = 0; i < count; ++i) {
    const double magnitude = 0.2 + 4.8 * rng.uniform();
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    const Scalar c = std::polar(magnitude, angle);
    sx.push_back(c * x.vectors[i]);
    sy.push_back(y.vectors[i] / std::conj(c));
  }
  return framings::Framing(dim, std::move(sx), std::move(sy));
}

ovm::FiniteOVM random_positive_ovm(int atoms, Index dim, std::uint64_t seed,
                                   bool normalize) {
  if (atoms < 1) throw malformed_input("random measure: need at least one atom");
  Rng rng(seed);
  std::vector<Matrix> as;
  as.reserve(atoms);
  Matrix total = Matrix::Zero(dim, dim);
  for (int i = 0; i < atoms; ++i) {
    const Matrix g = rng.matrix(dim, dim);
    Matrix a = g * g.adjoint() / static_cast<double>(atoms);
    total += a;
    as.push_back(std::move(a));
  }
  if (normalize) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(total);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw error("random measure: total measure failed to be invertible");
    const Matrix root = es.operatorInverseSqrt();
    for (auto& a : as) a = root * a * root;
  }
  return ovm::FiniteOVM(dim, dim, std::move(as));
}

ovm::FiniteOVM random_ovm(int atoms, Index domain_dim, Index range_dim,
                          std::uint64_t seed) {
  if (atoms < 1) throw malformed_input("random measure: need at least one atom");
  Rng rng(seed);
  std::vector<Matrix> as;
  as.reserve(atoms);
  for (int i = 0; i < atoms; ++i) as.push_back(rng.matrix(range_dim, domain_dim));
  return ovm::FiniteOVM(domain_dim, range_dim, std::move(as));
}

algmaps::LinearMapOnAlgebra random_map(const algmaps::FiniteAlgebra& algebra,
                                       Index target_dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> values;
  values.reserve(algebra.size());
  for (Index l = 0; l < algebra.size(); ++l)
    values.push_back(rng.matrix(target_dim, target_dim));
  return algmaps::make_map(algebra, std::move(values));
}

}  // namespace ovmkit::random
