#include "ovmkit/frames.hpp"

#include <utility>

namespace ovmkit::frames {

Frame::Frame(Index dim_, std::vector<Vector> vectors_)
    : dim(dim_), vectors(std::move(vectors_)) {
  if (dim < 1) throw malformed_input("frame: dimension must be at least 1");
  if (vectors.empty()) throw malformed_input("frame: needs at least one vector");
  for (const auto& v : vectors) {
    if (v.size() != dim)
      throw malformed_input("frame: vector length does not match dimension");
    ensure_finite(v, "frame vector");
  }
}

Matrix analysis_operator(const Frame& f) {
  Matrix theta(f.size(), f.dim);
  for (Index i = 0; i < f.size(); ++i) theta.row(i) = f.vectors[i].adjoint();
  return theta;
}

Matrix frame_operator(const Frame& f) {
  Matrix s = Matrix::Zero(f.dim, f.dim);
  for (const auto& v : f.vectors) s += v * v.adjoint();
  return s;
}

FrameBounds frame_bounds(const Frame& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(f));
  const auto& ev = es.eigenvalues();
  return {std::max(0.0, ev(0)), std::max(0.0, ev(ev.size() - 1))};
}

bool is_frame(const Frame& f) {
  const FrameBounds b = frame_bounds(f);
  return b.upper > 0.0 && b.lower > tol::frame_rel * b.upper;
}

bool is_parseval(const Frame& f, double tolerance) {
  return operator_norm(frame_operator(f) - Matrix::Identity(f.dim, f.dim)) <= tolerance;
}

bool is_riesz_basis(const Frame& f) {
  return f.size() == f.dim && is_frame(f);
}

Frame canonical_dual(const Frame& f) {
  const Matrix s = frame_operator(f);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const auto& ev = es.eigenvalues();
  if (ev(ev.size() - 1) <= 0.0 || ev(0) <= tol::frame_rel * ev(ev.size() - 1))
    throw precondition_error("not-a-frame: frame operator is singular, no canonical dual");
  std::vector<Vector> dual;
  dual.reserve(f.vectors.size());
  const Eigen::LDLT<Matrix> solver(s);
  for (const auto& v : f.vectors) dual.push_back(solver.solve(v));
  return Frame(f.dim, std::move(dual));
}

double duality_defect(const Frame& x, const Frame& y) {
  if (x.dim != y.dim || x.size() != y.size())
    throw malformed_input("dual pair: families must share dimension and length");
  Matrix sum = Matrix::Zero(x.dim, x.dim);
  for (Index i = 0; i < x.size(); ++i) sum += x.vectors[i] * y.vectors[i].adjoint();
  return operator_norm(sum - Matrix::Identity(x.dim, x.dim));
}

OrthogonalDilation dilate_parseval(const Frame& f, double tolerance) {
  const double defect =
      operator_norm(frame_operator(f) - Matrix::Identity(f.dim, f.dim));
  if (defect > tolerance)
    throw precondition_error("not-a-frame: family is not Parseval, identity defect " +
                             std::to_string(defect));
  const Index m = f.size();
  OrthogonalDilation d;
  d.ambient_dim = m;
  d.embed = analysis_operator(f);
  d.projection = d.embed * d.embed.adjoint();
  d.basis.reserve(m);
  d.dual_basis.reserve(m);
  for (Index i = 0; i < m; ++i) {
    Vector e = Vector::Zero(m);
    e(i) = Scalar(1.0, 0.0);
    d.basis.push_back(e);
    d.dual_basis.push_back(e);
  }
  return d;
}

OrthogonalDilation dilate_dual_pair(const Frame& x, const Frame& y,
                                    double tolerance) {
  const Index d = x.dim;
  const Index m = x.size();
  if (m < d)
    throw precondition_error(
        "not-a-dual-pair: fewer vectors than dimensions, duality cannot hold");
  const double defect = duality_defect(x, y);
  if (defect > tolerance)
    throw precondition_error("not-a-dual-pair: duality defect " +
                             std::to_string(defect));

  const Matrix theta_x = analysis_operator(x);
  const Matrix theta_y = analysis_operator(y);

  // Coordinates on the ambient space C^m are H + its complement: the first d
  // components live in H, the rest span the orthogonal complement of the range
  // of the y-analysis operator.
  Eigen::JacobiSVD<Matrix> svd(theta_y, Eigen::ComputeFullU);
  const Matrix complement = svd.matrixU().rightCols(m - d);

  Matrix phi(m, m);
  phi.topRows(d) = theta_x.adjoint();
  phi.bottomRows(m - d) = complement.adjoint();

  OrthogonalDilation out;
  out.ambient_dim = m;
  out.embed = Matrix::Zero(m, d);
  out.embed.topRows(d) = Matrix::Identity(d, d);
  out.projection = Matrix::Zero(m, m);
  out.projection.topLeftCorner(d, d) = Matrix::Identity(d, d);

  const Matrix dual = phi.inverse().adjoint();
  out.basis.reserve(m);
  out.dual_basis.reserve(m);
  for (Index i = 0; i < m; ++i) {
    out.basis.push_back(phi.col(i));
    out.dual_basis.push_back(dual.col(i));
  }
  return out;
}

FrameBounds quadrature_frame_bounds(const std::vector<Vector>& samples,
                                    const std::vector<double>& weights) {
  if (samples.empty() || samples.size() != weights.size())
    throw malformed_input("quadrature: need matching nonempty samples and weights");
  const Index d = samples.front().size();
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != d)
      throw malformed_input("quadrature: sample dimensions disagree");
    if (!(weights[i] > 0.0))
      throw malformed_input("quadrature: weights must be positive");
    s += weights[i] * (samples[i] * samples[i].adjoint());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const auto& ev = es.eigenvalues();
  return {std::max(0.0, ev(0)), std::max(0.0, ev(ev.size() - 1))};
}

}  // namespace ovmkit::frames
