#include "ovmkit/algmaps.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace ovmkit::algmaps {

namespace {

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix clip_singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RealVector s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

Matrix polar_factor(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Vector complex_gaussian(std::mt19937_64& gen, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(normal(gen), normal(gen));
  return v;
}

/// Frobenius-orthogonal projection onto the span of the algebra basis and the
/// coordinate solve behind it.
struct SpanProjector {
  const FiniteAlgebra& alg;
  Matrix basis_vec;
  Eigen::LDLT<Matrix> gram;
  bool full_span;

  explicit SpanProjector(const FiniteAlgebra& a) : alg(a) {
    const Index p = a.size();
    basis_vec.resize(a.ambient * a.ambient, p);
    for (Index l = 0; l < p; ++l) basis_vec.col(l) = vec(a.basis[l]);
    gram.compute(basis_vec.adjoint() * basis_vec);
    full_span = p == a.ambient * a.ambient;
  }

  Vector coords(const Matrix& block) const {
    return gram.solve(basis_vec.adjoint() * vec(block));
  }

  Matrix project(const Matrix& block) const { return alg.element(coords(block)); }
};

}  // namespace

Matrix FiniteAlgebra::element(const Vector& coords) const {
  if (coords.size() != size())
    throw malformed_input("algebra element: coordinate length mismatch");
  Matrix out = Matrix::Zero(ambient, ambient);
  for (Index l = 0; l < size(); ++l) out += coords(l) * basis[l];
  return out;
}

Matrix FiniteAlgebra::right_mult_of(const Vector& coords) const {
  if (coords.size() != size())
    throw malformed_input("algebra element: coordinate length mismatch");
  Matrix out = Matrix::Zero(size(), size());
  for (Index l = 0; l < size(); ++l) out += coords(l) * right_mult[l];
  return out;
}

Matrix LinearMapOnAlgebra::apply(const Vector& coords) const {
  if (coords.size() != algebra.size())
    throw malformed_input("map: coordinate length mismatch");
  Matrix out = Matrix::Zero(target_dim, target_dim);
  for (Index l = 0; l < algebra.size(); ++l) out += coords(l) * values[l];
  return out;
}

FiniteAlgebra make_algebra(Index ambient, std::vector<Matrix> basis) {
  if (ambient < 1) throw malformed_input("algebra: ambient size must be positive");
  if (basis.empty()) throw malformed_input("algebra: empty basis");
  for (const auto& b : basis) {
    if (b.rows() != ambient || b.cols() != ambient)
      throw malformed_input("algebra: basis matrices must be ambient sized");
    ensure_finite(b, "algebra basis");
  }
  FiniteAlgebra a;
  a.ambient = ambient;
  a.basis = std::move(basis);
  const Index p = a.size();

  Matrix basis_vec(ambient * ambient, p);
  for (Index l = 0; l < p; ++l) basis_vec.col(l) = vec(a.basis[l]);
  if (rank_by_singular_values(basis_vec) != p)
    throw precondition_error("malformed-algebra: basis is linearly dependent");

  const Eigen::LDLT<Matrix> gram(basis_vec.adjoint() * basis_vec);
  const auto coords_of = [&](const Matrix& m) {
    return Vector(gram.solve(basis_vec.adjoint() * vec(m)));
  };

  a.right_mult.assign(p, Matrix::Zero(p, p));
  for (Index l = 0; l < p; ++l)
    for (Index b = 0; b < p; ++b) {
      const Matrix product = a.basis[b] * a.basis[l];
      const Vector c = coords_of(product);
      const double residual = (a.element(c) - product).norm();
      if (residual > 1e-10 * std::max(1.0, product.norm()))
        throw precondition_error(
            "malformed-algebra: product of basis elements " + std::to_string(b) +
            " and " + std::to_string(l) + " escapes the span, residual " +
            std::to_string(residual));
      a.right_mult[l].col(b) = c;
    }

  const Matrix eye = Matrix::Identity(ambient, ambient);
  a.identity_coords = coords_of(eye);
  if ((a.element(a.identity_coords) - eye).norm() > 1e-10)
    throw precondition_error("malformed-algebra: identity is outside the span");
  return a;
}

FiniteAlgebra diagonal_algebra(int m) {
  if (m < 1) throw malformed_input("diagonal algebra: size must be positive");
  FiniteAlgebra a;
  a.ambient = m;
  for (int i = 0; i < m; ++i) {
    Matrix b = Matrix::Zero(m, m);
    b(i, i) = Scalar(1.0, 0.0);
    a.basis.push_back(std::move(b));
  }
  a.identity_coords = Vector::Constant(m, Scalar(1.0, 0.0));
  a.right_mult.assign(m, Matrix::Zero(m, m));
  for (int l = 0; l < m; ++l) a.right_mult[l](l, l) = Scalar(1.0, 0.0);
  return a;
}

FiniteAlgebra upper_triangular_2() {
  FiniteAlgebra a;
  a.ambient = 2;
  Matrix e11 = Matrix::Zero(2, 2), e12 = Matrix::Zero(2, 2),
         e22 = Matrix::Zero(2, 2);
  e11(0, 0) = Scalar(1.0, 0.0);
  e12(0, 1) = Scalar(1.0, 0.0);
  e22(1, 1) = Scalar(1.0, 0.0);
  a.basis = {e11, e12, e22};
  a.identity_coords = Vector::Zero(3);
  a.identity_coords(0) = Scalar(1.0, 0.0);
  a.identity_coords(2) = Scalar(1.0, 0.0);
  a.right_mult.assign(3, Matrix::Zero(3, 3));
  a.right_mult[0](0, 0) = Scalar(1.0, 0.0);
  a.right_mult[1](1, 0) = Scalar(1.0, 0.0);
  a.right_mult[2](1, 1) = Scalar(1.0, 0.0);
  a.right_mult[2](2, 2) = Scalar(1.0, 0.0);
  return a;
}

FiniteAlgebra full_matrix_algebra(Index k) {
  if (k < 1) throw malformed_input("matrix algebra: size must be positive");
  FiniteAlgebra a;
  a.ambient = k;
  const Index p = k * k;
  a.basis.reserve(p);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) {
      Matrix b = Matrix::Zero(k, k);
      b(r, c) = Scalar(1.0, 0.0);
      a.basis.push_back(std::move(b));
    }
  a.identity_coords = Vector::Zero(p);
  for (Index r = 0; r < k; ++r) a.identity_coords(r * k + r) = Scalar(1.0, 0.0);
  a.right_mult.assign(p, Matrix::Zero(p, p));
  for (Index c = 0; c < k; ++c)
    for (Index d = 0; d < k; ++d) {
      Matrix& rm = a.right_mult[c * k + d];
      for (Index r = 0; r < k; ++r) rm(r * k + d, r * k + c) = Scalar(1.0, 0.0);
    }
  return a;
}

LinearMapOnAlgebra make_map(FiniteAlgebra algebra, std::vector<Matrix> values) {
  if (static_cast<Index>(values.size()) != algebra.size())
    throw malformed_input("map: one value per basis element required");
  if (values.empty() || values.front().rows() < 1)
    throw malformed_input("map: target dimension must be positive");
  const Index v = values.front().rows();
  for (const auto& m : values) {
    if (m.rows() != v || m.cols() != v)
      throw malformed_input("map: values must be square and equally sized");
    ensure_finite(m, "map value");
  }
  LinearMapOnAlgebra phi;
  phi.algebra = std::move(algebra);
  phi.target_dim = v;
  phi.values = std::move(values);
  return phi;
}

LinearMapOnAlgebra identity_representation(const FiniteAlgebra& algebra) {
  return make_map(algebra, algebra.basis);
}

LinearMapOnAlgebra transpose_map(Index k) {
  FiniteAlgebra a = full_matrix_algebra(k);
  std::vector<Matrix> values;
  values.reserve(k * k);
  for (Index r = 0; r < k; ++r)
    for (Index c = 0; c < k; ++c) {
      Matrix t = Matrix::Zero(k, k);
      t(c, r) = Scalar(1.0, 0.0);
      values.push_back(std::move(t));
    }
  return make_map(std::move(a), std::move(values));
}

AlgebraicDilation build_algebraic_dilation(const LinearMapOnAlgebra& phi) {
  const Index p = phi.algebra.size();
  const Index v = phi.target_dim;

  // Generator (l, j) is the map a -> phi(a b_l) e_j, stored as a v x p matrix
  // whose column b is phi(b_b b_l) e_j.
  Matrix generators(v * p, p * v);
  for (Index l = 0; l < p; ++l) {
    Matrix stacked(v * p, v);  // columns j; rows grouped by basis index b
    for (Index b = 0; b < p; ++b)
      stacked.middleRows(b * v, v) = phi.apply(phi.algebra.right_mult[l].col(b));
    for (Index j = 0; j < v; ++j) {
      Matrix gen(v, p);
      for (Index b = 0; b < p; ++b) gen.col(b) = stacked.block(b * v, j, v, 1);
      generators.col(l * v + j) = vec(gen);
    }
  }

  AlgebraicDilation dil;
  const Index rank = rank_by_singular_values(generators);
  dil.w_dim = rank;
  dil.canonical = rank == v * p;
  if (dil.canonical)
    dil.w_basis = Matrix::Identity(v * p, v * p);
  else
    dil.w_basis = orthonormal_range_basis(generators);

  Matrix t_full(v * p, v);
  for (Index b = 0; b < p; ++b) t_full.middleRows(b * v, v) = phi.values[b];
  Matrix s_full = Matrix::Zero(v, v * p);
  for (Index b = 0; b < p; ++b)
    s_full.middleCols(b * v, v) =
        phi.algebra.identity_coords(b) * Matrix::Identity(v, v);

  dil.pi.reserve(p);
  for (Index l = 0; l < p; ++l) {
    const Matrix& rm = phi.algebra.right_mult[l];
    if (dil.canonical) {
      // Right translation acts on coordinate matrices as w -> w rm, which on
      // stacked columns is the block pattern of rm transposed; entries are
      // copied, never recomputed, so exact structure constants stay exact.
      Matrix pi_l = Matrix::Zero(v * p, v * p);
      for (Index r = 0; r < p; ++r)
        for (Index c = 0; c < p; ++c) {
          const Scalar entry = rm(c, r);
          if (entry != Scalar(0.0, 0.0))
            pi_l.block(r * v, c * v, v, v) = entry * Matrix::Identity(v, v);
        }
      dil.pi.push_back(std::move(pi_l));
    } else {
      Matrix translated(v * p, dil.w_dim);
      for (Index q = 0; q < dil.w_dim; ++q) {
        const Matrix w = unvec(dil.w_basis.col(q), v, p);
        translated.col(q) = vec(Matrix(w * rm));
      }
      Matrix pi_l = dil.w_basis.adjoint() * translated;
      const double escape = (translated - dil.w_basis * pi_l).norm();
      if (escape > 1e-8 * std::max(1.0, translated.norm()))
        throw error("algebraic dilation: span is not invariant under right "
                    "translation, escape " + std::to_string(escape));
      dil.pi.push_back(std::move(pi_l));
    }
  }

  if (dil.canonical) {
    dil.t_map = std::move(t_full);
    dil.s_map = std::move(s_full);
  } else {
    dil.t_map = dil.w_basis.adjoint() * t_full;
    dil.s_map = s_full * dil.w_basis;
  }

  // pi(1) = I holds algebraically; pin it down to the last bit by folding the
  // rounding residual into the final basis direction carrying the identity.
  // u + fl(1 - u) == 1 in IEEE arithmetic for u in [0, 2], so re-evaluating
  // sum ic_l pi_l in index order afterwards reproduces the identity exactly.
  {
    Index last = -1;
    for (Index l = 0; l < p; ++l) {
      const Scalar c = phi.algebra.identity_coords(l);
      if (c == Scalar(1.0, 0.0))
        last = l;
      else if (c != Scalar(0.0, 0.0))
        last = -2;
    }
    if (last >= 0) {
      Matrix partial = Matrix::Zero(dil.w_dim, dil.w_dim);
      for (Index l = 0; l < p; ++l)
        if (l != last) partial += phi.algebra.identity_coords(l) * dil.pi[l];
      dil.pi[last] = Matrix::Identity(dil.w_dim, dil.w_dim) - partial;
    }
  }

  double scale = 1.0;
  for (const auto& m : phi.values) scale = std::max(scale, m.norm());
  for (Index l = 0; l < p; ++l) {
    const double factor_residual =
        (dil.s_map * dil.pi[l] * dil.t_map - phi.values[l]).norm();
    if (factor_residual > 1e-10 * scale)
      throw error("algebraic dilation: factorization check failed on basis " +
                  std::to_string(l) + ", residual " +
                  std::to_string(factor_residual));
  }
  for (Index x = 0; x < p; ++x)
    for (Index y = 0; y < p; ++y) {
      const Vector product_coords = phi.algebra.right_mult[y].col(x);
      Matrix lhs = Matrix::Zero(dil.w_dim, dil.w_dim);
      for (Index c = 0; c < p; ++c) lhs += product_coords(c) * dil.pi[c];
      const double residual = (lhs - dil.pi[x] * dil.pi[y]).norm();
      if (residual > 1e-10 * std::max(1.0, lhs.norm()))
        throw error("algebraic dilation: pi fails multiplicativity on pair (" +
                    std::to_string(x) + ", " + std::to_string(y) +
                    "), residual " + std::to_string(residual));
    }
  const Matrix unit = dilation_pi(dil, phi.algebra.identity_coords);
  if ((unit - Matrix::Identity(dil.w_dim, dil.w_dim)).norm() > 1e-10)
    throw error("algebraic dilation: pi is not unital");
  return dil;
}

Matrix dilation_pi(const AlgebraicDilation& dil, const Vector& coords) {
  if (coords.size() != static_cast<Index>(dil.pi.size()))
    throw malformed_input("pi: coordinate length mismatch");
  Matrix out = Matrix::Zero(dil.w_dim, dil.w_dim);
  for (Index l = 0; l < coords.size(); ++l) out += coords(l) * dil.pi[l];
  return out;
}

double algebra_ball_image_norm(const Matrix& coefficient_map,
                               const FiniteAlgebra& algebra, int restarts,
                               int iterations) {
  const Index p = algebra.size();
  if (coefficient_map.cols() != p)
    throw malformed_input("image norm: coefficient map must have one column "
                          "per basis element");
  const SpanProjector proj(algebra);
  std::mt19937_64 gen(0x0ddba11u);

  const auto feasible_scale = [&](Vector& u) {
    const double s = operator_norm(algebra.element(u));
    if (s > 1.0) u /= s * (1.0 + 1e-13);
  };

  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Vector u;
    if (r == 0) {
      u = algebra.identity_coords;
    } else {
      u = complex_gaussian(gen, p);
    }
    const double init_norm = operator_norm(algebra.element(u));
    if (init_norm > 0.0) u /= init_norm;

    double prev = -1.0;
    for (int it = 0; it < iterations; ++it) {
      const Vector y = coefficient_map * u;
      const double val = y.norm();
      best = std::max(best, val);
      if (std::abs(val - prev) < 1e-9 * std::max(1.0, val)) break;
      prev = val;
      if (val < 1e-14 && it > 0) break;

      const Vector g = val > 0.0
                           ? Vector(coefficient_map.adjoint() * (y / val))
                           : Vector(coefficient_map.adjoint() *
                                    complex_gaussian(gen, y.size()).normalized());
      const Vector rep = proj.gram.solve(g);
      if (rep.norm() < 1e-15) break;
      Matrix a = polar_factor(algebra.element(rep));
      if (!proj.full_span) {
        for (int round = 0; round < 10; ++round)
          a = clip_singular_values(proj.project(a));
        a = proj.project(a);
      }
      u = proj.coords(a);
      feasible_scale(u);
    }
  }
  return best;
}

DilationNorms dilation_operator_norms(const AlgebraicDilation& dil,
                                      const LinearMapOnAlgebra& phi) {
  DilationNorms out;
  if (dil.w_dim == 0) return out;
  const Index p = phi.algebra.size();
  const Index v = phi.target_dim;

  out.t_norm = amplification_norm(phi, 1);

  std::vector<Matrix> candidates;
  for (Index q = 0; q < dil.w_dim; ++q)
    candidates.push_back(unvec(dil.w_basis.col(q), v, p));
  std::mt19937_64 gen(0xd11a7e5u);
  for (int r = 0; r < 16; ++r) {
    Vector c = complex_gaussian(gen, dil.w_dim).normalized();
    candidates.push_back(unvec(Vector(dil.w_basis * c), v, p));
  }

  for (const Matrix& w : candidates) {
    const double denom = algebra_ball_image_norm(w, phi.algebra);
    if (denom < 1e-12) continue;
    out.s_norm =
        std::max(out.s_norm,
                 (w * phi.algebra.identity_coords).norm() / denom);
    for (Index l = 0; l < p; ++l) {
      const double basis_norm = operator_norm(phi.algebra.basis[l]);
      if (basis_norm < 1e-15) continue;
      const double numer =
          algebra_ball_image_norm(w * phi.algebra.right_mult[l], phi.algebra);
      out.pi_ratio_max =
          std::max(out.pi_ratio_max, numer / denom / basis_norm);
    }
  }
  return out;
}

double amplification_norm(const LinearMapOnAlgebra& phi, int level,
                          int restarts, int iterations) {
  if (level < 1) throw malformed_input("amplification: level must be positive");
  const Index n = level;
  const Index k = phi.algebra.ambient;
  const Index v = phi.target_dim;
  const Index p = phi.algebra.size();
  if (n * k > limits::max_amplified_dim)
    throw resource_error("amplification: level " + std::to_string(level) +
                         " blows the amplified dimension past " +
                         std::to_string(limits::max_amplified_dim));

  const SpanProjector proj(phi.algebra);
  std::mt19937_64 gen(0x5ca1ab1eu + 0x9e37u * static_cast<unsigned>(level));

  std::vector<Vector> u(n * n, Vector::Zero(p));

  const auto assemble = [&]() {
    Matrix a(n * k, n * k);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        a.block(i * k, j * k, k, k) = phi.algebra.element(u[i * n + j]);
    return a;
  };
  const auto amplified = [&]() {
    Matrix f = Matrix::Zero(n * v, n * v);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const Vector& c = u[i * n + j];
        for (Index l = 0; l < p; ++l)
          if (c(l) != Scalar(0.0, 0.0))
            f.block(i * v, j * v, v, v) += c(l) * phi.values[l];
      }
    return f;
  };
  const auto make_feasible = [&]() {
    const double s = operator_norm(assemble());
    if (s > 1.0)
      for (auto& c : u) c /= s * (1.0 + 1e-13);
  };

  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    if (r == 0) {
      for (auto& c : u) c.setZero();
      for (Index i = 0; i < n; ++i) u[i * n + i] = phi.algebra.identity_coords;
    } else {
      for (auto& c : u) c = complex_gaussian(gen, p);
    }
    make_feasible();

    double prev = -1.0;
    for (int it = 0; it < iterations; ++it) {
      const Matrix f = amplified();
      Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double val = svd.singularValues()(0);
      best = std::max(best, val);
      if (std::abs(val - prev) < 1e-9 * std::max(1.0, val)) break;
      prev = val;
      if (val < 1e-14) break;

      const Vector xi = svd.matrixV().col(0);
      const Vector eta = svd.matrixU().col(0);

      Matrix g(n * k, n * k);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
          Vector lin(p);
          for (Index l = 0; l < p; ++l)
            lin(l) = std::conj(eta.segment(i * v, v)
                                   .dot(phi.values[l] * xi.segment(j * v, v)));
          g.block(i * k, j * k, k, k) =
              phi.algebra.element(proj.gram.solve(lin));
        }
      Matrix a = polar_factor(g);
      if (!proj.full_span) {
        for (int round = 0; round < 10; ++round) {
          for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
              a.block(i * k, j * k, k, k) =
                  proj.project(a.block(i * k, j * k, k, k));
          a = clip_singular_values(a);
        }
      }
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          u[i * n + j] = proj.coords(a.block(i * k, j * k, k, k));
      make_feasible();
    }
  }
  return best;
}

CbProfile cb_profile(const LinearMapOnAlgebra& phi, int max_level) {
  if (max_level < 1)
    throw malformed_input("profile: need at least one level");
  CbProfile profile;
  double running = 0.0;
  for (int n = 1; n <= max_level; ++n) {
    running = std::max(running, amplification_norm(phi, n));
    profile.levels.push_back(n);
    profile.lower_bounds.push_back(running);
  }
  return profile;
}

}  // namespace ovmkit::algmaps
