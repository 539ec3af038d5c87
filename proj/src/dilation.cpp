#include "ovmkit/dilation.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <utility>

namespace ovmkit::dilation {

namespace {

Vector complex_gaussian(std::mt19937_64& gen, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(normal(gen), normal(gen));
  return v;
}

// Norm of every block subset sum, indexed by event mask.
std::vector<double> subset_sum_norms(const std::vector<Vector>& ambient,
                                     Index range_dim) {
  const int m = static_cast<int>(ambient.size());
  const Mask omega = full_mask(m);
  std::vector<double> g(static_cast<std::size_t>(omega) + 1, 0.0);
  Vector sum = Vector::Zero(range_dim);
  Mask prev = 0;
  for (Mask k = 1; k <= omega; ++k) {
    const Mask b = k ^ (k >> 1);
    if ((k & 0xFFF) == 0) {
      sum.setZero();
      for (int i = 0; i < m; ++i)
        if (b & (Mask{1} << i)) sum += ambient[i];
    } else {
      const Mask flip = b ^ prev;
      const int i = std::countr_zero(flip);
      if (b & flip)
        sum += ambient[i];
      else
        sum -= ambient[i];
    }
    prev = b;
    g[b] = sum.norm();
  }
  return g;
}

}  // namespace

ElementaryDilationSystem build_elementary(const ovm::FiniteOVM& e) {
  ElementaryDilationSystem sys;
  sys.source = e;
  const int m = e.space.atom_count;
  sys.range_bases.reserve(m);
  sys.offsets.reserve(m);
  Index total = 0;
  for (int i = 0; i < m; ++i) {
    Matrix q = orthonormal_range_basis(e.atoms[i], tol::rank_rel);
    sys.offsets.push_back(total);
    total += q.cols();
    sys.range_bases.push_back(std::move(q));
  }
  sys.total_dim = total;
  sys.s_map = Matrix::Zero(e.range_dim, total);
  sys.t_map = Matrix::Zero(total, e.domain_dim);
  for (int i = 0; i < m; ++i) {
    const Index r = sys.block_rank(i);
    if (r == 0) continue;
    sys.s_map.middleCols(sys.offsets[i], r) = sys.range_bases[i];
    sys.t_map.middleRows(sys.offsets[i], r) =
        sys.range_bases[i].adjoint() * e.atoms[i];
  }
  return sys;
}

ElementaryVector vector_from_ambient(const ElementaryDilationSystem& sys,
                                     const std::vector<Vector>& components) {
  const int m = sys.atom_count();
  if (static_cast<int>(components.size()) != m)
    throw malformed_input("elementary vector: needs one component per atom");
  ElementaryVector f;
  f.coords.reserve(m);
  for (int i = 0; i < m; ++i) {
    if (components[i].size() != sys.source.range_dim)
      throw malformed_input("elementary vector: component dimension mismatch");
    Vector c = sys.range_bases[i].adjoint() * components[i];
    const double residual = (sys.range_bases[i] * c - components[i]).norm();
    if (residual > tol::range_residual * std::max(1.0, components[i].norm()))
      throw precondition_error("elementary vector: component " +
                               std::to_string(i) +
                               " is outside the range of its atom, residual " +
                               std::to_string(residual));
    f.coords.push_back(std::move(c));
  }
  return f;
}

ElementaryVector vector_from_stacked(const ElementaryDilationSystem& sys,
                                     const Vector& stacked) {
  if (stacked.size() != sys.total_dim)
    throw malformed_input("elementary vector: stacked length mismatch");
  ElementaryVector f;
  f.coords.reserve(sys.atom_count());
  for (int i = 0; i < sys.atom_count(); ++i)
    f.coords.push_back(stacked.segment(sys.offsets[i], sys.block_rank(i)));
  return f;
}

Vector stack(const ElementaryDilationSystem& sys, const ElementaryVector& f) {
  Vector out(sys.total_dim);
  for (int i = 0; i < sys.atom_count(); ++i)
    out.segment(sys.offsets[i], sys.block_rank(i)) = f.coords[i];
  return out;
}

ElementaryVector generated_vector(const ElementaryDilationSystem& sys,
                                  const std::vector<Mask>& events,
                                  const std::vector<Scalar>& coefficients,
                                  const std::vector<Vector>& points) {
  if (events.size() != coefficients.size() || events.size() != points.size())
    throw malformed_input("generated vector: argument lists must align");
  ElementaryVector f;
  for (int i = 0; i < sys.atom_count(); ++i)
    f.coords.push_back(Vector::Zero(sys.block_rank(i)));
  for (std::size_t j = 0; j < events.size(); ++j) {
    if (!sys.source.space.admits(events[j]))
      throw malformed_input("generated vector: event out of range");
    if (points[j].size() != sys.source.domain_dim)
      throw malformed_input("generated vector: point dimension mismatch");
    for (int i = 0; i < sys.atom_count(); ++i) {
      if (!(events[j] & (Mask{1} << i)) || sys.block_rank(i) == 0) continue;
      f.coords[i] += coefficients[j] *
                     (sys.t_map.middleRows(sys.offsets[i], sys.block_rank(i)) *
                      points[j]);
    }
  }
  return f;
}

Vector apply_s(const ElementaryDilationSystem& sys, const ElementaryVector& f) {
  Vector out = Vector::Zero(sys.source.range_dim);
  for (int i = 0; i < sys.atom_count(); ++i)
    if (sys.block_rank(i) > 0) out += sys.range_bases[i] * f.coords[i];
  return out;
}

ElementaryVector apply_t(const ElementaryDilationSystem& sys, const Vector& x) {
  if (x.size() != sys.source.domain_dim)
    throw malformed_input("apply_t: dimension mismatch");
  ElementaryVector f;
  for (int i = 0; i < sys.atom_count(); ++i)
    f.coords.push_back(sys.t_map.middleRows(sys.offsets[i], sys.block_rank(i)) *
                       x);
  return f;
}

ElementaryVector apply_f(const ElementaryDilationSystem& sys, Mask b,
                         const ElementaryVector& f) {
  if (!sys.source.space.admits(b))
    throw malformed_input("apply_f: event out of range");
  ElementaryVector out;
  for (int i = 0; i < sys.atom_count(); ++i) {
    if (b & (Mask{1} << i))
      out.coords.push_back(f.coords[i]);
    else
      out.coords.push_back(Vector::Zero(sys.block_rank(i)));
  }
  return out;
}

double alpha_norm(const ElementaryDilationSystem& sys,
                  const ElementaryVector& f) {
  const int m = sys.atom_count();
  if (m > limits::max_alpha_atoms)
    throw resource_error(
        "alpha norm: event enumeration over " + std::to_string(m) +
        " atoms exceeds the exhaustive limit of " +
        std::to_string(limits::max_alpha_atoms));
  if (static_cast<int>(f.coords.size()) != m)
    throw malformed_input("alpha norm: block count mismatch");

  const Mask omega = sys.source.space.omega();
  double best = 0.0;
  if (m <= limits::exhaustive_atoms) {
    for (Mask b = 1; b <= omega; ++b) {
      Vector sum = Vector::Zero(sys.source.range_dim);
      for (int i = 0; i < m; ++i)
        if ((b & (Mask{1} << i)) && sys.block_rank(i) > 0)
          sum += sys.range_bases[i] * f.coords[i];
      best = std::max(best, sum.norm());
    }
    return best;
  }
  std::vector<Vector> ambient;
  ambient.reserve(m);
  for (int i = 0; i < m; ++i) {
    if (sys.block_rank(i) > 0)
      ambient.push_back(sys.range_bases[i] * f.coords[i]);
    else
      ambient.push_back(Vector::Zero(sys.source.range_dim));
  }
  for (double g : subset_sum_norms(ambient, sys.source.range_dim))
    best = std::max(best, g);
  return best;
}

DilationNormReport verify_dilation_norm_conditions(
    const ElementaryDilationSystem& sys, int vector_samples,
    std::uint64_t seed) {
  const int m = sys.atom_count();
  if (m > limits::max_alpha_atoms)
    throw resource_error("norm conditions: too many atoms for event enumeration");
  const Mask omega = sys.source.space.omega();
  const Index d = sys.source.domain_dim;
  const Index dp = sys.source.range_dim;
  const double measure_norm = ovm::ovm_norm(sys.source);

  DilationNormReport report;
  report.samples = vector_samples;
  report.s_contractive = true;
  report.t_dominated = true;
  report.f_contractive = true;

  std::mt19937_64 gen(seed);
  for (int t = 0; t < vector_samples; ++t) {
    ElementaryVector f = vector_from_stacked(sys, complex_gaussian(gen, sys.total_dim));
    std::vector<Vector> ambient;
    ambient.reserve(m);
    for (int i = 0; i < m; ++i)
      ambient.push_back(sys.block_rank(i) > 0
                            ? Vector(sys.range_bases[i] * f.coords[i])
                            : Vector(Vector::Zero(dp)));
    std::vector<double> g = subset_sum_norms(ambient, dp);
    double alpha = 0.0;
    for (double v : g) alpha = std::max(alpha, v);
    if (alpha == 0.0) continue;

    const double s_ratio = g[omega] / alpha;
    report.worst_s_ratio = std::max(report.worst_s_ratio, s_ratio);
    if (s_ratio > 1.0 + 1e-12) {
      report.s_contractive = false;
      if (!report.counterexample) report.counterexample = f;
    }

    // Subset-maximum sweep gives the alpha norm of F(B)f for every B at once.
    if (m <= 16) {
      std::vector<double> h = g;
      for (int bit = 0; bit < m; ++bit)
        for (Mask b = 0; b <= omega; ++b)
          if (b & (Mask{1} << bit))
            h[b] = std::max(h[b], h[b ^ (Mask{1} << bit)]);
      for (Mask b = 0; b <= omega; ++b) {
        const double ratio = h[b] / alpha;
        report.worst_f_ratio = std::max(report.worst_f_ratio, ratio);
        if (ratio > 1.0 + 1e-12) {
          report.f_contractive = false;
          if (!report.counterexample) report.counterexample = f;
        }
      }
    } else {
      std::uniform_int_distribution<Mask> pick(0, omega);
      for (int r = 0; r < 128; ++r) {
        const Mask b = pick(gen);
        double h = 0.0;
        Mask sub = b;
        while (true) {
          h = std::max(h, g[sub]);
          if (sub == 0) break;
          sub = (sub - 1) & b;
        }
        const double ratio = h / alpha;
        report.worst_f_ratio = std::max(report.worst_f_ratio, ratio);
        if (ratio > 1.0 + 1e-12) {
          report.f_contractive = false;
          if (!report.counterexample) report.counterexample = f;
        }
      }
    }
  }

  for (int t = 0; t < vector_samples; ++t) {
    const Vector x = complex_gaussian(gen, d);
    const double bound = measure_norm * x.norm();
    const double val = alpha_norm(sys, apply_t(sys, x));
    report.worst_t_excess = std::max(report.worst_t_excess, val - bound);
    if (val > bound + 1e-10 * std::max(1.0, bound)) report.t_dominated = false;
  }

  // The blocks of F are coordinate projections; pairwise annihilation of the
  // atoms plus additivity forces F(A)F(B) = F(A & B) for every pair of events,
  // so the atom-level products carry the whole spectrality check.
  const GenericDilationSystem dense = to_generic(sys);
  double worst = 0.0;
  Matrix sum = Matrix::Zero(sys.total_dim, sys.total_dim);
  for (int i = 0; i < m; ++i) {
    const Matrix& fi = dense.f_atoms[i];
    sum += fi;
    worst = std::max(worst, (fi - fi.adjoint()).norm());
    worst = std::max(worst, (fi * fi - fi).norm());
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      worst = std::max(worst, (fi * dense.f_atoms[j]).norm());
    }
  }
  const double omega_defect =
      (sum - Matrix::Identity(sys.total_dim, sys.total_dim)).norm();
  report.worst_f_residual = std::max(worst, omega_defect);
  report.f_projection_valued = worst <= tol::classify;
  report.f_spectral = worst <= tol::classify;
  report.f_probability = omega_defect <= tol::classify;

  report.ok = report.s_contractive && report.t_dominated &&
              report.f_contractive && report.f_projection_valued &&
              report.f_probability && report.f_spectral;
  return report;
}

GenericDilationSystem to_generic(const ElementaryDilationSystem& sys) {
  GenericDilationSystem g;
  g.z_dim = sys.total_dim;
  g.s_map = sys.s_map;
  g.t_map = sys.t_map;
  g.f_atoms.reserve(sys.atom_count());
  for (int i = 0; i < sys.atom_count(); ++i) {
    Matrix f = Matrix::Zero(sys.total_dim, sys.total_dim);
    const Index r = sys.block_rank(i);
    if (r > 0)
      f.block(sys.offsets[i], sys.offsets[i], r, r) = Matrix::Identity(r, r);
    g.f_atoms.push_back(std::move(f));
  }
  return g;
}

namespace {

void check_shapes(const GenericDilationSystem& sys, const ovm::FiniteOVM& e) {
  const int m = e.space.atom_count;
  if (static_cast<int>(sys.f_atoms.size()) != m)
    throw malformed_input("dilation system: atom count mismatch with measure");
  if (sys.s_map.rows() != e.range_dim || sys.s_map.cols() != sys.z_dim ||
      sys.t_map.rows() != sys.z_dim || sys.t_map.cols() != e.domain_dim)
    throw malformed_input("dilation system: map shapes do not match");
  for (const auto& f : sys.f_atoms)
    if (f.rows() != sys.z_dim || f.cols() != sys.z_dim)
      throw malformed_input("dilation system: F atom shape mismatch");
}

// Columns F({i}) T e_j; by additivity in the event they span F(Sigma) T X.
Matrix span_generators(const GenericDilationSystem& sys, Index domain_dim) {
  const int m = static_cast<int>(sys.f_atoms.size());
  Matrix gen(sys.z_dim, static_cast<Index>(m) * domain_dim);
  for (int i = 0; i < m; ++i)
    gen.middleCols(static_cast<Index>(i) * domain_dim, domain_dim) =
        sys.f_atoms[i] * sys.t_map;
  return gen;
}

}  // namespace

MinimalityReport verify_generic(const GenericDilationSystem& sys,
                                const ovm::FiniteOVM& e, double tolerance) {
  check_shapes(sys, e);
  const int m = e.space.atom_count;
  if (m > limits::max_alpha_atoms)
    throw resource_error("verification: event enumeration limit exceeded");
  const Mask omega = e.space.omega();

  MinimalityReport report;
  report.z_dim = sys.z_dim;

  std::vector<Matrix> factored;
  factored.reserve(m);
  for (int i = 0; i < m; ++i)
    factored.push_back(sys.s_map * sys.f_atoms[i] * sys.t_map);

  for (Mask b = 0; b <= omega; ++b) {
    Matrix lhs = Matrix::Zero(e.range_dim, e.domain_dim);
    Matrix rhs = Matrix::Zero(e.range_dim, e.domain_dim);
    for (int i = 0; i < m; ++i)
      if (b & (Mask{1} << i)) {
        lhs += e.atoms[i];
        rhs += factored[i];
      }
    const double residual = (lhs - rhs).norm();
    if (residual > report.worst_factorization_residual) {
      report.worst_factorization_residual = residual;
      report.worst_mask = b;
    }
  }

  const Matrix generators = span_generators(sys, e.domain_dim);
  const Matrix span_basis = orthonormal_range_basis(generators);
  report.span_dim = span_basis.cols();
  report.linearly_minimal = report.span_dim == sys.z_dim;

  if (span_basis.cols() > 0) {
    const Matrix s_on_span = sys.s_map * span_basis;
    report.kernel_dim = orthonormal_kernel_basis(s_on_span).cols();
  }

  // A combination of pairs (B, x) vanishes in the elementary space exactly
  // when it vanishes on every singleton generator, so the kernel of the
  // singleton-generator matrix is a basis of relations; injectivity means the
  // present system kills the same relations.
  const ElementaryDilationSystem elem = build_elementary(e);
  Matrix elementary_gen(elem.total_dim, static_cast<Index>(m) * e.domain_dim);
  for (int i = 0; i < m; ++i) {
    Matrix col = Matrix::Zero(elem.total_dim, e.domain_dim);
    const Index r = elem.block_rank(i);
    if (r > 0)
      col.middleRows(elem.offsets[i], r) =
          elem.t_map.middleRows(elem.offsets[i], r);
    elementary_gen.middleCols(static_cast<Index>(i) * e.domain_dim,
                              e.domain_dim) = col;
  }
  const Matrix relations = orthonormal_kernel_basis(elementary_gen);
  if (relations.cols() > 0)
    report.injectivity_residual = operator_norm(generators * relations);
  report.injective = report.injectivity_residual <= tolerance;
  return report;
}

std::pair<ovm::FiniteOVM, GenericDilationSystem> example_3_9(
    int support_atoms, int extra_atoms,
    const std::vector<Scalar>& mean_weights) {
  if (support_atoms < 1 || extra_atoms < 0)
    throw malformed_input("example: needs at least one support atom");
  if (static_cast<int>(mean_weights.size()) != support_atoms)
    throw malformed_input("malformed functional: one weight per support atom");
  Scalar total(0.0, 0.0);
  for (const Scalar& w : mean_weights) total += w;
  if (std::abs(total - Scalar(1.0, 0.0)) > 1e-12)
    throw malformed_input(
        "malformed functional: weights must sum to 1 so the functional fixes "
        "the constant function");

  const int k = support_atoms;
  const int j = extra_atoms;
  std::vector<Matrix> atoms;
  for (int i = 0; i < k + j; ++i) {
    Matrix a = Matrix::Zero(k, k);
    if (i < k) a(i, i) = Scalar(1.0, 0.0);
    atoms.push_back(std::move(a));
  }
  ovm::FiniteOVM phi(k, k, std::move(atoms));

  GenericDilationSystem big;
  big.z_dim = k + j;
  for (int i = 0; i < k + j; ++i) {
    Matrix f = Matrix::Zero(k + j, k + j);
    f(i, i) = Scalar(1.0, 0.0);
    big.f_atoms.push_back(std::move(f));
  }
  big.s_map = Matrix::Zero(k, k + j);
  big.s_map.leftCols(k) = Matrix::Identity(k, k);
  big.t_map = Matrix::Zero(k + j, k);
  big.t_map.topRows(k) = Matrix::Identity(k, k);
  for (int l = 0; l < j; ++l)
    for (int b = 0; b < k; ++b) big.t_map(k + l, b) = mean_weights[b];

  return {std::move(phi), std::move(big)};
}

GenericDilationSystem restriction_reduce(const GenericDilationSystem& sys) {
  const Index domain_dim = sys.t_map.cols();
  const Matrix span_basis =
      orthonormal_range_basis(span_generators(sys, domain_dim));

  GenericDilationSystem out;
  out.z_dim = span_basis.cols();
  out.s_map = sys.s_map * span_basis;
  out.t_map = span_basis.adjoint() * sys.t_map;
  for (const auto& f : sys.f_atoms) {
    Matrix compressed = span_basis.adjoint() * f * span_basis;
    const double escape =
        (f * span_basis - span_basis * compressed).norm();
    if (escape > 1e-8 * std::max(1.0, operator_norm(f)))
      throw precondition_error(
          "restriction: the span of F(Sigma)TX is not invariant under F, "
          "escape " + std::to_string(escape));
    out.f_atoms.push_back(std::move(compressed));
  }
  return out;
}

GenericDilationSystem quotient_reduce(const GenericDilationSystem& sys,
                                      const ovm::FiniteOVM& e) {
  check_shapes(sys, e);
  const Matrix span_basis =
      orthonormal_range_basis(span_generators(sys, e.domain_dim));
  if (span_basis.cols() != sys.z_dim)
    throw precondition_error(
        "quotient: system must be linearly minimal, span dimension " +
        std::to_string(span_basis.cols()) + " of " + std::to_string(sys.z_dim));

  Matrix kernel = orthonormal_kernel_basis(sys.s_map);
  while (kernel.cols() > 0) {
    const Matrix complement = orthonormal_kernel_basis(kernel.adjoint());
    Matrix constraints(sys.f_atoms.size() * complement.cols(), kernel.cols());
    for (std::size_t i = 0; i < sys.f_atoms.size(); ++i)
      constraints.middleRows(static_cast<Index>(i) * complement.cols(),
                             complement.cols()) =
          complement.adjoint() * sys.f_atoms[i] * kernel;
    const Matrix stable = orthonormal_kernel_basis(constraints);
    if (stable.cols() == kernel.cols()) break;
    kernel = kernel * stable;
  }

  for (std::size_t i = 0; i < sys.f_atoms.size() && kernel.cols() > 0; ++i) {
    const Matrix image = sys.f_atoms[i] * kernel;
    const double escape =
        (image - kernel * (kernel.adjoint() * image)).norm();
    if (escape > 1e-8 * std::max(1.0, operator_norm(sys.f_atoms[i])))
      throw error("quotient: extracted subspace failed the invariance check, "
                  "escape " + std::to_string(escape));
  }

  const Matrix w = orthonormal_kernel_basis(kernel.adjoint());
  GenericDilationSystem out;
  out.z_dim = w.cols();
  out.s_map = sys.s_map * w;
  out.t_map = w.adjoint() * sys.t_map;
  out.f_atoms.reserve(sys.f_atoms.size());
  for (const auto& f : sys.f_atoms) out.f_atoms.push_back(w.adjoint() * f * w);
  return out;
}

RankReport rank_report(const GenericDilationSystem& sys,
                       const ovm::FiniteOVM& e) {
  check_shapes(sys, e);
  RankReport report;
  for (std::size_t i = 0; i < sys.f_atoms.size(); ++i)
    report.atom_ranks.emplace_back(rank_by_singular_values(sys.f_atoms[i]),
                                   rank_by_singular_values(e.atoms[i]));
  return report;
}

MaskRankRow mask_rank_row(const GenericDilationSystem& sys,
                          const ovm::FiniteOVM& e, Mask b) {
  check_shapes(sys, e);
  if (!e.space.admits(b))
    throw malformed_input("rank row: event out of range");
  MaskRankRow row;
  Matrix fb = Matrix::Zero(sys.z_dim, sys.z_dim);
  for (int i = 0; i < e.space.atom_count; ++i) {
    if (!(b & (Mask{1} << i))) continue;
    const Index re = rank_by_singular_values(e.atoms[i]);
    row.sup_rank_e = std::max(row.sup_rank_e, re);
    row.sum_rank_e += re;
    fb += sys.f_atoms[i];
  }
  row.rank_f = rank_by_singular_values(fb);
  return row;
}

}  // namespace ovmkit::dilation
