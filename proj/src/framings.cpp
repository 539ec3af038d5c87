#include "ovmkit/framings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace ovmkit::framings {

Framing::Framing(Index dim_, std::vector<Vector> x_, std::vector<Vector> y_)
    : dim(dim_), x(std::move(x_)), y(std::move(y_)) {
  if (dim < 1) throw malformed_input("framing: dimension must be at least 1");
  if (x.empty() || x.size() != y.size())
    throw malformed_input("framing: families must be nonempty and equally long");
  for (const auto& v : x) {
    if (v.size() != dim) throw malformed_input("framing: x vector length mismatch");
    ensure_finite(v, "framing x vector");
  }
  for (const auto& v : y) {
    if (v.size() != dim) throw malformed_input("framing: y vector length mismatch");
    ensure_finite(v, "framing y vector");
  }
}

FramingCheck verify_framing(const Framing& fr, double tolerance) {
  Matrix sum = Matrix::Zero(fr.dim, fr.dim);
  for (Index i = 0; i < fr.size(); ++i) sum += fr.x[i] * fr.y[i].adjoint();
  const double residual = operator_norm(sum - Matrix::Identity(fr.dim, fr.dim));
  return {residual <= tolerance, residual};
}

RescalingResult rescale_balanced(const Framing& fr) {
  RescalingResult out;
  std::vector<Vector> rx, ry;
  for (Index i = 0; i < fr.size(); ++i) {
    const double nx = fr.x[i].norm();
    const double ny = fr.y[i].norm();
    if (nx == 0.0 && ny == 0.0) continue;
    if (nx == 0.0 || ny == 0.0)
      throw precondition_error(
          "degenerate-framing: pair " + std::to_string(i) +
          " vanishes on one side only, rescaling cannot balance it");
    const double alpha = std::sqrt(ny / nx);
    out.alphas.emplace_back(alpha, 0.0);
    rx.push_back(alpha * fr.x[i]);
    ry.push_back(fr.y[i] / alpha);
  }
  if (rx.empty())
    throw precondition_error("degenerate-framing: every pair vanishes");
  out.rescaled_x = frames::Frame(fr.dim, std::move(rx));
  out.rescaled_y = frames::Frame(fr.dim, std::move(ry));
  out.x_bounds = frames::frame_bounds(out.rescaled_x);
  out.y_bounds = frames::frame_bounds(out.rescaled_y);
  out.is_dual_pair_after =
      out.x_bounds.lower > tol::frame_rel * out.x_bounds.upper &&
      out.y_bounds.lower > tol::frame_rel * out.y_bounds.upper;
  return out;
}

namespace {

// Nodes and weights of the g-point Gauss-Legendre rule on [-1,1], by Newton
// iteration on the Legendre recurrence.
void gauss_legendre_unit(int g, std::vector<double>& nodes,
                         std::vector<double>& weights) {
  nodes.assign(g, 0.0);
  weights.assign(g, 0.0);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (g + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (g + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= g; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = g * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[g - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[g - 1 - i] = w;
  }
}

}  // namespace

void gauss_legendre_composite(long total_nodes, std::vector<double>& nodes,
                              std::vector<double>& weights) {
  constexpr int kPanelOrder = 32;
  const long panels = std::max<long>(1, (total_nodes + kPanelOrder - 1) / kPanelOrder);
  std::vector<double> un, uw;
  gauss_legendre_unit(kPanelOrder, un, uw);
  nodes.clear();
  weights.clear();
  nodes.reserve(panels * kPanelOrder);
  weights.reserve(panels * kPanelOrder);
  const double h = 1.0 / static_cast<double>(panels);
  for (long p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int j = 0; j < kPanelOrder; ++j) {
      nodes.push_back(a + 0.5 * h * (un[j] + 1.0));
      weights.push_back(0.5 * h * uw[j]);
    }
  }
}

DivergenceReport fourier_framing_report(const std::vector<int>& cutoffs,
                                        long quadrature_nodes) {
  if (cutoffs.empty()) throw malformed_input("divergence report: no cutoffs given");
  for (std::size_t j = 0; j < cutoffs.size(); ++j) {
    if (cutoffs[j] < 1 || (j > 0 && cutoffs[j] <= cutoffs[j - 1]))
      throw malformed_input("divergence report: cutoffs must be positive and increasing");
  }
  if (quadrature_nodes < 1)
    throw malformed_input("divergence report: quadrature node count must be positive");

  const int n_max = cutoffs.back();
  DivergenceReport report;
  report.cutoffs = cutoffs;
  report.quadrature_nodes = quadrature_nodes;
  report.accuracy_warning = quadrature_nodes < 64L * n_max;

  std::vector<double> s, w;
  gauss_legendre_composite(quadrature_nodes, s, w);

  // The substitution t = s^2 removes the endpoint singularity:
  // c_n = integral over [0,1] of 2 exp(-2 pi i n s^2) ds.  On each node the
  // powers exp(-2 pi i n theta) are accumulated by repeated multiplication.
  report.coefficients.assign(n_max + 1, Scalar(0.0, 0.0));
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Scalar>& c = report.coefficients;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double theta = s[k] * s[k];
    const Scalar z = std::polar(1.0, -two_pi * theta);
    Scalar p(2.0 * w[k], 0.0);
    for (int n = 0; n <= n_max; ++n) {
      c[n] += p;
      p *= z;
    }
  }

  report.partial_sums.reserve(cutoffs.size());
  report.tail_products.reserve(cutoffs.size());
  double running = std::norm(c[0]);
  int done = 0;
  for (int cutoff : cutoffs) {
    for (int n = done + 1; n <= cutoff; ++n) running += 2.0 * std::norm(c[n]);
    done = cutoff;
    report.partial_sums.push_back(running);
    report.tail_products.push_back(cutoff * std::norm(c[cutoff]));
  }
  return report;
}

}  // namespace ovmkit::framings
