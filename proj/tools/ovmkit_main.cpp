#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ovmkit/algmaps.hpp"
#include "ovmkit/dilation.hpp"
#include "ovmkit/frames.hpp"
#include "ovmkit/framings.hpp"
#include "ovmkit/io.hpp"
#include "ovmkit/ovm.hpp"
#include "ovmkit/random.hpp"
#include "ovmkit/types.hpp"

namespace {

using namespace ovmkit;
using io::json;

struct Options {
  double tolerance = 1e-8;
  std::string report_path;
  std::uint64_t seed = 1;
};

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
};

struct Report {
  std::string command;
  std::string inputs_digest;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
  json extra = json::object();

  void add(const std::string& name, bool pass, double residual) {
    checks.push_back({name, pass, residual});
  }

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json checks_json = json::array();
    for (const auto& c : checks)
      checks_json.push_back(
          {{"name", c.name}, {"pass", c.pass}, {"worst_residual", c.residual}});
    json out{{"command", command},
             {"inputs_digest", inputs_digest},
             {"checks", std::move(checks_json)},
             {"artifacts", artifacts}};
    for (const auto& [key, value] : extra.items()) out[key] = value;
    return out;
  }
};

void emit(const Report& report, const Options& opt) {
  std::cout << "command: " << report.command << "\n";
  std::cout << "inputs digest: " << report.inputs_digest << "\n";
  for (const auto& [key, value] : report.extra.items())
    std::cout << key << ": " << value.dump() << "\n";
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (residual "
              << c.residual << ")\n";
  }
  for (const auto& a : report.artifacts) std::cout << "wrote " << a << "\n";
  int failed = 0;
  for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
  if (failed == 0)
    std::cout << "result: all " << report.checks.size() << " checks passed\n";
  else
    std::cout << "result: " << failed << " of " << report.checks.size()
              << " checks FAILED\n";
  if (!opt.report_path.empty())
    io::save_text_atomic(opt.report_path, report.to_json().dump(2) + "\n");
}

int finish(const Report& report, const Options& opt) {
  emit(report, opt);
  return report.all_pass() ? 0 : 2;
}

void write_artifact(Report& report, const std::string& path, const json& j) {
  io::save_text_atomic(path, j.dump(2) + "\n");
  report.artifacts.push_back(path);
}

double hermitian_min_eigenvalue(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(
      Matrix(0.5 * (m + m.adjoint())));
  return es.eigenvalues().minCoeff();
}

void check_parseval_dilation(Report& report, const frames::Frame& f,
                             const frames::OrthogonalDilation& d, double tol) {
  const Matrix theta = frames::analysis_operator(f);
  const Matrix eye_d = Matrix::Identity(f.dim, f.dim);
  const Matrix& p = d.projection;
  report.add("embed-isometry",
             operator_norm(d.embed.adjoint() * d.embed - eye_d) <= tol,
             operator_norm(d.embed.adjoint() * d.embed - eye_d));
  report.add("projection-idempotent", operator_norm(p * p - p) <= tol,
             operator_norm(p * p - p));
  report.add("projection-self-adjoint", operator_norm(p - p.adjoint()) <= tol,
             operator_norm(p - p.adjoint()));
  double worst = 0.0;
  for (Index i = 0; i < f.size(); ++i)
    worst = std::max(worst,
                     (p * d.basis[i] - d.embed * f.vectors[i]).norm());
  report.add("projection-recovers-frame", worst <= tol, worst);
}

void check_dual_pair_dilation(Report& report, const frames::Frame& x,
                              const frames::Frame& y,
                              const frames::OrthogonalDilation& d, double tol) {
  const Index m = x.size();
  Matrix basis(d.ambient_dim, m), dual(d.ambient_dim, m);
  for (Index i = 0; i < m; ++i) {
    basis.col(i) = d.basis[i];
    dual.col(i) = d.dual_basis[i];
  }
  const double biorth =
      (dual.adjoint() * basis - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  report.add("biorthogonality", biorth <= tol, biorth);
  Eigen::JacobiSVD<Matrix> svd(basis);
  const double sigma_min = svd.singularValues().minCoeff();
  report.add("riesz-basis", rank_by_singular_values(basis) == m, sigma_min);
  const Matrix& p = d.projection;
  report.add("projection-idempotent", operator_norm(p * p - p) <= tol,
             operator_norm(p * p - p));
  report.add("projection-self-adjoint", operator_norm(p - p.adjoint()) <= tol,
             operator_norm(p - p.adjoint()));
  double worst_x = 0.0, worst_y = 0.0;
  for (Index i = 0; i < m; ++i) {
    worst_x =
        std::max(worst_x, (p * d.basis[i] - d.embed * x.vectors[i]).norm());
    worst_y = std::max(
        worst_y, (p * d.dual_basis[i] - d.embed * y.vectors[i]).norm());
  }
  report.add("projection-recovers-x", worst_x <= tol, worst_x);
  report.add("projection-recovers-dual", worst_y <= tol, worst_y);
}

void check_positive_dilation(Report& report, const ovm::FiniteOVM& e,
                             const ovm::PositiveNaimarkDilation& d, double tol) {
  const Matrix total = ovm::evaluate(e, e.space.omega());
  const double total_residual = operator_norm(d.v.adjoint() * d.v - total);
  report.add("v-star-v-matches-total", total_residual <= tol, total_residual);

  const int m = e.space.atom_count;
  double worst_mask = 0.0;
  if (m <= limits::exhaustive_atoms) {
    for (Mask b = 1; b <= e.space.omega(); ++b) {
      Matrix f = Matrix::Zero(d.dilation_dim, d.dilation_dim);
      for (int i = 0; i < m; ++i)
        if (b & (Mask{1} << i)) f += d.f_atoms[i];
      worst_mask = std::max(
          worst_mask, operator_norm(d.v.adjoint() * f * d.v - ovm::evaluate(e, b)));
    }
  } else {
    for (int i = 0; i < m; ++i)
      worst_mask = std::max(worst_mask,
                            operator_norm(d.v.adjoint() * d.f_atoms[i] * d.v -
                                          e.atoms[i]));
  }
  report.add("mask-factorization", worst_mask <= tol, worst_mask);

  double worst_proj = 0.0;
  for (const auto& f : d.f_atoms) {
    worst_proj = std::max(worst_proj, operator_norm(f * f - f));
    worst_proj = std::max(worst_proj, operator_norm(f - f.adjoint()));
  }
  report.add("f-projection-valued", worst_proj <= tol, worst_proj);
}

void check_algebraic_dilation(Report& report,
                              const algmaps::LinearMapOnAlgebra& phi,
                              const algmaps::AlgebraicDilation& d, double tol) {
  const Index p = phi.algebra.size();
  double worst_factor = 0.0;
  for (Index l = 0; l < p; ++l)
    worst_factor = std::max(
        worst_factor,
        operator_norm(d.s_map * d.pi[l] * d.t_map - phi.values[l]));
  report.add("factorization", worst_factor <= tol, worst_factor);

  double worst_mult = 0.0;
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b) {
      const Matrix lhs =
          algmaps::dilation_pi(d, phi.algebra.right_mult[b].col(a));
      worst_mult = std::max(worst_mult, operator_norm(lhs - d.pi[a] * d.pi[b]));
    }
  report.add("pi-multiplicative", worst_mult <= tol, worst_mult);

  const double unital = operator_norm(
      algmaps::dilation_pi(d, phi.algebra.identity_coords) -
      Matrix::Identity(d.w_dim, d.w_dim));
  report.add("pi-unital", unital <= tol, unital);
}

void check_generic_system(Report& report, const std::string& prefix,
                          const dilation::MinimalityReport& mr, double tol) {
  report.add(prefix + "factorization", mr.worst_factorization_residual <= tol,
             mr.worst_factorization_residual);
  report.add(prefix + "linearly-minimal", mr.linearly_minimal,
             static_cast<double>(mr.z_dim - mr.span_dim));
  report.add(prefix + "injective", mr.injective, mr.injectivity_residual);
}

int cmd_analyze(const Options& opt, const std::string& input,
                const std::string& emit_dual) {
  Report report;
  report.command = "analyze";
  const std::string raw = io::read_file(input);
  report.inputs_digest = io::fnv1a_hex(raw);
  const frames::Frame f = io::frame_from_json(io::parse_json(raw, input));

  const frames::FrameBounds bounds = frames::frame_bounds(f);
  const bool frame = frames::is_frame(f);
  report.extra["dim"] = f.dim;
  report.extra["count"] = f.size();
  report.extra["bounds"] = json::array({bounds.lower, bounds.upper});
  report.extra["parseval"] = frames::is_parseval(f, opt.tolerance);
  report.extra["riesz_basis"] = frames::is_riesz_basis(f);
  report.add("is-frame", frame, bounds.lower);

  if (!emit_dual.empty()) {
    if (frame) {
      write_artifact(report, emit_dual,
                     io::frame_to_json(frames::canonical_dual(f)));
    } else {
      report.add("emit-dual", false, 0.0);
    }
  }
  return finish(report, opt);
}

int cmd_dilate(const Options& opt, const std::string& input,
               const std::string& mode, std::string output, bool exhaustive) {
  Report report;
  report.command = "dilate " + mode;
  const std::string raw = io::read_file(input);
  report.inputs_digest = io::fnv1a_hex(raw);
  const json j = io::parse_json(raw, input);
  if (output.empty()) output = input + ".dilation.json";

  if (mode == "parseval") {
    const frames::Frame f = io::frame_from_json(j);
    const frames::OrthogonalDilation d = frames::dilate_parseval(f, opt.tolerance);
    check_parseval_dilation(report, f, d, opt.tolerance);
    write_artifact(report, output,
                   json{{"kind", "parseval-dilation"},
                        {"source", io::frame_to_json(f)},
                        {"dilation", io::orthogonal_dilation_to_json(d)}});
  } else if (mode == "dual-pair") {
    const framings::Framing fr = io::framing_from_json(j);
    const frames::Frame x(fr.dim, fr.x), y(fr.dim, fr.y);
    const frames::OrthogonalDilation d =
        frames::dilate_dual_pair(x, y, opt.tolerance);
    check_dual_pair_dilation(report, x, y, d, opt.tolerance);
    write_artifact(report, output,
                   json{{"kind", "dual-pair-dilation"},
                        {"source", io::framing_to_json(fr)},
                        {"dilation", io::orthogonal_dilation_to_json(d)}});
  } else if (mode == "ovm-elementary") {
    const ovm::FiniteOVM e = io::ovm_from_json(j);
    if (exhaustive && e.space.atom_count > limits::exhaustive_atoms)
      throw precondition_error("exhaustive verification supports at most " +
                               std::to_string(limits::exhaustive_atoms) +
                               " atoms");
    const dilation::ElementaryDilationSystem sys = dilation::build_elementary(e);
    const dilation::GenericDilationSystem gen = dilation::to_generic(sys);
    const dilation::MinimalityReport mr =
        dilation::verify_generic(gen, e, opt.tolerance);
    check_generic_system(report, "", mr, opt.tolerance);
    const dilation::DilationNormReport nr =
        dilation::verify_dilation_norm_conditions(sys, exhaustive ? 1000 : 200,
                                                  opt.seed);
    report.add("s-contractive", nr.s_contractive,
               std::max(0.0, nr.worst_s_ratio - 1.0));
    report.add("f-contractive", nr.f_contractive,
               std::max(0.0, nr.worst_f_ratio - 1.0));
    report.add("t-dominated", nr.t_dominated, std::max(0.0, nr.worst_t_excess));
    report.add("f-projection-valued", nr.f_projection_valued, nr.worst_f_residual);
    report.add("f-spectral", nr.f_spectral, nr.worst_f_residual);
    report.add("f-probability", nr.f_probability, nr.worst_f_residual);
    const dilation::RankReport ranks = dilation::rank_report(gen, e);
    json rank_rows = json::array();
    for (const auto& [rf, re] : ranks.atom_ranks)
      rank_rows.push_back(json::array({rf, re}));
    report.extra["atom_ranks"] = std::move(rank_rows);
    write_artifact(report, output,
                   json{{"kind", "elementary-dilation"},
                        {"source", io::ovm_to_json(e)},
                        {"system", io::generic_system_to_json(gen)}});
  } else if (mode == "ovm-positive") {
    const ovm::FiniteOVM e = io::ovm_from_json(j);
    const ovm::PositiveNaimarkDilation d = ovm::naimark_dilate_positive(e);
    check_positive_dilation(report, e, d, opt.tolerance);
    write_artifact(report, output,
                   json{{"kind", "positive-dilation"},
                        {"source", io::ovm_to_json(e)},
                        {"dilation", io::naimark_to_json(d)}});
  } else if (mode == "algebra") {
    const algmaps::LinearMapOnAlgebra phi = io::map_from_json(j);
    const algmaps::AlgebraicDilation d = algmaps::build_algebraic_dilation(phi);
    check_algebraic_dilation(report, phi, d, opt.tolerance);
    report.extra["W_dim"] = d.w_dim;
    write_artifact(report, output,
                   json{{"kind", "algebraic-dilation"},
                        {"source", io::map_to_json(phi)},
                        {"dilation", io::algebraic_dilation_to_json(d)}});
  } else {
    throw malformed_input("unknown dilation mode: " + mode);
  }
  return finish(report, opt);
}

int cmd_demo(const Options& opt, const std::string& name, int big_n, int atoms,
             int extra_atoms, int level_max, const std::string& output_dir) {
  Report report;
  report.command = "demo " + name;

  if (name == "fourier-divergence") {
    if (big_n < 64) throw malformed_input("demo: --N must be at least 64");
    report.inputs_digest =
        io::fnv1a_hex("demo:fourier-divergence:" + std::to_string(big_n));
    const std::vector<int> cutoffs{big_n / 32, big_n / 8, big_n / 2, big_n};
    const framings::DivergenceReport rep =
        framings::fourier_framing_report(cutoffs, 64L * big_n);

    double min_step = rep.partial_sums[1] - rep.partial_sums[0];
    for (std::size_t i = 2; i < rep.partial_sums.size(); ++i)
      min_step = std::min(min_step, rep.partial_sums[i] - rep.partial_sums[i - 1]);
    report.add("partial-sums-strictly-increasing", min_step > 0.0, min_step);
    const double ratio = rep.partial_sums.back() / rep.partial_sums.front();
    const double threshold = big_n == 4096 ? 1.3 : 1.0;
    report.add("growth-ratio", ratio >= threshold, ratio);
    report.add("quadrature-resolution", !rep.accuracy_warning,
               rep.accuracy_warning ? 1.0 : 0.0);
    report.extra["cutoffs"] = rep.cutoffs;
    report.extra["partial_sums"] = rep.partial_sums;
    report.extra["tail_products"] = rep.tail_products;

    const std::string path = output_dir + "/fourier-divergence.csv";
    io::save_text_atomic(path, io::divergence_csv(rep));
    report.artifacts.push_back(path);
  } else if (name == "example-3-9") {
    if (atoms < 1 || extra_atoms < 1)
      throw malformed_input("demo: need at least one support atom and one extra atom");
    report.inputs_digest =
        io::fnv1a_hex("demo:example-3-9:" + std::to_string(atoms) + ":" +
                      std::to_string(extra_atoms));
    const std::vector<Scalar> weights(
        atoms, Scalar(1.0 / static_cast<double>(atoms), 0.0));
    const auto [e, sys] = dilation::example_3_9(atoms, extra_atoms, weights);
    const dilation::MinimalityReport mr =
        dilation::verify_generic(sys, e, opt.tolerance);
    report.add("factorization", mr.worst_factorization_residual <= opt.tolerance,
               mr.worst_factorization_residual);
    report.add("non-injective", !mr.injective, mr.injectivity_residual);
    report.add("linearly-minimal", mr.linearly_minimal,
               static_cast<double>(mr.z_dim - mr.span_dim));

    const dilation::GenericDilationSystem reduced =
        dilation::quotient_reduce(sys, e);
    const dilation::MinimalityReport mr2 =
        dilation::verify_generic(reduced, e, opt.tolerance);
    report.add("reduced-dimension-matches-domain",
               reduced.z_dim == e.domain_dim,
               static_cast<double>(reduced.z_dim - e.domain_dim));
    report.add("reduced-factorization",
               mr2.worst_factorization_residual <= opt.tolerance,
               mr2.worst_factorization_residual);
    report.add("reduced-injective", mr2.injective, mr2.injectivity_residual);
    report.extra["Z_dim"] = sys.z_dim;
    report.extra["reduced_Z_dim"] = reduced.z_dim;

    const std::string path = output_dir + "/example-3-9.json";
    io::save_text_atomic(
        path, json{{"kind", "example-3-9"},
                   {"measure", io::ovm_to_json(e)},
                   {"system", io::generic_system_to_json(sys)},
                   {"reduced", io::generic_system_to_json(reduced)}}
                  .dump(2) +
                  "\n");
    report.artifacts.push_back(path);
  } else if (name == "transpose-cb") {
    if (atoms < 1 || level_max < 1)
      throw malformed_input("demo: matrix size and level bound must be positive");
    report.inputs_digest =
        io::fnv1a_hex("demo:transpose-cb:" + std::to_string(atoms) + ":" +
                      std::to_string(level_max));
    const algmaps::LinearMapOnAlgebra phi = algmaps::transpose_map(atoms);
    const algmaps::CbProfile profile = algmaps::cb_profile(phi, level_max);

    double min_step = 0.0;
    for (std::size_t i = 1; i < profile.lower_bounds.size(); ++i)
      min_step =
          std::min(min_step, profile.lower_bounds[i] - profile.lower_bounds[i - 1]);
    report.add("profile-monotone", min_step >= 0.0, min_step);
    report.add("level-one-near-isometry", profile.lower_bounds.front() >= 0.9,
               profile.lower_bounds.front());
    if (level_max >= 2)
      report.add("growth-witness", profile.lower_bounds.back() >= 1.5,
                 profile.lower_bounds.back());
    report.extra["levels"] = profile.levels;
    report.extra["lower_bounds"] = profile.lower_bounds;

    const std::string path = output_dir + "/transpose-cb.csv";
    io::save_text_atomic(path, io::profile_csv(profile));
    report.artifacts.push_back(path);
  } else {
    throw malformed_input("unknown demo name: " + name);
  }
  return finish(report, opt);
}

int cmd_random(const Options& opt, const std::string& kind, Index dim,
               Index count, int atoms, bool probability, std::string output) {
  Report report;
  report.command = "random " + kind;
  report.inputs_digest = io::fnv1a_hex(
      "random:" + kind + ":" + std::to_string(dim) + ":" +
      std::to_string(count) + ":" + std::to_string(atoms) + ":" +
      std::to_string(probability) + ":" + std::to_string(opt.seed));
  if (output.empty()) output = kind + ".json";

  if (kind == "frame") {
    const frames::Frame f = random::random_frame(dim, count, opt.seed);
    report.add("is-frame", frames::is_frame(f), frames::frame_bounds(f).lower);
    write_artifact(report, output, io::frame_to_json(f));
  } else if (kind == "parseval") {
    const frames::Frame f = random::random_parseval_frame(dim, count, opt.seed);
    const double defect =
        operator_norm(frames::frame_operator(f) - Matrix::Identity(dim, dim));
    report.add("parseval-defect", defect <= opt.tolerance, defect);
    write_artifact(report, output, io::frame_to_json(f));
  } else if (kind == "dual-pair") {
    const auto [x, y] = random::random_dual_pair(dim, count, opt.seed);
    const double defect = frames::duality_defect(x, y);
    report.add("duality-defect", defect <= opt.tolerance, defect);
    report.add("x-is-frame", frames::is_frame(x), frames::frame_bounds(x).lower);
    report.add("y-is-frame", frames::is_frame(y), frames::frame_bounds(y).lower);
    write_artifact(report, output,
                   io::framing_to_json(framings::Framing(dim, x.vectors,
                                                         y.vectors)));
  } else if (kind == "ovm-framing") {
    const framings::Framing fr = random::random_framing(dim, count, opt.seed);
    const framings::FramingCheck check = framings::verify_framing(fr, opt.tolerance);
    report.add("framing-identity", check.ok, check.residual);
    write_artifact(report, output, io::framing_to_json(fr));
  } else if (kind == "ovm-positive") {
    const ovm::FiniteOVM e =
        random::random_positive_ovm(atoms, dim, opt.seed, probability);
    double most_negative = 0.0;
    for (const auto& a : e.atoms)
      most_negative = std::min(most_negative, hermitian_min_eigenvalue(a));
    report.add("atoms-positive", most_negative >= -1e-12, most_negative);
    if (probability) {
      const double defect = operator_norm(ovm::evaluate(e, e.space.omega()) -
                                          Matrix::Identity(dim, dim));
      report.add("total-is-identity", defect <= 1e-12, defect);
    }
    write_artifact(report, output, io::ovm_to_json(e));
  } else {
    throw malformed_input("unknown random kind: " + kind);
  }
  return finish(report, opt);
}

int cmd_verify(const Options& opt, const std::string& kind,
               const std::string& input) {
  Report report;
  report.command = "verify " + kind;
  const std::string raw = io::read_file(input);
  report.inputs_digest = io::fnv1a_hex(raw);
  const json j = io::parse_json(raw, input);

  if (kind == "frame") {
    const frames::Frame f = io::frame_from_json(j);
    report.add("is-frame", frames::is_frame(f), frames::frame_bounds(f).lower);
  } else if (kind == "parseval") {
    const frames::Frame f = io::frame_from_json(j);
    const double defect = operator_norm(frames::frame_operator(f) -
                                        Matrix::Identity(f.dim, f.dim));
    report.add("parseval-defect", defect <= opt.tolerance, defect);
  } else if (kind == "framing") {
    const framings::Framing fr = io::framing_from_json(j);
    const framings::FramingCheck check = framings::verify_framing(fr, opt.tolerance);
    report.add("framing-identity", check.ok, check.residual);
  } else if (kind == "dual-pair") {
    const framings::Framing fr = io::framing_from_json(j);
    const frames::Frame x(fr.dim, fr.x), y(fr.dim, fr.y);
    const double defect = frames::duality_defect(x, y);
    report.add("duality-defect", defect <= opt.tolerance, defect);
    report.add("x-is-frame", frames::is_frame(x), frames::frame_bounds(x).lower);
    report.add("y-is-frame", frames::is_frame(y), frames::frame_bounds(y).lower);
  } else if (kind == "ovm") {
    const ovm::FiniteOVM e = io::ovm_from_json(j);
    const ovm::OVMClassification c = ovm::classify(e, opt.tolerance);
    report.extra["norm"] = c.norm;
    report.extra["probability"] = c.is_probability;
    report.extra["positive"] = c.is_positive;
    report.extra["self_adjoint"] = c.is_self_adjoint;
    report.extra["projection_valued"] = c.is_projection_valued;
    report.extra["spectral"] = c.is_spectral;
    report.add("well-formed", true, 0.0);
  } else if (kind == "map") {
    const algmaps::LinearMapOnAlgebra phi = io::map_from_json(j);
    report.extra["algebra_size"] = phi.algebra.size();
    report.extra["target_dim"] = phi.target_dim;
    report.add("algebra-closed", true, 0.0);
  } else if (kind == "artifact") {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
      throw malformed_input("artifact: missing \"kind\" field");
    const std::string artifact_kind = j.at("kind").get<std::string>();
    if (artifact_kind == "parseval-dilation") {
      const frames::Frame f = io::frame_from_json(j.at("source"));
      const frames::OrthogonalDilation d =
          io::orthogonal_dilation_from_json(j.at("dilation"));
      check_parseval_dilation(report, f, d, opt.tolerance);
    } else if (artifact_kind == "dual-pair-dilation") {
      const framings::Framing fr = io::framing_from_json(j.at("source"));
      const frames::Frame x(fr.dim, fr.x), y(fr.dim, fr.y);
      const frames::OrthogonalDilation d =
          io::orthogonal_dilation_from_json(j.at("dilation"));
      check_dual_pair_dilation(report, x, y, d, opt.tolerance);
    } else if (artifact_kind == "elementary-dilation") {
      const ovm::FiniteOVM e = io::ovm_from_json(j.at("source"));
      const dilation::GenericDilationSystem sys =
          io::generic_system_from_json(j.at("system"));
      const dilation::MinimalityReport mr =
          dilation::verify_generic(sys, e, opt.tolerance);
      check_generic_system(report, "", mr, opt.tolerance);
    } else if (artifact_kind == "positive-dilation") {
      const ovm::FiniteOVM e = io::ovm_from_json(j.at("source"));
      const ovm::PositiveNaimarkDilation d = io::naimark_from_json(j.at("dilation"));
      check_positive_dilation(report, e, d, opt.tolerance);
    } else if (artifact_kind == "algebraic-dilation") {
      const algmaps::LinearMapOnAlgebra phi = io::map_from_json(j.at("source"));
      const algmaps::AlgebraicDilation d =
          io::algebraic_dilation_from_json(j.at("dilation"));
      check_algebraic_dilation(report, phi, d, opt.tolerance);
    } else if (artifact_kind == "example-3-9") {
      const ovm::FiniteOVM e = io::ovm_from_json(j.at("measure"));
      const dilation::GenericDilationSystem sys =
          io::generic_system_from_json(j.at("system"));
      const dilation::GenericDilationSystem reduced =
          io::generic_system_from_json(j.at("reduced"));
      const dilation::MinimalityReport mr =
          dilation::verify_generic(sys, e, opt.tolerance);
      const dilation::MinimalityReport mr2 =
          dilation::verify_generic(reduced, e, opt.tolerance);
      report.add("factorization",
                 mr.worst_factorization_residual <= opt.tolerance,
                 mr.worst_factorization_residual);
      report.add("reduced-factorization",
                 mr2.worst_factorization_residual <= opt.tolerance,
                 mr2.worst_factorization_residual);
    } else {
      throw malformed_input("artifact: unknown kind \"" + artifact_kind + "\"");
    }
  } else {
    throw malformed_input("unknown verify kind: " + kind);
  }
  return finish(report, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilation toolkit for frames, operator valued measures, and "
               "linear maps on matrix algebras"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--tolerance", opt.tolerance,
                 "Pass/fail tolerance for verification checks")
      ->capture_default_str();
  app.add_option("--json-report", opt.report_path,
                 "Write the run report as JSON to this path");
  app.add_option("--seed", opt.seed, "Seed for randomized generators and checks")
      ->capture_default_str();

  std::string analyze_input, analyze_dual;
  CLI::App* analyze = app.add_subcommand("analyze", "Frame bounds and flags");
  analyze->add_option("input", analyze_input, "Frame JSON file")->required();
  analyze->add_option("--emit-dual", analyze_dual,
                      "Write the canonical dual frame to this path");

  std::string dilate_input, dilate_mode, dilate_output;
  bool dilate_exhaustive = false;
  CLI::App* dilate =
      app.add_subcommand("dilate", "Construct and verify a dilation");
  dilate->add_option("input", dilate_input, "Input JSON file")->required();
  dilate->add_option("--mode", dilate_mode, "Dilation kind")
      ->required()
      ->check(CLI::IsMember({"parseval", "dual-pair", "ovm-elementary",
                             "ovm-positive", "algebra"}));
  dilate->add_option("--output", dilate_output, "Artifact path");
  dilate->add_flag("--verify-exhaustive", dilate_exhaustive,
                   "Force full mask enumeration (at most 12 atoms)");

  std::string demo_name, demo_dir = ".";
  int demo_n = 4096, demo_atoms = 4, demo_extra = 2, demo_levels = 4;
  CLI::App* demo = app.add_subcommand("demo", "Run a named reproduction");
  demo->add_option("name", demo_name,
                   "fourier-divergence | example-3-9 | transpose-cb")
      ->required();
  demo->add_option("--N", demo_n, "Largest coefficient cutoff")
      ->capture_default_str();
  demo->add_option("--atoms", demo_atoms,
                   "Support atoms (example-3-9) or matrix size (transpose-cb)")
      ->capture_default_str();
  demo->add_option("--extra", demo_extra, "Extra atoms for example-3-9")
      ->capture_default_str();
  demo->add_option("--level-max", demo_levels, "Largest amplification level")
      ->capture_default_str();
  demo->add_option("--output-dir", demo_dir, "Directory for CSV artifacts")
      ->capture_default_str();

  std::string random_kind, random_output;
  Index random_dim = 3, random_count = 7;
  int random_atoms = 6;
  bool random_probability = false;
  CLI::App* rnd = app.add_subcommand("random", "Generate a random instance");
  rnd->add_option("kind", random_kind,
                  "frame | parseval | dual-pair | ovm-positive | ovm-framing")
      ->required();
  rnd->add_option("--dim", random_dim, "Space dimension")->capture_default_str();
  rnd->add_option("--count", random_count, "Number of vectors")
      ->capture_default_str();
  rnd->add_option("--atoms", random_atoms, "Number of atoms")
      ->capture_default_str();
  rnd->add_flag("--probability", random_probability,
                "Normalize the total measure to the identity");
  rnd->add_option("--output", random_output, "Output path");

  std::string verify_kind, verify_input;
  CLI::App* verify = app.add_subcommand("verify", "Re-verify a file");
  verify->add_option("kind", verify_kind,
                     "frame | parseval | framing | dual-pair | ovm | map | artifact")
      ->required();
  verify->add_option("input", verify_input, "File to verify")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (app.got_subcommand(analyze))
      return cmd_analyze(opt, analyze_input, analyze_dual);
    if (app.got_subcommand(dilate))
      return cmd_dilate(opt, dilate_input, dilate_mode, dilate_output,
                        dilate_exhaustive);
    if (app.got_subcommand(demo))
      return cmd_demo(opt, demo_name, demo_n, demo_atoms, demo_extra,
                      demo_levels, demo_dir);
    if (app.got_subcommand(rnd))
      return cmd_random(opt, random_kind, random_dim, random_count, random_atoms,
                        random_probability, random_output);
    if (app.got_subcommand(verify))
      return cmd_verify(opt, verify_kind, verify_input);
    std::cerr << "error: no subcommand\n";
    return 64;
  } catch (const malformed_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
