#include "ovmkit/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace ovmkit::io {

namespace {

const json& require_field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key))
    throw malformed_input(what + ": missing field \"" + key + "\"");
  return j.at(key);
}

Index require_index(const json& j, const char* key, const std::string& what) {
  const json& field = require_field(j, key, what);
  if (!field.is_number_integer() || field.get<std::int64_t>() < 0)
    throw malformed_input(what + ": field \"" + key +
                          "\" must be a nonnegative integer");
  return static_cast<Index>(field.get<std::int64_t>());
}

std::vector<Matrix> matrices_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw malformed_input(what + ": expected an array of matrices");
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

json matrices_to_json(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

json to_json(const Scalar& z) { return json::array({z.real(), z.imag()}); }

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Scalar scalar_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw malformed_input(what + ": complex entries must be [re, im]");
  return Scalar(j[0].get<double>(), j[1].get<double>());
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw malformed_input(what + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) =
        scalar_from_json(j[i], what + "[" + std::to_string(i) + "]");
  if (!v.allFinite()) throw malformed_input(what + ": non-finite entry");
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw malformed_input(what + ": expected an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Matrix m;
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array())
      throw malformed_input(what + ": row " + std::to_string(r) +
                            " is not an array");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Index>(row.size()) != cols)
      throw malformed_input(what + ": ragged rows");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)],
                                 what + "(" + std::to_string(r) + "," +
                                     std::to_string(c) + ")");
  }
  if (rows == 0) m.resize(0, 0);
  if (!all_finite(m)) throw malformed_input(what + ": non-finite entry");
  return m;
}

json frame_to_json(const frames::Frame& f) {
  json vectors = json::array();
  for (const auto& v : f.vectors) vectors.push_back(to_json(v));
  return json{{"dim", f.dim}, {"vectors", std::move(vectors)}};
}

frames::Frame frame_from_json(const json& j) {
  const Index dim = require_index(j, "dim", "frame");
  const json& vectors = require_field(j, "vectors", "frame");
  if (!vectors.is_array() || vectors.empty())
    throw malformed_input("frame: \"vectors\" must be a nonempty array");
  std::vector<Vector> vs;
  vs.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    vs.push_back(vector_from_json(vectors[i],
                                  "frame.vectors[" + std::to_string(i) + "]"));
  return frames::Frame(dim, std::move(vs));
}

json framing_to_json(const framings::Framing& fr) {
  json x = json::array(), y = json::array();
  for (const auto& v : fr.x) x.push_back(to_json(v));
  for (const auto& v : fr.y) y.push_back(to_json(v));
  return json{{"dim", fr.dim}, {"x", std::move(x)}, {"y", std::move(y)}};
}

framings::Framing framing_from_json(const json& j) {
  const Index dim = require_index(j, "dim", "framing");
  const json& xj = require_field(j, "x", "framing");
  const json& yj = require_field(j, "y", "framing");
  if (!xj.is_array() || !yj.is_array())
    throw malformed_input("framing: \"x\" and \"y\" must be arrays");
  std::vector<Vector> x, y;
  for (std::size_t i = 0; i < xj.size(); ++i)
    x.push_back(vector_from_json(xj[i], "framing.x[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < yj.size(); ++i)
    y.push_back(vector_from_json(yj[i], "framing.y[" + std::to_string(i) + "]"));
  return framings::Framing(dim, std::move(x), std::move(y));
}

json ovm_to_json(const ovm::FiniteOVM& e) {
  return json{{"atoms", matrices_to_json(e.atoms)},
              {"domain_dim", e.domain_dim},
              {"range_dim", e.range_dim}};
}

ovm::FiniteOVM ovm_from_json(const json& j) {
  const Index domain = require_index(j, "domain_dim", "measure");
  const Index range = require_index(j, "range_dim", "measure");
  auto atoms = matrices_from_json(require_field(j, "atoms", "measure"),
                                  "measure.atoms");
  return ovm::FiniteOVM(domain, range, std::move(atoms));
}

json generic_system_to_json(const dilation::GenericDilationSystem& sys) {
  return json{{"Z_dim", sys.z_dim},
              {"F_atoms", matrices_to_json(sys.f_atoms)},
              {"S", to_json(sys.s_map)},
              {"T", to_json(sys.t_map)}};
}

dilation::GenericDilationSystem generic_system_from_json(const json& j) {
  dilation::GenericDilationSystem sys;
  sys.z_dim = require_index(j, "Z_dim", "dilation system");
  sys.f_atoms = matrices_from_json(require_field(j, "F_atoms", "dilation system"),
                                   "dilation system.F_atoms");
  sys.s_map = matrix_from_json(require_field(j, "S", "dilation system"),
                               "dilation system.S");
  sys.t_map = matrix_from_json(require_field(j, "T", "dilation system"),
                               "dilation system.T");
  for (const auto& f : sys.f_atoms)
    if (f.rows() != sys.z_dim || f.cols() != sys.z_dim)
      throw malformed_input("dilation system: F atoms must be Z_dim square");
  if (sys.s_map.cols() != sys.z_dim || sys.t_map.rows() != sys.z_dim)
    throw malformed_input("dilation system: S and T shapes must match Z_dim");
  return sys;
}

json algebra_to_json(const algmaps::FiniteAlgebra& a) {
  return json{{"ambient", a.ambient}, {"basis", matrices_to_json(a.basis)}};
}

algmaps::FiniteAlgebra algebra_from_json(const json& j) {
  const Index ambient = require_index(j, "ambient", "algebra");
  auto basis =
      matrices_from_json(require_field(j, "basis", "algebra"), "algebra.basis");
  return algmaps::make_algebra(ambient, std::move(basis));
}

json map_to_json(const algmaps::LinearMapOnAlgebra& phi) {
  json j = algebra_to_json(phi.algebra);
  j["target_dim"] = phi.target_dim;
  j["values"] = matrices_to_json(phi.values);
  return j;
}

algmaps::LinearMapOnAlgebra map_from_json(const json& j) {
  algmaps::FiniteAlgebra a = algebra_from_json(j);
  const Index target = require_index(j, "target_dim", "map");
  auto values = matrices_from_json(require_field(j, "values", "map"), "map.values");
  for (const auto& m : values)
    if (m.rows() != target || m.cols() != target)
      throw malformed_input("map: values must be target_dim square");
  return algmaps::make_map(std::move(a), std::move(values));
}

json orthogonal_dilation_to_json(const frames::OrthogonalDilation& d) {
  json basis = json::array(), dual = json::array();
  for (const auto& v : d.basis) basis.push_back(to_json(v));
  for (const auto& v : d.dual_basis) dual.push_back(to_json(v));
  return json{{"ambient_dim", d.ambient_dim},
              {"embed", to_json(d.embed)},
              {"basis", std::move(basis)},
              {"dual_basis", std::move(dual)},
              {"projection", to_json(d.projection)}};
}

frames::OrthogonalDilation orthogonal_dilation_from_json(const json& j) {
  frames::OrthogonalDilation d;
  d.ambient_dim = require_index(j, "ambient_dim", "orthogonal dilation");
  d.embed = matrix_from_json(require_field(j, "embed", "orthogonal dilation"),
                             "orthogonal dilation.embed");
  const json& basis = require_field(j, "basis", "orthogonal dilation");
  const json& dual = require_field(j, "dual_basis", "orthogonal dilation");
  if (!basis.is_array() || !dual.is_array())
    throw malformed_input("orthogonal dilation: bases must be arrays");
  for (std::size_t i = 0; i < basis.size(); ++i)
    d.basis.push_back(vector_from_json(
        basis[i], "orthogonal dilation.basis[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < dual.size(); ++i)
    d.dual_basis.push_back(vector_from_json(
        dual[i], "orthogonal dilation.dual_basis[" + std::to_string(i) + "]"));
  d.projection =
      matrix_from_json(require_field(j, "projection", "orthogonal dilation"),
                       "orthogonal dilation.projection");
  return d;
}

json naimark_to_json(const ovm::PositiveNaimarkDilation& d) {
  return json{{"dilation_dim", d.dilation_dim},
              {"V", to_json(d.v)},
              {"F_atoms", matrices_to_json(d.f_atoms)}};
}

ovm::PositiveNaimarkDilation naimark_from_json(const json& j) {
  ovm::PositiveNaimarkDilation d;
  d.dilation_dim = require_index(j, "dilation_dim", "naimark dilation");
  d.v = matrix_from_json(require_field(j, "V", "naimark dilation"),
                         "naimark dilation.V");
  d.f_atoms = matrices_from_json(require_field(j, "F_atoms", "naimark dilation"),
                                 "naimark dilation.F_atoms");
  return d;
}

json algebraic_dilation_to_json(const algmaps::AlgebraicDilation& d) {
  json pis = json::array();
  for (const auto& m : d.pi) pis.push_back(to_json(m));
  return json{{"W_dim", d.w_dim},          {"canonical", d.canonical},
              {"W_basis", to_json(d.w_basis)}, {"pi", std::move(pis)},
              {"S", to_json(d.s_map)},     {"T", to_json(d.t_map)}};
}

algmaps::AlgebraicDilation algebraic_dilation_from_json(const json& j) {
  algmaps::AlgebraicDilation d;
  d.w_dim = require_index(j, "W_dim", "algebraic dilation");
  const json& canonical = require_field(j, "canonical", "algebraic dilation");
  if (!canonical.is_boolean())
    throw malformed_input("algebraic dilation: \"canonical\" must be boolean");
  d.canonical = canonical.get<bool>();
  d.w_basis = matrix_from_json(require_field(j, "W_basis", "algebraic dilation"),
                               "algebraic dilation.W_basis");
  d.pi = matrices_from_json(require_field(j, "pi", "algebraic dilation"),
                            "algebraic dilation.pi");
  d.s_map = matrix_from_json(require_field(j, "S", "algebraic dilation"),
                             "algebraic dilation.S");
  d.t_map = matrix_from_json(require_field(j, "T", "algebraic dilation"),
                             "algebraic dilation.T");
  return d;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw malformed_input(origin + ":" + std::to_string(line) + ":" +
                          std::to_string(column) + ": " + e.what());
  }
}

json load_json(const std::string& path) {
  return parse_json(read_file(path), path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw malformed_input("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void save_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open file for writing: " + tmp);
    out << text;
    if (!out.good()) throw error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw error("cannot move " + tmp + " into place");
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char ch : bytes) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

std::string divergence_csv(const framings::DivergenceReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "N,partial_sum,tail_product\n";
  for (std::size_t i = 0; i < report.cutoffs.size(); ++i)
    out << report.cutoffs[i] << ',' << report.partial_sums[i] << ','
        << report.tail_products[i] << '\n';
  return out.str();
}

std::string profile_csv(const algmaps::CbProfile& profile) {
  std::ostringstream out;
  out.precision(17);
  out << "level,lower_bound\n";
  for (std::size_t i = 0; i < profile.levels.size(); ++i)
    out << profile.levels[i] << ',' << profile.lower_bounds[i] << '\n';
  return out.str();
}

json mask_to_json(Mask b) {
  json out = json::array();
  for (int i = 0; i < 32; ++i)
    if (b & (Mask{1} << i)) out.push_back(i);
  return out;
}

}  // namespace ovmkit::io
