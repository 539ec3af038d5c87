#ifndef OVMKIT_IO_HPP
#define OVMKIT_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ovmkit/algmaps.hpp"
#include "ovmkit/dilation.hpp"
#include "ovmkit/frames.hpp"
#include "ovmkit/framings.hpp"
#include "ovmkit/ovm.hpp"
#include "ovmkit/types.hpp"

namespace ovmkit::io {

using nlohmann::json;

/// Complex entries are two-element arrays [re, im]; matrices are row-major
/// arrays of rows.
json to_json(const Scalar& z);
json to_json(const Vector& v);
json to_json(const Matrix& m);

Scalar scalar_from_json(const json& j, const std::string& what);
Vector vector_from_json(const json& j, const std::string& what);
Matrix matrix_from_json(const json& j, const std::string& what);

json frame_to_json(const frames::Frame& f);
frames::Frame frame_from_json(const json& j);

json framing_to_json(const framings::Framing& fr);
framings::Framing framing_from_json(const json& j);

json ovm_to_json(const ovm::FiniteOVM& e);
ovm::FiniteOVM ovm_from_json(const json& j);

json generic_system_to_json(const dilation::GenericDilationSystem& sys);
dilation::GenericDilationSystem generic_system_from_json(const json& j);

json algebra_to_json(const algmaps::FiniteAlgebra& a);
algmaps::FiniteAlgebra algebra_from_json(const json& j);

json map_to_json(const algmaps::LinearMapOnAlgebra& phi);
algmaps::LinearMapOnAlgebra map_from_json(const json& j);

json orthogonal_dilation_to_json(const frames::OrthogonalDilation& d);
frames::OrthogonalDilation orthogonal_dilation_from_json(const json& j);

json naimark_to_json(const ovm::PositiveNaimarkDilation& d);
ovm::PositiveNaimarkDilation naimark_from_json(const json& j);

json algebraic_dilation_to_json(const algmaps::AlgebraicDilation& d);
algmaps::AlgebraicDilation algebraic_dilation_from_json(const json& j);

/// Parses JSON text; parse failures carry origin, line, and column.
json parse_json(const std::string& text, const std::string& origin);

/// Reads and parses a JSON file; parse failures carry line and column.
json load_json(const std::string& path);

/// Writes through a temporary file in the same directory, then renames.
void save_text_atomic(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

/// FNV-1a 64-bit digest as a fixed-width hex string.
std::string fnv1a_hex(std::string_view bytes);

std::string divergence_csv(const framings::DivergenceReport& report);
std::string profile_csv(const algmaps::CbProfile& profile);

/// Event rendered as the sorted list of atom indices it contains.
json mask_to_json(Mask b);

}  // namespace ovmkit::io

#endif
