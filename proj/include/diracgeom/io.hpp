#pragma once

// JSON containers for frames, symbols and operators, CSV for spectra.
//
// Every container carries a versioned "schema" tag, a chart descriptor
// {"n": points per axis, "order": "x1-fastest"} and one entry per grid point
// in chart index order. 2x2 complex matrices are written row-major as four
// [re, im] pairs; 3x3 frames as nine reals, row = frame index.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <variant>

#include "diracgeom/operator_algebra.hpp"
#include "diracgeom/spectrum_lab.hpp"

namespace diracgeom::io {

inline constexpr const char* library_version = "0.1.0";
inline constexpr const char* frame_schema = "diracgeom/frame@1";
inline constexpr const char* symbol_schema = "diracgeom/symbol@1";
inline constexpr const char* operator_schema = "diracgeom/operator@1";

nlohmann::json to_json(const FrameField& frame);
nlohmann::json to_json(const PrincipalSymbolField& sym);
nlohmann::json to_json(const FirstOrderOperator& op);

FrameField frame_from_json(const nlohmann::json& j);
PrincipalSymbolField symbol_from_json(const nlohmann::json& j);
FirstOrderOperator operator_from_json(const nlohmann::json& j);

using Document = std::variant<FrameField, PrincipalSymbolField, FirstOrderOperator>;

/// Dispatches on the schema tag. Any parse or shape problem is an InputError.
Document parse_document(const nlohmann::json& j);
Document read_document(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// value,multiplicity,provenance
std::string spectrum_csv(const SpectrumTable& table);
nlohmann::json spectrum_json(const SpectrumTable& table);
nlohmann::json counting_json(const CountingReport& report);
/// lambda,N,residual,scaled_residual
std::string residual_series_csv(const CountingReport& report);
nlohmann::json verdict_json(const DiracVerdict& v);

}  // namespace diracgeom::io
