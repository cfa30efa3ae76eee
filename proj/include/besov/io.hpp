#pragma once

#include <filesystem>

#include "json.hpp"

#include "besov/atoms.hpp"
#include "besov/domains.hpp"
#include "besov/haar.hpp"
#include "besov/norms.hpp"
#include "besov/operators.hpp"

namespace besov {

using json = nlohmann::json;

/// Malformed input files.
class IoError : public Error {
public:
    using Error::Error;
};

json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with sorted keys and a trailing newline; byte-identical for identical values.
void write_json_file(const std::filesystem::path& path, const json& value);

json exponent_to_json(Exponent e);
Exponent exponent_from_json(const json& j);
json to_json(const BesovParams& params);
BesovParams params_from_json(const json& j);

/// {"kind", "depth", "cells": [{"id", "level", "index", "measure", "parent", "children", "interval"}]}, cells sorted by id.
json to_json(const Grid& grid);
/// Accepts the canonical form, or {"kind": "dyadic", "depth": K} without cells.
Grid grid_from_json(const json& j);

/// {"grid": inline grid, "level", "values"}.
json to_json(const LeafFunction& f);
/// "grid" may be an inline object or a path (relative paths resolve against `base`).
LeafFunction function_from_json(const json& j, const std::filesystem::path& base = {});
/// Reuses an already loaded grid when the file's grid is a path or matches it.
LeafFunction function_from_json(const json& j, GridPtr grid);

/// {"grid", "level", "d_root", "d": [{"pair": {"owner", "index"}, "value"}]}; zero coefficients are omitted.
json to_json(const HaarCoefficients& coeffs, const HaarSystem& system, int level);
HaarCoefficients coefficients_from_json(const json& j, const HaarSystem& system);

/// {"params", "kind", "coeffs": [{"cell", "value"}], "positive", "atoms"?}; zero coefficients are omitted.
json to_json(const AtomicRepresentation& rep);
AtomicRepresentation representation_from_json(const json& j, GridPtr grid);

json to_json(const ConstantsReport& c);
json to_json(const NormReport& r, const BesovParams& params);
json to_json(const RegularityReport& r);
json to_json(const MultiplierReport& r);
json to_json(const CompositionReport& r);
json to_json(const TransmutationReport& r);
json to_json(const BesovAtomReport& r);

}  // namespace besov
