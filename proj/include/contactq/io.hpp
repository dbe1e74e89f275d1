#pragma once

#include <string>

#include "json.hpp"

#include "contactq/sphere.hpp"
#include "contactq/symbol.hpp"

namespace contactq {

/// {"vars":[...],"terms":[{"exp":[..],"re":[num,den],"im":[num,den]}]} in
/// canonical term order. Integers beyond 64 bits are written as strings.
nlohmann::json symbol_to_json(const Symbol& s);
/// Inverse of symbol_to_json; throws InputError on malformed input.
Symbol symbol_from_json(const nlohmann::json& j);

/// Rational from a JSON integer, a decimal number, or a string "n/d".
mpq_class rational_from_json(const nlohmann::json& j);

/// {"dim":..,"entries":[[row,col,re,im],...]} in row-major order.
nlohmann::json fock_to_json(const FockOp& op);

/// {"degree": symbol json, ...}
nlohmann::json harmonic_to_json(const HarmonicExpansion& h);

/// {"n":..,"omega":[[..]]} or {"frequencies":[..]}; rational entries as
/// numbers or "n/d" strings. Throws InputError on unknown keys.
AmbientStructure structure_from_json(const nlohmann::json& j);

}  // namespace contactq
