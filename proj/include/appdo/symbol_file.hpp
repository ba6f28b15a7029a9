#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "appdo/symbol.hpp"

namespace appdo {

/// Parsed form of a symbol definition file.
///
///     dim = 1
///
///     [[generator]]
///     name = "one"
///     vector = [1]
///
///     [class]
///     m = -1
///     rho = 1
///     delta = 0
///
///     [[term]]
///     freq = "(1)"
///     coeff = "1/2*jbracket(xi)^(-1)"
struct SymbolFile {
    std::size_t dim = 0;
    std::vector<std::string> names;
    std::vector<RealVector> generators;
    SymbolClassParams cls;
    std::vector<std::pair<Frequency, std::string>> terms;
};

/// Schema errors name the offending line; class constraints and duplicate
/// frequencies are rejected with InputError.
SymbolFile parse_symbol_text(std::string_view text, const std::string& source = "<input>");
APSymbol to_symbol(const SymbolFile& f);
APSymbol parse_symbol_file(const std::string& path);
APSymbol parse_symbol_string(std::string_view text);

/// Canonical text; parse_symbol_string(serialize_symbol(a)) == a.
std::string serialize_symbol(const APSymbol& a);

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

}  // namespace appdo
