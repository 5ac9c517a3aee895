#pragma once

#include <string>

#include "concord/copula.hpp"

namespace concord {

/// Parse the CLI copula mini-grammar (whitespace-insensitive):
///
///   expr    := prefix '*' expr | primary
///   prefix  := 'perm(' ints ')' | 'refl(' ints ')'
///   primary := 'Pi(' int ')' | 'M(' int ')' | 'En(' int ',' real ')'
///            | 'prod(' expr ',' expr ')' | 'mix(' real ',' expr ',' expr ')'
///            | 'marg(' expr ';' 'drop=' ints ')'
///
/// Indices are 1-based. Prefixes bind right: a*b*C applies b first.
/// Throws InputError with the offending position on malformed input.
Copula parse_copula(const std::string& text);

} // namespace concord
