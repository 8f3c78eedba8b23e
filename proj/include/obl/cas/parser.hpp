#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "obl/cas/rational_function.hpp"

namespace obl::cas {

/// Parses an arithmetic expression into a normalized rational function.
///
/// Grammar (whitespace is ignored between tokens):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('+' | '-') unary | power
///     power   := primary ('^' INTEGER)?
///     primary := INTEGER | IDENT | '(' expr ')'
///
/// `^` binds tighter than unary minus, so "-x^2" is -(x^2). Exponents are
/// nonnegative integer literals only.
///
/// Throws ParseError (with the byte offset), UnknownVariable, or
/// DivisionByZero.
RationalFunction parse_expr(std::string_view text, const VarsPtr& vars);
RationalFunction parse_expr(std::string_view text, const std::vector<std::string>& vars);

}  // namespace obl::cas
