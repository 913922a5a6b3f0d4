#pragma once

#include <string_view>

#include "cefr/python/ast.hpp"
#include "cefr/python/lexer.hpp"

namespace cefr::python {

/// Parses a complete module with the Python 3 grammar (through 3.12:
/// match statements, parenthesized context managers, PEP 695 type
/// parameters, nested f-string quotes). Throws ParseError for anything
/// `ast.parse` would reject at the grammar level, which includes most
/// Python 2-only sources.
NodePtr parse_module(std::string_view source);

}  // namespace cefr::python
