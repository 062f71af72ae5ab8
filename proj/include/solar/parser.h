//===-- parser.h - Textual IR parser ---------------------------*- C++ -*-===//

#ifndef SOLAR_PARSER_H
#define SOLAR_PARSER_H

#include <memory>
#include <string_view>

#include "solar/ir.h"

namespace solar {

/// Parses the line-oriented textual program format ('#' starts a comment).
/// Throws ParseError with a line number on malformed input, unresolved
/// type/field/method names, duplicate classes, or cyclic extends chains.
std::unique_ptr<Program> parseProgram(std::string_view text);

} // namespace solar

#endif // SOLAR_PARSER_H
