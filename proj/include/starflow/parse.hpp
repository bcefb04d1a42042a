#pragma once

#include "starflow/series.hpp"

namespace starflow {

// Syntax or validation failure inside an observable expression; position is a
// 0-based byte offset into the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t position)
      : std::runtime_error("syntax error at position " + std::to_string(position) +
                           ": " + what),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

// Grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := variable | rational | 'i' | 'hbar' | '(' expr ')'
// with rational = int ['/' nat] or a decimal literal, nat exponents <= 64,
// and variables restricted to the four names of the requested frame.
FormalSeries parse_expression(const std::string& text, FrameId frame, Backend backend,
                              int order);

// Frame of the first recognized coordinate name in the text, if any.
std::optional<FrameId> detect_frame(const std::string& text);

}  // namespace starflow
