#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nullgauge/expr.hpp>

namespace nullgauge
{

class ParseError : public std::invalid_argument
{
public:
    ParseError(const std::string &what, std::size_t offset);

    // Byte offset into the input where the problem was detected.
    std::size_t offset() const noexcept { return offset_; }

    // The message without the offset decoration.
    const std::string &reason() const noexcept { return reason_; }

private:
    std::string reason_;
    std::size_t offset_;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)?
//   atom   := number | 'x' | 'xdot' | 't' | ident | ident "'"{0,2} '(' 't' ')'
//           | fn '(' expr ')' | '(' expr ')' | '-' atom
// with fn one of sin, cos, exp, log. A '-' immediately followed by a numeric
// literal produces a negative literal rather than a negation node.
Expr parse(std::string_view text);

// Renders in the same grammar; parse(render(e)) == e for every tree that
// parse can produce.
std::string render(const Expr &e);

} // namespace nullgauge
