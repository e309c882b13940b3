#pragma once

#include <string>
#include <vector>

#include "confym/expr.hpp"

namespace confym {

struct parse_error : error {
  parse_error(const std::string& msg, int line, int col)
      : error(msg + " at line " + std::to_string(line) + ", col " + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

/// Parse the expression language. Throws parse_error on syntax problems and
/// on semantic ones (unknown symbol, family/variance mismatch, free-index
/// mismatch across terms).
Expr parse(const Context& ctx, const std::string& text);

/// Deterministic printer; inverse of parse on validated expressions.
std::string print(const Context& ctx, const Expr& e);
std::string print(const Context& ctx, const Term& t);

std::string print_latex(const Context& ctx, const Expr& e);

/// Structural diagnostics; empty list iff all Term/Expr invariants hold.
std::vector<std::string> validate(const Context& ctx, const Expr& e);

/// Common weight of all terms; throws on heterogeneous weights.
int weight_of(const Context& ctx, const Expr& e);

}  // namespace confym
