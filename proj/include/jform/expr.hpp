#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "jform/series.hpp"

namespace jform {

// Malformed expression text: carries the 0-based character position.
struct ExprError : std::invalid_argument {
    ExprError(const std::string& what, size_t position)
        : std::invalid_argument(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    size_t position;
};

namespace expr_detail {
struct Node;
}

// Parsed form expression over generator names, the standard one-variable
// series, integer literals, + - * /, integer powers ^n, and scale(e, a) for
// the substitution z -> a*z.  Precedence: ^ binds tighter than unary minus,
// which binds tighter than * and /, which bind tighter than + and -.
class FormExpr {
  public:
    static FormExpr parse(const std::string& text);

    // Evaluate with every named leaf expanded through the given truncation;
    // the result's own truncation may be shorter when the expression divides
    // by a series with a positive q-valuation.
    FourierSeries evaluate(long qtrunc) const;

  private:
    explicit FormExpr(std::shared_ptr<const expr_detail::Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const expr_detail::Node> root_;
};

// The identifiers the grammar recognizes, longest first.
const std::vector<std::string>& expr_names();

// Convenience wrapper: parse then evaluate.
FourierSeries evaluate_expr(const std::string& text, long qtrunc);

}  // namespace jform
