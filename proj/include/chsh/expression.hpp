// Boolean expressions in the game-equation notation:
//
//   expr   := term ('+' term)*          OR
//   term   := factor ('^' factor)*      XOR
//   factor := atom (['*'] atom)*        AND, juxtaposition or '*'
//   atom   := '!' atom | '(' expr ')' | variable | '0' | '1'
//
// so "xyz + xy!w" reads as (x AND y AND z) OR (x AND y AND NOT w).
#pragma once

#include "chsh/truth_table.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chsh {

class BoolExpr {
public:
  enum class Kind { Constant, Variable, Not, And, Or, Xor };

  static BoolExpr constant(bool value);
  static BoolExpr variable(int index);
  static BoolExpr negation(BoolExpr operand);
  static BoolExpr binary(Kind kind, BoolExpr lhs, BoolExpr rhs);

  Kind kind() const { return kind_; }
  bool value() const { return value_; }
  int index() const { return index_; }
  const std::vector<BoolExpr>& operands() const { return operands_; }

  /// Largest variable index referenced, or -1 for a variable-free expression.
  int max_variable() const;

  /// `row` is a big-endian input encoding over `arity` variables.
  bool evaluate(std::uint32_t row, int arity) const;

private:
  Kind kind_ = Kind::Constant;
  bool value_ = false;
  int index_ = -1;
  std::vector<BoolExpr> operands_;
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Alphabets used by the CLI: question and answer variable names per arity.
std::vector<std::string> question_alphabet(int arity);
std::vector<std::string> answer_alphabet(int arity);

/// Throws ParseError on malformed input or a name outside `alphabet`.
BoolExpr parse_expression(std::string_view text, const std::vector<std::string>& alphabet);

/// Throws std::invalid_argument if the expression uses a variable >= arity.
TruthTable to_truth_table(const BoolExpr& expr, int arity);

/// Sum of minterms over `alphabet`, "0" or "1" for constants. Re-parses to
/// the same table.
std::string to_normal_form(const TruthTable& t, const std::vector<std::string>& alphabet);

} // namespace chsh
