#include "chsh/expression.hpp"

#include <algorithm>
#include <cctype>

namespace chsh {

BoolExpr BoolExpr::constant(bool value) {
  BoolExpr e;
  e.kind_ = Kind::Constant;
  e.value_ = value;
  return e;
}

BoolExpr BoolExpr::variable(int index) {
  BoolExpr e;
  e.kind_ = Kind::Variable;
  e.index_ = index;
  return e;
}

BoolExpr BoolExpr::negation(BoolExpr operand) {
  BoolExpr e;
  e.kind_ = Kind::Not;
  e.operands_.push_back(std::move(operand));
  return e;
}

BoolExpr BoolExpr::binary(Kind kind, BoolExpr lhs, BoolExpr rhs) {
  if (kind != Kind::And && kind != Kind::Or && kind != Kind::Xor) {
    throw std::invalid_argument("binary node must be AND, OR or XOR");
  }
  BoolExpr e;
  e.kind_ = kind;
  e.operands_.push_back(std::move(lhs));
  e.operands_.push_back(std::move(rhs));
  return e;
}

int BoolExpr::max_variable() const {
  int m = kind_ == Kind::Variable ? index_ : -1;
  for (const auto& op : operands_) m = std::max(m, op.max_variable());
  return m;
}

bool BoolExpr::evaluate(std::uint32_t row, int arity) const {
  switch (kind_) {
  case Kind::Constant:
    return value_;
  case Kind::Variable:
    return (row >> (arity - 1 - index_)) & 1u;
  case Kind::Not:
    return !operands_[0].evaluate(row, arity);
  case Kind::And:
    return operands_[0].evaluate(row, arity) && operands_[1].evaluate(row, arity);
  case Kind::Or:
    return operands_[0].evaluate(row, arity) || operands_[1].evaluate(row, arity);
  case Kind::Xor:
    return operands_[0].evaluate(row, arity) != operands_[1].evaluate(row, arity);
  }
  return false;
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

std::vector<std::string> question_alphabet(int arity) {
  switch (arity) {
  case 2: return {"x", "y"};
  case 3: return {"x", "y", "z"};
  case 4: return {"w", "x", "y", "z"};
  default: throw std::invalid_argument("no question alphabet for arity " + std::to_string(arity));
  }
}

std::vector<std::string> answer_alphabet(int arity) {
  switch (arity) {
  case 2: return {"a", "b"};
  case 3: return {"a", "b", "c"};
  case 4: return {"a", "b", "c", "d"};
  default: throw std::invalid_argument("no answer alphabet for arity " + std::to_string(arity));
  }
}

namespace {

class Parser {
public:
  Parser(std::string_view text, const std::vector<std::string>& alphabet) : text_(text), alphabet_(alphabet) {}

  BoolExpr parse() {
    BoolExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool starts_atom(char c) const {
    return c == '!' || c == '(' || c == '0' || c == '1' || std::isalpha(static_cast<unsigned char>(c));
  }

  BoolExpr expr() {
    BoolExpr lhs = term();
    while (peek() == '+') {
      ++pos_;
      lhs = BoolExpr::binary(BoolExpr::Kind::Or, std::move(lhs), term());
    }
    return lhs;
  }

  BoolExpr term() {
    BoolExpr lhs = factor();
    while (peek() == '^') {
      ++pos_;
      lhs = BoolExpr::binary(BoolExpr::Kind::Xor, std::move(lhs), factor());
    }
    return lhs;
  }

  BoolExpr factor() {
    BoolExpr lhs = atom();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        lhs = BoolExpr::binary(BoolExpr::Kind::And, std::move(lhs), atom());
      } else if (starts_atom(c)) {
        lhs = BoolExpr::binary(BoolExpr::Kind::And, std::move(lhs), atom());
      } else {
        return lhs;
      }
    }
  }

  BoolExpr atom() {
    const char c = peek();
    if (c == '\0') throw ParseError("unexpected end of expression", pos_);
    if (c == '!') {
      ++pos_;
      return BoolExpr::negation(atom());
    }
    if (c == '(') {
      const std::size_t open = pos_++;
      BoolExpr inner = expr();
      if (peek() != ')') throw ParseError("unclosed '(' opened at " + std::to_string(open), pos_);
      ++pos_;
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return BoolExpr::constant(c == '1');
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return variable();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  BoolExpr variable() {
    int best = -1;
    std::size_t best_len = 0;
    const std::string_view rest = text_.substr(pos_);
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      const auto& name = alphabet_[i];
      if (!name.empty() && name.size() > best_len && rest.starts_with(name)) {
        best = static_cast<int>(i);
        best_len = name.size();
      }
    }
    if (best < 0) {
      throw ParseError(std::string("unknown variable '") + text_[pos_] + "'", pos_);
    }
    pos_ += best_len;
    return BoolExpr::variable(best);
  }

  std::string_view text_;
  const std::vector<std::string>& alphabet_;
  std::size_t pos_ = 0;
};

} // namespace

BoolExpr parse_expression(std::string_view text, const std::vector<std::string>& alphabet) {
  return Parser(text, alphabet).parse();
}

TruthTable to_truth_table(const BoolExpr& expr, int arity) {
  if (expr.max_variable() >= arity) {
    throw std::invalid_argument("expression uses variable " + std::to_string(expr.max_variable()) +
                                " but arity is " + std::to_string(arity));
  }
  const TruthTable zero = TruthTable::constant(arity, false);
  std::uint32_t bits = 0;
  for (std::uint32_t row = 0; row < zero.rows(); ++row) {
    if (expr.evaluate(row, arity)) bits |= 1u << row;
  }
  return TruthTable(arity, bits);
}

std::string to_normal_form(const TruthTable& t, const std::vector<std::string>& alphabet) {
  if (static_cast<int>(alphabet.size()) < t.arity()) {
    throw std::invalid_argument("alphabet shorter than arity");
  }
  if (t.bits() == 0) return "0";
  if (t.bits() == t.full_mask()) return "1";
  std::string out;
  for (std::uint32_t row = 0; row < t.rows(); ++row) {
    if (!t.at(row)) continue;
    if (!out.empty()) out += " + ";
    for (int v = 0; v < t.arity(); ++v) {
      if (v > 0) out += '*';
      if (!((row >> (t.arity() - 1 - v)) & 1u)) out += '!';
      out += alphabet[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

} // namespace chsh
