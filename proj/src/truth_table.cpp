#include "chsh/truth_table.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace chsh {

namespace {

void check_arity(int arity) {
  if (arity < kMinArity || arity > kMaxArity) {
    throw std::invalid_argument("arity must be in [2, 4], got " + std::to_string(arity));
  }
}

std::uint32_t mask_for(int arity) {
  const std::uint32_t rows = 1u << arity;
  return rows == 32 ? 0xffffffffu : (1u << rows) - 1u;
}

} // namespace

TruthTable::TruthTable(int arity, std::uint32_t bits) : arity_(arity), bits_(bits) {
  check_arity(arity);
  if ((bits & ~mask_for(arity)) != 0) {
    throw std::invalid_argument("truth table has bits beyond 2^arity rows");
  }
}

TruthTable TruthTable::constant(int arity, bool value) {
  check_arity(arity);
  return TruthTable(arity, value ? mask_for(arity) : 0u);
}

TruthTable TruthTable::projection(int arity, int variable) {
  check_arity(arity);
  if (variable < 0 || variable >= arity) {
    throw std::invalid_argument("projection variable out of range");
  }
  const std::uint32_t shift = static_cast<std::uint32_t>(arity - 1 - variable);
  std::uint32_t bits = 0;
  for (std::uint32_t row = 0; row < (1u << arity); ++row) {
    if ((row >> shift) & 1u) bits |= 1u << row;
  }
  return TruthTable(arity, bits);
}

TruthTable TruthTable::parity(int arity) {
  check_arity(arity);
  std::uint32_t bits = 0;
  for (std::uint32_t row = 0; row < (1u << arity); ++row) {
    if (std::popcount(row) & 1) bits |= 1u << row;
  }
  return TruthTable(arity, bits);
}

TruthTable TruthTable::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("truth table must be written as n:HEX, got '" + std::string(text) + "'");
  }
  int arity = 0;
  const auto arity_text = text.substr(0, colon);
  auto [p, ec] = std::from_chars(arity_text.data(), arity_text.data() + arity_text.size(), arity);
  if (ec != std::errc{} || p != arity_text.data() + arity_text.size()) {
    throw std::invalid_argument("bad arity in truth table '" + std::string(text) + "'");
  }
  check_arity(arity);
  const auto hex = text.substr(colon + 1);
  const std::size_t digits = (1u << arity) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("arity " + std::to_string(arity) + " needs " + std::to_string(digits) +
                                " hex digits, got '" + std::string(hex) + "'");
  }
  std::uint32_t bits = 0;
  auto [q, ec2] = std::from_chars(hex.data(), hex.data() + hex.size(), bits, 16);
  if (ec2 != std::errc{} || q != hex.data() + hex.size()) {
    throw std::invalid_argument("bad hex digits in truth table '" + std::string(text) + "'");
  }
  return TruthTable(arity, bits);
}

std::uint32_t TruthTable::full_mask() const { return mask_for(arity_); }

bool TruthTable::evaluate(std::span<const int> inputs) const {
  if (static_cast<int>(inputs.size()) != arity_) {
    throw std::invalid_argument("input tuple length does not match arity");
  }
  std::uint32_t row = 0;
  for (int v : inputs) row = (row << 1) | (v ? 1u : 0u);
  return at(row);
}

TruthTable TruthTable::complement() const { return TruthTable(arity_, ~bits_ & full_mask()); }

TruthTable TruthTable::negate_inputs(std::uint32_t mask) const {
  const std::uint32_t n = rows();
  mask &= n - 1;
  std::uint32_t out = 0;
  for (std::uint32_t row = 0; row < n; ++row) {
    if (at(row ^ mask)) out |= 1u << row;
  }
  return TruthTable(arity_, out);
}

TruthTable TruthTable::permute_inputs(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != arity_) {
    throw std::invalid_argument("permutation length does not match arity");
  }
  std::vector<int> seen(static_cast<std::size_t>(arity_), 0);
  for (int p : perm) {
    if (p < 0 || p >= arity_ || seen[static_cast<std::size_t>(p)]++) {
      throw std::invalid_argument("not a permutation");
    }
  }
  std::uint32_t out = 0;
  for (std::uint32_t row = 0; row < rows(); ++row) {
    std::uint32_t src = 0;
    for (int i = 0; i < arity_; ++i) {
      const int bit = (row >> (arity_ - 1 - perm[static_cast<std::size_t>(i)])) & 1;
      src |= static_cast<std::uint32_t>(bit) << (arity_ - 1 - i);
    }
    if (at(src)) out |= 1u << row;
  }
  return TruthTable(arity_, out);
}

std::string TruthTable::to_string() const {
  static constexpr char kHex[] = "0123456789abcdef";
  const int digits = static_cast<int>(rows() / 4);
  std::string out = std::to_string(arity_) + ":";
  for (int d = digits - 1; d >= 0; --d) {
    out.push_back(kHex[(bits_ >> (4 * d)) & 0xfu]);
  }
  return out;
}

GameEquation::GameEquation(TruthTable f_in, TruthTable g_in) : f(f_in), g(g_in) {
  if (f.arity() != g.arity()) {
    throw std::invalid_argument("game equation sides have different arity (" + std::to_string(f.arity()) +
                                " vs " + std::to_string(g.arity()) + ")");
  }
}

std::uint32_t GameEquation::winning_answers(std::uint32_t question) const {
  return f.at(question) ? g.bits() : (~g.bits() & g.full_mask());
}

std::vector<int> relevant_variables(const TruthTable& t) {
  std::vector<int> out;
  for (int v = 0; v < t.arity(); ++v) {
    const std::uint32_t flip = 1u << (t.arity() - 1 - v);
    if (t.negate_inputs(flip) != t) out.push_back(v);
  }
  return out;
}

bool all_variables_relevant(const TruthTable& t) {
  return static_cast<int>(relevant_variables(t).size()) == t.arity();
}

std::vector<TruthTable> input_negation_variants(const TruthTable& t) {
  std::vector<TruthTable> out;
  out.reserve(t.rows());
  for (std::uint32_t mask = 0; mask < t.rows(); ++mask) out.push_back(t.negate_inputs(mask));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TruthTable canonical_representative(const TruthTable& t, bool include_output_flip) {
  TruthTable best = t;
  for (std::uint32_t mask = 0; mask < t.rows(); ++mask) {
    const TruthTable v = t.negate_inputs(mask);
    best = std::min(best, v);
    if (include_output_flip) best = std::min(best, v.complement());
  }
  return best;
}

ReducedSpace reduce_function_space(int arity, bool require_all_relevant, bool include_output_flip) {
  check_arity(arity);
  const std::uint64_t space = std::uint64_t{1} << (1u << arity);
  const std::uint32_t full = mask_for(arity);

  ReducedSpace result;
  result.counts.full_space = space;

  std::vector<bool> seen(space, false);
  if (include_output_flip) {
    std::uint64_t pairs = 0;
    for (std::uint64_t bits = 0; bits < space; ++bits) {
      const auto b = static_cast<std::uint32_t>(bits);
      if (std::min(b, ~b & full) == b) ++pairs;
    }
    result.counts.after_output_flip = pairs;
  } else {
    result.counts.after_output_flip = space;
  }

  std::vector<TruthTable> reps;
  for (std::uint64_t bits = 0; bits < space; ++bits) {
    const TruthTable rep = canonical_representative(TruthTable(arity, static_cast<std::uint32_t>(bits)),
                                                    include_output_flip);
    if (!seen[rep.bits()]) {
      seen[rep.bits()] = true;
      reps.push_back(rep);
    }
  }
  std::sort(reps.begin(), reps.end());
  result.counts.after_negation_dedup = reps.size();

  if (require_all_relevant) {
    std::erase_if(reps, [](const TruthTable& t) { return !all_variables_relevant(t); });
  }
  result.counts.after_relevance = reps.size();
  result.functions = std::move(reps);
  return result;
}

} // namespace chsh
