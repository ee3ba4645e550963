#include "chsh/expression.hpp"
#include "chsh/search.hpp"
#include "chsh/state_library.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace chsh;

namespace {

GameResult with_gap(double classical, double quantum) {
  GameResult r;
  r.classical = classical;
  r.quantum = quantum;
  r.gap = quantum - classical;
  return r;
}

std::vector<TruthTable> first_functions(std::size_t count) {
  auto all = reduce_function_space(4, true, true).functions;
  all.resize(count);
  return all;
}

OptimizerConfig quick() {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  return cfg;
}

} // namespace

TEST(Score, CountsGapsAboveOnePercent) {
  const std::vector<GameResult> rs = {with_gap(0.75, 0.85), with_gap(0.75, 0.755), with_gap(0.75, 0.75),
                                      with_gap(0.625, 0.675)};
  EXPECT_DOUBLE_EQ(game_score(rs), 0.5);
  EXPECT_DOUBLE_EQ(average_gap(rs), (0.1 + 0.05) / 2);
  const auto s = summarize(rs, 2);
  EXPECT_EQ(s.count, 4u);
  EXPECT_EQ(s.qualifying, 2u);
  EXPECT_EQ(s.top_gaps, (std::vector<std::size_t>{0, 3}));
  EXPECT_DOUBLE_EQ(s.max_quantum, 0.85);
}

TEST(Score, EmptyAndNonQualifying) {
  EXPECT_THROW(game_score({}), std::invalid_argument);
  EXPECT_THROW(average_gap({with_gap(0.75, 0.75)}), std::domain_error);
  EXPECT_FALSE(summarize({with_gap(0.75, 0.75)}).average_gap.has_value());
}

TEST(Score, ThresholdIsStrict) {
  GameResult r = with_gap(0.5, 0.51);
  r.gap = kAdvantageThreshold;
  EXPECT_DOUBLE_EQ(game_score({r}), 0.0);
}

TEST(EvaluateGame, ChshOnEpr) {
  const GameEquation eq(to_truth_table(parse_expression("xy", question_alphabet(2)), 2), TruthTable::parity(2));
  const auto r = evaluate_game(epr_state(), "epr", eq, {});
  EXPECT_EQ(r.classical, 0.75);
  EXPECT_NEAR(r.quantum, 0.8536, 2e-3);
  EXPECT_DOUBLE_EQ(r.gap, r.quantum - r.classical);
  EXPECT_EQ(r.state, "epr");
}

TEST(TaskSeed, DependsOnlyOnMasterAndTable) {
  const TruthTable f(4, 0x177e);
  EXPECT_EQ(task_seed(1, f), task_seed(1, TruthTable(4, 0x177e)));
  EXPECT_NE(task_seed(1, f), task_seed(2, f));
  EXPECT_NE(task_seed(1, f), task_seed(1, TruthTable(4, 0x177f)));
}

TEST(Search, IndependentOfWorkerCountAndOrder) {
  const auto fns = first_functions(24);
  const auto one = search_space(TruthTable::parity(4), ghz_state(4), "ghz4", quick(), fns, 1);
  const auto three = search_space(TruthTable::parity(4), ghz_state(4), "ghz4", quick(), fns, 3);
  std::ostringstream a, b;
  write_results_jsonl(a, one, false);
  write_results_jsonl(b, three, false);
  EXPECT_EQ(a.str(), b.str());

  std::vector<TruthTable> reversed(fns.rbegin(), fns.rend());
  const auto rev = search_space(TruthTable::parity(4), ghz_state(4), "ghz4", quick(), reversed, 2);
  for (std::size_t i = 0; i < fns.size(); ++i) {
    EXPECT_EQ(rev[fns.size() - 1 - i].quantum, one[i].quantum);
    EXPECT_EQ(one[i].equation.f, fns[i]);
  }
}

TEST(Search, ProgressReachesTotal) {
  const auto fns = first_functions(5);
  std::size_t last = 0;
  search_space(TruthTable::parity(4), ghz_state(4), "ghz4", quick(), fns, 2,
               [&](std::size_t done, std::size_t total) {
                 EXPECT_EQ(total, 5u);
                 last = std::max(last, done);
               });
  EXPECT_EQ(last, 5u);
}

TEST(Search, RejectsArityMismatch) {
  EXPECT_THROW(search_space(TruthTable::parity(3), ghz_state(4), "ghz4", quick(), first_functions(2), 1),
               std::invalid_argument);
}

TEST(Subsample, StratifiedDeterministicAndOrdered) {
  const auto all = reduce_function_space(4, true, true).functions;
  const auto a = stratified_subsample(all, 300, 7);
  const auto b = stratified_subsample(all, 300, 7);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(static_cast<double>(a.size()), 300.0, 8.0);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_NE(stratified_subsample(all, 300, 8), a);
  EXPECT_EQ(stratified_subsample(all, 5000, 7), all);
}

TEST(Persistence, ResultsRoundTrip) {
  const auto rs = search_space(TruthTable::parity(4), ghz_state(4), "ghz4", quick(), first_functions(6), 1);
  std::stringstream io;
  write_results_jsonl(io, rs, true);
  const auto back = read_results_jsonl(io);
  ASSERT_EQ(back.results.size(), rs.size());
  ASSERT_TRUE(back.summary.has_value());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back.results[i].equation, rs[i].equation);
    EXPECT_EQ(back.results[i].quantum, rs[i].quantum);
    EXPECT_EQ(back.results[i].classical, rs[i].classical);
    EXPECT_EQ(back.results[i].strategy, rs[i].strategy);
    EXPECT_EQ(back.results[i].classical_strategy, rs[i].classical_strategy);
    EXPECT_EQ(back.results[i].config.seed, rs[i].config.seed);
    EXPECT_EQ(to_json(back.results[i]).dump(), to_json(rs[i]).dump());
  }
}

TEST(Persistence, FunctionListRoundTrip) {
  const auto fns = first_functions(10);
  std::stringstream io;
  write_function_list(io, fns);
  std::stringstream with_comments("# header\n\n" + io.str());
  EXPECT_EQ(read_function_list(with_comments), fns);
  std::stringstream bad("4:zz\n");
  EXPECT_THROW(read_function_list(bad), std::invalid_argument);
}
