#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <sstream>

#include "t2c/ndtm.hpp"

using namespace t2c;

namespace {

// Accepts exactly one advice stream; a deviation at position i is detected
// at step i+1. Output: the signed digits decoded from the matched part.
struct FixedTargetProcess : GuessProcess {
  Prefix target;

  explicit FixedTargetProcess(Prefix t) : target(std::move(t)) {}

  RunOutcome probe(const Prefix&, const Prefix& advice, Fuel fuel) const override {
    RunOutcome out;
    std::size_t lim = std::min<std::size_t>(advice.size(),
                                            static_cast<std::size_t>(std::max<Fuel>(fuel, 0)));
    std::size_t matched = lim;
    for (std::size_t i = 0; i < lim; ++i) {
      if (i < target.size() && advice.at(i) != target.at(i)) {
        out.halted = true;
        out.steps = static_cast<Fuel>(i) + 1;
        matched = i;
        break;
      }
    }
    if (!out.halted) out.steps = fuel;
    out.advice_use = static_cast<Fuel>(matched);
    out.output = bits_to_signed_digits(advice.take(matched)).digits;
    return out;
  }
};

// Advice 0^n 1 y: accepts only n = `valid_n` with y the fixed target; a
// wrong unary part is detected shortly after its 1 appears.
struct FixedTargetNatProcess : GuessProcess {
  std::size_t valid_n;
  Prefix target;

  FixedTargetNatProcess(std::size_t n, Prefix t) : valid_n(n), target(std::move(t)) {}

  RunOutcome probe(const Prefix&, const Prefix& advice, Fuel fuel) const override {
    RunOutcome out;
    std::size_t one = advice.size();
    for (std::size_t i = 0; i < advice.size(); ++i)
      if (advice.at(i) == 1) {
        one = i;
        break;
      }
    if (one == advice.size()) {  // unary part still open
      out.steps = fuel;
      return out;
    }
    if (one != valid_n) {
      Fuel detect = static_cast<Fuel>(one) + 2;
      if (detect <= fuel) {
        out.halted = true;
        out.steps = detect;
        return out;
      }
      out.steps = fuel;
      return out;
    }
    Prefix y = advice.drop(one + 1);
    std::size_t lim = std::min<std::size_t>(
        y.size(), static_cast<std::size_t>(std::max<Fuel>(fuel - static_cast<Fuel>(one) - 1, 0)));
    std::size_t matched = lim;
    for (std::size_t i = 0; i < lim; ++i) {
      if (i < target.size() && y.at(i) != target.at(i)) {
        out.halted = true;
        out.steps = static_cast<Fuel>(one + i) + 2;
        matched = i;
        break;
      }
    }
    if (!out.halted) out.steps = fuel;
    out.output = bits_to_signed_digits(y.take(matched)).digits;
    return out;
  }
};

Rational trace_value(const RevisingOutput& trace) {
  Prefix v = trace.value();
  REQUIRE(v.size() > 0);
  return decode_dyadic(v.at(v.size() - 1)).value();
}

Rational abs_diff(const Rational& a, const Rational& b) { return a < b ? b - a : a - b; }

}  // namespace

TEST_CASE("revising output bookkeeping") {
  RevisingOutput out(Alphabet::Binary);
  out.emit(1, Prefix::bits("01"));
  out.emit(2, Prefix::bits("1"));
  CHECK(out.value() == Prefix::bits("011"));
  CHECK(out.reset_count() == 0);
  CHECK(out.last_reset_stage() == -1);
  out.reset(3);
  CHECK(out.value().empty());
  out.emit(4, Prefix::bits("10"));
  CHECK(out.value() == Prefix::bits("10"));
  CHECK(out.reset_count() == 1);
  CHECK(out.last_reset_stage() == 3);
}

TEST_CASE("unary advice codes") {
  CHECK(nat_code_prefix(2, 6) == Prefix::bits("001000"));
  CHECK(nat_code_prefix(0, 3) == Prefix::bits("100"));
  CHECK(nat_code_prefix(4, 2) == Prefix::bits("00"));  // truncated code
  CHECK(nat_cantor_code(2, Prefix::bits("10")) == Prefix::bits("00110"));
}

TEST_CASE("surviving tree on the path verifier") {
  auto process = std::make_shared<Ndtm>(wkl_verifier_machine(), AdviceSpace{AdviceTag::Cantor});
  auto full = StreamName::constant(Alphabet::Binary, 1);
  SurvivingTree tree(process, full);
  CHECK(tree.survivors_at(200, 4).size() == 16);  // the full tree rejects nothing
  CHECK_FALSE(tree.rejected(Prefix::bits("0101"), 500));

  auto spine = StreamName::pointwise(Alphabet::Binary, [](std::size_t i) {
    std::size_t node = 0;
    while (node < i) node = 2 * node + 2;
    return Symbol(node == i ? 1 : 0);
  });
  SurvivingTree spine_tree(process, spine);
  auto survivors = spine_tree.survivors_at(2000, 5);
  REQUIRE(!survivors.empty());
  for (const auto& node : survivors) CHECK(node.extends(Prefix::bits("1111")));
  CHECK(spine_tree.leftmost(2000, 5).extends(Prefix::bits("1111")));
  CHECK(spine_tree.rejected(Prefix::bits("00"), 2000));
  // Rejection is permanent once established.
  CHECK(spine_tree.rejected(Prefix::bits("00"), 3000));
}

TEST_CASE("finitely-revising execution settles on the least valid guess") {
  Ndtm process(first_one_machine(), AdviceSpace{AdviceTag::Nat});
  auto input = StreamName::pointwise(Alphabet::Binary,
                                     [](std::size_t i) { return Symbol(i == 2 ? 1 : 0); });
  NatExecution ex = execute_nat_advice(process, input, 40);
  CHECK(ex.final_candidate == 2);
  CHECK(ex.trace.reset_count() <= 2);
  CHECK(ex.trace.value().take(4) == Prefix::bits("0010"));
  CHECK(ex.trace.last_reset_stage() <= 5);
  // Only the true guess survives the budget among the settled range.
  REQUIRE(!ex.survivors.empty());
  CHECK(ex.survivors.front() == 2);
}

TEST_CASE("a broken promise shows up as unending revision") {
  Ndtm process(first_one_machine(), AdviceSpace{AdviceTag::Nat});
  auto zeros = StreamName::constant(Alphabet::Binary, 0);
  NatExecution ex = execute_nat_advice(process, zeros, 60);
  CHECK(ex.trace.last_reset_stage() >= 58);
  CHECK(ex.trace.reset_count() >= 50);
}

TEST_CASE("consensus over compact guesses emits a fast-converging code") {
  Rational x(5, 8);
  FixedTargetProcess process(signed_digits_to_bits(signed_digit_prefix(x, 40)));
  auto input = StreamName::constant(Alphabet::Binary, 0);
  ConsensusExecution ex =
      execute_cantor_consensus(process, input, signed_digit_gauge(), 60, 30);
  Prefix code = ex.trace.value();
  REQUIRE(code.size() >= 5);
  CHECK(ex.trace.reset_count() == 0);
  for (std::size_t s = 0; s < code.size(); ++s)
    CHECK(abs_diff(decode_dyadic(code.at(s)).value(), x) <= pow2(-static_cast<int>(s)));
  CHECK(ex.survivor_count_at_cap == 1);
}

TEST_CASE("leftmost surviving branch reproduces the accepted guess") {
  Prefix target = signed_digits_to_bits(signed_digit_prefix(Rational(5, 8), 40));
  auto process = std::make_shared<FixedTargetProcess>(target);
  StagedPrefix left =
      execute_cantor_leftmost(process, StreamName::constant(Alphabet::Binary, 0), 20);
  CHECK(left.at(40) == target.take(20));
}

TEST_CASE("combined guessing revises the outer part and agrees on the inner") {
  Rational x(5, 8);
  FixedTargetNatProcess process(2, signed_digits_to_bits(signed_digit_prefix(x, 60)));
  auto input = StreamName::constant(Alphabet::Binary, 0);
  NatCantorExecution ex =
      execute_nat_cantor_advice(process, input, signed_digit_gauge(), 80, 40);
  CHECK(ex.final_outer == 2);
  CHECK(ex.trace.reset_count() == 2);
  CHECK(abs_diff(trace_value(ex.trace), x) <= Rational(1, 16));
}

TEST_CASE("bounded exploration of unbounded guesses only reports survivors") {
  HaltingBoundProcess toys({Fuel(5), Fuel(5), Fuel(5)});
  auto input = StreamName::constant(Alphabet::Binary, 0);
  BaireSurvivorReport report = execute_baire_advice_bounded(toys, input, 7, 20, 3);
  CHECK(report.survivors.size() == 8);  // {5,6}^3
  CHECK(report.survivors.front() == Prefix(Alphabet::Natural, {5, 5, 5}));
  for (const auto& node : report.survivors)
    for (std::size_t i = 0; i < node.size(); ++i) CHECK(node.at(i) >= 5);

  HaltingBoundProcess never({std::nullopt});
  BaireSurvivorReport report2 = execute_baire_advice_bounded(never, input, 7, 50, 1);
  REQUIRE(report2.survivors.size() == 1);
  CHECK(report2.survivors.front() == Prefix(Alphabet::Natural, {0}));
}

TEST_CASE("trace export format") {
  auto process = std::make_shared<FixedTargetProcess>(Prefix::bits("0101010101"));
  SurvivingTree tree(process, StreamName::constant(Alphabet::Binary, 0));
  std::ostringstream out;
  write_cantor_trace(out, tree, 3, 10);
  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line.substr(0, 7) == "stage 1");
  CHECK(line.find("| survivors ") != std::string::npos);
  CHECK(line.find("| output ") != std::string::npos);
  int count = 1;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 3);
}
