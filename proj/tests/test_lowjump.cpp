#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "t2c/lowjump.hpp"

using namespace t2c;

namespace {

StreamName random_cantor_point(std::mt19937_64& rng) {
  Prefix head(Alphabet::Binary);
  for (int i = 0; i < 24; ++i) head.push_back(static_cast<int>(rng() % 2));
  return StreamName::periodic(head, Prefix::bits(rng() % 2 ? "0" : "10"));
}

/// Ground truth for the cylinder enumeration: p is in U_i iff it extends
/// the i-th word.
bool prefix_match_oracle(const StreamName& p, std::size_t i) {
  Prefix w = cylinder_word(i);
  return p.at(static_cast<Fuel>(w.size())).take(w.size()) == w;
}

}  // namespace

TEST_CASE("jump bits confirm cylinder membership and never retract") {
  OpenEnumeration en = cylinder_enumeration();
  StreamName zeros = StreamName::constant(Alphabet::Binary, 0);

  // "00" is word 3; all-zeros lands inside by stage |w| + 4.
  REQUIRE(cylinder_word(3) == Prefix::bits("00"));
  CHECK(jump_approx(zeros, en, 3, 6) == 1);
  for (Fuel s = 6; s <= 64; ++s) CHECK(jump_approx(zeros, en, 3, s) == 1);

  // "1" is word 2; all-zeros never enters.
  REQUIRE(cylinder_word(2) == Prefix::bits("1"));
  for (Fuel s = 1; s <= 64; ++s) CHECK(jump_approx(zeros, en, 2, s) == 0);

  // Random points against the prefix-match ground truth, with the
  // stabilization bound |w_i| + 4 and one-way mind changes.
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    StreamName p = random_cantor_point(rng);
    std::size_t i = rng() % 32;
    Fuel bound = static_cast<Fuel>(cylinder_word(i).size()) + 4;
    int want = prefix_match_oracle(p, i) ? 1 : 0;
    int seen = 0;
    for (Fuel s = 1; s <= 20; ++s) {
      int b = jump_approx(p, en, i, s);
      CHECK(b >= seen);  // never retracts
      seen = b;
      if (s >= bound) CHECK(b == want);
    }
  }

  // The all-positions view agrees with the per-position probes.
  LimitName all = jump_limit_name(zeros, en);
  Prefix a = all.at(10);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(int(a.at(i)) == jump_approx(zeros, en, i, 10));
}

TEST_CASE("limit names from preimage tables converge to the jump") {
  OpenEnumeration en = cylinder_enumeration();
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    StreamName p = random_cantor_point(rng);

    Prefix ident = low_name_from_markov(identity_jump_table(en), p).at(20);
    Prefix neg = low_name_from_markov(negation_jump_table(en), p).at(20);
    StreamName np = StreamName::from_stages(Alphabet::Binary, [p](Fuel f) {
      Prefix w = p.at(f), out(Alphabet::Binary);
      for (std::size_t i = 0; i < w.size(); ++i) out.push_back(Symbol(1) - w.at(i));
      return out;
    });
    REQUIRE(ident.size() == 20);
    REQUIRE(neg.size() == 20);
    for (std::size_t n = 0; n < 16; ++n) {
      CHECK(int(ident.at(n)) == (prefix_match_oracle(p, n) ? 1 : 0));
      CHECK(int(neg.at(n)) == (prefix_match_oracle(np, n) ? 1 : 0));
    }
  }

  // The constant-map table ignores its input: bit n says whether the
  // all-zero point lies in U_n.
  StreamName zeros = StreamName::constant(Alphabet::Binary, 0);
  StreamName ones = StreamName::constant(Alphabet::Binary, 1);
  Prefix a = low_name_from_markov(constant_zero_jump_table(en), zeros).at(20);
  Prefix b = low_name_from_markov(constant_zero_jump_table(en), ones).at(20);
  CHECK(a == b);
  for (std::size_t n = 0; n < 16; ++n)
    CHECK(int(a.at(n)) == (prefix_match_oracle(zeros, n) ? 1 : 0));
}

TEST_CASE("preimage names recovered from a low procedure") {
  OpenEnumeration en = cylinder_enumeration();

  // Jump of the identity at position 1 (the cylinder [0]).
  REQUIRE(cylinder_word(1) == Prefix::bits("0"));
  auto ident_lowrun = [en](const StreamName& p) { return jump_limit_name(p, en); };
  Delta2SetName d = markov_from_low(ident_lowrun, 1);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    StreamName p = random_cantor_point(rng);
    int want = p.at(1).at(0) == 0 ? 1 : 0;
    CHECK(delta2_stabilized(d, PointName::cantor(p), 16).bit == want);
  }

  // A lowrun pinned at 1 names the whole space: never refuted anywhere.
  auto all_ones = [](const StreamName&) {
    LimitName l;
    l.approx = [](Fuel stage) {
      Prefix out(Alphabet::Binary);
      for (Fuel i = 0; i < stage; ++i) out.push_back(1);
      return out;
    };
    return l;
  };
  Delta2SetName whole = markov_from_low(all_ones, 0);
  StreamName q = StreamName::periodic(Prefix::bits("101"), Prefix::bits("1"));
  CHECK_FALSE(member_out_closed(whole.closed(0), PointName::cantor(q), 12));
  StabilizedVerdict v = delta2_stabilized(whole, PointName::cantor(q), 16);
  CHECK(v.bit == 1);
  CHECK(v.changes == 0);
}

TEST_CASE("round trip through the jump preserves preimage verdicts") {
  OpenEnumeration en = cylinder_enumeration();
  auto table = identity_jump_table(en);
  auto lowrun = [table](const StreamName& p) { return low_name_from_markov(table, p); };

  std::mt19937_64 rng(53);
  std::vector<PointName> samples;
  std::vector<StreamName> streams;
  for (int trial = 0; trial < 30; ++trial) {
    streams.push_back(random_cantor_point(rng));
    samples.push_back(PointName::cantor(streams.back()));
  }
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
    Delta2SetName d = markov_from_low(lowrun, n);
    for (std::size_t k = 0; k < streams.size(); ++k) {
      int want = prefix_match_oracle(streams[k], n) ? 1 : 0;
      CHECK(delta2_stabilized(d, samples[k], 10).bit == want);
    }
    ConsistencyReport report = delta2_consistency_check(d, samples, 10);
    CHECK(report.contradictions.empty());
  }
}

TEST_CASE("limit-instance checking flags decided disagreements") {
  OpenEnumeration en = cylinder_enumeration();
  std::mt19937_64 rng(59);

  // Stage-indexed jump approximations of q are exactly what the check
  // expects: no counterevidence, and decided bits match the ground truth.
  for (int trial = 0; trial < 5; ++trial) {
    StreamName q = random_cantor_point(rng);
    auto ps = [q, en](std::size_t j) {
      return StreamName::from_stages(Alphabet::Binary, [q, en, j](Fuel f) {
        Prefix out(Alphabet::Binary);
        for (Fuel i = 0; i < f; ++i)
          out.push_back(jump_approx(q, en, static_cast<std::size_t>(i),
                                    static_cast<Fuel>(j)));
        return out;
      });
    };
    LInstanceReport report = check_l_instance(ps, q, en, 16);
    CHECK(report.ok());
    REQUIRE(report.jump_bits.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(report.jump_bits[i] == (prefix_match_oracle(q, i) ? 1 : 0));
      if (report.unstable.empty()) CHECK(report.limit_bits[i] == report.jump_bits[i]);
    }
  }

  // A sequence pinned at zero contradicts the decided bit at position 0
  // (U_0 is the whole space, so the jump bit 1 is confirmed).
  StreamName zeros = StreamName::constant(Alphabet::Binary, 0);
  auto flat = [zeros](std::size_t) { return zeros; };
  LInstanceReport bad = check_l_instance(flat, zeros, en, 12);
  CHECK_FALSE(bad.ok());
  REQUIRE(!bad.counterexamples.empty());
  CHECK(bad.counterexamples.front().position == 0);
}

TEST_CASE("clopen names and enumeration files round trip") {
  // [01] as a simultaneous Sigma/Pi name.
  Delta2SetName d = clopen_cantor_delta2(
      open_from_balls(cantor_space(), {Ball{cantor_word_index(Prefix::bits("01")),
                                            pow2(-1)}}));
  StreamName in = StreamName::periodic(Prefix::bits("01"), Prefix::bits("0"));
  StreamName out = StreamName::constant(Alphabet::Binary, 1);
  CHECK(delta2_stabilized(d, PointName::cantor(in), 16).bit == 1);
  CHECK(delta2_stabilized(d, PointName::cantor(out), 16).bit == 0);

  // Text form: words survive writing and parsing.
  OpenEnumeration en = cylinder_enumeration();
  std::ostringstream text;
  write_open_enumeration(text, en, 8, 4);
  CHECK(text.str().substr(0, 5) == "0: e\n");
  std::istringstream read(text.str());
  OpenEnumeration back = parse_open_enumeration(read);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    StreamName p = random_cantor_point(rng);
    std::size_t i = rng() % 8;
    CHECK(jump_approx(p, back, i, 12) == jump_approx(p, en, i, 12));
  }
  // Unlisted indices denote the empty set.
  CHECK(jump_approx(StreamName::constant(Alphabet::Binary, 0), back, 100, 12) == 0);

  std::istringstream bad("x: 01\n");
  CHECK_THROWS_AS(parse_open_enumeration(bad), std::runtime_error);
}
