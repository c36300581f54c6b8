#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "t2c/rational.hpp"
#include "t2c/stream.hpp"

using namespace t2c;

namespace {

Prefix random_bits(std::mt19937& rng, std::size_t len) {
  Prefix p(Alphabet::Binary);
  for (std::size_t i = 0; i < len; ++i) p.push_back(rng() & 1);
  return p;
}

}  // namespace

TEST_CASE("prefix order and editing") {
  Prefix w = Prefix::bits("0110");
  CHECK(w.size() == 4);
  CHECK(w.str() == "0110");
  CHECK(w.extends(Prefix::bits("01")));
  CHECK_FALSE(w.extends(Prefix::bits("00")));
  CHECK(w.take(2) == Prefix::bits("01"));
  CHECK(w.drop(2) == Prefix::bits("10"));
  CHECK(Prefix::bits("01") + Prefix::bits("10") == w);
  CHECK(w.compatible(Prefix::bits("011010")));
  CHECK_FALSE(Prefix::bits("00").compatible(Prefix::bits("01")));
  CHECK_THROWS_AS(Prefix(Alphabet::Binary).push_back(2), BadSymbol);
  CHECK_THROWS_AS(Prefix(Alphabet::Natural).push_back(-1), BadSymbol);
  Prefix nat(Alphabet::Natural, {3, 1, 4});
  CHECK(nat.str() == "3,1,4");
}

TEST_CASE("stream names obey the initial-segment law") {
  auto s = StreamName::pointwise(Alphabet::Binary, [](std::size_t i) { return Symbol(i % 2); });
  CHECK(check_stream_monotone(s, 50).ok());
  CHECK(s.at(4).str() == "0101");

  auto p = StreamName::periodic(Prefix::bits("110"), Prefix::bits("01"));
  CHECK(check_stream_monotone(p, 50).ok());
  CHECK(p.at(7).str() == "1100101");

  auto c = StreamName::constant(Alphabet::Natural, 7);
  CHECK(c.at(3).str() == "7,7,7");

  // A stage function that revises position 0 is caught by the checker.
  auto bad = StreamName::from_stages(Alphabet::Binary, [](Fuel f) {
    Prefix w(Alphabet::Binary);
    for (Fuel i = 0; i < f; ++i) w.push_back(f % 2);
    return w;
  });
  CHECK_FALSE(check_stream_monotone(bad, 10).ok());
}

TEST_CASE("transformers compose and pass the monotone probe") {
  auto id = PrefixTransformer::identity(Alphabet::Binary);
  auto flip = PrefixTransformer::symbol_map(Alphabet::Binary, Alphabet::Binary,
                                            [](const Symbol& s) { return Symbol(1) - s; });
  std::mt19937 rng(7);
  std::vector<Prefix> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(random_bits(rng, 1 + rng() % 12));
  CHECK(check_monotone(id, samples, 8).ok());
  CHECK(check_monotone(flip, samples, 8).ok());
  CHECK(check_monotone(compose(flip, flip), samples, 8).ok());
  CHECK(compose(flip, flip).apply(samples[0], 8) == samples[0]);

  // Fuel-dependent garbage violates consistency and is caught.
  PrefixTransformer bad(Alphabet::Binary, Alphabet::Binary, [](const Prefix&, Fuel f) {
    Prefix w(Alphabet::Binary);
    for (Fuel i = 0; i < f; ++i) w.push_back(f % 2);
    return w;
  });
  CHECK_FALSE(check_monotone(bad, samples, 8).ok());
}

TEST_CASE("pairing round trips") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Prefix p = random_bits(rng, rng() % 30);
    Prefix q = random_bits(rng, rng() % 30);
    auto [p2, q2] = pair_decode_prefix(pair_encode_prefix(p, q));
    CHECK(p.compatible(p2));
    CHECK(q.compatible(q2));
    std::size_t n = std::min(p.size(), q.size());
    CHECK(p2.size() >= n);
    CHECK(q2.size() >= n);
  }
  auto a = StreamName::pointwise(Alphabet::Binary, [](std::size_t) { return Symbol(1); });
  auto b = StreamName::pointwise(Alphabet::Binary, [](std::size_t i) { return Symbol(i % 2); });
  auto [a2, b2] = pair_decode(pair_encode(a, b));
  CHECK(a2.at(10).extends(a.at(10)));
  CHECK(b2.at(10).extends(b.at(10)));
  CHECK(check_stream_monotone(a2, 30).ok());
}

TEST_CASE("cantor pairing is a bijection on an initial segment") {
  for (std::size_t k = 0; k < 2000; ++k) {
    auto [i, j] = cantor_unpair(k);
    CHECK(cantor_pair(i, j) == k);
  }
  CHECK(cantor_pair(0, 0) == 0);
  CHECK(cantor_pair(1, 0) == 2);
  CHECK(cantor_pair(0, 1) == 1);
}

TEST_CASE("countable tuples project back to their components") {
  auto family = [](std::size_t i) {
    return StreamName::pointwise(Alphabet::Natural,
                                 [i](std::size_t j) { return Symbol(10 * i + j); });
  };
  auto tup = tuple_encode(Alphabet::Natural, family);
  CHECK(check_stream_monotone(tup, 60).ok());
  for (std::size_t i = 0; i < 4; ++i) {
    auto comp = tuple_component(tup, i);
    Prefix got = comp.at(200);
    CHECK(got.size() >= 5);
    for (std::size_t j = 0; j < 5; ++j) CHECK(got.at(j) == Symbol(10 * i + j));
  }
}

TEST_CASE("staged log format") {
  auto s = StreamName::pointwise(Alphabet::Binary, [](std::size_t i) { return Symbol(i % 2); });
  std::ostringstream out;
  write_staged_log(out, s, 3);
  CHECK(out.str() == "stage 0: \nstage 1: 0\nstage 2: 01\nstage 3: 010\n");
}

TEST_CASE("exact rational helpers") {
  CHECK(pow2(3) == Rational(8));
  CHECK(pow2(-2) == Rational(1, 4));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  Dyadic d = round_to_dyadic(Rational(1, 3), 3);
  CHECK(d.num == 3);
  CHECK(d.exp == 3);
}

TEST_CASE("symbol-level pairing of big integers") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    Integer a = rng() % 100000;
    Integer b = rng() % 100000;
    auto [a2, b2] = unpair_symbol(pair_symbol(a, b));
    CHECK(a2 == a);
    CHECK(b2 == b);
  }
  Integer big = Integer(1) << 120;
  auto [x, y] = unpair_symbol(pair_symbol(big, big + 5));
  CHECK(x == big);
  CHECK(y == big + 5);
  Dyadic d{Integer(13), 4};
  Dyadic d2 = decode_dyadic(encode_dyadic(d));
  CHECK(d2.num == 13);
  CHECK(d2.exp == 4);
  CHECK(d2.value() == Rational(13, 16));
}

TEST_CASE("signed-digit expansions stay within the prefix interval") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Rational x(rng() % 1000, 1000);
    for (std::size_t len : {1u, 4u, 10u, 20u}) {
      Prefix w = signed_digit_prefix(x, len);
      CHECK(w.size() == len);
      Rational err = signed_digit_value(w) - x;
      if (err < 0) err = -err;
      CHECK(err <= pow2(-static_cast<int>(len)));
    }
  }
  CHECK(signed_digit_value(signed_digit_prefix(Rational(1, 2), 8)) == Rational(1, 2));
}

TEST_CASE("signed-digit binary coding round trips and flags the bad block") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    Prefix digits(Alphabet::Natural);
    std::size_t len = rng() % 20;
    for (std::size_t i = 0; i < len; ++i) digits.push_back(rng() % 3);
    DecodedDigits back = bits_to_signed_digits(signed_digits_to_bits(digits));
    CHECK_FALSE(back.invalid);
    CHECK(back.digits == digits);
  }
  DecodedDigits bad = bits_to_signed_digits(Prefix::bits("011011"));
  CHECK(bad.invalid);
  CHECK(bad.digits.size() == 1);  // the leading 01 block decoded before the 10
}
