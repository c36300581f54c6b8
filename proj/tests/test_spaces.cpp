#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "t2c/space.hpp"

using namespace t2c;

TEST_CASE("dense point codecs round trip") {
  for (int num = 0; num <= 16; ++num)
    for (int exp = 0; exp <= 5; ++exp) {
      Dyadic d{num, exp};
      Dyadic back = decode_dyadic(interval_index(d));
      CHECK(back.num == d.num);
      CHECK(back.exp == d.exp);
    }
  CHECK(interval_point(interval_index(Dyadic{3, 2})) == Rational(3, 4));
  // Indices decoding to dyadics outside [0,1] clamp.
  CHECK(interval_point(interval_index(Dyadic{9, 2})) == Rational(1));

  for (Integer i = 0; i < 200; ++i) CHECK(cantor_word_index(cantor_word(i)) == i);
  CHECK(cantor_word(0).empty());
  CHECK(cantor_word(cantor_word_index(Prefix::bits("0110"))) == Prefix::bits("0110"));

  std::vector<Integer> list{Integer(5), Integer(0), Integer(12)};
  CHECK(decode_integer_list(encode_integer_list(list)) == list);
  CHECK(decode_integer_list(Integer(0)).empty());
}

TEST_CASE("shipped metrics are pseudometrics on sampled indices") {
  std::mt19937_64 rng(7);
  for (auto space : {unit_interval_space(), cantor_space(), hilbert_cube_space()}) {
    for (int trial = 0; trial < 60; ++trial) {
      Integer a = rng() % 500, b = rng() % 500, c = rng() % 500;
      Rational dab = space->dist(a, b);
      CHECK(dab >= 0);
      CHECK(dab == space->dist(b, a));
      CHECK(space->dist(a, a) == 0);
      CHECK(space->dist(a, c) <= dab + space->dist(b, c));
    }
  }
}

TEST_CASE("exact metric values on known indices") {
  auto ui = unit_interval_space();
  CHECK(ui->dist(interval_index(Dyadic{1, 1}), interval_index(Dyadic{3, 2})) == Rational(1, 4));

  auto ca = cantor_space();
  CHECK(ca->dist(cantor_word_index(Prefix::bits("010")), cantor_word_index(Prefix::bits("011"))) ==
        Rational(1, 4));
  // Trailing zeros are padding: "01" and "010" name the same point.
  CHECK(ca->dist(cantor_word_index(Prefix::bits("01")), cantor_word_index(Prefix::bits("010"))) ==
        Rational(0));

  auto hc = hilbert_cube_space();
  Integer x = encode_integer_list({interval_index(Dyadic{1, 1})});  // (1/2, 0, 0, ...)
  Integer y = encode_integer_list({interval_index(Dyadic{0, 0})});  // (0, 0, 0, ...)
  CHECK(hc->dist(x, y) == Rational(1, 4));  // first coordinate weighted 1/2
  CHECK(hc->dist(x, Integer(0)) == Rational(1, 4));  // empty list = all zeros
}

TEST_CASE("point names approximate to the advertised precision") {
  PointName sd = PointName::signed_digit(Rational(5, 8));
  for (Fuel s = 0; s <= 12; ++s) {
    auto a = sd.approx_index(s);
    REQUIRE(a.has_value());
    Rational v = interval_point(*a);
    CHECK((v - Rational(5, 8) <= pow2(-int(s)) && Rational(5, 8) - v <= pow2(-int(s))));
  }
  CHECK(check_fast_cauchy(sd, 10).ok());

  PointName third = PointName::signed_digit(Rational(1, 3));
  CHECK(check_fast_cauchy(third, 10).ok());

  // Cantor name: the approximation index codes the first s+1 bits.
  PointName cp = PointName::cantor(StreamName::periodic(Prefix(), Prefix::bits("01")));
  auto idx = cp.approx_index(3);
  REQUIRE(idx.has_value());
  CHECK(cantor_word(*idx) == Prefix::bits("0101"));

  // A fast-Cauchy name over the interval from a constant index stream.
  PointName fc = PointName::fast_cauchy(
      unit_interval_space(), StreamName::constant(Alphabet::Natural, interval_index(Dyadic{1, 2})));
  CHECK(check_fast_cauchy(fc, 8).ok());
  CHECK(interval_point(*fc.approx_index(5)) == Rational(1, 4));
}

TEST_CASE("unproductive names report missing approximations") {
  // A stream that never grows past 2 symbols cannot certify precision 2.
  auto stalled = StreamName::from_stages(Alphabet::Natural, [](Fuel) {
    Prefix w(Alphabet::Natural);
    w.push_back(0);
    w.push_back(0);
    return w;
  });
  PointName p = PointName::fast_cauchy(unit_interval_space(), stalled);
  CHECK(p.approx_index(1).has_value());
  CHECK_FALSE(p.approx_index(2).has_value());
}

TEST_CASE("embedding into the cube is close to isometric on samples") {
  auto ui = unit_interval_space();
  std::vector<Rational> xs{Rational(0), Rational(1, 3), Rational(1, 2), Rational(7, 8)};
  std::vector<PointName> pts, embs;
  for (const auto& x : xs) {
    pts.push_back(PointName::signed_digit(x));
    embs.push_back(embed_hilbert(pts.back()));
  }
  for (auto& e : embs) CHECK(e.space()->name == "hilbert_cube");

  Fuel s = 8;
  auto hc = hilbert_cube_space();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      auto a = embs[i].approx_index(s), b = embs[j].approx_index(s);
      REQUIRE(a.has_value());
      REQUIRE(b.has_value());
      Rational de = hc->dist(*a, *b);
      Rational dx = xs[i] > xs[j] ? xs[i] - xs[j] : xs[j] - xs[i];
      // The embedding never expands distances, and the first coordinate
      // alone already sees half the original distance.
      Rational slack = pow2(-int(s) + 2);
      CHECK(de <= dx + slack);
      CHECK(de >= dx / 4 - slack);
    }

  // Coordinate check: coordinate i of embed(x) is min(1, d(x, a_i)).
  auto a6 = embs[2].approx_index(6);  // x = 1/2
  REQUIRE(a6.has_value());
  auto coords = decode_integer_list(*a6);
  REQUIRE(coords.size() >= 1);
  Rational first = decode_dyadic(coords[0]).value();
  Rational want = ui->dist(Integer(0), *pts[2].approx_index(9));
  if (want > 1) want = 1;
  Rational diff = first > want ? first - want : want - first;
  CHECK(diff <= pow2(-7));
}
