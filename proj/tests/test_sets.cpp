#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "t2c/sets.hpp"

using namespace t2c;

namespace {

PointName pt(const Rational& x) { return PointName::signed_digit(x); }

/// Covers for a closed dyadic interval [0, b]: radius-2^-s balls on a grid.
CompactSetName interval_compact(const Rational& b) {
  CompactSetName k;
  k.closed = complement_closed(interval_upper_open(b));
  k.covers = [b](Fuel s) {
    if (s < 0) s = 0;
    std::vector<Ball> out;
    Integer den = Integer(1) << static_cast<unsigned>(s + 1);
    for (Integer kk = 0; Rational(kk, den) <= b; ++kk)
      out.push_back({encode_dyadic(Dyadic{kk, static_cast<int>(s) + 1}), pow2(-int(s))});
    return out;
  };
  return k;
}

}  // namespace

TEST_CASE("open membership is a sound semidecision") {
  auto ui = unit_interval_space();
  // Ball of radius 3/10 around the dense point 1.
  OpenSetName u = open_from_balls(
      ui, {Ball{interval_index(Dyadic{1, 0}), Rational(3, 10)}});
  CHECK(member_open(u, pt(Rational(3, 4)), 16));   // distance 1/4 < 3/10
  CHECK(member_open(u, pt(Rational(1)), 8));
  CHECK_FALSE(member_open(u, pt(Rational(1, 2)), 64));  // distance 1/2

  // Distance exactly equal to the radius: membership is never certified.
  OpenSetName boundary = open_from_balls(
      ui, {Ball{interval_index(Dyadic{1, 0}), Rational(1, 4)}});
  CHECK_FALSE(member_open(boundary, pt(Rational(3, 4)), 200));

  CHECK(member_open(whole_space_open(ui), pt(Rational(0)), 4));
  CHECK_FALSE(member_open(empty_open(ui), pt(Rational(0)), 200));
}

TEST_CASE("interval opens certify interiors and stay silent on boundaries") {
  OpenSetName lower = interval_lower_open(Rational(1, 2));  // [0, 1/2)
  CHECK(member_open(lower, pt(Rational(1, 4)), 16));
  CHECK(member_open(lower, pt(Rational(0)), 16));
  CHECK(member_open(lower, pt(Rational(127, 256)), 32));
  CHECK_FALSE(member_open(lower, pt(Rational(1, 2)), 128));
  CHECK_FALSE(member_open(lower, pt(Rational(3, 4)), 128));

  OpenSetName upper = interval_upper_open(Rational(1, 2));  // (1/2, 1]
  CHECK(member_open(upper, pt(Rational(3, 4)), 16));
  CHECK(member_open(upper, pt(Rational(1)), 16));
  CHECK_FALSE(member_open(upper, pt(Rational(1, 2)), 128));
  CHECK_FALSE(member_open(upper, pt(Rational(1, 4)), 128));

  // Verdicts are permanent: once in, in at every larger fuel.
  for (Fuel f : {16, 32, 64, 300}) CHECK(member_open(lower, pt(Rational(1, 4)), f));
}

TEST_CASE("closed complement reports exteriors only") {
  ClosedSetName a = complement_closed(interval_lower_open(Rational(1, 2)));  // [1/2, 1]
  CHECK(member_out_closed(a, pt(Rational(1, 4)), 16));
  CHECK_FALSE(member_out_closed(a, pt(Rational(3, 4)), 128));
  CHECK_FALSE(member_out_closed(a, pt(Rational(1, 2)), 128));

  CHECK_FALSE(member_out_closed(whole_space_closed(unit_interval_space()), pt(Rational(1, 3)), 64));
}

TEST_CASE("cantor closed sets from rejectors") {
  // The set of streams starting 01.
  ClosedSetName a = cantor_closed_from_rejector([](const Prefix& w, Fuel f) {
    return f >= 1 && !w.take(2).compatible(Prefix::bits("01"));
  });
  PointName inside = PointName::cantor(StreamName::periodic(Prefix(), Prefix::bits("01")));
  PointName outside = PointName::cantor(StreamName::constant(Alphabet::Binary, 1));
  CHECK_FALSE(member_out_closed(a, inside, 64));
  CHECK(member_out_closed(a, outside, 8));
}

TEST_CASE("singletons separate provably distinct points") {
  PointName x = pt(Rational(1, 3));
  ClosedSetName s = singleton_closed(x);
  CHECK(member_out_closed(s, pt(Rational(3, 4)), 32));
  CHECK(member_out_closed(s, pt(Rational(0)), 32));
  CHECK_FALSE(member_out_closed(s, pt(Rational(1, 3)), 64));

  OpenSetName comp = singleton_complement_open(x);
  CHECK(member_open(comp, pt(Rational(3, 4)), 32));
  CHECK_FALSE(member_open(comp, pt(Rational(1, 3)), 64));
}

TEST_CASE("an open set as a growing union of closed pieces") {
  OpenSetName u = interval_upper_open(Rational(1, 4));  // (1/4, 1]
  auto piece = open_as_closed_union(u);
  ClosedSetName c8 = piece(8);
  // 1/2 is well inside the union by level 8; 0 is provably outside.
  CHECK_FALSE(member_out_closed(c8, pt(Rational(1, 2)), 64));
  CHECK(member_out_closed(c8, pt(Rational(0)), 32));
  CHECK(member_out_closed(c8, pt(Rational(1, 4)), 64));  // pieces sit strictly inside u

  // Level 0 uses no balls: its closed set is empty, everything is out.
  CHECK(member_out_closed(piece(0), pt(Rational(1, 2)), 16));
}

TEST_CASE("compact intersection and emptiness") {
  CompactSetName k = singleton_compact(pt(Rational(5, 8)));
  CHECK_FALSE(is_empty_compact(k, 32));

  ClosedSetName right = complement_closed(interval_lower_open(Rational(1, 2)));  // [1/2, 1]
  CHECK_FALSE(is_empty_compact(compact_intersect_closed(k, right), 32));

  ClosedSetName left = complement_closed(interval_upper_open(Rational(1, 4)));  // [0, 1/4]
  CHECK(is_empty_compact(compact_intersect_closed(k, left), 32));

  // Cylinder pruning on Cantor space: the [1...] cover ball dies against a
  // rejector that kills everything starting with 1.
  CompactSetName ck = singleton_compact(PointName::cantor(StreamName::constant(Alphabet::Binary, 1)));
  ClosedSetName rej = cantor_closed_from_rejector([](const Prefix& w, Fuel f) {
    return f >= 1 && w.size() >= 1 && w.at(0) == 1;
  });
  CHECK(is_empty_compact(compact_intersect_closed(ck, rej), 32));
  ClosedSetName rej0 = cantor_closed_from_rejector([](const Prefix& w, Fuel f) {
    return f >= 1 && w.size() >= 1 && w.at(0) == 0;
  });
  CHECK_FALSE(is_empty_compact(compact_intersect_closed(ck, rej0), 20));
}

TEST_CASE("compact image under a signed-digit realizer") {
  // f(x) = x/2: prepend the digit 0.
  PrefixTransformer half(Alphabet::Natural, Alphabet::Natural, [](const Prefix& w, Fuel fuel) {
    Prefix out(Alphabet::Natural);
    out.push_back(symbol_of_signed_digit(0));
    for (std::size_t i = 0; i < w.size() && static_cast<Fuel>(i) + 1 < fuel; ++i)
      out.push_back(w.at(i));
    return out;
  });
  CompactSetName k = interval_compact(Rational(1, 2));  // [0, 1/2]
  CompactSetName img = compact_image(k, half);          // [0, 1/4]

  auto cover = img.covers(4);
  REQUIRE_FALSE(cover.empty());
  for (const Ball& b : cover) {
    Rational c = interval_point(b.center);
    CHECK(b.radius <= pow2(-4));
    CHECK(c - b.radius <= Rational(1, 4));  // covers only reach the true image
    CHECK(c + b.radius >= 0);
  }
  // 1/8 is in the image: some cover ball certifies it at every precision.
  for (Fuel s : {2, 4, 6}) {
    bool hit = false;
    for (const Ball& b : img.covers(s)) {
      Rational d = interval_point(b.center) - Rational(1, 8);
      if (d < 0) d = -d;
      if (d < b.radius) hit = true;
    }
    CHECK(hit);
  }
  // 3/4 is provably outside the image.
  CHECK(member_out_closed(img.closed, pt(Rational(3, 4)), 16));
  CHECK_FALSE(member_out_closed(img.closed, pt(Rational(1, 8)), 32));
}

TEST_CASE("a one-point compact yields its point") {
  PointName x = point_from_compact_singleton(singleton_compact(pt(Rational(5, 8))));
  for (Fuel s = 0; s <= 10; ++s) {
    auto a = x.approx_index(s);
    REQUIRE(a.has_value());
    Rational v = interval_point(*a);
    Rational d = v > Rational(5, 8) ? v - Rational(5, 8) : Rational(5, 8) - v;
    CHECK(d <= pow2(-int(s)));
  }
  CHECK(check_fast_cauchy(x, 8).ok());
}

TEST_CASE("closed image under the signed-digit representation") {
  // Streams whose first two digit blocks are 1,1 (bits 1111): the decoded
  // values fill [1/2, 1].
  ClosedSetName a = cantor_closed_from_rejector([](const Prefix& w, Fuel f) {
    return f >= 1 && !w.take(4).compatible(Prefix::bits("1111"));
  });
  ClosedSetName img = closed_image_under_representation(a, unit_interval_space());
  CHECK(member_out_closed(img, pt(Rational(1, 4)), 16));
  CHECK(member_out_closed(img, pt(Rational(0)), 16));
  CHECK_FALSE(member_out_closed(img, pt(Rational(3, 4)), 64));
  CHECK_FALSE(member_out_closed(img, pt(Rational(1, 2)), 64));  // boundary
  CHECK_FALSE(member_out_closed(img, pt(Rational(1)), 64));

  // Verdicts only appear, never disappear, as fuel grows.
  CHECK(member_out_closed(img, pt(Rational(1, 4)), 300));

  // An empty closed set maps to an empty image: everything is out.
  ClosedSetName none = cantor_closed_from_rejector([](const Prefix&, Fuel f) { return f >= 1; });
  ClosedSetName img0 = closed_image_under_representation(none, unit_interval_space());
  CHECK(member_out_closed(img0, pt(Rational(1, 2)), 8));

  // The Cantor target is the identity representation.
  ClosedSetName same = closed_image_under_representation(a, cantor_space());
  CHECK(same.rejected(Prefix::bits("10"), 2));

  CHECK_THROWS_AS(closed_image_under_representation(a, hilbert_cube_space()), std::invalid_argument);
}

TEST_CASE("restriction of a cube open along the embedding") {
  auto ui = unit_interval_space();
  PointName center = PointName::fast_cauchy(
      ui, StreamName::constant(Alphabet::Natural, interval_index(Dyadic{1, 1})));  // 1/2
  PointName emb = embed_hilbert(center);
  auto c = emb.approx_index(8);
  REQUIRE(c.has_value());
  OpenSetName cube_ball = open_from_balls(hilbert_cube_space(), {Ball{*c, Rational(1, 4)}});
  OpenSetName restricted = restrict_open(cube_ball, ui);
  CHECK(restricted.space == ui);
  // The ball's own center pulls back: the dense point 1/2 itself is in.
  PointName half = PointName::fast_cauchy(
      ui, StreamName::constant(Alphabet::Natural, interval_index(Dyadic{1, 1})));
  CHECK(member_open(restricted, half, 32));
}

TEST_CASE("limit verdicts for a two-sided set description") {
  // The set [1/2, 1], described from below by itself and from above by the
  // opens (1/2 - 2^-i, 1].
  Delta2SetName d;
  ClosedSetName a = complement_closed(interval_lower_open(Rational(1, 2)));
  a.membership_hint = std::make_shared<const OpenSetName>(interval_upper_open(Rational(1, 2)));
  d.closed_seq = {a};
  for (int i = 1; i <= 6; ++i)
    d.open_seq.push_back(interval_upper_open(Rational(1, 2) - pow2(-i)));

  // Index clamping: reads past the end repeat the last entry.
  CHECK(&d.open(100) == &d.open_seq.back());
  CHECK(&d.closed(3) == &d.closed_seq[0]);

  auto check_point = [&](const Rational& x, int want) {
    StabilizedVerdict v = delta2_stabilized(d, pt(x), 4096);
    CHECK(v.bit == want);
    CHECK(v.settled_stage <= 256);
    CHECK(delta2_verdict_bit(d, pt(x), 2048) == want);
    CHECK(delta2_verdict(d, pt(x)).at(2048) == Prefix(Alphabet::Binary, {want}));
  };
  check_point(Rational(3, 4), 1);
  check_point(Rational(1, 4), 0);
  check_point(Rational(9, 10), 1);
  check_point(Rational(2, 5), 0);
  check_point(Rational(1, 2), 1);  // boundary points resolve to membership
}

TEST_CASE("consistency diagnostics flag broken descriptions") {
  Delta2SetName good;
  ClosedSetName a = complement_closed(interval_lower_open(Rational(1, 2)));
  a.membership_hint = std::make_shared<const OpenSetName>(interval_upper_open(Rational(1, 2)));
  OpenSetName u = interval_upper_open(Rational(1, 4));
  good.closed_seq = {a};
  good.open_seq = {u};
  std::vector<PointName> samples{pt(Rational(1, 4)), pt(Rational(1, 2)), pt(Rational(3, 4))};
  ConsistencyReport r = delta2_consistency_check(good, samples, 32);
  CHECK(r.ok());
  CHECK(r.contradictions.empty());
  CHECK(r.suspicious.empty());

  // Union claims everything, intersection claims nothing: every sample is
  // provably on both sides at once.
  Delta2SetName broken;
  broken.closed_seq = {whole_space_closed(unit_interval_space())};
  broken.open_seq = {empty_open(unit_interval_space())};
  ConsistencyReport rb = delta2_consistency_check(broken, samples, 32);
  CHECK_FALSE(rb.ok());
  CHECK(rb.contradictions.size() == samples.size());

  // Refuted from the closed side, confirmed on the open side, but with no
  // hints to prove it: suspicious, not fatal.
  Delta2SetName weird;
  weird.closed_seq = {complement_closed(interval_lower_open(Rational(1, 2)))};
  weird.open_seq = {interval_lower_open(Rational(1, 2))};
  ConsistencyReport rw = delta2_consistency_check(weird, {pt(Rational(1, 4))}, 32);
  CHECK(rw.ok());
  CHECK(rw.suspicious.size() == 1);
}

TEST_CASE("staged ball lists round trip through their text form") {
  auto f = [](Fuel t) -> std::vector<Ball> {
    if (t < 2) return {};
    return {Ball{Integer(5), Rational(1, 4)}, Ball{Integer(17), Rational(3, 10)}};
  };
  std::ostringstream out;
  write_staged_balls(out, f, 4);
  CHECK(out.str() ==
        "stage 0:\n"
        "stage 1:\n"
        "stage 2: (5, 1/4) (17, 3/10)\n"
        "stage 3: (5, 1/4) (17, 3/10)\n"
        "stage 4: (5, 1/4) (17, 3/10)\n");

  std::istringstream in(out.str());
  auto g = parse_staged_balls(in);
  CHECK(g(0).empty());
  CHECK(g(1).empty());
  REQUIRE(g(3).size() == 2);
  CHECK(g(3)[0].center == 5);
  CHECK(g(3)[0].radius == Rational(1, 4));
  CHECK(g(3)[1].center == 17);
  CHECK(g(3)[1].radius == Rational(3, 10));
  // Stages beyond the last written line stay fixed.
  CHECK(g(100).size() == 2);

  std::istringstream bad("level 0: (1, 1/2)\n");
  CHECK_THROWS_AS(parse_staged_balls(bad), std::runtime_error);
}

TEST_CASE("rejection schedules round trip through their text form") {
  auto rejected = [](const Prefix& w, Fuel f) {
    return f >= 3 && w.size() >= 2 && w.at(0) == 0 && w.at(1) == 1;
  };
  std::ostringstream out;
  write_rejection_schedule(out, rejected, 4, 3);
  CHECK(out.str() ==
        "stage 3: reject 01\n"
        "stage 3: reject 010\n"
        "stage 3: reject 011\n");

  std::istringstream in(out.str());
  auto parsed = parse_rejection_schedule(in);
  CHECK(parsed(Prefix::bits("01"), 3));
  CHECK(parsed(Prefix::bits("0110"), 5));  // extensions inherit rejection
  CHECK_FALSE(parsed(Prefix::bits("01"), 2));
  CHECK_FALSE(parsed(Prefix::bits("00"), 9));
  CHECK_FALSE(parsed(Prefix::bits("0"), 9));

  std::istringstream bad("stage 2: accept 01\n");
  CHECK_THROWS_AS(parse_rejection_schedule(bad), std::runtime_error);
}
