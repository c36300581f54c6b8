#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "t2c/omega.hpp"

using namespace t2c;

namespace {

StreamName nat_stream(std::vector<int> head, std::vector<int> cycle) {
  Prefix h(Alphabet::Natural), c(Alphabet::Natural);
  for (int v : head) h.push_back(v);
  for (int v : cycle) c.push_back(v);
  return StreamName::periodic(h, c);
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n < hi; ++n) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("the max-parity point of a sequence") {
  // Constant zero: maximum 0, even, so members start at 1.
  OmegaPlusOnePoint a = e_function(nat_stream({0}, {0}));
  CHECK(a.members(12) == range(1, 12));
  CHECK(omega_member(a, 1, 12));
  CHECK_FALSE(omega_member(a, 0, 12));

  // Alternating 0,1: maximum 1, odd, so 0 joins and the point is the
  // whole chain bottom.
  OmegaPlusOnePoint b = e_function(nat_stream({0, 1}, {0, 1}));
  CHECK(b.members(12) == range(0, 12));

  // Strictly increasing (unbounded): the odd maxima pull the least member
  // down to 0.
  OmegaPlusOnePoint c = e_function(StreamName::pointwise(
      Alphabet::Natural, [](std::size_t i) { return Symbol(i); }));
  CHECK(c.members(12) == range(0, 12));

  // Enumerations only grow with the stage.
  for (Fuel t = 1; t < 12; ++t) {
    auto now = a.members(t), later = a.members(t + 1);
    for (std::size_t n : now)
      CHECK(std::find(later.begin(), later.end(), n) != later.end());
  }
}

TEST_CASE("member schedules are verified and shrinking ones rejected") {
  OmegaPlusOnePoint good = omega_point_from_schedule([](Fuel t) {
    return t >= 3 ? std::vector<std::size_t>{2, 3, 4} : std::vector<std::size_t>{};
  });
  CHECK(good.members(5) == std::vector<std::size_t>({2, 3, 4}));

  OmegaPlusOnePoint shrinking = omega_point_from_schedule([](Fuel t) {
    return t >= 3 ? std::vector<std::size_t>{3, 4} : std::vector<std::size_t>{2, 3, 4};
  });
  CHECK_THROWS_AS(shrinking.members(5), std::runtime_error);

  OmegaPlusOnePoint gapped = omega_point_from_schedule(
      [](Fuel) { return std::vector<std::size_t>{1, 3}; });
  CHECK_THROWS_AS(gapped.members(2), std::runtime_error);
}

TEST_CASE("cone opens of the chain separate its points") {
  // The cone at 2 contains least members 0..2 and nothing deeper.
  OpenSetName v2 = scott_open(3 + 2);
  CHECK(member_open(v2, omega_threshold_point(0), 64));
  CHECK(member_open(v2, omega_threshold_point(2), 64));
  CHECK_FALSE(member_open(v2, omega_threshold_point(3), 64));

  // The nonempty-points open contains every finite least member but never
  // confirms the limit point at 0.
  OpenSetName nonempty = scott_open(2);
  CHECK(member_open(nonempty, omega_threshold_point(0), 64));
  CHECK(member_open(nonempty, omega_threshold_point(7), 64));
  PointName limit = PointName::fast_cauchy(
      omega_plus_one_space(),
      StreamName::pointwise(Alphabet::Natural, [](std::size_t i) { return Symbol(i); }));
  CHECK_FALSE(member_open(nonempty, limit, 64));

  CHECK_FALSE(member_open(scott_open(0), omega_threshold_point(0), 64));
  CHECK(member_open(scott_open(1), limit, 64));
}

TEST_CASE("preimage names of the max-parity function") {
  Delta2FunctionName e = e_delta2_name();

  // Cone at 0 = sequences mapped to the whole chain bottom: the
  // alternating input is in, the constant-zero input is out.
  Delta2SetName d0 = e.inverse(scott_open(3 + 0));
  CHECK(delta2_stabilized(d0, baire_point(nat_stream({0, 1}, {0})), 16).bit == 1);
  CHECK(delta2_stabilized(d0, baire_point(nat_stream({0}, {0})), 16).bit == 0);

  // Cone at 1 also admits the constant-zero input (least member 1).
  Delta2SetName d1 = e.inverse(scott_open(3 + 1));
  CHECK(delta2_stabilized(d1, baire_point(nat_stream({0}, {0})), 16).bit == 1);
  // Maximum 2 (even) puts the least member at 3: outside the cone at 1.
  CHECK(delta2_stabilized(d1, baire_point(nat_stream({2}, {0})), 16).bit == 0);
  Delta2SetName d3 = e.inverse(scott_open(3 + 3));
  CHECK(delta2_stabilized(d3, baire_point(nat_stream({2}, {0})), 16).bit == 1);

  // Whole and empty opens pull back to everything and nothing.
  Delta2SetName all = e.inverse(scott_open(1));
  Delta2SetName none = e.inverse(scott_open(0));
  for (auto& p : {nat_stream({0}, {0}), nat_stream({3, 1}, {2})}) {
    CHECK(delta2_stabilized(all, baire_point(p), 16).bit == 1);
    CHECK(delta2_stabilized(none, baire_point(p), 16).bit == 0);
  }

  // Finite-depth consistency on a mixed sample set.
  std::vector<PointName> samples;
  for (auto& p : {nat_stream({0}, {0}), nat_stream({0, 1}, {0}), nat_stream({2}, {0}),
                  nat_stream({3}, {3}), nat_stream({1, 2, 1}, {0})})
    samples.push_back(baire_point(p));
  for (std::size_t idx : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}}) {
    ConsistencyReport r = delta2_consistency_check(e.inverse(scott_open(idx)), samples, 6);
    CHECK(r.contradictions.empty());
  }

  // Enumerations grow monotonically with fuel.
  std::vector<Ball> prev;
  for (Fuel f : {1, 2, 4, 8}) {
    auto now = d1.open(2).enumerate(f);
    REQUIRE(now.size() >= prev.size());
    for (std::size_t k = 0; k < prev.size(); ++k) CHECK(now[k].center == prev[k].center);
    prev = now;
  }
}
