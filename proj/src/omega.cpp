#include "t2c/omega.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace t2c {

namespace {

/// Desk-scale evidence caps for the sequence-space preimage names:
/// observation stages 0..5, cylinder words of length <= 6 with entries
/// <= 3, and decoded least-member values <= 8.
constexpr Fuel kOmegaStageCap = 5;
constexpr std::size_t kWordEntryCap = 3;
constexpr std::size_t kLeastMemberCap = 8;

/// Tentative least member under the max-parity rule.
Integer parity_threshold(const Integer& m) {
  return m % 2 == 0 ? Integer(m + 1) : Integer(m - 1);
}

/// Least tentative member over all decided stages of a finite prefix, or
/// nullopt for the empty prefix.
std::optional<Integer> min_threshold(const Prefix& w) {
  std::optional<Integer> best;
  Integer m = 0;
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w.at(s) > m || s == 0) m = w.at(s);
    Integer thr = parity_threshold(m);
    if (!best || thr < *best) best = thr;
  }
  return best;
}

Rational chain_point(const Integer& j) {
  return pow2(-static_cast<int>(std::min<Integer>(j, 64)));
}

/// All words over {0..entry cap} of the given length, in lexicographic
/// order.
void append_words(std::vector<Prefix>& out, std::size_t len) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < len; ++i) count *= kWordEntryCap + 1;
  for (std::size_t code = 0; code < count; ++code) {
    Prefix w(Alphabet::Natural);
    std::size_t c = code;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t div = 1;
      for (std::size_t k = i + 1; k < len; ++k) div *= kWordEntryCap + 1;
      w.push_back(Symbol((c / div) % (kWordEntryCap + 1)));
    }
    out.push_back(std::move(w));
  }
}

Ball baire_cylinder(const Prefix& w) {
  std::vector<Integer> entries(w.symbols().begin(), w.symbols().end());
  return Ball{encode_integer_list(entries), pow2(1 - static_cast<int>(w.size()))};
}

/// Fuel needed before a word's evidence is emitted: enough to have probed
/// both its length and its largest entry.
Fuel word_cost(const Prefix& w) {
  Integer m = 0;
  for (std::size_t i = 0; i < w.size(); ++i) m = std::max<Integer>(m, w.at(i));
  return std::max<Fuel>(static_cast<Fuel>(w.size()), static_cast<Fuel>(m) + 1);
}

/// Staged enumeration of the cylinders of length t+1..6 whose last-stage
/// tentative least member satisfies `keep`, ordered by cost.
std::function<std::vector<Ball>(Fuel)> graded_cylinders(Fuel t,
                                                        std::function<bool(const Integer&)> keep) {
  std::vector<std::pair<Fuel, Ball>> staged;
  std::vector<Prefix> words;
  for (std::size_t len = static_cast<std::size_t>(t) + 1;
       len <= static_cast<std::size_t>(kOmegaStageCap) + 1; ++len)
    append_words(words, len);
  std::stable_sort(words.begin(), words.end(), [](const Prefix& a, const Prefix& b) {
    return word_cost(a) < word_cost(b);
  });
  for (const Prefix& w : words) {
    Integer m = 0;
    for (std::size_t i = 0; i < w.size(); ++i) m = std::max<Integer>(m, w.at(i));
    if (keep(parity_threshold(m))) staged.emplace_back(word_cost(w), baire_cylinder(w));
  }
  return [staged = std::move(staged)](Fuel f) {
    std::vector<Ball> out;
    for (const auto& [cost, ball] : staged)
      if (cost <= f) out.push_back(ball);
    return out;
  };
}

}  // namespace

bool omega_member(const OmegaPlusOnePoint& a, std::size_t n, Fuel stage) {
  if (!a.members) return false;
  auto list = a.members(stage);
  return std::find(list.begin(), list.end(), n) != list.end();
}

OmegaPlusOnePoint omega_point_from_schedule(
    std::function<std::vector<std::size_t>(Fuel)> raw) {
  OmegaPlusOnePoint a;
  a.members = [raw = std::move(raw)](Fuel stage) {
    std::vector<std::size_t> prev;
    for (Fuel u = 1; u <= std::max<Fuel>(stage, 1); ++u) {
      std::vector<std::size_t> cur = raw(u);
      for (std::size_t i = 0; i + 1 < cur.size(); ++i)
        if (cur[i + 1] != cur[i] + 1)
          throw std::runtime_error("enumeration is not upward closed within its bound");
      for (std::size_t n : prev)
        if (std::find(cur.begin(), cur.end(), n) == cur.end())
          throw std::runtime_error("enumeration shrank between stages");
      prev = std::move(cur);
    }
    return prev;
  };
  return a;
}

OmegaPlusOnePoint e_function(const StreamName& p) {
  OmegaPlusOnePoint a;
  a.members = [p](Fuel stage) {
    std::vector<std::size_t> out;
    if (stage < 1) return out;
    std::optional<Integer> thr = min_threshold(p.at(stage));
    if (!thr) return out;
    for (Integer n = *thr; n < stage; ++n)
      if (n >= 0) out.push_back(static_cast<std::size_t>(n));
    return out;
  };
  return a;
}

std::shared_ptr<const MetricSpaceDesc> omega_plus_one_space() {
  static const auto desc = std::make_shared<const MetricSpaceDesc>(MetricSpaceDesc{
      "omega_plus_one", [](const Integer& i, const Integer& j) {
        Rational d = chain_point(i) - chain_point(j);
        return d < 0 ? Rational(-d) : d;
      }});
  return desc;
}

PointName omega_threshold_point(std::size_t j) {
  return PointName::fast_cauchy(omega_plus_one_space(),
                                StreamName::constant(Alphabet::Natural, Symbol(j)));
}

std::shared_ptr<const MetricSpaceDesc> baire_space() {
  static const auto desc = std::make_shared<const MetricSpaceDesc>(MetricSpaceDesc{
      "baire", [](const Integer& i, const Integer& j) {
        std::vector<Integer> u = decode_integer_list(i), v = decode_integer_list(j);
        std::size_t len = std::max(u.size(), v.size());
        for (std::size_t d = 0; d < len; ++d) {
          Integer a = d < u.size() ? u[d] : Integer(0);
          Integer b = d < v.size() ? v[d] : Integer(0);
          if (a != b) return pow2(-static_cast<int>(std::min<std::size_t>(d, 64)));
        }
        return Rational(0);
      }});
  return desc;
}

PointName baire_point(const StreamName& p) {
  StreamName indices = StreamName::from_stages(Alphabet::Natural, [p](Fuel f) {
    Prefix out(Alphabet::Natural);
    for (Fuel s = 0; s < f; ++s) {
      Prefix w = p.at(s + 1);
      if (w.size() < static_cast<std::size_t>(s) + 1) break;
      std::vector<Integer> entries(w.symbols().begin(),
                                   w.symbols().begin() + static_cast<long>(s) + 1);
      out.push_back(encode_integer_list(entries));
    }
    return out;
  });
  return PointName::fast_cauchy(baire_space(), indices);
}

OpenSetName scott_open(std::size_t index) {
  if (index == 0) return empty_open(omega_plus_one_space());
  if (index == 1) return whole_space_open(omega_plus_one_space());
  if (index == 2) {
    // Nonempty points: everything except the limit at 0.
    OpenSetName u;
    u.space = omega_plus_one_space();
    u.enumerate = [](Fuel f) {
      std::vector<Ball> out;
      for (Fuel j = 0; j <= std::min<Fuel>(f, 32); ++j)
        out.push_back(Ball{Integer(j), pow2(-static_cast<int>(j) - 3)});
      return out;
    };
    return u;
  }
  std::size_t k = index - 3;
  std::vector<Ball> balls;
  for (std::size_t j = 0; j <= k; ++j)
    balls.push_back(Ball{Integer(j), pow2(-static_cast<int>(k) - 3)});
  return open_from_balls(omega_plus_one_space(), std::move(balls));
}

Delta2FunctionName e_delta2_name() {
  Delta2FunctionName f;
  f.domain = baire_space();
  f.codomain = omega_plus_one_space();
  f.inverse = [](const OpenSetName& u) {
    std::set<Integer> decoded;
    for (std::size_t j = 0; j <= kLeastMemberCap; ++j)
      if (member_open(u, omega_threshold_point(j), 64)) decoded.insert(Integer(j));

    Delta2SetName d;
    if (decoded.size() == kLeastMemberCap + 1) {
      d.closed_seq.push_back(whole_space_closed(baire_space()));
      d.open_seq.push_back(whole_space_open(baire_space()));
      return d;
    }
    if (decoded.empty()) {
      d.closed_seq.push_back(complement_closed(whole_space_open(baire_space())));
      d.open_seq.push_back(empty_open(baire_space()));
      return d;
    }
    auto in_set = [decoded](const Integer& thr) { return decoded.count(thr) > 0; };
    auto out_set = [decoded](const Integer& thr) { return decoded.count(thr) == 0; };
    for (Fuel t = 0; t <= kOmegaStageCap; ++t) {
      // Sigma side: the tentative least member stays decoded from stage t
      // on; refuted by a cylinder deciding a later stage outside the set.
      ClosedSetName c;
      c.space = baire_space();
      c.co_enumerate = graded_cylinders(t, out_set);
      d.closed_seq.push_back(std::move(c));
      // Pi side: some decided stage >= t lands inside the set.
      OpenSetName w;
      w.space = baire_space();
      w.enumerate = graded_cylinders(t, in_set);
      d.open_seq.push_back(std::move(w));
    }
    return d;
  };
  return f;
}

}  // namespace t2c
