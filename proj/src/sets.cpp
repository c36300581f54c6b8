#include "t2c/sets.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

namespace t2c {

namespace {

Rational abs_rat(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Fuel capped(Fuel f) { return std::min(f, kPrecisionCap); }

/// Probed precisions: geometric, so membership scans stay cheap while the
/// probed set only grows with fuel.
std::vector<Fuel> precision_ladder(Fuel fuel) {
  std::vector<Fuel> out;
  for (Fuel s = 0; s <= capped(fuel); s = s == 0 ? 1 : 2 * s) out.push_back(s);
  return out;
}

/// Enumeration stages 1, 2, 4, ..., capped.
std::vector<Fuel> growth_stages(Fuel fuel) {
  std::vector<Fuel> out;
  for (Fuel g = 1; g <= capped(fuel); g *= 2) out.push_back(g);
  return out;
}

/// Unit-interval ball with a rational center, conservatively moved onto
/// the dyadic grid: the result, intersected with [0,1], is contained in the
/// requested ball. Clamping the center into [0,1] first only moves it
/// closer to every point of [0,1] the original ball reaches.
Ball rational_ball(const Rational& center, const Rational& radius, int grid) {
  Rational cl = center < 0 ? Rational(0) : center > 1 ? Rational(1) : center;
  Dyadic c = round_to_dyadic(cl, grid);
  return Ball{encode_dyadic(c), radius - abs_rat(c.value() - cl)};
}

const Integer kAnyCenter = 0;

}  // namespace

const ClosedSetName& Delta2SetName::closed(std::size_t i) const {
  return closed_seq.at(std::min(i, closed_seq.size() - 1));
}

const OpenSetName& Delta2SetName::open(std::size_t i) const {
  return open_seq.at(std::min(i, open_seq.size() - 1));
}

OpenSetName open_from_balls(std::shared_ptr<const MetricSpaceDesc> space,
                            std::vector<Ball> balls) {
  OpenSetName u;
  u.space = std::move(space);
  u.enumerate = [balls = std::move(balls)](Fuel f) {
    return f >= 1 ? balls : std::vector<Ball>{};
  };
  return u;
}

OpenSetName whole_space_open(std::shared_ptr<const MetricSpaceDesc> space) {
  return open_from_balls(std::move(space), {Ball{kAnyCenter, Rational(2)}});
}

OpenSetName empty_open(std::shared_ptr<const MetricSpaceDesc> space) {
  OpenSetName u;
  u.space = space;
  u.enumerate = [](Fuel) { return std::vector<Ball>{}; };
  u.exterior_hint = std::make_shared<const OpenSetName>(whole_space_open(space));
  return u;
}

OpenSetName interval_lower_open(const Rational& b) {
  OpenSetName u;
  u.space = unit_interval_space();
  u.enumerate = [b](Fuel f) {
    std::vector<Ball> out;
    for (Fuel l = 1; l <= capped(f); ++l) {
      Rational hi = b - pow2(-static_cast<int>(l));
      if (hi <= 0) continue;
      Ball ball = rational_ball(hi / 2, hi / 2 + pow2(-static_cast<int>(l) - 2),
                                static_cast<int>(l) + 4);
      if (ball.radius > 0) out.push_back(ball);
    }
    return out;
  };
  return u;
}

OpenSetName interval_upper_open(const Rational& a) {
  OpenSetName u;
  u.space = unit_interval_space();
  u.enumerate = [a](Fuel f) {
    std::vector<Ball> out;
    for (Fuel l = 1; l <= capped(f); ++l) {
      Rational lo = a + pow2(-static_cast<int>(l));
      if (lo >= 1) continue;
      Ball ball = rational_ball((lo + 1) / 2, (1 - lo) / 2 + pow2(-static_cast<int>(l) - 2),
                                static_cast<int>(l) + 4);
      if (ball.radius > 0) out.push_back(ball);
    }
    return out;
  };
  return u;
}

ClosedSetName complement_closed(const OpenSetName& u) {
  ClosedSetName a;
  a.space = u.space;
  a.co_enumerate = u.enumerate;
  return a;
}

ClosedSetName whole_space_closed(std::shared_ptr<const MetricSpaceDesc> space) {
  ClosedSetName a;
  a.space = space;
  a.co_enumerate = [](Fuel) { return std::vector<Ball>{}; };
  a.membership_hint = std::make_shared<const OpenSetName>(whole_space_open(space));
  return a;
}

ClosedSetName cantor_closed_from_rejector(std::function<bool(const Prefix&, Fuel)> rejected) {
  ClosedSetName a;
  a.space = cantor_space();
  a.rejected = std::move(rejected);
  return a;
}

bool member_open(const OpenSetName& u, const PointName& x, Fuel fuel) {
  if (!u.enumerate || fuel <= 0) return false;
  auto balls = u.enumerate(fuel);
  if (balls.empty()) return false;
  for (Fuel s : precision_ladder(fuel)) {
    auto a = x.approx_index(s);
    if (!a) continue;
    Rational eps = pow2(-static_cast<int>(s));
    for (const Ball& b : balls)
      if (u.space->dist(b.center, *a) + eps < b.radius) return true;
  }
  return false;
}

bool member_out_closed(const ClosedSetName& a, const PointName& x, Fuel fuel) {
  if (fuel <= 0) return false;
  if (a.rejected && x.kind() == PointName::Kind::CantorPoint) {
    for (Fuel len : precision_ladder(fuel)) {
      Prefix w = x.stream().at(len);
      std::size_t n = static_cast<std::size_t>(len);
      if (w.size() < n) continue;
      if (a.rejected(w.take(n), fuel)) return true;
    }
  }
  if (a.co_enumerate) {
    OpenSetName comp;
    comp.space = a.space;
    comp.enumerate = a.co_enumerate;
    if (member_open(comp, x, fuel)) return true;
  }
  return false;
}

ClosedSetName singleton_closed(const PointName& x) {
  ClosedSetName a;
  a.space = x.space();
  auto space = x.space();
  a.co_enumerate = [x, space](Fuel f) {
    std::vector<Ball> out;
    for (Fuel g : growth_stages(f)) {
      auto p = x.approx_index(g);
      if (!p) continue;
      for (Integer c = 0; c <= 4 * g; ++c) {
        Rational r = space->dist(c, *p) - pow2(1 - static_cast<int>(g));
        if (r > 0) out.push_back({c, r});
      }
    }
    return out;
  };
  return a;
}

OpenSetName singleton_complement_open(const PointName& x) {
  ClosedSetName a = singleton_closed(x);
  OpenSetName u;
  u.space = a.space;
  u.enumerate = a.co_enumerate;
  return u;
}

CompactSetName singleton_compact(const PointName& x) {
  CompactSetName k;
  k.closed = singleton_closed(x);
  k.covers = [x](Fuel s) -> std::vector<Ball> {
    if (s < 0) s = 0;
    auto a = x.approx_index(s + 1);
    if (!a) return {Ball{kAnyCenter, Rational(2)}};  // not yet located
    return {Ball{*a, pow2(-static_cast<int>(s))}};
  };
  return k;
}

std::function<ClosedSetName(std::size_t)> open_as_closed_union(const OpenSetName& u) {
  auto enumerate = u.enumerate;
  auto space = u.space;
  return [enumerate, space](std::size_t j) {
    ClosedSetName c;
    c.space = space;
    c.co_enumerate = [enumerate, space, j](Fuel f) {
      std::vector<Ball> shrunk;
      if (enumerate) {
        auto bs = enumerate(static_cast<Fuel>(j));
        if (bs.size() > j) bs.resize(j);
        for (const Ball& b : bs) {
          Rational r = b.radius - pow2(-static_cast<int>(j));
          if (r > 0) shrunk.push_back({b.center, r});
        }
      }
      std::vector<Ball> out;
      if (shrunk.empty()) {
        out.push_back({kAnyCenter, Rational(2)});  // complement is everything
        return out;
      }
      for (Integer c0 = 0; c0 <= 4 * capped(f); ++c0) {
        Rational r = Rational(2);
        for (const Ball& b : shrunk) r = std::min(r, space->dist(c0, b.center) - b.radius);
        if (r > 0) out.push_back({c0, r});
      }
      return out;
    };
    return c;
  };
}

CompactSetName compact_intersect_closed(const CompactSetName& k, const ClosedSetName& a) {
  CompactSetName out;
  out.closed.space = k.closed.space;
  auto co1 = k.closed.co_enumerate, co2 = a.co_enumerate;
  out.closed.co_enumerate = [co1, co2](Fuel f) {
    std::vector<Ball> balls;
    if (co1) balls = co1(f);
    if (co2) {
      auto more = co2(f);
      balls.insert(balls.end(), more.begin(), more.end());
    }
    return balls;
  };
  auto r1 = k.closed.rejected, r2 = a.rejected;
  if (r1 || r2)
    out.closed.rejected = [r1, r2](const Prefix& w, Fuel f) {
      return (r1 && r1(w, f)) || (r2 && r2(w, f));
    };
  auto covers = k.covers;
  auto space = k.closed.space;
  auto rej = a.rejected;
  auto co = a.co_enumerate;
  out.covers = [covers, space, rej, co](Fuel s) -> std::vector<Ball> {
    if (!covers) return {};
    std::vector<Ball> base = covers(s);
    std::vector<Ball> comp = co ? co(std::max<Fuel>(s, 1)) : std::vector<Ball>{};
    std::vector<Ball> kept;
    for (const Ball& b : base) {
      bool drop = false;
      for (const Ball& c : comp)
        if (space->dist(b.center, c.center) + b.radius <= c.radius) {
          drop = true;
          break;
        }
      if (!drop && rej) {
        // d(center, q) < r <= 2^-(L-1) forces agreement on the first L
        // symbols, so the ball sits inside that cylinder of the center.
        Prefix w = cantor_word(b.center);
        int guaranteed = 0;
        while (guaranteed <= 64 && pow2(-guaranteed) >= b.radius) ++guaranteed;
        Prefix cyl(Alphabet::Binary);
        for (int i = 0; i < guaranteed; ++i)
          cyl.push_back(i < static_cast<int>(w.size()) ? w.at(i) : Symbol(0));
        if (rej(cyl, std::max<Fuel>(s, 1))) drop = true;
      }
      if (!drop) kept.push_back(b);
    }
    return kept;
  };
  return out;
}

bool is_empty_compact(const CompactSetName& k, Fuel fuel) {
  if (!k.covers) return false;
  for (Fuel s = 0; s <= std::min<Fuel>(fuel, 32); ++s)
    if (k.covers(s).empty()) return true;
  return false;
}

CompactSetName compact_image(const CompactSetName& k, const PrefixTransformer& f) {
  CompactSetName out;
  out.closed.space = unit_interval_space();
  auto covers = k.covers;
  auto image_balls = [covers, f](Fuel s) -> std::vector<Ball> {
    if (s < 0) s = 0;
    Fuel t = std::min<Fuel>(s + 2, 16);
    std::vector<Ball> base = covers ? covers(t) : std::vector<Ball>{};
    if (base.empty()) return {};

    // Grid construction: the midpoints m = (2j+1)/2^L whose cells meet the
    // input cover. The word of the exact binary digits of m names every
    // point of the closed cell m +- 2^-L (signed-digit redundancy), so
    // pushing that one word through f covers the image over the cell.
    std::vector<Ball> result;
    for (int len = static_cast<int>(s) + 2; len <= 40; len += 3) {
      Integer half = Integer(1) << static_cast<unsigned>(len - 1);
      std::set<Integer> cells;
      bool too_many = false;
      for (const Ball& b : base) {
        Rational c = interval_point(b.center);
        Rational lo = c - b.radius, hi = c + b.radius;
        if (lo < 0) lo = 0;
        if (hi > 1) hi = 1;
        if (lo > hi) continue;
        Rational lo_cells = lo * half, hi_cells = hi * half;
        Integer j0 = floor_div(numerator(lo_cells), denominator(lo_cells));
        Integer j1 = floor_div(numerator(hi_cells), denominator(hi_cells)) + 1;
        if (j0 < 0) j0 = 0;
        if (j1 >= half) j1 = half - 1;
        for (Integer j = j0; j <= j1; ++j) {
          cells.insert(j);
          if (cells.size() > 100000) {
            too_many = true;
            break;
          }
        }
        if (too_many) break;
      }
      if (too_many) return {Ball{kAnyCenter, Rational(2)}};  // too wide to resolve

      result.clear();
      bool fine_enough = true;
      for (const Integer& j : cells) {
        Integer num = 2 * j + 1;  // m = num / 2^len
        Prefix w(Alphabet::Natural);
        for (int i = len - 1; i >= 0; --i)
          w.push_back(symbol_of_signed_digit(((num >> i) & 1) != 0 ? 1 : 0));
        Prefix o = f.apply(w, static_cast<Fuel>(len));
        if (static_cast<Fuel>(o.size()) < s + 1) fine_enough = false;
        Rational r = pow2(-static_cast<int>(o.size())) + pow2(-len);
        result.push_back(rational_ball(signed_digit_value(o), r + pow2(-len - 2), len + 4));
      }
      if (fine_enough) break;
    }
    return result;
  };
  out.covers = image_balls;
  out.closed.co_enumerate = [image_balls](Fuel fuel) {
    // Complement information derived from a fine cover: balls far from
    // every cover ball are provably outside the image.
    Fuel s = std::min<Fuel>(capped(fuel), 12);
    auto cover = image_balls(s);
    std::vector<Ball> out_balls;
    auto space = unit_interval_space();
    for (Integer c0 = 0; c0 <= 4 * capped(fuel); ++c0) {
      Rational r = Rational(2);
      for (const Ball& b : cover) r = std::min(r, space->dist(c0, b.center) - b.radius);
      if (r > 0) out_balls.push_back({c0, r});
    }
    return out_balls;
  };
  return out;
}

PointName point_from_compact_singleton(const CompactSetName& k) {
  auto covers = k.covers;
  auto indices = StreamName::from_stages(Alphabet::Natural, [covers](Fuel fuel) {
    Prefix out(Alphabet::Natural);
    if (!covers) return out;
    for (Fuel s = 0; s < fuel; ++s) {
      auto balls = covers(s + 1);
      if (balls.empty()) break;
      out.push_back(balls.front().center);
    }
    return out;
  });
  return PointName::fast_cauchy(k.closed.space, indices);
}

namespace {

struct FiberCache {
  std::map<std::pair<Fuel, Fuel>, std::vector<Rational>> viable;
  std::mutex mutex;
};

/// Values of depth-d signed-digit words that are compatible with [0,1] and
/// whose binary coding is not rejected by `rej` at the given fuel.
const std::vector<Rational>& viable_values(FiberCache& cache,
                                           const std::function<bool(const Prefix&, Fuel)>& rej,
                                           Fuel depth, Fuel fuel) {
  std::lock_guard<std::mutex> lock(cache.mutex);
  auto key = std::make_pair(depth, fuel);
  auto it = cache.viable.find(key);
  if (it != cache.viable.end()) return it->second;
  std::vector<Rational> values;
  std::function<void(Prefix&, const Rational&)> dfs = [&](Prefix& digits, const Rational& v) {
    Rational reach = pow2(-static_cast<int>(digits.size()));
    if (v - reach > 1 || v + reach < 0) return;
    if (rej && rej(signed_digits_to_bits(digits), fuel)) return;
    if (static_cast<Fuel>(digits.size()) == depth) {
      values.push_back(v);
      return;
    }
    for (int d = -1; d <= 1; ++d) {
      digits.push_back(symbol_of_signed_digit(d));
      dfs(digits, v + Rational(d) * pow2(-static_cast<int>(digits.size())));
      digits = digits.take(digits.size() - 1);
    }
  };
  Prefix root(Alphabet::Natural);
  dfs(root, Rational(0));
  std::sort(values.begin(), values.end());
  return cache.viable.emplace(key, std::move(values)).first->second;
}

Rational min_distance(const std::vector<Rational>& sorted, const Rational& x) {
  if (sorted.empty()) return Rational(2);
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  Rational best(2);
  if (it != sorted.end()) best = std::min(best, abs_rat(*it - x));
  if (it != sorted.begin()) best = std::min(best, abs_rat(*(it - 1) - x));
  return best;
}

}  // namespace

ClosedSetName closed_image_under_representation(const ClosedSetName& a,
                                                std::shared_ptr<const MetricSpaceDesc> target) {
  if (target->name == "cantor") return a;  // identity representation
  if (target->name != "unit_interval")
    throw std::invalid_argument("no proper representation shipped for space " + target->name);
  if (!a.rejected)
    throw std::invalid_argument("closed image needs the rejector form of the Cantor set");
  ClosedSetName img;
  img.space = target;
  auto cache = std::make_shared<FiberCache>();
  auto rej = a.rejected;
  img.co_enumerate = [cache, rej, target](Fuel f) {
    Fuel depth = std::min<Fuel>(std::max<Fuel>(f, 1), 10);
    Fuel fr = capped(f);
    const auto& values = viable_values(*cache, rej, depth, fr);
    std::vector<Ball> out;
    if (values.empty()) {
      out.push_back({kAnyCenter, Rational(2)});
      return out;
    }
    Rational slack = pow2(1 - static_cast<int>(depth));
    for (Fuel l = 0; l <= std::min<Fuel>(f, 8); ++l) {
      Integer den = Integer(1) << static_cast<unsigned>(l);
      for (Integer kk = 0; kk <= den; ++kk) {
        Rational center = Rational(kk, den);
        Rational r = min_distance(values, center) - slack;
        if (r > 0)
          out.push_back({encode_dyadic(Dyadic{kk, static_cast<int>(l)}), r});
      }
    }
    return out;
  };
  return img;
}

OpenSetName restrict_open(const OpenSetName& hilbert_open,
                          std::shared_ptr<const MetricSpaceDesc> domain) {
  OpenSetName u;
  u.space = domain;
  auto enumerate = hilbert_open.enumerate;
  auto hspace = hilbert_open.space;
  u.enumerate = [enumerate, hspace, domain](Fuel f) {
    std::vector<Ball> out;
    if (!enumerate) return out;
    auto balls = enumerate(f);
    if (balls.empty()) return out;
    // Cube indices nest one pairing per coordinate, so their bit length
    // grows geometrically with precision; stay at coarse precisions.
    for (Integer i = 0; i <= 2 * std::min<Fuel>(f, 16); ++i) {
      PointName dense = PointName::fast_cauchy(
          domain, StreamName::constant(Alphabet::Natural, Symbol(i)));
      PointName emb = embed_hilbert(dense);
      Rational best(0);
      for (Fuel s = 2; s <= std::min<Fuel>(f, 8); s *= 2) {
        auto a = emb.approx_index(s);
        if (!a) continue;
        for (const Ball& b : balls) {
          Rational margin = b.radius - hspace->dist(b.center, *a) - pow2(-static_cast<int>(s));
          best = std::max(best, margin);
        }
      }
      // The embedding is 1-Lipschitz, so half the verified margin pulls
      // back to a ball around the dense point.
      if (best > 0) out.push_back({i, best / 2});
    }
    return out;
  };
  return u;
}

namespace {
constexpr Fuel kInfIndex = std::numeric_limits<Fuel>::max();

Fuel least_unrefuted(const Delta2SetName& d, const PointName& x, Fuel stage) {
  if (d.closed_seq.empty()) return kInfIndex;
  for (std::size_t i = 0; i < d.closed_seq.size(); ++i)
    if (!member_out_closed(d.closed_seq[i], x, stage)) return static_cast<Fuel>(i);
  return kInfIndex;  // tail repeats the last (refuted) entry
}

Fuel least_unconfirmed(const Delta2SetName& d, const PointName& x, Fuel stage) {
  if (d.open_seq.empty()) return kInfIndex;
  for (std::size_t i = 0; i < d.open_seq.size(); ++i)
    if (!member_open(d.open_seq[i], x, stage)) return static_cast<Fuel>(i);
  return kInfIndex;
}
}  // namespace

int delta2_verdict_bit(const Delta2SetName& d, const PointName& x, Fuel stage) {
  return least_unrefuted(d, x, stage) <= least_unconfirmed(d, x, stage) ? 1 : 0;
}

StagedPrefix delta2_verdict(const Delta2SetName& d, const PointName& x) {
  StagedPrefix sp;
  sp.alphabet = Alphabet::Binary;
  sp.at_stage = [d, x](Fuel t) {
    Prefix w(Alphabet::Binary);
    w.push_back(delta2_verdict_bit(d, x, t));
    return w;
  };
  return sp;
}

StabilizedVerdict delta2_stabilized(const Delta2SetName& d, const PointName& x, Fuel cap) {
  std::vector<Fuel> stages;
  for (Fuel t = 1; t < cap; t *= 2) stages.push_back(t);
  stages.push_back(cap);

  // Verdicts are derived from two monotone indices; remember permanent
  // facts so later stages only re-test what is still open.
  std::vector<bool> refuted(d.closed_seq.size(), false);
  std::vector<bool> confirmed(d.open_seq.size(), false);
  StabilizedVerdict out;
  Fuel prev_r = -1, prev_s = -1;
  int prev_bit = -1;
  for (Fuel t : stages) {
    Fuel r = kInfIndex;
    for (std::size_t i = 0; i < d.closed_seq.size(); ++i) {
      if (!refuted[i] && member_out_closed(d.closed_seq[i], x, t)) refuted[i] = true;
      if (!refuted[i]) {
        r = static_cast<Fuel>(i);
        break;
      }
    }
    if (d.closed_seq.empty()) r = kInfIndex;
    Fuel s = kInfIndex;
    for (std::size_t i = 0; i < d.open_seq.size(); ++i) {
      if (!confirmed[i] && member_open(d.open_seq[i], x, t)) confirmed[i] = true;
      if (!confirmed[i]) {
        s = static_cast<Fuel>(i);
        break;
      }
    }
    if (d.open_seq.empty()) s = kInfIndex;
    int bit = r <= s ? 1 : 0;
    if (r != prev_r || s != prev_s) out.settled_stage = t;
    if (prev_bit >= 0 && bit != prev_bit) ++out.changes;
    prev_r = r;
    prev_s = s;
    prev_bit = bit;
    out.bit = bit;
  }
  return out;
}

ConsistencyReport delta2_consistency_check(const Delta2SetName& d,
                                           const std::vector<PointName>& samples, Fuel depth) {
  ConsistencyReport report;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const PointName& x = samples[n];
    bool in_some_a = false;
    for (const auto& a : d.closed_seq)
      if (a.membership_hint && member_open(*a.membership_hint, x, depth)) {
        in_some_a = true;
        break;
      }
    bool out_some_u = false;
    for (const auto& u : d.open_seq)
      if (u.exterior_hint && member_open(*u.exterior_hint, x, depth)) {
        out_some_u = true;
        break;
      }
    if (in_some_a && out_some_u) {
      report.contradictions.push_back({n, "witnessed inside the union and outside the intersection"});
      continue;
    }
    bool all_refuted = !d.closed_seq.empty();
    for (const auto& a : d.closed_seq)
      if (!member_out_closed(a, x, depth)) {
        all_refuted = false;
        break;
      }
    bool all_confirmed = !d.open_seq.empty();
    for (const auto& u : d.open_seq)
      if (!member_open(u, x, depth)) {
        all_confirmed = false;
        break;
      }
    if (all_refuted && all_confirmed)
      report.suspicious.push_back({n, "refuted from every listed closed set yet confirmed in every open"});
  }
  return report;
}

void write_staged_balls(std::ostream& out, const std::function<std::vector<Ball>(Fuel)>& f,
                        Fuel depth) {
  for (Fuel t = 0; t <= depth; ++t) {
    out << "stage " << t << ":";
    if (f)
      for (const Ball& b : f(t))
        out << " (" << b.center << ", " << numerator(b.radius) << "/" << denominator(b.radius)
            << ")";
    out << "\n";
  }
}

std::function<std::vector<Ball>(Fuel)> parse_staged_balls(std::istream& in) {
  auto stages = std::make_shared<std::map<Fuel, std::vector<Ball>>>();
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == '(' || c == ')' || c == ',' || c == ':') c = ' ';
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head != "stage") throw std::runtime_error("staged ball list: expected 'stage', got " + head);
    Fuel t;
    if (!(ls >> t)) throw std::runtime_error("staged ball list: missing stage number");
    std::vector<Ball> balls;
    std::string center, radius;
    while (ls >> center >> radius) {
      auto slash = radius.find('/');
      if (slash == std::string::npos)
        throw std::runtime_error("staged ball list: radius must be num/den");
      balls.push_back({Integer(center), Rational(Integer(radius.substr(0, slash)),
                                                  Integer(radius.substr(slash + 1)))});
    }
    (*stages)[t] = std::move(balls);
  }
  return [stages](Fuel f) -> std::vector<Ball> {
    auto it = stages->upper_bound(f);
    if (it == stages->begin()) return {};
    return std::prev(it)->second;
  };
}

void write_rejection_schedule(std::ostream& out,
                              const std::function<bool(const Prefix&, Fuel)>& rejected,
                              Fuel depth, std::size_t max_len) {
  if (!rejected) return;
  // Enumerate binary nodes in length-lexicographic order.
  std::vector<Prefix> nodes{Prefix(Alphabet::Binary)};
  for (std::size_t i = 0; i < nodes.size() && nodes[i].size() < max_len; ++i)
    for (int b = 0; b < 2; ++b) {
      Prefix child = nodes[i];
      child.push_back(b);
      nodes.push_back(child);
    }
  for (Fuel t = 1; t <= depth; ++t)
    for (const Prefix& node : nodes)
      if (rejected(node, t) && !(t > 1 && rejected(node, t - 1)))
        out << "stage " << t << ": reject " << (node.empty() ? "-" : node.str()) << "\n";
}

std::function<bool(const Prefix&, Fuel)> parse_rejection_schedule(std::istream& in) {
  auto entries = std::make_shared<std::vector<std::pair<std::string, Fuel>>>();
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head, colon_t, reject, node;
    if (!(ls >> head)) continue;
    Fuel t;
    if (head != "stage" || !(ls >> t) || !(ls >> colon_t))
      throw std::runtime_error("rejection schedule: bad line: " + line);
    if (colon_t == ":") ls >> reject;
    else reject = colon_t;  // "t:" may parse as one token stream; tolerate
    if (reject != "reject") throw std::runtime_error("rejection schedule: expected 'reject'");
    if (!(ls >> node)) throw std::runtime_error("rejection schedule: missing node");
    entries->push_back({node == "-" ? std::string() : node, t});
  }
  return [entries](const Prefix& w, Fuel fuel) {
    std::string ws = w.str();
    for (const auto& [node, t] : *entries)
      if (t <= fuel && ws.compare(0, node.size(), node) == 0 && node.size() <= ws.size())
        return true;
    return false;
  };
}

}  // namespace t2c
