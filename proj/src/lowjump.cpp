#include "t2c/lowjump.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

namespace t2c {

namespace {

/// Observation stages are capped: beyond this depth cylinder-level
/// evidence is never gathered, so limit sets are resolved to finitely many
/// Sigma/Pi indices (enough for every shipped instance and test depth).
constexpr Fuel kStageCap = 12;

/// A name that produces the given symbols and then nothing: evidence
/// gathered from it holds for every infinite extension.
StreamName stalled_stream(const Prefix& w) {
  return StreamName::from_stages(w.alphabet(), [w](Fuel f) {
    if (f < 0) f = 0;
    return w.take(std::min(static_cast<std::size_t>(f), w.size()));
  });
}

Ball cylinder_ball(const Prefix& w) {
  return Ball{cantor_word_index(w), pow2(1 - static_cast<int>(w.size()))};
}

/// The word whose cylinder equals the ball: shortest length L with
/// 2^-L < radius, the center word truncated or zero-padded to L.
Prefix ball_word(const Ball& b) {
  int len = 0;
  while (len < 64 && !(pow2(-len) < b.radius)) ++len;
  Prefix cw = cantor_word(b.center);
  Prefix w(Alphabet::Binary);
  for (int i = 0; i < len; ++i)
    w.push_back(i < static_cast<int>(cw.size()) ? cw.at(static_cast<std::size_t>(i)) : Symbol(0));
  return w;
}

/// Shared evidence cache of markov_from_low: observed bits of the lowrun
/// on stalled words, the per-stage frontier of 1-observations, and the
/// growing ball list of each Pi-side open.
struct LowState {
  std::function<LimitName(const StreamName&)> lowrun;
  std::size_t position = 0;

  std::mutex mu;
  std::map<std::string, int> bits;            // "w#s" -> observed bit, -1 unseen
  std::map<Fuel, std::vector<Prefix>> ones;   // stage -> length s+1 words showing 1
  struct OpenCache {
    Fuel done_stage = 0;
    std::vector<std::pair<Fuel, Ball>> balls;  // (stage emitted, ball)
    std::set<std::string> words;
  };
  std::map<std::size_t, OpenCache> opens;

  // Stage-s observation on the cylinder [w.take(s+1)]; requires |w| > s so
  // the stalled run cannot be starved of input.
  int bit_locked(const Prefix& w, Fuel s) {
    Prefix key = w.take(static_cast<std::size_t>(s) + 1);
    std::string k = key.str() + "#" + std::to_string(s);
    auto it = bits.find(k);
    if (it != bits.end()) return it->second;
    Prefix a = lowrun(stalled_stream(key)).at(s);
    int b = a.size() > position ? (a.at(position) == 0 ? 0 : 1) : -1;
    bits.emplace(std::move(k), b);
    return b;
  }

  const std::vector<Prefix>& ones_at_locked(Fuel s) {
    auto it = ones.find(s);
    if (it != ones.end()) return it->second;
    std::vector<Prefix> out;
    std::size_t len = static_cast<std::size_t>(s) + 1;
    for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
      Prefix w(Alphabet::Binary);
      for (std::size_t i = 0; i < len; ++i) w.push_back((code >> (len - 1 - i)) & 1);
      if (bit_locked(w, s) == 1) out.push_back(std::move(w));
    }
    return ones.emplace(s, std::move(out)).first->second;
  }
};

}  // namespace

int jump_approx(const StreamName& p, const OpenEnumeration& en, std::size_t i, Fuel stage) {
  if (!en.set || stage < 1) return 0;
  return member_open(en.set(i), PointName::cantor(p), stage) ? 1 : 0;
}

LimitName jump_limit_name(const StreamName& p, const OpenEnumeration& en) {
  LimitName out;
  out.alphabet = Alphabet::Binary;
  out.approx = [p, en](Fuel stage) {
    Prefix bits(Alphabet::Binary);
    for (Fuel i = 0; i < stage; ++i)
      bits.push_back(jump_approx(p, en, static_cast<std::size_t>(i), stage));
    return bits;
  };
  return out;
}

LimitName low_name_from_markov(std::function<Delta2SetName(std::size_t)> table,
                               const StreamName& p) {
  auto mu = std::make_shared<std::mutex>();
  auto memo = std::make_shared<std::map<std::size_t, Delta2SetName>>();
  auto entry = [table = std::move(table), mu, memo](std::size_t n) -> const Delta2SetName& {
    std::lock_guard<std::mutex> lock(*mu);
    auto it = memo->find(n);
    if (it == memo->end()) it = memo->emplace(n, table(n)).first;
    return it->second;
  };
  LimitName out;
  out.alphabet = Alphabet::Binary;
  out.approx = [entry, p](Fuel stage) {
    PointName x = PointName::cantor(p);
    Prefix bits(Alphabet::Binary);
    for (Fuel n = 0; n < stage; ++n)
      bits.push_back(delta2_verdict_bit(entry(static_cast<std::size_t>(n)), x, stage));
    return bits;
  };
  return out;
}

Delta2SetName markov_from_low(std::function<LimitName(const StreamName&)> lowrun,
                              std::size_t n) {
  auto state = std::make_shared<LowState>();
  state->lowrun = std::move(lowrun);
  state->position = n;

  Delta2SetName d;
  for (Fuel t = 0; t <= kStageCap; ++t) {
    // Sigma side: rejected once a 0 is observed at a decided stage >= t.
    ClosedSetName c = cantor_closed_from_rejector([state, t](const Prefix& w, Fuel f) {
      if (f < 1) return false;
      Fuel hi = std::min({f, static_cast<Fuel>(w.size()) - 1, kStageCap});
      std::lock_guard<std::mutex> lock(state->mu);
      for (Fuel s = std::max<Fuel>(t, 1); s <= hi; ++s)
        if (state->bit_locked(w, s) == 0) return true;
      return false;
    });
    d.closed_seq.push_back(std::move(c));

    // Pi side: cylinders on which a 1 is observed at some stage >= t,
    // skipping cylinders already covered by an emitted ancestor.
    OpenSetName u;
    u.space = cantor_space();
    u.enumerate = [state, t](Fuel f) {
      std::vector<Ball> out;
      Fuel hi = std::min(f, kStageCap);
      std::lock_guard<std::mutex> lock(state->mu);
      auto& cache = state->opens[static_cast<std::size_t>(t)];
      if (cache.done_stage < std::max<Fuel>(t, 1) - 1) cache.done_stage = std::max<Fuel>(t, 1) - 1;
      for (Fuel s = cache.done_stage + 1; s <= hi; ++s) {
        for (const Prefix& w : state->ones_at_locked(s)) {
          bool covered = false;
          for (std::size_t l = 0; !covered && l < w.size(); ++l)
            covered = cache.words.count(w.take(l).str()) > 0;
          if (covered) continue;
          cache.balls.emplace_back(s, cylinder_ball(w));
          cache.words.insert(w.str());
        }
        cache.done_stage = s;
      }
      for (const auto& [stage, ball] : cache.balls)
        if (stage <= hi) out.push_back(ball);
      return out;
    };
    d.open_seq.push_back(std::move(u));
  }
  return d;
}

LInstanceReport check_l_instance(const std::function<StreamName(std::size_t)>& ps,
                                 const StreamName& q, const OpenEnumeration& en, Fuel depth) {
  LInstanceReport report;
  if (depth < 1) return report;
  std::size_t lo = static_cast<std::size_t>(depth) / 2;
  for (std::size_t i = 0; i < static_cast<std::size_t>(depth); ++i) {
    int jb = jump_approx(q, en, i, depth);
    int last = -1;
    bool stable = true;
    for (std::size_t j = lo; j <= static_cast<std::size_t>(depth); ++j) {
      Prefix a = ps(j).at(depth);
      if (a.size() <= i) continue;
      int b = a.at(i) == 0 ? 0 : 1;
      if (last >= 0 && b != last) stable = false;
      last = b;
    }
    report.limit_bits.push_back(last);
    report.jump_bits.push_back(jb);
    if (!stable)
      report.unstable.push_back({i, "value still revised in the second half of the probe"});
    else if (jb == 1 && last == 0)
      report.counterexamples.push_back({i, "stabilized at 0 against a confirmed jump bit 1"});
  }
  return report;
}

Prefix cylinder_word(std::size_t n) {
  std::size_t m = n + 1;
  int top = 0;
  while ((m >> (top + 1)) != 0) ++top;
  Prefix w(Alphabet::Binary);
  for (int i = top - 1; i >= 0; --i) w.push_back((m >> i) & 1);
  return w;
}

OpenEnumeration cylinder_enumeration() {
  OpenEnumeration en;
  en.set = [](std::size_t n) {
    return open_from_balls(cantor_space(), {cylinder_ball(cylinder_word(n))});
  };
  return en;
}

Delta2SetName clopen_cantor_delta2(const OpenSetName& u) {
  std::vector<Prefix> words;
  if (u.enumerate)
    for (const Ball& b : u.enumerate(8)) words.push_back(ball_word(b));
  Delta2SetName d;
  d.closed_seq.push_back(cantor_closed_from_rejector([words](const Prefix& w, Fuel f) {
    if (f < 1) return false;
    for (const Prefix& v : words)
      if (w.compatible(v)) return false;
    return true;
  }));
  d.open_seq.push_back(u);
  return d;
}

std::function<Delta2SetName(std::size_t)> identity_jump_table(const OpenEnumeration& en) {
  return [en](std::size_t n) { return clopen_cantor_delta2(en.set(n)); };
}

std::function<Delta2SetName(std::size_t)> negation_jump_table(const OpenEnumeration& en) {
  return [en](std::size_t n) {
    std::vector<Ball> flipped;
    OpenSetName u = en.set(n);
    if (u.enumerate)
      for (const Ball& b : u.enumerate(8)) {
        Prefix w = ball_word(b);
        Prefix v(Alphabet::Binary);
        for (std::size_t i = 0; i < w.size(); ++i) v.push_back(Symbol(1) - w.at(i));
        flipped.push_back(cylinder_ball(v));
      }
    return clopen_cantor_delta2(open_from_balls(cantor_space(), std::move(flipped)));
  };
}

std::function<Delta2SetName(std::size_t)> constant_zero_jump_table(const OpenEnumeration& en) {
  return [en](std::size_t n) {
    bool zero_in = false;
    OpenSetName u = en.set(n);
    if (u.enumerate)
      for (const Ball& b : u.enumerate(8)) {
        Prefix w = ball_word(b);
        bool all_zero = true;
        for (std::size_t i = 0; i < w.size(); ++i) all_zero = all_zero && w.at(i) == 0;
        if (all_zero) zero_in = true;
      }
    Delta2SetName d;
    if (zero_in) {
      d.closed_seq.push_back(whole_space_closed(cantor_space()));
      d.open_seq.push_back(whole_space_open(cantor_space()));
    } else {
      d.closed_seq.push_back(
          cantor_closed_from_rejector([](const Prefix&, Fuel f) { return f >= 1; }));
      d.open_seq.push_back(empty_open(cantor_space()));
    }
    return d;
  };
}

void write_open_enumeration(std::ostream& out, const OpenEnumeration& en, std::size_t count,
                            Fuel fuel) {
  for (std::size_t n = 0; n < count; ++n) {
    out << n << ":";
    OpenSetName u = en.set(n);
    if (u.enumerate)
      for (const Ball& b : u.enumerate(fuel)) {
        Prefix w = ball_word(b);
        out << " " << (w.empty() ? std::string("e") : w.str());
      }
    out << "\n";
  }
}

OpenEnumeration parse_open_enumeration(std::istream& in) {
  auto table = std::make_shared<std::map<std::size_t, std::vector<Ball>>>();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("enumeration line without ':'");
    std::size_t n = 0;
    try {
      n = std::stoul(line.substr(0, colon));
    } catch (const std::exception&) {
      throw std::runtime_error("bad enumeration index: " + line);
    }
    std::istringstream rest(line.substr(colon + 1));
    std::string tok;
    while (rest >> tok) {
      Prefix w = tok == "e" ? Prefix(Alphabet::Binary) : Prefix::bits(tok);
      (*table)[n].push_back(cylinder_ball(w));
    }
    table->emplace(n, std::vector<Ball>{});  // listed with no words: empty set
  }
  OpenEnumeration en;
  en.set = [table](std::size_t n) {
    auto it = table->find(n);
    if (it == table->end() || it->second.empty()) return empty_open(cantor_space());
    return open_from_balls(cantor_space(), it->second);
  };
  return en;
}

}  // namespace t2c
