#include "t2c/measurable.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

namespace t2c {

namespace {

Fuel pow2floor(Fuel f) {
  Fuel p = 1;
  while (p * 2 <= f) p *= 2;
  return p;
}

/// Geometric probe stages 1, 2, 4, ..., with the cap itself included.
std::vector<Fuel> stage_ladder(Fuel cap) {
  std::vector<Fuel> out;
  for (Fuel t = 1; t < cap; t *= 2) out.push_back(t);
  if (cap >= 1) out.push_back(cap);
  return out;
}

Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

bool is_space(const std::shared_ptr<const MetricSpaceDesc>& s, const char* name) {
  return s && s->name == name;
}

StreamName stalled(Alphabet a, const Prefix& p) {
  return StreamName::from_stages(a, [p](Fuel f) {
    if (f < 0) f = 0;
    return p.take(std::min<std::size_t>(p.size(), static_cast<std::size_t>(f)));
  });
}

std::function<std::vector<Ball>(Fuel)> concat_enumerations(
    std::function<std::vector<Ball>(Fuel)> a, std::function<std::vector<Ball>(Fuel)> b) {
  // Interleave by power-of-two stages so the merged list stays a prefix
  // of itself under more fuel: appending one list after the other would
  // shift the second list's entries whenever the first grows.
  return [a = std::move(a), b = std::move(b)](Fuel f) {
    std::vector<Ball> out;
    std::size_t seen_a = 0, seen_b = 0;
    for (Fuel s = 1; s <= std::min(f, kPrecisionCap); s *= 2) {
      if (a) {
        auto la = a(s);
        for (std::size_t k = seen_a; k < la.size(); ++k) out.push_back(la[k]);
        seen_a = std::max(seen_a, la.size());
      }
      if (b) {
        auto lb = b(s);
        for (std::size_t k = seen_b; k < lb.size(); ++k) out.push_back(lb[k]);
        seen_b = std::max(seen_b, lb.size());
      }
    }
    return out;
  };
}

Ball whole_ball() { return Ball{Integer(0), Rational(2)}; }

/// Unit-interval ball with a rational center, conservatively moved onto
/// the dyadic grid so that the result stays inside the requested ball.
Ball grid_ball(const Rational& center, const Rational& radius, int grid) {
  Rational cl = center < 0 ? Rational(0) : center > 1 ? Rational(1) : center;
  Dyadic c = round_to_dyadic(cl, grid);
  return Ball{encode_dyadic(c), radius - abs_rat(c.value() - cl)};
}

/// Balls of [0,1] \ [a,b], one pair per geometric level, precomputed once.
/// The sparse ladder keeps membership scans short while still reaching any
/// resolution at no more than double the fuel of the dense ladder.
std::function<std::vector<Ball>(Fuel)> sparse_interval_complement(const Rational& a,
                                                                  const Rational& b) {
  struct Entry {
    Fuel level;
    Ball ball;
  };
  auto entries = std::make_shared<std::vector<Entry>>();
  std::vector<Fuel> levels;
  for (Fuel l = 1; l <= kPrecisionCap; l = l < 8 ? l + 1 : std::max(l + 1, l * 3 / 2))
    levels.push_back(l);
  for (Fuel l : levels) {
    int li = static_cast<int>(l);
    Rational hi = a - pow2(-li);
    if (hi > 0) {
      Ball ball = grid_ball(hi / 2, hi / 2 + pow2(-li - 2), li + 4);
      if (ball.radius > 0) entries->push_back({l, ball});
    }
    Rational lo = b + pow2(-li);
    if (lo < 1) {
      Ball ball = grid_ball((lo + 1) / 2, (1 - lo) / 2 + pow2(-li - 2), li + 4);
      if (ball.radius > 0) entries->push_back({l, ball});
    }
  }
  return [entries](Fuel f) {
    std::vector<Ball> out;
    Fuel cap = std::min(f, kPrecisionCap);
    for (const auto& e : *entries) {
      if (e.level > cap) break;  // entries are level-sorted: prefix stays stable
      out.push_back(e.ball);
    }
    return out;
  };
}

/// Construct each piece once and share it across every later request;
/// piece construction can precompute ball schedules, so callers treat the
/// index map as cheap.
std::function<Piece(std::size_t)> memoize_pieces(std::function<Piece(std::size_t)> make) {
  struct Memo {
    std::mutex mu;
    std::map<std::size_t, Piece> at;
  };
  auto memo = std::make_shared<Memo>();
  return [make = std::move(make), memo](std::size_t i) {
    std::lock_guard<std::mutex> lock(memo->mu);
    auto it = memo->at.find(i);
    if (it == memo->at.end()) it = memo->at.emplace(i, make(i)).first;
    return it->second;
  };
}

/// Value and residual radius pinned by a dyadic-code output prefix.
std::pair<Rational, Rational> code_reading(const Prefix& codes) {
  if (codes.empty()) return {Rational(1, 2), Rational(2)};
  Dyadic d = decode_dyadic(codes.at(codes.size() - 1));
  return {d.value(), pow2(-static_cast<int>(codes.size()) + 1)};
}

/// Signed-digit word of exact value j/2^L whose reachable interval is the
/// closed cell [j/2^L - 2^-L, j/2^L + 2^-L] (clipped to [0,1]): every point
/// of the cell has a signed-digit name extending the word.
Prefix cell_word(int level, const Integer& j) {
  Rational m = Rational(2 * j + 1) / pow2(level);
  Prefix w = signed_digit_prefix(m, static_cast<std::size_t>(level));
  return w;
}

// --------------------------------------------------------------------
// Adaptive cell certification: the workhorse turning a realizer and an
// open set of its outputs into an ambient open set of inputs.
// --------------------------------------------------------------------

struct PushState {
  std::mutex mu;
  std::set<std::string> certified;     // "L:j" cells proven to map into v
  std::set<std::string> emitted_keys;  // cells, endpoints, bridges
  std::vector<Ball> emitted;           // discovery order, append-only
  std::map<Fuel, std::size_t> count_at;
};

std::string cell_key(int level, const Integer& j) {
  return std::to_string(level) + ":" + j.str();
}

class Pushforward {
 public:
  Pushforward(PrefixTransformer realizer, OpenSetName v)
      : realizer_(std::move(realizer)), v_(std::move(v)), state_(std::make_shared<PushState>()) {}

  std::vector<Ball> enumerate(Fuel f) const {
    if (f <= 0 || !v_.enumerate) return {};
    Fuel p = pow2floor(std::min(f, kPrecisionCap));
    std::lock_guard<std::mutex> lock(state_->mu);
    for (Fuel q = 1; q <= p; q *= 2)
      if (!state_->count_at.count(q)) advance(q);
    std::size_t n = state_->count_at.at(p);
    return std::vector<Ball>(state_->emitted.begin(), state_->emitted.begin() + n);
  }

 private:
  // Caller holds the lock.
  void advance(Fuel power) const {
    balls_ = v_.enumerate(power);
    int lmax = static_cast<int>(std::min<Fuel>(14, 1 + power / 2));
    if (!balls_.empty()) visit(1, 0, lmax, power, Rational(-1), Rational(-1), 0);
    state_->count_at[power] = state_->emitted.size();
  }

  bool ancestor_certified(int level, Integer j) const {
    while (level >= 1) {
      if (state_->certified.count(cell_key(level, j))) return true;
      j >>= 1;
      --level;
    }
    return false;
  }

  void emit_once(const std::string& key, const Ball& b) const {
    if (state_->emitted_keys.insert(key).second) state_->emitted.push_back(b);
  }

  void emit_cell(int level, const Integer& j) const {
    Rational m = Rational(2 * j + 1) / pow2(level);
    emit_once("C" + cell_key(level, j),
              Ball{interval_index(round_to_dyadic(m, level)), pow2(-level)});
    // The open cell balls miss the endpoints of [0,1]; an edge cell that
    // certifies covers its endpoint, since nothing lies beyond it.
    if (j == 0)
      emit_once("E0:" + std::to_string(level),
                Ball{interval_index(Dyadic{0, 0}), pow2(1 - level)});
    if (j == (Integer(1) << (level - 1)) - 1)
      emit_once("E1:" + std::to_string(level),
                Ball{interval_index(Dyadic{1, 0}), pow2(1 - level)});
    // Open cell balls also miss the shared boundary of two adjacent cells;
    // when both sides are certified (possibly through an ancestor), the
    // dyadic boundary point gets its own ball inside their union.
    for (int side = 0; side < 2; ++side) {
      Integer nb = side == 0 ? Integer(j - 1) : Integer(j + 1);
      if (nb < 0 || nb >= (Integer(1) << (level - 1))) continue;
      if (!ancestor_certified(level, nb)) continue;
      Rational boundary = Rational(side == 0 ? Integer(2 * j) : Integer(2 * j + 2)) / pow2(level);
      emit_once("B" + cell_key(level, side == 0 ? j : j + 1),
                Ball{interval_index(round_to_dyadic(boundary, level)), pow2(1 - level)});
    }
  }

  void visit(int level, const Integer& j, int lmax, Fuel power, const Rational& parent_val,
             const Rational& parent_rho, std::size_t parent_len) const {
    bool cert = state_->certified.count(cell_key(level, j)) > 0;
    Rational val(1, 2), rho(2);
    std::size_t len = 0;
    if (!cert) {
      Prefix w = cell_word(level, j);
      Prefix out = realizer_.apply(w, power);
      auto [v, r] = code_reading(out);
      val = v;
      rho = r;
      len = out.size();
      // A reading identical to the parent's carries no new information:
      // the certification test below would decide exactly as it did one
      // level up, and so would every further split of a locally constant
      // realizer. Stop refining this branch.
      if (len == parent_len && val == parent_val && rho == parent_rho) return;
      for (const Ball& b : balls_) {
        Rational c = interval_point(b.center);
        if (abs_rat(val - c) + rho < b.radius) {
          cert = true;
          break;
        }
      }
      if (cert) state_->certified.insert(cell_key(level, j));
    }
    if (cert) {
      emit_cell(level, j);
      return;
    }
    if (level >= lmax) return;
    // Descend only where refinement can plausibly help: some target ball
    // is within reach of the cell's image estimate.
    bool near = rho >= 2;
    if (!near)
      for (const Ball& b : balls_) {
        Rational c = interval_point(b.center);
        if (abs_rat(val - c) < b.radius + rho + pow2(1 - level)) {
          near = true;
          break;
        }
      }
    if (!near) return;
    visit(level + 1, 2 * j, lmax, power, val, rho, len);
    visit(level + 1, 2 * j + 1, lmax, power, val, rho, len);
  }

  PrefixTransformer realizer_;
  OpenSetName v_;
  std::shared_ptr<PushState> state_;
  mutable std::vector<Ball> balls_;  // guarded by state_->mu
};

}  // namespace

OpenSetName pushforward_preimage_open(const PrefixTransformer& realizer, const OpenSetName& v) {
  auto push = std::make_shared<Pushforward>(realizer, v);
  OpenSetName u;
  u.space = unit_interval_space();
  u.enumerate = [push](Fuel f) { return push->enumerate(f); };
  return u;
}

ClosedSetName inner_closed_union(const OpenSetName& u, std::size_t j) {
  ClosedSetName a;
  a.space = u.space ? u.space : unit_interval_space();
  auto enumerate = u.enumerate;
  struct Cache {
    std::mutex mu;
    std::map<Fuel, std::vector<Ball>> at;
    std::vector<Ball> pieces;  // fixed shrunk-ball list, set on first use
    bool have_pieces = false;
  };
  auto cache = std::make_shared<Cache>();
  a.co_enumerate = [enumerate, j, cache](Fuel f) -> std::vector<Ball> {
    if (f <= 0) return {};
    Fuel p = pow2floor(std::min(f, kPrecisionCap));
    std::lock_guard<std::mutex> lock(cache->mu);
    auto it = cache->at.find(p);
    if (it != cache->at.end()) return it->second;
    if (!cache->have_pieces) {
      // A deterministic j-indexed schedule: the first 8j enumerated balls
      // at a fuel growing geometrically with j, closures shrunk to 3/4
      // radius. The union over all j recovers u.
      std::vector<Ball> balls;
      if (enumerate && j > 0)
        balls = enumerate(std::min<Fuel>(Fuel(1) << std::min<std::size_t>(j, 6), kPrecisionCap));
      if (balls.size() > 8 * j) balls.resize(8 * j);
      for (const Ball& b : balls)
        cache->pieces.push_back(Ball{b.center, b.radius * 3 / 4});
      cache->have_pieces = true;
    }
    std::vector<Ball> out;
    if (cache->pieces.empty()) {
      out.push_back(whole_ball());
    } else {
      for (int level = 1; level <= static_cast<int>(std::min<Fuel>(p, 10)); ++level) {
        Integer grid = Integer(1) << level;
        for (Integer k = 0; k <= grid; ++k) {
          Rational c0 = Rational(k) / Rational(grid);
          // Skip centers deep inside an already-emitted complement ball.
          bool covered = false;
          for (const Ball& e : out) {
            Rational ec = interval_point(e.center);
            if (e.radius >= pow2(2 - level) && abs_rat(c0 - ec) < e.radius / 2) {
              covered = true;
              break;
            }
          }
          if (covered) continue;
          Rational rho(2);
          for (const Ball& piece : cache->pieces) {
            Rational d = abs_rat(c0 - interval_point(piece.center)) - piece.radius;
            rho = std::min(rho, Rational(d));
          }
          if (rho > 0)
            out.push_back(Ball{interval_index(round_to_dyadic(c0, level)), rho});
        }
      }
    }
    cache->at[p] = out;
    return out;
  };
  return a;
}

ClosedSetName closed_interval(const Rational& a, const Rational& b) {
  ClosedSetName c;
  c.space = unit_interval_space();
  c.co_enumerate = sparse_interval_complement(a, b);
  return c;
}

std::optional<Rational> code_value(const Prefix& codes) {
  if (codes.empty()) return std::nullopt;
  return decode_dyadic(codes.at(codes.size() - 1)).value();
}

PrefixTransformer constant_code_realizer(const Rational& c) {
  return PrefixTransformer(Alphabet::Natural, Alphabet::Natural, [c](const Prefix&, Fuel f) {
    Prefix out(Alphabet::Natural);
    for (Fuel s = 0; s <= std::min<Fuel>(f, 40); ++s)
      out.push_back(encode_dyadic(round_to_dyadic(c, static_cast<int>(s) + 2)));
    return out;
  });
}

PrefixTransformer digit_to_code_realizer() {
  return PrefixTransformer(Alphabet::Natural, Alphabet::Natural, [](const Prefix& x, Fuel f) {
    Prefix out(Alphabet::Natural);
    // Position s needs s+1 digits: |value(x[0..s]) - x| <= 2^-(s+1).
    for (Fuel s = 0; s <= std::min<Fuel>(f, 40); ++s) {
      if (x.size() < static_cast<std::size_t>(s) + 1) break;
      Rational v = signed_digit_value(x.take(static_cast<std::size_t>(s) + 1));
      out.push_back(encode_dyadic(round_to_dyadic(v, static_cast<int>(s) + 3)));
    }
    return out;
  });
}

// --------------------------------------------------------------------
// Piecewise -> Delta2
// --------------------------------------------------------------------

namespace {

/// Same transformer with applications cached per (input, fuel rounded down
/// to a power of two). Rounding the fuel only coarsens the observation, so
/// monotonicity is preserved; the cache is shared by every pushforward that
/// probes the realizer, which otherwise re-reads the same dyadic cells once
/// per target open.
PrefixTransformer memoize_transformer(const PrefixTransformer& f) {
  struct Cache {
    std::mutex mu;
    std::map<std::pair<std::string, Fuel>, Prefix> at;
  };
  auto cache = std::make_shared<Cache>();
  return PrefixTransformer(
      f.input_alphabet(), f.output_alphabet(), [f, cache](const Prefix& w, Fuel fuel) {
        Fuel p = fuel <= 0 ? 0 : pow2floor(fuel);
        auto key = std::make_pair(w.str(), p);
        std::lock_guard<std::mutex> lock(cache->mu);
        auto it = cache->at.find(key);
        if (it == cache->at.end()) {
          if (cache->at.size() >= 200000) cache->at.clear();
          it = cache->at.emplace(key, f.apply(w, p)).first;
        }
        return it->second;
      });
}

ClosedSetName intersect_closed(const ClosedSetName& a, const ClosedSetName& b) {
  ClosedSetName c;
  c.space = a.space;
  c.co_enumerate = concat_enumerations(a.co_enumerate, b.co_enumerate);
  auto ra = a.rejected, rb = b.rejected;
  if (ra || rb)
    c.rejected = [ra, rb](const Prefix& w, Fuel f) {
      return (ra && ra(w, f)) || (rb && rb(w, f));
    };
  return c;
}

}  // namespace

Delta2FunctionName piecewise_to_delta2(const PiecewiseName& g) {
  if (!is_space(g.domain, "unit_interval") || !is_space(g.codomain, "unit_interval"))
    throw std::invalid_argument("piecewise_to_delta2 handles unit-interval functions only");
  constexpr std::size_t kSigma = 96;  // pairs (i, j) with i + j <= ~12
  // Points within 2^-9 of a plateau boundary only join the cover at piece
  // patience ~17; the Pi-side table has to extend past that, or the repeated
  // tail entry rejects such points from every piece.
  constexpr std::size_t kPi = 24;
  Delta2FunctionName f;
  f.domain = g.domain;
  f.codomain = g.codomain;
  auto pieceof = g.piece;
  auto domain = g.domain;
  // Cache realizer readings once per piece: f.inverse is called once per
  // guess during guess-and-verify evaluation, and the dyadic cells probed by
  // the pushforwards repeat across guesses.
  auto cached = memoize_pieces([pieceof](std::size_t i) {
    Piece p = pieceof(i);
    p.realizer = memoize_transformer(p.realizer);
    return p;
  });
  f.inverse = [cached, domain](const OpenSetName& u) {
    // One pushforward per piece, shared by every entry that mentions it.
    std::vector<OpenSetName> preimages(kPi);
    std::vector<ClosedSetName> sets(kPi);
    for (std::size_t i = 0; i < kPi; ++i) {
      Piece p = cached(i);
      sets[i] = p.set;
      preimages[i] = pushforward_preimage_open(p.realizer, u);
    }
    Delta2SetName d;
    for (std::size_t i = 0; i < kPi; ++i) {
      OpenSetName w;
      w.space = domain;
      w.enumerate = concat_enumerations(sets[i].co_enumerate, preimages[i].enumerate);
      d.open_seq.push_back(std::move(w));
    }
    for (std::size_t k = 0; k < kSigma; ++k) {
      auto [i, j] = cantor_unpair(k);
      i = std::min(i, kPi - 1);
      d.closed_seq.push_back(intersect_closed(sets[i], inner_closed_union(preimages[i], j + 1)));
    }
    return d;
  };
  return f;
}

// --------------------------------------------------------------------
// The guess-and-verify core shared by eval_delta2 and delta2_to_piecewise
// --------------------------------------------------------------------

namespace {

/// Verifier of guesses (y, n) against f.inverse: the guess's cylinder is
/// rejected once x is confirmed inside opens 0..n of the preimage of the
/// provable complement of the guess region's hull. All evidence is valid
/// for every extension of the probed prefixes, so rejection is inherited.
class PreimageGuessProcess : public GuessProcess {
 public:
  explicit PreimageGuessProcess(Delta2FunctionName f)
      : f_(std::move(f)),
        interval_(is_space(f_.codomain, "unit_interval")),
        state_(std::make_shared<State>()) {}

  Alphabet advice_alphabet() const override { return Alphabet::Binary; }

  /// Complement of the hull of every extension of the guess prefix.
  OpenSetName guess_complement(const Prefix& guess) const {
    OpenSetName v;
    v.space = f_.codomain;
    if (interval_) {
      int gl = static_cast<int>(guess.size());
      Rational a = guess.empty() ? Rational(1, 2) : signed_digit_value(guess);
      Rational lo = a - pow2(-gl), hi = a + pow2(-gl);
      if (guess.empty()) {
        v.enumerate = [](Fuel) { return std::vector<Ball>{}; };
        return v;
      }
      v.enumerate = sparse_interval_complement(lo, hi);
      return v;
    }
    // Cantor: the complement of a cylinder is the finite union of the
    // sibling cylinders along the word.
    std::vector<Ball> balls;
    for (std::size_t l = 1; l <= guess.size(); ++l) {
      Prefix w = guess.take(l - 1);
      w.push_back(Symbol(1) - guess.at(l - 1));
      balls.push_back(Ball{cantor_word_index(w), pow2(1 - static_cast<int>(l))});
    }
    v.enumerate = [balls](Fuel f) { return f >= 1 ? balls : std::vector<Ball>{}; };
    return v;
  }

  std::shared_ptr<const Delta2SetName> preimage_of_complement(const Prefix& guess) const {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto it = state_->dcache.find(guess.str());
    if (it == state_->dcache.end()) {
      // Entries are pure functions of the guess, so the cache is only a
      // speedup; evicting everything once it grows past the working set of
      // a single evaluation keeps long sweeps at bounded memory.
      if (state_->dcache.size() >= 1024) state_->dcache.clear();
      it = state_->dcache
               .emplace(guess.str(), std::make_shared<const Delta2SetName>(
                                         f_.inverse(guess_complement(guess))))
               .first;
    }
    return it->second;
  }

  /// Guess prefix (codomain-name symbols) from raw advice bits; nullopt
  /// marks a provably malformed coding, with the offending position.
  struct DecodedGuess {
    Prefix guess;
    std::optional<std::size_t> invalid_at;  // bit offset within the y part
  };
  DecodedGuess decode_guess(const Prefix& ybits) const {
    if (!interval_) return {ybits, std::nullopt};
    DecodedDigits dec = bits_to_signed_digits(ybits);
    DecodedGuess out{dec.digits, std::nullopt};
    if (dec.invalid) out.invalid_at = 2 * (dec.digits.size() + 1);
    return out;
  }

  bool rejects(const Prefix& guess, std::size_t n, const PointName& x, Fuel fuel) const {
    auto d = preimage_of_complement(guess);
    if (d->open_seq.empty()) return false;
    for (std::size_t i = 0; i <= n; ++i)
      if (!member_open(d->open(i), x, fuel)) return false;
    return true;
  }

  PointName domain_point(const Prefix& name_prefix) const {
    if (is_space(f_.domain, "cantor"))
      return PointName::cantor(stalled(Alphabet::Binary, name_prefix));
    return PointName::signed_digit(stalled(Alphabet::Natural, name_prefix));
  }

  RunOutcome probe(const Prefix& input, const Prefix& advice, Fuel fuel) const override {
    RunOutcome o;
    o.advice_use = static_cast<Fuel>(advice.size());
    o.steps = fuel;
    o.output = Prefix(interval_ ? Alphabet::Natural : Alphabet::Binary);
    std::size_t n = 0;
    while (n < advice.size() && advice.at(n) == 0) ++n;
    if (n == advice.size()) return o;  // outer index still unknown
    Prefix ybits = advice.drop(n + 1);
    DecodedGuess dg = decode_guess(ybits);
    o.output = dg.guess;
    if (dg.invalid_at) {
      Fuel pos = static_cast<Fuel>(n + 1 + *dg.invalid_at);
      if (pos <= fuel) {
        o.halted = true;
        o.steps = pos;
        o.input_use = 0;
        return o;
      }
    }
    PointName x = domain_point(input);
    if (!rejects(dg.guess, n, x, fuel)) {
      o.input_use = static_cast<Fuel>(input.size());
      return o;
    }
    // Earliest geometric stage at which the rejection already held, with
    // the input knowledge available then; keeps halting steps reproducible
    // however late the transition is observed.
    for (Fuel t : stage_ladder(fuel)) {
      PointName xt = domain_point(input.take(std::min<std::size_t>(
          input.size(), static_cast<std::size_t>(std::max<Fuel>(t, 0)))));
      if (rejects(dg.guess, n, xt, t)) {
        o.halted = true;
        o.steps = t;
        o.input_use = t;
        return o;
      }
    }
    o.halted = true;  // unreachable: the full-fuel stage is on the ladder
    o.input_use = static_cast<Fuel>(input.size());
    return o;
  }

 private:
  struct State {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const Delta2SetName>> dcache;
  };
  Delta2FunctionName f_;
  bool interval_;
  std::shared_ptr<State> state_;
};

}  // namespace

std::shared_ptr<const GuessProcess> delta2_eval_process(const Delta2FunctionName& f) {
  return std::make_shared<PreimageGuessProcess>(f);
}

FunctionEval eval_delta2(const Delta2FunctionName& f, const PointName& x, Fuel cap,
                         std::size_t depth_cap) {
  if (!is_space(f.domain, "unit_interval") || !is_space(f.codomain, "unit_interval"))
    throw std::invalid_argument("eval_delta2 handles unit-interval functions only");
  if (x.kind() != PointName::Kind::SignedDigit)
    throw std::invalid_argument("eval_delta2 needs a signed-digit input name");
  auto proc = delta2_eval_process(f);
  NatCantorExecution r =
      execute_nat_cantor_advice(*proc, x.stream(), signed_digit_gauge(), cap, depth_cap);
  FunctionEval out;
  out.trace = std::move(r.trace);
  out.final_index = r.final_outer;
  if (out.trace.value().empty())
    out.diagnostics.push_back("no value pinned within the fuel cap (inconsistent name or budget)");
  return out;
}

std::vector<std::size_t> simulate_outer_schedule(const Delta2FunctionName& f, const PointName& x,
                                                 Fuel cap, std::size_t depth_cap) {
  auto proc = delta2_eval_process(f);
  SurvivingTree tree(proc, x.stream());
  std::vector<std::size_t> schedule;
  for (Fuel t = 1; t <= cap; ++t) {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::size_t cand = kNone;
    for (std::size_t n = 0; static_cast<Fuel>(n) + 1 <= t; ++n) {
      Fuel budget = t - static_cast<Fuel>(n) - 1;
      std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(budget), depth_cap);
      if (tree.has_survivor_below(nat_cantor_code(n, Prefix(Alphabet::Binary)), t, len)) {
        cand = n;
        break;
      }
    }
    schedule.push_back(cand == kNone ? static_cast<std::size_t>(t) : cand);
  }
  return schedule;
}

// --------------------------------------------------------------------
// Delta2 -> piecewise
// --------------------------------------------------------------------

namespace {

struct Hull {
  Rational lo, hi;
};

/// Survivor guesses extending `region` with patience n on input x, at the
/// given stage; `extra` symbols of the guess name beyond the region.
std::vector<Prefix> surviving_guesses(const PreimageGuessProcess& ver, const Prefix& region,
                                      std::size_t n, const PointName& x, Fuel t,
                                      std::size_t extra) {
  std::vector<Prefix> frontier{region};
  for (std::size_t step = 0; step < extra; ++step) {
    std::vector<Prefix> next;
    for (const Prefix& g : frontier) {
      int symbols = g.alphabet() == Alphabet::Natural ? 3 : 2;
      for (int s = 0; s < symbols; ++s) {
        Prefix child = g;
        child.push_back(g.alphabet() == Alphabet::Natural ? symbol_of_signed_digit(s - 1)
                                                          : Symbol(s));
        if (!ver.rejects(child, n, x, t)) next.push_back(child);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

std::optional<Hull> guess_hull(const std::vector<Prefix>& guesses) {
  std::optional<Hull> hull;
  for (const Prefix& g : guesses) {
    Rational v = signed_digit_value(g);
    Rational r = pow2(-static_cast<int>(g.size()));
    if (!hull) hull = Hull{v - r, v + r};
    else {
      hull->lo = std::min(hull->lo, Rational(v - r));
      hull->hi = std::max(hull->hi, Rational(v + r));
    }
  }
  return hull;
}

}  // namespace

PiecewiseName delta2_to_piecewise(const Delta2FunctionName& f) {
  bool interval = is_space(f.domain, "unit_interval") && is_space(f.codomain, "unit_interval");
  bool cantor = is_space(f.domain, "cantor") && is_space(f.codomain, "cantor");
  if (!interval && !cantor)
    throw std::invalid_argument(
        "delta2_to_piecewise needs matching unit-interval or Cantor domain and codomain");
  auto ver = std::make_shared<PreimageGuessProcess>(f);
  auto domain = f.domain;

  struct Memo {
    std::mutex mu;
    std::map<std::size_t, Piece> pieces;
    std::map<std::string, std::optional<Hull>> hulls;  // keyed "m:t:input"
  };
  auto memo = std::make_shared<Memo>();

  PiecewiseName g;
  g.domain = f.domain;
  g.codomain = f.codomain;
  g.piece = [ver, memo, interval, domain](std::size_t m) -> Piece {
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      auto it = memo->pieces.find(m);
      if (it != memo->pieces.end()) return it->second;
    }
    auto [n, q] = cantor_unpair(m);
    Prefix ubits = cantor_word(Integer(q));
    Piece piece;

    if (interval) {
      auto dg = ver->decode_guess(ubits);
      if (dg.invalid_at) {
        // A malformed guess region denotes no point: the piece is empty.
        piece.set = complement_closed(whole_space_open(domain));
        piece.realizer = PrefixTransformer(Alphabet::Natural, Alphabet::Natural,
                                           [](const Prefix&, Fuel) {
                                             return Prefix(Alphabet::Natural);
                                           });
      } else {
        Prefix region = dg.guess;
        // Never-rejected = outside the intersection of opens 0..n of the
        // region's preimage complement; co-enumerated by certifying dyadic
        // grid cells inside that intersection.  Cell balls are anchored at
        // cell centers (not at the listed balls' centers) so every interior
        // point eventually sits well inside some certified ball; the list
        // grows cumulatively over power-of-two stages and only appends, so
        // it is a prefix of itself under more fuel.
        struct CoCache {
          std::mutex mu;
          Fuel done = 0;
          std::vector<Ball> balls;
          std::map<Fuel, std::size_t> size_at;
          std::map<std::pair<int, Integer>, Rational> cell_radius;
        };
        auto cc = std::make_shared<CoCache>();
        ClosedSetName a;
        a.space = domain;
        std::size_t nn = n;
        a.co_enumerate = [ver, region, nn, cc](Fuel f2) -> std::vector<Ball> {
          if (f2 <= 0) return {};
          Fuel p = pow2floor(std::min(f2, kPrecisionCap));
          std::lock_guard<std::mutex> lock(cc->mu);
          if (p <= cc->done)
            return std::vector<Ball>(cc->balls.begin(),
                                     cc->balls.begin() + cc->size_at.at(p));
          auto dptr = ver->preimage_of_complement(region);
          const Delta2SetName& d = *dptr;
          if (d.open_seq.empty()) {
            for (Fuel q = cc->done == 0 ? 1 : cc->done * 2; q <= p; q *= 2)
              cc->size_at[q] = cc->balls.size();
            cc->done = p;
            return cc->balls;
          }
          for (Fuel q = cc->done == 0 ? 1 : cc->done * 2; q <= p; q *= 2) {
            std::vector<std::vector<Ball>> lists(nn + 1);
            for (std::size_t i = 0; i <= nn; ++i)
              if (d.open(i).enumerate) lists[i] = d.open(i).enumerate(q);
            int max_level = static_cast<int>(std::min<Fuel>(q, 14));
            // Depth-first refinement of [0,1]; a cell is certified when its
            // center clears every open with margin rho > 0, and fully
            // settled once rho covers the cell with slack (rho >= 2*half).
            std::function<void(int, const Integer&)> visit = [&](int level, const Integer& k) {
              Rational half = pow2(-(level + 1));
              Rational c = Rational(Integer(2 * k + 1)) * half;
              Rational rho(2);
              bool hopeless = false;
              for (std::size_t i = 0; i <= nn; ++i) {
                Rational margin(-1);
                for (const Ball& b2 : lists[i]) {
                  Rational m2 = b2.radius - abs_rat(interval_point(b2.center) - c);
                  margin = std::max(margin, Rational(m2));
                }
                rho = std::min(rho, margin);
                if (margin + half <= 0) {
                  // No point of this cell is certified inside open i by the
                  // current list, so no descendant can be emitted yet.
                  hopeless = true;
                  break;
                }
              }
              if (!hopeless && rho > 0) {
                auto key = std::make_pair(level, Integer(k));
                auto it = cc->cell_radius.find(key);
                if (it == cc->cell_radius.end() || rho > it->second * 2) {
                  cc->balls.push_back(
                      Ball{interval_index(Dyadic{Integer(2 * k + 1), level + 1}), rho});
                  cc->cell_radius[key] = rho;
                }
                if (rho >= half * 2) return;
              }
              if (hopeless || level >= max_level) return;
              visit(level + 1, Integer(2 * k));
              visit(level + 1, Integer(2 * k + 1));
            };
            visit(0, Integer(0));
            cc->size_at[q] = cc->balls.size();
          }
          cc->done = p;
          return cc->balls;
        };
        piece.set = a;
        // Realizer: consensus of the surviving guesses inside the region,
        // replayed over the geometric stage ladder so emissions are a
        // deterministic, monotone function of the input prefix.
        piece.realizer = PrefixTransformer(
            Alphabet::Natural, Alphabet::Natural,
            [ver, memo, region, nn, m](const Prefix& xp, Fuel fuel) {
              Prefix out(Alphabet::Natural);
              std::size_t next = 0;
              for (Fuel t : stage_ladder(fuel)) {
                Prefix xt = xp.take(std::min<std::size_t>(xp.size(),
                                                          static_cast<std::size_t>(t)));
                std::string key = std::to_string(m) + ":" + std::to_string(t) + ":" + xt.str();
                std::optional<Hull> hull;
                {
                  std::lock_guard<std::mutex> lock(memo->mu);
                  auto it = memo->hulls.find(key);
                  if (it != memo->hulls.end()) hull = it->second;
                  else {
                    PointName x = ver->domain_point(xt);
                    std::size_t extra =
                        std::min<std::size_t>(static_cast<std::size_t>(std::max<Fuel>(t, 0)), 13);
                    hull = guess_hull(surviving_guesses(*ver, region, nn, x, t, extra));
                    memo->hulls[key] = hull;
                  }
                }
                if (!hull) continue;
                while (static_cast<Fuel>(next) <= t && next <= 40 &&
                       hull->hi - hull->lo <= pow2(-static_cast<int>(next) - 1)) {
                  Dyadic qd = round_to_dyadic((hull->lo + hull->hi) / 2,
                                              static_cast<int>(next) + 3);
                  out.push_back(encode_dyadic(qd));
                  ++next;
                }
              }
              return out;
            });
      }
    } else {
      // Cantor: the guess region is the raw bit prefix; membership is
      // cylinder-sound, so the piece carries a rejector.
      Prefix region = ubits;
      std::size_t nn = n;
      piece.set = cantor_closed_from_rejector([ver, region, nn](const Prefix& w, Fuel fuel) {
        if (fuel <= 0) return false;
        return ver->rejects(region, nn, ver->domain_point(w), fuel);
      });
      piece.realizer = PrefixTransformer(
          Alphabet::Binary, Alphabet::Binary, [ver, region, nn](const Prefix& xp, Fuel fuel) {
            Prefix best(Alphabet::Binary);
            for (Fuel t : stage_ladder(fuel)) {
              Prefix xt =
                  xp.take(std::min<std::size_t>(xp.size(), static_cast<std::size_t>(t)));
              PointName x = ver->domain_point(xt);
              std::size_t extra =
                  std::min<std::size_t>(static_cast<std::size_t>(std::max<Fuel>(t, 0)), 24);
              auto survivors = surviving_guesses(*ver, region, nn, x, t, extra);
              if (survivors.empty()) continue;
              Prefix common = survivors.front();
              for (const Prefix& s : survivors) {
                std::size_t l = 0;
                while (l < common.size() && l < s.size() && common.at(l) == s.at(l)) ++l;
                common = common.take(l);
              }
              if (common.size() > best.size()) best = common;
            }
            return best;
          });
    }
    std::lock_guard<std::mutex> lock(memo->mu);
    memo->pieces.emplace(m, piece);
    return piece;
  };
  return g;
}

// --------------------------------------------------------------------
// Piecewise evaluation
// --------------------------------------------------------------------

FunctionEval eval_piecewise(const PiecewiseName& g, const PointName& x, Fuel cap) {
  if (x.kind() == PointName::Kind::FastCauchy)
    throw std::invalid_argument("eval_piecewise needs a signed-digit or Cantor input name");
  FunctionEval out;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t candidate = kNone;
  std::vector<bool> refuted;
  Prefix current;
  bool have_alphabet = false;
  for (Fuel t : stage_ladder(cap)) {
    std::size_t budget = std::min<std::size_t>(static_cast<std::size_t>(t), 200);
    std::size_t least = kNone;
    if (refuted.size() <= budget) refuted.resize(budget + 1, false);
    for (std::size_t i = 0; i <= budget; ++i) {
      if (!refuted[i] && member_out_closed(g.piece(i).set, x, t)) refuted[i] = true;
      if (!refuted[i]) {
        least = i;
        break;
      }
    }
    if (least == kNone) continue;
    Prefix emitted = g.piece(least).realizer.apply(x.stream().at(t), t);
    if (!have_alphabet && !emitted.empty()) {
      current = Prefix(emitted.alphabet());
      have_alphabet = true;
    }
    if (candidate == kNone) {
      candidate = least;
    } else if (least != candidate) {
      out.trace.reset(t);
      candidate = least;
      current = Prefix(emitted.alphabet());
    } else if (!emitted.extends(current)) {
      out.diagnostics.push_back("piece realizer revised its own output at stage " +
                                std::to_string(t));
      out.trace.reset(t);
      current = Prefix(emitted.alphabet());
    }
    if (emitted.size() > current.size()) {
      out.trace.emit(t, emitted.drop(current.size()));
      current = emitted;
    }
  }
  out.final_index = candidate == kNone ? 0 : candidate;
  if (out.trace.value().empty())
    out.diagnostics.push_back("no piece produced output within the fuel cap");
  return out;
}

// --------------------------------------------------------------------
// Shipped functions
// --------------------------------------------------------------------

PiecewiseName step_piecewise() {
  PiecewiseName g;
  g.domain = unit_interval_space();
  g.codomain = unit_interval_space();
  g.piece = memoize_pieces([](std::size_t i) -> Piece {
    if (i == 0) return {closed_interval(Rational(1, 2), Rational(1)), constant_code_realizer(1)};
    return {closed_interval(Rational(0), Rational(1, 2) - pow2(-static_cast<int>(i))),
            constant_code_realizer(0)};
  });
  return g;
}

PiecewiseName staircase_piecewise() {
  PiecewiseName g;
  g.domain = unit_interval_space();
  g.codomain = unit_interval_space();
  g.piece = memoize_pieces([](std::size_t i) -> Piece {
    if (i == 0) return {closed_interval(Rational(2, 3), Rational(1)), constant_code_realizer(1)};
    if (i % 2 == 1) {
      int k = static_cast<int>((i - 1) / 2) + 2;
      return {closed_interval(Rational(0), Rational(1, 3) - pow2(-k)), constant_code_realizer(0)};
    }
    int k = static_cast<int>(i / 2) + 1;
    return {closed_interval(Rational(1, 3), Rational(2, 3) - pow2(-k)),
            constant_code_realizer(Rational(1, 2))};
  });
  return g;
}

PiecewiseName identity_piecewise() {
  PiecewiseName g;
  g.domain = unit_interval_space();
  g.codomain = unit_interval_space();
  g.piece = memoize_pieces([](std::size_t) -> Piece {
    return {whole_space_closed(unit_interval_space()), digit_to_code_realizer()};
  });
  return g;
}

PiecewiseName constant_piecewise(const Rational& c) {
  PiecewiseName g;
  g.domain = unit_interval_space();
  g.codomain = unit_interval_space();
  g.piece = memoize_pieces([c](std::size_t) -> Piece {
    return {whole_space_closed(unit_interval_space()), constant_code_realizer(c)};
  });
  return g;
}

PiecewiseName identity_cantor_piecewise() {
  PiecewiseName g;
  g.domain = cantor_space();
  g.codomain = cantor_space();
  g.piece = memoize_pieces([](std::size_t) -> Piece {
    return {whole_space_closed(cantor_space()), PrefixTransformer::identity(Alphabet::Binary)};
  });
  return g;
}

Delta2FunctionName step_delta2() {
  Delta2FunctionName f = piecewise_to_delta2(step_piecewise());
  f.oracle = [](const Rational& x) { return x >= Rational(1, 2) ? Rational(1) : Rational(0); };
  return f;
}

Delta2FunctionName staircase_delta2() {
  Delta2FunctionName f = piecewise_to_delta2(staircase_piecewise());
  f.oracle = [](const Rational& x) {
    if (x < Rational(1, 3)) return Rational(0);
    if (x < Rational(2, 3)) return Rational(1, 2);
    return Rational(1);
  };
  return f;
}

Delta2FunctionName identity_delta2() {
  Delta2FunctionName f = piecewise_to_delta2(identity_piecewise());
  f.oracle = [](const Rational& x) { return x; };
  return f;
}

Delta2FunctionName constant_delta2(const Rational& c) {
  Delta2FunctionName f = piecewise_to_delta2(constant_piecewise(c));
  f.oracle = [c](const Rational&) { return c; };
  return f;
}

Delta2FunctionName identity_cantor_delta2() {
  Delta2FunctionName f;
  f.domain = cantor_space();
  f.codomain = cantor_space();
  f.inverse = [](const OpenSetName& u) {
    Delta2SetName d;
    // Cantor balls are clopen cylinders: u itself serves as every open of
    // the Pi side, and fixed finite unions of its balls exhaust the Sigma
    // side, each rejecting exactly the incompatible cylinders.
    auto enumerate = u.enumerate;
    for (std::size_t j = 0; j < 12; ++j) {
      std::vector<Prefix> cyls;
      if (enumerate)
        for (const Ball& b : enumerate(static_cast<Fuel>(j) + 1)) {
          // Ball (c, r) over Cantor space is the cylinder of the first L
          // symbols of c's word, L minimal with 2^-L < r.
          int L = 0;
          while (pow2(-L) >= b.radius && L <= 64) ++L;
          Prefix w = cantor_word(b.center);
          Prefix cyl(Alphabet::Binary);
          for (int i = 0; i < L; ++i)
            cyl.push_back(i < static_cast<int>(w.size()) ? w.at(static_cast<std::size_t>(i))
                                                         : Symbol(0));
          cyls.push_back(cyl);
          if (cyls.size() > j) break;
        }
      ClosedSetName cj;
      cj.space = cantor_space();
      cj.rejected = [cyls](const Prefix& w, Fuel fuel) {
        if (fuel <= 0) return false;
        if (cyls.empty()) return true;
        for (const Prefix& c : cyls)
          if (w.extends(c.take(std::min(c.size(), w.size()))) ||
              c.extends(w.take(std::min(c.size(), w.size()))))
            return false;
        return true;
      };
      cj.co_enumerate = [](Fuel) { return std::vector<Ball>{}; };
      d.closed_seq.push_back(std::move(cj));
    }
    OpenSetName w;
    w.space = cantor_space();
    w.enumerate = enumerate;
    d.open_seq.push_back(std::move(w));
    return d;
  };
  return f;
}

}  // namespace t2c
