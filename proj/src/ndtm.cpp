#include "t2c/ndtm.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace t2c {

Prefix nat_code_prefix(std::size_t n, Fuel len) {
  Prefix out(Alphabet::Binary);
  for (Fuel i = 0; i < len; ++i)
    out.push_back(static_cast<std::size_t>(i) == n ? 1 : 0);
  return out;
}

Prefix nat_cantor_code(std::size_t n, const Prefix& cantor_part) {
  Prefix out(Alphabet::Binary);
  for (std::size_t i = 0; i < n; ++i) out.push_back(0);
  out.push_back(1);
  return out + cantor_part;
}

void RevisingOutput::emit(Fuel stage, const Prefix& delta) {
  if (delta.empty()) return;
  bool any_emission = std::any_of(events_.begin(), events_.end(),
                                  [](const Event& e) { return !e.reset; });
  if (!any_emission) alphabet_ = delta.alphabet();
  events_.push_back(Event{stage, false, delta});
}

void RevisingOutput::reset(Fuel stage) {
  events_.push_back(Event{stage, true, Prefix(alphabet_)});
}

int RevisingOutput::reset_count() const {
  return static_cast<int>(
      std::count_if(events_.begin(), events_.end(), [](const Event& e) { return e.reset; }));
}

Fuel RevisingOutput::last_reset_stage() const {
  for (auto it = events_.rbegin(); it != events_.rend(); ++it)
    if (it->reset) return it->stage;
  return -1;
}

Prefix RevisingOutput::value() const {
  Prefix v(alphabet_);
  for (const auto& e : events_) {
    if (e.reset) v = Prefix(alphabet_);
    else v = v + e.emitted;
  }
  return v;
}

SurvivingTree::SurvivingTree(std::shared_ptr<const GuessProcess> process, StreamName input)
    : process_(std::move(process)), input_(std::move(input)) {}

RunOutcome SurvivingTree::probe_node(const Prefix& node, Fuel stage) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& m = memo_[node.str()];
  Prefix in = input_.at(stage);
  if (m.halt_step && *m.halt_step <= stage &&
      m.outcome.input_use <= static_cast<Fuel>(in.size()))
    return m.outcome;
  if (m.probed_fuel == stage && !m.halt_step) return m.outcome;
  RunOutcome out = process_->probe(in, node, stage);
  if (stage >= m.probed_fuel) {
    m.probed_fuel = stage;
    m.outcome = out;
    if (out.halted) m.halt_step = out.steps;
  }
  return out;
}

bool SurvivingTree::rejected(const Prefix& node, Fuel stage) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(node.str());
    if (it != memo_.end()) {
      const Memo& m = it->second;
      if (m.halt_step)
        return *m.halt_step <= stage &&
               m.outcome.input_use <= static_cast<Fuel>(input_.at(stage).size());
      // Probing deeper with a longer input cannot have missed a halt that a
      // shallower probe would find, so a deep non-halting probe is conclusive.
      if (m.probed_fuel >= stage) return false;
    }
  }
  return probe_node(node, stage).halted;
}

namespace {

void collect_survivors(const SurvivingTree& tree, const Prefix& node, Fuel stage,
                       std::size_t remaining, std::vector<Prefix>& out) {
  if (tree.rejected(node, stage)) return;
  if (remaining == 0) {
    out.push_back(node);
    return;
  }
  for (int b = 0; b < 2; ++b) {
    Prefix child = node;
    child.push_back(b);
    collect_survivors(tree, child, stage, remaining - 1, out);
  }
}

bool any_survivor(const SurvivingTree& tree, const Prefix& node, Fuel stage,
                  std::size_t remaining) {
  if (tree.rejected(node, stage)) return false;
  if (remaining == 0) return true;
  for (int b = 0; b < 2; ++b) {
    Prefix child = node;
    child.push_back(b);
    if (any_survivor(tree, child, stage, remaining - 1)) return true;
  }
  return false;
}

// Leftmost-first search; returns true once full depth is reached. `best`
// tracks the deepest node seen, which by visit order is the leftmost at
// its depth.
bool leftmost_dfs(const SurvivingTree& tree, const Prefix& node, Fuel stage,
                  std::size_t remaining, Prefix& best) {
  if (tree.rejected(node, stage)) return false;
  if (node.size() > best.size()) best = node;
  if (remaining == 0) return true;
  for (int b = 0; b < 2; ++b) {
    Prefix child = node;
    child.push_back(b);
    if (leftmost_dfs(tree, child, stage, remaining - 1, best)) return true;
  }
  return false;
}

}  // namespace

std::vector<Prefix> SurvivingTree::survivors_below(const Prefix& root, Fuel stage,
                                                   std::size_t len) const {
  if (process_->advice_alphabet() != Alphabet::Binary)
    throw std::logic_error("survivor enumeration requires binary advice");
  std::vector<Prefix> out;
  collect_survivors(*this, root, stage, len, out);
  return out;
}

std::vector<Prefix> SurvivingTree::survivors_at(Fuel stage, std::size_t len) const {
  return survivors_below(Prefix(Alphabet::Binary), stage, len);
}

bool SurvivingTree::has_survivor_below(const Prefix& root, Fuel stage, std::size_t len) const {
  if (process_->advice_alphabet() != Alphabet::Binary)
    throw std::logic_error("survivor enumeration requires binary advice");
  return any_survivor(*this, root, stage, len);
}

std::vector<Prefix> SurvivingTree::level(Fuel fuel) const {
  std::vector<Prefix> out;
  for (std::size_t len = 0; len <= static_cast<std::size_t>(std::max<Fuel>(fuel, 0)); ++len) {
    auto nodes = survivors_at(fuel, len);
    out.insert(out.end(), nodes.begin(), nodes.end());
  }
  return out;
}

Prefix SurvivingTree::leftmost(Fuel stage, std::size_t len) const {
  if (process_->advice_alphabet() != Alphabet::Binary)
    throw std::logic_error("survivor enumeration requires binary advice");
  Prefix best(Alphabet::Binary);
  leftmost_dfs(*this, Prefix(Alphabet::Binary), stage, len, best);
  return best;
}

NatExecution execute_nat_advice(const GuessProcess& p, const StreamName& input, Fuel cap) {
  NatExecution ex;
  struct Info {
    std::optional<Fuel> halt_step;
    Fuel halt_input_use = 0;
  };
  std::vector<Info> info;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t prev = kNone;
  std::size_t emitted = 0;
  for (Fuel t = 1; t <= cap; ++t) {
    Prefix in = input.at(t);
    std::size_t cand = kNone;
    RunOutcome cand_out;
    for (std::size_t n = 0; static_cast<Fuel>(n) <= t; ++n) {
      if (info.size() <= n) info.resize(n + 1);
      Info& I = info[n];
      if (I.halt_step && *I.halt_step <= t && I.halt_input_use <= static_cast<Fuel>(in.size()))
        continue;
      RunOutcome out = p.probe(in, nat_code_prefix(n, t + static_cast<Fuel>(n) + 2), t);
      if (out.halted) {
        I.halt_step = out.steps;
        I.halt_input_use = out.input_use;
        continue;
      }
      cand = n;
      cand_out = out;
      break;
    }
    if (cand == kNone) {
      if (prev != kNone) {
        ex.trace.reset(t);
        prev = kNone;
        emitted = 0;
      }
      continue;
    }
    if (prev == kNone) {
      prev = cand;
      emitted = 0;
    } else if (cand != prev) {
      ex.trace.reset(t);
      prev = cand;
      emitted = 0;
    }
    if (cand_out.output.size() > emitted) {
      ex.trace.emit(t, cand_out.output.drop(emitted));
      emitted = cand_out.output.size();
    }
  }
  ex.final_candidate = prev == kNone ? 0 : prev;
  Prefix in_cap = input.at(cap);
  for (std::size_t n = 0; static_cast<Fuel>(n) <= cap; ++n) {
    bool dead = n < info.size() && info[n].halt_step && *info[n].halt_step <= cap &&
                info[n].halt_input_use <= static_cast<Fuel>(in_cap.size());
    if (!dead) ex.survivors.push_back(n);
  }
  return ex;
}

OutputGauge signed_digit_gauge() {
  return [](const Prefix& out) -> std::optional<std::pair<Rational, Rational>> {
    try {
      Rational v = signed_digit_value(out);
      Rational r = pow2(-static_cast<int>(out.size()));
      return std::make_pair(v - r, v + r);
    } catch (const BadSymbol&) {
      return std::nullopt;
    }
  };
}

OutputGauge binary_expansion_gauge() {
  return [](const Prefix& out) -> std::optional<std::pair<Rational, Rational>> {
    Rational v = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out.at(i) < 0 || out.at(i) > 1) return std::nullopt;
      if (out.at(i) == 1) v += pow2(-static_cast<int>(i) - 1);
    }
    return std::make_pair(v, v + pow2(-static_cast<int>(out.size())));
  };
}

namespace {

struct Hull {
  Rational lo, hi;
};

// Interval hull of gauge readings over the given branches; nullopt when a
// branch's output determines nothing yet.
std::optional<Hull> gauge_hull(const SurvivingTree& tree, const std::vector<Prefix>& survivors,
                               const OutputGauge& gauge, Fuel stage) {
  std::optional<Hull> hull;
  for (const auto& node : survivors) {
    auto g = gauge(tree.probe_node(node, stage).output);
    if (!g) return std::nullopt;
    if (!hull) hull = Hull{g->first, g->second};
    else {
      hull->lo = std::min(hull->lo, g->first);
      hull->hi = std::max(hull->hi, g->second);
    }
  }
  return hull;
}

// Emit dyadic codes for every precision level the hull now supports:
// position s promises |limit - q_s| <= 2^-s, which a hull of width
// <= 2^-(s+1) plus grid rounding at 2^-(s+3) guarantees.
void emit_ladder(RevisingOutput& trace, std::size_t& next_pos, const Hull& hull, Fuel stage) {
  while (static_cast<Fuel>(next_pos) <= stage &&
         hull.hi - hull.lo <= pow2(-static_cast<int>(next_pos) - 1)) {
    Dyadic q = round_to_dyadic((hull.lo + hull.hi) / 2, static_cast<int>(next_pos) + 3);
    Prefix delta(Alphabet::Natural);
    delta.push_back(encode_dyadic(q));
    trace.emit(stage, delta);
    ++next_pos;
  }
}

}  // namespace

ConsensusExecution execute_cantor_consensus(const GuessProcess& p, const StreamName& input,
                                            const OutputGauge& gauge, Fuel cap,
                                            std::size_t depth_cap) {
  auto alias = std::shared_ptr<const GuessProcess>(&p, [](const GuessProcess*) {});
  SurvivingTree tree(alias, input);
  ConsensusExecution ex;
  std::size_t next_pos = 0;
  for (Fuel t = 1; t <= cap; ++t) {
    std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
    auto survivors = tree.survivors_at(t, len);
    ex.survivor_count_at_cap = survivors.size();
    if (survivors.empty()) continue;
    auto hull = gauge_hull(tree, survivors, gauge, t);
    if (!hull) continue;
    emit_ladder(ex.trace, next_pos, *hull, t);
  }
  return ex;
}

StagedPrefix execute_cantor_leftmost(std::shared_ptr<const GuessProcess> p, StreamName input,
                                     std::size_t depth_cap) {
  auto tree = std::make_shared<SurvivingTree>(p, std::move(input));
  StagedPrefix sp;
  sp.alphabet = Alphabet::Binary;
  sp.at_stage = [tree, depth_cap](Fuel t) {
    if (t < 0) t = 0;
    std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
    return tree->leftmost(t, len);
  };
  return sp;
}

NatCantorExecution execute_nat_cantor_advice(const GuessProcess& p, const StreamName& input,
                                             const OutputGauge& gauge, Fuel cap,
                                             std::size_t depth_cap) {
  auto alias = std::shared_ptr<const GuessProcess>(&p, [](const GuessProcess*) {});
  SurvivingTree tree(alias, input);
  NatCantorExecution ex;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t prev = kNone;
  std::size_t next_pos = 0;
  for (Fuel t = 1; t <= cap; ++t) {
    // Least n whose subtree 0^n 1 still has survivors at the exploration
    // depth its budget allows; unexplored n count as alive, so the
    // candidate only ever advances.
    std::size_t cand = kNone;
    std::size_t cand_len = 0;
    bool explored = false;
    for (std::size_t n = 0; static_cast<Fuel>(n) + 1 <= t; ++n) {
      Fuel budget = t - static_cast<Fuel>(n) - 1;
      std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(budget), depth_cap);
      Prefix root = nat_cantor_code(n, Prefix(Alphabet::Binary));
      if (tree.has_survivor_below(root, t, len)) {
        cand = n;
        cand_len = len;
        explored = true;
        break;
      }
    }
    if (cand == kNone) cand = static_cast<std::size_t>(t);  // unexplored frontier
    if (prev == kNone) {
      prev = cand;
      next_pos = 0;
    } else if (cand != prev) {
      ex.trace.reset(t);
      prev = cand;
      next_pos = 0;
    }
    if (!explored) continue;
    Prefix root = nat_cantor_code(prev, Prefix(Alphabet::Binary));
    auto survivors = tree.survivors_below(root, t, cand_len);
    auto hull = gauge_hull(tree, survivors, gauge, t);
    if (!hull) continue;
    emit_ladder(ex.trace, next_pos, *hull, t);
  }
  ex.final_outer = prev == kNone ? 0 : prev;
  return ex;
}

BaireSurvivorReport execute_baire_advice_bounded(const GuessProcess& p, const StreamName& input,
                                                 int bound, Fuel cap, std::size_t depth_cap) {
  auto alias = std::shared_ptr<const GuessProcess>(&p, [](const GuessProcess*) {});
  SurvivingTree tree(alias, input);
  BaireSurvivorReport report;
  report.depth = depth_cap;
  report.bound = bound;
  report.fuel = cap;
  std::function<void(const Prefix&)> dfs = [&](const Prefix& node) {
    if (tree.rejected(node, cap)) return;
    if (node.size() == depth_cap) {
      report.survivors.push_back(node);
      return;
    }
    for (int m = 0; m < bound; ++m) {
      Prefix child = node;
      child.push_back(m);
      dfs(child);
    }
  };
  dfs(Prefix(Alphabet::Natural));
  return report;
}

RunOutcome HaltingBoundProcess::probe(const Prefix& /*input*/, const Prefix& advice,
                                      Fuel fuel) const {
  RunOutcome out;
  out.advice_use = static_cast<Fuel>(advice.size());
  Fuel earliest = -1;
  Prefix bits(Alphabet::Binary);
  for (std::size_t i = 0; i < advice.size() && i < halting_steps_.size(); ++i) {
    const Symbol& m = advice.at(i);
    bits.push_back(m == 0 ? 0 : 1);
    Fuel when = -1;
    if (m == 0) {
      if (halting_steps_[i]) when = *halting_steps_[i];
    } else {
      Fuel mm = m.convert_to<Fuel>();
      if (!halting_steps_[i] || *halting_steps_[i] > mm) when = mm;
    }
    if (when >= 0 && (earliest < 0 || when < earliest)) earliest = when;
  }
  out.output = bits;
  if (earliest >= 0 && earliest <= fuel) {
    out.halted = true;
    out.steps = earliest;
  } else {
    out.steps = fuel;
  }
  return out;
}

void write_cantor_trace(std::ostream& out, const SurvivingTree& tree, Fuel cap,
                        std::size_t depth_cap) {
  for (Fuel t = 1; t <= cap; ++t) {
    std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
    auto survivors = tree.survivors_at(t, len);
    Prefix output;
    if (!survivors.empty()) output = tree.probe_node(survivors.front(), t).output;
    out << "stage " << t << " | survivors " << survivors.size() << " | output " << output.str()
        << "\n";
  }
}

}  // namespace t2c
