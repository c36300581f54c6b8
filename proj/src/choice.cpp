#include "t2c/choice.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace t2c {

namespace {

bool mask_bit(const Integer& mask, std::size_t n) {
  return ((mask >> static_cast<unsigned>(n)) & 1) != 0;
}

std::size_t least_clear_bit(const Integer& mask) {
  std::size_t n = 0;
  while (mask_bit(mask, n)) ++n;
  return n;
}

/// Leftmost node of length `len` all of whose prefixes pass the filter;
/// when no such node exists, the deepest-leftmost passing node.
Prefix leftmost_unrejected(const std::function<bool(const Prefix&)>& rejected, std::size_t len) {
  Prefix best(Alphabet::Binary);
  std::function<bool(Prefix&)> dfs = [&](Prefix& w) -> bool {
    if (rejected(w)) return false;
    if (w.size() > best.size()) best = w;
    if (w.size() == len) return true;
    for (int b = 0; b < 2; ++b) {
      w.push_back(b);
      if (dfs(w)) return true;
      w = w.take(w.size() - 1);
    }
    return false;
  };
  Prefix root(Alphabet::Binary);
  dfs(root);
  return best;
}

}  // namespace

StreamName apply_reduction(const WeihrauchReduction& r, const PrefixTransformer& g_solver,
                           const StreamName& x) {
  PrefixTransformer pre = r.pre, post = r.post, g = g_solver;
  return StreamName::from_stages(post.output_alphabet(), [pre, post, g, x](Fuel f) {
    Prefix xi = x.at(f);
    Prefix chosen = g.apply(pre.apply(xi, f), f);
    return post.apply(pair_encode_prefix(xi, chosen), f);
  });
}

ChoiceInstance nat_choice_instance(std::function<std::vector<std::size_t>(Fuel)> rejected) {
  ChoiceInstance inst;
  inst.space = AdviceTag::Nat;
  inst.rejected_nats = std::move(rejected);
  return inst;
}

ChoiceInstance cantor_choice_instance(ClosedSetName tree) {
  ChoiceInstance inst;
  inst.space = AdviceTag::Cantor;
  inst.tree = std::move(tree);
  return inst;
}

ChoiceInstance process_choice_instance(std::shared_ptr<const GuessProcess> p, StreamName input,
                                       AdviceTag tag) {
  if (tag == AdviceTag::Nat) {
    return nat_choice_instance([p, input](Fuel t) {
      std::vector<std::size_t> out;
      Prefix xin = input.at(t + 1);
      for (Fuel n = 0; n <= t; ++n)
        if (p->probe(xin, nat_code_prefix(static_cast<std::size_t>(n), t + n + 2), t).halted)
          out.push_back(static_cast<std::size_t>(n));
      return out;
    });
  }
  if (tag == AdviceTag::Cantor) {
    auto tree = std::make_shared<SurvivingTree>(p, input);
    ClosedSetName c = cantor_closed_from_rejector(
        [tree](const Prefix& w, Fuel f) { return tree->rejected(w, f); });
    return cantor_choice_instance(std::move(c));
  }
  throw std::invalid_argument("choice instances exist only for Nat and Cantor advice");
}

NatChoiceRun c_nat_solver(const ChoiceInstance& inst, Fuel cap) {
  if (inst.space != AdviceTag::Nat)
    throw std::invalid_argument("c_nat_solver needs an instance over the naturals");
  NatChoiceRun run;
  bool started = false;
  std::size_t candidate = 0;
  for (Fuel t = 0; t <= cap; ++t) {
    std::set<std::size_t> rejected;
    if (inst.rejected_nats)
      for (std::size_t n : inst.rejected_nats(t)) rejected.insert(n);
    std::size_t least = 0;
    while (rejected.count(least)) ++least;
    if (!started) {
      candidate = least;
      run.trace.emit(t, Prefix(Alphabet::Natural, {static_cast<int>(candidate)}));
      started = true;
    } else if (least != candidate) {
      candidate = least;
      run.trace.reset(t);
      run.trace.emit(t, Prefix(Alphabet::Natural, {static_cast<int>(candidate)}));
    }
  }
  run.value = candidate;
  return run;
}

StagedPrefix c_cantor_solver(const ChoiceInstance& inst, std::size_t depth_cap) {
  if (inst.space != AdviceTag::Cantor)
    throw std::invalid_argument("c_cantor_solver needs an instance over Cantor space");
  auto rejected = inst.tree.rejected;
  StagedPrefix sp;
  sp.alphabet = Alphabet::Binary;
  sp.at_stage = [rejected, depth_cap](Fuel t) {
    if (t < 0) t = 0;
    std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
    return leftmost_unrejected(
        [&](const Prefix& w) { return rejected && rejected(w, t); }, len);
  };
  return sp;
}

StreamName nat_instance_stream(const ChoiceInstance& inst) {
  auto rejected = inst.rejected_nats;
  return StreamName::from_stages(Alphabet::Natural, [rejected](Fuel f) {
    Prefix out(Alphabet::Natural);
    for (Fuel t = 0; t < f; ++t) {
      Integer mask = 0;
      if (rejected)
        for (std::size_t n : rejected(t))
          if (n <= static_cast<std::size_t>(t)) mask |= Integer(1) << static_cast<unsigned>(n);
      out.push_back(mask);
    }
    return out;
  });
}

StreamName cantor_instance_stream(const ChoiceInstance& inst, std::size_t depth_cap) {
  auto rejected = inst.tree.rejected;
  return StreamName::from_stages(Alphabet::Natural, [rejected, depth_cap](Fuel f) {
    Prefix out(Alphabet::Natural);
    for (Fuel t = 0; t < f; ++t) {
      Integer mask = 0;
      std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
      std::vector<Prefix> nodes{Prefix(Alphabet::Binary)};
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Prefix node = nodes[i];
        if (rejected && rejected(node, t))
          mask |= Integer(1) << cantor_word_index(node).convert_to<unsigned>();
        if (node.size() < depth)
          for (int b = 0; b < 2; ++b) {
            Prefix child = node;
            child.push_back(b);
            nodes.push_back(child);
          }
      }
      out.push_back(mask);
    }
    return out;
  });
}

PrefixTransformer c_nat_realizer() {
  return PrefixTransformer(Alphabet::Natural, Alphabet::Binary, [](const Prefix& y, Fuel f) {
    if (y.empty()) return Prefix(Alphabet::Binary);
    std::size_t n = least_clear_bit(y.at(y.size() - 1));
    return nat_code_prefix(n, std::max<Fuel>(f, static_cast<Fuel>(n) + 2));
  });
}

PrefixTransformer c_cantor_realizer(std::size_t depth_cap) {
  return PrefixTransformer(
      Alphabet::Natural, Alphabet::Binary, [depth_cap](const Prefix& y, Fuel) {
        if (y.empty()) return Prefix(Alphabet::Binary);
        Integer mask = y.at(y.size() - 1);
        std::size_t len = std::min(y.size() - 1, depth_cap);
        return leftmost_unrejected(
            [&mask](const Prefix& w) {
              return mask_bit(mask, cantor_word_index(w).convert_to<std::size_t>());
            },
            len);
      });
}

WeihrauchReduction ndtm_to_choice_reduction(std::shared_ptr<const GuessProcess> p, AdviceTag tag,
                                            std::size_t depth_cap) {
  if (tag != AdviceTag::Nat && tag != AdviceTag::Cantor)
    throw std::invalid_argument("reductions to choice exist only for Nat and Cantor advice");

  WeihrauchReduction r;
  if (tag == AdviceTag::Nat) {
    r.pre = PrefixTransformer(Alphabet::Binary, Alphabet::Natural, [p](const Prefix& x, Fuel f) {
      Prefix out(Alphabet::Natural);
      for (Fuel t = 0; t < f; ++t) {
        // A run with fuel t reads at most t+1 input cells, so the symbol
        // depends only on x.take(t+1): the coding is extension-monotone.
        Prefix xin = x.take(std::min<std::size_t>(x.size(), static_cast<std::size_t>(t) + 1));
        Integer mask = 0;
        for (Fuel n = 0; n <= t; ++n)
          if (p->probe(xin, nat_code_prefix(static_cast<std::size_t>(n), t + n + 2), t).halted)
            mask |= Integer(1) << static_cast<unsigned>(n);
        out.push_back(mask);
      }
      return out;
    });
  } else {
    r.pre = PrefixTransformer(
        Alphabet::Binary, Alphabet::Natural, [p, depth_cap](const Prefix& x, Fuel f) {
          Prefix out(Alphabet::Natural);
          for (Fuel t = 0; t < f; ++t) {
            Prefix xin = x.take(std::min<std::size_t>(x.size(), static_cast<std::size_t>(t) + 1));
            Integer mask = 0;
            std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(t), depth_cap);
            std::vector<Prefix> nodes{Prefix(Alphabet::Binary)};
            for (std::size_t i = 0; i < nodes.size(); ++i) {
              const Prefix node = nodes[i];
              if (p->probe(xin, node, t).halted)
                mask |= Integer(1) << cantor_word_index(node).convert_to<unsigned>();
              if (node.size() < depth)
                for (int b = 0; b < 2; ++b) {
                  Prefix child = node;
                  child.push_back(b);
                  nodes.push_back(child);
                }
            }
            out.push_back(mask);
          }
          return out;
        });
  }
  r.post = PrefixTransformer(Alphabet::Binary, Alphabet::Binary, [p](const Prefix& paired, Fuel f) {
    auto [x, advice] = pair_decode_prefix(paired);
    return p->probe(x, advice, f).output;
  });
  r.strong = false;
  return r;
}

void write_nat_rejections(std::ostream& out,
                          const std::function<std::vector<std::size_t>(Fuel)>& rejected,
                          Fuel depth) {
  if (!rejected) return;
  std::set<std::size_t> seen;
  for (Fuel t = 0; t <= depth; ++t)
    for (std::size_t n : rejected(t))
      if (seen.insert(n).second) out << "stage " << t << ": reject " << n << "\n";
}

std::function<std::vector<std::size_t>(Fuel)> parse_nat_rejections(std::istream& in) {
  auto entries = std::make_shared<std::map<std::size_t, Fuel>>();
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head, colon, reject;
    if (!(ls >> head)) continue;
    Fuel t;
    std::size_t n;
    if (head != "stage" || !(ls >> t) || !(ls >> colon) || colon != ":" || !(ls >> reject) ||
        reject != "reject" || !(ls >> n))
      throw std::runtime_error("rejection schedule: bad line: " + line);
    auto it = entries->find(n);
    if (it == entries->end() || it->second > t) (*entries)[n] = t;
  }
  return [entries](Fuel t) {
    std::vector<std::size_t> out;
    for (const auto& [n, stage] : *entries)
      if (stage <= t) out.push_back(n);
    return out;
  };
}

}  // namespace t2c
