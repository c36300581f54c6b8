#ifndef T2C_CHOICE_HPP
#define T2C_CHOICE_HPP

#include <functional>
#include <iosfwd>
#include <memory>

#include "t2c/ndtm.hpp"
#include "t2c/sets.hpp"

namespace t2c {

/// A reduction witness: the composite x -> post(<x, G(pre(x))>) realizes
/// the reduced problem whenever G realizes the target problem. In strong
/// mode, post ignores the x half of the pairing.
struct WeihrauchReduction {
  PrefixTransformer pre;   // applied to the input
  PrefixTransformer post;  // applied to the pairing <input, solver output>
  bool strong = false;
};

/// Evaluate the reduction around a solver, fuel-synchronously. The solver
/// is an arbitrary prefix-level realizer; it may revise (the choice
/// problems have no continuous solutions), in which case the output
/// converges exactly when the solver does.
StreamName apply_reduction(const WeihrauchReduction& r, const PrefixTransformer& g_solver,
                           const StreamName& x);

/// A closed choice problem instance: a nonempty closed set given by
/// negative information, over the naturals (a growing rejection set) or
/// over Cantor space (a rejector-form closed set, i.e. a pruned tree).
struct ChoiceInstance {
  AdviceTag space = AdviceTag::Nat;
  /// Nat: naturals rejected by each stage; must grow monotonically.
  std::function<std::vector<std::size_t>(Fuel)> rejected_nats;
  /// Cantor: tree-form closed set (rejected cylinders prune the tree).
  ClosedSetName tree;
};

ChoiceInstance nat_choice_instance(std::function<std::vector<std::size_t>(Fuel)> rejected);
ChoiceInstance cantor_choice_instance(ClosedSetName tree);

/// The instance whose members are exactly the advice streams the process
/// never rejects on the given input.
ChoiceInstance process_choice_instance(std::shared_ptr<const GuessProcess> p, StreamName input,
                                       AdviceTag tag);

struct NatChoiceRun {
  RevisingOutput trace{Alphabet::Natural};
  std::size_t value = 0;  // candidate at the fuel cap
};

/// Finitely revising solver for choice over the naturals: emit the least
/// not-yet-rejected natural, resetting whenever the candidate is rejected.
/// On nonempty instances it converges to the least member.
NatChoiceRun c_nat_solver(const ChoiceInstance& inst, Fuel cap);

/// Solver for choice over Cantor space: stage t outputs the leftmost
/// length-min(t, depth_cap) node with no rejected prefix (shorter when the
/// pruned tree is exhausted). On infinite trees this converges pointwise
/// to the leftmost path.
StagedPrefix c_cantor_solver(const ChoiceInstance& inst, std::size_t depth_cap);

/// Stream coding of instances used by reductions: symbol t is a bitmask
/// (as one big natural) whose bit n records that natural n (or the node
/// with heap index n, for Cantor) is rejected by stage t. Nat masks cover
/// naturals <= t; Cantor masks cover nodes of length <= min(t, depth_cap).
StreamName nat_instance_stream(const ChoiceInstance& inst);
StreamName cantor_instance_stream(const ChoiceInstance& inst, std::size_t depth_cap);

/// The solvers as prefix-level realizers consuming the stream coding.
/// c_nat_realizer outputs the unary advice code 0^n 1 0... of the current
/// candidate; c_cantor_realizer outputs the current leftmost node. Both
/// revise while the instance information grows.
PrefixTransformer c_nat_realizer();
PrefixTransformer c_cantor_realizer(std::size_t depth_cap);

/// The canonical reduction of a guess-and-verify computation to closed
/// choice over its advice space (Nat or Cantor; other tags throw):
/// pre codes the instance of never-rejected advice, post replays the
/// process on the input with the chosen advice.
WeihrauchReduction ndtm_to_choice_reduction(std::shared_ptr<const GuessProcess> p, AdviceTag tag,
                                            std::size_t depth_cap = 10);

/// `stage <t>: reject <n>` lines for newly rejected naturals, sharing the
/// schedule format of Cantor trees.
void write_nat_rejections(std::ostream& out,
                          const std::function<std::vector<std::size_t>(Fuel)>& rejected,
                          Fuel depth);
std::function<std::vector<std::size_t>(Fuel)> parse_nat_rejections(std::istream& in);

}  // namespace t2c

#endif  // T2C_CHOICE_HPP
