#ifndef T2C_NDTM_HPP
#define T2C_NDTM_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "t2c/machine.hpp"
#include "t2c/rational.hpp"
#include "t2c/stream.hpp"

namespace t2c {

enum class AdviceTag { Nat, Cantor, NatTimesCantor, Baire };

struct AdviceSpace {
  AdviceTag tag = AdviceTag::Cantor;
};

/// Finite-stage probe of a guess-and-verify computation: run the verifier
/// on finite input/advice prefixes for a step budget. Halting rejects the
/// whole advice cylinder; rejection must therefore be inherited by every
/// extension of the advice prefix, which holds automatically for literal
/// machines (a halted run read nothing further).
class GuessProcess {
 public:
  virtual ~GuessProcess() = default;
  virtual Alphabet advice_alphabet() const { return Alphabet::Binary; }
  virtual RunOutcome probe(const Prefix& input, const Prefix& advice, Fuel fuel) const = 0;
};

/// A literal machine together with its advice space.
class Ndtm : public GuessProcess {
 public:
  Ndtm(TypeTwoMachine machine, AdviceSpace advice)
      : machine_(std::move(machine)), advice_(advice) {}

  const TypeTwoMachine& machine() const { return machine_; }
  AdviceSpace advice() const { return advice_; }
  RunOutcome probe(const Prefix& input, const Prefix& advice, Fuel fuel) const override {
    return run(machine_, input, advice, fuel);
  }

 private:
  TypeTwoMachine machine_;
  AdviceSpace advice_;
};

/// Unary code of n on a binary advice tape: 0^n 1 0^..., truncated to `len`.
Prefix nat_code_prefix(std::size_t n, Fuel len);
/// Combined advice 0^n 1 followed by the Cantor component.
Prefix nat_cantor_code(std::size_t n, const Prefix& cantor_part);

/// An output stream with explicit full resets. Between resets, emissions
/// extend the current value; a reset discards it.
class RevisingOutput {
 public:
  struct Event {
    Fuel stage;
    bool reset;
    Prefix emitted;  // appended symbols; empty for resets
  };

  explicit RevisingOutput(Alphabet a = Alphabet::Binary) : alphabet_(a) {}

  void emit(Fuel stage, const Prefix& delta);
  void reset(Fuel stage);

  Alphabet alphabet() const { return alphabet_; }
  const std::vector<Event>& events() const { return events_; }
  int reset_count() const;
  Fuel last_reset_stage() const;  // -1 if never reset
  /// Current value: concatenation of emissions since the last reset.
  Prefix value() const;

 private:
  Alphabet alphabet_;
  std::vector<Event> events_;
};

/// Unrejected advice prefixes, stage by stage. Rejection of a node is
/// permanent and inherited by extensions; survivors at a level always have
/// surviving ancestors.
class SurvivingTree {
 public:
  SurvivingTree(std::shared_ptr<const GuessProcess> process, StreamName input);

  /// Has the advice cylinder `node` been rejected by stage `stage`?
  bool rejected(const Prefix& node, Fuel stage) const;
  /// The (memoized) probe behind `rejected`, for callers that also need
  /// the branch's output.
  RunOutcome probe_node(const Prefix& node, Fuel stage) const;
  /// Unrejected nodes of length exactly `len` at the given stage.
  std::vector<Prefix> survivors_at(Fuel stage, std::size_t len) const;
  /// Unrejected extensions of `root` by exactly `len` further symbols.
  std::vector<Prefix> survivors_below(const Prefix& root, Fuel stage, std::size_t len) const;
  bool has_survivor_below(const Prefix& root, Fuel stage, std::size_t len) const;
  /// All unrejected nodes of length <= fuel (the stage-`fuel` tree level).
  std::vector<Prefix> level(Fuel fuel) const;
  /// Leftmost unrejected node of length `len` (shorter if none reaches it).
  Prefix leftmost(Fuel stage, std::size_t len) const;

 private:
  std::shared_ptr<const GuessProcess> process_;
  StreamName input_;
  struct Memo {
    Fuel probed_fuel = -1;
    std::optional<Fuel> halt_step;
    RunOutcome outcome;  // from the deepest probe; stable once halted
  };
  mutable std::map<std::string, Memo> memo_;
  mutable std::mutex mutex_;
};

struct NatExecution {
  RevisingOutput trace{Alphabet::Binary};
  std::size_t final_candidate = 0;
  /// Naturals <= cap not rejected at the fuel cap.
  std::vector<std::size_t> survivors;
};

/// Dovetail advice 0,1,2,...; at each stage emit the output of the least
/// surviving advice, with a Reset whenever the candidate advances. Under
/// the promise (some n is never rejected) the trace converges with
/// finitely many resets; a broken promise shows up as resets that never
/// stop within the budget.
NatExecution execute_nat_advice(const GuessProcess& p, const StreamName& input, Fuel cap);

/// Interprets a branch's raw output as an interval of possible limits;
/// nullopt when the output determines nothing yet.
using OutputGauge =
    std::function<std::optional<std::pair<Rational, Rational>>(const Prefix& output)>;

/// Gauge for outputs that are signed-digit streams.
OutputGauge signed_digit_gauge();
/// Gauge reading binary outputs as binary expansions in [0,1].
OutputGauge binary_expansion_gauge();

struct ConsensusExecution {
  /// Natural-alphabet trace of dyadic codes; position s is emitted only
  /// once every surviving branch pins the value to within 2^-s, so the
  /// trace never resets.
  RevisingOutput trace{Alphabet::Natural};
  std::size_t survivor_count_at_cap = 0;
};

ConsensusExecution execute_cantor_consensus(const GuessProcess& p, const StreamName& input,
                                            const OutputGauge& gauge, Fuel cap,
                                            std::size_t depth_cap);

/// Stage-t leftmost surviving advice prefix; converges pointwise to the
/// leftmost accepted guess by compactness.
StagedPrefix execute_cantor_leftmost(std::shared_ptr<const GuessProcess> p, StreamName input,
                                     std::size_t depth_cap);

struct NatCantorExecution {
  RevisingOutput trace{Alphabet::Natural};
  std::size_t final_outer = 0;
};

/// Outer finitely-revising loop over the natural component, inner
/// consensus over the Cantor component. Advice layout: 0^n 1 y.
NatCantorExecution execute_nat_cantor_advice(const GuessProcess& p, const StreamName& input,
                                             const OutputGauge& gauge, Fuel cap,
                                             std::size_t depth_cap);

struct BaireSurvivorReport {
  std::vector<Prefix> survivors;  // natural-alphabet tuples of length depth
  std::size_t depth = 0;
  int bound = 0;
  Fuel fuel = 0;
};

/// Demo-only executor: explores natural-advice tuples with entries < bound
/// to the given depth. Baire advice is not eliminable, so there is no
/// convergence contract, only the survivor report.
BaireSurvivorReport execute_baire_advice_bounded(const GuessProcess& p, const StreamName& input,
                                                 int bound, Fuel cap, std::size_t depth_cap);

/// Verifier for runtime-bound guessing over a finite list of toy machines:
/// advice symbol 0 asserts machine i never halts, m >= 1 asserts it halts
/// within m steps; a wrong assertion is detected at the allotted time.
class HaltingBoundProcess : public GuessProcess {
 public:
  explicit HaltingBoundProcess(std::vector<std::optional<Fuel>> halting_steps)
      : halting_steps_(std::move(halting_steps)) {}
  Alphabet advice_alphabet() const override { return Alphabet::Natural; }
  RunOutcome probe(const Prefix& input, const Prefix& advice, Fuel fuel) const override;

 private:
  std::vector<std::optional<Fuel>> halting_steps_;
};

/// `stage <t> | survivors <count> | output <prefix>` lines for a Cantor run;
/// the output column shows the leftmost survivor's raw output.
void write_cantor_trace(std::ostream& out, const SurvivingTree& tree, Fuel cap,
                        std::size_t depth_cap);

}  // namespace t2c

#endif  // T2C_NDTM_HPP
