#ifndef T2C_MEASURABLE_HPP
#define T2C_MEASURABLE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "t2c/ndtm.hpp"
#include "t2c/sets.hpp"

namespace t2c {

/// A function named through its preimage map: `inverse` sends any open
/// subset of the codomain to a simultaneous Sigma/Pi presentation of its
/// preimage. The optional oracle gives exact values on [0,1] and is used
/// by tests only, never by the translations.
struct Delta2FunctionName {
  std::shared_ptr<const MetricSpaceDesc> domain;
  std::shared_ptr<const MetricSpaceDesc> codomain;
  std::function<Delta2SetName(const OpenSetName&)> inverse;
  std::function<Rational(const Rational&)> oracle;
};

/// One piece of a countable closed cover, with a realizer continuous on
/// names of its members. Name conventions: unit-interval inputs are
/// signed-digit streams, unit-interval outputs are dyadic-code fast-Cauchy
/// streams (position s within 2^-s); Cantor inputs/outputs are bit streams.
struct Piece {
  ClosedSetName set;
  PrefixTransformer realizer;
};

struct PiecewiseName {
  std::shared_ptr<const MetricSpaceDesc> domain;
  std::shared_ptr<const MetricSpaceDesc> codomain;
  std::function<Piece(std::size_t)> piece;
};

struct FunctionEval {
  RevisingOutput trace{Alphabet::Natural};
  std::size_t final_index = 0;  // settled guess index / settled piece
  std::vector<std::string> diagnostics;
};

/// Guess-and-verify evaluator: a guess (y, n) claims y names f(x) and that
/// membership of x in the guess's preimage complement shows up within the
/// first n+1 opens of the Pi side. The guess is rejected once x is
/// confirmed inside opens 0..n of f.inverse(complement of the hull of y);
/// the combined executor turns the surviving guesses into a finitely
/// revising dyadic-code name of f(x). Domain and codomain must be the unit
/// interval.
FunctionEval eval_delta2(const Delta2FunctionName& f, const PointName& x, Fuel cap,
                         std::size_t depth_cap = 30);

/// The verifier behind eval_delta2 (advice layout 0^n 1 (bit-coded y)),
/// exposed so schedules can be recomputed through the surviving tree.
std::shared_ptr<const GuessProcess> delta2_eval_process(const Delta2FunctionName& f);

/// Stage-by-stage outer candidate of eval_delta2, recomputed from the
/// surviving tree alone; the trace's reset count must equal the number of
/// candidate changes after the first stage.
std::vector<std::size_t> simulate_outer_schedule(const Delta2FunctionName& f, const PointName& x,
                                                 Fuel cap, std::size_t depth_cap = 30);

/// Piece (n, q) (Cantor-pairing order) collects the points on which the
/// guess region q with patience n is never rejected; its realizer replays
/// the consensus of the surviving guesses inside that region.
PiecewiseName delta2_to_piecewise(const Delta2FunctionName& f);

/// Sigma side: closed sets A_i intersected with closed inner pieces of the
/// ambient preimage opens U_i; Pi side: opens (complement of A_i) union
/// U_i. Unit-interval domain only.
Delta2FunctionName piecewise_to_delta2(const PiecewiseName& g);

/// Candidate piece = least not-yet-refuted index; emits the candidate's
/// realizer output and resets on refutation.
FunctionEval eval_piecewise(const PiecewiseName& g, const PointName& x, Fuel cap);

/// Preimage of v under a realizer, as an ambient open of [0,1]: dyadic
/// cells whose image provably lands inside v, refined adaptively along the
/// uncertain frontier. Ball lists grow monotonically with fuel.
OpenSetName pushforward_preimage_open(const PrefixTransformer& realizer, const OpenSetName& v);

/// j-th closed inner approximation of an open set of [0,1]: union of the
/// closures of a deterministic j-indexed prefix of its ball enumeration,
/// with radii scaled by 3/4. The union over all j recovers u for
/// cell-based enumerations.
ClosedSetName inner_closed_union(const OpenSetName& u, std::size_t j);

/// [a, b] as a closed subset of [0,1].
ClosedSetName closed_interval(const Rational& a, const Rational& b);

/// Value pinned by a dyadic-code output prefix (its last, finest code);
/// nullopt for an empty prefix.
std::optional<Rational> code_value(const Prefix& codes);

/// Realizers for the shipped pieces: a constant, and the signed-digit to
/// dyadic-code converter (the identity on points).
PrefixTransformer constant_code_realizer(const Rational& c);
PrefixTransformer digit_to_code_realizer();

// -- shipped functions ---------------------------------------------------

/// Indicator of [1/2, 1]: cover {[1/2,1]} then {[0, 1/2 - 2^-i]}.
PiecewiseName step_piecewise();
/// Three plateaus: 0 on [0,1/3), 1/2 on [1/3,2/3), 1 on [2/3,1].
PiecewiseName staircase_piecewise();
PiecewiseName identity_piecewise();
PiecewiseName constant_piecewise(const Rational& c);
PiecewiseName identity_cantor_piecewise();

Delta2FunctionName step_delta2();
Delta2FunctionName staircase_delta2();
Delta2FunctionName identity_delta2();
Delta2FunctionName constant_delta2(const Rational& c);
/// Identity on Cantor space, with the direct preimage map (cylinders are
/// clopen, so U itself serves both sides).
Delta2FunctionName identity_cantor_delta2();

}  // namespace t2c

#endif  // T2C_MEASURABLE_HPP
