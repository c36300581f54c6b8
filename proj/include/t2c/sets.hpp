#ifndef T2C_SETS_HPP
#define T2C_SETS_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "t2c/space.hpp"

namespace t2c {

/// Basic open of a computable metric space: the open ball around a dense
/// point.
struct Ball {
  Integer center;
  Rational radius;  // > 0
};

/// Positive information: a monotonically growing enumeration of balls whose
/// union is the set. The optional exterior hint is an open subset of the
/// complement, used only by consistency diagnostics.
struct OpenSetName {
  std::shared_ptr<const MetricSpaceDesc> space;
  std::function<std::vector<Ball>(Fuel)> enumerate;
  std::shared_ptr<const OpenSetName> exterior_hint;
};

/// Negative information: a ball enumeration of the complement. Closed
/// subsets of Cantor space may instead (or additionally) carry a rejector:
/// rejected(w, fuel) semidecides that the cylinder [w] misses the set,
/// monotone in fuel and inherited by extensions of w. The optional
/// membership hint is an open subset of the set, for diagnostics.
struct ClosedSetName {
  std::shared_ptr<const MetricSpaceDesc> space;
  std::function<std::vector<Ball>(Fuel)> co_enumerate;
  std::function<bool(const Prefix&, Fuel)> rejected;
  std::shared_ptr<const OpenSetName> membership_hint;
};

/// Closed name plus finite covers: covers(s) is a finite list of radius
/// 2^-s balls covering the set.
struct CompactSetName {
  ClosedSetName closed;
  std::function<std::vector<Ball>(Fuel)> covers;
};

/// A set given simultaneously as a union of closed sets and an
/// intersection of open sets. Finite vectors denote eventually-constant
/// sequences: indices past the end read the last entry.
struct Delta2SetName {
  std::vector<ClosedSetName> closed_seq;
  std::vector<OpenSetName> open_seq;

  const ClosedSetName& closed(std::size_t i) const;
  const OpenSetName& open(std::size_t i) const;
};

/// All semidecisions stop refining below this dyadic scale; verdicts stay
/// permanent, but separations finer than 2^-kPrecisionCap are never
/// established.
constexpr Fuel kPrecisionCap = 64;

// -- constructors ------------------------------------------------------

OpenSetName open_from_balls(std::shared_ptr<const MetricSpaceDesc> space, std::vector<Ball> balls);
OpenSetName whole_space_open(std::shared_ptr<const MetricSpaceDesc> space);
OpenSetName empty_open(std::shared_ptr<const MetricSpaceDesc> space);
/// [0, b) and (a, 1] as opens of the unit interval.
OpenSetName interval_lower_open(const Rational& b);
OpenSetName interval_upper_open(const Rational& a);

/// The complement of an open set, as a closed name (shared enumeration).
ClosedSetName complement_closed(const OpenSetName& u);
ClosedSetName whole_space_closed(std::shared_ptr<const MetricSpaceDesc> space);
ClosedSetName cantor_closed_from_rejector(std::function<bool(const Prefix&, Fuel)> rejected);

// -- membership semidecisions ------------------------------------------

/// YES iff some enumerated ball provably contains x at this fuel
/// (d(center, approx) + 2^-s < radius for some probed precision s).
bool member_open(const OpenSetName& u, const PointName& x, Fuel fuel);
/// OUT iff the co-enumeration (or the rejector, for Cantor points)
/// provably captures x.
bool member_out_closed(const ClosedSetName& a, const PointName& x, Fuel fuel);

// -- singletons and compacts -------------------------------------------

ClosedSetName singleton_closed(const PointName& x);
/// The same ball enumeration read as the open complement of {x}.
OpenSetName singleton_complement_open(const PointName& x);
CompactSetName singleton_compact(const PointName& x);

/// j-th closed set: union of the closures of the first j enumerated
/// balls, radii shrunk by 2^-j (dropped when non-positive). The union over
/// j recovers U.
std::function<ClosedSetName(std::size_t)> open_as_closed_union(const OpenSetName& u);

CompactSetName compact_intersect_closed(const CompactSetName& k, const ClosedSetName& a);
/// EMPTY iff some probed covers(s) is the empty list; permanent.
bool is_empty_compact(const CompactSetName& k, Fuel fuel);
/// Image of a unit-interval compact under a signed-digit transformer:
/// covers obtained by pushing digit prefixes compatible with the input
/// cover through f.
CompactSetName compact_image(const CompactSetName& k, const PrefixTransformer& f);
/// For one-point compacts: the point, read off the covers.
PointName point_from_compact_singleton(const CompactSetName& k);

/// Push a closed subset of Cantor space forward through a proper
/// representation of the target (signed-digit unit interval, or Cantor
/// identity): co-enumerates balls whose representation fiber provably
/// misses the set.
ClosedSetName closed_image_under_representation(const ClosedSetName& a,
                                                std::shared_ptr<const MetricSpaceDesc> target);

/// Pull an open subset of the Hilbert cube back along embed_hilbert.
OpenSetName restrict_open(const OpenSetName& hilbert_open,
                          std::shared_ptr<const MetricSpaceDesc> domain);

// -- limit decisions ----------------------------------------------------

/// Stage-t verdict: 1 iff the least A-index not yet refuted is <= the
/// least U-index not yet confirmed; converges to true membership for
/// consistent names.
int delta2_verdict_bit(const Delta2SetName& d, const PointName& x, Fuel stage);
StagedPrefix delta2_verdict(const Delta2SetName& d, const PointName& x);

struct StabilizedVerdict {
  int bit = 0;
  Fuel settled_stage = 0;  // last probed stage where the verdict inputs moved
  int changes = 0;         // verdict flips observed across probed stages
};
/// Probe the verdict on a geometric stage ladder up to cap. Between probed
/// stages the verdict cannot flip unseen: both underlying indices are
/// monotone, so equality at consecutive probes pins the bit in between.
StabilizedVerdict delta2_stabilized(const Delta2SetName& d, const PointName& x, Fuel cap);

struct ConsistencyReport {
  struct Finding {
    std::size_t sample;
    std::string what;
  };
  std::vector<Finding> contradictions;  // provably in an A_i and out of a U_j
  std::vector<Finding> suspicious;      // refuted everywhere yet confirmed everywhere
  bool ok() const { return contradictions.empty(); }
};
ConsistencyReport delta2_consistency_check(const Delta2SetName& d,
                                           const std::vector<PointName>& samples, Fuel depth);

// -- serialization ------------------------------------------------------

/// `stage <t>: (center, num/den) ...` lines, one per stage up to depth.
void write_staged_balls(std::ostream& out, const std::function<std::vector<Ball>(Fuel)>& f,
                        Fuel depth);
/// Inverse of write_staged_balls; stages beyond the last read stay fixed.
std::function<std::vector<Ball>(Fuel)> parse_staged_balls(std::istream& in);

/// `stage <t>: reject <node>` lines for newly rejected nodes up to the
/// given length.
void write_rejection_schedule(std::ostream& out,
                              const std::function<bool(const Prefix&, Fuel)>& rejected,
                              Fuel depth, std::size_t max_len);
std::function<bool(const Prefix&, Fuel)> parse_rejection_schedule(std::istream& in);

}  // namespace t2c

#endif  // T2C_SETS_HPP
