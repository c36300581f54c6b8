#ifndef T2C_LOWJUMP_HPP
#define T2C_LOWJUMP_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "t2c/sets.hpp"

namespace t2c {

/// A total assignment of open subsets of Cantor space to natural indices;
/// the jump relative to it asks "is p in U_i?" positionwise.
struct OpenEnumeration {
  std::function<OpenSetName(std::size_t)> set;
};

/// Stage-indexed finite approximations that may revise any position an
/// unbounded number of times; on convergent instances every position is
/// eventually constant and the limit is the named sequence.
struct LimitName {
  Alphabet alphabet = Alphabet::Binary;
  std::function<Prefix(Fuel)> approx;
  Prefix at(Fuel stage) const { return approx ? approx(stage) : Prefix(alphabet); }
};

/// Stage approximation of the jump bit J(p)(i) relative to the
/// enumeration: 0 until membership of p in U_i is confirmed at this stage,
/// then 1 forever (membership confirmations are permanent).
int jump_approx(const StreamName& p, const OpenEnumeration& en, std::size_t i, Fuel stage);

/// All jump bits at once: position i of the stage-t approximation is
/// jump_approx(p, en, i, t) for i < t. Monotone 0 -> 1 per position.
LimitName jump_limit_name(const StreamName& p, const OpenEnumeration& en);

/// Limit name of the jump of f(p), computed from a preimage table
/// table(n) naming f^{-1}(U_n) as a simultaneous Sigma/Pi set: position n
/// of the stage-t approximation is the stage-t limit-decision verdict of
/// table(n) at p, all positions in parallel.
LimitName low_name_from_markov(std::function<Delta2SetName(std::size_t)> table,
                               const StreamName& p);

/// The converse direction: from a procedure that limit-computes the jump
/// of f(p) positionwise, recover f^{-1}(U_n) as a simultaneous Sigma/Pi
/// name. Sigma side: C_t = points whose approximation at position n stays
/// 1 from stage t on, co-enumerated by observing a 0 at some stage >= t;
/// Pi side: W_t = points showing a 1 at some stage >= t, enumerated by
/// cylinders on which that observation is decided.
///
/// Contract on lowrun: its stage-t approximation reads at most t+1 input
/// symbols, so cylinder-level observations are valid for every extension.
Delta2SetName markov_from_low(std::function<LimitName(const StreamName&)> lowrun, std::size_t n);

/// Finite-depth comparison of a candidate limit sequence (p_j)_j against
/// the jump of q: per position, the last observed value, the stage-depth
/// jump bit, and any decided disagreement (a confirmed jump bit 1 against
/// a stabilized 0).
struct LInstanceReport {
  struct Finding {
    std::size_t position;
    std::string what;
  };
  std::vector<int> limit_bits;  // last observed value per position, -1 unseen
  std::vector<int> jump_bits;   // stage-`depth` jump approximation of q
  std::vector<Finding> counterexamples;
  std::vector<Finding> unstable;  // revisions still occurring in the last half
  bool ok() const { return counterexamples.empty(); }
};
LInstanceReport check_l_instance(const std::function<StreamName(std::size_t)>& ps,
                                 const StreamName& q, const OpenEnumeration& en, Fuel depth);

// -- shipped instances ----------------------------------------------------

/// Word listing every finite binary word once: index n yields the binary
/// expansion of n+1 with its leading 1 removed (0 -> empty word).
Prefix cylinder_word(std::size_t n);

/// U_n = the cylinder of cylinder_word(n); U_0 is the whole space.
OpenEnumeration cylinder_enumeration();

/// A finite union of cylinders, renamed as a simultaneous Sigma/Pi set
/// (cylinders are closed and open at once).
Delta2SetName clopen_cantor_delta2(const OpenSetName& u);

/// Preimage tables of the shipped functions relative to an enumeration:
/// the identity, bitwise negation, and the constant all-zero map.
std::function<Delta2SetName(std::size_t)> identity_jump_table(const OpenEnumeration& en);
std::function<Delta2SetName(std::size_t)> negation_jump_table(const OpenEnumeration& en);
std::function<Delta2SetName(std::size_t)> constant_zero_jump_table(const OpenEnumeration& en);

// -- serialization ----------------------------------------------------------

/// `n: <word> <word> ...` lines (cylinder lists; `e` is the empty word).
void write_open_enumeration(std::ostream& out, const OpenEnumeration& en, std::size_t count,
                            Fuel fuel);
/// Inverse of write_open_enumeration; unlisted indices name empty sets.
OpenEnumeration parse_open_enumeration(std::istream& in);

}  // namespace t2c

#endif  // T2C_LOWJUMP_HPP
