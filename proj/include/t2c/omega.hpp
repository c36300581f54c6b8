#ifndef T2C_OMEGA_HPP
#define T2C_OMEGA_HPP

#include <functional>
#include <memory>
#include <vector>

#include "t2c/measurable.hpp"
#include "t2c/sets.hpp"

namespace t2c {

/// A point of the chain of upward-closed subsets of N, named by a staged
/// enumeration of its members. Enumerations only grow, and within their
/// probed bound they are upward closed (a contiguous range up to the
/// stage).
struct OmegaPlusOnePoint {
  std::function<std::vector<std::size_t>(Fuel)> members;
};

bool omega_member(const OmegaPlusOnePoint& a, std::size_t n, Fuel stage);

/// Wrap a raw member schedule, verifying at every probe that the
/// enumeration never shrinks and stays upward closed within its bound;
/// violating schedules throw std::runtime_error when probed.
OmegaPlusOnePoint omega_point_from_schedule(std::function<std::vector<std::size_t>(Fuel)> raw);

/// The max-parity rule applied stagewise to a sequence of naturals: with
/// running maximum m the tentative value is {i >= m+1} for even m and
/// {i >= m-1} for odd m; the emitted enumeration is the growing union of
/// the tentative values seen so far (revisions can only add members).
OmegaPlusOnePoint e_function(const StreamName& p);

// -- spaces -----------------------------------------------------------------

/// The chain embedded in the reals: the point with least member j sits at
/// 2^-j, the empty point at 0. Dense point j is 2^-j.
std::shared_ptr<const MetricSpaceDesc> omega_plus_one_space();
/// The point with least member j (a one-index fast-Cauchy name).
PointName omega_threshold_point(std::size_t j);

/// Sequences of naturals with the first-difference metric; dense points
/// are finitely supported words (zero-padded), coded by encode_integer_list.
std::shared_ptr<const MetricSpaceDesc> baire_space();
PointName baire_point(const StreamName& p);

/// The countably many opens of the chain that are unions of upward cones:
/// 0 names the empty set, 1 the whole space, 2 the set of nonempty points,
/// and 3+k the cone {A : k in A} (equivalently: least member <= k).
OpenSetName scott_open(std::size_t index);

/// The e-function as a preimage map: for an open U of the chain, decode
/// which least-member values U provably contains and name the preimage as
/// a simultaneous Sigma/Pi subset of the sequence space. Evidence is
/// cylinder-graded with capped stages, word lengths, and entry values;
/// genuinely unbounded inputs are beyond the finite-depth name and settle
/// to verdict 0.
Delta2FunctionName e_delta2_name();

}  // namespace t2c

#endif  // T2C_OMEGA_HPP
