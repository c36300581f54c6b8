#ifndef T2C_SPACE_HPP
#define T2C_SPACE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "t2c/rational.hpp"
#include "t2c/stream.hpp"

namespace t2c {

/// A computable metric space presented through a dense sequence indexed by
/// naturals: dist gives exact rational distances between dense points. A
/// fast-Cauchy name is a stream of indices p with d(x, a_{p(s)}) <= 2^-s.
struct MetricSpaceDesc {
  std::string name;
  std::function<Rational(const Integer&, const Integer&)> dist;
};

/// [0,1]: dense points are dyadics (decoded from the index, clamped).
std::shared_ptr<const MetricSpaceDesc> unit_interval_space();
/// {0,1}^N with d(p,q) = 2^-(first difference); dense points are finite
/// words padded with zeros.
std::shared_ptr<const MetricSpaceDesc> cantor_space();
/// Product [0,1]^N with d(x,y) = sum_i 2^-i-1 |x_i - y_i|; dense points are
/// finitely supported dyadic sequences.
std::shared_ptr<const MetricSpaceDesc> hilbert_cube_space();

/// Dense-point decoding helpers for the shipped spaces.
Rational interval_point(const Integer& index);
Integer interval_index(const Dyadic& d);
Prefix cantor_word(const Integer& index);
Integer cantor_word_index(const Prefix& word);
std::vector<Integer> decode_integer_list(const Integer& index);
Integer encode_integer_list(const std::vector<Integer>& list);

/// A point given by a name. Signed-digit and Cantor names carry their
/// space implicitly; fast-Cauchy names reference an explicit descriptor.
class PointName {
 public:
  enum class Kind { FastCauchy, SignedDigit, CantorPoint };

  static PointName fast_cauchy(std::shared_ptr<const MetricSpaceDesc> space, StreamName indices);
  static PointName signed_digit(StreamName digits);
  static PointName signed_digit(const Rational& x);  // exact point of [0,1]
  static PointName cantor(StreamName bits);

  Kind kind() const { return kind_; }
  const StreamName& stream() const { return stream_; }
  const std::shared_ptr<const MetricSpaceDesc>& space() const { return space_; }

  /// Dense index within 2^-s of the point, or nullopt while the name has
  /// not yet produced enough symbols.
  std::optional<Integer> approx_index(Fuel s) const;

 private:
  Kind kind_ = Kind::SignedDigit;
  std::shared_ptr<const MetricSpaceDesc> space_;
  StreamName stream_;
};

/// Probe the fast-Cauchy coherence d(a_{p(s)}, a_{p(t)}) <= 2^-s + 2^-t on
/// all pairs s, t <= depth.
MonotoneReport check_fast_cauchy(const PointName& x, Fuel depth);

/// Isometric-up-to-distortion embedding into the Hilbert cube: coordinate
/// i of the image is min(1, d(x, a_i)).
PointName embed_hilbert(const PointName& x);

}  // namespace t2c

#endif  // T2C_SPACE_HPP
