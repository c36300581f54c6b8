#ifndef T2C_STREAM_HPP
#define T2C_STREAM_HPP

#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "t2c/prefix.hpp"

namespace t2c {

/// A name of an infinite sequence: fuel-indexed finite approximations.
/// at(f) is an initial segment of at(f') whenever f <= f', and the length
/// of at(f) is unbounded in f for productive names.
class StreamName {
 public:
  StreamName() = default;

  /// Name whose fuel-f approximation consists of symbols 0..f-1, each
  /// computed independently of fuel. Monotone by construction.
  static StreamName pointwise(Alphabet a, std::function<Symbol(std::size_t)> symbol_at);

  /// Eventually-repeating name: `head` followed by `cycle` forever.
  static StreamName periodic(const Prefix& head, const Prefix& cycle);
  static StreamName constant(Alphabet a, const Symbol& s);

  /// Wrap an arbitrary stage function. The caller guarantees monotonicity;
  /// check_stream_monotone probes it.
  static StreamName from_stages(Alphabet a, std::function<Prefix(Fuel)> at);

  Alphabet alphabet() const { return alphabet_; }
  Prefix at(Fuel fuel) const;

 private:
  Alphabet alphabet_ = Alphabet::Binary;
  std::function<Prefix(Fuel)> at_;
};

/// Stage-indexed approximations without the initial-segment law: a stage
/// may revise earlier positions. On convergent instances every position is
/// eventually constant, giving a limit sequence.
struct StagedPrefix {
  Alphabet alphabet = Alphabet::Binary;
  std::function<Prefix(Fuel)> at_stage;
  Prefix at(Fuel stage) const { return at_stage ? at_stage(stage) : Prefix(alphabet); }
};

/// A monotone, consistent map on finite prefixes: the finite-stage view of
/// a continuous function between sequence spaces (a realizer).
class PrefixTransformer {
 public:
  PrefixTransformer() = default;
  PrefixTransformer(Alphabet in, Alphabet out, std::function<Prefix(const Prefix&, Fuel)> apply)
      : in_(in), out_(out), apply_(std::move(apply)) {}

  static PrefixTransformer identity(Alphabet a);
  /// Apply `f` to every symbol. Monotone for any symbol map.
  static PrefixTransformer symbol_map(Alphabet in, Alphabet out, std::function<Symbol(const Symbol&)> f);

  Alphabet input_alphabet() const { return in_; }
  Alphabet output_alphabet() const { return out_; }
  Prefix apply(const Prefix& input, Fuel fuel) const;

 private:
  Alphabet in_ = Alphabet::Binary;
  Alphabet out_ = Alphabet::Binary;
  std::function<Prefix(const Prefix&, Fuel)> apply_;
};

/// t2 after t1, both on the shared fuel budget.
PrefixTransformer compose(const PrefixTransformer& t1, const PrefixTransformer& t2);

/// Feed a stream through a transformer, fuel-synchronously.
StreamName transform(const PrefixTransformer& t, const StreamName& s);

/// Symbol-interleaved pairing <p,q>: even positions from p, odd from q.
StreamName pair_encode(const StreamName& p, const StreamName& q);
Prefix pair_encode_prefix(const Prefix& p, const Prefix& q);
std::pair<StreamName, StreamName> pair_decode(const StreamName& s);
std::pair<Prefix, Prefix> pair_decode_prefix(const Prefix& s);

/// Cantor pairing code(i, j) and its inverse.
std::size_t cantor_pair(std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t k);

/// Interleave a countable family along the Cantor pairing: position
/// cantor_pair(i, j) of the result carries symbol j of component i.
StreamName tuple_encode(Alphabet a, std::function<StreamName(std::size_t)> family);
StreamName tuple_component(const StreamName& s, std::size_t i);

/// One violation of the transformer contract found by probing.
struct MonotoneViolation {
  std::string what;
  Prefix input_a;
  Prefix input_b;
  Fuel fuel_a = 0;
  Fuel fuel_b = 0;
};

struct MonotoneReport {
  std::vector<MonotoneViolation> violations;
  std::size_t probes = 0;
  bool ok() const { return violations.empty(); }
};

/// Probe extension-monotonicity and consistency of `t` on the sampled
/// prefixes, their truncations, and fuels up to `depth`.
MonotoneReport check_monotone(const PrefixTransformer& t, const std::vector<Prefix>& samples,
                              Fuel depth);

/// Probe the initial-segment law of a stream name for fuels up to `depth`.
MonotoneReport check_stream_monotone(const StreamName& s, Fuel depth);

/// Serialize a probe of a stream name as `stage <n>: <symbols>` lines.
void write_staged_log(std::ostream& out, const StreamName& s, Fuel depth);

}  // namespace t2c

#endif  // T2C_STREAM_HPP
