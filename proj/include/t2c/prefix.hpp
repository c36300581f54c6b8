#ifndef T2C_PREFIX_HPP
#define T2C_PREFIX_HPP

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace t2c {

/// Stage/step budget. Every operation in the library is a deterministic
/// function of (inputs, fuel).
using Fuel = std::int64_t;

/// Tape/stream symbols. Natural-alphabet symbols are unbounded integers;
/// binary streams use only 0 and 1.
using Symbol = boost::multiprecision::cpp_int;

enum class Alphabet { Binary, Natural };

struct BadSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finite approximation of an infinite sequence, ordered by extension.
class Prefix {
 public:
  Prefix() : alphabet_(Alphabet::Binary) {}
  explicit Prefix(Alphabet a) : alphabet_(a) {}
  Prefix(Alphabet a, std::vector<Symbol> symbols);
  Prefix(Alphabet a, std::initializer_list<int> symbols);

  /// Binary prefix from a string of '0'/'1' characters.
  static Prefix bits(const std::string& s);

  Alphabet alphabet() const { return alphabet_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const Symbol& at(std::size_t i) const { return symbols_.at(i); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  void push_back(const Symbol& s);
  Prefix take(std::size_t n) const;
  Prefix drop(std::size_t n) const;

  /// Initial-segment partial order.
  bool extends(const Prefix& other) const;
  /// Two prefixes are compatible when one extends the other.
  bool compatible(const Prefix& other) const;
  /// Concatenation.
  Prefix operator+(const Prefix& tail) const;

  bool operator==(const Prefix& other) const {
    return alphabet_ == other.alphabet_ && symbols_ == other.symbols_;
  }
  bool operator!=(const Prefix& other) const { return !(*this == other); }

  /// Render as "0110" for binary, "3,1,4" for natural alphabets.
  std::string str() const;

 private:
  void check_symbol(const Symbol& s) const;

  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

}  // namespace t2c

#endif  // T2C_PREFIX_HPP
