#ifndef T2C_RATIONAL_HPP
#define T2C_RATIONAL_HPP

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "t2c/prefix.hpp"

namespace t2c {

/// All ball/verdict comparisons use exact rational arithmetic.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// 2^e for any integer e.
Rational pow2(int e);

/// num / 2^exp, the grid all dense-point indices and consensus outputs
/// refer to.
struct Dyadic {
  Integer num;
  int exp = 0;
  Rational value() const { return Rational(num) / Rational(pow2(exp)); }
};

/// Cantor pairing on big naturals; used to code dyadics as single symbols.
Symbol pair_symbol(const Integer& a, const Integer& b);
std::pair<Integer, Integer> unpair_symbol(const Symbol& s);

Symbol encode_dyadic(const Dyadic& d);
Dyadic decode_dyadic(const Symbol& s);

/// Floor of n/d for d > 0.
Integer floor_div(const Integer& n, const Integer& d);
/// Nearest grid point num/2^exp to x.
Dyadic round_to_dyadic(const Rational& x, int exp);

/// Signed-digit streams carry digits {-1, 0, 1} as symbols {0, 1, 2}.
/// A prefix w of length n determines the interval value(w) +- 2^-n, with
/// value(w) = sum_i digit_i 2^-(i+1).
int signed_digit_of_symbol(const Symbol& s);
Symbol symbol_of_signed_digit(int d);
Rational signed_digit_value(const Prefix& w);

/// Greedy signed-digit expansion of x in [0,1], length `len`.
Prefix signed_digit_prefix(const Rational& x, std::size_t len);

/// Binary coding of signed-digit streams for Cantor-space advice:
/// -1 -> 00, 0 -> 01, 1 -> 11. The block 10 is not a digit; decoding stops
/// there and reports the prefix invalid.
Prefix signed_digits_to_bits(const Prefix& digits);
struct DecodedDigits {
  Prefix digits;      // complete decoded digit blocks
  bool invalid = false;  // a 10 block was seen
};
DecodedDigits bits_to_signed_digits(const Prefix& bits);

/// Parse "3/4" or "0.75" into an exact rational.
Rational parse_rational(const std::string& s);

}  // namespace t2c

#endif  // T2C_RATIONAL_HPP
