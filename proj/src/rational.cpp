#include "t2c/rational.hpp"

#include <stdexcept>

namespace t2c {

Rational pow2(int e) {
  Integer big = Integer(1) << (e < 0 ? -e : e);
  return e >= 0 ? Rational(big) : Rational(1, big);
}

Symbol pair_symbol(const Integer& a, const Integer& b) {
  Integer s = a + b;
  return s * (s + 1) / 2 + a;
}

std::pair<Integer, Integer> unpair_symbol(const Symbol& s) {
  Integer k = s;
  // Largest t with t(t+1)/2 <= k, by integer sqrt refinement.
  Integer t = boost::multiprecision::sqrt(Integer(2) * k);
  while (t * (t + 1) / 2 > k) --t;
  while ((t + 1) * (t + 2) / 2 <= k) ++t;
  Integer a = k - t * (t + 1) / 2;
  return {a, t - a};
}

Symbol encode_dyadic(const Dyadic& d) { return pair_symbol(d.num, Integer(d.exp)); }

Dyadic decode_dyadic(const Symbol& s) {
  auto [num, exp] = unpair_symbol(s);
  return Dyadic{num, static_cast<int>(exp)};
}

Integer floor_div(const Integer& n, const Integer& d) {
  Integer q = n / d;
  if (n % d != 0 && (n < 0) != (d < 0)) --q;
  return q;
}

Dyadic round_to_dyadic(const Rational& x, int exp) {
  Rational scaled = x * pow2(exp) + Rational(1, 2);
  Integer num = floor_div(numerator(scaled), denominator(scaled));
  return Dyadic{num, exp};
}

int signed_digit_of_symbol(const Symbol& s) {
  if (s < 0 || s > 2) throw BadSymbol("signed digit symbol out of range");
  return static_cast<int>(s) - 1;
}

Symbol symbol_of_signed_digit(int d) {
  if (d < -1 || d > 1) throw BadSymbol("signed digit out of range");
  return Symbol(d + 1);
}

Rational signed_digit_value(const Prefix& w) {
  Rational v = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    v += Rational(signed_digit_of_symbol(w.at(i))) * pow2(-static_cast<int>(i) - 1);
  return v;
}

Prefix signed_digit_prefix(const Rational& x, std::size_t len) {
  if (x < 0 || x > 1) throw std::invalid_argument("signed_digit_prefix expects x in [0,1]");
  Prefix out(Alphabet::Natural);
  Rational r = x;  // invariant: remaining value in [-1, 1]
  for (std::size_t i = 0; i < len; ++i) {
    int d = r >= Rational(1, 2) ? 1 : (r <= Rational(-1, 2) ? -1 : 0);
    out.push_back(symbol_of_signed_digit(d));
    r = 2 * r - d;
  }
  return out;
}

Prefix signed_digits_to_bits(const Prefix& digits) {
  Prefix out(Alphabet::Binary);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    switch (signed_digit_of_symbol(digits.at(i))) {
      case -1: out.push_back(0); out.push_back(0); break;
      case 0: out.push_back(0); out.push_back(1); break;
      case 1: out.push_back(1); out.push_back(1); break;
    }
  }
  return out;
}

DecodedDigits bits_to_signed_digits(const Prefix& bits) {
  DecodedDigits out;
  out.digits = Prefix(Alphabet::Natural);
  for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
    int hi = static_cast<int>(bits.at(i));
    int lo = static_cast<int>(bits.at(i + 1));
    if (hi == 0 && lo == 0) out.digits.push_back(symbol_of_signed_digit(-1));
    else if (hi == 0 && lo == 1) out.digits.push_back(symbol_of_signed_digit(0));
    else if (hi == 1 && lo == 1) out.digits.push_back(symbol_of_signed_digit(1));
    else { out.invalid = true; break; }
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos)
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(Integer(s));
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  Integer den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  bool neg = !whole.empty() && whole[0] == '-';
  Integer w(whole);
  Rational r = Rational(w) + (neg ? -1 : 1) * Rational(Integer(frac.empty() ? "0" : frac), den);
  return r;
}

}  // namespace t2c
