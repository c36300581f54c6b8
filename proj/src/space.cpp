#include "t2c/space.hpp"

#include <algorithm>

namespace t2c {

namespace {

Rational clamp01(const Rational& x) {
  if (x < 0) return Rational(0);
  if (x > 1) return Rational(1);
  return x;
}

Rational abs_rat(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace

Rational interval_point(const Integer& index) {
  return clamp01(decode_dyadic(index).value());
}

Integer interval_index(const Dyadic& d) { return encode_dyadic(d); }

Prefix cantor_word(const Integer& index) {
  Integer n = index + 1;
  std::vector<int> bits;
  while (n > 1) {
    bits.push_back(static_cast<int>(n % 2));
    n /= 2;
  }
  Prefix w(Alphabet::Binary);
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) w.push_back(*it);
  return w;
}

Integer cantor_word_index(const Prefix& word) {
  Integer n = 1;
  for (std::size_t i = 0; i < word.size(); ++i) n = 2 * n + word.at(i);
  return n - 1;
}

std::vector<Integer> decode_integer_list(const Integer& index) {
  std::vector<Integer> out;
  Integer i = index;
  while (i > 0) {
    auto [head, rest] = unpair_symbol(i - 1);
    out.push_back(head);
    i = rest;
  }
  return out;
}

Integer encode_integer_list(const std::vector<Integer>& list) {
  Integer i = 0;
  for (auto it = list.rbegin(); it != list.rend(); ++it) i = pair_symbol(*it, i) + 1;
  return i;
}

std::shared_ptr<const MetricSpaceDesc> unit_interval_space() {
  static auto space = std::make_shared<const MetricSpaceDesc>(MetricSpaceDesc{
      "unit_interval", [](const Integer& i, const Integer& j) {
        return abs_rat(interval_point(i) - interval_point(j));
      }});
  return space;
}

std::shared_ptr<const MetricSpaceDesc> cantor_space() {
  static auto space = std::make_shared<const MetricSpaceDesc>(MetricSpaceDesc{
      "cantor", [](const Integer& i, const Integer& j) {
        Prefix w = cantor_word(i), v = cantor_word(j);
        std::size_t n = std::max(w.size(), v.size());
        for (std::size_t k = 0; k < n; ++k) {
          Symbol a = k < w.size() ? w.at(k) : Symbol(0);
          Symbol b = k < v.size() ? v.at(k) : Symbol(0);
          if (a != b) return pow2(-static_cast<int>(k));
        }
        return Rational(0);
      }});
  return space;
}

std::shared_ptr<const MetricSpaceDesc> hilbert_cube_space() {
  static auto space = std::make_shared<const MetricSpaceDesc>(MetricSpaceDesc{
      "hilbert_cube", [](const Integer& i, const Integer& j) {
        auto xs = decode_integer_list(i), ys = decode_integer_list(j);
        std::size_t n = std::max(xs.size(), ys.size());
        Rational d = 0;
        for (std::size_t k = 0; k < n; ++k) {
          Rational x = k < xs.size() ? clamp01(decode_dyadic(xs[k]).value()) : Rational(0);
          Rational y = k < ys.size() ? clamp01(decode_dyadic(ys[k]).value()) : Rational(0);
          d += pow2(-static_cast<int>(k) - 1) * abs_rat(x - y);
        }
        return d;
      }});
  return space;
}

PointName PointName::fast_cauchy(std::shared_ptr<const MetricSpaceDesc> space,
                                 StreamName indices) {
  PointName p;
  p.kind_ = Kind::FastCauchy;
  p.space_ = std::move(space);
  p.stream_ = std::move(indices);
  return p;
}

PointName PointName::signed_digit(StreamName digits) {
  PointName p;
  p.kind_ = Kind::SignedDigit;
  p.space_ = unit_interval_space();
  p.stream_ = std::move(digits);
  return p;
}

PointName PointName::signed_digit(const Rational& x) {
  return signed_digit(StreamName::from_stages(Alphabet::Natural, [x](Fuel f) {
    return signed_digit_prefix(x, static_cast<std::size_t>(std::max<Fuel>(f, 0)));
  }));
}

PointName PointName::cantor(StreamName bits) {
  PointName p;
  p.kind_ = Kind::CantorPoint;
  p.space_ = cantor_space();
  p.stream_ = std::move(bits);
  return p;
}

std::optional<Integer> PointName::approx_index(Fuel s) const {
  if (s < 0) s = 0;
  std::size_t need = static_cast<std::size_t>(s) + 1;
  Prefix w = stream_.at(s + 1);
  switch (kind_) {
    case Kind::FastCauchy:
      if (w.size() < need) return std::nullopt;
      return w.at(static_cast<std::size_t>(s));
    case Kind::SignedDigit: {
      if (w.size() < need) return std::nullopt;
      Rational v = signed_digit_value(w.take(need));
      Integer num(numerator(v * pow2(s + 1)));
      return encode_dyadic(Dyadic{num, static_cast<int>(s) + 1});
    }
    case Kind::CantorPoint:
      if (w.size() < need) return std::nullopt;
      return cantor_word_index(w.take(need));
  }
  return std::nullopt;
}

MonotoneReport check_fast_cauchy(const PointName& x, Fuel depth) {
  MonotoneReport report;
  for (Fuel s = 0; s <= depth; ++s)
    for (Fuel t = s; t <= depth; ++t) {
      auto a = x.approx_index(s), b = x.approx_index(t);
      if (!a || !b) continue;
      ++report.probes;
      if (x.space()->dist(*a, *b) > pow2(-static_cast<int>(s)) + pow2(-static_cast<int>(t)))
        report.violations.push_back({"fast-Cauchy coherence", Prefix(), Prefix(), s, t});
    }
  return report;
}

PointName embed_hilbert(const PointName& x) {
  auto desc = x.space();
  auto indices = StreamName::from_stages(Alphabet::Natural, [x, desc](Fuel f) {
    Prefix out(Alphabet::Natural);
    for (Fuel s = 0; s < f; ++s) {
      auto a = x.approx_index(s + 3);
      if (!a) break;
      std::vector<Integer> coords;
      for (Fuel i = 0; i <= s + 1; ++i) {
        Rational d = desc->dist(Integer(i), *a);
        if (d > 1) d = 1;
        coords.push_back(encode_dyadic(round_to_dyadic(d, static_cast<int>(s) + 3)));
      }
      out.push_back(encode_integer_list(coords));
    }
    return out;
  });
  return PointName::fast_cauchy(hilbert_cube_space(), indices);
}

}  // namespace t2c
