#include "t2c/stream.hpp"

#include <algorithm>

namespace t2c {

StreamName StreamName::pointwise(Alphabet a, std::function<Symbol(std::size_t)> symbol_at) {
  StreamName s;
  s.alphabet_ = a;
  s.at_ = [a, symbol_at = std::move(symbol_at)](Fuel fuel) {
    Prefix p(a);
    for (Fuel i = 0; i < fuel; ++i) p.push_back(symbol_at(static_cast<std::size_t>(i)));
    return p;
  };
  return s;
}

StreamName StreamName::periodic(const Prefix& head, const Prefix& cycle) {
  if (cycle.empty()) throw std::invalid_argument("periodic: empty cycle");
  Alphabet a = cycle.alphabet();
  return pointwise(a, [head, cycle](std::size_t i) {
    if (i < head.size()) return head.at(i);
    return cycle.at((i - head.size()) % cycle.size());
  });
}

StreamName StreamName::constant(Alphabet a, const Symbol& s) {
  return pointwise(a, [s](std::size_t) { return s; });
}

StreamName StreamName::from_stages(Alphabet a, std::function<Prefix(Fuel)> at) {
  StreamName s;
  s.alphabet_ = a;
  s.at_ = std::move(at);
  return s;
}

Prefix StreamName::at(Fuel fuel) const {
  if (fuel < 0) fuel = 0;
  if (!at_) return Prefix(alphabet_);
  return at_(fuel);
}

PrefixTransformer PrefixTransformer::identity(Alphabet a) {
  return PrefixTransformer(a, a, [](const Prefix& p, Fuel) { return p; });
}

PrefixTransformer PrefixTransformer::symbol_map(Alphabet in, Alphabet out,
                                                std::function<Symbol(const Symbol&)> f) {
  return PrefixTransformer(in, out, [out, f = std::move(f)](const Prefix& p, Fuel) {
    Prefix q(out);
    for (std::size_t i = 0; i < p.size(); ++i) q.push_back(f(p.at(i)));
    return q;
  });
}

Prefix PrefixTransformer::apply(const Prefix& input, Fuel fuel) const {
  if (!apply_) return Prefix(out_);
  return apply_(input, fuel);
}

PrefixTransformer compose(const PrefixTransformer& t1, const PrefixTransformer& t2) {
  if (t1.output_alphabet() != t2.input_alphabet())
    throw std::invalid_argument("compose: alphabet mismatch");
  return PrefixTransformer(t1.input_alphabet(), t2.output_alphabet(),
                           [t1, t2](const Prefix& p, Fuel fuel) {
                             return t2.apply(t1.apply(p, fuel), fuel);
                           });
}

StreamName transform(const PrefixTransformer& t, const StreamName& s) {
  return StreamName::from_stages(t.output_alphabet(),
                                 [t, s](Fuel fuel) { return t.apply(s.at(fuel), fuel); });
}

Prefix pair_encode_prefix(const Prefix& p, const Prefix& q) {
  Prefix out(p.alphabet());
  std::size_t n = std::min(p.size(), q.size());
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(p.at(i));
    out.push_back(q.at(i));
  }
  if (p.size() > n) out.push_back(p.at(n));
  return out;
}

StreamName pair_encode(const StreamName& p, const StreamName& q) {
  return StreamName::from_stages(p.alphabet(), [p, q](Fuel fuel) {
    return pair_encode_prefix(p.at(fuel), q.at(fuel));
  });
}

std::pair<Prefix, Prefix> pair_decode_prefix(const Prefix& s) {
  Prefix p(s.alphabet()), q(s.alphabet());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i % 2 == 0)
      p.push_back(s.at(i));
    else
      q.push_back(s.at(i));
  }
  return {p, q};
}

std::pair<StreamName, StreamName> pair_decode(const StreamName& s) {
  auto first = StreamName::from_stages(
      s.alphabet(), [s](Fuel fuel) { return pair_decode_prefix(s.at(2 * fuel)).first; });
  auto second = StreamName::from_stages(
      s.alphabet(), [s](Fuel fuel) { return pair_decode_prefix(s.at(2 * fuel)).second; });
  return {first, second};
}

std::size_t cantor_pair(std::size_t i, std::size_t j) {
  std::size_t s = i + j;
  return s * (s + 1) / 2 + i;
}

std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t k) {
  std::size_t s = 0;
  while ((s + 1) * (s + 2) / 2 <= k) ++s;
  std::size_t i = k - s * (s + 1) / 2;
  return {i, s - i};
}

StreamName tuple_encode(Alphabet a, std::function<StreamName(std::size_t)> family) {
  return StreamName::from_stages(a, [a, family = std::move(family)](Fuel fuel) {
    Prefix out(a);
    for (Fuel k = 0; k < fuel; ++k) {
      auto [i, j] = cantor_unpair(static_cast<std::size_t>(k));
      Prefix comp = family(i).at(fuel);
      if (j >= comp.size()) break;  // output only as far as determined
      out.push_back(comp.at(j));
    }
    return out;
  });
}

StreamName tuple_component(const StreamName& s, std::size_t i) {
  return StreamName::from_stages(s.alphabet(), [s, i](Fuel fuel) {
    Prefix whole = s.at(fuel);
    Prefix out(s.alphabet());
    for (std::size_t j = 0;; ++j) {
      std::size_t k = cantor_pair(i, j);
      if (k >= whole.size()) break;
      out.push_back(whole.at(k));
    }
    return out;
  });
}

MonotoneReport check_monotone(const PrefixTransformer& t, const std::vector<Prefix>& samples,
                              Fuel depth) {
  MonotoneReport report;
  auto probe_pair = [&](const Prefix& small, const Prefix& big, Fuel fa, Fuel fb) {
    ++report.probes;
    Prefix oa = t.apply(small, fa);
    Prefix ob = t.apply(big, fb);
    if (!ob.extends(oa))
      report.violations.push_back({"output not extended", small, big, fa, fb});
  };
  // Includes consecutive fuels so that parity-dependent output is caught.
  std::vector<Fuel> fuels;
  for (Fuel f = 0; f <= depth; ++f)
    if (f <= 3 || f >= depth - 3 || f == depth / 2) fuels.push_back(f);
  for (const Prefix& w : samples) {
    for (std::size_t cut = 0; cut <= w.size(); ++cut) {
      Prefix v = w.take(cut);
      for (Fuel f : fuels) {
        probe_pair(v, w, f, f);                      // input extension
        probe_pair(v, v, f, depth);                  // fuel extension
        probe_pair(v, w, f, depth);                  // both
      }
    }
  }
  // Consistency across distinct compatible samples.
  for (const Prefix& a : samples)
    for (const Prefix& b : samples) {
      if (!a.compatible(b) || a.size() > b.size()) continue;
      probe_pair(a, b, depth, depth);
    }
  return report;
}

MonotoneReport check_stream_monotone(const StreamName& s, Fuel depth) {
  MonotoneReport report;
  Prefix prev = s.at(0);
  for (Fuel f = 1; f <= depth; ++f) {
    ++report.probes;
    Prefix cur = s.at(f);
    if (!cur.extends(prev))
      report.violations.push_back({"stream stage not extended", prev, cur, f - 1, f});
    prev = cur;
  }
  return report;
}

void write_staged_log(std::ostream& out, const StreamName& s, Fuel depth) {
  for (Fuel f = 0; f <= depth; ++f)
    out << "stage " << f << ": " << s.at(f).str() << "\n";
}

}  // namespace t2c
