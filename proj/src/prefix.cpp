#include "t2c/prefix.hpp"

#include <sstream>

namespace t2c {

Prefix::Prefix(Alphabet a, std::vector<Symbol> symbols)
    : alphabet_(a), symbols_(std::move(symbols)) {
  for (const auto& s : symbols_) check_symbol(s);
}

Prefix::Prefix(Alphabet a, std::initializer_list<int> symbols) : alphabet_(a) {
  symbols_.reserve(symbols.size());
  for (int s : symbols) push_back(Symbol(s));
}

Prefix Prefix::bits(const std::string& s) {
  Prefix p(Alphabet::Binary);
  for (char c : s) {
    if (c != '0' && c != '1') throw BadSymbol("bit string expects 0/1");
    p.push_back(Symbol(c - '0'));
  }
  return p;
}

void Prefix::check_symbol(const Symbol& s) const {
  if (s < 0) throw BadSymbol("negative symbol");
  if (alphabet_ == Alphabet::Binary && s > 1)
    throw BadSymbol("binary alphabet expects 0/1");
}

void Prefix::push_back(const Symbol& s) {
  check_symbol(s);
  symbols_.push_back(s);
}

Prefix Prefix::take(std::size_t n) const {
  if (n >= symbols_.size()) return *this;
  Prefix p(alphabet_);
  p.symbols_.assign(symbols_.begin(), symbols_.begin() + n);
  return p;
}

Prefix Prefix::drop(std::size_t n) const {
  Prefix p(alphabet_);
  if (n < symbols_.size())
    p.symbols_.assign(symbols_.begin() + n, symbols_.end());
  return p;
}

bool Prefix::extends(const Prefix& other) const {
  if (other.symbols_.size() > symbols_.size()) return false;
  for (std::size_t i = 0; i < other.symbols_.size(); ++i)
    if (symbols_[i] != other.symbols_[i]) return false;
  return true;
}

bool Prefix::compatible(const Prefix& other) const {
  return extends(other) || other.extends(*this);
}

Prefix Prefix::operator+(const Prefix& tail) const {
  Prefix p = *this;
  for (const auto& s : tail.symbols_) p.push_back(s);
  return p;
}

std::string Prefix::str() const {
  std::ostringstream out;
  if (alphabet_ == Alphabet::Binary) {
    for (const auto& s : symbols_) out << s;
  } else {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (i) out << ',';
      out << symbols_[i];
    }
  }
  return out.str();
}

}  // namespace t2c
