#include "valdist/rational.hpp"

#include "valdist/errors.hpp"

namespace valdist {

bool has_p_power_denominator(const Rational& q, unsigned p) {
  Int d = denominator_of(q);
  while (d > 1) {
    if (d % p != 0) return false;
    d /= p;
  }
  return true;
}

int p_denominator_level(const Rational& q, unsigned p) {
  Int d = denominator_of(q);
  int level = 0;
  while (d > 1) {
    if (d % p != 0) throw UnsupportedInput("denominator is not a power of " + std::to_string(p));
    d /= p;
    ++level;
  }
  return level;
}

long long p_adic_valuation(const Rational& q, unsigned p) {
  if (q == 0) throw UnsupportedInput("p-adic valuation of zero");
  Int n = numerator_of(q);
  Int d = denominator_of(q);
  const Int P = p;
  long long v = 0;
  while (n % P == 0) {
    n /= P;
    ++v;
  }
  while (d % P == 0) {
    d /= P;
    --v;
  }
  return v;
}

Rational pow_rational(unsigned base, int exp) {
  Int n = 1;
  for (int i = 0; i < (exp < 0 ? -exp : exp); ++i) n *= base;
  if (exp >= 0) return Rational(n);
  return Rational(Int(1), n);
}

std::string render_rational(const Rational& q) {
  std::string s = numerator_of(q).str();
  if (!is_integer(q)) {
    s += "/";
    s += denominator_of(q).str();
  }
  return s;
}

Rational parse_rational(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) throw ParseError("empty rational literal");
  text = text.substr(begin, end - begin + 1);

  const size_t slash = text.find('/');
  auto parse_int = [](std::string_view part) {
    if (part.empty()) throw ParseError("empty integer literal");
    size_t i = 0;
    bool neg = false;
    if (part[0] == '+' || part[0] == '-') {
      neg = part[0] == '-';
      i = 1;
    }
    if (i == part.size()) throw ParseError("sign without digits");
    Int value = 0;
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9')
        throw ParseError("bad digit in rational literal: '" + std::string(part) + "'");
      value = value * 10 + (part[i] - '0');
    }
    return neg ? Int(-value) : value;
  };

  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in rational literal");
  return Rational(num, den);
}

}  // namespace valdist
