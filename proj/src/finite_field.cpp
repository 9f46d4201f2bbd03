#include "valdist/finite_field.hpp"

#include <algorithm>

#include "valdist/errors.hpp"

namespace valdist {

namespace {

std::vector<unsigned> decode(unsigned a, unsigned p, unsigned d) {
  std::vector<unsigned> digits(d, 0);
  for (unsigned i = 0; i < d && a != 0; ++i) {
    digits[i] = a % p;
    a /= p;
  }
  return digits;
}

unsigned encode(const std::vector<unsigned>& digits, unsigned p, unsigned d) {
  unsigned a = 0;
  for (unsigned i = d; i-- > 0;) a = a * p + (i < digits.size() ? digits[i] % p : 0);
  return a;
}

// Multiplication of encoded polynomials modulo a monic reduction polynomial.
unsigned poly_mulmod(unsigned a, unsigned b, const std::vector<unsigned>& reduction, unsigned p,
                     unsigned d) {
  std::vector<unsigned> da = decode(a, p, d), db = decode(b, p, d);
  std::vector<unsigned> prod(2 * d, 0);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  for (unsigned k = 2 * d; k-- > d;) {
    const unsigned c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    // x^k = -sum reduction[i] x^{k-d+i}  (reduction monic of degree d)
    for (unsigned i = 0; i < d; ++i)
      prod[k - d + i] = (prod[k - d + i] + c * (p - reduction[i] % p)) % p;
  }
  prod.resize(d);
  return encode(prod, p, d);
}

bool is_irreducible(const std::vector<unsigned>& candidate, unsigned p, unsigned d) {
  // Trial division by every monic polynomial of degree 1..d/2 (fields here
  // are tiny; q <= a few thousand at most).
  std::vector<unsigned> cand = candidate;  // degree d, monic, low-to-high, length d+1
  for (unsigned deg = 1; deg <= d / 2; ++deg) {
    unsigned count = 1;
    for (unsigned i = 0; i < deg; ++i) count *= p;
    for (unsigned enc = 0; enc < count; ++enc) {
      std::vector<unsigned> divisor = decode(enc, p, deg);
      divisor.resize(deg + 1);
      divisor[deg] = 1;
      // Polynomial remainder of cand by divisor.
      std::vector<unsigned> rem = cand;
      for (unsigned k = d + 1; k-- > deg;) {
        if (k >= rem.size() || rem[k] == 0) continue;
        const unsigned c = rem[k];
        rem[k] = 0;
        for (unsigned i = 0; i <= deg; ++i) {
          const unsigned idx = k - deg + i;
          rem[idx] = (rem[idx] + c * (p - divisor[i] % p)) % p;
        }
      }
      bool zero = true;
      for (unsigned i = 0; i < deg; ++i)
        if (rem[i] != 0) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

FiniteField::FiniteField(unsigned p, unsigned d) : p_(p), d_(d) {
  if (p < 2) throw Error("prime must be >= 2");
  for (unsigned f = 2; f * f <= p; ++f)
    if (p % f == 0) throw Error("coefficient characteristic must be prime");
  if (d < 1 || d > 12) throw Error("coefficient field degree out of supported range");
  q_ = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (q_ > (1u << 20) / p) throw Error("coefficient field too large");
    q_ *= p;
  }

  // Find a monic irreducible reduction polynomial of degree d.
  reduction_.assign(d, 0);
  if (d == 1) {
    reduction_ = {0};  // x = x - 0; unused in degree 1
  } else {
    bool found = false;
    for (unsigned enc = 0; enc < q_ && !found; ++enc) {
      std::vector<unsigned> cand = decode(enc, p, d);
      cand.resize(d + 1);
      cand[d] = 1;
      if (cand[0] == 0) continue;  // reducible: x divides
      if (is_irreducible(cand, p, d)) {
        reduction_.assign(cand.begin(), cand.begin() + d);
        found = true;
      }
    }
    if (!found) throw Error("no irreducible polynomial found");  // cannot happen
  }

  // Build exp/log tables over a generator of the multiplicative group.
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  for (unsigned g = 1; g < q_; ++g) {
    std::vector<unsigned> seen(q_, 0);
    unsigned x = 1, order = 0;
    do {
      x = mul_poly(x, g);
      ++order;
    } while (x != 1 && order <= q_);
    if (order != q_ - 1) continue;
    x = 1;
    for (unsigned k = 0; k < q_ - 1; ++k) {
      exp_[k] = x;
      log_[x] = k;
      x = mul_poly(x, g);
    }
    return;
  }
  throw Error("no multiplicative generator found");  // cannot happen
}

std::shared_ptr<const FiniteField> FiniteField::make(unsigned p, unsigned d) {
  return std::shared_ptr<const FiniteField>(new FiniteField(p, d));
}

unsigned FiniteField::mul_poly(unsigned a, unsigned b) const {
  if (d_ == 1) return (a * b) % p_;
  return poly_mulmod(a, b, reduction_, p_, d_);
}

unsigned FiniteField::add(unsigned a, unsigned b) const {
  std::vector<unsigned> da = decode(a, p_, d_), db = decode(b, p_, d_);
  for (unsigned i = 0; i < d_; ++i) da[i] = (da[i] + db[i]) % p_;
  return encode(da, p_, d_);
}

unsigned FiniteField::neg(unsigned a) const {
  std::vector<unsigned> da = decode(a, p_, d_);
  for (unsigned i = 0; i < d_; ++i) da[i] = (p_ - da[i]) % p_;
  return encode(da, p_, d_);
}

unsigned FiniteField::sub(unsigned a, unsigned b) const { return add(a, neg(b)); }

unsigned FiniteField::mul(unsigned a, unsigned b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

unsigned FiniteField::inv(unsigned a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in coefficient field");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

unsigned FiniteField::pow(unsigned a, long long e) const {
  if (a == 0) {
    if (e < 0) throw DivisionByZero("negative power of zero");
    return e == 0 ? 1u : 0u;
  }
  long long k = (static_cast<long long>(log_[a]) * (e % static_cast<long long>(q_ - 1))) %
                static_cast<long long>(q_ - 1);
  if (k < 0) k += q_ - 1;
  return exp_[static_cast<unsigned>(k)];
}

unsigned FiniteField::frobenius_inverse(unsigned a) const {
  long long e = 1;
  for (unsigned i = 0; i + 1 < d_; ++i) e *= p_;
  return pow(a, e);
}

unsigned FiniteField::frobenius_iter(unsigned a, long long k) const {
  // Frobenius has order d on F_{p^d}.
  long long r = k % static_cast<long long>(d_);
  if (r < 0) r += d_;
  unsigned x = a;
  for (long long i = 0; i < r; ++i) x = frobenius(x);
  return x;
}

unsigned FiniteField::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<unsigned>(r);
}

std::optional<unsigned> FiniteField::artin_schreier_solve(unsigned b) const {
  for (unsigned y = 0; y < q_; ++y)
    if (sub(frobenius(y), y) == b) return y;
  return std::nullopt;
}

unsigned FiniteField::element_degree(unsigned a) const {
  for (unsigned dd = 1; dd <= d_; ++dd) {
    if (d_ % dd != 0) continue;
    unsigned x = a;
    for (unsigned i = 0; i < dd; ++i) x = frobenius(x);
    if (x == a) return dd;
  }
  return d_;
}

}  // namespace valdist
