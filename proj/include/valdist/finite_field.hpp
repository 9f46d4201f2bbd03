#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace valdist {

// F_{p^d} with log/antilog tables over a generator. Elements are unsigned
// encodings in [0, p^d): the base-p digit vector of the polynomial basis,
// so the prime subfield is encoded by 0..p-1. Instances are immutable and
// shared; all series code passes them by shared_ptr.
class FiniteField {
public:
  static std::shared_ptr<const FiniteField> make(unsigned p, unsigned d = 1);

  unsigned p() const { return p_; }
  unsigned degree() const { return d_; }
  unsigned size() const { return q_; }

  unsigned add(unsigned a, unsigned b) const;
  unsigned neg(unsigned a) const;
  unsigned sub(unsigned a, unsigned b) const;
  unsigned mul(unsigned a, unsigned b) const;
  unsigned inv(unsigned a) const;  // throws DivisionByZero on 0
  unsigned pow(unsigned a, long long e) const;
  unsigned from_int(long long n) const;  // n mod p, embedded in the prime subfield

  unsigned frobenius(unsigned a) const { return pow(a, p_); }
  // Inverse of x -> x^p; Frobenius has order d, so this is x -> x^{p^{d-1}}.
  unsigned frobenius_inverse(unsigned a) const;
  // frobenius iterated k times; negative k iterates the inverse.
  unsigned frobenius_iter(unsigned a, long long k) const;

  // Smallest y (in encoding order) with y^p - y = b, if the equation splits.
  std::optional<unsigned> artin_schreier_solve(unsigned b) const;

  // Minimal d' dividing d with a in F_{p^{d'}}.
  unsigned element_degree(unsigned a) const;

  bool same_field(const FiniteField& other) const { return p_ == other.p_ && d_ == other.d_; }

private:
  FiniteField(unsigned p, unsigned d);
  unsigned mul_poly(unsigned a, unsigned b) const;  // table-free, used during setup

  unsigned p_, d_, q_;
  std::vector<unsigned> reduction_;  // monic irreducible, low-to-high, length d+1
  std::vector<unsigned> exp_;        // exp_[k] = g^k, k in [0, q-1)
  std::vector<unsigned> log_;        // inverse of exp_ on [1, q)
};

}  // namespace valdist
