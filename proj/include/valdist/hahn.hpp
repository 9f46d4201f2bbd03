#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valdist/finite_field.hpp"
#include "valdist/ordgroup.hpp"

namespace valdist {

struct Term {
  GroupElement exponent;
  unsigned coeff;  // nonzero coefficient encoding in the ambient finite field
};

// Closed-form infinite term family accumulating at `limit` from below:
//   exponent(i) = limit - step * p^(-i)          for i >= start, step > 0
//   coeff(i)    = factor * frobenius^(-(i+offset))(base)
// Over prime coefficient fields the Frobenius twist is trivial and coeff is
// the constant factor*base.
struct ShrinkTail {
  GroupElement limit;
  GroupElement step;
  int start = 1;
  unsigned factor = 1;
  unsigned base = 1;
  long long offset = 0;
};

// Closed-form family marching to +infinity:
//   exponent(i) = shift + scale * p^i             for i >= start, scale > 0
//   coeff(i)    = factor * frobenius^(+(i+offset))(base)
struct GrowTail {
  GroupElement shift;
  GroupElement scale;
  int start = 0;
  unsigned factor = 1;
  unsigned base = 1;
  long long offset = 0;
};

// Least accumulation point of the support together with the step class that
// approaches it (the finest class when several share the limit).
struct AccumulationInfo {
  GroupElement limit;
  GroupElement step;
};

// Lazy exact Hahn series: a finite explicit head plus closed-form tails.
// Immutable and cheaply copyable; all arithmetic beyond the closed forms is
// cap-parameterized truncation (never lazily merged infinite streams).
//
// A series may be partial: `wall` marks that the representation is exact only
// strictly below it (products keep just their certified initial block).
class HahnSeries {
public:
  static HahnSeries zero(int rank, std::shared_ptr<const FiniteField> field);
  static HahnSeries from_terms(int rank, std::shared_ptr<const FiniteField> field,
                               std::vector<Term> head);
  static HahnSeries monomial(std::shared_ptr<const FiniteField> field, GroupElement exponent,
                             unsigned coeff);
  static HahnSeries make(int rank, std::shared_ptr<const FiniteField> field,
                         std::vector<Term> head, std::vector<ShrinkTail> shrink,
                         std::vector<GrowTail> grow,
                         std::optional<GroupElement> wall = std::nullopt);
  // Named reference into a synthetic field's script table.
  static HahnSeries labeled(std::string name, int rank, std::shared_ptr<const FiniteField> field);

  int rank() const;
  const std::shared_ptr<const FiniteField>& field() const;
  const std::vector<Term>& head() const;
  const std::vector<ShrinkTail>& shrink_tails() const;
  const std::vector<GrowTail>& grow_tails() const;
  const std::optional<GroupElement>& wall() const;
  const std::string& label() const;

  bool structurally_zero() const;
  bool has_infinite_support() const;

  // Strict bound below which every truncation is finite: the least shrink
  // accumulation point or partial-representation wall. Absent = every cap
  // is legal (finite support or grow-direction only).
  std::optional<GroupElement> safe_cap() const;

  HahnSeries with_label(std::string name) const;

  bool operator==(const HahnSeries& other) const;

private:
  struct Rep;
  std::shared_ptr<const Rep> rep_;
  explicit HahnSeries(std::shared_ptr<const Rep> rep);
};

// All terms with exponent strictly below cap, in increasing order with
// collisions merged and zeros dropped. Throws TruncationUnbounded when the
// requested truncation is not a finite exact set (cap at or above an
// accumulation point of the support, or beyond a partial series' wall).
std::vector<Term> terms_below(const HahnSeries& x, const GroupElement& cap);

// First `count` merged terms strictly below `stop` (fewer when the support
// runs out first). Unlike terms_below this never throws on accumulation:
// it is the budgeted scan primitive.
std::vector<Term> first_terms(const HahnSeries& x, const std::optional<GroupElement>& stop,
                              int count);

// The entire support of a series whose support is finite after cancellation.
// Throws UnsupportedInput when an infinite tail family survives.
std::vector<Term> all_terms(const HahnSeries& x);

// Merged terms with exponent <= bound plus, when the support continues, the
// first term beyond it: the approximation-scan primitive. The bound must be
// strictly below every surviving accumulation point.
std::vector<Term> terms_through(const HahnSeries& x, const GroupElement& bound);

// Terms of one closed tail with exponent strictly below cap (finite whenever
// cap is at or below the shrink limit; always finite for grow tails).
std::vector<Term> shrink_tail_terms_below(const ShrinkTail& t, const FiniteField& field,
                                          const GroupElement& cap);
std::vector<Term> grow_tail_terms_below(const GrowTail& t, const FiniteField& field,
                                        const GroupElement& cap);

// Least exponent of the support, or nullopt for the zero series.
std::optional<GroupElement> valuation(const HahnSeries& x);
// Leading term (exponent and coefficient); nullopt for zero.
std::optional<Term> leading_term(const HahnSeries& x);

enum class ArithOp { add, negate, mul, invert };

// Cap-parameterized exact arithmetic on truncations. `y` is ignored by the
// unary ops. Division by the zero series throws DivisionByZero; requesting
// an unbounded truncation throws TruncationUnbounded.
std::vector<Term> arith(ArithOp op, const HahnSeries& x, const HahnSeries& y,
                        const GroupElement& cap);

// Structural exact operations (closed under the tail representation).
HahnSeries add_series(const HahnSeries& x, const HahnSeries& y);
HahnSeries negate_series(const HahnSeries& x);
HahnSeries mul_monomial(const HahnSeries& x, const GroupElement& shift, unsigned coeff);
// Termwise p-th power (the Frobenius endomorphism of the series field).
HahnSeries frobenius_pow(const HahnSeries& x);

// Termwise p-th root; exact on every representable series.
HahnSeries frobenius_root(const HahnSeries& x);

// Canonical root of X^p - X = rhs for finite-support rhs. The additive split
// handles negative exponents by iterated p-th roots (shrink tails), positive
// ones by iterated p-th powers (grow tails), and the exponent-zero
// coefficient by the smallest solution in the coefficient field.
// Throws UnsupportedInput (infinite support) or ResidueNotSplit.
HahnSeries artin_schreier_root(const HahnSeries& rhs);

// Certified initial block of w^e below the first accumulation point of the
// product support: exact strictly below its wall (e >= 1, e < p, w with a
// surviving shrink family). Throws UnsupportedInput when no certificate
// applies.
HahnSeries pow_below_accumulation(const HahnSeries& w, unsigned e);

// Tails grouped by exponent law. Two tails belong to the same family when
// their anchors agree and their steps differ by an exact power of p; member
// coefficients are then summed on a common grid index m with
//   exponent(m) = anchor -/+ step * p^(-/+ m).
// Beyond `block_from` the merged coefficient sequence is periodic with period
// dividing the coefficient field degree, so one block decides whether the
// family carries infinitely many nonzero terms. Indices before the block with
// a nonzero partial sum surface as explicit `ragged` terms.
struct TailFamily {
  bool shrink = true;
  GroupElement anchor;
  GroupElement step;  // canonical class representative (p-free leading coordinate)
  long long block_from = 0;
  std::vector<unsigned> block;
  std::vector<Term> ragged;
  std::vector<size_t> members;  // indices into shrink_tails() or grow_tails()
  bool survives = false;
};

std::vector<TailFamily> tail_families(const HahnSeries& x);

// Exponent of a family's term at a grid index m (see the law above).
GroupElement family_exponent(const TailFamily& f, long long m, unsigned p);
// Merged coefficient at a grid index m >= block_from (periodic block lookup).
unsigned family_coeff(const TailFamily& f, long long m);

// Surviving accumulation structure after exact cancellation bookkeeping:
// least limit of a surviving shrink family, with the finest step class among
// families sharing it. Families beyond a partial series' wall are ignored.
std::optional<AccumulationInfo> first_accumulation(const HahnSeries& x);

// --- term-list helpers (exact finite-support arithmetic) ------------------

std::vector<Term> normalize_terms(const FiniteField& field, std::vector<Term> terms);
std::vector<Term> merge_term_lists(const FiniteField& field, const std::vector<Term>& a,
                                   const std::vector<Term>& b);
std::vector<Term> negate_term_list(const FiniteField& field, std::vector<Term> a);
// Product, optionally dropping exponents >= cap.
std::vector<Term> mul_term_lists(const FiniteField& field, const std::vector<Term>& a,
                                 const std::vector<Term>& b, const GroupElement* cap = nullptr);
std::vector<Term> scale_term_list(const FiniteField& field, std::vector<Term> a, unsigned coeff,
                                  const GroupElement* shift = nullptr);

// --- polynomials over the series field -------------------------------------

struct Polynomial {
  std::vector<HahnSeries> coeffs;  // ascending powers; normalized: no trailing zeros

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

Polynomial make_polynomial(std::vector<HahnSeries> coeffs);

// Hasse divided derivatives at c: the coefficients f_i(c) in
// f(c + Y) = sum_i f_i(c) Y^i, each as a truncated term list below cap.
std::vector<std::vector<Term>> hasse_taylor(const Polynomial& f, const HahnSeries& c,
                                            const GroupElement& cap);

// Exact evaluation helpers on finite term lists.
std::vector<std::vector<Term>> hasse_taylor_finite(const Polynomial& f,
                                                   const std::vector<Term>& c_terms);
std::vector<Term> evaluate_finite(const Polynomial& f, const std::vector<Term>& c_terms);

// --- series literal grammar -------------------------------------------------
// terms "c*t^(q)" joined by " + ", bare integers for exponent-zero terms, and
// closed tails "frobtail(gamma=-1, dir=shrink, coeff=1, ...)".
std::string render_series(const HahnSeries& x);
HahnSeries parse_series(std::string_view text, int rank,
                        std::shared_ptr<const FiniteField> field);

}  // namespace valdist
