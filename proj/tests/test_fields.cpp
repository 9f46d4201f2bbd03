#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "valdist/errors.hpp"
#include "valdist/fields.hpp"

using namespace valdist;

namespace {

GroupElement q1(const Rational& v) { return GroupElement::scalar(v); }

HahnSeries theta(const std::shared_ptr<const FiniteField>& F) {
  return HahnSeries::make(1, F, {},
                          {ShrinkTail{GroupElement::zero(1), q1(1), 1, 1, 1, 0}},
                          {});
}

SyntheticScript immediate_script(int degree) {
  SyntheticScript s;
  s.generator = "vartheta";
  s.generator_degree = degree;
  s.distance = "0-";
  s.prefix = {q1(-1), q1(Rational(-1, 2)), q1(Rational(-1, 4))};
  return s;
}

}  // namespace

TEST_CASE("descriptor construction and identifiers") {
  const auto F2 = FiniteField::make(2);
  const auto K = FieldDescriptor::laurent(0, 1, F2);
  CHECK(K.kind() == FieldKind::laurent_level);
  CHECK(K.rank() == 1);
  CHECK(K.id() == "laurent(level=0,p=2)");
  CHECK(FieldDescriptor::perfect_hull(1, F2).id() == "perfect-hull(rank=1,p=2)");
  CHECK_THROWS_AS(FieldDescriptor::laurent(0, 2, F2), UnsupportedInput);
  CHECK_THROWS_AS(FieldDescriptor::laurent(-1, 1, F2), UnsupportedInput);
  CHECK_THROWS_AS(K.script(), UnsupportedInput);
}

TEST_CASE("per-term membership follows the exponent discipline") {
  const auto F2 = FiniteField::make(2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F2);
  const auto L1 = FieldDescriptor::laurent(1, 1, F2);
  const auto PH = FieldDescriptor::perfect_hull(1, F2);

  CHECK_FALSE(term_in_field({q1(Rational(1, 2)), 1}, L0));
  CHECK(term_in_field({q1(-3), 1}, L0));
  CHECK_FALSE(term_in_field({q1(Rational(-1, 4)), 1}, L1));
  CHECK(term_in_field({q1(Rational(-1, 2)), 1}, L1));
  CHECK(contains({{q1(Rational(-1, 2)), 1}, {q1(Rational(-1, 4)), 1}}, PH));
  CHECK_FALSE(contains({{q1(Rational(1, 3)), 1}}, PH));
}

TEST_CASE("coefficients outside the configured subfield are rejected") {
  const auto F4 = FiniteField::make(2, 2);
  const auto K = FieldDescriptor::laurent(0, 1, F4, 1);  // F_2 coefficients only
  CHECK(K.effective_subfield_degree() == 1);
  CHECK(term_in_field({q1(0), 1}, K));
  CHECK_FALSE(term_in_field({q1(0), 2}, K));  // a degree-2 element of F_4
  const auto whole = FieldDescriptor::laurent(0, 1, F4);
  CHECK(term_in_field({q1(0), 2}, whole));
}

TEST_CASE("membership of full series per kind") {
  const auto F2 = FiniteField::make(2);
  const auto th = theta(F2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F2);
  const auto PH = FieldDescriptor::perfect_hull(1, F2);
  const auto FR = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::p_powers()), F2);
  const auto FZ = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::integers()), F2);

  CHECK_FALSE(member_series(th, L0));
  CHECK_FALSE(member_series(th, PH));  // denominators grow inside one element
  CHECK(member_series(th, FR));        // unrestricted levels admit the tail
  CHECK_FALSE(member_series(th, FZ));

  const auto finite = HahnSeries::from_terms(1, F2, {{q1(-2), 1}, {q1(3), 1}});
  CHECK(member_series(finite, L0));
  CHECK(member_series(finite, PH));

  const auto half = HahnSeries::monomial(F2, q1(Rational(1, 2)), 1);
  CHECK_FALSE(member_series(half, L0));
  CHECK(member_series(half, PH));
}

TEST_CASE("laurent members may have growing support") {
  const auto F2 = FiniteField::make(2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F2);
  const auto L1 = FieldDescriptor::laurent(1, 1, F2);
  // exponents 1/2 + 2^m: level-1 lattice points, never level-0 ones.
  const auto x = HahnSeries::make(
      1, F2, {}, {},
      {GrowTail{q1(Rational(1, 2)), q1(1), 0, 1, 1, 0}});
  CHECK(member_series(x, L1));
  CHECK_FALSE(member_series(x, L0));

  const auto y = HahnSeries::make(
      1, F2, {}, {}, {GrowTail{GroupElement::zero(1), q1(1), 0, 1, 1, 0}});
  CHECK(member_series(y, L0));
}

TEST_CASE("window test catches oscillating denominators") {
  const auto F2 = FiniteField::make(2);
  const auto FR = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::p_powers()), F2);
  // exponents 1/3 - (1/3)/2^m: in Z[1/2] only when 3 divides 2^m - 1.
  const auto x = HahnSeries::make(
      1, F2, {},
      {ShrinkTail{q1(Rational(1, 3)), q1(Rational(1, 3)), 1, 1, 1, 0}}, {});
  CHECK_FALSE(member_series(x, FR));
  CHECK_FALSE(structure_within(x, FR));
}

TEST_CASE("structural lawfulness splits from plain membership") {
  const auto F3 = FiniteField::make(3);
  const auto th = theta(F3);
  const auto PH = FieldDescriptor::perfect_hull(1, F3);
  const auto L0 = FieldDescriptor::laurent(0, 1, F3);

  // Every truncation of theta lies in the perfect hull even though theta
  // itself does not: the wedge that distance resolution relies on.
  CHECK(structure_within(th, PH));
  CHECK_FALSE(member_series(th, PH));
  CHECK_FALSE(structure_within(th, L0));

  const auto sq = pow_below_accumulation(th, 2);
  CHECK(structure_within(sq, PH));
  CHECK_FALSE(member_series(sq, PH));  // the certified block already refutes
}

TEST_CASE("partial series refute membership from the known region") {
  const auto F3 = FiniteField::make(3);
  const auto th = theta(F3);
  const auto sq = pow_below_accumulation(th, 2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F3);
  const auto FR = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 3, CoordGroup::p_powers()), F3);
  CHECK_FALSE(member_series(sq, L0));  // t^(-2/3) alone refutes
  CHECK_THROWS_AS(member_series(sq, FR), UnsupportedInput);
}

TEST_CASE("best approximation of theta in the perfect hull") {
  const auto F2 = FiniteField::make(2);
  const auto th = theta(F2);
  const auto PH = FieldDescriptor::perfect_hull(1, F2);

  const auto a = best_approx(th, PH, q1(Rational(-1, 100)));
  REQUIRE(a.approximant.size() == 6);  // -1/2 down to -1/64
  CHECK(a.approximant.back().exponent == q1(Rational(-1, 64)));
  REQUIRE(a.achieved.has_value());
  CHECK(*a.achieved == q1(Rational(-1, 128)));
  CHECK_FALSE(a.attained_max);  // the next term is again in K

  // Monotone targets: a finer target never lowers the achieved value.
  const auto b = best_approx(th, PH, q1(Rational(-1, 1000)));
  REQUIRE(b.achieved.has_value());
  CHECK(*b.achieved == q1(Rational(-1, 1024)));
  CHECK(lex_less(*a.achieved, *b.achieved));
}

TEST_CASE("best approximation blocked by the first non-member term") {
  const auto F2 = FiniteField::make(2);
  const auto th = theta(F2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F2);
  const auto a = best_approx(th, L0, q1(Rational(-1, 100)));
  CHECK(a.approximant.empty());
  REQUIRE(a.achieved.has_value());
  CHECK(*a.achieved == q1(Rational(-1, 2)));
  CHECK(a.attained_max);
}

TEST_CASE("members achieve infinity") {
  const auto F2 = FiniteField::make(2);
  const auto x = HahnSeries::from_terms(1, F2, {{q1(-1), 1}, {q1(2), 1}});
  const auto L0 = FieldDescriptor::laurent(0, 1, F2);
  const auto a = best_approx(x, L0, q1(5));
  CHECK(a.approximant.size() == 2);
  CHECK_FALSE(a.achieved.has_value());  // v(x - x) = infinity
  CHECK(a.attained_max);
}

TEST_CASE("best approximation on a certified partial square") {
  const auto F3 = FiniteField::make(3);
  const auto sq = pow_below_accumulation(theta(F3), 2);
  const auto PH = FieldDescriptor::perfect_hull(1, F3);
  const auto a = best_approx(sq, PH, q1(Rational(-17, 50)));
  CHECK(a.approximant.size() == 4);  // -2/3, -4/9, -10/27, -28/81
  REQUIRE(a.achieved.has_value());
  CHECK(*a.achieved == q1(Rational(-82, 243)));
  CHECK_FALSE(a.attained_max);
}

TEST_CASE("truncations of members stay members") {
  const auto F2 = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F2);
  const auto th = theta(F2);
  for (int denom : {5, 50, 500}) {
    CHECK(contains(terms_below(th, q1(Rational(-1, denom))), PH));
  }
}

TEST_CASE("frobenius root preserves perfect hull membership") {
  const auto F2 = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F2);
  const auto x = HahnSeries::from_terms(
      1, F2, {{q1(Rational(-1, 2)), 1}, {q1(3), 1}, {q1(Rational(5, 4)), 1}});
  CHECK(member_series(x, PH));
  CHECK(member_series(frobenius_root(x), PH));
  CHECK(member_series(frobenius_root(frobenius_root(x)), PH));
}

TEST_CASE("p-degree per kind") {
  const auto F2 = FiniteField::make(2);
  CHECK(p_degree(FieldDescriptor::laurent(0, 1, F2)) == 1);
  CHECK(p_degree(FieldDescriptor::perfect_hull(1, F2)) == 0);
  const auto FR2 = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(2, 2, CoordGroup::integers()), F2);
  CHECK(p_degree(FR2) == 2);
  const auto mixed = FieldDescriptor::full_restricted(
      OrderedGroupSpec(2, 2, {CoordGroup::integers(), CoordGroup::p_powers()}),
      F2);
  CHECK(p_degree(mixed) == 1);
  CHECK_THROWS_AS(p_degree(FieldDescriptor::synthetic(immediate_script(2), 1, F2)),
                  UnsupportedInput);
}

TEST_CASE("inseparable defect exponent rules and declarations") {
  const auto F2 = FiniteField::make(2);
  const auto ph = insep_defect_exponent(FieldDescriptor::perfect_hull(1, F2));
  CHECK(ph.m == 0);
  CHECK(ph.certificate == "perfect field");
  const auto lv = insep_defect_exponent(FieldDescriptor::laurent(0, 1, F2));
  CHECK(lv.m == 0);
  CHECK(lv.certificate == "value-group index");

  FieldMetadata meta;
  meta.declared_m = 1;
  const auto syn = insep_defect_exponent(
      FieldDescriptor::synthetic(immediate_script(2), 1, F2, meta));
  CHECK(syn.m == 1);
  CHECK(syn.certificate == "declared");
  CHECK_THROWS_AS(
      insep_defect_exponent(FieldDescriptor::synthetic(immediate_script(2), 1, F2)),
      Undecidable);

  const auto lattice = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::integers()), F2);
  CHECK_THROWS_AS(insep_defect_exponent(lattice), Undecidable);
  const auto divisible = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::rationals()), F2);
  CHECK(insep_defect_exponent(divisible).m == 0);
}

TEST_CASE("synthetic fields answer through their script") {
  const auto F2 = FiniteField::make(2);
  const auto K = FieldDescriptor::synthetic(immediate_script(2), 1, F2);
  CHECK(contains({{q1(Rational(1, 7)), 1}}, K));  // scripted base is large
  const auto gen = HahnSeries::labeled("vartheta", 1, F2);
  CHECK_FALSE(member_series(gen, K));  // scripted degree 2 over the base
  const auto triv = FieldDescriptor::synthetic(immediate_script(1), 1, F2);
  CHECK(member_series(gen, triv));
  CHECK_THROWS_AS(member_series(HahnSeries::labeled("other", 1, F2), K),
                  UnsupportedInput);

  const auto a = best_approx(gen, K, q1(Rational(-1, 3)));
  REQUIRE(a.achieved.has_value());
  CHECK(*a.achieved == q1(Rational(-1, 2)));
  CHECK_FALSE(a.attained_max);
  CHECK_THROWS_AS(best_approx(gen, K, q1(-10)), UnsupportedInput);
  CHECK(member_series(HahnSeries::from_terms(1, F2, {{q1(1), 1}}), K));
}
