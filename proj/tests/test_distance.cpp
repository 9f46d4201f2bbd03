#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <valdist/distance.hpp>
#include <valdist/errors.hpp>

using namespace valdist;

namespace {

GroupElement q1(const Rational& v) { return GroupElement({v}); }

HahnSeries theta(std::shared_ptr<const FiniteField> F) {
  return HahnSeries::make(1, F, {}, {ShrinkTail{GroupElement::zero(1), q1(1), 1, 1, 1, 0}},
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

bool prefix_is(const std::vector<GroupElement>& got, const std::vector<Rational>& want) {
  if (got.size() != want.size()) return false;
  for (size_t i = 0; i < got.size(); ++i)
    if (!(got[i] == q1(want[i]))) return false;
  return true;
}

}  // namespace

TEST_CASE("membership gives the infinite distance") {
  const auto F = FiniteField::make(2);
  const auto K = FieldDescriptor::full_restricted(
      OrderedGroupSpec::uniform(1, 2, CoordGroup::p_powers()), F);
  const auto rep = distance_of(theta(F), K, 10);
  CHECK(rep.cut == Cut::infinity(1));
  CHECK(rep.weakly_immediate == Immediacy::no);
  CHECK(rep.value_prefix.empty());

  const auto L0 = FieldDescriptor::laurent(0, 1, F);
  const auto one = HahnSeries::monomial(F, q1(3), 1);
  CHECK(distance_of(one, L0, 4).cut == Cut::infinity(1));
}

TEST_CASE("attained maximum at the first term outside the field") {
  const auto F = FiniteField::make(2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F);
  const auto a = HahnSeries::monomial(F, q1(Rational(1, 2)), 1);

  const auto vs = value_set(a, L0, 5);
  CHECK(prefix_is(vs.value_prefix, {Rational(1, 2)}));
  CHECK(vs.cut == Cut::principal_plus(q1(Rational(1, 2))));
  CHECK(vs.weakly_immediate == Immediacy::no);
  CHECK(vs.budget_used == 1);

  CHECK(distance_of(a, L0, 5).cut == Cut::principal_plus(q1(Rational(1, 2))));
  CHECK(is_weakly_immediate(a, L0, 5) == Immediacy::no);
}

TEST_CASE("value scan walks the truncation values without resolving the supremum") {
  const auto F = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto rep = value_set(theta(F), PH, 5);
  CHECK(prefix_is(rep.value_prefix,
                  {Rational(-1, 2), Rational(-1, 4), Rational(-1, 8), Rational(-1, 16),
                   Rational(-1, 32)}));
  CHECK(rep.budget_used == 5);
  CHECK(rep.cut.kind() == Cut::Kind::unresolved);
  CHECK(rep.weakly_immediate == Immediacy::unknown_at_budget);
}

TEST_CASE("tail certificate resolves the principal-minus distance over the perfect hull") {
  const auto F = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto rep = distance_of(theta(F), PH, 5);
  CHECK(rep.cut == Cut::principal_minus(q1(0)));
  CHECK(rep.weakly_immediate == Immediacy::yes);
  CHECK(rep.value_prefix.size() == 5);
  CHECK(is_weakly_immediate(theta(F), PH, 5) == Immediacy::yes);
}

TEST_CASE("rank-2 approach along the higher class yields an edge cut") {
  const auto F = FiniteField::make(2);
  const auto PH2 = FieldDescriptor::perfect_hull(2, F);
  const GroupElement step({Rational(1), Rational(0)});
  const auto a = HahnSeries::make(
      2, F, {}, {ShrinkTail{GroupElement::zero(2), step, 1, 1, 1, 0}}, {});
  const auto rep = distance_of(a, PH2, 6);
  CHECK(rep.cut == Cut::edge_minus(ConvexSubgroup{1, 2}, GroupElement::zero(2)));
  CHECK(rep.weakly_immediate == Immediacy::yes);
}

TEST_CASE("walled square of the degree-3 generator sits at the shifted lower cut") {
  const auto F = FiniteField::make(3);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto sq = pow_below_accumulation(theta(F), 2);
  const auto rep = distance_of(sq, PH, 8);
  CHECK(rep.cut == Cut::principal_minus(q1(Rational(-1, 3))));
  CHECK(rep.weakly_immediate == Immediacy::yes);
}

TEST_CASE("distances refine along nested fields") {
  const auto F = FiniteField::make(2);
  const auto t = theta(F);
  const auto L0 = FieldDescriptor::laurent(0, 1, F);
  const auto L1 = FieldDescriptor::laurent(1, 1, F);
  const auto PH = FieldDescriptor::perfect_hull(1, F);

  const auto d0 = distance_of(t, L0, 10);
  const auto d1 = distance_of(t, L1, 10);
  const auto dp = distance_of(t, PH, 10);
  CHECK(d0.cut == Cut::principal_plus(q1(Rational(-1, 2))));
  CHECK(d1.cut == Cut::principal_plus(q1(Rational(-1, 4))));
  CHECK(dp.cut == Cut::principal_minus(q1(0)));

  CHECK(compare_cuts(d0.cut, d1.cut) == Ordering::less);
  CHECK(compare_cuts(d1.cut, dp.cut) == Ordering::less);
}

TEST_CASE("monomial shifts transport the cut by the monomial's value") {
  const auto F = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto L0 = FieldDescriptor::laurent(0, 1, F);

  const Rational shifts[] = {Rational(2), Rational(-3), Rational(1, 2)};
  for (const Rational& vc : shifts) {
    const auto moved = mul_monomial(theta(F), q1(vc), 1);
    const auto got = distance_of(moved, PH, 6).cut;
    CHECK(got == shift_cut(distance_of(theta(F), PH, 6).cut, q1(vc)));
  }

  const auto a = HahnSeries::monomial(F, q1(Rational(1, 2)), 1);
  const auto moved = mul_monomial(a, q1(5), 1);
  CHECK(distance_of(moved, L0, 4).cut ==
        shift_cut(distance_of(a, L0, 4).cut, q1(5)));
}

TEST_CASE("scripted fields answer distances from their script") {
  const auto F = FiniteField::make(2);
  const auto K = FieldDescriptor::synthetic(immediate_script(2), 1, F);
  const auto gen = HahnSeries::labeled("vartheta", 1, F);

  const auto rep = distance_of(gen, K, 2);
  CHECK(rep.cut == Cut::principal_minus(q1(0)));
  CHECK(rep.weakly_immediate == Immediacy::yes);
  CHECK(prefix_is(rep.value_prefix, {Rational(-1), Rational(-1, 2)}));
  CHECK(rep.budget_used == 2);

  const auto trivial = FieldDescriptor::synthetic(immediate_script(1), 1, F);
  CHECK(distance_of(HahnSeries::labeled("vartheta", 1, F), trivial, 2).cut ==
        Cut::infinity(1));
  CHECK_THROWS_AS(distance_of(HahnSeries::labeled("eta", 1, F), K, 2), UnsupportedInput);
}

TEST_CASE("hasse row values stabilize over successive truncations") {
  const auto F = FiniteField::make(3);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto one = HahnSeries::monomial(F, q1(0), 1);
  const Polynomial sq = make_polynomial({HahnSeries::zero(1, F), HahnSeries::zero(1, F), one});

  const auto w = strong_immediacy_witness(theta(F), PH, sq, 6);
  REQUIRE(w.ok);
  CHECK(w.gamma == q1(Rational(-1, 9)));
  REQUIRE(w.fixed_values.size() == 3);
  CHECK(*w.fixed_values[0] == q1(Rational(-2, 3)));
  CHECK(*w.fixed_values[1] == q1(Rational(-1, 3)));
  CHECK(*w.fixed_values[2] == q1(0));

  // A constant fixes trivially at the first truncation value.
  const Polynomial c = make_polynomial({one});
  const auto wc = strong_immediacy_witness(theta(F), PH, c, 6);
  REQUIRE(wc.ok);
  CHECK(wc.gamma == q1(Rational(-1, 3)));
}

TEST_CASE("transport through a square matches the direct distance") {
  const auto F = FiniteField::make(3);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto one = HahnSeries::monomial(F, q1(0), 1);
  const Polynomial sq = make_polynomial({HahnSeries::zero(1, F), HahnSeries::zero(1, F), one});

  const auto base = distance_of(theta(F), PH, 6);
  const auto w = strong_immediacy_witness(theta(F), PH, sq, 6);
  const auto tr = transport_distance(sq, base, w, PH);
  CHECK(tr.h == 1);
  CHECK(tr.shift == q1(Rational(-1, 3)));
  CHECK(tr.cut == Cut::principal_minus(q1(Rational(-1, 3))));
  CHECK(tr.cut == distance_of(pow_below_accumulation(theta(F), 2), PH, 8).cut);
}

TEST_CASE("linear transports shift by the coefficient value or not at all") {
  const auto F = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto base = distance_of(theta(F), PH, 6);

  // f = c*X with vc = 2.
  const Polynomial scale =
      make_polynomial({HahnSeries::zero(1, F), HahnSeries::monomial(F, q1(2), 1)});
  const auto ws = strong_immediacy_witness(theta(F), PH, scale, 6);
  const auto ts = transport_distance(scale, base, ws, PH);
  CHECK(ts.cut == Cut::principal_minus(q1(2)));

  // f = X + d leaves the distance untouched.
  const Polynomial add =
      make_polynomial({HahnSeries::monomial(F, q1(7), 1), HahnSeries::monomial(F, q1(0), 1)});
  const auto wa = strong_immediacy_witness(theta(F), PH, add, 6);
  const auto ta = transport_distance(add, base, wa, PH);
  CHECK(ta.cut == base.cut);
}

TEST_CASE("transport refuses an unresolved base") {
  const auto F = FiniteField::make(2);
  const auto PH = FieldDescriptor::perfect_hull(1, F);
  const auto one = HahnSeries::monomial(F, q1(0), 1);
  const Polynomial f = make_polynomial({HahnSeries::zero(1, F), one});

  const auto base = value_set(theta(F), PH, 5);  // unresolved by construction
  const auto w = strong_immediacy_witness(theta(F), PH, f, 6);
  CHECK_THROWS_AS(transport_distance(f, base, w, PH), UnresolvedBase);
}

TEST_CASE("defectless pair attains its maxima") {
  const auto F = FiniteField::make(2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F);
  // Elements of LaurentLevel(1) outside LaurentLevel(0) keep a half-integer
  // exponent, and the scan attains the maximum exactly there.
  const auto b1 = HahnSeries::from_terms(1, F, {{q1(-2), 1}, {q1(Rational(1, 2)), 1}});
  const auto b2 = HahnSeries::from_terms(1, F, {{q1(Rational(-3, 2)), 1}, {q1(4), 1}});
  for (const auto* b : {&b1, &b2}) {
    const auto rep = value_set(*b, L0, 8);
    CHECK(rep.cut.kind() == Cut::Kind::principal_plus);
    CHECK(rep.weakly_immediate == Immediacy::no);
  }
}
