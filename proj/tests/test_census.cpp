#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <valdist/census.hpp>
#include <valdist/errors.hpp>

using namespace valdist;

namespace {

GroupElement q1(const Rational& v) { return GroupElement({v}); }

HahnSeries mono(std::shared_ptr<const FiniteField> F, const Rational& e, unsigned c = 1) {
  return HahnSeries::monomial(std::move(F), q1(e), c);
}

BoundContext ctx_of(std::initializer_list<std::pair<const char*, long long>> vals,
                    unsigned prime = 0) {
  BoundContext c;
  for (const auto& [name, v] : vals) {
    const std::string n = name;
    if (n == "r") c.r = v;
    else if (n == "m") c.m = v;
    else if (n == "k") c.k = v;
    else if (n == "i") c.i = v;
    else if (n == "e") c.e = v;
    else if (n == "degree") c.degree = v;
    else if (n == "trdeg") c.trdeg = v;
  }
  c.prime = prime;
  return c;
}

CensusSample named(Polynomial f, const char* text) { return CensusSample{std::move(f), text}; }

const BoundResult& bound_named(const CensusReport& rep, const std::string& id) {
  for (const BoundResult& b : rep.bounds)
    if (b.theorem == id) return b;
  throw std::runtime_error("missing bound entry " + id);
}

SyntheticScript tower_script() {
  SyntheticScript s;
  s.generator = "vartheta";
  s.generator_degree = 2;
  s.distance = "0-";
  s.prefix = {q1(-1), q1(Rational(-1, 2))};
  s.census_cuts = {"0-", "0+"};
  return s;
}

}  // namespace

TEST_CASE("stated bounds evaluate to their exact arithmetic values") {
  CHECK(bound_value({"MT1", ctx_of({{"trdeg", 2}})}) == 4);
  CHECK(bound_value({"nonhens-general", ctx_of({{"m", 1}, {"degree", 2}}, 2)}) == 1);
  CHECK(bound_value({"nonhens-general", ctx_of({{"m", 2}, {"degree", 3}}, 2)}) == 3);
  CHECK(bound_value({"ndd_i", ctx_of({{"r", 1}, {"m", 0}, {"i", 3}})}) == 1);
  CHECK(bound_value({"nddtow", ctx_of({{"m", 2}, {"e", 1}})}) == 2);
  CHECK(bound_value({"nonhens-normal", ctx_of({{"m", 3}, {"e", 2}})}) == 6);
  CHECK(bound_value({"r+m", ctx_of({{"r", 1}, {"m", 0}})}) == 1);
  CHECK(bound_value({"r+k", ctx_of({{"r", 2}, {"k", 3}})}) == 5);
  CHECK(bound_value({"r+1", ctx_of({{"r", 1}})}) == 2);
  CHECK(bound_value({"two_r", ctx_of({{"r", 3}})}) == 6);
  CHECK(bound_value({"idegp", {}}) == 1);
}

TEST_CASE("bounds demand their parameters") {
  CHECK_THROWS_AS(bound_value({"MT1", {}}), UnsupportedInput);
  CHECK_THROWS_AS(bound_value({"nddtow", ctx_of({{"m", 2}})}), UnsupportedInput);
  CHECK_THROWS_AS(bound_value({"r+m", ctx_of({{"r", 1}, {"m", -1}})}), UnsupportedInput);
  CHECK_THROWS_AS(bound_value({"nonhens-general", ctx_of({{"m", 1}, {"degree", 2}}, 0)}),
                  UnsupportedInput);
  CHECK_THROWS_AS(bound_value({"no-such-bound", {}}), UnsupportedInput);
}

TEST_CASE("a prime-degree census collapses to one class modulo the value group") {
  const auto F = FiniteField::make(3);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  REQUIRE(ext.degree == 3);
  const auto samples = default_census_samples(K, 3, 50);
  const auto rep = ndd_census(ext, CutModulus::Kind::value_group, samples, 12);
  CHECK(rep.sample_count == 50);
  CHECK(rep.skipped == 0);
  CHECK(rep.ndd_lower == 1);
  REQUIRE(rep.buckets.size() == 1);
  CHECK(rep.buckets.front().count == 50);
  const auto& gate = bound_named(rep, "idegp");
  REQUIRE(gate.verdict == BoundVerdict::respected);
  CHECK(*gate.value == 1);
  CHECK(bound_named(rep, "two_r").verdict == BoundVerdict::respected);
  CHECK(bound_named(rep, "MT1").verdict == BoundVerdict::inapplicable);
}

TEST_CASE("transport and direct evaluation agree bucket for bucket") {
  const auto F = FiniteField::make(3);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  const auto zero = HahnSeries::zero(1, F);
  const std::vector<CensusSample> samples = {
      named(make_polynomial({zero, mono(F, 0)}), "X"),
      named(make_polynomial({zero, mono(F, 0, 2)}), "2X"),
      named(make_polynomial({zero, mono(F, 1)}), "tX"),
      named(make_polynomial({zero, mono(F, Rational(1, 3))}), "t^(1/3)X"),
      named(make_polynomial({zero, zero, mono(F, 0)}), "X^2"),
      named(make_polynomial({zero, mono(F, 0), mono(F, 0)}), "X^2+X"),
      named(make_polynomial({zero, zero, mono(F, 2)}), "t^2 X^2"),
  };
  for (const auto kind : {CutModulus::Kind::value_group, CutModulus::Kind::divisible_hull}) {
    const auto rep = ndd_census(ext, kind, samples, 12);
    const auto direct = brute_force_distances(ext, samples, kind, 12);
    REQUIRE(rep.skipped == 0);
    REQUIRE(rep.buckets.size() == direct.size());
    const CutModulus mod =
        kind == CutModulus::Kind::value_group
            ? CutModulus::value_group(K.exponent_spec().coords(), 3)
            : CutModulus::divisible_hull();
    for (size_t i = 0; i < direct.size(); ++i) {
      CHECK(equal_mod(rep.buckets[i].representative, direct[i].representative, mod) ==
            std::optional<bool>(true));
      CHECK(rep.buckets[i].count == direct[i].count);
    }
  }
}

TEST_CASE("class counts modulo the hull never exceed counts modulo the value group") {
  const auto F = FiniteField::make(3);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  const auto samples = default_census_samples(K, 3, 30);
  const auto coarse = ndd_census(ext, CutModulus::Kind::divisible_hull, samples, 12);
  const auto fine = ndd_census(ext, CutModulus::Kind::value_group, samples, 12);
  CHECK(coarse.ndd_lower <= fine.ndd_lower);
}

TEST_CASE("more samples never shrink the observed class count") {
  const auto F = FiniteField::make(3);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  auto some = default_census_samples(K, 3, 10);
  auto more = default_census_samples(K, 3, 10);
  const auto extra = default_census_samples(K, 3, 15, 0x0ddball);
  more.insert(more.end(), extra.begin(), extra.end());
  const auto small = ndd_census(ext, CutModulus::Kind::value_group, some, 12);
  const auto large = ndd_census(ext, CutModulus::Kind::value_group, more, 12);
  CHECK(small.ndd_lower <= large.ndd_lower);
}

TEST_CASE("a defectless pair yields an empty class list") {
  const auto F = FiniteField::make(2);
  const auto L0 = FieldDescriptor::laurent(0, 1, F);
  const ASExtensionRecord ext{&L0,          HahnSeries::zero(1, F),
                              mono(F, Rational(1, 2)),
                              2,            ASClass::unresolved,
                              {},           {}};
  const auto samples = default_census_samples(L0, 2, 20);
  const auto rep = ndd_census(ext, CutModulus::Kind::value_group, samples, 8);
  CHECK(rep.buckets.empty());
  CHECK(rep.ndd_lower == 0);
}

TEST_CASE("an unresolvable generator distance is reported, not bucketed") {
  const auto F = FiniteField::make(2);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto walled = HahnSeries::make(1, F, {Term{q1(-1), 1}}, {}, {},
                                       GroupElement::zero(1));
  const ASExtensionRecord ext{&K, HahnSeries::zero(1, F), walled, 2,
                              ASClass::unresolved, {}, {}};
  CHECK_THROWS_AS(ndd_census(ext, CutModulus::Kind::value_group, {}, 6), UnresolvedBase);
}

TEST_CASE("a scripted tower enumerates its declared classes") {
  const auto F = FiniteField::make(2);
  FieldMetadata md;
  md.declared_m = 2;
  const auto K = FieldDescriptor::synthetic(tower_script(), 1, F, md);
  const auto ext = scripted_extension(K);
  auto rep = ndd_census(ext, CutModulus::Kind::divisible_hull, {}, 6);
  CHECK(rep.ndd_lower == 2);
  CHECK(bound_named(rep, "nddtow").verdict == BoundVerdict::inapplicable);  // e unknown
  check_bounds(rep, ctx_of({{"r", 1}, {"m", 2}, {"e", 1}}, 2));
  const auto& tower = bound_named(rep, "nddtow");
  REQUIRE(tower.verdict == BoundVerdict::respected);
  CHECK(*tower.value == 2);
  CHECK(bound_named(rep, "r+m").verdict == BoundVerdict::respected);
}

TEST_CASE("a bound smaller than the observed count is flagged with witnesses") {
  const auto F = FiniteField::make(2);
  const auto K = FieldDescriptor::synthetic(tower_script(), 1, F);
  const auto ext = scripted_extension(K);
  auto rep = ndd_census(ext, CutModulus::Kind::divisible_hull, {}, 6);
  check_bounds(rep, ctx_of({{"m", 0}, {"e", 1}}, 2));
  CHECK(bound_named(rep, "nddtow").verdict == BoundVerdict::violated);
  for (const auto& bucket : rep.buckets) CHECK_FALSE(bucket.witnesses.empty());
}

TEST_CASE("the completion hypothesis gates its bound") {
  const auto F = FiniteField::make(2);
  const auto K = FieldDescriptor::synthetic(tower_script(), 1, F);
  const auto ext = scripted_extension(K);
  auto rep = ndd_census(ext, CutModulus::Kind::divisible_hull, {}, 6);
  CHECK(bound_named(rep, "r+1").verdict == BoundVerdict::inapplicable);
  BoundContext with_flag = ctx_of({{"r", 1}}, 2);
  with_flag.perfect_hull_in_completion = true;
  check_bounds(rep, with_flag);
  const auto& gated = bound_named(rep, "r+1");
  REQUIRE(gated.verdict == BoundVerdict::respected);
  CHECK(*gated.value == 2);
}

TEST_CASE("reports render deterministically with stable keys") {
  const auto F = FiniteField::make(3);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  const auto samples = default_census_samples(K, 3, 12);
  const auto once = render_census_report(
      ndd_census(ext, CutModulus::Kind::value_group, samples, 12));
  const auto twice = render_census_report(
      ndd_census(ext, CutModulus::Kind::value_group, samples, 12));
  CHECK(once == twice);
  CHECK(once.find("\"extension\"") < once.find("\"modulus\""));
  CHECK(once.find("\"modulus\"") < once.find("\"buckets\""));
  CHECK(once.find("\"ndd_lower\"") < once.find("\"bounds\""));
  CHECK(once.find("\"value-group\"") != std::string::npos);
}

TEST_CASE("direct evaluation rejects degrees beyond its certificates") {
  const auto F = FiniteField::make(5);
  const auto K = FieldDescriptor::perfect_hull(1, F);
  const auto ext = as_extension(mono(F, -1), K);
  const auto zero = HahnSeries::zero(1, F);
  const std::vector<CensusSample> cubic = {
      named(make_polynomial({zero, zero, zero, mono(F, 0)}), "X^3")};
  CHECK_THROWS_AS(brute_force_distances(ext, cubic, CutModulus::Kind::value_group, 8),
                  UnsupportedInput);
}
