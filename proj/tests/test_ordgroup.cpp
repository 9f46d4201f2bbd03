#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "valdist/errors.hpp"
#include "valdist/ordgroup.hpp"

using namespace valdist;

namespace {
GroupElement g2(const Rational& a, const Rational& b) {
  return GroupElement({a, b});
}
}  // namespace

TEST_CASE("lexicographic comparison, most significant first") {
  CHECK(compare(g2(0, 5), g2(1, -100)) == Ordering::less);
  CHECK(compare(g2(1, 0), g2(1, 0)) == Ordering::equal);
  CHECK(compare(g2(2, -1), g2(1, 100)) == Ordering::greater);
  CHECK(lex_less(GroupElement::scalar(Rational(-1, 2)),
                 GroupElement::scalar(Rational(-1, 4))));
  CHECK_THROWS_AS(compare(GroupElement::scalar(1), g2(1, 0)), RankMismatch);
}

TEST_CASE("arithmetic and archimedean level") {
  const GroupElement x = g2(Rational(1, 2), 3);
  const GroupElement y = g2(Rational(-1, 2), 1);
  CHECK((x + y) == g2(0, 4));
  CHECK((x - x).is_zero());
  CHECK((-y) == g2(Rational(1, 2), -1));
  CHECK(x.scaled(Rational(2)) == g2(1, 6));
  CHECK(g2(0, 7).first_nonzero() == 1);
  CHECK(g2(3, 0).first_nonzero() == 0);
  CHECK(GroupElement::zero(2).first_nonzero() == 2);
}

TEST_CASE("coordinate subgroup membership") {
  const unsigned p = 2;
  CHECK(coord_member(Rational(4), CoordGroup::integers(), p));
  CHECK_FALSE(coord_member(Rational(1, 2), CoordGroup::integers(), p));
  CHECK(coord_member(Rational(1, 2), CoordGroup::lattice(1), p));
  CHECK_FALSE(coord_member(Rational(1, 4), CoordGroup::lattice(1), p));
  CHECK(coord_member(Rational(1, 4), CoordGroup::lattice(2), p));
  CHECK(coord_member(Rational(-3, 1024), CoordGroup::p_powers(), p));
  CHECK_FALSE(coord_member(Rational(1, 3), CoordGroup::p_powers(), p));
  CHECK(coord_member(Rational(1, 3), CoordGroup::rationals(), p));
}

TEST_CASE("value group and hull membership") {
  const auto spec = OrderedGroupSpec(
      2, 2, {CoordGroup::integers(), CoordGroup::p_powers()});
  CHECK(member_value_group(g2(3, Rational(5, 8)), spec));
  CHECK_FALSE(member_value_group(g2(Rational(1, 2), 0), spec));
  CHECK_FALSE(member_value_group(g2(1, Rational(1, 3)), spec));
  CHECK(member_divisible_hull(g2(Rational(1, 3), Rational(1, 7)), spec));
  CHECK_THROWS_AS(member_value_group(GroupElement::scalar(1), spec),
                  RankMismatch);
}

TEST_CASE("convex subgroups order by inclusion") {
  const auto spec = OrderedGroupSpec::uniform(3, 3, CoordGroup::integers());
  const auto chain = convex_subgroups(spec);
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].free_levels == 0);
  CHECK(chain[0].is_trivial());
  CHECK(chain[2].free_levels == 2);
  CHECK(chain[2].is_proper());
  // free_levels = j keeps elements whose first rank - j coordinates vanish.
  const GroupElement low({0, 0, Rational(1, 2)});
  CHECK(member_convex(low, chain[1]));
  CHECK_FALSE(member_convex(low, chain[0]));
  const GroupElement mid({0, 1, 0});
  CHECK_FALSE(member_convex(mid, chain[1]));
  CHECK(member_convex(mid, chain[2]));
  CHECK(member_convex(GroupElement::zero(3), chain[0]));
}

TEST_CASE("group element rendering round-trip") {
  CHECK(render_group_element(GroupElement::scalar(Rational(-1, 3))) == "-1/3");
  CHECK(render_group_element(g2(1, Rational(1, 2))) == "(1,1/2)");
  CHECK(parse_group_element("-1/3", 1) ==
        GroupElement::scalar(Rational(-1, 3)));
  CHECK(parse_group_element("(1,1/2)", 2) == g2(1, Rational(1, 2)));
  CHECK_THROWS_AS(parse_group_element("(1,2)", 1), ParseError);
  CHECK_THROWS_AS(parse_group_element("(1,", 2), ParseError);
}
