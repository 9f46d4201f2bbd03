#pragma once

#include <string>
#include <vector>

#include "valdist/rational.hpp"

namespace valdist {

enum class Ordering { less, equal, greater };

// Element of the divisible hull of a finite-rank lexicographic group:
// an exact rational coordinate vector, most significant coordinate first.
// Immutable after construction.
class GroupElement {
public:
  GroupElement() = default;  // rank-0 placeholder; any real use must assign
  explicit GroupElement(std::vector<Rational> coords);
  static GroupElement zero(int rank);
  static GroupElement scalar(Rational value);  // rank 1 convenience

  int rank() const { return static_cast<int>(coords_.size()); }
  const Rational& coord(int i) const { return coords_[static_cast<size_t>(i)]; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  // Index of the first nonzero coordinate (archimedean level), or rank() if zero.
  int first_nonzero() const;

  GroupElement operator+(const GroupElement& other) const;
  GroupElement operator-(const GroupElement& other) const;
  GroupElement operator-() const;
  GroupElement scaled(const Rational& factor) const;

  bool operator==(const GroupElement& other) const;

private:
  std::vector<Rational> coords_;
};

// Lexicographic total order; throws RankMismatch on incompatible ranks.
Ordering compare(const GroupElement& x, const GroupElement& y);

inline bool lex_less(const GroupElement& x, const GroupElement& y) {
  return compare(x, y) == Ordering::less;
}
inline bool lex_less_equal(const GroupElement& x, const GroupElement& y) {
  return compare(x, y) != Ordering::greater;
}

// Per-coordinate subgroup of the rationals. `lattice` is p^(-level)·Z, so
// plain integers are lattice/level 0; `p_power_denominators` is Z[1/p].
struct CoordGroup {
  enum class Kind { lattice, p_power_denominators, all_rationals };
  Kind kind = Kind::lattice;
  int level = 0;  // meaningful for lattice only

  static CoordGroup integers() { return {Kind::lattice, 0}; }
  static CoordGroup lattice(int level) { return {Kind::lattice, level}; }
  static CoordGroup p_powers() { return {Kind::p_power_denominators, 0}; }
  static CoordGroup rationals() { return {Kind::all_rationals, 0}; }

  bool operator==(const CoordGroup&) const = default;
};

bool coord_member(const Rational& q, const CoordGroup& g, unsigned p);

// Finite-rank lexicographic group: rank, the ambient prime p, and one
// subgroup descriptor per coordinate. Immutable value type.
class OrderedGroupSpec {
public:
  OrderedGroupSpec(int rank, unsigned prime, std::vector<CoordGroup> coords);
  static OrderedGroupSpec uniform(int rank, unsigned prime, CoordGroup g);

  int rank() const { return rank_; }
  unsigned prime() const { return prime_; }
  const std::vector<CoordGroup>& coords() const { return coords_; }

  bool operator==(const OrderedGroupSpec&) const = default;

private:
  int rank_;
  unsigned prime_;
  std::vector<CoordGroup> coords_;
};

// Convex subgroup of the divisible hull: elements whose first rank-free_levels
// coordinates vanish. free_levels = 0 is the trivial subgroup, = rank the
// whole group; proper iff free_levels < rank.
struct ConvexSubgroup {
  int free_levels = 0;
  int rank = 1;

  bool is_trivial() const { return free_levels == 0; }
  bool is_proper() const { return free_levels < rank; }
  bool operator==(const ConvexSubgroup&) const = default;
};

int rank_of(const OrderedGroupSpec& spec);

// Membership of x in the described value group (componentwise test).
bool member_value_group(const GroupElement& x, const OrderedGroupSpec& spec);

// Membership in the divisible hull: a rank check plus trivially true.
bool member_divisible_hull(const GroupElement& x, const OrderedGroupSpec& spec);

bool member_convex(const GroupElement& x, const ConvexSubgroup& h);

// All proper convex subgroups of the divisible hull, increasing by inclusion:
// free_levels = 0, 1, ..., rank-1 (length = rank).
std::vector<ConvexSubgroup> convex_subgroups(const OrderedGroupSpec& spec);

std::string render_group_element(const GroupElement& x);
// Accepts "q" for rank 1 or "(q1,q2,...)"; validates against expected_rank.
GroupElement parse_group_element(std::string_view text, int expected_rank);

}  // namespace valdist
