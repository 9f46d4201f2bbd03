#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "valdist/ordgroup.hpp"

namespace valdist {

// Symbolic cut in the divisible hull of a finite-rank lexicographic group.
//
// Variants and their lower sets:
//   principal_plus(g)   { x : x <= g }
//   principal_minus(g)  { x : x < g }
//   edge_minus(H, a)    { x : x < a + H }   (lower edge of the coset a+H)
//   edge_plus(H, a)     { x : exists h in H with x <= a + h }
//   infinity            the whole group
//   unresolved(prefix)  only a finite increasing prefix of values is known
//
// Constructors normalize edges over the trivial subgroup to principal cuts,
// so a stored edge always has a proper nontrivial H (1 <= free_levels < rank).
// The edge parameter is kept verbatim (not reduced modulo H).
class Cut {
public:
  enum class Kind { principal_plus, principal_minus, edge_minus, edge_plus, infinity, unresolved };

  static Cut principal_plus(GroupElement g);
  static Cut principal_minus(GroupElement g);
  static Cut edge_minus(ConvexSubgroup h, GroupElement a);
  static Cut edge_plus(ConvexSubgroup h, GroupElement a);
  static Cut infinity(int rank);
  static Cut unresolved(std::vector<GroupElement> prefix, std::size_t budget_used);

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  bool resolved() const { return kind_ != Kind::unresolved; }

  // Principal/edge parameter; throws for infinity/unresolved.
  const GroupElement& point() const;
  // Edge subgroup; throws for non-edge variants.
  const ConvexSubgroup& subgroup() const;
  const std::vector<GroupElement>& prefix() const;  // unresolved only
  std::size_t budget_used() const { return budget_; }

  bool operator==(const Cut& other) const;

private:
  Cut(Kind kind, int rank);
  Kind kind_;
  int rank_;
  std::optional<GroupElement> point_;
  std::optional<ConvexSubgroup> subgroup_;
  std::vector<GroupElement> prefix_;
  std::size_t budget_ = 0;
};

// Cut of the translated set alpha + lower set. Unresolved cuts propagate the
// shift onto the stored prefix values.
Cut shift_cut(const Cut& c, const GroupElement& alpha);

// Cut of the dilated lower set p^s · L (s may be negative). H is divisible,
// so edge subgroups are unchanged; unresolved prefixes are scaled.
Cut scale_cut(const Cut& c, int s, unsigned p);

// Does some shift by an element of the modulus carry c1 onto c2?
// nullopt = indeterminate (an unresolved input). The modulus is described
// per-coordinate (value group) or as the whole divisible hull.
struct CutModulus {
  enum class Kind { value_group, divisible_hull };
  Kind kind = Kind::divisible_hull;
  std::vector<CoordGroup> coords;  // value_group only; one entry per coordinate
  unsigned prime = 2;

  static CutModulus divisible_hull();
  static CutModulus value_group(std::vector<CoordGroup> coords, unsigned prime);
};

std::optional<bool> equal_mod(const Cut& c1, const Cut& c2, const CutModulus& modulus);

// Total order by inclusion of lower sets; nullopt when either side is unresolved.
std::optional<Ordering> compare_cuts(const Cut& c1, const Cut& c2);

// Membership of a point in the lower set; false is meaningful only for
// resolved cuts (throws on unresolved).
bool lower_contains(const Cut& c, const GroupElement& x);

struct EdgeInfo {
  ConvexSubgroup subgroup;  // trivial for principal cuts
  GroupElement point;
  enum class Side { lower, upper } side;
};

// Principal cuts classify as edges of the trivial subgroup; infinity and
// unresolved cuts have no edge classification.
std::optional<EdgeInfo> classify_edge(const Cut& c);

// Rendering grammar: "g-", "g+", "edge-(j)@a", "edge+(j)@a", "inf",
// "unresolved[v1,v2,...]" with g, a, vi as exact rational tuples.
std::string render_cut(const Cut& c);
Cut parse_cut(std::string_view text, int rank);

}  // namespace valdist
