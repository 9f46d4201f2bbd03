#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valdist/hahn.hpp"
#include "valdist/ordgroup.hpp"

namespace valdist {

// A coefficient field together with an exponent discipline, viewed as a
// subfield of the ambient generalized power series field.  Three concrete
// disciplines are supported plus a scripted stand-in for fields whose
// elements we cannot enumerate directly.
enum class FieldKind {
  laurent_level,    // exponents in p^(-level) * Z^r, coefficients in a subfield
  perfect_hull,     // exponents with p-power denominators, perfection closure
  full_restricted,  // per-coordinate disciplines, arbitrary mixes
  synthetic,        // opaque field described by a script of known answers
};

// Script backing a synthetic field: the answers we are allowed to hand out.
struct SyntheticScript {
  std::string generator;           // label of the adjoined element
  int generator_degree = 0;        // its degree over the scripted base
  std::string distance;            // rendered cut for dist(generator, base)
  std::vector<GroupElement> prefix;  // initial segment of v(generator - base)
  std::string eta;                 // label of the dependence witness, if any
  std::optional<GroupElement> eta_value;  // v(generator - eta) when known
  std::vector<std::string> census_cuts;   // rendered cuts, one per class
};

// Declared invariants that cannot be recomputed from the representation.
struct FieldMetadata {
  std::optional<int> declared_m;  // exponent of the purely wild part
  std::optional<int> declared_k;  // count of torsion-free summands involved
  bool perfect_hull_in_completion = false;
};

class FieldDescriptor {
 public:
  static FieldDescriptor laurent(int level, int rank,
                                 std::shared_ptr<const FiniteField> ambient,
                                 unsigned subfield_degree = 0);
  static FieldDescriptor perfect_hull(int rank,
                                      std::shared_ptr<const FiniteField> ambient,
                                      unsigned subfield_degree = 0);
  static FieldDescriptor full_restricted(OrderedGroupSpec spec,
                                         std::shared_ptr<const FiniteField> ambient,
                                         unsigned subfield_degree = 0,
                                         FieldMetadata metadata = {});
  static FieldDescriptor synthetic(SyntheticScript script, int rank,
                                   std::shared_ptr<const FiniteField> ambient,
                                   FieldMetadata metadata = {});

  FieldKind kind() const { return kind_; }
  int rank() const { return rank_; }
  int level() const { return level_; }
  const std::shared_ptr<const FiniteField>& ambient_field() const {
    return ambient_;
  }
  // Degree of the coefficient subfield actually belonging to this field;
  // 0 means the whole ambient field.
  unsigned subfield_degree() const { return subfield_degree_; }
  unsigned effective_subfield_degree() const;
  const FieldMetadata& metadata() const { return metadata_; }
  const SyntheticScript& script() const;
  const OrderedGroupSpec& exponent_spec() const { return spec_; }

  std::string id() const;

 private:
  FieldKind kind_;
  int rank_ = 1;
  int level_ = 0;
  std::shared_ptr<const FiniteField> ambient_;
  unsigned subfield_degree_ = 0;
  FieldMetadata metadata_;
  OrderedGroupSpec spec_ = OrderedGroupSpec::uniform(1, 2, CoordGroup::lattice(0));
  std::optional<SyntheticScript> script_;

  FieldDescriptor() : kind_(FieldKind::laurent_level) {}
};

// Whether a single monomial lies in the field (exponent discipline plus
// coefficient subfield).  Synthetic fields admit no monomial tests.
bool term_in_field(const Term& t, const FieldDescriptor& K);

// Whether a finite term list lies in the field (term by term).
bool contains(const std::vector<Term>& terms, const FieldDescriptor& K);

// Full membership of a series.  Exact for explicitly represented series;
// throws UnsupportedInput when the representation is a partial certificate
// the test cannot see past.
bool member_series(const HahnSeries& x, const FieldDescriptor& K);

// Structure test used by distance resolution: every explicit term, every
// surviving tail family (via its exponent law and coefficient orbit), and
// every partial-series wall of x must be expressible within K in the sense
// that all truncations of x land in K.  Unlike member_series this accepts
// infinite support.
bool structure_within(const HahnSeries& x, const FieldDescriptor& K);

// Structural content of x strictly below its wall: explicit terms to test one
// by one, plus surviving closed-form families wholly below the wall.
// rejected: a family straddles the wall in a way no finite enumeration settles.
struct StructuralSplit {
  std::vector<Term> explicit_terms;
  std::vector<TailFamily> law_families;
  bool rejected = false;
};
StructuralSplit split_at_wall(const HahnSeries& x);

// Exact tri-state for a surviving family: does every term of its periodic part
// lie in K?  nullopt when the deciding window exceeds the engine's cap.
std::optional<bool> family_tail_in_field(const TailFamily& f, const FieldDescriptor& K);

// Best approximation scan: the truncation of `a` to exponents <= target,
// keeping only terms lying in K, together with the largest value v(a - c)
// achieved and whether the scan proves the maximum is attained there.
struct Approximation {
  std::vector<Term> approximant;
  std::optional<GroupElement> achieved;  // nullopt encodes infinity (a in K)
  bool attained_max = false;
};
Approximation best_approx(const HahnSeries& a, const FieldDescriptor& K,
                          const GroupElement& target);

// log_p of the index [divisible hull discipline : K's discipline] per
// coordinate, summed; 0 when the discipline is already p-divisible.
// Throws UnsupportedInput for synthetic fields.
unsigned p_degree(const FieldDescriptor& K);

// The exponent m with [K : K_0] interpretation for the purely inseparable
// defect ledger, together with a short certificate string.
struct InsepExponent {
  int m = 0;
  std::string certificate;
};
InsepExponent insep_defect_exponent(const FieldDescriptor& K);

}  // namespace valdist
