#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuts.hpp"
#include "extension.hpp"
#include "fields.hpp"
#include "hahn.hpp"
#include "rational.hpp"

namespace valdist {

// Parameters feeding the distance-count bounds.  Only the entries a given
// bound consumes need to be present; checks gate applicability on them.
struct BoundContext {
  std::optional<long long> r;      // rational rank of the base value group
  std::optional<long long> m;      // exponent of the purely wild part
  std::optional<long long> k;      // count of torsion-free summands involved
  std::optional<long long> i;      // iteration depth
  std::optional<long long> e;      // ramification index of the extension
  std::optional<long long> degree; // [L:K]
  std::optional<long long> trdeg;  // transcendence degree over the prime field
  unsigned prime = 0;
  bool perfect_hull_in_completion = false;
};

struct BoundQuery {
  std::string theorem;  // one of: nddtow, nonhens-general, nonhens-normal,
                        // r+m, r+k, MT1, ndd_i, r+1, two_r, idegp
  BoundContext params;
};

// Exact value of the named bound.  Throws UnsupportedInput when a parameter
// the bound consumes is missing or negative.
Int bound_value(const BoundQuery& q);

enum class BoundVerdict { respected, violated, inapplicable };

std::string render_verdict(BoundVerdict v);

struct BoundResult {
  std::string theorem;
  std::optional<Int> value;  // absent when inapplicable
  BoundVerdict verdict = BoundVerdict::inapplicable;
};

// One distance class: every member cut equals the representative up to a
// shift from the chosen modulus.
struct CensusBucket {
  Cut representative = Cut::infinity(1);
  std::vector<std::string> witnesses;  // rendered polynomials landing here
  std::size_t count = 0;
};

struct CensusReport {
  std::string extension;
  CutModulus::Kind modulus = CutModulus::Kind::value_group;
  unsigned degree_bound = 0;  // sampled polynomials have degree below this
  std::size_t sample_count = 0;
  std::size_t skipped = 0;  // samples without a usable certificate
  std::size_t budget = 0;
  std::vector<CensusBucket> buckets;  // ordered by rendered representative
  std::size_t ndd_lower = 0;          // distinct classes actually observed
  std::vector<BoundResult> bounds;
};

// A sampled polynomial over the base field plus its display form.
struct CensusSample {
  Polynomial f;
  std::string text;
};

// Default enumeration family: nonconstant polynomials of degree below
// `degree_bound` whose coefficients are monomials c*t^q with unit c from the
// base residue field and small exact q from the base value group (covering
// integer shifts and, where the group admits them, p-fractional ones).
std::vector<CensusSample> default_census_samples(const FieldDescriptor& K,
                                                 unsigned degree_bound, std::size_t count,
                                                 std::uint64_t seed = 0xced5u);

// Count distance classes of f(generator) over the base, one transport per
// sampled polynomial, bucketed modulo the value group or its divisible hull.
// The observed count is only ever a lower bound for the true class count;
// the report pairs it with every applicable stated bound.  Scripted bases
// enumerate their declared class list instead of sampling.
// Throws UnresolvedBase when the generator's own distance does not resolve
// within the budget.
CensusReport ndd_census(const ASExtensionRecord& ext, CutModulus::Kind modulus,
                        const std::vector<CensusSample>& samples, std::size_t budget);

// Independent oracle: the same buckets from direct series evaluation of
// f(generator) and a fresh distance resolution, bypassing transport.
// Degree at most 2 (via a completed square); higher degrees are unsupported.
std::vector<CensusBucket> brute_force_distances(const ASExtensionRecord& ext,
                                                const std::vector<CensusSample>& samples,
                                                CutModulus::Kind modulus, std::size_t budget);

// Re-evaluate every stated bound against the report's observed class count,
// marking bounds whose hypotheses the context does not establish as
// inapplicable.
CensusReport& check_bounds(CensusReport& report, const BoundContext& ctx);

// Stable-key JSON rendering of a report, for diff-based comparison.
std::string render_census_report(const CensusReport& report);

}  // namespace valdist
