#include "valdist/fields.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "valdist/errors.hpp"

namespace valdist {

namespace {

// p-free part of |n|: the denominator contribution from primes other than p.
Int p_free_part(Int n, unsigned p) {
  if (n < 0) n = -n;
  if (n == 0) return 0;
  const Int ip(p);
  while (n % ip == 0) n /= ip;
  return n;
}

// Multiplicative order of p modulo M (M >= 1 coprime to p); 0 when the
// search exceeds `cap` (callers treat that as "cannot certify").
unsigned long long mult_order(unsigned p, const Int& M, unsigned long long cap) {
  if (M <= 1) return 1;
  Int r = Int(p) % M;
  unsigned long long t = 1;
  while (r != 1) {
    r = (r * Int(p)) % M;
    if (++t > cap) return 0;
  }
  return t;
}

unsigned long long lcm_capped(unsigned long long a, unsigned long long b,
                              unsigned long long cap) {
  if (a == 0 || b == 0) return 0;
  const unsigned long long g = std::gcd(a, b);
  const unsigned long long l = (a / g) * b;
  return l > cap ? 0 : l;
}

// Smallest grid index >= block_from carrying a nonzero periodic coefficient.
long long first_live_grid(const TailFamily& f) {
  for (size_t j = 0; j < f.block.size(); ++j) {
    if (f.block[j] != 0) return f.block_from + static_cast<long long>(j);
  }
  return f.block_from;  // unreachable for surviving families
}

bool coeff_in_subfield(unsigned c, const FieldDescriptor& K) {
  return K.effective_subfield_degree() %
             K.ambient_field()->element_degree(c) ==
         0;
}

}  // namespace

// --- descriptor construction -------------------------------------------------

FieldDescriptor FieldDescriptor::laurent(int level, int rank,
                                         std::shared_ptr<const FiniteField> ambient,
                                         unsigned subfield_degree) {
  if (rank != 1)
    throw UnsupportedInput(
        "laurent descriptors are rank 1; use full-restricted lattices above rank 1");
  if (level < 0) throw UnsupportedInput("laurent level must be nonnegative");
  FieldDescriptor K;
  K.kind_ = FieldKind::laurent_level;
  K.rank_ = rank;
  K.level_ = level;
  K.ambient_ = std::move(ambient);
  K.subfield_degree_ = subfield_degree;
  K.spec_ = OrderedGroupSpec::uniform(rank, K.ambient_->p(),
                                      CoordGroup::lattice(level));
  return K;
}

FieldDescriptor FieldDescriptor::perfect_hull(
    int rank, std::shared_ptr<const FiniteField> ambient,
    unsigned subfield_degree) {
  FieldDescriptor K;
  K.kind_ = FieldKind::perfect_hull;
  K.rank_ = rank;
  K.ambient_ = std::move(ambient);
  K.subfield_degree_ = subfield_degree;
  K.spec_ =
      OrderedGroupSpec::uniform(rank, K.ambient_->p(), CoordGroup::p_powers());
  return K;
}

FieldDescriptor FieldDescriptor::full_restricted(
    OrderedGroupSpec spec, std::shared_ptr<const FiniteField> ambient,
    unsigned subfield_degree, FieldMetadata metadata) {
  if (spec.prime() != ambient->p())
    throw UnsupportedInput("exponent spec prime differs from the coefficient prime");
  FieldDescriptor K;
  K.kind_ = FieldKind::full_restricted;
  K.rank_ = spec.rank();
  K.ambient_ = std::move(ambient);
  K.subfield_degree_ = subfield_degree;
  K.metadata_ = std::move(metadata);
  K.spec_ = std::move(spec);
  return K;
}

FieldDescriptor FieldDescriptor::synthetic(SyntheticScript script, int rank,
                                           std::shared_ptr<const FiniteField> ambient,
                                           FieldMetadata metadata) {
  FieldDescriptor K;
  K.kind_ = FieldKind::synthetic;
  K.rank_ = rank;
  K.ambient_ = std::move(ambient);
  K.metadata_ = std::move(metadata);
  K.spec_ =
      OrderedGroupSpec::uniform(rank, K.ambient_->p(), CoordGroup::rationals());
  K.script_ = std::move(script);
  return K;
}

unsigned FieldDescriptor::effective_subfield_degree() const {
  return subfield_degree_ == 0 ? ambient_->degree() : subfield_degree_;
}

const SyntheticScript& FieldDescriptor::script() const {
  if (!script_) throw UnsupportedInput("descriptor carries no script");
  return *script_;
}

std::string FieldDescriptor::id() const {
  std::ostringstream out;
  switch (kind_) {
    case FieldKind::laurent_level:
      out << "laurent(level=" << level_;
      break;
    case FieldKind::perfect_hull:
      out << "perfect-hull(rank=" << rank_;
      break;
    case FieldKind::full_restricted: {
      out << "full-restricted(coords=";
      for (int i = 0; i < rank_; ++i) {
        const CoordGroup& g = spec_.coords()[static_cast<size_t>(i)];
        if (i) out << "*";
        switch (g.kind) {
          case CoordGroup::Kind::lattice:
            out << (g.level == 0 ? "Z" : "Z/p^" + std::to_string(g.level));
            break;
          case CoordGroup::Kind::p_power_denominators:
            out << "Z[1/p]";
            break;
          case CoordGroup::Kind::all_rationals:
            out << "Q";
            break;
        }
      }
      break;
    }
    case FieldKind::synthetic:
      out << "synthetic(" << script_->generator;
      break;
  }
  out << ",p=" << ambient_->p();
  const unsigned d = effective_subfield_degree();
  if (d != 1) out << ",F" << d;
  out << ")";
  return out.str();
}

// --- membership --------------------------------------------------------------

bool term_in_field(const Term& t, const FieldDescriptor& K) {
  if (K.kind() == FieldKind::synthetic)
    throw UnsupportedInput("synthetic fields admit no per-term membership test");
  if (t.exponent.rank() != K.rank()) throw RankMismatch("term rank mismatch");
  if (!member_value_group(t.exponent, K.exponent_spec())) return false;
  return coeff_in_subfield(t.coeff, K);
}

bool contains(const std::vector<Term>& terms, const FieldDescriptor& K) {
  if (K.kind() == FieldKind::synthetic) return true;  // scripted base is large
  return std::all_of(terms.begin(), terms.end(),
                     [&](const Term& t) { return term_in_field(t, K); });
}

// The p-adic side is settled by closed rules (it drifts monotonically), the
// side at primes other than p is exactly periodic in the grid index with
// period dividing ord(p mod M), and the coefficient orbit is the periodic
// block itself; one combined period therefore decides all indices.
std::optional<bool> family_tail_in_field(const TailFamily& f,
                                         const FieldDescriptor& K) {
  const unsigned p = K.exponent_spec().prime();
  const long long m_min = first_live_grid(f);
  const int r = K.rank();

  Int M(1);
  for (int c = 0; c < r; ++c) {
    const Rational& R = f.step.coord(c);
    const Rational& A = f.anchor.coord(c);
    const CoordGroup& g = K.exponent_spec().coords()[static_cast<size_t>(c)];
    if (g.kind == CoordGroup::Kind::all_rationals) continue;
    if (R == 0) {
      if (!coord_member(A, g, p)) return false;
      continue;
    }
    if (g.kind == CoordGroup::Kind::lattice) {
      if (f.shrink) return false;  // denominators of A - R/p^m grow without bound
      // Growing direction: v_p(A + R p^m) = min(v_p A, v_p R + m) once they
      // differ, and the min is monotone in m, so two closed conditions settle
      // the p-adic side for every index.
      if (A != 0 && p_adic_valuation(A, p) < -g.level) return false;
      if (p_adic_valuation(R, p) + m_min < -g.level) return false;
    }
    // Shared q-adic side (q != p): window length from the p-free denominators.
    M = (M / gcd(M, p_free_part(denominator_of(A), p))) *
        p_free_part(denominator_of(A), p);
    M = (M / gcd(M, p_free_part(denominator_of(R), p))) *
        p_free_part(denominator_of(R), p);
  }

  constexpr unsigned long long kOrderCap = 1u << 16;
  const unsigned long long T = mult_order(p, M, kOrderCap);
  if (T == 0) return std::nullopt;
  const unsigned long long W =
      lcm_capped(T, static_cast<unsigned long long>(f.block.size()), kOrderCap);
  if (W == 0) return std::nullopt;

  const unsigned sub = K.effective_subfield_degree();
  for (unsigned long long j = 0; j < W; ++j) {
    const long long grid = f.block_from + static_cast<long long>(j);
    const unsigned c = family_coeff(f, grid);
    if (c == 0) continue;
    if (K.ambient_field()->element_degree(c) > sub ||
        sub % K.ambient_field()->element_degree(c) != 0)
      return false;
    const GroupElement x = family_exponent(f, grid, p);
    for (int i = 0; i < r; ++i) {
      const CoordGroup& g = K.exponent_spec().coords()[static_cast<size_t>(i)];
      if (g.kind == CoordGroup::Kind::all_rationals) continue;
      if (f.step.coord(i) == 0) continue;  // settled above
      if (!has_p_power_denominator(x.coord(i), p)) return false;
    }
  }
  return true;
}

// Families entirely at or beyond the wall are dropped; families straddling it
// contribute their finite explicit prefix below it.
StructuralSplit split_at_wall(const HahnSeries& x) {
  StructuralSplit out;
  const auto& wall = x.wall();
  const unsigned p = x.field()->p();

  for (const Term& t : x.head()) {
    if (wall && !lex_less(t.exponent, *wall)) continue;  // masked region
    out.explicit_terms.push_back(t);
  }

  for (TailFamily& f : tail_families(x)) {
    for (const Term& t : f.ragged) {
      if (wall && !lex_less(t.exponent, *wall)) continue;
      out.explicit_terms.push_back(t);
    }
    if (!f.survives) continue;
    if (!wall) {
      out.law_families.push_back(std::move(f));
      continue;
    }
    // With a wall, only the part strictly below it is represented. Decide
    // whether the periodic terms cross the wall, and where.
    const GroupElement delta =
        f.shrink ? f.anchor - *wall : *wall - f.anchor;
    // shrink: term < wall  <=>  step/p^m > anchor - wall
    // grow:   term < wall  <=>  step*p^m < wall - anchor
    if (f.shrink && !lex_less(GroupElement::zero(delta.rank()), delta)) {
      // anchor <= wall: the whole family sits below the wall.
      out.law_families.push_back(std::move(f));
      continue;
    }
    if (!f.shrink && !lex_less(GroupElement::zero(delta.rank()), delta)) {
      continue;  // wall <= anchor: every term masked
    }
    const int js = f.step.first_nonzero();
    const int jd = delta.first_nonzero();
    const bool all_below = f.shrink ? (jd > js) : (jd < js);
    const bool none_below = f.shrink ? (jd < js) : (jd > js);
    if (all_below) {
      out.law_families.push_back(std::move(f));
      continue;
    }
    if (none_below) continue;
    // Same archimedean class: the family crosses the wall at a finite grid
    // index; enumerate the explicit prefix below it.
    long long grid = first_live_grid(f);
    const long long period = static_cast<long long>(f.block.size());
    const long long stop = grid + 4 * period +
                           static_cast<long long>(1u << 14);  // safety bound
    for (; grid < stop; ++grid) {
      const GroupElement e = family_exponent(f, grid, p);
      if (!lex_less(e, *wall)) break;  // exponents increase with the grid index
      const unsigned c = family_coeff(f, grid);
      if (c != 0) out.explicit_terms.push_back({e, c});
    }
    if (grid == stop) out.rejected = true;  // crossing not reached: give up
  }
  return out;
}

bool structure_within(const HahnSeries& x, const FieldDescriptor& K) {
  if (K.kind() == FieldKind::synthetic)
    throw UnsupportedInput("synthetic fields script their answers");
  if (!x.label().empty())
    throw UnsupportedInput("labeled series have no structural representation");
  if (x.rank() != K.rank()) throw RankMismatch("series rank mismatch");

  const StructuralSplit parts = split_at_wall(x);
  if (parts.rejected) return false;
  for (const Term& t : parts.explicit_terms) {
    if (!term_in_field(t, K)) return false;
  }
  for (const TailFamily& f : parts.law_families) {
    if (family_tail_in_field(f, K) != std::optional<bool>(true)) return false;
  }
  return true;
}

bool member_series(const HahnSeries& x, const FieldDescriptor& K) {
  if (K.kind() == FieldKind::synthetic) {
    if (!x.label().empty()) {
      if (x.label() == K.script().generator) return K.script().generator_degree <= 1;
      throw UnsupportedInput("script does not cover this label");
    }
    if (x.has_infinite_support() || x.wall())
      throw UnsupportedInput("script answers membership for finite data only");
    return true;  // scripted base contains the configured finite data
  }
  if (!x.label().empty())
    throw UnsupportedInput("labeled series have no structural representation");
  if (x.rank() != K.rank()) throw RankMismatch("series rank mismatch");

  const StructuralSplit parts = split_at_wall(x);
  if (parts.rejected)
    throw UnsupportedInput("family analysis exceeded its certification cap");

  // Per-element uniform bounds: kinds whose members each have a bounded
  // denominator level reject every surviving shrink family outright (its
  // denominators grow without bound inside the single element).
  const bool bounded_level = K.kind() == FieldKind::laurent_level ||
                             K.kind() == FieldKind::perfect_hull;

  for (const Term& t : parts.explicit_terms) {
    if (!term_in_field(t, K)) return false;  // a represented term refutes
  }
  for (const TailFamily& f : parts.law_families) {
    if (f.shrink && bounded_level) return false;
    const std::optional<bool> law = family_tail_in_field(f, K);
    if (!law)
      throw UnsupportedInput("family analysis exceeded its certification cap");
    if (!*law) return false;
  }

  if (x.wall())
    throw UnsupportedInput("partial series cannot certify membership");
  return true;
}

// --- best approximation --------------------------------------------------------

Approximation best_approx(const HahnSeries& a, const FieldDescriptor& K,
                          const GroupElement& target) {
  if (K.kind() == FieldKind::synthetic) {
    const SyntheticScript& s = K.script();
    if (a.label() != s.generator)
      throw UnsupportedInput("script does not cover this element");
    Approximation out;
    out.attained_max = false;  // scripted distances are never attained
    const GroupElement* best = nullptr;
    for (const GroupElement& g : s.prefix) {
      if (lex_less_equal(g, target) && (!best || lex_less(*best, g))) best = &g;
    }
    if (!best)
      throw UnsupportedInput("scripted value set starts beyond the target");
    out.achieved = *best;
    return out;
  }

  Approximation out;
  const std::vector<Term> scan = terms_through(a, target);
  for (size_t i = 0; i < scan.size(); ++i) {
    const Term& t = scan[i];
    if (lex_less(target, t.exponent)) {
      // First term beyond the target: it caps what this truncation achieves.
      out.achieved = t.exponent;
      out.attained_max = !term_in_field(t, K);
      return out;
    }
    if (!term_in_field(t, K)) {
      out.achieved = t.exponent;
      out.attained_max = true;  // this term blocks every element of K
      return out;
    }
    out.approximant.push_back(t);
  }
  // Support exhausted at or before the target: the element itself lies in K.
  out.achieved = std::nullopt;
  out.attained_max = true;
  return out;
}

// --- invariants ----------------------------------------------------------------

unsigned p_degree(const FieldDescriptor& K) {
  switch (K.kind()) {
    case FieldKind::laurent_level:
      return 1;
    case FieldKind::perfect_hull:
      return 0;
    case FieldKind::full_restricted: {
      unsigned k = 0;
      for (const CoordGroup& g : K.exponent_spec().coords()) {
        if (g.kind == CoordGroup::Kind::lattice) ++k;  // Z/pZ-class survives
      }
      return k;  // finite coefficient fields are perfect: no extra classes
    }
    case FieldKind::synthetic:
      break;
  }
  throw UnsupportedInput("p-degree of a synthetic field is not computable");
}

InsepExponent insep_defect_exponent(const FieldDescriptor& K) {
  switch (K.kind()) {
    case FieldKind::perfect_hull:
      return {0, "perfect field"};
    case FieldKind::laurent_level:
      return {0, "value-group index"};
    case FieldKind::full_restricted: {
      const bool divisible = std::all_of(
          K.exponent_spec().coords().begin(), K.exponent_spec().coords().end(),
          [](const CoordGroup& g) {
            return g.kind != CoordGroup::Kind::lattice;
          });
      if (divisible) return {0, "p-divisible exponent discipline"};
      if (K.metadata().declared_m) return {*K.metadata().declared_m, "declared"};
      throw Undecidable("no rule applies and no exponent was declared");
    }
    case FieldKind::synthetic:
      if (K.metadata().declared_m) return {*K.metadata().declared_m, "declared"};
      throw Undecidable("synthetic field lacks a declared exponent");
  }
  throw UnsupportedInput("unknown field kind");
}

}  // namespace valdist
