#include <valdist/distance.hpp>

#include <algorithm>
#include <utility>

#include <valdist/errors.hpp>

namespace valdist {

namespace {

Immediacy weak_from_cut(const Cut& c) {
  switch (c.kind()) {
    case Cut::Kind::infinity:
    case Cut::Kind::principal_plus:
      return Immediacy::no;
    case Cut::Kind::principal_minus:
    case Cut::Kind::edge_minus:
    case Cut::Kind::edge_plus:
      return Immediacy::yes;
    case Cut::Kind::unresolved:
      return Immediacy::unknown_at_budget;
  }
  return Immediacy::unknown_at_budget;
}

DistanceReport scripted_report(const HahnSeries& a, const FieldDescriptor& K,
                               std::size_t budget) {
  DistanceReport rep;
  rep.element = render_series(a);
  rep.field_id = K.id();
  const SyntheticScript& s = K.script();
  if (a.label().empty() || a.label() != s.generator) {
    if (member_series(a, K)) {
      rep.cut = Cut::infinity(K.rank());
      rep.weakly_immediate = Immediacy::no;
      return rep;
    }
    throw UnsupportedInput("script does not cover this element");
  }
  if (s.generator_degree <= 1) {
    rep.cut = Cut::infinity(K.rank());
    rep.weakly_immediate = Immediacy::no;
    return rep;
  }
  const std::size_t n = std::min(budget, s.prefix.size());
  rep.value_prefix.assign(s.prefix.begin(), s.prefix.begin() + static_cast<long>(n));
  rep.budget_used = n;
  rep.cut = parse_cut(s.distance, K.rank());
  rep.weakly_immediate = weak_from_cut(rep.cut);
  return rep;
}

// Whether e sits on the family's exponent grid (at any integer index).  Used
// as a merge guard: coefficients at shared exponents combine in the stream, so
// no single-source coefficient there can prove anything.
bool on_family_grid(const GroupElement& e, const TailFamily& f, unsigned p) {
  const GroupElement d = f.shrink ? f.anchor - e : e - f.anchor;
  const int i = f.step.first_nonzero();
  if (i < 0) return false;
  const Rational ratio = d.coord(i) / f.step.coord(i);
  if (!(ratio > 0)) return false;
  if (!(d == f.step.scaled(ratio))) return false;
  return ratio == pow_rational(p, p_adic_valuation(ratio, p));
}

struct Certificate {
  bool resolved = false;
  Cut cut = Cut::infinity(1);
  Immediacy weak = Immediacy::unknown_at_budget;
};

// Resolution at the first accumulation point L of the support: if everything
// strictly below L provably lies in K except that the accumulated whole does
// not, the value set is cofinal below L and the distance is the lower cut at L
// in the archimedean class of the approach; if instead a provably bad term
// lives below L, the maximum is attained just there.
Certificate tail_certificate(const HahnSeries& a, const FieldDescriptor& K) {
  Certificate out;
  const auto acc = first_accumulation(a);
  if (!acc) return out;
  const GroupElement& L = acc->limit;
  const FiniteField& F = *a.field();
  const unsigned p = F.p();

  HahnSeries capped = HahnSeries::make(a.rank(), a.field(), a.head(), a.shrink_tails(),
                                       a.grow_tails(), L);
  StructuralSplit parts = split_at_wall(capped);
  if (parts.rejected) return out;
  const std::vector<Term> expl = normalize_terms(F, std::move(parts.explicit_terms));

  // First provably-bad exponent per source, or certification of the whole law.
  std::optional<GroupElement> bad;
  const TailFamily* bad_family = nullptr;
  for (const TailFamily& f : parts.law_families) {
    const auto ok = family_tail_in_field(f, K);
    if (!ok) return out;  // deciding window exceeded: nothing provable
    if (*ok) continue;
    constexpr long long kSearch = 1024;
    std::optional<GroupElement> found;
    for (long long grid = f.block_from; grid < f.block_from + kSearch; ++grid) {
      const unsigned c = family_coeff(f, grid);
      if (c == 0) continue;
      const GroupElement e = family_exponent(f, grid, p);
      if (!term_in_field({e, c}, K)) {
        found = e;
        break;
      }
    }
    if (!found) return out;  // the law fails, but past any workable horizon
    if (!bad || lex_less(*found, *bad)) {
      bad = found;
      bad_family = &f;
    }
  }
  for (const Term& t : expl) {
    if (term_in_field(t, K)) continue;
    if (!bad || lex_less(t.exponent, *bad)) {
      bad = t.exponent;
      bad_family = nullptr;
    }
    break;  // expl is sorted: the first bad explicit term is the smallest
  }

  if (bad) {
    // A coefficient merge at the same exponent could cancel the offender, so a
    // shared grid point proves nothing.
    for (const TailFamily& f : parts.law_families) {
      if (&f != bad_family && on_family_grid(*bad, f, p)) return out;
    }
    if (bad_family) {
      for (const Term& t : expl) {
        if (t.exponent == *bad) return out;
      }
    }
    out.resolved = true;
    out.cut = Cut::principal_plus(*bad);
    out.weak = Immediacy::no;
    return out;
  }

  // All content below L lies in K term by term; the cut at L is real exactly
  // when no K-element matches a through L, i.e. the accumulated part is not
  // itself a member.
  std::vector<ShrinkTail> shrinks;
  std::vector<GrowTail> grows;
  for (const TailFamily& f : parts.law_families) {
    for (size_t idx : f.members) {
      if (f.shrink)
        shrinks.push_back(a.shrink_tails()[idx]);
      else
        grows.push_back(a.grow_tails()[idx]);
    }
  }
  HahnSeries portion =
      HahnSeries::make(a.rank(), a.field(), expl, std::move(shrinks), std::move(grows));
  bool portion_member = false;
  try {
    portion_member = member_series(portion, K);
  } catch (const UnsupportedInput&) {
    return out;
  }
  if (portion_member) return out;  // K reaches past L: resolution lies beyond this scan

  const int free_levels = a.rank() - 1 - acc->step.first_nonzero();
  out.resolved = true;
  out.cut = Cut::edge_minus(ConvexSubgroup{free_levels, a.rank()}, L);
  out.weak = Immediacy::yes;
  return out;
}

DistanceReport distance_core(const HahnSeries& a, const FieldDescriptor& K,
                             std::size_t budget, bool recognize) {
  if (a.rank() != K.rank()) throw RankMismatch("element rank does not match the field");
  if (K.kind() == FieldKind::synthetic) return scripted_report(a, K, budget);
  if (!a.label().empty())
    throw UnsupportedInput("labeled series carry no structure; use a scripted field");

  DistanceReport rep;
  rep.element = render_series(a);
  rep.field_id = K.id();

  bool member_known = true;
  bool is_member = false;
  try {
    is_member = member_series(a, K);
  } catch (const UnsupportedInput&) {
    member_known = false;
  }
  if (member_known && is_member) {
    rep.cut = Cut::infinity(K.rank());
    rep.weakly_immediate = Immediacy::no;
    return rep;
  }

  const auto terms = first_terms(a, a.wall(), static_cast<int>(budget) + 1);
  const bool exhausted = terms.size() <= budget;
  const std::size_t scanned = std::min(terms.size(), budget);
  for (std::size_t j = 0; j < scanned; ++j) {
    rep.value_prefix.push_back(terms[j].exponent);
    rep.budget_used = j + 1;
    if (!term_in_field(terms[j], K)) {
      // c matching a below this term attains the maximum of v(a - K) here.
      rep.cut = Cut::principal_plus(terms[j].exponent);
      rep.weakly_immediate = Immediacy::no;
      return rep;
    }
  }

  if (exhausted) {
    if (!a.wall()) {
      // Finite support entirely within K: the element is a member after all;
      // only reachable when the membership test could not answer directly.
      if (!member_known) {
        rep.cut = Cut::infinity(K.rank());
        rep.weakly_immediate = Immediacy::no;
        return rep;
      }
      throw Error("membership test contradicts the term scan");
    }
    if (rep.value_prefix.empty())
      throw UnsupportedInput("no represented terms below the wall to scan");
    rep.cut = Cut::unresolved(rep.value_prefix, rep.budget_used);
    rep.weakly_immediate = Immediacy::unknown_at_budget;
    return rep;
  }

  if (recognize) {
    const Certificate cert = tail_certificate(a, K);
    if (cert.resolved) {
      rep.cut = cert.cut;
      rep.weakly_immediate = cert.weak;
      if (cert.cut.kind() == Cut::Kind::principal_plus &&
          (rep.value_prefix.empty() ||
           lex_less(rep.value_prefix.back(), cert.cut.point()))) {
        rep.value_prefix.push_back(cert.cut.point());
      }
      return rep;
    }
  }
  rep.cut = Cut::unresolved(rep.value_prefix, rep.budget_used);
  rep.weakly_immediate = Immediacy::unknown_at_budget;
  return rep;
}

}  // namespace

DistanceReport value_set(const HahnSeries& a, const FieldDescriptor& K, std::size_t budget) {
  return distance_core(a, K, budget, false);
}

DistanceReport distance_of(const HahnSeries& a, const FieldDescriptor& K,
                           std::size_t budget) {
  return distance_core(a, K, budget, true);
}

Immediacy is_weakly_immediate(const HahnSeries& a, const FieldDescriptor& K,
                              std::size_t budget) {
  return distance_of(a, K, budget).weakly_immediate;
}

ImmediacyWitness strong_immediacy_witness(const HahnSeries& a, const FieldDescriptor& K,
                                          const Polynomial& f, std::size_t budget) {
  ImmediacyWitness w;
  if (K.kind() == FieldKind::synthetic)
    throw UnsupportedInput("synthetic fields script their answers");
  const int D = f.degree();
  if (D < 0) {
    const auto lead = leading_term(a);
    if (!lead) {
      w.failure = "no terms to anchor gamma";
      return w;
    }
    w.ok = true;
    w.gamma = lead->exponent;
    return w;
  }

  const auto terms = first_terms(a, a.wall(), static_cast<int>(budget));
  std::vector<Term> good;
  for (const Term& t : terms) {
    if (!term_in_field(t, K)) break;
    good.push_back(t);
  }
  if (good.size() < 2) {
    w.failure = "budget leaves too few approximants to test stabilization";
    return w;
  }

  // vals[j]: leading exponents of the Hasse rows at the j-term truncation;
  // v(a - c_j) = exponent of the (j+1)-th term, i.e. good[j].
  std::vector<std::vector<std::optional<GroupElement>>> vals;
  for (std::size_t j = 0; j < good.size(); ++j) {
    const std::vector<Term> cj(good.begin(), good.begin() + static_cast<long>(j));
    const auto rows = hasse_taylor_finite(f, cj);
    std::vector<std::optional<GroupElement>> v;
    v.reserve(rows.size());
    for (const auto& row : rows)
      v.push_back(row.empty() ? std::nullopt
                              : std::optional<GroupElement>(row.front().exponent));
    vals.push_back(std::move(v));
  }

  for (std::size_t s = 0; s + 2 <= vals.size(); ++s) {
    bool stable = true;
    for (std::size_t j = s + 1; j < vals.size() && stable; ++j) stable = (vals[j] == vals[s]);
    if (stable) {
      w.ok = true;
      w.gamma = good[s].exponent;
      w.fixed_values = vals[s];
      return w;
    }
  }
  w.failure = "row values kept moving across all tested truncations";
  return w;
}

TransportResult transport_distance(const Polynomial& f, const DistanceReport& base,
                                   const ImmediacyWitness& witness,
                                   const FieldDescriptor& K) {
  if (base.cut.kind() == Cut::Kind::unresolved)
    throw UnresolvedBase("transport requires a resolved base distance");
  TransportResult out;
  out.shift = GroupElement::zero(K.rank());
  const int D = f.degree();
  if (base.cut.kind() == Cut::Kind::infinity || D <= 0) {
    out.cut = Cut::infinity(K.rank());
    return out;
  }
  if (!witness.ok) throw UnsupportedInput("transport needs a stabilized witness");

  const unsigned p = K.exponent_spec().prime();
  std::vector<unsigned> cands;
  for (unsigned long long h = 1; h <= static_cast<unsigned long long>(D); h *= p) {
    if (h < witness.fixed_values.size() && witness.fixed_values[static_cast<size_t>(h)])
      cands.push_back(static_cast<unsigned>(h));
    if (D < static_cast<int>(p)) break;  // degree below p forces h = 1
  }
  if (cands.empty()) throw UnsupportedInput("no transportable row has a fixed value");

  // The minimizing row near the cut: compare the lines w_h + h*g at the cut
  // point; ties go to the steeper line when the point is approached from
  // below, to the shallower one when the maximum is attained at the point.
  const GroupElement& pt = base.cut.point();
  const bool from_below = base.cut.kind() == Cut::Kind::principal_minus ||
                          base.cut.kind() == Cut::Kind::edge_minus;
  unsigned h = cands.front();
  GroupElement best =
      *witness.fixed_values[h] + pt.scaled(Rational(static_cast<long long>(h)));
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const unsigned c = cands[i];
    const GroupElement score =
        *witness.fixed_values[c] + pt.scaled(Rational(static_cast<long long>(c)));
    if (lex_less(score, best) || (score == best && from_below && c > h)) {
      h = c;
      best = score;
    }
  }

  int s = 0;
  for (unsigned long long x = h; x > 1; x /= p) ++s;
  out.h = h;
  out.shift = *witness.fixed_values[h];
  out.cut = shift_cut(scale_cut(base.cut, s, p), out.shift);
  return out;
}

}  // namespace valdist
