#include "valdist/hahn.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <tuple>

#include "valdist/errors.hpp"

namespace valdist {

namespace {

// Bounded tolerance for consecutive all-cancelling merge steps; legitimate
// zero runs are short (collisions plus periodic gaps), so hitting this means
// the representation hides an uncertifiable cancellation.
constexpr int kCancellationGuard = 65536;

GroupElement tail_exponent(const ShrinkTail& t, long long i, unsigned p) {
  return t.limit - t.step.scaled(pow_rational(p, static_cast<int>(-i)));
}

GroupElement tail_exponent(const GrowTail& t, long long i, unsigned p) {
  return t.shift + t.scale.scaled(pow_rational(p, static_cast<int>(i)));
}

unsigned tail_coeff(const FiniteField& F, const ShrinkTail& t, long long i) {
  return F.mul(t.factor, F.frobenius_iter(t.base, -(i + t.offset)));
}

unsigned tail_coeff(const FiniteField& F, const GrowTail& t, long long i) {
  return F.mul(t.factor, F.frobenius_iter(t.base, i + t.offset));
}

// step = rep * p^eshift with the leading coordinate of rep p-free, so tails
// in one p-power class land on a shared grid index.
void normalize_step_class(const GroupElement& step, unsigned p, GroupElement& rep,
                          long long& eshift) {
  const int j = step.first_nonzero();
  eshift = p_adic_valuation(step.coord(j), p);
  rep = step.scaled(pow_rational(p, static_cast<int>(-eshift)));
}

bool group_less(const GroupElement& a, const GroupElement& b) { return lex_less(a, b); }

bool tail_less(const ShrinkTail& a, const ShrinkTail& b) {
  if (auto c = compare(a.limit, b.limit); c != Ordering::equal) return c == Ordering::less;
  if (auto c = compare(a.step, b.step); c != Ordering::equal) return c == Ordering::less;
  return std::tie(a.start, a.offset, a.base, a.factor) <
         std::tie(b.start, b.offset, b.base, b.factor);
}

bool tail_less(const GrowTail& a, const GrowTail& b) {
  if (auto c = compare(a.shift, b.shift); c != Ordering::equal) return c == Ordering::less;
  if (auto c = compare(a.scale, b.scale); c != Ordering::equal) return c == Ordering::less;
  return std::tie(a.start, a.offset, a.base, a.factor) <
         std::tie(b.start, b.offset, b.base, b.factor);
}

bool same_law(const ShrinkTail& a, const ShrinkTail& b) {
  return a.limit == b.limit && a.step == b.step && a.start == b.start && a.offset == b.offset &&
         a.base == b.base;
}

bool same_law(const GrowTail& a, const GrowTail& b) {
  return a.shift == b.shift && a.scale == b.scale && a.start == b.start && a.offset == b.offset &&
         a.base == b.base;
}

}  // namespace

struct HahnSeries::Rep {
  int rank = 1;
  std::shared_ptr<const FiniteField> field;
  std::vector<Term> head;
  std::vector<ShrinkTail> shrink;
  std::vector<GrowTail> grow;
  std::optional<GroupElement> wall;
  std::string label;
};

HahnSeries::HahnSeries(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

int HahnSeries::rank() const { return rep_->rank; }
const std::shared_ptr<const FiniteField>& HahnSeries::field() const { return rep_->field; }
const std::vector<Term>& HahnSeries::head() const { return rep_->head; }
const std::vector<ShrinkTail>& HahnSeries::shrink_tails() const { return rep_->shrink; }
const std::vector<GrowTail>& HahnSeries::grow_tails() const { return rep_->grow; }
const std::optional<GroupElement>& HahnSeries::wall() const { return rep_->wall; }
const std::string& HahnSeries::label() const { return rep_->label; }

bool HahnSeries::structurally_zero() const {
  return rep_->head.empty() && rep_->shrink.empty() && rep_->grow.empty();
}

HahnSeries HahnSeries::zero(int rank, std::shared_ptr<const FiniteField> field) {
  return make(rank, std::move(field), {}, {}, {});
}

HahnSeries HahnSeries::from_terms(int rank, std::shared_ptr<const FiniteField> field,
                                  std::vector<Term> head) {
  return make(rank, std::move(field), std::move(head), {}, {});
}

HahnSeries HahnSeries::monomial(std::shared_ptr<const FiniteField> field, GroupElement exponent,
                                unsigned coeff) {
  const int r = exponent.rank();
  return make(r, std::move(field), {Term{std::move(exponent), coeff}}, {}, {});
}

HahnSeries HahnSeries::labeled(std::string name, int rank,
                               std::shared_ptr<const FiniteField> field) {
  HahnSeries base = zero(rank, std::move(field));
  return base.with_label(std::move(name));
}

HahnSeries HahnSeries::with_label(std::string name) const {
  auto rep = std::make_shared<Rep>(*rep_);
  rep->label = std::move(name);
  return HahnSeries(std::move(rep));
}

HahnSeries HahnSeries::make(int rank, std::shared_ptr<const FiniteField> field,
                            std::vector<Term> head, std::vector<ShrinkTail> shrink,
                            std::vector<GrowTail> grow, std::optional<GroupElement> wall) {
  if (!field) throw UnsupportedInput("series requires a coefficient field");
  if (rank < 1) throw RankMismatch("series rank must be at least 1");
  auto rep = std::make_shared<Rep>();
  rep->rank = rank;
  rep->field = std::move(field);
  const FiniteField& F = *rep->field;

  auto check_coeff = [&](unsigned c) {
    if (c >= F.size()) throw UnsupportedInput("coefficient encoding out of field range");
  };
  auto check_rank = [&](const GroupElement& g) {
    if (g.rank() != rank) throw RankMismatch("exponent rank does not match the series rank");
  };

  for (auto& t : head) {
    check_rank(t.exponent);
    check_coeff(t.coeff);
  }
  rep->head = normalize_terms(F, std::move(head));

  const GroupElement z = GroupElement::zero(rank);
  for (auto& t : shrink) {
    check_rank(t.limit);
    check_rank(t.step);
    if (!lex_less(z, t.step)) throw UnsupportedInput("shrink tail step must be positive");
    check_coeff(t.factor);
    check_coeff(t.base);
    if (t.factor == 0 || t.base == 0) continue;
    bool merged = false;
    for (auto& have : rep->shrink) {
      if (same_law(have, t)) {
        have.factor = F.add(have.factor, t.factor);
        merged = true;
        break;
      }
    }
    if (!merged) rep->shrink.push_back(t);
  }
  std::erase_if(rep->shrink, [](const ShrinkTail& t) { return t.factor == 0; });
  std::sort(rep->shrink.begin(), rep->shrink.end(),
            [](const ShrinkTail& a, const ShrinkTail& b) { return tail_less(a, b); });

  for (auto& t : grow) {
    check_rank(t.shift);
    check_rank(t.scale);
    if (!lex_less(z, t.scale)) throw UnsupportedInput("grow tail scale must be positive");
    check_coeff(t.factor);
    check_coeff(t.base);
    if (t.factor == 0 || t.base == 0) continue;
    bool merged = false;
    for (auto& have : rep->grow) {
      if (same_law(have, t)) {
        have.factor = F.add(have.factor, t.factor);
        merged = true;
        break;
      }
    }
    if (!merged) rep->grow.push_back(t);
  }
  std::erase_if(rep->grow, [](const GrowTail& t) { return t.factor == 0; });
  std::sort(rep->grow.begin(), rep->grow.end(),
            [](const GrowTail& a, const GrowTail& b) { return tail_less(a, b); });

  if (wall) check_rank(*wall);
  rep->wall = std::move(wall);
  return HahnSeries(std::move(rep));
}

bool HahnSeries::operator==(const HahnSeries& other) const {
  const Rep& a = *rep_;
  const Rep& b = *other.rep_;
  if (a.rank != b.rank || !a.field->same_field(*b.field)) return false;
  if (a.label != b.label) return false;
  if (a.head.size() != b.head.size()) return false;
  for (size_t i = 0; i < a.head.size(); ++i) {
    if (!(a.head[i].exponent == b.head[i].exponent) || a.head[i].coeff != b.head[i].coeff)
      return false;
  }
  auto same_shrink = [](const ShrinkTail& x, const ShrinkTail& y) {
    return same_law(x, y) && x.factor == y.factor;
  };
  auto same_grow = [](const GrowTail& x, const GrowTail& y) {
    return same_law(x, y) && x.factor == y.factor;
  };
  if (a.shrink.size() != b.shrink.size() || a.grow.size() != b.grow.size()) return false;
  for (size_t i = 0; i < a.shrink.size(); ++i)
    if (!same_shrink(a.shrink[i], b.shrink[i])) return false;
  for (size_t i = 0; i < a.grow.size(); ++i)
    if (!same_grow(a.grow[i], b.grow[i])) return false;
  if (a.wall.has_value() != b.wall.has_value()) return false;
  if (a.wall && !(*a.wall == *b.wall)) return false;
  return true;
}

// --- tail family analysis ---------------------------------------------------

namespace {

struct FamilyMember {
  size_t idx;           // position in the series' tail vector
  long long m_first;    // grid index of the member's first term
  long long eff_offset; // Frobenius iterate at grid index m is sign*(m + eff_offset)
  unsigned factor;
  unsigned base;
};

unsigned member_coeff(const FiniteField& F, bool shrink, const FamilyMember& m, long long grid) {
  const long long it = shrink ? -(grid + m.eff_offset) : (grid + m.eff_offset);
  return F.mul(m.factor, F.frobenius_iter(m.base, it));
}

}  // namespace

GroupElement family_exponent(const TailFamily& f, long long grid, unsigned p) {
  if (f.shrink) return f.anchor - f.step.scaled(pow_rational(p, static_cast<int>(-grid)));
  return f.anchor + f.step.scaled(pow_rational(p, static_cast<int>(grid)));
}

unsigned family_coeff(const TailFamily& f, long long grid) {
  long long j = (grid - f.block_from) % static_cast<long long>(f.block.size());
  if (j < 0) j += static_cast<long long>(f.block.size());
  return f.block[static_cast<size_t>(j)];
}

std::vector<TailFamily> tail_families(const HahnSeries& x) {
  const FiniteField& F = *x.field();
  const unsigned p = F.p();
  const int d = static_cast<int>(F.degree());

  std::vector<TailFamily> fams;
  std::vector<std::vector<FamilyMember>> members;

  auto locate = [&](bool shrink, const GroupElement& anchor, const GroupElement& rep) -> size_t {
    for (size_t i = 0; i < fams.size(); ++i) {
      if (fams[i].shrink == shrink && fams[i].anchor == anchor && fams[i].step == rep) return i;
    }
    TailFamily f;
    f.shrink = shrink;
    f.anchor = anchor;
    f.step = rep;
    fams.push_back(std::move(f));
    members.emplace_back();
    return fams.size() - 1;
  };

  for (size_t k = 0; k < x.shrink_tails().size(); ++k) {
    const ShrinkTail& t = x.shrink_tails()[k];
    GroupElement rep = t.step;
    long long e = 0;
    normalize_step_class(t.step, p, rep, e);
    const size_t fi = locate(true, t.limit, rep);
    members[fi].push_back({k, t.start - e, e + t.offset, t.factor, t.base});
    fams[fi].members.push_back(k);
  }
  for (size_t k = 0; k < x.grow_tails().size(); ++k) {
    const GrowTail& t = x.grow_tails()[k];
    GroupElement rep = t.scale;
    long long e = 0;
    normalize_step_class(t.scale, p, rep, e);
    const size_t fi = locate(false, t.shift, rep);
    members[fi].push_back({k, t.start + e, t.offset - e, t.factor, t.base});
    fams[fi].members.push_back(k);
  }

  for (size_t fi = 0; fi < fams.size(); ++fi) {
    TailFamily& f = fams[fi];
    const auto& mem = members[fi];
    long long lo = mem.front().m_first;
    long long hi = mem.front().m_first;
    for (const auto& m : mem) {
      lo = std::min(lo, m.m_first);
      hi = std::max(hi, m.m_first);
    }
    f.block_from = hi;
    f.block.assign(static_cast<size_t>(d), 0u);
    for (int j = 0; j < d; ++j) {
      unsigned c = 0;
      for (const auto& m : mem) c = F.add(c, member_coeff(F, f.shrink, m, hi + j));
      f.block[static_cast<size_t>(j)] = c;
    }
    f.survives = std::any_of(f.block.begin(), f.block.end(), [](unsigned c) { return c != 0; });
    for (long long grid = lo; grid < hi; ++grid) {
      unsigned c = 0;
      for (const auto& m : mem) {
        if (m.m_first <= grid) c = F.add(c, member_coeff(F, f.shrink, m, grid));
      }
      if (c != 0) f.ragged.push_back({family_exponent(f, grid, p), c});
    }
  }
  return fams;
}

std::optional<AccumulationInfo> first_accumulation(const HahnSeries& x) {
  const auto fams = tail_families(x);
  const TailFamily* best = nullptr;
  for (const auto& f : fams) {
    if (!f.shrink || !f.survives) continue;
    if (x.wall() && lex_less(*x.wall(), f.anchor)) continue;  // beyond the exact region
    if (!best || lex_less(f.anchor, best->anchor)) {
      best = &f;
    } else if (f.anchor == best->anchor &&
               f.step.first_nonzero() > best->step.first_nonzero()) {
      best = &f;  // finest class governs approach to a shared limit
    }
  }
  if (!best) return std::nullopt;
  return AccumulationInfo{best->anchor, best->step};
}

// --- merged enumeration -----------------------------------------------------

namespace {

// Streams the merged support in increasing exponent order. Vanished families
// are folded into their finitely many real (ragged) terms up front, so the
// live tail sources are exactly the surviving ones and enumeration under a
// stop below every surviving limit terminates.
class Cursor {
public:
  Cursor(const HahnSeries& x, std::optional<GroupElement> stop)
      : F_(*x.field()), p_(F_.p()), stop_(std::move(stop)) {
    const auto fams = tail_families(x);
    std::vector<Term> extra;
    std::vector<char> keep_shrink(x.shrink_tails().size(), 0);
    std::vector<char> keep_grow(x.grow_tails().size(), 0);
    for (const auto& f : fams) {
      if (f.survives) {
        for (size_t idx : f.members) (f.shrink ? keep_shrink : keep_grow)[idx] = 1;
      } else {
        extra.insert(extra.end(), f.ragged.begin(), f.ragged.end());
      }
    }
    std::vector<Term> base = x.head();
    base.insert(base.end(), extra.begin(), extra.end());
    head_ = normalize_terms(F_, std::move(base));
    for (size_t k = 0; k < x.shrink_tails().size(); ++k) {
      if (!keep_shrink[k]) continue;
      shrink_.push_back(x.shrink_tails()[k]);
      shrink_i_.push_back(shrink_.back().start);
      shrink_cur_.push_back(tail_exponent(shrink_.back(), shrink_i_.back(), p_));
    }
    for (size_t k = 0; k < x.grow_tails().size(); ++k) {
      if (!keep_grow[k]) continue;
      grow_.push_back(x.grow_tails()[k]);
      grow_i_.push_back(grow_.back().start);
      grow_cur_.push_back(tail_exponent(grow_.back(), grow_i_.back(), p_));
    }
  }

  std::optional<Term> next() {
    for (int guard = 0; guard < kCancellationGuard; ++guard) {
      const GroupElement* best = nullptr;
      if (pos_ < head_.size()) best = &head_[pos_].exponent;
      for (const auto& e : shrink_cur_)
        if (!best || lex_less(e, *best)) best = &e;
      for (const auto& e : grow_cur_)
        if (!best || lex_less(e, *best)) best = &e;
      if (!best) return std::nullopt;
      if (stop_ && !lex_less(*best, *stop_)) return std::nullopt;
      const GroupElement at = *best;

      unsigned c = 0;
      if (pos_ < head_.size() && head_[pos_].exponent == at) {
        c = F_.add(c, head_[pos_].coeff);
        ++pos_;
      }
      for (size_t k = 0; k < shrink_.size(); ++k) {
        if (shrink_cur_[k] == at) {
          c = F_.add(c, tail_coeff(F_, shrink_[k], shrink_i_[k]));
          ++shrink_i_[k];
          shrink_cur_[k] = tail_exponent(shrink_[k], shrink_i_[k], p_);
        }
      }
      for (size_t k = 0; k < grow_.size(); ++k) {
        if (grow_cur_[k] == at) {
          c = F_.add(c, tail_coeff(F_, grow_[k], grow_i_[k]));
          ++grow_i_[k];
          grow_cur_[k] = tail_exponent(grow_[k], grow_i_[k], p_);
        }
      }
      if (c != 0) return Term{at, c};
    }
    throw Error("series enumeration stalled on an uncertified cancellation run");
  }

private:
  const FiniteField& F_;
  unsigned p_;
  std::optional<GroupElement> stop_;
  std::vector<Term> head_;
  size_t pos_ = 0;
  std::vector<ShrinkTail> shrink_;
  std::vector<long long> shrink_i_;
  std::vector<GroupElement> shrink_cur_;
  std::vector<GrowTail> grow_;
  std::vector<long long> grow_i_;
  std::vector<GroupElement> grow_cur_;
};

}  // namespace

std::optional<GroupElement> HahnSeries::safe_cap() const {
  std::optional<GroupElement> best = rep_->wall;
  for (const auto& f : tail_families(*this)) {
    if (!f.shrink || !f.survives) continue;
    if (!best || lex_less(f.anchor, *best)) best = f.anchor;
  }
  return best;
}

bool HahnSeries::has_infinite_support() const {
  const auto fams = tail_families(*this);
  return std::any_of(fams.begin(), fams.end(), [](const TailFamily& f) { return f.survives; });
}

std::vector<Term> terms_below(const HahnSeries& x, const GroupElement& cap) {
  if (cap.rank() != x.rank()) throw RankMismatch("cap rank does not match the series rank");
  for (const auto& f : tail_families(x)) {
    if (f.shrink && f.survives && !lex_less(cap, f.anchor))
      throw TruncationUnbounded("cap reaches an accumulation point of the support");
  }
  if (x.wall() && lex_less(*x.wall(), cap))
    throw TruncationUnbounded("cap exceeds the exact region of a partial series");
  Cursor cur(x, cap);
  std::vector<Term> out;
  while (auto t = cur.next()) out.push_back(std::move(*t));
  return out;
}

std::vector<Term> first_terms(const HahnSeries& x, const std::optional<GroupElement>& stop,
                              int count) {
  Cursor cur(x, stop);
  std::vector<Term> out;
  for (int i = 0; i < count; ++i) {
    auto t = cur.next();
    if (!t) break;
    out.push_back(std::move(*t));
  }
  return out;
}

std::vector<Term> all_terms(const HahnSeries& x) {
  if (x.has_infinite_support())
    throw UnsupportedInput("series has infinite support after cancellation");
  Cursor cur(x, std::nullopt);
  std::vector<Term> out;
  while (auto t = cur.next()) out.push_back(std::move(*t));
  return out;
}

std::vector<Term> terms_through(const HahnSeries& x, const GroupElement& bound) {
  for (const auto& f : tail_families(x)) {
    if (f.shrink && f.survives && !lex_less(bound, f.anchor))
      throw TruncationUnbounded("bound reaches an accumulation point of the support");
  }
  Cursor cur(x, std::nullopt);
  std::vector<Term> out;
  while (auto t = cur.next()) {
    const bool beyond = lex_less(bound, t->exponent);
    out.push_back(std::move(*t));
    if (beyond) break;
  }
  return out;
}

std::vector<Term> shrink_tail_terms_below(const ShrinkTail& t, const FiniteField& field,
                                          const GroupElement& cap) {
  if (!lex_less(cap, t.limit))
    throw TruncationUnbounded("cap reaches the tail's accumulation point");
  std::vector<Term> out;
  for (long long i = t.start;; ++i) {
    GroupElement e = tail_exponent(t, i, field.p());
    if (!lex_less(e, cap)) break;
    out.push_back({std::move(e), tail_coeff(field, t, i)});
  }
  return out;
}

std::vector<Term> grow_tail_terms_below(const GrowTail& t, const FiniteField& field,
                                        const GroupElement& cap) {
  std::vector<Term> out;
  for (long long i = t.start;; ++i) {
    GroupElement e = tail_exponent(t, i, field.p());
    if (!lex_less(e, cap)) break;
    out.push_back({std::move(e), tail_coeff(field, t, i)});
  }
  return out;
}

std::optional<Term> leading_term(const HahnSeries& x) { return Cursor(x, std::nullopt).next(); }

std::optional<GroupElement> valuation(const HahnSeries& x) {
  auto t = leading_term(x);
  if (!t) return std::nullopt;
  return t->exponent;
}

// --- term-list helpers -------------------------------------------------------

std::vector<Term> normalize_terms(const FiniteField& field, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return group_less(a.exponent, b.exponent); });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().exponent == t.exponent) {
      out.back().coeff = field.add(out.back().coeff, t.coeff);
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
  return out;
}

std::vector<Term> merge_term_lists(const FiniteField& field, const std::vector<Term>& a,
                                   const std::vector<Term>& b) {
  std::vector<Term> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return normalize_terms(field, std::move(all));
}

std::vector<Term> negate_term_list(const FiniteField& field, std::vector<Term> a) {
  for (auto& t : a) t.coeff = field.neg(t.coeff);
  return a;
}

std::vector<Term> mul_term_lists(const FiniteField& field, const std::vector<Term>& a,
                                 const std::vector<Term>& b, const GroupElement* cap) {
  std::vector<Term> prods;
  prods.reserve(a.size() * b.size());
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      GroupElement e = ta.exponent + tb.exponent;
      if (cap && !lex_less(e, *cap)) continue;
      prods.push_back({std::move(e), field.mul(ta.coeff, tb.coeff)});
    }
  }
  return normalize_terms(field, std::move(prods));
}

std::vector<Term> scale_term_list(const FiniteField& field, std::vector<Term> a, unsigned coeff,
                                  const GroupElement* shift) {
  if (coeff == 0) return {};
  for (auto& t : a) {
    t.coeff = field.mul(t.coeff, coeff);
    if (shift) t.exponent = t.exponent + *shift;
  }
  return a;
}

// --- cap-parameterized arithmetic --------------------------------------------

namespace {

void check_compatible(const HahnSeries& x, const HahnSeries& y) {
  if (x.rank() != y.rank()) throw RankMismatch("series ranks differ");
  if (!x.field()->same_field(*y.field()))
    throw UnsupportedInput("series live over different coefficient fields");
}

std::vector<Term> invert_below(const HahnSeries& x, const GroupElement& cap) {
  const FiniteField& F = *x.field();
  auto lt = leading_term(x);
  if (!lt) throw DivisionByZero("inverse of the zero series");
  const GroupElement v = lt->exponent;
  const unsigned linv = F.inv(lt->coeff);
  const GroupElement cap0 = cap + v;  // truncation bound for (1+u)^{-1}
  const GroupElement z = GroupElement::zero(x.rank());

  std::vector<Term> acc;
  if (lex_less(z, cap0)) {
    // u = x / leading - 1 has positive support; u-terms at e-v need e < cap0+v.
    auto xt = terms_below(x, cap0 + v);
    std::vector<Term> u;
    for (const auto& t : xt) {
      if (t.exponent == v) continue;
      u.push_back({t.exponent - v, F.mul(t.coeff, linv)});
    }
    acc.push_back({z, 1});
    if (!u.empty()) {
      // If v(u) is infinitesimal against cap0 the inverse has infinitely many
      // terms below the cap.
      if (u.front().exponent.first_nonzero() > cap0.first_nonzero())
        throw TruncationUnbounded("inverse support is infinite below the cap");
      auto negu = negate_term_list(F, u);
      std::vector<Term> pw{{z, 1}};
      while (true) {
        pw = mul_term_lists(F, pw, negu, &cap0);
        if (pw.empty()) break;
        acc = merge_term_lists(F, acc, pw);
      }
    }
  }

  std::vector<Term> out;
  for (const auto& t : acc) {
    GroupElement e = t.exponent - v;
    if (lex_less(e, cap)) out.push_back({std::move(e), F.mul(linv, t.coeff)});
  }
  return normalize_terms(F, std::move(out));
}

}  // namespace

std::vector<Term> arith(ArithOp op, const HahnSeries& x, const HahnSeries& y,
                        const GroupElement& cap) {
  const FiniteField& F = *x.field();
  switch (op) {
    case ArithOp::add: {
      check_compatible(x, y);
      return merge_term_lists(F, terms_below(x, cap), terms_below(y, cap));
    }
    case ArithOp::negate:
      return negate_term_list(F, terms_below(x, cap));
    case ArithOp::mul: {
      check_compatible(x, y);
      auto vx = valuation(x);
      auto vy = valuation(y);
      if (!vx || !vy) return {};
      auto tx = terms_below(x, cap - *vy);
      auto ty = terms_below(y, cap - *vx);
      return mul_term_lists(F, tx, ty, &cap);
    }
    case ArithOp::invert:
      return invert_below(x, cap);
  }
  throw Error("unknown arithmetic op");
}

// --- structural exact operations ---------------------------------------------

HahnSeries add_series(const HahnSeries& x, const HahnSeries& y) {
  check_compatible(x, y);
  std::vector<Term> head = x.head();
  head.insert(head.end(), y.head().begin(), y.head().end());
  std::vector<ShrinkTail> shrink = x.shrink_tails();
  shrink.insert(shrink.end(), y.shrink_tails().begin(), y.shrink_tails().end());
  std::vector<GrowTail> grow = x.grow_tails();
  grow.insert(grow.end(), y.grow_tails().begin(), y.grow_tails().end());
  std::optional<GroupElement> wall = x.wall();
  if (y.wall() && (!wall || lex_less(*y.wall(), *wall))) wall = y.wall();
  return HahnSeries::make(x.rank(), x.field(), std::move(head), std::move(shrink),
                          std::move(grow), std::move(wall));
}

HahnSeries negate_series(const HahnSeries& x) {
  const FiniteField& F = *x.field();
  std::vector<Term> head = x.head();
  for (auto& t : head) t.coeff = F.neg(t.coeff);
  std::vector<ShrinkTail> shrink = x.shrink_tails();
  for (auto& t : shrink) t.factor = F.neg(t.factor);
  std::vector<GrowTail> grow = x.grow_tails();
  for (auto& t : grow) t.factor = F.neg(t.factor);
  return HahnSeries::make(x.rank(), x.field(), std::move(head), std::move(shrink),
                          std::move(grow), x.wall());
}

HahnSeries mul_monomial(const HahnSeries& x, const GroupElement& shift, unsigned coeff) {
  if (shift.rank() != x.rank()) throw RankMismatch("shift rank does not match the series rank");
  const FiniteField& F = *x.field();
  if (coeff == 0) return HahnSeries::zero(x.rank(), x.field());
  std::vector<Term> head = x.head();
  for (auto& t : head) {
    t.exponent = t.exponent + shift;
    t.coeff = F.mul(t.coeff, coeff);
  }
  std::vector<ShrinkTail> shrink = x.shrink_tails();
  for (auto& t : shrink) {
    t.limit = t.limit + shift;
    t.factor = F.mul(t.factor, coeff);
  }
  std::vector<GrowTail> grow = x.grow_tails();
  for (auto& t : grow) {
    t.shift = t.shift + shift;
    t.factor = F.mul(t.factor, coeff);
  }
  std::optional<GroupElement> wall = x.wall();
  if (wall) wall = *wall + shift;
  return HahnSeries::make(x.rank(), x.field(), std::move(head), std::move(shrink),
                          std::move(grow), std::move(wall));
}

HahnSeries frobenius_pow(const HahnSeries& x) {
  const FiniteField& F = *x.field();
  const Rational p = F.p();
  std::vector<Term> head = x.head();
  for (auto& t : head) {
    t.exponent = t.exponent.scaled(p);
    t.coeff = F.frobenius(t.coeff);
  }
  std::vector<ShrinkTail> shrink = x.shrink_tails();
  for (auto& t : shrink) {
    t.limit = t.limit.scaled(p);
    t.factor = F.frobenius(t.factor);
    t.start -= 1;  // p * (limit - step p^{-i}) = p limit - step p^{-(i-1)}
    t.offset += 1;
  }
  std::vector<GrowTail> grow = x.grow_tails();
  for (auto& t : grow) {
    t.shift = t.shift.scaled(p);
    t.factor = F.frobenius(t.factor);
    t.start += 1;
    t.offset -= 1;
  }
  std::optional<GroupElement> wall = x.wall();
  if (wall) wall = wall->scaled(p);
  return HahnSeries::make(x.rank(), x.field(), std::move(head), std::move(shrink),
                          std::move(grow), std::move(wall));
}

HahnSeries frobenius_root(const HahnSeries& x) {
  const FiniteField& F = *x.field();
  const Rational pinv = Rational(1, F.p());
  std::vector<Term> head = x.head();
  for (auto& t : head) {
    t.exponent = t.exponent.scaled(pinv);
    t.coeff = F.frobenius_inverse(t.coeff);
  }
  std::vector<ShrinkTail> shrink = x.shrink_tails();
  for (auto& t : shrink) {
    t.limit = t.limit.scaled(pinv);
    t.step = t.step.scaled(pinv);
    t.factor = F.frobenius_inverse(t.factor);
    t.offset += 1;
  }
  std::vector<GrowTail> grow = x.grow_tails();
  for (auto& t : grow) {
    t.shift = t.shift.scaled(pinv);
    t.scale = t.scale.scaled(pinv);
    t.factor = F.frobenius_inverse(t.factor);
    t.offset -= 1;
  }
  std::optional<GroupElement> wall = x.wall();
  if (wall) wall = wall->scaled(pinv);
  return HahnSeries::make(x.rank(), x.field(), std::move(head), std::move(shrink),
                          std::move(grow), std::move(wall));
}

HahnSeries artin_schreier_root(const HahnSeries& rhs) {
  if (!rhs.shrink_tails().empty() || !rhs.grow_tails().empty())
    throw UnsupportedInput("right-hand side must have finite support");
  if (rhs.wall()) throw UnsupportedInput("right-hand side must be an exact series");
  const FiniteField& F = *rhs.field();
  const int r = rhs.rank();
  const GroupElement z = GroupElement::zero(r);

  std::vector<Term> head;
  std::vector<ShrinkTail> shrink;
  std::vector<GrowTail> grow;
  for (const auto& t : rhs.head()) {
    switch (compare(t.exponent, z)) {
      case Ordering::less:
        // sum of iterated p-th roots: terms at gamma/p^i with coefficients
        // frobenius^{-i}(c), i >= 1
        shrink.push_back({z, -t.exponent, 1, 1, t.coeff, 0});
        break;
      case Ordering::equal: {
        auto y = F.artin_schreier_solve(t.coeff);
        if (!y) throw ResidueNotSplit("residue equation x^p - x = c has no root");
        if (*y != 0) head.push_back({z, *y});
        break;
      }
      case Ordering::greater:
        // minus the sum of iterated p-th powers: -(c^{p^i}) = (-c)^{p^i}, i >= 0
        grow.push_back({z, t.exponent, 0, 1, F.neg(t.coeff), 0});
        break;
    }
  }
  return HahnSeries::make(r, rhs.field(), std::move(head), std::move(shrink), std::move(grow));
}

HahnSeries pow_below_accumulation(const HahnSeries& w, unsigned e) {
  const FiniteField& F = *w.field();
  const unsigned p = F.p();
  const int r = w.rank();
  if (e == 0) return HahnSeries::monomial(w.field(), GroupElement::zero(r), 1);
  if (e == 1) return w;
  if (e >= p)
    throw UnsupportedInput("power certificate requires the exponent below the characteristic");

  auto acc = first_accumulation(w);
  if (!acc) throw UnsupportedInput("power certificate requires a surviving accumulation point");
  const GroupElement L = acc->limit;
  if (w.wall() && lex_less(*w.wall(), L))
    throw UnsupportedInput("base series is not exact up to its accumulation point");

  auto lt = leading_term(w);
  Cursor cur(w, std::nullopt);
  cur.next();
  auto second = cur.next();
  if (!lt || !second) throw UnsupportedInput("base series needs at least two terms");
  const GroupElement v = lt->exponent;
  const unsigned lam = lt->coeff;
  const GroupElement tau = second->exponent;

  // Terms with a single non-leading factor live below beta; blocks with two or
  // more such factors sit at or above pair_floor, so the exact region is the
  // smaller of the two.
  const GroupElement beta = v.scaled(static_cast<int>(e) - 1) + L;
  const GroupElement pair_floor = tau.scaled(2) + v.scaled(static_cast<int>(e) - 2);
  const GroupElement wall = lex_less(pair_floor, beta) ? pair_floor : beta;

  const unsigned cf = F.mul(F.from_int(static_cast<long long>(e)), F.pow(lam, e - 1));
  const GroupElement shift = v.scaled(static_cast<int>(e) - 1);

  std::vector<Term> head;
  head.push_back({v.scaled(static_cast<int>(e)),
                  F.mul(F.pow(lam, e), F.from_int(1 - static_cast<long long>(e)))});
  auto push_shifted = [&](const GroupElement& exponent, unsigned coeff) {
    if (!lex_less(exponent, L)) return;
    GroupElement g = shift + exponent;
    if (!lex_less(g, wall)) return;
    head.push_back({std::move(g), F.mul(cf, coeff)});
  };
  for (const auto& t : w.head()) push_shifted(t.exponent, t.coeff);

  std::vector<ShrinkTail> kept;
  const auto fams = tail_families(w);
  for (const auto& f : fams) {
    if (f.shrink && f.survives && f.anchor == L) {
      for (size_t idx : f.members) {
        ShrinkTail t = w.shrink_tails()[idx];
        t.limit = t.limit + shift;
        t.factor = F.mul(cf, t.factor);
        kept.push_back(std::move(t));
      }
    } else if (f.survives) {
      // real family, but its terms below L are finitely many: materialize them
      for (size_t idx : f.members) {
        if (f.shrink) {
          const ShrinkTail& t = w.shrink_tails()[idx];
          for (long long i = t.start;; ++i) {
            GroupElement ex = tail_exponent(t, i, p);
            if (!lex_less(ex, L)) break;
            push_shifted(ex, tail_coeff(F, t, i));
          }
        } else {
          const GrowTail& t = w.grow_tails()[idx];
          for (long long i = t.start;; ++i) {
            GroupElement ex = tail_exponent(t, i, p);
            if (!lex_less(ex, L)) break;
            push_shifted(ex, tail_coeff(F, t, i));
          }
        }
      }
    } else {
      for (const auto& t : f.ragged) push_shifted(t.exponent, t.coeff);
    }
  }

  return HahnSeries::make(r, w.field(), std::move(head), std::move(kept), {}, wall);
}

// --- polynomials --------------------------------------------------------------

Polynomial make_polynomial(std::vector<HahnSeries> coeffs) {
  while (!coeffs.empty() && coeffs.back().structurally_zero()) coeffs.pop_back();
  return Polynomial{std::move(coeffs)};
}

namespace {

std::vector<std::vector<unsigned>> binomials_mod_p(int top, const FiniteField& F) {
  const long long p = F.p();
  std::vector<std::vector<long long>> pascal(static_cast<size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    pascal[static_cast<size_t>(n)].assign(static_cast<size_t>(n) + 1, 1);
    for (int k = 1; k < n; ++k) {
      pascal[static_cast<size_t>(n)][static_cast<size_t>(k)] =
          (pascal[static_cast<size_t>(n) - 1][static_cast<size_t>(k) - 1] +
           pascal[static_cast<size_t>(n) - 1][static_cast<size_t>(k)]) %
          p;
    }
  }
  std::vector<std::vector<unsigned>> out(pascal.size());
  for (size_t n = 0; n < pascal.size(); ++n) {
    out[n].reserve(pascal[n].size());
    for (long long val : pascal[n]) out[n].push_back(F.from_int(val));
  }
  return out;
}

std::vector<Term> finite_support(const HahnSeries& x) {
  if (!x.shrink_tails().empty() || !x.grow_tails().empty() || x.wall())
    throw UnsupportedInput("operation requires finite explicit support");
  return x.head();
}

}  // namespace

namespace {

// Exact term list of c^k below bound. Tries plain truncate-and-multiply first
// (every factor of a contributing product stays below bound - (k-1)*min(vc,0));
// when the base accumulates before that limit, peels p-th powers through the
// Frobenius, then falls back to the certified small-power expansion.
std::vector<Term> power_terms_below(const HahnSeries& c, int k, const GroupElement& bound) {
  const FiniteField& F = *c.field();
  const int r = c.rank();
  const GroupElement z = GroupElement::zero(r);
  if (k == 0) return {{z, 1u}};
  const auto vc = valuation(c);
  if (!vc) return {};
  const GroupElement vneg = lex_less(*vc, z) ? *vc : z;
  try {
    const auto ct = terms_below(c, bound - vneg.scaled(k - 1));
    std::vector<Term> acc{{z, 1u}};
    for (int j = 1; j <= k; ++j) {
      const GroupElement stage = bound - vneg.scaled(k - j);
      acc = mul_term_lists(F, acc, ct, &stage);
    }
    return acc;
  } catch (const TruncationUnbounded&) {
  }
  const int p = static_cast<int>(F.p());
  if (k % p == 0) return power_terms_below(frobenius_pow(c), k / p, bound);
  if (k < p) return terms_below(pow_below_accumulation(c, static_cast<unsigned>(k)), bound);
  throw TruncationUnbounded("power of the series accumulates below the requested bound");
}

}  // namespace

std::vector<std::vector<Term>> hasse_taylor(const Polynomial& f, const HahnSeries& c,
                                            const GroupElement& cap) {
  const int D = f.degree();
  std::vector<std::vector<Term>> out(static_cast<size_t>(std::max(D + 1, 0)));
  if (D < 0) return out;
  const FiniteField& F = *c.field();
  const auto binom = binomials_mod_p(D, F);

  auto vc = valuation(c);
  if (!vc) {
    for (int i = 0; i <= D; ++i)
      out[static_cast<size_t>(i)] = terms_below(f.coeffs[static_cast<size_t>(i)], cap);
    return out;
  }

  std::optional<GroupElement> minva;
  for (const auto& a : f.coeffs) {
    auto va = valuation(a);
    if (va && (!minva || lex_less(*va, *minva))) minva = va;
  }
  if (!minva) return out;

  // Powers of c are only consulted below cap - minva: anything at or above it
  // pairs with every polynomial coefficient to land at or above cap.
  std::vector<std::optional<std::vector<Term>>> cpow(static_cast<size_t>(D) + 1);
  const GroupElement cbound = cap - *minva;
  auto c_power = [&](int k) -> const std::vector<Term>& {
    auto& slot = cpow[static_cast<size_t>(k)];
    if (!slot) slot = power_terms_below(c, k, cbound);
    return *slot;
  };

  for (int i = 0; i <= D; ++i) {
    std::vector<Term> acc;
    for (int e = i; e <= D; ++e) {
      const HahnSeries& ae = f.coeffs[static_cast<size_t>(e)];
      if (ae.structurally_zero()) continue;
      const unsigned b = binom[static_cast<size_t>(e)][static_cast<size_t>(i)];
      if (b == 0) continue;
      const int k = e - i;
      const auto at = terms_below(ae, cap - vc->scaled(k));
      auto prod = mul_term_lists(F, at, c_power(k), &cap);
      acc = merge_term_lists(F, acc, scale_term_list(F, std::move(prod), b));
    }
    out[static_cast<size_t>(i)] = std::move(acc);
  }
  return out;
}

std::vector<std::vector<Term>> hasse_taylor_finite(const Polynomial& f,
                                                   const std::vector<Term>& c_terms) {
  const int D = f.degree();
  std::vector<std::vector<Term>> out(static_cast<size_t>(std::max(D + 1, 0)));
  if (D < 0) return out;
  const FiniteField& F = *f.coeffs.front().field();
  const auto binom = binomials_mod_p(D, F);
  const GroupElement z = GroupElement::zero(f.coeffs.front().rank());

  std::vector<std::vector<Term>> cpow(static_cast<size_t>(D) + 1);
  cpow[0] = {{z, 1u}};
  for (int k = 1; k <= D; ++k)
    cpow[static_cast<size_t>(k)] = mul_term_lists(F, cpow[static_cast<size_t>(k) - 1], c_terms);

  for (int i = 0; i <= D; ++i) {
    std::vector<Term> acc;
    for (int e = i; e <= D; ++e) {
      const unsigned b = binom[static_cast<size_t>(e)][static_cast<size_t>(i)];
      if (b == 0) continue;
      auto at = finite_support(f.coeffs[static_cast<size_t>(e)]);
      auto prod = mul_term_lists(F, at, cpow[static_cast<size_t>(e - i)]);
      acc = merge_term_lists(F, acc, scale_term_list(F, std::move(prod), b));
    }
    out[static_cast<size_t>(i)] = std::move(acc);
  }
  return out;
}

std::vector<Term> evaluate_finite(const Polynomial& f, const std::vector<Term>& c_terms) {
  if (f.coeffs.empty()) return {};
  const FiniteField& F = *f.coeffs.front().field();
  std::vector<Term> acc = finite_support(f.coeffs.back());
  for (int e = f.degree() - 1; e >= 0; --e) {
    acc = mul_term_lists(F, acc, c_terms);
    acc = merge_term_lists(F, acc, finite_support(f.coeffs[static_cast<size_t>(e)]));
  }
  return acc;
}

// --- textual grammar -----------------------------------------------------------

namespace {

std::string render_term(const Term& t) {
  std::string e = render_group_element(t.exponent);
  if (t.exponent.is_zero()) return std::to_string(t.coeff);
  if (t.coeff == 1) return "t^(" + e + ")";
  return std::to_string(t.coeff) + "*t^(" + e + ")";
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return "";
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

long long parse_int(const std::string& s) {
  if (s.empty()) throw ParseError("empty integer");
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("trailing characters in integer '" + s + "'");
  return v;
}

unsigned parse_coeff(const std::string& s, const FiniteField& F) {
  const long long v = parse_int(s);
  if (v < 0) return F.from_int(v);
  if (static_cast<unsigned long long>(v) < F.size()) return static_cast<unsigned>(v);
  throw ParseError("coefficient encoding " + s + " out of field range");
}

}  // namespace

std::string render_series(const HahnSeries& x) {
  if (!x.label().empty()) return "@" + x.label();
  std::vector<std::string> chunks;
  for (const auto& t : x.head()) chunks.push_back(render_term(t));
  for (const auto& t : x.shrink_tails()) {
    std::string s = "frobtail(gamma=" + render_group_element(-t.step) + ", dir=shrink, coeff=" +
                    std::to_string(t.base);
    if (t.factor != 1) s += ", factor=" + std::to_string(t.factor);
    if (!t.limit.is_zero()) s += ", limit=" + render_group_element(t.limit);
    if (t.start != 1) s += ", start=" + std::to_string(t.start);
    if (t.offset != 0) s += ", offset=" + std::to_string(t.offset);
    s += ")";
    chunks.push_back(std::move(s));
  }
  for (const auto& t : x.grow_tails()) {
    std::string s = "frobtail(gamma=" + render_group_element(t.scale) + ", dir=grow, coeff=" +
                    std::to_string(t.base);
    if (t.factor != 1) s += ", factor=" + std::to_string(t.factor);
    if (!t.shift.is_zero()) s += ", shift=" + render_group_element(t.shift);
    if (t.start != 0) s += ", start=" + std::to_string(t.start);
    if (t.offset != 0) s += ", offset=" + std::to_string(t.offset);
    s += ")";
    chunks.push_back(std::move(s));
  }
  if (x.wall()) chunks.push_back("partial(below=" + render_group_element(*x.wall()) + ")");
  if (chunks.empty()) return "0";
  std::string out = chunks.front();
  for (size_t i = 1; i < chunks.size(); ++i) out += " + " + chunks[i];
  return out;
}

HahnSeries parse_series(std::string_view text, int rank,
                        std::shared_ptr<const FiniteField> field) {
  const FiniteField& F = *field;
  std::string whole = trim(text);
  if (whole.empty()) throw ParseError("empty series literal");
  if (whole == "0") return HahnSeries::zero(rank, field);
  if (whole.front() == '@') {
    std::string name = trim(whole.substr(1));
    if (name.empty()) throw ParseError("empty series label");
    return HahnSeries::labeled(std::move(name), rank, field);
  }

  std::vector<Term> head;
  std::vector<ShrinkTail> shrink;
  std::vector<GrowTail> grow;
  std::optional<GroupElement> wall;

  for (const auto& raw : split_top_level(whole, '+')) {
    std::string chunk = trim(raw);
    if (chunk.empty()) throw ParseError("empty summand in series literal");

    if (chunk.rfind("frobtail(", 0) == 0) {
      if (chunk.back() != ')') throw ParseError("unterminated frobtail(...)");
      const std::string inner = chunk.substr(9, chunk.size() - 10);
      std::optional<GroupElement> gamma, limit, shift;
      std::optional<std::string> dir;
      std::optional<unsigned> coeff, factor;
      std::optional<long long> start, offset;
      for (const auto& attr_raw : split_top_level(inner, ',')) {
        std::string attr = trim(attr_raw);
        const size_t eq = attr.find('=');
        if (eq == std::string::npos) throw ParseError("frobtail attribute without '='");
        const std::string key = trim(attr.substr(0, eq));
        const std::string val = trim(attr.substr(eq + 1));
        if (key == "gamma") gamma = parse_group_element(val, rank);
        else if (key == "dir") dir = val;
        else if (key == "coeff") coeff = parse_coeff(val, F);
        else if (key == "factor") factor = parse_coeff(val, F);
        else if (key == "limit") limit = parse_group_element(val, rank);
        else if (key == "shift") shift = parse_group_element(val, rank);
        else if (key == "start") start = parse_int(val);
        else if (key == "offset") offset = parse_int(val);
        else throw ParseError("unknown frobtail attribute '" + key + "'");
      }
      if (!gamma || !dir || !coeff) throw ParseError("frobtail needs gamma, dir and coeff");
      if (*dir == "shrink") {
        ShrinkTail t;
        t.limit = limit.value_or(GroupElement::zero(rank));
        t.step = -*gamma;
        t.start = static_cast<int>(start.value_or(1));
        t.factor = factor.value_or(1u);
        t.base = *coeff;
        t.offset = offset.value_or(0);
        shrink.push_back(std::move(t));
      } else if (*dir == "grow") {
        GrowTail t;
        t.shift = shift.value_or(GroupElement::zero(rank));
        t.scale = *gamma;
        t.start = static_cast<int>(start.value_or(0));
        t.factor = factor.value_or(1u);
        t.base = *coeff;
        t.offset = offset.value_or(0);
        grow.push_back(std::move(t));
      } else {
        throw ParseError("frobtail dir must be shrink or grow");
      }
      continue;
    }

    if (chunk.rfind("partial(below=", 0) == 0) {
      if (chunk.back() != ')') throw ParseError("unterminated partial(below=...)");
      wall = parse_group_element(chunk.substr(14, chunk.size() - 15), rank);
      continue;
    }

    const size_t tpos = chunk.find("t^(");
    if (tpos == std::string::npos) {
      head.push_back({GroupElement::zero(rank), parse_coeff(chunk, F)});
      continue;
    }
    unsigned coeff = 1;
    std::string prefix = trim(chunk.substr(0, tpos));
    if (!prefix.empty()) {
      if (prefix.back() != '*') throw ParseError("expected '*' between coefficient and t^(...)");
      coeff = parse_coeff(trim(prefix.substr(0, prefix.size() - 1)), F);
    }
    // match the balanced exponent parenthesis
    int depth = 0;
    size_t end = std::string::npos;
    for (size_t i = tpos + 2; i < chunk.size(); ++i) {
      if (chunk[i] == '(') ++depth;
      if (chunk[i] == ')') {
        --depth;
        if (depth == 0) {
          end = i;
          break;
        }
      }
    }
    if (end == std::string::npos) throw ParseError("unterminated exponent in t^(...)");
    if (trim(chunk.substr(end + 1)) != "") throw ParseError("trailing characters after t^(...)");
    GroupElement exponent = parse_group_element(chunk.substr(tpos + 3, end - tpos - 3), rank);
    if (coeff != 0) head.push_back({std::move(exponent), coeff});
  }

  return HahnSeries::make(rank, field, std::move(head), std::move(shrink), std::move(grow),
                          std::move(wall));
}

}  // namespace valdist
