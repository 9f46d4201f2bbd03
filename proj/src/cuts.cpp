#include "valdist/cuts.hpp"

#include <utility>

#include "valdist/errors.hpp"

namespace valdist {

Cut::Cut(Kind kind, int rank) : kind_(kind), rank_(rank) {
  if (rank_ < 1) throw RankMismatch("cut rank must be >= 1");
}

Cut Cut::principal_plus(GroupElement g) {
  Cut c(Kind::principal_plus, g.rank());
  c.point_ = std::move(g);
  return c;
}

Cut Cut::principal_minus(GroupElement g) {
  Cut c(Kind::principal_minus, g.rank());
  c.point_ = std::move(g);
  return c;
}

namespace {
void check_edge_subgroup(const ConvexSubgroup& h, const GroupElement& a) {
  if (h.rank != a.rank()) throw RankMismatch("edge subgroup rank does not match point rank");
  if (h.free_levels < 0 || h.free_levels > h.rank)
    throw Error("convex subgroup free_levels out of range");
  if (!h.is_proper()) throw Error("edge cuts require a proper convex subgroup");
}
}  // namespace

Cut Cut::edge_minus(ConvexSubgroup h, GroupElement a) {
  check_edge_subgroup(h, a);
  if (h.is_trivial()) return principal_minus(std::move(a));
  Cut c(Kind::edge_minus, a.rank());
  c.point_ = std::move(a);
  c.subgroup_ = h;
  return c;
}

Cut Cut::edge_plus(ConvexSubgroup h, GroupElement a) {
  check_edge_subgroup(h, a);
  if (h.is_trivial()) return principal_plus(std::move(a));
  Cut c(Kind::edge_plus, a.rank());
  c.point_ = std::move(a);
  c.subgroup_ = h;
  return c;
}

Cut Cut::infinity(int rank) { return Cut(Kind::infinity, rank); }

Cut Cut::unresolved(std::vector<GroupElement> prefix, std::size_t budget_used) {
  if (prefix.empty()) throw Error("unresolved cut needs a nonempty value prefix");
  const int rank = prefix.front().rank();
  for (size_t i = 0; i + 1 < prefix.size(); ++i)
    if (compare(prefix[i], prefix[i + 1]) != Ordering::less)
      throw Error("unresolved cut prefix must be strictly increasing");
  Cut c(Kind::unresolved, rank);
  c.prefix_ = std::move(prefix);
  c.budget_ = budget_used;
  return c;
}

const GroupElement& Cut::point() const {
  if (!point_) throw Error("cut variant carries no point");
  return *point_;
}

const ConvexSubgroup& Cut::subgroup() const {
  if (!subgroup_) throw Error("cut variant carries no subgroup");
  return *subgroup_;
}

const std::vector<GroupElement>& Cut::prefix() const {
  if (kind_ != Kind::unresolved) throw Error("only unresolved cuts carry a prefix");
  return prefix_;
}

bool Cut::operator==(const Cut& other) const {
  if (kind_ != other.kind_ || rank_ != other.rank_) return false;
  switch (kind_) {
    case Kind::infinity:
      return true;
    case Kind::unresolved:
      // budget_used is diagnostic bookkeeping, not part of the cut's identity
      return prefix_ == other.prefix_;
    case Kind::principal_plus:
    case Kind::principal_minus:
      return *point_ == *other.point_;
    case Kind::edge_minus:
    case Kind::edge_plus:
      if (!(*subgroup_ == *other.subgroup_)) return false;
      // Edge cuts agree iff the coset parameters agree modulo H.
      return member_convex(*point_ - *other.point_, *subgroup_);
  }
  return false;
}

Cut shift_cut(const Cut& c, const GroupElement& alpha) {
  if (alpha.rank() != c.rank()) throw RankMismatch("shift rank does not match cut rank");
  switch (c.kind()) {
    case Cut::Kind::infinity:
      return c;
    case Cut::Kind::principal_plus:
      return Cut::principal_plus(c.point() + alpha);
    case Cut::Kind::principal_minus:
      return Cut::principal_minus(c.point() + alpha);
    case Cut::Kind::edge_minus:
      return Cut::edge_minus(c.subgroup(), c.point() + alpha);
    case Cut::Kind::edge_plus:
      return Cut::edge_plus(c.subgroup(), c.point() + alpha);
    case Cut::Kind::unresolved: {
      std::vector<GroupElement> prefix;
      prefix.reserve(c.prefix().size());
      for (const auto& v : c.prefix()) prefix.push_back(v + alpha);
      return Cut::unresolved(std::move(prefix), c.budget_used());
    }
  }
  throw Error("unreachable cut kind");
}

Cut scale_cut(const Cut& c, int s, unsigned p) {
  const Rational factor = pow_rational(p, s);
  switch (c.kind()) {
    case Cut::Kind::infinity:
      return c;
    case Cut::Kind::principal_plus:
      return Cut::principal_plus(c.point().scaled(factor));
    case Cut::Kind::principal_minus:
      return Cut::principal_minus(c.point().scaled(factor));
    case Cut::Kind::edge_minus:
      return Cut::edge_minus(c.subgroup(), c.point().scaled(factor));
    case Cut::Kind::edge_plus:
      return Cut::edge_plus(c.subgroup(), c.point().scaled(factor));
    case Cut::Kind::unresolved: {
      std::vector<GroupElement> prefix;
      prefix.reserve(c.prefix().size());
      for (const auto& v : c.prefix()) prefix.push_back(v.scaled(factor));
      return Cut::unresolved(std::move(prefix), c.budget_used());
    }
  }
  throw Error("unreachable cut kind");
}

CutModulus CutModulus::divisible_hull() { return CutModulus{}; }

CutModulus CutModulus::value_group(std::vector<CoordGroup> coords, unsigned prime) {
  CutModulus m;
  m.kind = Kind::value_group;
  m.coords = std::move(coords);
  m.prime = prime;
  return m;
}

namespace {

// Membership of delta in H + M where H has `free` trailing free coordinates:
// only the leading rank-free coordinates constrain.
bool member_modulus(const GroupElement& delta, int free_levels, const CutModulus& m) {
  if (m.kind == CutModulus::Kind::divisible_hull) return true;
  if (m.coords.size() != static_cast<size_t>(delta.rank()))
    throw RankMismatch("modulus coordinate count does not match cut rank");
  const int fixed = delta.rank() - free_levels;
  for (int i = 0; i < fixed; ++i)
    if (!coord_member(delta.coord(i), m.coords[static_cast<size_t>(i)], m.prime)) return false;
  return true;
}

}  // namespace

std::optional<bool> equal_mod(const Cut& c1, const Cut& c2, const CutModulus& modulus) {
  if (c1.rank() != c2.rank()) throw RankMismatch("cut ranks differ");
  if (!c1.resolved() || !c2.resolved()) return std::nullopt;
  if (c1.kind() != c2.kind()) return false;
  switch (c1.kind()) {
    case Cut::Kind::infinity:
      return true;  // fixed by every shift
    case Cut::Kind::principal_plus:
    case Cut::Kind::principal_minus:
      return member_modulus(c2.point() - c1.point(), 0, modulus);
    case Cut::Kind::edge_minus:
    case Cut::Kind::edge_plus: {
      if (!(c1.subgroup() == c2.subgroup())) return false;
      // Shifting by delta moves the coset; equality up to coset means the
      // difference only matters modulo H, i.e. membership in H + M.
      return member_modulus(c2.point() - c1.point(), c1.subgroup().free_levels, modulus);
    }
    default:
      return std::nullopt;
  }
}

namespace {

Ordering compare_prefix(const GroupElement& x, const GroupElement& y, int prefix_len) {
  for (int i = 0; i < prefix_len; ++i) {
    if (x.coord(i) < y.coord(i)) return Ordering::less;
    if (x.coord(i) > y.coord(i)) return Ordering::greater;
  }
  return Ordering::equal;
}

}  // namespace

std::optional<Ordering> compare_cuts(const Cut& c1, const Cut& c2) {
  if (c1.rank() != c2.rank()) throw RankMismatch("cut ranks differ");
  if (!c1.resolved() || !c2.resolved()) return std::nullopt;

  const bool inf1 = c1.kind() == Cut::Kind::infinity;
  const bool inf2 = c2.kind() == Cut::Kind::infinity;
  if (inf1 || inf2) {
    if (inf1 && inf2) return Ordering::equal;
    return inf1 ? Ordering::greater : Ordering::less;
  }

  const auto info1 = *classify_edge(c1);
  const auto info2 = *classify_edge(c2);
  const int j1 = info1.subgroup.free_levels;
  const int j2 = info2.subgroup.free_levels;
  const int rank = c1.rank();
  // Project both parameters to the quotient by the coarser subgroup; a
  // difference there decides the order outright.
  const int prefix_len = rank - std::max(j1, j2);
  const Ordering head = compare_prefix(info1.point, info2.point, prefix_len);
  if (head != Ordering::equal) return head;

  if (j1 == j2) {
    if (info1.side == info2.side) return Ordering::equal;
    return info1.side == EdgeInfo::Side::lower ? Ordering::less : Ordering::greater;
  }
  if (j1 < j2) {
    // c1 sits inside the coset whose edge c2 marks.
    return info2.side == EdgeInfo::Side::lower ? Ordering::greater : Ordering::less;
  }
  return info1.side == EdgeInfo::Side::lower ? Ordering::less : Ordering::greater;
}

bool lower_contains(const Cut& c, const GroupElement& x) {
  if (x.rank() != c.rank()) throw RankMismatch("point rank does not match cut rank");
  switch (c.kind()) {
    case Cut::Kind::infinity:
      return true;
    case Cut::Kind::principal_plus:
      return lex_less_equal(x, c.point());
    case Cut::Kind::principal_minus:
      return lex_less(x, c.point());
    case Cut::Kind::edge_minus: {
      const int prefix_len = c.rank() - c.subgroup().free_levels;
      return compare_prefix(x, c.point(), prefix_len) == Ordering::less;
    }
    case Cut::Kind::edge_plus: {
      const int prefix_len = c.rank() - c.subgroup().free_levels;
      return compare_prefix(x, c.point(), prefix_len) != Ordering::greater;
    }
    case Cut::Kind::unresolved:
      throw Error("lower_contains is undefined on unresolved cuts");
  }
  throw Error("unreachable cut kind");
}

std::optional<EdgeInfo> classify_edge(const Cut& c) {
  switch (c.kind()) {
    case Cut::Kind::principal_minus:
      return EdgeInfo{ConvexSubgroup{0, c.rank()}, c.point(), EdgeInfo::Side::lower};
    case Cut::Kind::principal_plus:
      return EdgeInfo{ConvexSubgroup{0, c.rank()}, c.point(), EdgeInfo::Side::upper};
    case Cut::Kind::edge_minus:
      return EdgeInfo{c.subgroup(), c.point(), EdgeInfo::Side::lower};
    case Cut::Kind::edge_plus:
      return EdgeInfo{c.subgroup(), c.point(), EdgeInfo::Side::upper};
    default:
      return std::nullopt;
  }
}

std::string render_cut(const Cut& c) {
  switch (c.kind()) {
    case Cut::Kind::infinity:
      return "inf";
    case Cut::Kind::principal_minus:
      return render_group_element(c.point()) + "-";
    case Cut::Kind::principal_plus:
      return render_group_element(c.point()) + "+";
    case Cut::Kind::edge_minus:
      return "edge-(" + std::to_string(c.subgroup().free_levels) + ")@" +
             render_group_element(c.point());
    case Cut::Kind::edge_plus:
      return "edge+(" + std::to_string(c.subgroup().free_levels) + ")@" +
             render_group_element(c.point());
    case Cut::Kind::unresolved: {
      std::string s = "unresolved[";
      for (size_t i = 0; i < c.prefix().size(); ++i) {
        if (i > 0) s += ",";
        s += render_group_element(c.prefix()[i]);
      }
      s += "]";
      return s;
    }
  }
  throw Error("unreachable cut kind");
}

Cut parse_cut(std::string_view text, int rank) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) throw ParseError("empty cut literal");
  text = text.substr(begin, end - begin + 1);

  if (text == "inf") return Cut::infinity(rank);

  if (text.rfind("unresolved[", 0) == 0) {
    if (text.back() != ']') throw ParseError("unterminated unresolved cut literal");
    std::string_view body = text.substr(11, text.size() - 12);
    std::vector<GroupElement> prefix;
    size_t pos = 0;
    int depth = 0;
    size_t item_start = 0;
    for (pos = 0; pos <= body.size(); ++pos) {
      if (pos == body.size() || (body[pos] == ',' && depth == 0)) {
        std::string_view item = body.substr(item_start, pos - item_start);
        if (!item.empty()) prefix.push_back(parse_group_element(item, rank));
        item_start = pos + 1;
      } else if (body[pos] == '(') {
        ++depth;
      } else if (body[pos] == ')') {
        --depth;
      }
    }
    return Cut::unresolved(std::move(prefix), 0);
  }

  if (text.rfind("edge-", 0) == 0 || text.rfind("edge+", 0) == 0) {
    const bool lower = text[4] == '-';
    std::string_view rest = text.substr(5);
    if (rest.empty() || rest.front() != '(') throw ParseError("edge cut needs (free_levels)");
    size_t close = rest.find(')');
    if (close == std::string_view::npos) throw ParseError("edge cut needs (free_levels)");
    int j = 0;
    for (size_t i = 1; i < close; ++i) {
      if (rest[i] < '0' || rest[i] > '9') throw ParseError("bad free_levels in edge cut");
      j = j * 10 + (rest[i] - '0');
    }
    if (close + 1 >= rest.size() || rest[close + 1] != '@')
      throw ParseError("edge cut needs @point");
    GroupElement a = parse_group_element(rest.substr(close + 2), rank);
    ConvexSubgroup h{j, rank};
    return lower ? Cut::edge_minus(h, std::move(a)) : Cut::edge_plus(h, std::move(a));
  }

  if (text.size() >= 2 && (text.back() == '-' || text.back() == '+')) {
    const bool lower = text.back() == '-';
    GroupElement g = parse_group_element(text.substr(0, text.size() - 1), rank);
    return lower ? Cut::principal_minus(std::move(g)) : Cut::principal_plus(std::move(g));
  }
  throw ParseError("unrecognized cut literal: '" + std::string(text) + "'");
}

}  // namespace valdist
