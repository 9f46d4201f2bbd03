#include "valdist/ordgroup.hpp"

#include <utility>

#include "valdist/errors.hpp"

namespace valdist {

GroupElement::GroupElement(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw RankMismatch("group element needs rank >= 1");
}

GroupElement GroupElement::zero(int rank) {
  if (rank < 1) throw RankMismatch("rank must be >= 1");
  return GroupElement(std::vector<Rational>(static_cast<size_t>(rank), Rational(0)));
}

GroupElement GroupElement::scalar(Rational value) {
  return GroupElement(std::vector<Rational>{std::move(value)});
}

bool GroupElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

int GroupElement::first_nonzero() const {
  for (size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] != 0) return static_cast<int>(i);
  return rank();
}

namespace {
void check_ranks(const GroupElement& x, const GroupElement& y) {
  if (x.rank() != y.rank())
    throw RankMismatch("group elements of rank " + std::to_string(x.rank()) + " and " +
                       std::to_string(y.rank()));
}
}  // namespace

GroupElement GroupElement::operator+(const GroupElement& other) const {
  check_ranks(*this, other);
  std::vector<Rational> out = coords_;
  for (size_t i = 0; i < out.size(); ++i) out[i] += other.coords_[i];
  return GroupElement(std::move(out));
}

GroupElement GroupElement::operator-(const GroupElement& other) const {
  return *this + (-other);
}

GroupElement GroupElement::operator-() const {
  std::vector<Rational> out = coords_;
  for (auto& c : out) c = -c;
  return GroupElement(std::move(out));
}

GroupElement GroupElement::scaled(const Rational& factor) const {
  std::vector<Rational> out = coords_;
  for (auto& c : out) c *= factor;
  return GroupElement(std::move(out));
}

bool GroupElement::operator==(const GroupElement& other) const {
  return coords_ == other.coords_;
}

Ordering compare(const GroupElement& x, const GroupElement& y) {
  check_ranks(x, y);
  for (int i = 0; i < x.rank(); ++i) {
    if (x.coord(i) < y.coord(i)) return Ordering::less;
    if (x.coord(i) > y.coord(i)) return Ordering::greater;
  }
  return Ordering::equal;
}

bool coord_member(const Rational& q, const CoordGroup& g, unsigned p) {
  switch (g.kind) {
    case CoordGroup::Kind::all_rationals:
      return true;
    case CoordGroup::Kind::p_power_denominators:
      return has_p_power_denominator(q, p);
    case CoordGroup::Kind::lattice: {
      // q in p^(-level)·Z  <=>  q·p^level integral
      Rational scaled = q * pow_rational(p, g.level);
      return is_integer(scaled);
    }
  }
  return false;
}

OrderedGroupSpec::OrderedGroupSpec(int rank, unsigned prime, std::vector<CoordGroup> coords)
    : rank_(rank), prime_(prime), coords_(std::move(coords)) {
  if (rank_ < 1) throw RankMismatch("group spec rank must be >= 1");
  if (prime_ < 2) throw Error("prime must be >= 2");
  if (coords_.size() != static_cast<size_t>(rank_))
    throw RankMismatch("coordinate descriptor count does not match rank");
}

OrderedGroupSpec OrderedGroupSpec::uniform(int rank, unsigned prime, CoordGroup g) {
  return OrderedGroupSpec(rank, prime, std::vector<CoordGroup>(static_cast<size_t>(rank), g));
}

int rank_of(const OrderedGroupSpec& spec) { return spec.rank(); }

bool member_value_group(const GroupElement& x, const OrderedGroupSpec& spec) {
  if (x.rank() != spec.rank()) throw RankMismatch("element rank does not match group spec");
  for (int i = 0; i < x.rank(); ++i)
    if (!coord_member(x.coord(i), spec.coords()[static_cast<size_t>(i)], spec.prime()))
      return false;
  return true;
}

bool member_divisible_hull(const GroupElement& x, const OrderedGroupSpec& spec) {
  if (x.rank() != spec.rank()) throw RankMismatch("element rank does not match group spec");
  return true;
}

bool member_convex(const GroupElement& x, const ConvexSubgroup& h) {
  if (x.rank() != h.rank) throw RankMismatch("element rank does not match subgroup rank");
  const int fixed = h.rank - h.free_levels;
  for (int i = 0; i < fixed; ++i)
    if (x.coord(i) != 0) return false;
  return true;
}

std::vector<ConvexSubgroup> convex_subgroups(const OrderedGroupSpec& spec) {
  std::vector<ConvexSubgroup> out;
  out.reserve(static_cast<size_t>(spec.rank()));
  for (int j = 0; j < spec.rank(); ++j) out.push_back(ConvexSubgroup{j, spec.rank()});
  return out;
}

std::string render_group_element(const GroupElement& x) {
  if (x.rank() == 1) return render_rational(x.coord(0));
  std::string s = "(";
  for (int i = 0; i < x.rank(); ++i) {
    if (i > 0) s += ",";
    s += render_rational(x.coord(i));
  }
  s += ")";
  return s;
}

GroupElement parse_group_element(std::string_view text, int expected_rank) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) throw ParseError("empty group element literal");
  text = text.substr(begin, end - begin + 1);

  std::vector<Rational> coords;
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw ParseError("unbalanced parentheses in tuple literal");
    std::string_view body = text.substr(1, text.size() - 2);
    size_t pos = 0;
    while (true) {
      size_t comma = body.find(',', pos);
      std::string_view item =
          comma == std::string_view::npos ? body.substr(pos) : body.substr(pos, comma - pos);
      coords.push_back(parse_rational(item));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  } else {
    coords.push_back(parse_rational(text));
  }
  if (expected_rank > 0 && static_cast<int>(coords.size()) != expected_rank)
    throw ParseError("tuple rank " + std::to_string(coords.size()) + ", expected " +
                     std::to_string(expected_rank));
  return GroupElement(std::move(coords));
}

}  // namespace valdist
