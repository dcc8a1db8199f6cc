#include "defectlab/cuts.hpp"

#include <algorithm>

#include "defectlab/errors.hpp"

namespace defectlab {

namespace {

// Compare the first j coordinates lexicographically.
Ordering compare_prefix(const GroupElement& a, const GroupElement& b, int j) {
    for (int i = 0; i < j; ++i) {
        if (a.entry(i) < b.entry(i)) return Ordering::LT;
        if (a.entry(i) > b.entry(i)) return Ordering::GT;
    }
    return Ordering::EQ;
}

// The quotient modulo H_j has a least positive element iff the last
// quotient coordinate is discrete.
bool quotient_discrete(const GroupDesc& g, int j) {
    return j >= 1 && g.coord(j - 1) == CoordKind::Integers;
}

} // namespace

Cut Cut::top(const GroupDesc& g) { return Cut(g, Kind::Top); }
Cut Cut::bottom(const GroupDesc& g) { return Cut(g, Kind::Bottom); }

Cut Cut::principal(GroupElement shift, ConvexSubgroup h, CutSide side) {
    GroupDesc g = shift.desc();
    if (h.suffix_index < 0 || h.suffix_index > g.rank())
        throw DescriptorError("convex subgroup index out of range");
    Cut c(g, Kind::Principal);
    c.shift_ = std::move(shift);
    c.subgroup_index_ = h.suffix_index;
    c.side_ = side;
    c.normalize();
    return c;
}

Cut Cut::at_plus(const GroupElement& shift) {
    return principal(shift, ConvexSubgroup{shift.desc().rank()}, CutSide::Plus);
}

Cut Cut::at_minus(const GroupElement& shift) {
    return principal(shift, ConvexSubgroup{shift.desc().rank()}, CutSide::Minus);
}

Cut Cut::edge(const GroupDesc& g, ConvexSubgroup h, CutSide side) {
    return principal(zero_element(g), h, side);
}

void Cut::normalize() {
    if (kind_ != Kind::Principal) return;
    int j = subgroup_index_;
    // H_0 is the whole group: its upper edge is TOP, its lower edge BOTTOM.
    if (j == 0) {
        kind_ = (side_ == CutSide::Plus) ? Kind::Top : Kind::Bottom;
        shift_.reset();
        return;
    }
    std::vector<Rat> e = shift_->entries();
    for (size_t i = static_cast<size_t>(j); i < e.size(); ++i) e[i] = 0;
    // Discrete quotient: gamma + H^- = (gamma - delta) + H^+ where delta is
    // the least positive element of the quotient, lifted canonically.
    if (side_ == CutSide::Minus && quotient_discrete(group_, j)) {
        e[static_cast<size_t>(j - 1)] -= 1;
        side_ = CutSide::Plus;
    }
    shift_ = GroupElement(group_, std::move(e));
}

const GroupElement& Cut::shift() const {
    if (!is_principal()) throw PreconditionError("extremal cut has no shift");
    return *shift_;
}

int Cut::subgroup_index() const {
    if (!is_principal()) throw PreconditionError("extremal cut has no subgroup");
    return subgroup_index_;
}

CutSide Cut::side() const {
    if (!is_principal()) throw PreconditionError("extremal cut has no side");
    return side_;
}

std::string Cut::to_string() const {
    if (is_top()) return "TOP";
    if (is_bottom()) return "BOTTOM";
    std::string s = "(" + shift_->to_string();
    if (subgroup_index_ < group_.rank()) s += ",H" + std::to_string(subgroup_index_);
    s += (side_ == CutSide::Plus) ? ",+)" : ",-)";
    return s;
}

Cut embed(const Cut& c, const GroupDesc& big) {
    if (!c.group().extended_by(big))
        throw DescriptorError("cut embedding requires an extending group");
    if (c.group() == big) return c;
    if (c.is_top()) return Cut::top(big);
    if (c.is_bottom()) return Cut::bottom(big);
    // The shift is reinterpreted verbatim. A normal-form Minus cut has a
    // dense quotient, which stays dense in any extension, so the normal
    // form is stable under embedding.
    return Cut::principal(lift(c.shift(), big), ConvexSubgroup{c.subgroup_index()}, c.side());
}

Ordering cut_compare(const Cut& c1in, const Cut& c2in) {
    const GroupDesc* g = &c1in.group();
    if (!(c1in.group() == c2in.group())) {
        if (c1in.group().extended_by(c2in.group())) g = &c2in.group();
        else if (c2in.group().extended_by(c1in.group())) g = &c1in.group();
        else throw DescriptorError("cut_compare: incomparable groups");
    }
    Cut c1 = embed(c1in, *g), c2 = embed(c2in, *g);
    auto lt = [](bool cond) { return cond ? Ordering::LT : Ordering::GT; };
    if (c1.is_bottom() || c2.is_bottom()) {
        if (c1.is_bottom() && c2.is_bottom()) return Ordering::EQ;
        return lt(c1.is_bottom());
    }
    if (c1.is_top() || c2.is_top()) {
        if (c1.is_top() && c2.is_top()) return Ordering::EQ;
        return lt(c2.is_top());
    }
    int j = std::min(c1.subgroup_index(), c2.subgroup_index());
    Ordering pre = compare_prefix(c1.shift(), c2.shift(), j);
    if (pre != Ordering::EQ) return pre;
    if (c1.subgroup_index() == c2.subgroup_index()) {
        // Same subgroup, same reduced shift prefix: the shifts agree.
        if (c1.side() == c2.side()) return Ordering::EQ;
        return lt(c1.side() == CutSide::Minus);
    }
    // Equal prefixes, nested subgroups: the larger subgroup's edge swallows
    // or precedes the whole fiber the smaller cut sits in.
    const Cut& larger = (c1.subgroup_index() < c2.subgroup_index()) ? c1 : c2;
    bool larger_is_c1 = (c1.subgroup_index() < c2.subgroup_index());
    bool larger_above = (larger.side() == CutSide::Plus);
    return lt(larger_is_c1 != larger_above);
}

bool cut_eq(const Cut& c1, const Cut& c2) { return cut_compare(c1, c2) == Ordering::EQ; }

Cut cut_add(const Cut& c1in, const Cut& c2in) {
    const GroupDesc* g = &c1in.group();
    if (!(c1in.group() == c2in.group())) {
        if (c1in.group().extended_by(c2in.group())) g = &c2in.group();
        else if (c2in.group().extended_by(c1in.group())) g = &c1in.group();
        else throw DescriptorError("cut_add: incomparable groups");
    }
    Cut c1 = embed(c1in, *g), c2 = embed(c2in, *g);
    // An empty left set absorbs everything; then a full one does.
    if (c1.is_bottom() || c2.is_bottom()) return Cut::bottom(*g);
    if (c1.is_top() || c2.is_top()) return Cut::top(*g);
    // Shifts add. Edges combine as the larger subgroup, whose operand's
    // side wins; on equal subgroups Minus wins. Validated extensionally by
    // grid_oracle in the test suite.
    GroupElement sum = add(c1.shift(), c2.shift());
    int j1 = c1.subgroup_index(), j2 = c2.subgroup_index();
    int j = std::min(j1, j2);
    CutSide side;
    if (j1 < j2) side = c1.side();
    else if (j2 < j1) side = c2.side();
    else side = (c1.side() == CutSide::Minus || c2.side() == CutSide::Minus) ? CutSide::Minus
                                                                             : CutSide::Plus;
    return Cut::principal(std::move(sum), ConvexSubgroup{j}, side);
}

Cut cut_nfold(int n, const Cut& c) {
    if (n < 1) throw PreconditionError("cut_nfold requires n >= 1");
    Cut acc = c;
    for (int i = 1; i < n; ++i) acc = cut_add(acc, c);
    return acc;
}

Cut cut_shift(const Cut& cin, const GroupElement& alpha) {
    Cut c = cin;
    GroupElement a = alpha;
    if (!(alpha.desc() == c.group())) {
        if (c.group().extended_by(alpha.desc())) c = embed(c, alpha.desc());
        else a = lift(alpha, c.group());
    }
    if (c.is_top() || c.is_bottom()) return c;
    return Cut::principal(add(c.shift(), a), ConvexSubgroup{c.subgroup_index()}, c.side());
}

bool is_idempotent(const Cut& c) { return cut_eq(cut_add(c, c), c); }

CutPosition element_vs_cut(const GroupElement& alphain, const Cut& cin) {
    Cut c = cin;
    GroupElement alpha = alphain;
    if (!(alpha.desc() == c.group())) {
        if (c.group().extended_by(alpha.desc())) c = embed(c, alpha.desc());
        else alpha = lift(alpha, c.group());
    }
    if (c.is_top()) return CutPosition::InLeft;
    if (c.is_bottom()) return CutPosition::InRight;
    Ordering pre = compare_prefix(alpha, c.shift(), c.subgroup_index());
    bool in_left = (c.side() == CutSide::Plus) ? pre != Ordering::GT : pre == Ordering::LT;
    return in_left ? CutPosition::InLeft : CutPosition::InRight;
}

CutPosition value_vs_cut(const ExtValue& v, const Cut& c) {
    // Infinity lies above every left set, even TOP's.
    if (v.is_infinity()) return CutPosition::InRight;
    return element_vs_cut(v.finite(), c);
}

bool SampledCut::in_left(const GroupElement& alpha) const {
    if (empty) return false;
    return compare(alpha, *sup) != Ordering::GT;
}

SampledCut restrict_to_sample(const Cut& c, const SampleGrid& grid, const GroupDesc& desc) {
    int r = desc.rank();
    if (static_cast<int>(grid.axes.size()) != r)
        throw DescriptorError("sample grid rank does not match group");
    auto member = [&](const std::vector<Rat>& e) {
        return element_vs_cut(GroupElement(desc, e), c) == CutPosition::InLeft;
    };
    // The left set is downward closed, so a point extends to a member iff
    // filling its tail with the axis minima gives a member. Maximize
    // coordinate by coordinate; each axis scan is a binary search on the
    // monotone membership predicate.
    std::vector<Rat> point(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        if (grid.axes[static_cast<size_t>(i)].empty())
            throw DescriptorError("sample grid axis is empty");
        point[static_cast<size_t>(i)] = grid.axes[static_cast<size_t>(i)].front();
    }
    if (!member(point)) return SampledCut{};
    for (int i = 0; i < r; ++i) {
        const auto& axis = grid.axes[static_cast<size_t>(i)];
        size_t lo = 0, hi = axis.size() - 1; // invariant: axis[lo] keeps membership
        while (lo < hi) {
            size_t mid = (lo + hi + 1) / 2;
            point[static_cast<size_t>(i)] = axis[mid];
            if (member(point)) lo = mid;
            else hi = mid - 1;
        }
        point[static_cast<size_t>(i)] = axis[lo];
    }
    return SampledCut{false, GroupElement(desc, point)};
}

SampledCut grid_oracle(const Cut& c1, const Cut& c2, const SampleGrid& grid,
                       const GroupDesc& desc) {
    SampledCut l1 = restrict_to_sample(c1, grid, desc);
    SampledCut l2 = restrict_to_sample(c2, grid, desc);
    if (l1.empty || l2.empty) return SampledCut{};
    return SampledCut{false, add(*l1.sup, *l2.sup)};
}

} // namespace defectlab
