#include "defectlab/ogroup.hpp"

#include <sstream>

#include "defectlab/errors.hpp"

namespace defectlab {

GroupDesc::GroupDesc(int p, std::vector<CoordKind> coords)
    : p_(p), coords_(std::move(coords)) {
    if (coords_.empty()) throw DescriptorError("group must have at least one coordinate");
    if (!is_prime(p_)) throw DescriptorError("p must be prime, got " + std::to_string(p_));
}

GroupDesc GroupDesc::divisible_hull() const {
    return GroupDesc(p_, std::vector<CoordKind>(coords_.size(), CoordKind::Rationals));
}

bool GroupDesc::is_divisible() const {
    for (CoordKind k : coords_)
        if (k != CoordKind::Rationals) return false;
    return true;
}

namespace {
// Z <= Z[1/p] <= Q as subgroups of Q.
int kind_level(CoordKind k) {
    switch (k) {
    case CoordKind::Integers: return 0;
    case CoordKind::PAdicFractions: return 1;
    case CoordKind::Rationals: return 2;
    }
    return -1;
}

const char* kind_name(CoordKind k) {
    switch (k) {
    case CoordKind::Integers: return "Z";
    case CoordKind::PAdicFractions: return "Z[1/p]";
    case CoordKind::Rationals: return "Q";
    }
    return "?";
}
} // namespace

bool GroupDesc::extended_by(const GroupDesc& big) const {
    if (p_ != big.p_ || coords_.size() != big.coords_.size()) return false;
    for (size_t i = 0; i < coords_.size(); ++i)
        if (kind_level(coords_[i]) > kind_level(big.coords_[i])) return false;
    return true;
}

std::string GroupDesc::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << " x ";
        os << kind_name(coords_[i]);
    }
    os << " (p=" << p_ << ")";
    return os.str();
}

bool kind_admits(CoordKind kind, const Rat& q, int p) {
    switch (kind) {
    case CoordKind::Integers: return is_integer(q);
    case CoordKind::PAdicFractions: return denominator_is_power_of(q, p);
    case CoordKind::Rationals: return true;
    }
    return false;
}

GroupElement::GroupElement(GroupDesc desc, std::vector<Rat> entries)
    : desc_(std::move(desc)), entries_(std::move(entries)) {
    if (static_cast<int>(entries_.size()) != desc_.rank())
        throw DescriptorError("entry count does not match group rank");
    for (int i = 0; i < desc_.rank(); ++i)
        if (!kind_admits(desc_.coord(i), entries_[static_cast<size_t>(i)], desc_.p()))
            throw DivisibilityError("entry " + rat_to_string(entries_[static_cast<size_t>(i)]) +
                                    " not in coordinate subgroup " + std::to_string(i));
}

bool GroupElement::is_zero() const {
    for (const Rat& q : entries_)
        if (q != 0) return false;
    return true;
}

std::string GroupElement::to_string() const {
    if (rank() == 1) return rat_to_string(entries_[0]);
    std::string s = "(";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ",";
        s += rat_to_string(entries_[i]);
    }
    return s + ")";
}

GroupElement zero_element(const GroupDesc& desc) {
    return GroupElement(desc, std::vector<Rat>(static_cast<size_t>(desc.rank()), Rat(0)));
}

namespace {
void require_same_desc(const GroupElement& a, const GroupElement& b) {
    if (!(a.desc() == b.desc()))
        throw DescriptorError("group descriptors differ: " + a.desc().to_string() + " vs " +
                              b.desc().to_string());
}
} // namespace

Ordering compare(const GroupElement& a, const GroupElement& b) {
    require_same_desc(a, b);
    for (int i = 0; i < a.rank(); ++i) {
        if (a.entry(i) < b.entry(i)) return Ordering::LT;
        if (a.entry(i) > b.entry(i)) return Ordering::GT;
    }
    return Ordering::EQ;
}

bool element_eq(const GroupElement& a, const GroupElement& b) {
    return compare(a, b) == Ordering::EQ;
}

bool element_lt(const GroupElement& a, const GroupElement& b) {
    return compare(a, b) == Ordering::LT;
}

GroupElement add(const GroupElement& a, const GroupElement& b) {
    require_same_desc(a, b);
    std::vector<Rat> r(a.entries());
    for (size_t i = 0; i < r.size(); ++i) r[i] += b.entries()[i];
    return GroupElement(a.desc(), std::move(r));
}

GroupElement sub(const GroupElement& a, const GroupElement& b) {
    require_same_desc(a, b);
    std::vector<Rat> r(a.entries());
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b.entries()[i];
    return GroupElement(a.desc(), std::move(r));
}

GroupElement negate(const GroupElement& a) {
    std::vector<Rat> r(a.entries());
    for (Rat& q : r) q = -q;
    return GroupElement(a.desc(), std::move(r));
}

GroupElement scale(const GroupElement& a, const Rat& q) {
    std::vector<Rat> r(a.entries());
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] *= q;
        if (!kind_admits(a.desc().coord(static_cast<int>(i)), r[i], a.desc().p()))
            throw DivisibilityError("scaling by " + rat_to_string(q) + " leaves coordinate " +
                                    std::to_string(i) + " subgroup");
    }
    return GroupElement(a.desc(), std::move(r));
}

GroupElement lift(const GroupElement& a, const GroupDesc& big) {
    if (!a.desc().extended_by(big))
        throw DescriptorError("cannot lift element into non-extending group");
    return GroupElement(big, a.entries());
}

bool contains(const GroupDesc& desc, const GroupElement& e) {
    if (desc.rank() != e.rank() || desc.p() != e.desc().p())
        throw DescriptorError("contains: incompatible group arity or prime");
    for (int i = 0; i < desc.rank(); ++i)
        if (!kind_admits(desc.coord(i), e.entry(i), desc.p())) return false;
    return true;
}

const GroupElement& ExtValue::finite() const {
    if (is_infinity()) throw PreconditionError("infinite value where finite required");
    return *value_;
}

std::string ExtValue::to_string() const {
    return is_infinity() ? "inf" : value_->to_string();
}

Ordering compare(const ExtValue& a, const ExtValue& b) {
    if (a.is_infinity() && b.is_infinity()) return Ordering::EQ;
    if (a.is_infinity()) return Ordering::GT;
    if (b.is_infinity()) return Ordering::LT;
    return compare(a.finite(), b.finite());
}

} // namespace defectlab
