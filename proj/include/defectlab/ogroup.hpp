#ifndef DEFECTLAB_OGROUP_HPP
#define DEFECTLAB_OGROUP_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "defectlab/rational.hpp"

namespace defectlab {

// Value groups are finite lexicographic products of subgroups of Q.
enum class CoordKind {
    Integers,       // Z
    PAdicFractions, // Z[1/p], denominators a power of p
    Rationals,      // Q
};

enum class Ordering { LT, EQ, GT };

// Descriptor of a value group: coordinate kinds plus the prime p that
// PAdicFractions coordinates refer to. Immutable after construction.
class GroupDesc {
public:
    GroupDesc(int p, std::vector<CoordKind> coords);

    int p() const { return p_; }
    int rank() const { return static_cast<int>(coords_.size()); }
    CoordKind coord(int i) const { return coords_[static_cast<size_t>(i)]; }
    const std::vector<CoordKind>& coords() const { return coords_; }

    bool operator==(const GroupDesc& o) const = default;

    // All coordinates relaxed to Q. Cuts arising as distances live here.
    GroupDesc divisible_hull() const;
    bool is_divisible() const;

    // True iff `big` admits at least the elements of *this in every
    // coordinate (same rank and p, pointwise subgroup inclusion).
    bool extended_by(const GroupDesc& big) const;

    std::string to_string() const;

private:
    int p_;
    std::vector<CoordKind> coords_;
};

// One element of a GroupDesc: exact rational entries, one per coordinate.
class GroupElement {
public:
    GroupElement(GroupDesc desc, std::vector<Rat> entries);

    const GroupDesc& desc() const { return desc_; }
    const std::vector<Rat>& entries() const { return entries_; }
    const Rat& entry(int i) const { return entries_[static_cast<size_t>(i)]; }
    int rank() const { return desc_.rank(); }

    bool is_zero() const;
    std::string to_string() const;

private:
    GroupDesc desc_;
    std::vector<Rat> entries_;
};

// True iff q lies in the subgroup named by `kind`.
bool kind_admits(CoordKind kind, const Rat& q, int p);

GroupElement zero_element(const GroupDesc& desc);

// Lexicographic comparison; throws DescriptorError on mismatched groups.
Ordering compare(const GroupElement& a, const GroupElement& b);
bool element_eq(const GroupElement& a, const GroupElement& b);
bool element_lt(const GroupElement& a, const GroupElement& b);

GroupElement add(const GroupElement& a, const GroupElement& b);
GroupElement sub(const GroupElement& a, const GroupElement& b);
GroupElement negate(const GroupElement& a);

// Exact scaling by a rational. Throws DivisibilityError if any scaled entry
// leaves its coordinate subgroup (e.g. (1)/2 in an Integers coordinate).
GroupElement scale(const GroupElement& a, const Rat& q);

// Reinterpret an element in an extending group (typically the divisible
// hull). Entries are unchanged.
GroupElement lift(const GroupElement& a, const GroupDesc& big);

// Membership of a hull element in `desc`: every entry must lie in its
// coordinate subgroup. Arity and p must match.
bool contains(const GroupDesc& desc, const GroupElement& e);

// Value of a field element: a group element, or infinity for zero.
// Infinity compares above every group element.
class ExtValue {
public:
    ExtValue() = default; // infinity
    static ExtValue infinity() { return ExtValue(); }
    ExtValue(GroupElement v) : value_(std::move(v)) {} // NOLINT(google-explicit-constructor)

    bool is_infinity() const { return !value_.has_value(); }
    const GroupElement& finite() const;

    std::string to_string() const;

private:
    std::optional<GroupElement> value_;
};

Ordering compare(const ExtValue& a, const ExtValue& b);

} // namespace defectlab

#endif
