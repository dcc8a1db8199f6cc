#ifndef DEFECTLAB_CUTS_HPP
#define DEFECTLAB_CUTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "defectlab/ogroup.hpp"

namespace defectlab {

// Convex subgroup of a lexicographic product, identified by its suffix
// index j: H_j = {0}^j x (remaining coordinates). j = rank is the trivial
// subgroup {0}; j = 0 is the whole group.
struct ConvexSubgroup {
    int suffix_index = 0;
};

enum class CutSide { Minus, Plus };
enum class CutPosition { InLeft, InRight };

// A cut in an ordered abelian group, restricted to the representable class
// gamma + H^± together with the extremal cuts TOP (left set = everything)
// and BOTTOM (left set = empty).
//
// Semantics for a principal cut (gamma, H_j, side): an element alpha lies
// in the left set iff the first j coordinates of alpha compare to those of
// gamma as <= (side Plus) or < (side Minus). For j = rank this is the full
// comparison, giving the point cuts gamma^+ and gamma^-.
//
// Normal form: entries of gamma at coordinates >= j are zero, and a Minus
// cut whose quotient modulo H_j has a least positive element (last quotient
// coordinate of kind Integers) is rewritten as a Plus cut shifted down by
// that least element. Two cuts are equal iff their normal forms coincide.
class Cut {
public:
    static Cut top(const GroupDesc& g);
    static Cut bottom(const GroupDesc& g);
    static Cut principal(GroupElement shift, ConvexSubgroup h, CutSide side);
    // gamma^+ / gamma^- (H = {0}).
    static Cut at_plus(const GroupElement& shift);
    static Cut at_minus(const GroupElement& shift);
    // Edge cuts H_j^+ / H_j^- (zero shift).
    static Cut edge(const GroupDesc& g, ConvexSubgroup h, CutSide side);

    const GroupDesc& group() const { return group_; }
    bool is_top() const { return kind_ == Kind::Top; }
    bool is_bottom() const { return kind_ == Kind::Bottom; }
    bool is_principal() const { return kind_ == Kind::Principal; }

    // Normal-form data; only meaningful for principal cuts.
    const GroupElement& shift() const;
    int subgroup_index() const;
    CutSide side() const;

    std::string to_string() const;

private:
    enum class Kind { Bottom, Principal, Top };
    Cut(GroupDesc g, Kind k) : group_(std::move(g)), kind_(k) {}
    void normalize();

    GroupDesc group_;
    Kind kind_;
    std::optional<GroupElement> shift_;
    int subgroup_index_ = 0;
    CutSide side_ = CutSide::Plus;
};

// Reinterpret a cut in an extending group via the least-initial-segment
// embedding. Order and addition preserving; normal forms carry over.
Cut embed(const Cut& c, const GroupDesc& big);

// Left-set inclusion order. c1's group must be extended by c2's group;
// c1 is embedded first.
Ordering cut_compare(const Cut& c1, const Cut& c2);
bool cut_eq(const Cut& c1, const Cut& c2);

// Left sum: the cut whose left set is the sum of the two left sets.
// BOTTOM absorbs, then TOP absorbs.
Cut cut_add(const Cut& c1, const Cut& c2);

// n-fold left sum, n >= 1.
Cut cut_nfold(int n, const Cut& c);

// Translation by a group element: (alpha + Lambda).
Cut cut_shift(const Cut& c, const GroupElement& alpha);

bool is_idempotent(const Cut& c);

// Side an element falls on. alpha's group must extend the cut's group
// (typically: alpha in the divisible hull).
CutPosition element_vs_cut(const GroupElement& alpha, const Cut& c);
CutPosition value_vs_cut(const ExtValue& v, const Cut& c);

// ---------------------------------------------------------------------------
// Extensional brute-force oracle for the closed-form cut arithmetic.
//
// The sample is a finite product lattice (one sorted value list per
// coordinate). Left sets restricted to the sample are initial segments of a
// finite total order, so the extensional sum {a + b | a in L1, b in L2},
// closed downward, equals { s | s <= max(L1) + max(L2) }. The oracle
// computes those maxima purely from element_vs_cut membership — it never
// consults cut_add or the normal-form table.

struct SampleGrid {
    std::vector<std::vector<Rat>> axes; // sorted ascending, per coordinate
};

// Left set of a cut restricted to a sample: empty, or everything up to and
// including `sup` (a sample point).
struct SampledCut {
    bool empty = true;
    std::optional<GroupElement> sup;

    bool in_left(const GroupElement& alpha) const;
};

// Largest sample point in the cut's left set, by coordinate-wise search
// over the lattice (membership tested via element_vs_cut only).
SampledCut restrict_to_sample(const Cut& c, const SampleGrid& grid, const GroupDesc& desc);

// Extensional left sum of two cuts on the sample.
SampledCut grid_oracle(const Cut& c1, const Cut& c2, const SampleGrid& grid,
                       const GroupDesc& desc);

} // namespace defectlab

#endif
