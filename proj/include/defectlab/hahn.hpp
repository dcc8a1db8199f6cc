#ifndef DEFECTLAB_HAHN_HPP
#define DEFECTLAB_HAHN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "defectlab/ffield.hpp"
#include "defectlab/ogroup.hpp"

namespace defectlab {

// Descriptor of a valued field modeled by truncated sparse power series:
// exponents range over `group` (the ambient exponent group used for
// arithmetic), the field K itself admits exponents in the subgroup
// `admitted` and coefficients in the residue subfield F_{p^{residue_degree}}
// of the series coefficient field F_{p^m}.
class FieldDesc {
public:
    FieldDesc(GroupDesc group, GroupDesc admitted, FiniteFieldPtr coeff, int residue_degree);
    FieldDesc(GroupDesc group, GroupDesc admitted, int p, int m)
        : FieldDesc(std::move(group), std::move(admitted), FiniteField::make(p, m), m) {}

    const GroupDesc& group() const { return group_; }
    const GroupDesc& admitted() const { return admitted_; }
    const FiniteField& coeff() const { return *coeff_; }
    const FiniteFieldPtr& coeff_ptr() const { return coeff_; }
    int p() const { return group_.p(); }
    int residue_degree() const { return residue_degree_; }

    // Exponent admitted by K.
    bool admits_exponent(const GroupElement& e) const { return contains(admitted_, e); }
    // Coefficient realizable as a residue of K.
    bool admits_coeff(Coeff c) const { return coeff_->in_subfield(c, residue_degree_); }

    bool operator==(const FieldDesc& o) const;

private:
    GroupDesc group_;
    GroupDesc admitted_;
    FiniteFieldPtr coeff_;
    int residue_degree_;
};

// Precision bound: all terms with exponent strictly below the bound are
// exactly represented. Exact (TOP) means the series is known completely.
// Raw entry tuples are used so bounds may lie in the divisible hull.
class Precision {
public:
    static Precision exact() { return Precision(); }
    explicit Precision(std::vector<Rat> bound) : bound_(std::move(bound)) {}

    bool is_exact() const { return !bound_.has_value(); }
    const std::vector<Rat>& bound() const;
    bool covers(const std::vector<Rat>& exponent) const; // exponent < bound
    std::string to_string() const;

private:
    Precision() = default;
    std::optional<std::vector<Rat>> bound_;
};

Precision min_precision(const Precision& a, const Precision& b);
Precision shift_precision(const Precision& a, const std::vector<Rat>& by);
Precision scale_precision(const Precision& a, const Rat& q);

// Finite sparse generalized power series: exponent -> nonzero coefficient,
// exponents strictly increasing, all below the precision bound.
class HahnSeries {
public:
    using TermMap = std::map<std::vector<Rat>, Coeff>;

    static HahnSeries zero(FieldDesc field); // exact zero
    static HahnSeries zero_at(FieldDesc field, Precision prec);
    static HahnSeries monomial(FieldDesc field, const GroupElement& exponent, Coeff c);
    static HahnSeries monomial(FieldDesc field, const Rat& exponent, Coeff c); // rank-1
    static HahnSeries constant(FieldDesc field, Coeff c);
    static HahnSeries make(FieldDesc field, TermMap terms, Precision prec);

    const FieldDesc& field() const { return field_; }
    const TermMap& terms() const { return terms_; }
    const Precision& precision() const { return prec_; }
    bool is_exact_zero() const { return terms_.empty() && prec_.is_exact(); }

    GroupElement exponent_of(const TermMap::const_iterator& it) const;
    std::string to_string() const;

private:
    HahnSeries(FieldDesc field, TermMap terms, Precision prec);

    FieldDesc field_;
    TermMap terms_;
    Precision prec_;
};

// Least exponent; INFINITY for the exact zero. Throws PrecisionError when
// the series is indistinguishable from zero at finite precision.
ExtValue valuation(const HahnSeries& a);
// Leading (exponent, coefficient); same error behavior.
std::pair<GroupElement, Coeff> leading_term(const HahnSeries& a);

HahnSeries operator+(const HahnSeries& a, const HahnSeries& b);
HahnSeries operator-(const HahnSeries& a, const HahnSeries& b);
HahnSeries operator-(const HahnSeries& a);
HahnSeries operator*(const HahnSeries& a, const HahnSeries& b);

HahnSeries scalar_mul(Coeff c, const HahnSeries& a);

// Exponents multiplied by p, coefficients raised to the p-th power.
HahnSeries frobenius(const HahnSeries& a);
// Inverse of frobenius within K: every exponent/p must be admitted and
// every coefficient root must be a K-residue; otherwise DivisibilityError
// ("a is not in K^p").
HahnSeries pth_root(const HahnSeries& a);
// p-th power via iterated frobenius is exact; this is x -> x^n for small n.
HahnSeries int_pow(const HahnSeries& a, int n);

// Multiplicative inverse to the requested precision.
HahnSeries invert(const HahnSeries& a, const Precision& target);

// Coefficient at exponent zero when va >= 0; NotIntegralError for va < 0.
Coeff residue(const HahnSeries& a);

// Drop terms at or above the bound and cap the precision.
HahnSeries truncate(const HahnSeries& a, const Precision& bound);

// Exact structural equality (terms and precision).
bool identical(const HahnSeries& a, const HahnSeries& b);
// Agreement of all terms strictly below the given exponent bound.
bool agree_below(const HahnSeries& a, const HahnSeries& b, const std::vector<Rat>& bound);

} // namespace defectlab

#endif
