#include "defectlab/hahn.hpp"

#include <sstream>

namespace defectlab {

namespace {

bool lex_lt(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Rat> vec_add(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

std::vector<Rat> vec_scale(const std::vector<Rat>& a, const Rat& q) {
    std::vector<Rat> r = a;
    for (Rat& x : r) x *= q;
    return r;
}

} // namespace

FieldDesc::FieldDesc(GroupDesc group, GroupDesc admitted, FiniteFieldPtr coeff,
                     int residue_degree)
    : group_(std::move(group)), admitted_(std::move(admitted)), coeff_(std::move(coeff)),
      residue_degree_(residue_degree) {
    if (!admitted_.extended_by(group_))
        throw DescriptorError("admitted exponents must form a subgroup of the ambient group");
    if (group_.p() != coeff_->p())
        throw DescriptorError("exponent group prime and coefficient characteristic differ");
    if (residue_degree_ < 1 || coeff_->m() % residue_degree_ != 0)
        throw DescriptorError("residue degree must divide the coefficient field degree");
}

bool FieldDesc::operator==(const FieldDesc& o) const {
    return group_ == o.group_ && admitted_ == o.admitted_ && coeff_->p() == o.coeff_->p() &&
           coeff_->m() == o.coeff_->m() && residue_degree_ == o.residue_degree_;
}

const std::vector<Rat>& Precision::bound() const {
    if (is_exact()) throw PreconditionError("exact precision has no bound");
    return *bound_;
}

bool Precision::covers(const std::vector<Rat>& exponent) const {
    return is_exact() || lex_lt(exponent, *bound_);
}

std::string Precision::to_string() const {
    if (is_exact()) return "exact";
    std::string s = "O(t^";
    for (size_t i = 0; i < bound_->size(); ++i) {
        if (i) s += ",";
        s += rat_to_string((*bound_)[i]);
    }
    return s + ")";
}

Precision min_precision(const Precision& a, const Precision& b) {
    if (a.is_exact()) return b;
    if (b.is_exact()) return a;
    return lex_lt(a.bound(), b.bound()) ? a : b;
}

Precision shift_precision(const Precision& a, const std::vector<Rat>& by) {
    if (a.is_exact()) return a;
    return Precision(vec_add(a.bound(), by));
}

Precision scale_precision(const Precision& a, const Rat& q) {
    if (a.is_exact()) return a;
    if (q <= 0) throw PreconditionError("precision scaling requires a positive factor");
    return Precision(vec_scale(a.bound(), q));
}

HahnSeries::HahnSeries(FieldDesc field, TermMap terms, Precision prec)
    : field_(std::move(field)), terms_(std::move(terms)), prec_(std::move(prec)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (field_.coeff().is_zero(it->second)) {
            it = terms_.erase(it);
            continue;
        }
        // Validates coordinate-kind membership in the ambient group.
        GroupElement e(field_.group(), it->first);
        if (!prec_.covers(it->first))
            throw PrecisionError("term at exponent " + e.to_string() +
                                 " lies at or above the precision bound");
        ++it;
    }
}

HahnSeries HahnSeries::zero(FieldDesc field) {
    return HahnSeries(std::move(field), {}, Precision::exact());
}

HahnSeries HahnSeries::zero_at(FieldDesc field, Precision prec) {
    return HahnSeries(std::move(field), {}, std::move(prec));
}

HahnSeries HahnSeries::monomial(FieldDesc field, const GroupElement& exponent, Coeff c) {
    TermMap t;
    if (!field.coeff().is_zero(c)) t[exponent.entries()] = c;
    return HahnSeries(std::move(field), std::move(t), Precision::exact());
}

HahnSeries HahnSeries::monomial(FieldDesc field, const Rat& exponent, Coeff c) {
    if (field.group().rank() != 1)
        throw DescriptorError("scalar exponent requires a rank-1 exponent group");
    GroupElement e(field.group(), {exponent});
    return monomial(std::move(field), e, c);
}

HahnSeries HahnSeries::constant(FieldDesc field, Coeff c) {
    GroupElement e = zero_element(field.group());
    return monomial(std::move(field), e, c);
}

HahnSeries HahnSeries::make(FieldDesc field, TermMap terms, Precision prec) {
    return HahnSeries(std::move(field), std::move(terms), std::move(prec));
}

GroupElement HahnSeries::exponent_of(const TermMap::const_iterator& it) const {
    return GroupElement(field_.group(), it->first);
}

std::string HahnSeries::to_string() const {
    if (terms_.empty() && prec_.is_exact()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << field_.coeff().to_string(c) << "*t^";
        if (e.size() == 1) os << rat_to_string(e[0]);
        else {
            os << "(";
            for (size_t i = 0; i < e.size(); ++i) {
                if (i) os << ",";
                os << rat_to_string(e[i]);
            }
            os << ")";
        }
    }
    if (!prec_.is_exact()) {
        if (!first) os << " + ";
        os << prec_.to_string();
    }
    return os.str();
}

namespace {
void require_same_field(const HahnSeries& a, const HahnSeries& b) {
    if (!(a.field() == b.field()))
        throw DescriptorError("series live over different field descriptors");
}
} // namespace

ExtValue valuation(const HahnSeries& a) {
    if (!a.terms().empty()) return GroupElement(a.field().group(), a.terms().begin()->first);
    if (a.precision().is_exact()) return ExtValue::infinity();
    throw PrecisionError("series indistinguishable from zero at precision " +
                         a.precision().to_string());
}

std::pair<GroupElement, Coeff> leading_term(const HahnSeries& a) {
    ExtValue v = valuation(a);
    if (v.is_infinity()) throw PreconditionError("zero series has no leading term");
    return {v.finite(), a.terms().begin()->second};
}

HahnSeries operator+(const HahnSeries& a, const HahnSeries& b) {
    require_same_field(a, b);
    const FiniteField& F = a.field().coeff();
    Precision prec = min_precision(a.precision(), b.precision());
    HahnSeries::TermMap t = a.terms();
    for (const auto& [e, c] : b.terms()) {
        auto [it, inserted] = t.emplace(e, c);
        if (!inserted) it->second = F.add(it->second, c);
    }
    for (auto it = t.begin(); it != t.end();) {
        if (F.is_zero(it->second) || !prec.covers(it->first)) it = t.erase(it);
        else ++it;
    }
    return HahnSeries::make(a.field(), std::move(t), std::move(prec));
}

HahnSeries operator-(const HahnSeries& a) {
    const FiniteField& F = a.field().coeff();
    HahnSeries::TermMap t = a.terms();
    for (auto& [e, c] : t) c = F.neg(c);
    return HahnSeries::make(a.field(), std::move(t), a.precision());
}

HahnSeries operator-(const HahnSeries& a, const HahnSeries& b) { return a + (-b); }

HahnSeries operator*(const HahnSeries& a, const HahnSeries& b) {
    require_same_field(a, b);
    const FiniteField& F = a.field().coeff();
    if (a.is_exact_zero() || b.is_exact_zero()) return HahnSeries::zero(a.field());
    // Worst-case precision of a Cauchy product; when a factor's value is
    // unknown its precision bound is the sound lower estimate.
    auto value_floor = [](const HahnSeries& s) -> std::vector<Rat> {
        if (!s.terms().empty()) return s.terms().begin()->first;
        return s.precision().bound();
    };
    Precision prec = Precision::exact();
    if (!a.precision().is_exact() || !b.precision().is_exact()) {
        Precision pa = a.precision().is_exact()
                           ? Precision::exact()
                           : Precision(vec_add(a.precision().bound(), value_floor(b)));
        Precision pb = b.precision().is_exact()
                           ? Precision::exact()
                           : Precision(vec_add(b.precision().bound(), value_floor(a)));
        prec = min_precision(pa, pb);
    }
    HahnSeries::TermMap t;
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            std::vector<Rat> e = vec_add(ea, eb);
            if (!prec.covers(e)) continue;
            Coeff prod = F.mul(ca, cb);
            auto [it, inserted] = t.emplace(std::move(e), prod);
            if (!inserted) it->second = F.add(it->second, prod);
        }
    }
    for (auto it = t.begin(); it != t.end();) {
        if (F.is_zero(it->second)) it = t.erase(it);
        else ++it;
    }
    return HahnSeries::make(a.field(), std::move(t), std::move(prec));
}

HahnSeries scalar_mul(Coeff c, const HahnSeries& a) {
    const FiniteField& F = a.field().coeff();
    if (F.is_zero(c)) return HahnSeries::zero_at(a.field(), a.precision());
    HahnSeries::TermMap t = a.terms();
    for (auto& [e, x] : t) x = F.mul(c, x);
    return HahnSeries::make(a.field(), std::move(t), a.precision());
}

HahnSeries frobenius(const HahnSeries& a) {
    const FiniteField& F = a.field().coeff();
    HahnSeries::TermMap t;
    for (const auto& [e, c] : a.terms())
        t[vec_scale(e, Rat(a.field().p()))] = F.frobenius(c);
    return HahnSeries::make(a.field(), std::move(t),
                            scale_precision(a.precision(), Rat(a.field().p())));
}

HahnSeries pth_root(const HahnSeries& a) {
    const FieldDesc& K = a.field();
    const FiniteField& F = K.coeff();
    Rat inv_p(1, K.p());
    HahnSeries::TermMap t;
    for (const auto& [e, c] : a.terms()) {
        std::vector<Rat> re = vec_scale(e, inv_p);
        GroupElement root_exp(K.group().divisible_hull(), re);
        if (!contains(K.admitted(), root_exp))
            throw DivisibilityError("exponent " + root_exp.to_string() +
                                    " of the p-th root is not admitted: series is not in K^p");
        Coeff rc = F.pth_root(c);
        if (!K.admits_coeff(rc))
            throw DivisibilityError("coefficient p-th root leaves the residue field: "
                                    "series is not in K^p");
        t[std::move(re)] = rc;
    }
    return HahnSeries::make(K, std::move(t), scale_precision(a.precision(), inv_p));
}

HahnSeries int_pow(const HahnSeries& a, int n) {
    if (n < 0) throw PreconditionError("int_pow requires n >= 0");
    HahnSeries r = HahnSeries::constant(a.field(), a.field().coeff().one());
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

HahnSeries invert(const HahnSeries& a, const Precision& target) {
    const FieldDesc& K = a.field();
    const FiniteField& F = K.coeff();
    ExtValue va = valuation(a); // throws PrecisionError if unknown
    if (va.is_infinity()) throw Error("division-by-zero", "cannot invert the zero series");
    const std::vector<Rat>& v = va.finite().entries();
    // Knowing a below pi yields its inverse below pi - 2*va.
    Precision prec = target;
    if (!a.precision().is_exact()) {
        std::vector<Rat> cap = a.precision().bound();
        for (size_t i = 0; i < cap.size(); ++i) cap[i] -= 2 * v[i];
        prec = min_precision(prec, Precision(cap));
    }
    // a = lead * (1 + u), vu > 0: invert the unit by a geometric series.
    Coeff lead = a.terms().begin()->second;
    HahnSeries lead_inv =
        HahnSeries::monomial(K, GroupElement(K.group(), vec_scale(v, Rat(-1))), F.inv(lead));
    // Precision goal for the unit part: the result is lead_inv * unit_inv.
    Precision unit_prec = prec.is_exact() ? prec : Precision(vec_add(prec.bound(), v));
    HahnSeries u = truncate(lead_inv * a, unit_prec) - HahnSeries::constant(K, F.one());
    if (!u.terms().empty() && unit_prec.is_exact())
        throw PreconditionError("inverse is an infinite series; a finite target precision "
                                "is required");
    HahnSeries acc = HahnSeries::constant(K, F.one());
    HahnSeries pow = HahnSeries::constant(K, F.one());
    // Terms of u^k have exponent >= k * vu; truncation empties the power
    // once k * vu clears the goal.
    while (true) {
        pow = truncate(pow * (-u), unit_prec);
        if (pow.terms().empty()) break;
        acc = acc + pow;
    }
    return truncate(lead_inv * acc, prec);
}

Coeff residue(const HahnSeries& a) {
    const FieldDesc& K = a.field();
    std::vector<Rat> zero(static_cast<size_t>(K.group().rank()), Rat(0));
    if (!a.terms().empty() && lex_lt(a.terms().begin()->first, zero))
        throw NotIntegralError("residue of a series with negative value");
    if (!a.precision().is_exact() && !lex_lt(zero, a.precision().bound()))
        throw PrecisionError("constant term not determined at this precision");
    auto it = a.terms().find(zero);
    return it == a.terms().end() ? K.coeff().zero() : it->second;
}

HahnSeries truncate(const HahnSeries& a, const Precision& bound) {
    Precision prec = min_precision(a.precision(), bound);
    if (prec.is_exact()) return a;
    HahnSeries::TermMap t;
    for (const auto& [e, c] : a.terms())
        if (prec.covers(e)) t.emplace(e, c);
    return HahnSeries::make(a.field(), std::move(t), std::move(prec));
}

bool identical(const HahnSeries& a, const HahnSeries& b) {
    if (!(a.field() == b.field())) return false;
    if (a.precision().is_exact() != b.precision().is_exact()) return false;
    if (!a.precision().is_exact() && a.precision().bound() != b.precision().bound()) return false;
    return a.terms() == b.terms();
}

bool agree_below(const HahnSeries& a, const HahnSeries& b, const std::vector<Rat>& bound) {
    auto collect = [&](const HahnSeries& s) {
        HahnSeries::TermMap t;
        for (const auto& [e, c] : s.terms())
            if (lex_lt(e, bound)) t.emplace(e, c);
        return t;
    };
    return collect(a) == collect(b);
}

} // namespace defectlab
