#ifndef DEFECTLAB_FFIELD_HPP
#define DEFECTLAB_FFIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "defectlab/errors.hpp"

namespace defectlab {

// Element of F_{p^m}, encoded as the base-p digit expansion of its
// coordinate vector over F_p: c_0 + c_1*p + ... + c_{m-1}*p^{m-1}.
// Interpretation requires the owning FiniteField.
struct Coeff {
    std::uint64_t rep = 0;
    bool operator==(const Coeff&) const = default;
};

// F_{p^m} represented as F_p[x]/(f) for the lexicographically first monic
// irreducible f of degree m. Fields built from the same (p, m) are
// therefore identical, which keeps serialized coefficients portable.
class FiniteField {
public:
    static std::shared_ptr<const FiniteField> make(int p, int m);

    int p() const { return p_; }
    int m() const { return m_; }
    std::uint64_t order() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    Coeff zero() const { return Coeff{0}; }
    Coeff one() const { return Coeff{1}; }
    // Image of an integer under Z -> F_p <= F_{p^m}.
    Coeff from_int(long long n) const;
    // Element with the given encoding; must be < p^m.
    Coeff from_rep(std::uint64_t rep) const;

    bool is_zero(Coeff a) const { return a.rep == 0; }
    Coeff add(Coeff a, Coeff b) const;
    Coeff neg(Coeff a) const;
    Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }
    Coeff mul(Coeff a, Coeff b) const;
    Coeff inv(Coeff a) const;
    Coeff pow(Coeff a, std::uint64_t e) const;

    Coeff frobenius(Coeff a) const { return pow(a, static_cast<std::uint64_t>(p_)); }
    // Inverse of Frobenius; exists since F_{p^m} is perfect.
    Coeff pth_root(Coeff a) const;

    // Membership in the subfield F_{p^d} for d | m.
    bool in_subfield(Coeff a, int d) const;

    std::string to_string(Coeff a) const { return std::to_string(a.rep); }
    Coeff parse(const std::string& s) const;

private:
    FiniteField(int p, int m);

    std::vector<int> unpack(Coeff a) const;
    Coeff pack(const std::vector<int>& digits) const;

    int p_, m_;
    std::uint64_t q_;
    std::vector<int> modulus_; // coefficients of f, degree m, monic
};

using FiniteFieldPtr = std::shared_ptr<const FiniteField>;

} // namespace defectlab

#endif
