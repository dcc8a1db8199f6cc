#include "defectlab/ffield.hpp"

#include <map>
#include <mutex>

#include "defectlab/rational.hpp"

namespace defectlab {

namespace {

// Dense F_p[x] arithmetic on coefficient vectors (index = degree), used
// only for modulus construction and element multiplication.
using Poly = std::vector<int>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<int>((r[i + j] + 1LL * a[i] * b[j]) % p);
    trim(r);
    return r;
}

Poly poly_mod(Poly a, const Poly& f, int p) {
    trim(a);
    while (a.size() >= f.size()) {
        int lead = a.back();
        size_t shift = a.size() - f.size();
        for (size_t i = 0; i < f.size(); ++i) {
            size_t k = i + shift;
            a[k] = static_cast<int>(((a[k] - 1LL * lead * f[i]) % p + p) % p);
        }
        trim(a);
    }
    return a;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, int p) {
    Poly r = {1};
    base = poly_mod(std::move(base), f, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul(r, base, p), f, p);
        base = poly_mod(poly_mul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::uint64_t upow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// f monic of degree m is irreducible iff x^{p^m} = x mod f and
// gcd(x^{p^{m/l}} - x, f) = 1 for every prime l | m.
bool irreducible(const Poly& f, int p, int m) {
    Poly x = {0, 1};
    Poly xq = poly_powmod(x, upow(static_cast<std::uint64_t>(p), m), f, p);
    Poly diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    trim(diff);
    if (!diff.empty()) return false;
    for (int l = 2; l <= m; ++l) {
        if (m % l != 0 || !is_prime(l)) continue;
        Poly xe = poly_powmod(x, upow(static_cast<std::uint64_t>(p), m / l), f, p);
        Poly d = xe;
        d.resize(std::max<size_t>(d.size(), 2), 0);
        d[1] = ((d[1] - 1) % p + p) % p;
        trim(d);
        Poly g = poly_gcd(f, d, p);
        if (g.size() != 1) return false;
    }
    return true;
}

Poly first_irreducible(int p, int m) {
    if (m == 1) return {0, 1}; // x itself; arithmetic is plain mod p
    // Enumerate lower coefficient vectors in base-p counting order.
    std::uint64_t count = upow(static_cast<std::uint64_t>(p), m);
    for (std::uint64_t code = 0; code < count; ++code) {
        Poly f(static_cast<size_t>(m) + 1, 0);
        std::uint64_t c = code;
        for (int i = 0; i < m; ++i) {
            f[static_cast<size_t>(i)] = static_cast<int>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
        }
        f[static_cast<size_t>(m)] = 1;
        if (irreducible(f, p, m)) return f;
    }
    throw Error("internal", "no irreducible polynomial found");
}

} // namespace

FiniteField::FiniteField(int p, int m) : p_(p), m_(m) {
    if (!is_prime(p)) throw DescriptorError("coefficient field characteristic must be prime");
    if (m < 1 || m > 16) throw DescriptorError("coefficient field degree out of range");
    q_ = upow(static_cast<std::uint64_t>(p), m);
    modulus_ = first_irreducible(p, m);
}

FiniteFieldPtr FiniteField::make(int p, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, FiniteFieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, m}];
    if (!slot) slot = FiniteFieldPtr(new FiniteField(p, m));
    return slot;
}

std::vector<int> FiniteField::unpack(Coeff a) const {
    std::vector<int> d(static_cast<size_t>(m_), 0);
    std::uint64_t r = a.rep;
    for (int i = 0; i < m_; ++i) {
        d[static_cast<size_t>(i)] = static_cast<int>(r % static_cast<std::uint64_t>(p_));
        r /= static_cast<std::uint64_t>(p_);
    }
    return d;
}

Coeff FiniteField::pack(const std::vector<int>& digits) const {
    std::uint64_t r = 0;
    for (int i = m_ - 1; i >= 0; --i) {
        int d = i < static_cast<int>(digits.size()) ? digits[static_cast<size_t>(i)] : 0;
        r = r * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(d);
    }
    return Coeff{r};
}

Coeff FiniteField::from_int(long long n) const {
    long long r = n % p_;
    if (r < 0) r += p_;
    return Coeff{static_cast<std::uint64_t>(r)};
}

Coeff FiniteField::from_rep(std::uint64_t rep) const {
    if (rep >= q_) throw ParseError("coefficient encoding out of range");
    return Coeff{rep};
}

Coeff FiniteField::add(Coeff a, Coeff b) const {
    auto da = unpack(a), db = unpack(b);
    for (int i = 0; i < m_; ++i)
        da[static_cast<size_t>(i)] = (da[static_cast<size_t>(i)] + db[static_cast<size_t>(i)]) % p_;
    return pack(da);
}

Coeff FiniteField::neg(Coeff a) const {
    auto d = unpack(a);
    for (int& x : d) x = (p_ - x) % p_;
    return pack(d);
}

Coeff FiniteField::mul(Coeff a, Coeff b) const {
    if (m_ == 1) return Coeff{(a.rep * b.rep) % static_cast<std::uint64_t>(p_)};
    Poly pa = unpack(a), pb = unpack(b);
    trim(pa);
    trim(pb);
    Poly r = poly_mod(poly_mul(pa, pb, p_), modulus_, p_);
    r.resize(static_cast<size_t>(m_), 0);
    return pack(r);
}

Coeff FiniteField::pow(Coeff a, std::uint64_t e) const {
    Coeff r = one(), base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Coeff FiniteField::inv(Coeff a) const {
    if (is_zero(a)) throw Error("division-by-zero", "inverse of zero coefficient");
    return pow(a, q_ - 2);
}

Coeff FiniteField::pth_root(Coeff a) const {
    // Frobenius has order m, so its inverse is its (m-1)-st power.
    return pow(a, upow(static_cast<std::uint64_t>(p_), m_ - 1));
}

bool FiniteField::in_subfield(Coeff a, int d) const {
    if (d == m_) return true;
    if (d < 1 || m_ % d != 0) throw DescriptorError("subfield degree must divide m");
    return pow(a, upow(static_cast<std::uint64_t>(p_), d)) == a;
}

Coeff FiniteField::parse(const std::string& s) const {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw ParseError("bad coefficient literal: '" + s + "'");
        return from_rep(v);
    } catch (const std::logic_error&) {
        throw ParseError("bad coefficient literal: '" + s + "'");
    }
}

} // namespace defectlab
