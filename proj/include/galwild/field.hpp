#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "galwild/errors.hpp"

namespace galwild {

namespace detail {

// Polynomials over F_p, coefficient vectors low degree first, entries in [0,p).
using PPoly = std::vector<std::int64_t>;

inline void ppoly_trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PPoly ppoly_mul(const PPoly& a, const PPoly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    ppoly_trim(r);
    return r;
}

// Remainder of a by monic b.
inline PPoly ppoly_rem(PPoly a, const PPoly& b, std::int64_t p) {
    ppoly_trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        std::int64_t c = a.back();
        std::size_t shift = a.size() - 1 - db;
        if (c != 0) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::int64_t& x = a[shift + j];
                x = ((x - c * b[j]) % p + p) % p;
            }
        }
        a.pop_back();
        ppoly_trim(a);
        if (a.size() <= db) break;
    }
    ppoly_trim(a);
    return a;
}

inline std::int64_t ppoly_eval(const PPoly& a, std::int64_t x, std::int64_t p) {
    std::int64_t r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return r;
}

inline bool ppoly_is_irreducible(const PPoly& f, std::int64_t p) {
    const std::size_t k = f.size() - 1;
    if (k == 0) return false;
    if (k == 1) return true;
    if (f[0] == 0) return false;  // divisible by t
    for (std::int64_t x = 0; x < p; ++x)
        if (ppoly_eval(f, x, p) == 0) return false;
    if (k <= 3) return true;
    // trial division by monic polynomials of degree 2..k/2
    for (std::size_t d = 2; 2 * d <= k; ++d) {
        std::int64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) {
            count *= p;
            if (count > (std::int64_t)1 << 40) fail(errc::search_space_exceeded, "modulus check too large");
        }
        for (std::int64_t idx = 0; idx < count; ++idx) {
            PPoly g(d + 1, 0);
            std::int64_t v = idx;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = v % p;
                v /= p;
            }
            g[d] = 1;
            if (ppoly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

inline bool is_prime_int(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

class FieldSpec;
using Field = const FieldSpec*;

/// An explicit finite field F_{p^k}. Instances are interned: equal (p,k)
/// always yields the same pointer, so Field equality is pointer equality.
/// The modulus is the canonical one: the lexicographically smallest monic
/// irreducible of degree k over F_p, coefficients read low degree first.
class FieldSpec {
public:
    std::int64_t p;
    int k;
    std::int64_t q;                       // p^k
    std::vector<std::int64_t> modulus;    // size k+1 when k >= 2, monic; empty when k == 1

    static constexpr std::int64_t default_size_bound = std::int64_t{1} << 20;

    static Field get(std::int64_t p, int k, std::int64_t size_bound = default_size_bound) {
        if (p > size_bound) fail(errc::size_bound_exceeded, "p exceeds size bound");
        if (!detail::is_prime_int(p)) fail(errc::not_prime, "p = " + std::to_string(p) + " is not prime");
        if (k < 1) fail(errc::bad_input, "extension degree must be >= 1");
        std::int64_t q = 1;
        for (int i = 0; i < k; ++i) {
            q *= p;
            if (q > size_bound)
                fail(errc::size_bound_exceeded,
                     "p^k = " + std::to_string(p) + "^" + std::to_string(k) + " exceeds size bound");
        }
        static std::mutex mu;
        static std::map<std::pair<std::int64_t, int>, std::unique_ptr<FieldSpec>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, k);
        auto it = registry.find(key);
        if (it != registry.end()) return it->second.get();
        auto spec = std::unique_ptr<FieldSpec>(new FieldSpec(p, k, q));
        Field result = spec.get();
        registry.emplace(key, std::move(spec));
        return result;
    }

    std::string str() const { return "p=" + std::to_string(p) + ",k=" + std::to_string(k); }

    static Field parse(const std::string& s) {
        std::int64_t pp = -1, kk = -1;
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t eq = s.find('=', pos);
            std::size_t comma = s.find(',', pos);
            if (eq == std::string::npos) fail(errc::syntax_error, "bad field string '" + s + "'");
            std::string name = s.substr(pos, eq - pos);
            std::string val = s.substr(eq + 1, (comma == std::string::npos ? s.size() : comma) - eq - 1);
            try {
                if (name == "p") pp = std::stoll(val);
                else if (name == "k") kk = std::stoll(val);
                else fail(errc::syntax_error, "unknown field key '" + name + "'");
            } catch (const std::logic_error&) {
                fail(errc::syntax_error, "bad field string '" + s + "'");
            }
            pos = comma == std::string::npos ? s.size() : comma + 1;
        }
        if (pp < 0) fail(errc::syntax_error, "field string missing p");
        return get(pp, kk < 0 ? 1 : static_cast<int>(kk));
    }

    bool prime_field() const { return k == 1; }

    // Coefficients of the i-th element in the canonical order (lexicographic on
    // coefficient sequences, first coefficient most significant).
    std::vector<std::int64_t> coeffs_of_index(std::int64_t idx) const {
        std::vector<std::int64_t> c(k, 0);
        std::int64_t w = q;
        for (int j = 0; j < k; ++j) {
            w /= p;
            c[j] = idx / w;
            idx %= w;
        }
        return c;
    }

private:
    FieldSpec(std::int64_t p_, int k_, std::int64_t q_) : p(p_), k(k_), q(q_) {
        if (k >= 2) {
            for (std::int64_t idx = 0; idx < q; ++idx) {
                auto c = coeffs_of_index(idx);
                detail::PPoly f(c.begin(), c.end());
                f.push_back(1);
                if (detail::ppoly_is_irreducible(f, p)) {
                    modulus = f;
                    break;
                }
            }
            if (modulus.empty()) fail(errc::bad_input, "no irreducible modulus found");
        }
    }
};

/// Element of an explicit finite field, stored as the coefficient vector of
/// its representative polynomial (low degree first, length k).
class Fq {
public:
    Fq() : f_(nullptr) {}
    explicit Fq(Field f) : f_(f), c_(f->k, 0) {}
    Fq(Field f, std::vector<std::int64_t> coeffs) : f_(f), c_(std::move(coeffs)) {
        if ((int)c_.size() != f->k) fail(errc::bad_input, "coefficient count mismatch");
        for (auto& x : c_) x = ((x % f->p) + f->p) % f->p;
    }

    static Fq zero(Field f) { return Fq(f); }
    static Fq one(Field f) { return from_int(f, 1); }
    static Fq from_int(Field f, std::int64_t v) {
        Fq r(f);
        r.c_[0] = ((v % f->p) + f->p) % f->p;
        return r;
    }
    static Fq gen(Field f) {
        if (f->k < 2) fail(errc::bad_input, "prime field has no generator t");
        Fq r(f);
        r.c_[1] = 1;
        return r;
    }
    static Fq from_index(Field f, std::int64_t idx) { return Fq(f, f->coeffs_of_index(idx)); }

    Field field() const { return f_; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }

    std::int64_t index() const {
        std::int64_t idx = 0;
        for (auto x : c_) idx = idx * f_->p + x;
        return idx;
    }

    bool is_zero() const {
        for (auto x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_one() const {
        if (c_[0] != 1) return false;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    friend bool operator==(const Fq& a, const Fq& b) { return a.f_ == b.f_ && a.c_ == b.c_; }
    friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

    // Canonical total order: lexicographic on coefficient sequences.
    static bool lex_less(const Fq& a, const Fq& b) {
        check_same(a, b);
        return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
    }

    friend Fq operator+(const Fq& a, const Fq& b) {
        check_same(a, b);
        Fq r(a.f_);
        for (int i = 0; i < a.f_->k; ++i) r.c_[i] = (a.c_[i] + b.c_[i]) % a.f_->p;
        return r;
    }
    friend Fq operator-(const Fq& a, const Fq& b) {
        check_same(a, b);
        Fq r(a.f_);
        for (int i = 0; i < a.f_->k; ++i) r.c_[i] = ((a.c_[i] - b.c_[i]) % a.f_->p + a.f_->p) % a.f_->p;
        return r;
    }
    Fq neg() const {
        Fq r(f_);
        for (int i = 0; i < f_->k; ++i) r.c_[i] = (f_->p - c_[i]) % f_->p;
        return r;
    }
    friend Fq operator*(const Fq& a, const Fq& b) {
        check_same(a, b);
        const std::int64_t p = a.f_->p;
        const int k = a.f_->k;
        if (k == 1) {
            Fq r(a.f_);
            r.c_[0] = (a.c_[0] * b.c_[0]) % p;
            return r;
        }
        std::vector<std::int64_t> prod(2 * k - 1, 0);
        for (int i = 0; i < k; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a.c_[i] * b.c_[j]) % p;
        }
        const auto& mod = a.f_->modulus;
        for (int i = 2 * k - 2; i >= k; --i) {
            std::int64_t c = prod[i];
            if (c == 0) continue;
            for (int j = 0; j < k; ++j) {
                std::int64_t& x = prod[i - k + j];
                x = ((x - c * mod[j]) % p + p) % p;
            }
            prod[i] = 0;
        }
        Fq r(a.f_);
        for (int i = 0; i < k; ++i) r.c_[i] = prod[i];
        return r;
    }

    Fq inv() const {
        if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
        if (f_->k == 1) return pow(f_->p - 2);
        // extended Euclid in F_p[t] against the modulus
        const std::int64_t p = f_->p;
        detail::PPoly r0(f_->modulus), r1(c_.begin(), c_.end());
        detail::ppoly_trim(r1);
        detail::PPoly s0 = {}, s1 = {1};
        while (!r1.empty()) {
            detail::PPoly quo, rem;
            poly_divmod(r0, r1, p, quo, rem);
            detail::PPoly s2 = sub_mul(s0, quo, s1, p);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is gcd (a unit since the modulus is irreducible); scale s0 by its inverse
        std::int64_t u = int_inv(r0.empty() ? 1 : r0.back(), p);
        Fq out(f_);
        for (std::size_t i = 0; i < s0.size() && i < (std::size_t)f_->k; ++i) out.c_[i] = (s0[i] * u) % p;
        return out;
    }

    friend Fq operator/(const Fq& a, const Fq& b) {
        check_same(a, b);
        if (b.is_zero()) fail(errc::division_by_zero, "division by zero");
        return a * b.inv();
    }

    Fq pow(std::int64_t e) const {
        if (e < 0) return inv().pow(-e);
        Fq base = *this, r = Fq::one(f_);
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // Multiplicative order; element must be nonzero.
    std::int64_t mult_order() const {
        if (is_zero()) fail(errc::division_by_zero, "order of zero");
        Fq x = *this;
        std::int64_t n = 1;
        while (!x.is_one()) {
            x = x * *this;
            ++n;
            if (n > f_->q) fail(errc::bad_input, "order search overran field size");
        }
        return n;
    }

    std::string str() const {
        if (f_->k == 1) return std::to_string(c_[0]);
        std::string s;
        for (int j = f_->k - 1; j >= 0; --j) {
            if (c_[j] == 0) continue;
            if (!s.empty()) s += "+";
            if (j == 0) {
                s += std::to_string(c_[j]);
            } else {
                if (c_[j] != 1) s += std::to_string(c_[j]) + "*";
                s += (j == 1) ? "t" : "t^" + std::to_string(j);
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    static void check_same(const Fq& a, const Fq& b) {
        if (a.f_ != b.f_) fail(errc::field_mismatch, "elements of different fields");
    }
    static std::int64_t int_inv(std::int64_t a, std::int64_t p) {
        a %= p;
        std::int64_t r = 1, e = p - 2;
        std::int64_t base = a;
        while (e > 0) {
            if (e & 1) r = (r * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        return r;
    }
    static void poly_divmod(detail::PPoly a, const detail::PPoly& b, std::int64_t p, detail::PPoly& quo,
                            detail::PPoly& rem) {
        detail::ppoly_trim(a);
        quo.clear();
        if (a.size() >= b.size()) quo.assign(a.size() - b.size() + 1, 0);
        const std::int64_t lead_inv = int_inv(b.back(), p);
        while (a.size() >= b.size()) {
            std::size_t shift = a.size() - b.size();
            std::int64_t c = (a.back() * lead_inv) % p;
            quo[shift] = c;
            if (c != 0)
                for (std::size_t j = 0; j < b.size(); ++j) {
                    std::int64_t& x = a[shift + j];
                    x = ((x - c * b[j]) % p + p) % p;
                }
            a.pop_back();
            detail::ppoly_trim(a);
        }
        rem = a;
    }

    static detail::PPoly sub_mul(const detail::PPoly& a, const detail::PPoly& q, const detail::PPoly& b,
                                 std::int64_t p) {
        detail::PPoly qb = detail::ppoly_mul(q, b, p);
        detail::PPoly r(std::max(a.size(), qb.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < qb.size(); ++i) r[i] = ((r[i] - qb[i]) % p + p) % p;
        detail::ppoly_trim(r);
        return r;
    }

    Field f_;
    std::vector<std::int64_t> c_;
};

inline Fq make_scalar(Field f, std::int64_t v) { return Fq::from_int(f, v); }

/// Deterministic field-to-field embedding. The generator of the source is sent
/// to the canonical root of the source modulus in the target (smallest in the
/// element order); the choice is cached per field pair.
inline Fq embed(const Fq& x, Field target) {
    Field src = x.field();
    if (src == target) return x;
    if (src->p != target->p) fail(errc::no_embedding, "different characteristics");
    if (target->k % src->k != 0) fail(errc::no_embedding, "source degree does not divide target degree");
    if (src->k == 1) {
        Fq r(target);
        return Fq::from_int(target, x.coeffs()[0]);
    }
    static std::mutex mu;
    static std::map<std::pair<Field, Field>, Fq> cache;
    Fq root;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({src, target});
        if (it != cache.end()) {
            root = it->second;
        } else {
            bool found = false;
            for (std::int64_t idx = 0; idx < target->q && !found; ++idx) {
                Fq r = Fq::from_index(target, idx);
                // evaluate the source modulus at r
                Fq acc = Fq::zero(target);
                for (std::size_t j = src->modulus.size(); j-- > 0;) {
                    acc = acc * r + Fq::from_int(target, src->modulus[j]);
                }
                if (acc.is_zero()) {
                    root = r;
                    found = true;
                }
            }
            if (!found) fail(errc::no_embedding, "no root of source modulus in target");
            cache.emplace(std::make_pair(src, target), root);
        }
    }
    Fq acc = Fq::zero(target);
    for (std::size_t j = x.coeffs().size(); j-- > 0;) {
        acc = acc * root + Fq::from_int(target, x.coeffs()[j]);
    }
    return acc;
}

/// Primitive l-th root of unity, the smallest in the canonical element order.
/// For l = 1 returns 1. Throws NoSuchRoot when l does not divide q - 1.
inline Fq primitive_root_of_unity(Field f, std::int64_t l) {
    if (l < 1) fail(errc::bad_input, "l must be positive");
    if (l == 1) return Fq::one(f);
    if ((f->q - 1) % l != 0)
        fail(errc::no_such_root, std::to_string(l) + " does not divide q-1 = " + std::to_string(f->q - 1));
    std::vector<std::int64_t> prime_divs;
    std::int64_t ll = l;
    for (std::int64_t d = 2; d * d <= ll; ++d)
        if (ll % d == 0) {
            prime_divs.push_back(d);
            while (ll % d == 0) ll /= d;
        }
    if (ll > 1) prime_divs.push_back(ll);
    for (std::int64_t idx = 1; idx < f->q; ++idx) {
        Fq e = Fq::from_index(f, idx);
        if (!e.pow(l).is_one()) continue;
        bool primitive = true;
        for (auto r : prime_divs)
            if (e.pow(l / r).is_one()) {
                primitive = false;
                break;
            }
        if (primitive) return e;
    }
    fail(errc::no_such_root, "no primitive root found");  // unreachable for valid l
}

/// Unique p-th root in F_{p^k}: the inverse of the Frobenius, x^(p^(k-1)).
inline Fq pth_root(const Fq& x) {
    Field f = x.field();
    std::int64_t e = 1;
    for (int i = 0; i < f->k - 1; ++i) e *= f->p;
    return x.pow(e);
}

struct RootInSweep {
    Fq root;
    int level;  // root lives in F_{q^level}
};

/// Search y with y^l = x across the extension sweep F_{q^s}, s = 1..smax.
/// The smallest root (element order) at the smallest level wins.
inline RootInSweep nth_root_in_sweep(const Fq& x, std::int64_t l, int smax,
                                     std::int64_t scan_cap = 10'000'000) {
    Field base = x.field();
    for (int s = 1; s <= smax; ++s) {
        Field ext;
        try {
            ext = FieldSpec::get(base->p, base->k * s);
        } catch (const error& e) {
            if (e.code() == errc::size_bound_exceeded) break;
            throw;
        }
        if (ext->q > scan_cap)
            fail(errc::search_space_exceeded,
                 "root scan at level " + std::to_string(s) + " exceeds cap");
        Fq target = embed(x, ext);
        for (std::int64_t idx = 0; idx < ext->q; ++idx) {
            Fq y = Fq::from_index(ext, idx);
            if (y.pow(l) == target) return {y, s};
        }
    }
    fail(errc::root_outside_sweep,
         "no " + std::to_string(l) + "-th root within " + std::to_string(smax) + " extension levels");
}

/// Parse a field element: integers for prime fields, polynomial expressions in
/// the generator t for extensions, e.g. "2*t+1".
inline Fq parse_element(const std::string& text, Field f) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    };
    auto parse_term = [&]() -> Fq {
        Fq coeff = Fq::one(f);
        bool any = false;
        while (true) {
            skip_ws();
            if (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
                std::int64_t v = 0;
                while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
                    v = v * 10 + (text[pos] - '0');
                    ++pos;
                }
                coeff = coeff * Fq::from_int(f, v);
                any = true;
            } else if (pos < text.size() && text[pos] == 't') {
                ++pos;
                if (f->k < 2) fail(errc::unknown_variable, "generator t in a prime field element");
                std::int64_t e = 1;
                skip_ws();
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    skip_ws();
                    if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
                        fail(errc::syntax_error, "exponent expected after ^");
                    e = 0;
                    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
                        e = e * 10 + (text[pos] - '0');
                        ++pos;
                    }
                }
                coeff = coeff * Fq::gen(f).pow(e);
                any = true;
            } else {
                fail(errc::syntax_error, "unexpected character in element '" + text + "'");
            }
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                continue;
            }
            break;
        }
        if (!any) fail(errc::syntax_error, "empty element term");
        return coeff;
    };
    skip_ws();
    if (pos >= text.size()) fail(errc::syntax_error, "empty element");
    Fq total = Fq::zero(f);
    bool neg = false;
    if (text[pos] == '-') {
        neg = true;
        ++pos;
    } else if (text[pos] == '+') {
        ++pos;
    }
    while (true) {
        Fq t = parse_term();
        total = neg ? total - t : total + t;
        skip_ws();
        if (pos >= text.size()) break;
        if (text[pos] == '+') {
            neg = false;
            ++pos;
        } else if (text[pos] == '-') {
            neg = true;
            ++pos;
        } else {
            fail(errc::syntax_error, "unexpected character in element '" + text + "'");
        }
    }
    return total;
}

}  // namespace galwild
