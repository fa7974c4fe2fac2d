#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galwild/group.hpp"

namespace galwild {

using Exponents = std::vector<int>;

/// Sparse homogeneous polynomial in X_0..X_{nvars-1}. Terms map exponent
/// tuples (summing to the degree) to nonzero coefficients; the zero form has
/// an empty term map and a declared degree.
class HomogeneousForm {
public:
    HomogeneousForm() : f_(nullptr), nvars_(0), degree_(0) {}
    HomogeneousForm(Field f, int nvars, int degree) : f_(f), nvars_(nvars), degree_(degree) {
        if (nvars < 1 || degree < 0) fail(errc::bad_input, "bad form dimensions");
    }

    static HomogeneousForm zero(Field f, int nvars, int degree) { return HomogeneousForm(f, nvars, degree); }

    static HomogeneousForm constant(Field f, int nvars, const Fq& c) {
        HomogeneousForm r(f, nvars, 0);
        if (!c.is_zero()) r.terms_.emplace(Exponents(nvars, 0), c);
        return r;
    }

    static HomogeneousForm monomial(Field f, Exponents exps, const Fq& c) {
        int deg = 0;
        for (int e : exps) {
            if (e < 0) fail(errc::bad_input, "negative exponent");
            deg += e;
        }
        HomogeneousForm r(f, (int)exps.size(), deg);
        if (!c.is_zero()) r.terms_.emplace(std::move(exps), c);
        return r;
    }

    static HomogeneousForm variable(Field f, int nvars, int idx) {
        Exponents e(nvars, 0);
        e[idx] = 1;
        return monomial(f, std::move(e), Fq::one(f));
    }

    Field field() const { return f_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, Fq>& terms() const { return terms_; }

    Fq coeff(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Fq::zero(f_) : it->second;
    }

    void set_coeff(const Exponents& e, const Fq& c) {
        int deg = 0;
        for (int x : e) deg += x;
        if (deg != degree_) fail(errc::not_homogeneous, "term degree differs from form degree");
        if (c.is_zero())
            terms_.erase(e);
        else
            terms_[e] = c;
    }

    friend bool operator==(const HomogeneousForm& a, const HomogeneousForm& b) {
        return a.f_ == b.f_ && a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const HomogeneousForm& a, const HomogeneousForm& b) { return !(a == b); }

    friend HomogeneousForm operator+(const HomogeneousForm& a, const HomogeneousForm& b) {
        check_compat(a, b);
        if (a.degree_ != b.degree_) fail(errc::not_homogeneous, "adding forms of different degrees");
        HomogeneousForm r = a;
        for (const auto& [e, c] : b.terms_) {
            Fq s = r.coeff(e) + c;
            if (s.is_zero())
                r.terms_.erase(e);
            else
                r.terms_[e] = s;
        }
        return r;
    }
    friend HomogeneousForm operator-(const HomogeneousForm& a, const HomogeneousForm& b) {
        return a + b.scale(Fq::one(a.f_).neg());
    }
    friend HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b) {
        check_compat(a, b);
        HomogeneousForm r(a.f_, a.nvars_, a.degree_ + b.degree_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    Fq c = ca * cb;
                    if (!c.is_zero()) r.terms_.emplace(std::move(e), c);
                } else {
                    it->second = it->second + ca * cb;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        return r;
    }

    HomogeneousForm scale(const Fq& c) const {
        HomogeneousForm r(f_, nvars_, degree_);
        if (c.is_zero()) return r;
        for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
        return r;
    }

    HomogeneousForm pow(int e) const {
        HomogeneousForm r = constant(f_, nvars_, Fq::one(f_));
        HomogeneousForm base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            if ((e >>= 1)) base = base * base;
        }
        return r;
    }

    Fq evaluate(const std::vector<Fq>& point) const {
        if ((int)point.size() != nvars_) fail(errc::size_mismatch, "point dimension mismatch");
        Field pf = point.empty() ? f_ : point[0].field();
        Fq total = Fq::zero(pf);
        for (const auto& [e, c] : terms_) {
            Fq t = embed(c, pf);
            for (int i = 0; i < nvars_; ++i)
                for (int j = 0; j < e[i]; ++j) t = t * point[i];
            total = total + t;
        }
        return total;
    }

    HomogeneousForm derivative(int var) const {
        HomogeneousForm r(f_, nvars_, degree_ > 0 ? degree_ - 1 : 0);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Fq nc = c * Fq::from_int(f_, e[var]);
            if (nc.is_zero()) continue;
            Exponents ne = e;
            --ne[var];
            r.terms_.emplace(std::move(ne), nc);
        }
        return r;
    }

    HomogeneousForm embed_into(Field target) const {
        HomogeneousForm r(target, nvars_, degree_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, embed(c, target));
        return r;
    }

    int max_exponent_of(int var) const {
        int m = 0;
        for (const auto& [e, c] : terms_) m = std::max(m, e[var]);
        return m;
    }

    bool involves(int var) const { return max_exponent_of(var) > 0; }

    // Lex-greatest exponent tuple; the form must be nonzero.
    const Exponents& lead_exponents() const {
        if (terms_.empty()) fail(errc::zero_form, "zero form has no leading term");
        return terms_.rbegin()->first;
    }
    const Fq& lead_coeff() const {
        if (terms_.empty()) fail(errc::zero_form, "zero form has no leading term");
        return terms_.rbegin()->second;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            const auto& [e, c] = *it;
            std::string monos;
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                if (!monos.empty()) monos += "*";
                monos += "X" + std::to_string(i);
                if (e[i] > 1) monos += "^" + std::to_string(e[i]);
            }
            std::string cs = c.str();
            bool needs_parens = cs.find('+') != std::string::npos;
            if (monos.empty()) {
                s += needs_parens ? "(" + cs + ")" : cs;
            } else if (c.is_one()) {
                s += monos;
            } else {
                s += (needs_parens ? "(" + cs + ")" : cs) + "*" + monos;
            }
        }
        return s;
    }

private:
    static void check_compat(const HomogeneousForm& a, const HomogeneousForm& b) {
        if (a.f_ != b.f_) fail(errc::field_mismatch, "forms over different fields");
        if (a.nvars_ != b.nvars_) fail(errc::size_mismatch, "forms in different variable counts");
    }

    Field f_;
    int nvars_;
    int degree_;
    std::map<Exponents, Fq> terms_;
};

/// Substitution action: variable X_{j} is replaced by the linear form taken
/// from row j+1 of A. Contravariant: act(A*B, F) == act(B, act(A, F)).
inline HomogeneousForm act(const SquareMatrix& a, const HomogeneousForm& form) {
    if (a.size() != form.nvars()) fail(errc::size_mismatch, "matrix size differs from variable count");
    Field f = form.field();
    int m = form.nvars();
    std::vector<HomogeneousForm> rows;
    rows.reserve(m);
    for (int i = 0; i < m; ++i) {
        HomogeneousForm lin = HomogeneousForm::zero(f, m, 1);
        for (int j = 0; j < m; ++j) {
            if (a.at(i, j).is_zero()) continue;
            lin = lin + HomogeneousForm::variable(f, m, j).scale(a.at(i, j));
        }
        rows.push_back(std::move(lin));
    }
    // power tables per variable, up to the largest exponent used
    std::vector<std::vector<HomogeneousForm>> powers(m);
    for (int i = 0; i < m; ++i) {
        powers[i].push_back(HomogeneousForm::constant(f, m, Fq::one(f)));
        int need = form.max_exponent_of(i);
        for (int e = 1; e <= need; ++e) powers[i].push_back(powers[i][e - 1] * rows[i]);
    }
    HomogeneousForm out = HomogeneousForm::zero(f, m, form.degree());
    for (const auto& [e, c] : form.terms()) {
        HomogeneousForm t = HomogeneousForm::constant(f, m, c);
        for (int i = 0; i < m; ++i)
            if (e[i] > 0) t = t * powers[i][e[i]];
        out = out + t;
    }
    return out;
}

/// Product of the images of X_0 under every group element, a form of degree
/// equal to the group order. Exactly invariant under the group's action.
inline HomogeneousForm orbit_product(const MatrixGroup& g) {
    if (!g.is_ut_star()) fail(errc::not_ut_star, "orbit product needs the distinguished shape");
    Field f = g.field();
    int m = g.size();
    HomogeneousForm out = HomogeneousForm::constant(f, m, Fq::one(f));
    for (const auto& h : g.elements()) {
        HomogeneousForm lin = HomogeneousForm::zero(f, m, 1);
        for (int j = 0; j < m; ++j)
            if (!h.at(0, j).is_zero()) lin = lin + HomogeneousForm::variable(f, m, j).scale(h.at(0, j));
        out = out * lin;
    }
    return out;
}

/// Multiplicity of the zero locus at the projection center [1:0:...:0]:
/// degree minus the largest X_0-exponent. When no term carries X_0 the center
/// is a cone vertex and the projection would have degree 0.
inline int multiplicity_at_center(const HomogeneousForm& form) {
    if (form.is_zero()) fail(errc::zero_form, "multiplicity of the zero form");
    int d0 = form.max_exponent_of(0);
    if (d0 == 0) fail(errc::degenerate_cone, "no term carries the projection variable");
    return form.degree() - d0;
}

/// Substitute the hyperplane L = 0 into F by eliminating the variable with the
/// largest-index nonzero coefficient of L; the result lives in one variable
/// fewer, indices shifted down past the eliminated one.
inline HomogeneousForm restrict_to_hyperplane(const HomogeneousForm& form, const HomogeneousForm& linear) {
    if (form.is_zero()) fail(errc::zero_form, "restriction of the zero form");
    if (linear.is_zero() || linear.degree() != 1) fail(errc::zero_form, "hyperplane form must be nonzero linear");
    if (form.field() != linear.field() || form.nvars() != linear.nvars())
        fail(errc::field_mismatch, "form and hyperplane are incompatible");
    Field f = form.field();
    int m = form.nvars();
    int elim = -1;
    for (int i = m - 1; i >= 0 && elim < 0; --i) {
        Exponents e(m, 0);
        e[i] = 1;
        if (!linear.coeff(e).is_zero()) elim = i;
    }
    Exponents elim_e(m, 0);
    elim_e[elim] = 1;
    Fq lead = linear.coeff(elim_e);
    // X_elim = -(sum of other terms)/lead, as a linear form in the remaining variables
    HomogeneousForm repl = HomogeneousForm::zero(f, m - 1, 1);
    for (int i = 0; i < m; ++i) {
        if (i == elim) continue;
        Exponents e(m, 0);
        e[i] = 1;
        Fq c = linear.coeff(e);
        if (c.is_zero()) continue;
        int new_idx = i < elim ? i : i - 1;
        repl = repl + HomogeneousForm::variable(f, m - 1, new_idx).scale(c.neg() / lead);
    }
    std::vector<HomogeneousForm> repl_powers = {HomogeneousForm::constant(f, m - 1, Fq::one(f))};
    for (int e = 1; e <= form.max_exponent_of(elim); ++e) repl_powers.push_back(repl_powers[e - 1] * repl);

    HomogeneousForm out = HomogeneousForm::zero(f, m - 1, form.degree());
    for (const auto& [e, c] : form.terms()) {
        Exponents ne(m - 1, 0);
        for (int i = 0; i < m; ++i) {
            if (i == elim) continue;
            ne[i < elim ? i : i - 1] = e[i];
        }
        HomogeneousForm t = HomogeneousForm::monomial(f, ne, c);
        out = out + t * repl_powers[e[elim]];
    }
    return out;
}

/// Exact multivariate division; nullopt when the divisor does not divide.
inline std::optional<HomogeneousForm> try_exact_divide(const HomogeneousForm& num, const HomogeneousForm& den) {
    if (den.is_zero()) fail(errc::division_by_zero, "division by the zero form");
    if (num.field() != den.field() || num.nvars() != den.nvars())
        fail(errc::field_mismatch, "incompatible division operands");
    if (num.is_zero()) return HomogeneousForm::zero(num.field(), num.nvars(), 0);
    if (num.degree() < den.degree()) return std::nullopt;
    Field f = num.field();
    int m = num.nvars();
    HomogeneousForm rem = num;
    HomogeneousForm quo = HomogeneousForm::zero(f, m, num.degree() - den.degree());
    const Exponents& dl = den.lead_exponents();
    const Fq dinv = den.lead_coeff().inv();
    while (!rem.is_zero()) {
        const Exponents& rl = rem.lead_exponents();
        Exponents q(m);
        for (int i = 0; i < m; ++i) {
            q[i] = rl[i] - dl[i];
            if (q[i] < 0) return std::nullopt;
        }
        HomogeneousForm t = HomogeneousForm::monomial(f, q, rem.lead_coeff() * dinv);
        quo = quo + t;
        rem = rem - t * den;
    }
    return quo;
}

namespace detail {

inline std::int64_t monomial_count(int nvars, int degree) {
    // C(degree + nvars - 1, nvars - 1)
    std::int64_t r = 1;
    for (int i = 1; i <= nvars - 1; ++i) r = r * (degree + i) / i;
    return r;
}

inline std::vector<Exponents> monomials_of_degree(int nvars, int degree) {
    std::vector<Exponents> out;
    Exponents cur(nvars, 0);
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == nvars - 1) {
            cur[var] = remaining;
            out.push_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = e;
            self(self, var + 1, remaining - e);
        }
    };
    rec(rec, 0, degree);
    return out;  // lex-descending on exponent tuples
}

}  // namespace detail

struct Factorization {
    Fq unit;  // product of the returned factors times this equals the input
    std::vector<std::pair<HomogeneousForm, int>> factors;  // irreducible, with multiplicities
    int level = 1;  // factor coefficients live in F_{q^level}

    std::int64_t total_factor_count() const {
        std::int64_t n = 0;
        for (const auto& [f, mult] : factors) n += mult;
        return n;
    }
};

namespace detail {

// Trial-division factorization over the form's own coefficient field.
// Candidate divisors are enumerated with the coefficient of their
// lex-greatest monomial normalized to 1.
inline Factorization factor_over_field(const HomogeneousForm& input, std::int64_t candidate_cap) {
    Field f = input.field();
    int m = input.nvars();
    Factorization out;
    out.unit = Fq::one(f);
    HomogeneousForm cur = input;
    int deg = 1;
    while (cur.degree() >= 1 && deg * 2 <= cur.degree()) {
        auto monos = monomials_of_degree(m, deg);
        const std::int64_t nm = (std::int64_t)monos.size();
        // candidate count (q^nm - 1)/(q - 1); guard against the cap
        long double est = 0;
        long double power = 1;
        for (std::int64_t i = 0; i < nm; ++i) {
            est += power;
            power *= (long double)f->q;
            if (est > (long double)candidate_cap) break;
        }
        if (est > (long double)candidate_cap)
            fail(errc::search_space_exceeded, "degree-" + std::to_string(deg) + " divisor scan over " +
                                                  f->str() + " exceeds cap " + std::to_string(candidate_cap));
        // one forward pass at this degree removes every degree-deg divisor:
        // divisibility of the running quotient by an irreducible candidate is
        // equivalent to divisibility of the original
        for (std::int64_t lead = 0; lead < nm; ++lead) {
            // coefficients for monomials after `lead` run over all field values
            const std::int64_t free_count = nm - lead - 1;
            std::int64_t combos = 1;
            for (std::int64_t i = 0; i < free_count; ++i) combos *= f->q;
            for (std::int64_t idx = 0; idx < combos; ++idx) {
                HomogeneousForm cand = HomogeneousForm::monomial(f, monos[lead], Fq::one(f));
                std::int64_t v = idx;
                for (std::int64_t i = 0; i < free_count; ++i) {
                    std::int64_t ci = v % f->q;
                    v /= f->q;
                    if (ci != 0) cand.set_coeff(monos[lead + 1 + i], Fq::from_index(f, ci));
                }
                // divide out repeatedly
                bool divided = false;
                while (true) {
                    auto quo = try_exact_divide(cur, cand);
                    if (!quo) break;
                    divided = true;
                    bool merged = false;
                    for (auto& [fac, mult] : out.factors)
                        if (fac == cand) {
                            ++mult;
                            merged = true;
                            break;
                        }
                    if (!merged) out.factors.emplace_back(cand, 1);
                    cur = *quo;
                }
                if (divided && deg * 2 > cur.degree()) break;
            }
            if (deg * 2 > cur.degree()) break;
        }
        ++deg;
    }
    if (cur.degree() >= 1 && !cur.is_zero()) {
        // remaining part is irreducible; normalize its lead coefficient to 1
        Fq lead = cur.lead_coeff();
        out.unit = out.unit * lead;
        out.factors.emplace_back(cur.scale(lead.inv()), 1);
    } else {
        // pure constant remains
        if (cur.degree() == 0 && !cur.is_zero()) out.unit = out.unit * cur.lead_coeff();
        if (cur.is_zero()) fail(errc::zero_form, "factoring the zero form");
    }
    return out;
}

}  // namespace detail

enum class FactorScope { base, absolute };

/// Complete factorization by trial division. Base scope works over the form's
/// own field; absolute scope factors over every extension level up to smax and
/// returns the finest splitting found, recording the level used.
inline Factorization factor(const HomogeneousForm& input, FactorScope scope, int smax = 4,
                            std::int64_t candidate_cap = 10'000'000) {
    if (input.is_zero()) fail(errc::zero_form, "factoring the zero form");
    if (input.degree() == 0) {
        Factorization out;
        out.unit = input.lead_coeff();
        return out;
    }
    Factorization best = detail::factor_over_field(input, candidate_cap);
    best.level = 1;
    if (scope == FactorScope::base) return best;
    Field base = input.field();
    for (int s = 2; s <= smax; ++s) {
        Field ext;
        try {
            ext = FieldSpec::get(base->p, base->k * s);
        } catch (const error& e) {
            if (e.code() == errc::size_bound_exceeded) break;
            throw;
        }
        Factorization fs = detail::factor_over_field(input.embed_into(ext), candidate_cap);
        fs.level = s;
        if (fs.total_factor_count() > best.total_factor_count()) best = fs;
    }
    return best;
}

/// True when the form stays irreducible over every extension level 1..smax.
inline bool irreducible_over_sweep(const HomogeneousForm& input, int smax, std::int64_t candidate_cap,
                                   int* certified_level = nullptr) {
    Field base = input.field();
    int reached = 0;
    for (int s = 1; s <= smax; ++s) {
        Field ext;
        try {
            ext = FieldSpec::get(base->p, base->k * s);
        } catch (const error& e) {
            if (e.code() == errc::size_bound_exceeded) break;
            throw;
        }
        Factorization fs = detail::factor_over_field(input.embed_into(ext), candidate_cap);
        if (fs.total_factor_count() != 1) {
            if (certified_level) *certified_level = s;
            return false;
        }
        reached = s;
    }
    if (certified_level) *certified_level = reached;
    return true;
}

/// All singular points of a plane projective curve over F_{q^s}: common zeros
/// of the form and its three partials. Points are returned with the first
/// nonzero coordinate normalized to 1.
inline std::vector<std::vector<Fq>> singular_points_curve(const HomogeneousForm& form, int s,
                                                          std::int64_t scan_cap = 10'000'000) {
    if (form.nvars() != 3) fail(errc::bad_input, "singular point scan needs a ternary form");
    Field base = form.field();
    Field ext = FieldSpec::get(base->p, base->k * s);
    {
        long double pts = 1;
        for (int i = 0; i < 3; ++i) pts *= (long double)ext->q;
        if (pts > (long double)scan_cap)
            fail(errc::search_space_exceeded, "point scan at level " + std::to_string(s) + " exceeds cap");
    }
    HomogeneousForm fe = form.embed_into(ext);
    std::vector<HomogeneousForm> partials;
    for (int i = 0; i < 3; ++i) partials.push_back(fe.derivative(i));
    std::vector<std::vector<Fq>> out;
    auto test = [&](const std::vector<Fq>& pt) {
        if (!fe.evaluate(pt).is_zero()) return;
        for (const auto& d : partials)
            if (!d.is_zero() && !d.evaluate(pt).is_zero()) return;
        out.push_back(pt);
    };
    Fq one = Fq::one(ext), zero = Fq::zero(ext);
    for (std::int64_t y = 0; y < ext->q; ++y)
        for (std::int64_t z = 0; z < ext->q; ++z)
            test({one, Fq::from_index(ext, y), Fq::from_index(ext, z)});
    for (std::int64_t z = 0; z < ext->q; ++z) test({zero, one, Fq::from_index(ext, z)});
    test({zero, zero, one});
    return out;
}

/// Parse the polynomial text format: +/- separated monomials, '*' products,
/// '^' powers, variables X0..X{n-1}, coefficients in the element format with
/// parentheses for sums (e.g. "(2*t+1)*X0^2").
inline HomogeneousForm parse_polynomial(const std::string& text, Field f, int nvars_hint = -1) {
    struct Term {
        Fq coeff;
        std::map<int, int> exps;
    };
    std::vector<Term> parsed;
    std::size_t pos = 0;
    int max_var = -1;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    };
    auto parse_int = [&]() -> std::int64_t {
        std::int64_t v = 0;
        if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
            fail(errc::syntax_error, "number expected at position " + std::to_string(pos));
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
            v = v * 10 + (text[pos] - '0');
            ++pos;
        }
        return v;
    };
    skip_ws();
    if (pos >= text.size()) fail(errc::syntax_error, "empty polynomial");
    bool neg = false;
    if (text[pos] == '-') {
        neg = true;
        ++pos;
    } else if (text[pos] == '+') {
        ++pos;
    }
    while (true) {
        Term term;
        term.coeff = Fq::one(f);
        bool any_factor = false;
        while (true) {
            skip_ws();
            if (pos >= text.size()) break;
            char ch = text[pos];
            if (ch == 'X') {
                ++pos;
                if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
                    fail(errc::syntax_error, "variable index expected after X");
                int idx = (int)parse_int();
                int e = 1;
                skip_ws();
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    skip_ws();
                    e = (int)parse_int();
                }
                term.exps[idx] += e;
                max_var = std::max(max_var, idx);
                any_factor = true;
            } else if (ch == '(') {
                std::size_t close = text.find(')', pos);
                if (close == std::string::npos) fail(errc::syntax_error, "unbalanced parenthesis");
                Fq c = parse_element(text.substr(pos + 1, close - pos - 1), f);
                pos = close + 1;
                int e = 1;
                skip_ws();
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    skip_ws();
                    e = (int)parse_int();
                }
                term.coeff = term.coeff * c.pow(e);
                any_factor = true;
            } else if (std::isdigit((unsigned char)ch) || ch == 't') {
                // bare coefficient atom: integer, or t with optional power
                if (ch == 't') {
                    ++pos;
                    if (f->k < 2) fail(errc::unknown_variable, "generator t in a prime-field polynomial");
                    int e = 1;
                    skip_ws();
                    if (pos < text.size() && text[pos] == '^') {
                        ++pos;
                        skip_ws();
                        e = (int)parse_int();
                    }
                    term.coeff = term.coeff * Fq::gen(f).pow(e);
                } else {
                    std::int64_t v = parse_int();
                    int e = 1;
                    skip_ws();
                    if (pos < text.size() && text[pos] == '^') {
                        ++pos;
                        skip_ws();
                        e = (int)parse_int();
                    }
                    term.coeff = term.coeff * Fq::from_int(f, v).pow(e);
                }
                any_factor = true;
            } else if (std::isalpha((unsigned char)ch)) {
                fail(errc::unknown_variable, std::string("unknown symbol '") + ch + "'");
            } else {
                fail(errc::syntax_error, std::string("unexpected character '") + ch + "'");
            }
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                continue;
            }
            break;
        }
        if (!any_factor) fail(errc::syntax_error, "empty term");
        if (neg) term.coeff = term.coeff.neg();
        parsed.push_back(std::move(term));
        skip_ws();
        if (pos >= text.size()) break;
        if (text[pos] == '+') {
            neg = false;
            ++pos;
        } else if (text[pos] == '-') {
            neg = true;
            ++pos;
        } else {
            fail(errc::syntax_error, std::string("unexpected character '") + text[pos] + "'");
        }
    }
    int nvars = nvars_hint > 0 ? nvars_hint : max_var + 1;
    if (nvars < 1) nvars = 1;
    if (max_var >= nvars)
        fail(errc::unknown_variable, "variable X" + std::to_string(max_var) + " out of range");
    int degree = -1;
    for (const auto& t : parsed) {
        int d = 0;
        for (const auto& [v, e] : t.exps) d += e;
        if (t.coeff.is_zero()) continue;
        if (degree < 0) degree = d;
        if (d != degree) fail(errc::not_homogeneous, "terms of different degrees");
    }
    if (degree < 0) degree = 0;  // all terms cancelled or literal zero
    HomogeneousForm out = HomogeneousForm::zero(f, nvars, degree);
    for (const auto& t : parsed) {
        if (t.coeff.is_zero()) continue;
        Exponents e(nvars, 0);
        for (const auto& [v, ex] : t.exps) e[v] = ex;
        out.set_coeff(e, out.coeff(e) + t.coeff);
    }
    return out;
}

}  // namespace galwild
