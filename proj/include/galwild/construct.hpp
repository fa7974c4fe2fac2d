#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "galwild/forms.hpp"
#include "galwild/lift.hpp"

namespace galwild {

/// The standard group of shape (Z/p)^u x| Z/l inside the distinguished
/// first-row matrices over F_{p^u}: translations I + v E_{12} for v in the
/// field, together with diag(e_l, 1, ..., 1). Requires l | p^u - 1.
inline MatrixGroup standard_group(std::int64_t p, int u, std::int64_t l, int n) {
    if (u < 1 || n < 1 || l < 1) fail(errc::bad_input, "need u >= 1, l >= 1, n >= 1");
    Field f = FieldSpec::get(p, u);
    if (l > 1 && (f->q - 1) % l != 0)
        fail(errc::divisibility_fail,
             std::to_string(l) + " does not divide p^u - 1 = " + std::to_string(f->q - 1));
    const int m = n + 2;
    std::vector<SquareMatrix> gens;
    for (int j = 0; j < u; ++j) {
        // translations by an F_p-basis of the field: 1, t, .., t^{u-1}
        SquareMatrix s = SquareMatrix::identity(f, m);
        s.at(0, 1) = (j == 0) ? Fq::one(f) : Fq::gen(f).pow(j);
        gens.push_back(s);
    }
    if (l > 1) {
        SquareMatrix d = SquareMatrix::identity(f, m);
        d.at(0, 0) = primitive_root_of_unity(f, l);
        gens.push_back(d);
    }
    MatrixGroup g = MatrixGroup::closure(gens);
    std::int64_t expected = l;
    for (int i = 0; i < u; ++i) expected *= p;
    if (g.order() != expected) fail(errc::bad_input, "standard group closure has unexpected order");
    return g;
}

inline MatrixGroup conjugate_group(const MatrixGroup& g, const SquareMatrix& w) {
    SquareMatrix winv = w.inverse();
    std::vector<SquareMatrix> elems, gens;
    for (const auto& e : g.elements()) elems.push_back(w * e * winv);
    for (const auto& e : g.generators()) gens.push_back(w * e * winv);
    return MatrixGroup::from_elements(std::move(elems), std::move(gens));
}

namespace detail {

// Certificate of absolute irreducibility for the deterministic form supply:
// the form is linear in some variable with coprime monomial cofactors,
// F = M1 * X_j + M2 where neither monomial involves X_j and gcd(M1, M2) = 1.
// Any factorization over any extension must then put X_j in one factor and
// divide both cofactors by the other, which forces a unit.
inline bool linear_variable_certificate(const HomogeneousForm& form) {
    if (form.degree() < 2 || form.terms().size() != 2) return false;
    for (int j = 0; j < form.nvars(); ++j) {
        if (form.max_exponent_of(j) != 1) continue;
        const Exponents* with = nullptr;
        const Exponents* without = nullptr;
        for (const auto& [e, c] : form.terms()) {
            if (e[j] == 1)
                with = &e;
            else if (e[j] == 0)
                without = &e;
        }
        if (!with || !without) continue;
        bool coprime = true;
        for (int i = 0; i < form.nvars(); ++i) {
            int a = (*with)[i] - (i == j ? 1 : 0);
            int b = (*without)[i];
            if (a > 0 && b > 0) coprime = false;
        }
        if (coprime) return true;
    }
    return false;
}

// Deterministic supply of forms of the requested degree in the variables
// X_1..X_{n+1} (X_0-free), absolutely irreducible by construction.
inline HomogeneousForm irreducible_supply(Field f, int nvars, int degree) {
    if (degree == 0) return HomogeneousForm::constant(f, nvars, Fq::one(f));
    if (degree == 1) return HomogeneousForm::variable(f, nvars, 1);
    if (nvars < 4) fail(errc::bad_input, "supply needs at least three free variables");
    Exponents e1(nvars, 0), e2(nvars, 0);
    e1[1] = degree - 1;
    e1[2] = 1;
    e2[3] = degree;
    HomogeneousForm out = HomogeneousForm::monomial(f, e1, Fq::one(f)) +
                          HomogeneousForm::monomial(f, e2, Fq::one(f));
    return out;
}

inline bool x0_free(const HomogeneousForm& form) { return form.max_exponent_of(0) == 0; }

}  // namespace detail

struct SynthesisRequest {
    int m = 0;                 // target multiplicity
    std::uint64_t seed = 0;    // recorded; drives fallback sampling only
    int smax = 4;              // extension sweep bound for scalar searches
    std::int64_t factor_cap = 10'000'000;
    bool oracle_cross_check = true;  // attempt trial-division cross-checks within the cap
    std::optional<HomogeneousForm> a_form;                    // override, X_0-free, degree m
    std::optional<HomogeneousForm> b_form;                    // override for the n >= 2 branch
    std::optional<std::vector<std::pair<Fq, Fq>>> points;     // override for the n == 1 branches
};

struct SynthesisResult {
    HomogeneousForm form;           // invariant irreducible form of degree p^u*l + m
    MatrixGroup group;              // normalized group fixing the form exactly
    SquareMatrix change_of_basis;   // W with group = W * input * W^{-1}
    HomogeneousForm orbit;          // product of the X_0-orbit under the group
    HomogeneousForm a_form;
    std::optional<HomogeneousForm> b_form;          // n >= 2 branch
    std::vector<std::pair<Fq, Fq>> points;          // n == 1 branches
    GroupStructure structure;
    int branch = 0;                 // 0: n >= 2; 1: n == 1, l >= 2; 2: n == 1, l == 1
    int restart_level = 1;          // 2 when the point scan moved to F_{q^2}
    std::string irreducibility;     // certificate description
    int verified_multiplicity = 0;
};

namespace detail {

struct NormalizedGroup {
    MatrixGroup group;
    SquareMatrix change_of_basis;
    GroupStructure structure;
};

// Conjugate the input group into the distinguished shape: unitriangularize the
// p-part, move the common shift-image line to the first axis, then diagonalize
// a complement generator so it becomes diag(e_l, 1, ..., 1).
inline NormalizedGroup normalize_for_synthesis(const MatrixGroup& input) {
    auto cond = check_conditions(input);
    if (!cond.cond_i || !cond.cond_ii)
        fail(errc::conditions_fail, std::string("realization conditions fail: ") +
                                        (cond.cond_i ? "" : "(i) no rank-one shift ") +
                                        (cond.cond_ii ? "" : "(ii) shift images differ"));
    GroupStructure st = recognize_structure(input);

    Field f = input.field();
    const int m = input.size();
    MatrixGroup syl = sylow_p(input);
    SquareMatrix q = simultaneous_unitriangularize(syl.elements());
    MatrixGroup g1 = conjugate_group(input, q);

    // common image line of the shifts
    LinearSubspace line;
    bool have_line = false;
    for (const auto& e : g1.elements()) {
        if (e.is_identity()) continue;
        line = image_of_shift(e);
        have_line = true;
        break;
    }
    SquareMatrix w = q;
    MatrixGroup g2 = g1;
    if (have_line) {
        if (line.dim() != 1) fail(errc::conditions_fail, "common shift image is not a line");
        SquareMatrix mv = basis_change_to_e1(line.basis()[0], f);
        w = mv * q;
        g2 = conjugate_group(g1, mv);
    }
    for (const auto& e : g2.elements())
        if (!e.is_ut_star()) fail(errc::conditions_fail, "normalization left the distinguished shape");

    MatrixGroup g3 = g2;
    if (st.l > 1) {
        GroupStructure st2 = recognize_structure(g2);
        SquareMatrix c = normalizer_to_diagonal(st2.complement_generator);
        g3 = conjugate_group(g2, c);
        w = c * w;
    }
    NormalizedGroup out{g3, w, recognize_structure(g3)};
    auto cond3 = check_conditions(out.group);
    if (!cond3.cond_i || !cond3.cond_ii) fail(errc::conditions_fail, "conditions lost in normalization");
    return out;
}

}  // namespace detail

/// Build an irreducible invariant hypersurface of degree p^u*l + m realizing
/// the input group as deck transformations of the projection from
/// [1:0:...:0]. The group must satisfy both realization conditions.
inline SynthesisResult synthesize(const MatrixGroup& input, const SynthesisRequest& req) {
    if (req.m < 0) fail(errc::bad_input, "multiplicity must be >= 0");
    detail::NormalizedGroup norm = detail::normalize_for_synthesis(input);
    Field f = norm.group.field();
    const int mdim = norm.group.size();
    const int n = mdim - 2;
    const std::int64_t p = f->p;
    const std::int64_t l = norm.structure.l;
    const std::int64_t bigN = norm.group.order();
    const int target_degree = (int)bigN + req.m;

    SynthesisResult out;
    out.group = norm.group;
    out.change_of_basis = norm.change_of_basis;
    out.structure = norm.structure;
    out.orbit = orbit_product(norm.group);
    if (out.orbit.degree() != (int)bigN) fail(errc::bad_input, "orbit product degree mismatch");
    for (const auto& h : norm.group.elements())
        if (act(h, out.orbit) != out.orbit) fail(errc::not_invariant, "orbit product is not invariant");

    if (n >= 2) {
        out.branch = 0;
        HomogeneousForm a = req.a_form ? *req.a_form : detail::irreducible_supply(f, mdim, req.m);
        HomogeneousForm b = req.b_form ? *req.b_form : detail::irreducible_supply(f, mdim, target_degree);
        if (!detail::x0_free(a) || !detail::x0_free(b)) fail(errc::bad_input, "branch forms must avoid X0");
        if (a.degree() != req.m || b.degree() != target_degree)
            fail(errc::bad_input, "branch form degrees are wrong");
        if (a.is_zero() || b.is_zero()) fail(errc::bad_input, "branch forms must be nonzero");
        // the tail form carries the irreducibility of the whole
        bool b_cert = detail::linear_variable_certificate(b);
        if (!b_cert) {
            if (b.degree() == 1) {
                b_cert = true;
            } else {
                try {
                    b_cert = irreducible_over_sweep(b, req.smax, req.factor_cap);
                } catch (const error& e) {
                    if (e.code() != errc::search_space_exceeded) throw;
                    fail(errc::irreducible_search_fail,
                         "override tail form has no verifiable irreducibility certificate");
                }
            }
            if (!b_cert) fail(errc::irreducible_search_fail, "override tail form is reducible");
        }
        out.a_form = a;
        out.b_form = b;
        out.form = a * out.orbit + b;
        out.irreducibility = "constructive-absolute";
    } else {
        // n == 1: the coefficient of X_0^l in the orbit product steers the
        // choice of points on the line
        HomogeneousForm d_form = HomogeneousForm::zero(f, mdim, (int)(bigN - l));
        for (const auto& [e, c] : out.orbit.terms())
            if (e[0] == (int)l) {
                Exponents rest = e;
                rest[0] = 0;
                d_form.set_coeff(rest, c);
            }
        if (d_form.is_zero()) fail(errc::bad_input, "orbit product lacks the expected lowest X0 term");

        auto eval_pair = [&](const HomogeneousForm& form, const std::pair<Fq, Fq>& pt) {
            std::vector<Fq> full(mdim, Fq::zero(pt.first.field()));
            full[1] = pt.first;
            full[2] = pt.second;
            return form.evaluate(full);
        };

        // scan F_q^2 in index order for usable points; restart over F_{q^2}
        // when the base field is too small
        std::vector<std::pair<Fq, Fq>> pts;
        Field pf = f;
        HomogeneousForm d_local = d_form;
        int restart = 1;
        const int needed = (l >= 2) ? 2 : 1;
        for (int attempt = 0; attempt < 2 && (int)pts.size() < needed; ++attempt) {
            if (attempt == 1) {
                pf = FieldSpec::get(f->p, f->k * 2);
                d_local = d_form.embed_into(pf);
                restart = 2;
                pts.clear();
            }
            if (req.points && attempt == 0) {
                pts = *req.points;
                break;
            }
            for (std::int64_t ia = 0; ia < pf->q && (int)pts.size() < needed; ++ia)
                for (std::int64_t ib = 0; ib < pf->q && (int)pts.size() < needed; ++ib) {
                    if (ia == 0 && ib == 0) continue;
                    std::pair<Fq, Fq> cand{Fq::from_index(pf, ia), Fq::from_index(pf, ib)};
                    if (eval_pair(d_local, cand).is_zero()) continue;
                    if (!pts.empty()) {
                        Fq det = pts[0].first * cand.second - cand.first * pts[0].second;
                        if (det.is_zero()) continue;
                    }
                    pts.push_back(cand);
                }
        }
        if ((int)pts.size() < needed)
            fail(errc::irreducible_search_fail, "no usable points on the line within the field restart");
        out.points = pts;
        out.restart_level = restart;
        Field wf = pts[0].first.field();
        HomogeneousForm orbit_w = (wf == f) ? out.orbit : out.orbit.embed_into(wf);
        HomogeneousForm d_w = (wf == f) ? d_form : d_form.embed_into(wf);

        // degree-m coefficient form nonvanishing at the chosen points
        HomogeneousForm a = HomogeneousForm::constant(wf, mdim, Fq::one(wf));
        if (req.a_form) {
            a = req.a_form->field() == wf ? *req.a_form : req.a_form->embed_into(wf);
        } else if (req.m >= 1) {
            bool found = false;
            for (std::int64_t ic = 0; ic < wf->q && !found; ++ic)
                for (std::int64_t id = 0; id < wf->q && !found; ++id) {
                    if (ic == 0 && id == 0) continue;
                    Fq c = Fq::from_index(wf, ic), d = Fq::from_index(wf, id);
                    bool ok = true;
                    for (const auto& pt : pts)
                        if ((c * pt.first + d * pt.second).is_zero()) ok = false;
                    if (!ok) continue;
                    HomogeneousForm lin = HomogeneousForm::variable(wf, mdim, 1).scale(c) +
                                          HomogeneousForm::variable(wf, mdim, 2).scale(d);
                    a = lin.pow(req.m);
                    found = true;
                }
            if (!found) fail(errc::irreducible_search_fail, "no coefficient form avoids the chosen points");
        }
        if (!detail::x0_free(a) || a.degree() != req.m || a.is_zero())
            fail(errc::bad_input, "coefficient form must be X0-free of the target multiplicity");
        for (const auto& pt : pts) {
            if (eval_pair(a, pt).is_zero()) fail(errc::bad_input, "coefficient form vanishes at a chosen point");
            if (eval_pair(d_w, pt).is_zero()) fail(errc::bad_input, "steering form vanishes at a chosen point");
        }
        out.a_form = a;

        HomogeneousForm x1 = HomogeneousForm::variable(wf, mdim, 1);
        HomogeneousForm x2 = HomogeneousForm::variable(wf, mdim, 2);
        HomogeneousForm tail(wf, mdim, target_degree);
        if (l >= 2) {
            out.branch = 1;
            Fq det = pts[0].first * pts[1].second - pts[1].first * pts[0].second;
            if (det.is_zero()) fail(errc::bad_input, "chosen points are projectively equal");
            HomogeneousForm l1 = x1.scale(pts[0].second) - x2.scale(pts[0].first);
            HomogeneousForm l2 = x1.scale(pts[1].second) - x2.scale(pts[1].first);
            tail = l1.pow(target_degree - 1) * l2;
        } else {
            out.branch = 2;
            HomogeneousForm l1 = x1.scale(pts[0].second) - x2.scale(pts[0].first);
            tail = l1.pow(target_degree);
        }
        out.form = a * orbit_w + tail;
        out.orbit = orbit_w;
        if (wf != f) out.group = out.group.embed_into(wf);
        out.irreducibility = "constructive-absolute";
    }

    // exact invariance of the assembled form
    for (const auto& h : out.group.elements())
        if (act(h, out.form) != out.form) fail(errc::not_invariant, "assembled form is not invariant");
    out.verified_multiplicity = multiplicity_at_center(out.form);
    if (out.verified_multiplicity != req.m)
        fail(errc::bad_input, "assembled form has multiplicity " + std::to_string(out.verified_multiplicity));
    if (out.form.degree() != target_degree) fail(errc::bad_input, "assembled form has the wrong degree");

    // oracle cross-check within the cap, recorded but never required
    if (req.oracle_cross_check) {
        try {
            int level = 0;
            if (!irreducible_over_sweep(out.form, req.smax, req.factor_cap, &level))
                fail(errc::bad_input, "constructive certificate contradicted by trial division");
            out.irreducibility += "+oracle(levels 1.." + std::to_string(level) + ")";
        } catch (const error& e) {
            if (e.code() != errc::search_space_exceeded) throw;
            out.irreducibility += "+oracle(skipped: cap)";
        }
    }
    return out;
}

/// The prime-to-p normal form: F_m(X_1..) X_0^{d-m} + F_d(X_1..), with the
/// diagonal deck transformation of order d - m. Rejects p | d - m.
inline HomogeneousForm construct_nonwild(const HomogeneousForm& fm, const HomogeneousForm& fd, bool check,
                                         int smax = 4) {
    if (fm.field() != fd.field() || fm.nvars() != fd.nvars())
        fail(errc::field_mismatch, "coefficient forms are incompatible");
    Field f = fm.field();
    if (fm.is_zero()) fail(errc::zero_form, "multiplicity form must be nonzero");
    if (fd.is_zero()) fail(errc::zero_form, "degree form must be nonzero");
    if (!detail::x0_free(fm) || !detail::x0_free(fd)) fail(errc::bad_input, "coefficient forms must avoid X0");
    const int m = fm.degree();
    const int d = fd.degree();
    if (d - m < 2) fail(errc::bad_input, "projection degree must be at least 2");
    if ((d - m) % f->p == 0)
        fail(errc::wild_degree, "p divides d - m = " + std::to_string(d - m) + "; use the wild synthesis");
    Exponents x0(fm.nvars(), 0);
    x0[0] = d - m;
    HomogeneousForm out = fm * HomogeneousForm::monomial(f, x0, Fq::one(f)) + fd;

    // exact invariance under diag(e, 1, .., 1) with e of order d - m, found in
    // the extension sweep
    Field ef = nullptr;
    for (int s = 1; s <= smax && !ef; ++s) {
        Field ext;
        try {
            ext = FieldSpec::get(f->p, f->k * s);
        } catch (const error& e) {
            if (e.code() == errc::size_bound_exceeded) break;
            throw;
        }
        if ((ext->q - 1) % (d - m) == 0) ef = ext;
    }
    if (!ef) fail(errc::root_outside_sweep, "no root of unity of order d - m within the sweep");
    SquareMatrix diag = SquareMatrix::identity(ef, fm.nvars());
    diag.at(0, 0) = primitive_root_of_unity(ef, d - m);
    HomogeneousForm emb = out.embed_into(ef);
    if (act(diag, emb) != emb) fail(errc::bad_input, "normal form lost its diagonal invariance");

    if (check) {
        auto fac = factor(out, FactorScope::base);
        if (fac.total_factor_count() != 1) fail(errc::bad_input, "normal form is reducible over the base field");
    }
    return out;
}

}  // namespace galwild
