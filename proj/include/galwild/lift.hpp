#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "galwild/group.hpp"

namespace galwild {

/// Matrix representative A of a projective class g with g^p = e, normalized so
/// that A^p = I exactly. The canonical representative C has C^p scalar; divide
/// by the p-th root of that scalar. The result is the unique such lift, and
/// its shift A - I is nilpotent.
inline SquareMatrix normalize_p_element(const ProjectiveClass& g) {
    Field f = g.field();
    const std::int64_t p = f->p;
    const SquareMatrix& c = g.rep();
    SquareMatrix cp = c.pow(p);
    Fq lambda;
    if (!cp.is_scalar(&lambda) || lambda.is_zero())
        fail(errc::not_p_power, "class does not have projective order dividing p");
    Fq tau = pth_root(lambda);
    SquareMatrix a = c.scale(tau.inv());
    if (!a.pow(p).is_identity()) fail(errc::not_p_power, "normalization failed to reach order p");
    // all eigenvalues are 1: the shift must be nilpotent
    SquareMatrix z = (a - SquareMatrix::identity(f, a.size())).pow(a.size());
    Fq zscale;
    if (!z.is_scalar(&zscale) || !zscale.is_zero()) fail(errc::not_p_power, "lift is not unipotent");
    return a;
}

/// Invertible Q with Q A Q^{-1} unit upper triangular for every A in the
/// commuting unipotent family S. Built by recursively splitting off the
/// lexicographically smallest common kernel vector of the shifts.
inline SquareMatrix simultaneous_unitriangularize(const std::vector<SquareMatrix>& s) {
    if (s.empty()) fail(errc::bad_input, "empty family");
    Field f = s[0].field();
    const int m = s[0].size();
    for (const auto& a : s) {
        if (a.field() != f || a.size() != m) fail(errc::size_mismatch, "family members are incompatible");
        SquareMatrix shift = a - SquareMatrix::identity(f, m);
        SquareMatrix pw = shift.pow(m);
        Fq sc;
        if (!pw.is_scalar(&sc) || !sc.is_zero()) fail(errc::not_unipotent, "family member is not unipotent");
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] * s[j] != s[j] * s[i]) fail(errc::not_commuting, "family members do not commute");

    bool already = true;
    for (const auto& a : s)
        if (!a.is_unit_upper_triangular()) {
            already = false;
            break;
        }
    if (already) return SquareMatrix::identity(f, m);

    // smallest nonzero scalar in the element order (1 for prime fields)
    Fq small = Fq::from_index(f, 1);
    for (std::int64_t idx = 2; idx < f->q && small.is_zero(); ++idx) small = Fq::from_index(f, idx);

    // recursive construction of a flag basis
    struct Rec {
        Field f;
        Fq small;
        std::vector<Vec> operator()(const std::vector<SquareMatrix>& fam) const {
            const int r = fam[0].size();
            // common kernel of the shifts: stack all rows
            std::vector<Vec> rows;
            for (const auto& a : fam)
                for (int i = 0; i < r; ++i) {
                    Vec row(r, Fq::zero(f));
                    bool nz = false;
                    for (int j = 0; j < r; ++j) {
                        row[j] = a.at(i, j) - (i == j ? Fq::one(f) : Fq::zero(f));
                        nz = nz || !row[j].is_zero();
                    }
                    if (nz) rows.push_back(std::move(row));
                }
            Vec v(r, Fq::zero(f));
            if (rows.empty()) {
                v[r - 1] = small;  // every vector is fixed; lex-smallest nonzero
            } else {
                auto rr = LinearSubspace::rref(std::move(rows), f, r);
                // kernel basis from the rref, canonical
                std::vector<int> pivots;
                for (const auto& row : rr) pivots.push_back(LinearSubspace::pivot_of(row));
                std::vector<Vec> kernel;
                for (int j = 0; j < r; ++j) {
                    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
                    Vec w(r, Fq::zero(f));
                    w[j] = Fq::one(f);
                    for (std::size_t i = 0; i < rr.size(); ++i) w[pivots[i]] = rr[i][j].neg();
                    kernel.push_back(std::move(w));
                }
                if (kernel.empty()) fail(errc::not_commuting, "commuting unipotents have no common kernel vector");
                auto krr = LinearSubspace::rref(std::move(kernel), f, r);
                // lex-smallest nonzero kernel vector: the last rref row has the
                // latest first-nonzero position; scale by the smallest scalar
                v = krr.back();
                for (auto& x : v) x = x * small;
            }
            if (r == 1) return {v};
            // complete to a basis, deterministically
            std::vector<Vec> basis = {v};
            for (int j = 0; j < r && (int)basis.size() < r; ++j) {
                Vec e(r, Fq::zero(f));
                e[j] = Fq::one(f);
                auto maybe = basis;
                maybe.push_back(e);
                if ((int)LinearSubspace::span_of(f, r, maybe).dim() == (int)basis.size() + 1)
                    basis.push_back(std::move(e));
            }
            if (r == 2) return {v, basis[1]};  // any completion works: shifts square to zero
            SquareMatrix t(f, r);
            for (int j = 0; j < r; ++j)
                for (int i = 0; i < r; ++i) t.at(i, j) = basis[j][i];
            SquareMatrix tinv = t.inverse();
            // quotient family on coordinates 2..r
            std::vector<SquareMatrix> quotient;
            for (const auto& a : fam) {
                SquareMatrix conj = tinv * a * t;
                SquareMatrix q(f, r - 1);
                for (int i = 1; i < r; ++i)
                    for (int j = 1; j < r; ++j) q.at(i - 1, j - 1) = conj.at(i, j);
                quotient.push_back(std::move(q));
            }
            std::vector<Vec> sub = (*this)(quotient);
            std::vector<Vec> out = {v};
            for (const auto& w : sub) {
                Vec lifted(r, Fq::zero(f));
                for (int i = 1; i < r; ++i) lifted[i] = w[i - 1];
                out.push_back(t.apply(lifted));
            }
            return out;
        }
    };
    Rec rec{f, small};
    std::vector<Vec> flag = rec(s);
    SquareMatrix b(f, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) b.at(i, j) = flag[j][i];
    SquareMatrix q = b.inverse();
    for (const auto& a : s)
        if (!(q * a * q.inverse()).is_unit_upper_triangular())
            fail(errc::bad_input, "triangularization postcondition failed");
    return q;
}

struct ConditionsReport {
    bool cond_i = false;   // some non-identity element has shift image of dimension 1
    bool cond_ii = true;   // all non-identity shift images agree
    std::optional<LinearSubspace> common_line;
    std::vector<SquareMatrix> witnesses;  // a failing pair when cond_ii is false
};

/// Exact evaluation of the two realization conditions over all elements.
/// The trivial group reports (false, true) with no common line.
inline ConditionsReport check_conditions(const MatrixGroup& g) {
    ConditionsReport rep;
    std::optional<LinearSubspace> first_image;
    SquareMatrix first_witness;
    for (const auto& a : g.elements()) {
        if (a.is_identity()) continue;
        LinearSubspace img = image_of_shift(a);
        if (img.dim() == 1) rep.cond_i = true;
        if (!first_image) {
            first_image = img;
            first_witness = a;
        } else if (img != *first_image) {
            if (rep.cond_ii) {
                rep.cond_ii = false;
                rep.witnesses = {first_witness, a};
            }
        }
    }
    if (rep.cond_i && rep.cond_ii && first_image && first_image->dim() == 1) rep.common_line = *first_image;
    return rep;
}

struct LiftResult {
    MatrixGroup lifted;
    Field lift_field;     // possibly an extension of the input field
    int extension_level;  // lifted group lives over F_{q^level}
    std::vector<std::pair<ProjectiveClass, SquareMatrix>> section;  // input class -> matrix lift

    const SquareMatrix& section_at(const ProjectiveClass& g) const {
        ProjectiveClass probe = g.field() == lift_field ? g : g.embed_into(lift_field);
        for (const auto& [cls, mat] : section)
            if (cls == probe) return mat;
        fail(errc::bad_input, "class not in the lifted group");
    }
};

/// Lift a projective group of shape (Z/p)^u x| Z/l to a matrix group mapped
/// isomorphically by the projection. Every p-element lift has exact order p;
/// the complement lift is scalar-adjusted via an l-th root searched in the
/// extension sweep.
inline LiftResult lift_group(const std::vector<ProjectiveClass>& classes, int smax = 4,
                             std::optional<std::pair<int, std::int64_t>> structure_hint = std::nullopt) {
    if (classes.empty()) fail(errc::bad_input, "empty projective group");
    Field f = classes[0].field();
    const std::int64_t p = f->p;
    const int m = classes[0].size();
    // closed set of distinct classes
    {
        std::vector<std::string> keys;
        for (const auto& c : classes) keys.push_back(c.key());
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            fail(errc::bad_input, "duplicate classes in input");
        auto find = [&](const ProjectiveClass& x) {
            return std::binary_search(keys.begin(), keys.end(), x.key());
        };
        for (const auto& a : classes)
            for (const auto& b : classes)
                if (!find(a * b)) fail(errc::not_recognized, "input set is not closed under products");
    }
    const std::int64_t n = (std::int64_t)classes.size();
    std::int64_t rest = n;
    int u = 0;
    while (rest % p == 0) {
        rest /= p;
        ++u;
    }
    const std::int64_t l = rest;
    if (structure_hint && (structure_hint->first != u || structure_hint->second != l))
        fail(errc::not_recognized, "structure hint disagrees with the group order");

    // p-part: classes of projective order dividing p
    std::vector<ProjectiveClass> p_part;
    for (const auto& c : classes)
        if (c.pow(p).is_identity()) p_part.push_back(c);
    std::int64_t pu = 1;
    for (int i = 0; i < u; ++i) pu *= p;
    if ((std::int64_t)p_part.size() != pu)
        fail(errc::not_recognized, "p-torsion has order " + std::to_string(p_part.size()) +
                                       ", expected " + std::to_string(pu));

    std::vector<SquareMatrix> lifted_p;
    for (const auto& c : p_part) lifted_p.push_back(normalize_p_element(c));
    // the order-p lifts multiply like their classes (uniqueness of the
    // normalized lift), so the set is already a group
    for (const auto& a : lifted_p)
        for (const auto& b : lifted_p) {
            if (a * b != b * a) fail(errc::not_recognized, "p-element lifts do not commute");
        }

    Field lift_field = f;
    int level = 1;
    std::vector<SquareMatrix> gens = lifted_p;
    if (l > 1) {
        // a class of exact projective order l
        std::optional<ProjectiveClass> gamma;
        for (const auto& c : classes)
            if (c.order() == l) {
                gamma = c;
                break;
            }
        if (!gamma) fail(errc::not_recognized, "no element of exact order " + std::to_string(l));
        SquareMatrix crep = gamma->rep();
        SquareMatrix cl = crep.pow(l);
        Fq lambda;
        if (!cl.is_scalar(&lambda) || lambda.is_zero())
            fail(errc::not_recognized, "complement candidate has no scalar l-th power");
        RootInSweep root = nth_root_in_sweep(lambda, l, smax);
        level = root.level;
        lift_field = root.root.field();
        SquareMatrix a = crep.embed_into(lift_field).scale(root.root.inv());
        if (!a.pow(l).is_identity()) fail(errc::root_outside_sweep, "complement adjustment failed");
        gens.clear();
        for (const auto& h : lifted_p) gens.push_back(h.embed_into(lift_field));
        gens.push_back(a);
    }

    LiftResult out;
    out.lifted = MatrixGroup::closure(gens);
    out.lift_field = lift_field;
    out.extension_level = level;
    if (out.lifted.order() != n)
        fail(errc::not_recognized, "lifted group has order " + std::to_string(out.lifted.order()) +
                                       ", expected " + std::to_string(n));
    // match classes: the projection restricted to the lift must be bijective
    std::vector<ProjectiveClass> embedded;
    for (const auto& c : classes) embedded.push_back(level == 1 ? c : c.embed_into(lift_field));
    for (const auto& mat : out.lifted.elements()) {
        ProjectiveClass cls = pr(mat);
        bool matched = false;
        for (std::size_t i = 0; i < embedded.size(); ++i)
            if (embedded[i] == cls) {
                out.section.emplace_back(classes[i], mat);
                matched = true;
                break;
            }
        if (!matched) fail(errc::not_recognized, "lift contains a class outside the input group");
    }
    if (out.section.size() != (std::size_t)n) fail(errc::not_recognized, "projection is not bijective on the lift");
    // the section is a homomorphism
    std::unordered_map<std::string, std::size_t> by_key;
    for (std::size_t i = 0; i < out.section.size(); ++i) by_key.emplace(out.section[i].first.key(), i);
    for (const auto& [ca, ma] : out.section)
        for (const auto& [cb, mb] : out.section) {
            auto it = by_key.find((ca * cb).key());
            if (it == by_key.end() || ma * mb != out.section[it->second].second)
                fail(errc::not_recognized, "section fails multiplicativity");
        }
    return out;
}

}  // namespace galwild
