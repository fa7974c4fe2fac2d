#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "galwild/linalg.hpp"

namespace galwild {

/// Finite matrix group stored fully enumerated, closed under product and
/// inverse. Elements are kept sorted by their canonical byte key so identical
/// groups always enumerate identically.
class MatrixGroup {
public:
    static constexpr std::int64_t default_cap = 1'000'000;

    /// Breadth-first closure of the generating set.
    static MatrixGroup closure(const std::vector<SquareMatrix>& gens, std::int64_t cap = default_cap) {
        if (gens.empty()) fail(errc::bad_input, "closure needs at least one generator");
        Field f = gens[0].field();
        int m = gens[0].size();
        for (const auto& g : gens) {
            if (g.field() != f) fail(errc::field_mismatch, "generators over different fields");
            if (g.size() != m) fail(errc::size_mismatch, "generators of different sizes");
            if (!g.is_invertible()) fail(errc::singular_generator, "generator is singular");
        }
        MatrixGroup grp;
        grp.f_ = f;
        grp.m_ = m;
        grp.gens_ = gens;
        std::unordered_map<std::string, int> seen;
        std::deque<SquareMatrix> queue;
        auto push = [&](const SquareMatrix& x) {
            auto key = x.key();
            if (seen.count(key)) return;
            if ((std::int64_t)seen.size() >= cap)
                fail(errc::cap_exceeded, "group closure exceeds cap " + std::to_string(cap));
            seen.emplace(key, (int)seen.size());
            queue.push_back(x);
            grp.elems_.push_back(x);
        };
        push(SquareMatrix::identity(f, m));
        for (const auto& g : gens) push(g);
        while (!queue.empty()) {
            SquareMatrix x = queue.front();
            queue.pop_front();
            for (const auto& g : gens) push(x * g);
        }
        grp.finalize();
        return grp;
    }

    /// Wrap an explicitly closed element set (verified).
    static MatrixGroup from_elements(std::vector<SquareMatrix> elems, std::vector<SquareMatrix> gens = {}) {
        if (elems.empty()) fail(errc::bad_input, "a group needs elements");
        MatrixGroup grp;
        grp.f_ = elems[0].field();
        grp.m_ = elems[0].size();
        grp.elems_ = std::move(elems);
        grp.gens_ = gens.empty() ? grp.elems_ : std::move(gens);
        grp.finalize();
        grp.verify_closed();
        return grp;
    }

    Field field() const { return f_; }
    int size() const { return m_; }
    std::int64_t order() const { return (std::int64_t)elems_.size(); }
    const std::vector<SquareMatrix>& elements() const { return elems_; }
    const std::vector<SquareMatrix>& generators() const { return gens_; }
    bool is_ut_star() const { return is_ut_star_; }

    bool contains(const SquareMatrix& x) const { return index_.count(x.key()) > 0; }

    const SquareMatrix& inverse_of(const SquareMatrix& x) const {
        auto it = index_.find(x.inverse().key());
        if (it == index_.end()) fail(errc::bad_input, "inverse not in group");
        return elems_[it->second];
    }

    std::int64_t element_order(const SquareMatrix& x) const {
        SquareMatrix y = x;
        std::int64_t n = 1;
        while (!y.is_identity()) {
            y = y * x;
            ++n;
            if (n > order() + 1) fail(errc::bad_input, "element order exceeds group order");
        }
        return n;
    }

    MatrixGroup embed_into(Field target) const {
        std::vector<SquareMatrix> elems, gens;
        for (const auto& e : elems_) elems.push_back(e.embed_into(target));
        for (const auto& g : gens_) gens.push_back(g.embed_into(target));
        return from_elements(std::move(elems), std::move(gens));
    }

private:
    void finalize() {
        std::sort(elems_.begin(), elems_.end(),
                  [](const SquareMatrix& a, const SquareMatrix& b) { return a.key() < b.key(); });
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        index_.clear();
        for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i].key(), (int)i);
        is_ut_star_ = true;
        for (const auto& e : elems_)
            if (!e.is_ut_star()) {
                is_ut_star_ = false;
                break;
            }
    }

    void verify_closed() const {
        if (!contains(SquareMatrix::identity(f_, m_))) fail(errc::bad_input, "element set lacks the identity");
        // full product table when affordable, spot products otherwise
        if (order() * order() <= 1'000'000) {
            for (const auto& a : elems_)
                for (const auto& b : elems_)
                    if (!contains(a * b)) fail(errc::bad_input, "element set is not closed under product");
        }
        for (const auto& a : elems_)
            if (!contains(a.inverse())) fail(errc::bad_input, "element set is not closed under inverse");
    }

    Field f_ = nullptr;
    int m_ = 0;
    std::vector<SquareMatrix> elems_;
    std::vector<SquareMatrix> gens_;
    std::unordered_map<std::string, int> index_;
    bool is_ut_star_ = false;
};

/// The (1,1)-entry homomorphism into the multiplicative group, defined on
/// groups whose elements all have the distinguished first-row shape. Values
/// are aligned with G.elements(). Multiplicativity is re-checked exhaustively
/// on small groups.
inline std::vector<Fq> phi(const MatrixGroup& g) {
    if (!g.is_ut_star()) fail(errc::not_ut_star, "phi needs a group in the distinguished shape");
    std::vector<Fq> vals;
    vals.reserve(g.order());
    for (const auto& e : g.elements()) vals.push_back(e.at(0, 0));
    if (g.order() <= 256) {
        for (const auto& a : g.elements())
            for (const auto& b : g.elements())
                if ((a * b).at(0, 0) != a.at(0, 0) * b.at(0, 0))
                    fail(errc::bad_input, "phi failed multiplicativity");
    }
    return vals;
}

/// The unique Sylow p-subgroup. For groups in the distinguished shape this is
/// the kernel of phi; otherwise the p-power-order elements must close under
/// product.
inline MatrixGroup sylow_p(const MatrixGroup& g) {
    const std::int64_t p = g.field()->p;
    std::vector<SquareMatrix> elems;
    if (g.is_ut_star()) {
        for (const auto& e : g.elements())
            if (e.at(0, 0).is_one()) elems.push_back(e);
    } else {
        for (const auto& e : g.elements()) {
            std::int64_t n = g.element_order(e);
            bool p_power = true;
            while (n > 1) {
                if (n % p != 0) {
                    p_power = false;
                    break;
                }
                n /= p;
            }
            if (p_power) elems.push_back(e);
        }
        for (const auto& a : elems)
            for (const auto& b : elems) {
                SquareMatrix ab = a * b;
                std::int64_t n = g.element_order(ab);
                while (n > 1 && n % p == 0) n /= p;
                if (n != 1) fail(errc::not_normal_sylow, "p-power elements do not close under product");
            }
    }
    return MatrixGroup::from_elements(std::move(elems));
}

struct GroupStructure {
    int u = 0;           // p-rank
    std::int64_t l = 1;  // prime-to-p cyclic order
    std::vector<SquareMatrix> sylow_generators;
    SquareMatrix complement_generator;
    bool divisibility = true;  // l | p^u - 1
};

/// Recognize the elementary-abelian-by-cyclic shape: |G| = p^u * l with the
/// Sylow part elementary abelian and an element of exact order l generating a
/// complement. Throws NotRecognized with a reason otherwise.
inline GroupStructure recognize_structure(const MatrixGroup& g) {
    const std::int64_t p = g.field()->p;
    std::int64_t n = g.order();
    int u = 0;
    while (n % p == 0) {
        n /= p;
        ++u;
    }
    const std::int64_t l = n;

    MatrixGroup syl;
    try {
        syl = sylow_p(g);
    } catch (const error& e) {
        fail(errc::not_recognized, std::string("Sylow extraction failed: ") + e.what());
    }
    std::int64_t pu = 1;
    for (int i = 0; i < u; ++i) pu *= p;
    if (syl.order() != pu) fail(errc::not_recognized, "Sylow part has wrong order");
    for (const auto& a : syl.elements()) {
        if (!a.is_identity() && !a.pow(p).is_identity())
            fail(errc::not_recognized, "Sylow part is not elementary abelian");
        for (const auto& b : syl.elements())
            if (a * b != b * a) fail(errc::not_recognized, "Sylow part is not abelian");
    }

    GroupStructure st;
    st.u = u;
    st.l = l;

    // independent generators of the Sylow part, greedily
    {
        std::vector<SquareMatrix> span = {SquareMatrix::identity(g.field(), g.size())};
        auto in_span = [&](const SquareMatrix& x) {
            for (const auto& s : span)
                if (s == x) return true;
            return false;
        };
        for (const auto& e : syl.elements()) {
            if (in_span(e)) continue;
            st.sylow_generators.push_back(e);
            std::vector<SquareMatrix> next = span;
            for (const auto& s : span) {
                SquareMatrix x = s;
                for (std::int64_t i = 1; i < p; ++i) {
                    x = x * e;
                    next.push_back(x);
                }
            }
            span = std::move(next);
            if ((std::int64_t)span.size() == pu) break;
        }
    }

    // complement of exact order l
    st.complement_generator = SquareMatrix::identity(g.field(), g.size());
    if (l > 1) {
        bool found = false;
        if (g.is_ut_star()) {
            // preimages of a generator of im(phi) come first
            Fq zeta;
            bool have_zeta = false;
            for (const auto& e : g.elements()) {
                Fq v = e.at(0, 0);
                if (v.is_zero() || v.mult_order() != l) continue;
                if (!have_zeta || Fq::lex_less(v, zeta)) {
                    zeta = v;
                    have_zeta = true;
                }
            }
            if (have_zeta) {
                for (const auto& e : g.elements()) {
                    if (e.at(0, 0) == zeta && e.pow(l).is_identity()) {
                        st.complement_generator = e;
                        found = true;
                        break;
                    }
                }
            }
        }
        if (!found) {
            for (const auto& e : g.elements()) {
                if (g.element_order(e) != l) continue;
                // the Sylow part must be normalized by the candidate
                bool normalizes = true;
                SquareMatrix einv = e.inverse();
                for (const auto& s : syl.elements())
                    if (!syl.contains(e * s * einv)) {
                        normalizes = false;
                        break;
                    }
                if (normalizes) {
                    st.complement_generator = e;
                    found = true;
                    break;
                }
            }
        }
        if (!found) fail(errc::not_recognized, "no order-" + std::to_string(l) + " complement element found");
    }

    std::int64_t pm1 = pu - 1;
    st.divisibility = (pm1 % l) == 0;
    return st;
}

}  // namespace galwild
