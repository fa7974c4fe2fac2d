#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galwild/field.hpp"

namespace galwild {

using Vec = std::vector<Fq>;

/// Dense exact matrix over an explicit finite field. Sizes here are tiny
/// (m = n+2 with n <= 4), so everything is naive and allocation-friendly.
class SquareMatrix {
public:
    SquareMatrix() : f_(nullptr), m_(0) {}
    SquareMatrix(Field f, int m) : f_(f), m_(m), e_(m * m, Fq::zero(f)) {
        if (m < 2) fail(errc::bad_input, "matrix size must be >= 2");
    }

    static SquareMatrix identity(Field f, int m) {
        SquareMatrix r(f, m);
        for (int i = 0; i < m; ++i) r.at(i, i) = Fq::one(f);
        return r;
    }

    Field field() const { return f_; }
    int size() const { return m_; }

    Fq& at(int i, int j) { return e_[i * m_ + j]; }
    const Fq& at(int i, int j) const { return e_[i * m_ + j]; }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
        return a.f_ == b.f_ && a.m_ == b.m_ && a.e_ == b.e_;
    }
    friend bool operator!=(const SquareMatrix& a, const SquareMatrix& b) { return !(a == b); }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        check_compat(a, b);
        SquareMatrix r(a.f_, a.m_);
        for (int i = 0; i < a.m_; ++i)
            for (int kk = 0; kk < a.m_; ++kk) {
                const Fq& aik = a.at(i, kk);
                if (aik.is_zero()) continue;
                for (int j = 0; j < a.m_; ++j) r.at(i, j) = r.at(i, j) + aik * b.at(kk, j);
            }
        return r;
    }
    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        check_compat(a, b);
        SquareMatrix r(a.f_, a.m_);
        for (int i = 0; i < a.m_ * a.m_; ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }
    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        check_compat(a, b);
        SquareMatrix r(a.f_, a.m_);
        for (int i = 0; i < a.m_ * a.m_; ++i) r.e_[i] = a.e_[i] - b.e_[i];
        return r;
    }

    SquareMatrix scale(const Fq& c) const {
        SquareMatrix r(f_, m_);
        for (int i = 0; i < m_ * m_; ++i) r.e_[i] = e_[i] * c;
        return r;
    }

    Vec apply(const Vec& v) const {
        Vec r(m_, Fq::zero(f_));
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) r[i] = r[i] + at(i, j) * v[j];
        return r;
    }

    SquareMatrix pow(std::int64_t e) const {
        SquareMatrix base = *this, r = identity(f_, m_);
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    bool is_identity() const { return *this == identity(f_, m_); }

    bool is_scalar(Fq* scalar_out = nullptr) const {
        const Fq& d = at(0, 0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                if (i == j && at(i, j) != d) return false;
                if (i != j && !at(i, j).is_zero()) return false;
            }
        if (scalar_out) *scalar_out = d;
        return true;
    }

    std::optional<SquareMatrix> try_inverse() const {
        SquareMatrix a = *this;
        SquareMatrix inv = identity(f_, m_);
        for (int col = 0; col < m_; ++col) {
            int piv = -1;
            for (int r = col; r < m_; ++r)
                if (!a.at(r, col).is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return std::nullopt;
            if (piv != col) {
                for (int j = 0; j < m_; ++j) {
                    std::swap(a.at(piv, j), a.at(col, j));
                    std::swap(inv.at(piv, j), inv.at(col, j));
                }
            }
            Fq s = a.at(col, col).inv();
            for (int j = 0; j < m_; ++j) {
                a.at(col, j) = a.at(col, j) * s;
                inv.at(col, j) = inv.at(col, j) * s;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == col || a.at(r, col).is_zero()) continue;
                Fq c = a.at(r, col);
                for (int j = 0; j < m_; ++j) {
                    a.at(r, j) = a.at(r, j) - c * a.at(col, j);
                    inv.at(r, j) = inv.at(r, j) - c * inv.at(col, j);
                }
            }
        }
        return inv;
    }

    SquareMatrix inverse() const {
        auto inv = try_inverse();
        if (!inv) fail(errc::singular_generator, "matrix is singular");
        return *inv;
    }

    bool is_invertible() const { return try_inverse().has_value(); }

    // Free first row, invertible (1,1)-entry, identity in the lower-right block.
    bool is_ut_star() const {
        if (at(0, 0).is_zero()) return false;
        for (int i = 1; i < m_; ++i)
            for (int j = 0; j < m_; ++j) {
                if (i == j && !at(i, j).is_one()) return false;
                if (i != j && !at(i, j).is_zero()) return false;
            }
        return true;
    }

    bool is_unit_upper_triangular() const {
        for (int i = 0; i < m_; ++i) {
            if (!at(i, i).is_one()) return false;
            for (int j = 0; j < i; ++j)
                if (!at(i, j).is_zero()) return false;
        }
        return true;
    }

    SquareMatrix embed_into(Field target) const {
        SquareMatrix r(target, m_);
        for (int i = 0; i < m_ * m_; ++i) r.e_[i] = embed(e_[i], target);
        return r;
    }

    // Canonical byte key for dedup and deterministic ordering.
    std::string key() const {
        std::string s;
        s.reserve(m_ * m_ * 4);
        for (const auto& x : e_) {
            for (auto c : x.coeffs()) {
                s += std::to_string(c);
                s += ',';
            }
            s += ';';
        }
        return s;
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < m_; ++i) {
            if (i) s += ";";
            for (int j = 0; j < m_; ++j) {
                if (j) s += ",";
                s += at(i, j).str();
            }
        }
        return s;
    }

    static SquareMatrix parse(const std::string& text, Field f) {
        std::vector<std::vector<Fq>> rows;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t semi = text.find(';', pos);
            std::string row = text.substr(pos, (semi == std::string::npos ? text.size() : semi) - pos);
            std::vector<Fq> entries;
            std::size_t rp = 0;
            while (rp <= row.size()) {
                std::size_t comma = row.find(',', rp);
                std::string cell = row.substr(rp, (comma == std::string::npos ? row.size() : comma) - rp);
                entries.push_back(parse_element(cell, f));
                if (comma == std::string::npos) break;
                rp = comma + 1;
            }
            rows.push_back(std::move(entries));
            if (semi == std::string::npos) break;
            pos = semi + 1;
        }
        int m = (int)rows.size();
        SquareMatrix r(f, m);
        for (int i = 0; i < m; ++i) {
            if ((int)rows[i].size() != m) fail(errc::syntax_error, "matrix rows have unequal lengths");
            for (int j = 0; j < m; ++j) r.at(i, j) = rows[i][j];
        }
        return r;
    }

private:
    static void check_compat(const SquareMatrix& a, const SquareMatrix& b) {
        if (a.f_ != b.f_) fail(errc::field_mismatch, "matrices over different fields");
        if (a.m_ != b.m_) fail(errc::size_mismatch, "matrix sizes differ");
    }

    Field f_;
    int m_;
    std::vector<Fq> e_;
};

/// Equivalence class of an invertible matrix under scalars, stored as the
/// canonical representative whose first nonzero entry in row-major order is 1.
class ProjectiveClass {
public:
    ProjectiveClass() = default;
    explicit ProjectiveClass(const SquareMatrix& a) {
        if (!a.is_invertible()) fail(errc::singular_generator, "projective class of a singular matrix");
        Fq lead;
        bool found = false;
        for (int i = 0; i < a.size() && !found; ++i)
            for (int j = 0; j < a.size() && !found; ++j)
                if (!a.at(i, j).is_zero()) {
                    lead = a.at(i, j);
                    found = true;
                }
        rep_ = a.scale(lead.inv());
    }

    const SquareMatrix& rep() const { return rep_; }
    Field field() const { return rep_.field(); }
    int size() const { return rep_.size(); }

    friend bool operator==(const ProjectiveClass& a, const ProjectiveClass& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const ProjectiveClass& a, const ProjectiveClass& b) { return !(a == b); }

    friend ProjectiveClass operator*(const ProjectiveClass& a, const ProjectiveClass& b) {
        return ProjectiveClass(a.rep_ * b.rep_);
    }

    ProjectiveClass inverse() const { return ProjectiveClass(rep_.inverse()); }

    ProjectiveClass pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        ProjectiveClass r = ProjectiveClass(SquareMatrix::identity(field(), size()));
        ProjectiveClass base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    bool is_identity() const { return rep_.is_identity(); }

    std::int64_t order(std::int64_t cap = 1'000'000) const {
        ProjectiveClass x = *this;
        std::int64_t n = 1;
        while (!x.is_identity()) {
            x = x * *this;
            ++n;
            if (n > cap) fail(errc::cap_exceeded, "projective order exceeds cap");
        }
        return n;
    }

    std::string key() const { return rep_.key(); }

    ProjectiveClass embed_into(Field target) const { return ProjectiveClass(rep_.embed_into(target)); }

private:
    SquareMatrix rep_;
};

inline ProjectiveClass pr(const SquareMatrix& a) { return ProjectiveClass(a); }

/// Subspace of F_q^m in reduced row echelon form; equality of subspaces is
/// equality of the canonical bases.
class LinearSubspace {
public:
    LinearSubspace() : f_(nullptr), ambient_(0) {}
    LinearSubspace(Field f, int ambient) : f_(f), ambient_(ambient) {}

    static LinearSubspace span_of(Field f, int ambient, std::vector<Vec> vectors) {
        LinearSubspace s(f, ambient);
        s.rows_ = rref(std::move(vectors), f, ambient);
        return s;
    }

    Field field() const { return f_; }
    int ambient() const { return ambient_; }
    int dim() const { return (int)rows_.size(); }
    const std::vector<Vec>& basis() const { return rows_; }

    friend bool operator==(const LinearSubspace& a, const LinearSubspace& b) {
        return a.f_ == b.f_ && a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
    }
    friend bool operator!=(const LinearSubspace& a, const LinearSubspace& b) { return !(a == b); }

    bool contains(const Vec& v) const {
        Vec r = v;
        for (const auto& row : rows_) {
            int piv = pivot_of(row);
            if (!r[piv].is_zero()) {
                Fq c = r[piv];
                for (int j = 0; j < ambient_; ++j) r[j] = r[j] - c * row[j];
            }
        }
        for (const auto& x : r)
            if (!x.is_zero()) return false;
        return true;
    }

    bool contains(const LinearSubspace& other) const {
        for (const auto& row : other.rows_)
            if (!contains(row)) return false;
        return true;
    }

    static std::vector<Vec> rref(std::vector<Vec> rows, Field f, int ambient) {
        int rank = 0;
        for (int col = 0; col < ambient && rank < (int)rows.size(); ++col) {
            int piv = -1;
            for (int r = rank; r < (int)rows.size(); ++r)
                if (!rows[r][col].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            std::swap(rows[rank], rows[piv]);
            Fq s = rows[rank][col].inv();
            for (int j = 0; j < ambient; ++j) rows[rank][j] = rows[rank][j] * s;
            for (int r = 0; r < (int)rows.size(); ++r) {
                if (r == rank || rows[r][col].is_zero()) continue;
                Fq c = rows[r][col];
                for (int j = 0; j < ambient; ++j) rows[r][j] = rows[r][j] - c * rows[rank][j];
            }
            ++rank;
        }
        rows.resize(rank, Vec(ambient, Fq::zero(f)));
        return rows;
    }

    static int pivot_of(const Vec& row) {
        for (int j = 0; j < (int)row.size(); ++j)
            if (!row[j].is_zero()) return j;
        return -1;
    }

private:
    Field f_;
    int ambient_;
    std::vector<Vec> rows_;
};

/// Column space of A - I, echelonized.
inline LinearSubspace image_of_shift(const SquareMatrix& a) {
    Field f = a.field();
    int m = a.size();
    SquareMatrix shift = a - SquareMatrix::identity(f, m);
    std::vector<Vec> cols;
    for (int j = 0; j < m; ++j) {
        Vec c(m, Fq::zero(f));
        for (int i = 0; i < m; ++i) c[i] = shift.at(i, j);
        cols.push_back(std::move(c));
    }
    return LinearSubspace::span_of(f, m, std::move(cols));
}

/// Kernel of A as a subspace (solutions of A x = 0).
inline LinearSubspace kernel_of(const SquareMatrix& a) {
    Field f = a.field();
    int m = a.size();
    std::vector<Vec> rows;
    for (int i = 0; i < m; ++i) {
        Vec r(m, Fq::zero(f));
        for (int j = 0; j < m; ++j) r[j] = a.at(i, j);
        rows.push_back(std::move(r));
    }
    auto rr = LinearSubspace::rref(std::move(rows), f, m);
    std::vector<int> pivots;
    for (const auto& row : rr) pivots.push_back(LinearSubspace::pivot_of(row));
    std::vector<Vec> basis;
    for (int j = 0; j < m; ++j) {
        if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
        Vec v(m, Fq::zero(f));
        v[j] = Fq::one(f);
        for (std::size_t r = 0; r < rr.size(); ++r) v[pivots[r]] = rr[r][j].neg();
        basis.push_back(std::move(v));
    }
    return LinearSubspace::span_of(f, m, std::move(basis));
}

inline int rank_of(const SquareMatrix& a) { return a.size() - kernel_of(a).dim(); }

/// The unique representative with free first row and identity lower-right
/// block. Throws NotUTStarClass when the class has no such shape.
inline SquareMatrix ut_star_representative(const ProjectiveClass& g) {
    const SquareMatrix& b = g.rep();
    int m = b.size();
    Fq common;
    bool have_common = false;
    for (int i = 1; i < m; ++i)
        for (int j = 1; j < m; ++j) {
            if (i == j) {
                if (!have_common) {
                    common = b.at(i, i);
                    have_common = true;
                } else if (b.at(i, i) != common) {
                    fail(errc::not_ut_star_class, "diagonal entries below row 1 differ");
                }
            } else if (!b.at(i, j).is_zero()) {
                fail(errc::not_ut_star_class, "nonzero off-diagonal entry below row 1");
            }
        }
    for (int i = 1; i < m; ++i)
        if (!b.at(i, 0).is_zero()) fail(errc::not_ut_star_class, "nonzero entry in column 1 below row 1");
    if (common.is_zero()) fail(errc::not_ut_star_class, "lower block is singular");
    return b.scale(common.inv());
}

/// For A with free first row, (1,1)-entry a != 1 and identity block below:
/// the conjugator B with first row (1, a_12/(a-1), ..., a_1m/(a-1)) satisfying
/// B A B^{-1} = diag(a, 1, ..., 1). The conjugation identity is re-checked by
/// exact multiplication before returning.
inline SquareMatrix normalizer_to_diagonal(const SquareMatrix& a) {
    if (!a.is_ut_star()) fail(errc::not_ut_star, "input is not in the distinguished shape");
    Field f = a.field();
    int m = a.size();
    Fq a11 = a.at(0, 0);
    if (a11.is_one()) fail(errc::unipotent_input, "(1,1)-entry equals 1");
    Fq d = (a11 - Fq::one(f)).inv();
    SquareMatrix b = SquareMatrix::identity(f, m);
    for (int j = 1; j < m; ++j) b.at(0, j) = a.at(0, j) * d;
    SquareMatrix expected = SquareMatrix::identity(f, m);
    expected.at(0, 0) = a11;
    if (b * a * b.inverse() != expected) fail(errc::bad_input, "conjugation identity failed");
    return b;
}

// Characteristic polynomial det(lambda I - A), low degree first, via signed
// permutation expansion (m <= 6 keeps this trivial).
inline std::vector<Fq> char_poly(const SquareMatrix& a) {
    Field f = a.field();
    int m = a.size();
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    std::vector<Fq> acc(m + 1, Fq::zero(f));
    do {
        int inversions = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (perm[i] > perm[j]) ++inversions;
        // product of linear polys (lambda*delta_{i,perm(i)} - a_{i,perm(i)})
        std::vector<Fq> term = {Fq::one(f)};
        for (int i = 0; i < m; ++i) {
            std::vector<Fq> lin;
            if (perm[i] == i)
                lin = {a.at(i, i).neg(), Fq::one(f)};
            else
                lin = {a.at(i, perm[i]).neg()};
            std::vector<Fq> next(term.size() + lin.size() - 1, Fq::zero(f));
            for (std::size_t x = 0; x < term.size(); ++x)
                for (std::size_t y = 0; y < lin.size(); ++y) next[x + y] = next[x + y] + term[x] * lin[y];
            term = std::move(next);
        }
        Fq sign = (inversions % 2 == 0) ? Fq::one(f) : Fq::one(f).neg();
        for (std::size_t i = 0; i < term.size(); ++i) acc[i] = acc[i] + sign * term[i];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

struct Eigenspace {
    Fq eigenvalue;         // element of F_{q^level}
    int level;             // smallest sweep level containing the eigenvalue
    int multiplicity;      // algebraic multiplicity
    LinearSubspace space;  // kernel of (A - lambda I) over F_{q^level}
};

/// Projectivized fixed locus of [A]: one eigenspace per eigenvalue found in the
/// extension sweep. Throws when the characteristic polynomial does not split
/// within smax levels.
inline std::vector<Eigenspace> fixed_locus(const SquareMatrix& a, int smax = 4) {
    if (!a.is_invertible()) fail(errc::singular_generator, "fixed locus of a singular matrix");
    Field base = a.field();
    int m = a.size();
    auto cp = char_poly(a);
    std::vector<Eigenspace> out;
    int found_mult = 0;
    for (int s = 1; s <= smax && found_mult < m; ++s) {
        Field ext;
        try {
            ext = FieldSpec::get(base->p, base->k * s);
        } catch (const error& e) {
            if (e.code() == errc::size_bound_exceeded) break;
            throw;
        }
        std::vector<Fq> cpe;
        cpe.reserve(cp.size());
        for (const auto& c : cp) cpe.push_back(embed(c, ext));
        SquareMatrix ae = a.embed_into(ext);
        for (std::int64_t idx = 0; idx < ext->q; ++idx) {
            Fq r = Fq::from_index(ext, idx);
            // skip roots already found at a lower level
            bool seen = false;
            for (const auto& es : out)
                if (s % es.level == 0 && embed(es.eigenvalue, ext) == r) {
                    seen = true;
                    break;
                }
            if (seen) continue;
            // evaluate
            Fq val = Fq::zero(ext);
            for (std::size_t j = cpe.size(); j-- > 0;) val = val * r + cpe[j];
            if (!val.is_zero()) continue;
            // multiplicity by repeated division by (x - r)
            int mult = 0;
            std::vector<Fq> poly = cpe;
            while (true) {
                // synthetic division
                std::vector<Fq> quo(poly.size() - 1, Fq::zero(ext));
                Fq carry = Fq::zero(ext);
                for (std::size_t j = poly.size(); j-- > 1;) {
                    carry = poly[j] + carry * r;
                    quo[j - 1] = carry;
                }
                Fq rem = poly[0] + carry * r;
                if (!rem.is_zero()) break;
                ++mult;
                poly = quo;
                if (poly.size() == 1) break;
            }
            if (mult == 0) continue;
            SquareMatrix shifted = ae;
            for (int i = 0; i < m; ++i) shifted.at(i, i) = shifted.at(i, i) - r;
            Eigenspace es;
            es.eigenvalue = r;
            es.level = s;
            es.multiplicity = mult;
            es.space = kernel_of(shifted);
            found_mult += mult;
            out.push_back(std::move(es));
        }
    }
    if (found_mult < m)
        fail(errc::eigenvalue_outside_sweep, "characteristic polynomial does not split within the sweep");
    return out;
}

/// Deterministic invertible matrix taking the vector v to e_1 (used to move a
/// projective point to the projection center).
inline SquareMatrix basis_change_to_e1(const Vec& v, Field f) {
    int m = (int)v.size();
    int pivot = -1;
    for (int i = 0; i < m && pivot < 0; ++i)
        if (!v[i].is_zero()) pivot = i;
    if (pivot < 0) fail(errc::bad_input, "zero vector has no basis change");
    SquareMatrix b(f, m);
    for (int i = 0; i < m; ++i) b.at(i, 0) = v[i];
    int col = 1;
    for (int i = 0; i < m; ++i) {
        if (i == pivot) continue;
        b.at(i, col) = Fq::one(f);
        ++col;
    }
    return b.inverse();
}

}  // namespace galwild
