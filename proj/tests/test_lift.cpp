#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "galwild/lift.hpp"

using namespace galwild;

namespace {

SquareMatrix shift12(Field f, int m, const Fq& v) {
    SquareMatrix e = SquareMatrix::identity(f, m);
    e.at(0, 1) = v;
    return e;
}

SquareMatrix diag_first(Field f, int m, const Fq& v) {
    SquareMatrix e = SquareMatrix::identity(f, m);
    e.at(0, 0) = v;
    return e;
}

SquareMatrix random_invertible(Field f, int m, std::mt19937_64& rng) {
    while (true) {
        SquareMatrix a(f, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a.at(i, j) = Fq::from_index(f, rng() % f->q);
        if (a.is_invertible()) return a;
    }
}

}  // namespace

TEST_CASE("normalize_p_element") {
    Field f9 = FieldSpec::get(3, 2);
    CHECK(normalize_p_element(pr(SquareMatrix::identity(f9, 3))) == SquareMatrix::identity(f9, 3));

    // class of 2*(I + E12) over F_9: C^3 = 2I, tau = pth_root(2) = 2, A = C/2
    SquareMatrix c = shift12(f9, 3, Fq::one(f9)).scale(Fq::from_int(f9, 2));
    SquareMatrix a = normalize_p_element(pr(c));
    CHECK(a == shift12(f9, 3, Fq::one(f9)));
    CHECK(a.pow(3).is_identity());

    Field f5 = FieldSpec::get(5, 1);
    CHECK_THROWS_MATCHES(normalize_p_element(pr(diag_first(f5, 3, Fq::from_int(f5, 2)))), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::not_p_power; }));
}

TEST_CASE("normalized lifts are nilpotent shifts") {
    // (A - I)^m = 0 for every normalized lift, over several fields
    std::mt19937_64 rng(11);
    for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
        Field f = FieldSpec::get(p, k);
        for (int trial = 0; trial < 20; ++trial) {
            SquareMatrix u = SquareMatrix::identity(f, 3);
            for (int j = 1; j < 3; ++j) u.at(0, j) = Fq::from_index(f, rng() % f->q);
            // scale by a random unit so the class representative is not already normalized
            Fq unit = Fq::from_index(f, 1 + (std::int64_t)(rng() % (f->q - 1)));
            SquareMatrix a = normalize_p_element(pr(u.scale(unit)));
            CHECK(a.pow(p).is_identity());
            SquareMatrix z = (a - SquareMatrix::identity(f, 3)).pow(3);
            Fq sc;
            CHECK((z.is_scalar(&sc) && sc.is_zero()));
        }
    }
}

TEST_CASE("simultaneous_unitriangularize") {
    Field f3 = FieldSpec::get(3, 1);
    CHECK(simultaneous_unitriangularize({SquareMatrix::identity(f3, 3)}) == SquareMatrix::identity(f3, 3));

    // lower shift gets swapped to an upper one
    SquareMatrix lower = SquareMatrix::identity(f3, 3);
    lower.at(1, 0) = Fq::one(f3);
    SquareMatrix q = simultaneous_unitriangularize({lower});
    CHECK((q * lower * q.inverse()).is_unit_upper_triangular());

    Field f2 = FieldSpec::get(2, 1);
    SquareMatrix e12 = shift12(f2, 3, Fq::one(f2));
    SquareMatrix e21 = SquareMatrix::identity(f2, 3);
    e21.at(1, 0) = Fq::one(f2);
    CHECK_THROWS_MATCHES(simultaneous_unitriangularize({e12, e21}), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::not_commuting; }));

    SquareMatrix notuni = diag_first(f3, 3, Fq::from_int(f3, 2));
    CHECK_THROWS_MATCHES(simultaneous_unitriangularize({notuni}), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::not_unipotent; }));

    // random commuting unipotent families: conjugate a translation family
    std::mt19937_64 rng(23);
    Field f4 = FieldSpec::get(2, 2);
    for (int trial = 0; trial < 15; ++trial) {
        SquareMatrix r = random_invertible(f4, 4, rng);
        SquareMatrix rinv = r.inverse();
        std::vector<SquareMatrix> fam;
        for (std::int64_t v = 1; v < 4; ++v) {
            SquareMatrix s = SquareMatrix::identity(f4, 4);
            s.at(0, 1) = Fq::from_index(f4, v);
            s.at(0, 3) = Fq::from_index(f4, v) * Fq::gen(f4);
            fam.push_back(r * s * rinv);
        }
        SquareMatrix qq = simultaneous_unitriangularize(fam);
        for (const auto& a : fam) CHECK((qq * a * qq.inverse()).is_unit_upper_triangular());
    }
}

TEST_CASE("check_conditions") {
    Field f2 = FieldSpec::get(2, 1);
    // the standard shape satisfies both conditions with line e_1
    Field f4 = FieldSpec::get(2, 2);
    MatrixGroup std_grp = MatrixGroup::closure({shift12(f4, 3, Fq::one(f4)), diag_first(f4, 3, Fq::gen(f4))});
    auto rep = check_conditions(std_grp);
    CHECK(rep.cond_i);
    CHECK(rep.cond_ii);
    REQUIRE(rep.common_line.has_value());
    CHECK(rep.common_line->dim() == 1);
    Vec e1 = {Fq::one(f4), Fq::zero(f4), Fq::zero(f4)};
    CHECK(rep.common_line->contains(e1));

    // two commuting shifts with different image lines break condition (ii)
    SquareMatrix s12 = SquareMatrix::identity(f2, 4);
    s12.at(0, 1) = Fq::one(f2);
    SquareMatrix s34 = SquareMatrix::identity(f2, 4);
    s34.at(2, 3) = Fq::one(f2);
    MatrixGroup bad = MatrixGroup::closure({s12, s34});
    CHECK(bad.order() == 4);
    auto rep2 = check_conditions(bad);
    CHECK(rep2.cond_i);
    CHECK(!rep2.cond_ii);
    CHECK(rep2.witnesses.size() == 2);
    CHECK(!rep2.common_line.has_value());

    MatrixGroup trivial = MatrixGroup::closure({SquareMatrix::identity(f2, 3)});
    auto rep3 = check_conditions(trivial);
    CHECK(!rep3.cond_i);
    CHECK(rep3.cond_ii);
}

TEST_CASE("lift_group on translation groups") {
    Field f2 = FieldSpec::get(2, 1);
    std::vector<ProjectiveClass> classes = {pr(SquareMatrix::identity(f2, 3)), pr(shift12(f2, 3, Fq::one(f2)))};
    LiftResult lr = lift_group(classes);
    CHECK(lr.lifted.order() == 2);
    CHECK(lr.extension_level == 1);
    for (const auto& [cls, mat] : lr.section) CHECK(pr(mat) == cls);
}

TEST_CASE("lift_group rejects wrong torsion") {
    Field f2 = FieldSpec::get(2, 1);
    SquareMatrix jordan = SquareMatrix::identity(f2, 3);
    jordan.at(0, 1) = Fq::one(f2);
    jordan.at(1, 2) = Fq::one(f2);
    MatrixGroup j = MatrixGroup::closure({jordan});
    std::vector<ProjectiveClass> classes;
    for (const auto& e : j.elements()) classes.push_back(pr(e));
    CHECK_THROWS_MATCHES(lift_group(classes), error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::not_recognized;
                         }));
}

TEST_CASE("lift_group on conjugated semidirect groups") {
    std::mt19937_64 rng(7);
    Field f4 = FieldSpec::get(2, 2);
    MatrixGroup grp = MatrixGroup::closure({shift12(f4, 3, Fq::one(f4)), diag_first(f4, 3, Fq::gen(f4))});
    for (int trial = 0; trial < 5; ++trial) {
        SquareMatrix r = random_invertible(f4, 3, rng);
        SquareMatrix rinv = r.inverse();
        std::vector<ProjectiveClass> classes;
        for (const auto& e : grp.elements()) classes.push_back(pr(r * e * rinv));
        LiftResult lr = lift_group(classes);
        CHECK(lr.lifted.order() == 12);
        // pr restricted to the lift is the identity on classes
        for (const auto& [cls, mat] : lr.section)
            CHECK(pr(mat) == (lr.extension_level == 1 ? cls : cls.embed_into(lr.lift_field)));
        // p-element lifts have exact order p and nilpotent shift
        for (const auto& mat : lr.lifted.elements()) {
            if (pr(mat).pow(2).is_identity() && !mat.is_identity()) {
                CHECK(mat.pow(2).is_identity());
            }
        }
    }
}

TEST_CASE("scalar rigidity of commuting lifts") {
    // for lifted p-elements A, B and C in the group with [CA] = [BC], CA = BC exactly
    std::mt19937_64 rng(13);
    Field f9 = FieldSpec::get(3, 2);
    SquareMatrix s1 = shift12(f9, 3, Fq::one(f9));
    SquareMatrix s2 = SquareMatrix::identity(f9, 3);
    s2.at(0, 2) = Fq::one(f9);
    MatrixGroup grp = MatrixGroup::closure({s1, s2});
    SquareMatrix r = random_invertible(f9, 3, rng);
    SquareMatrix rinv = r.inverse();
    std::vector<ProjectiveClass> classes;
    for (const auto& e : grp.elements()) classes.push_back(pr(r * e * rinv));
    LiftResult lr = lift_group(classes);
    const auto& elems = lr.lifted.elements();
    for (const auto& a : elems)
        for (const auto& c : elems) {
            SquareMatrix b = c * a * c.inverse();  // [CA] = [BC] with this B
            CHECK(lr.lifted.contains(b));
            CHECK(c * a == b * c);
        }
}
