#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homcube/laurent.hpp"
#include "homcube/snf.hpp"

#include <random>

using namespace homcube;
using namespace homcube::rings;

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, const Ring& r, int max_terms) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<std::int64_t> expo(-3, 3);
    std::uniform_int_distribution<int> coeff(-5, 5);
    LaurentPoly f = lp_zero(r.variables);
    int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        Exponent e(static_cast<size_t>(r.variables));
        for (auto& a : e) a = expo(rng);
        f = lp_add(r, f, lp_monomial(r, e, Scalar(coeff(rng))));
    }
    return f;
}

} // namespace

TEST_CASE("laurent product collects and cancels") {
    Ring r = Ring::integers(1);
    LaurentPoly one_minus_x = lp_parse(r, "1-x1");
    LaurentPoly geom = lp_parse(r, "1+x1+x1^2");
    LaurentPoly prod = lp_mul(r, one_minus_x, geom);
    CHECK(prod == lp_parse(r, "1-x1^3"));
    CHECK(lp_mul(r, one_minus_x, lp_one(r)) == one_minus_x);
    CHECK(lp_mul(r, one_minus_x, lp_zero(1)).is_zero());
}

TEST_CASE("laurent ring axioms on random triples") {
    std::mt19937_64 rng(7);
    for (const Ring& r : {Ring::integers(2), Ring::integers_mod(6, 2), Ring::rationals(2)}) {
        for (int trial = 0; trial < 40; ++trial) {
            LaurentPoly f = random_poly(rng, r, 4);
            LaurentPoly g = random_poly(rng, r, 4);
            LaurentPoly h = random_poly(rng, r, 4);
            CHECK(lp_mul(r, f, lp_mul(r, g, h)) == lp_mul(r, lp_mul(r, f, g), h));
            CHECK(lp_mul(r, f, lp_add(r, g, h)) ==
                  lp_add(r, lp_mul(r, f, g), lp_mul(r, f, h)));
            CHECK(lp_mul(r, f, g) == lp_mul(r, g, f));
        }
    }
}

TEST_CASE("specialize is a ring homomorphism") {
    Ring r = Ring::integers(2);
    std::mt19937_64 rng(11);
    std::vector<Scalar> point{Scalar(2), Scalar(Rat(3, 2))};
    Ring q = Ring::rationals();
    for (int trial = 0; trial < 40; ++trial) {
        LaurentPoly f = random_poly(rng, r, 4);
        LaurentPoly g = random_poly(rng, r, 4);
        Ring rq = Ring::rationals(2);
        Scalar lhs = lp_specialize(rq, lp_mul(r, f, g), point);
        Scalar rhs = mul(q, lp_specialize(rq, f, point), lp_specialize(rq, g, point));
        CHECK(lhs == rhs);
        CHECK(lp_specialize(rq, lp_add(r, f, g), point) ==
              add(q, lp_specialize(rq, f, point), lp_specialize(rq, g, point)));
    }
    CHECK(lp_specialize(Ring::rationals(2), lp_parse(r, "x1+x2"), {Scalar(2), Scalar(3)}) ==
          Scalar(5));
    LaurentPoly cancel = lp_parse(r, "x1*x1^-1");
    CHECK(lp_specialize(Ring::rationals(2), cancel, point) == Scalar(1));
    CHECK(lp_specialize(Ring::rationals(2), lp_parse(r, "1-x1"), {Scalar(1), Scalar(5)}) ==
          Scalar(0));
}

TEST_CASE("monomial unit detection") {
    Ring q = Ring::rationals(1);
    auto hit = lp_is_monomial_unit(q, lp_parse(q, "-2*x1"));
    REQUIRE(hit.has_value());
    CHECK(hit->first == Exponent{1});
    CHECK(hit->second == Scalar(-2));

    Ring z = Ring::integers(1);
    CHECK(!lp_is_monomial_unit(z, lp_parse(z, "-2*x1")).has_value());
    CHECK(!lp_is_monomial_unit(z, lp_parse(z, "1+x1")).has_value());
    CHECK(lp_is_monomial_unit(z, lp_parse(z, "-x1^3")).has_value());
}

TEST_CASE("print/parse round trip is the identity") {
    std::mt19937_64 rng(23);
    for (const Ring& r : {Ring::integers(3), Ring::rationals(2), Ring::integers_mod(7, 1)}) {
        for (int trial = 0; trial < 60; ++trial) {
            LaurentPoly f = random_poly(rng, r, 5);
            CHECK(lp_parse(r, lp_to_string(f)) == f);
        }
    }
    Ring r1 = Ring::rationals(1);
    LaurentPoly f = lp_monomial(r1, {2}, Scalar(Rat(3, 4)));
    CHECK(lp_to_string(f) == "3/4*x1^2");
    CHECK(lp_parse(r1, "3/4*x1^2") == f);
}

TEST_CASE("scalar arithmetic mod m uses canonical representatives") {
    Ring r = Ring::integers_mod(6);
    CHECK(add(r, Scalar(4), Scalar(5)) == Scalar(3));
    CHECK(mul(r, Scalar(4), Scalar(5)) == Scalar(2));
    CHECK(is_unit(r, Scalar(5)));
    CHECK(!is_unit(r, Scalar(4)));
    CHECK(mul(r, inv(r, Scalar(5)), Scalar(5)) == Scalar(1));
    CHECK(!r.is_pid());
    CHECK(Ring::integers_mod(5).is_field());
}

TEST_CASE("smith normal form with certified transforms") {
    Ring z = Ring::integers();
    Matrix a = Matrix::zero(2, 2);
    a.set(z, 0, 0, lp_constant(z, Scalar(2)));
    a.set(z, 0, 1, lp_constant(z, Scalar(4)));
    a.set(z, 1, 0, lp_constant(z, Scalar(6)));
    a.set(z, 1, 1, lp_constant(z, Scalar(8)));
    homalg::SnfResult snf = homalg::smith_normal_form(z, a);
    REQUIRE(snf.divisors.size() == 2);
    CHECK(snf.divisors[0] == Scalar(2));
    CHECK(snf.divisors[1] == Scalar(4));
    Matrix uav = rings::mat_mul(z, rings::mat_mul(z, snf.u, a), snf.v);
    CHECK(uav == snf.s);

    homalg::SnfResult id = homalg::smith_normal_form(z, Matrix::identity(z, 3));
    CHECK(id.rank == 3);
    homalg::SnfResult zero = homalg::smith_normal_form(z, Matrix::zero(2, 3));
    CHECK(zero.rank == 0);
}

TEST_CASE("snf randomized: U A V = S, unit determinants, divisor chain") {
    std::mt19937_64 rng(5);
    Ring z = Ring::integers();
    std::uniform_int_distribution<int> dim(1, 8), entry(-9, 9);
    for (int trial = 0; trial < 30; ++trial) {
        int m = dim(rng), n = dim(rng);
        Matrix a = Matrix::zero(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                a.set(z, i, j, lp_constant(z, Scalar(entry(rng))));
        homalg::SnfResult snf = homalg::smith_normal_form(z, a);
        CHECK(rings::mat_mul(z, rings::mat_mul(z, snf.u, a), snf.v) == snf.s);
        Scalar du = homalg::mat_det(z, snf.u), dv = homalg::mat_det(z, snf.v);
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        for (size_t i = 1; i < snf.divisors.size(); ++i) {
            Int prev = numerator(snf.divisors[i - 1]);
            Int cur = numerator(snf.divisors[i]);
            CHECK(cur % prev == 0);
        }
    }
}

TEST_CASE("snf rejects composite moduli") {
    Ring r = Ring::integers_mod(6);
    CHECK_THROWS_AS(homalg::smith_normal_form(r, Matrix::identity(r, 2)), UnsupportedError);
}

TEST_CASE("linear solve over Z decides divisibility") {
    Ring z = Ring::integers();
    Matrix a = Matrix::zero(1, 1);
    a.set(z, 0, 0, lp_constant(z, Scalar(2)));
    auto sol = homalg::solve_linear(z, a, {Scalar(4)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Scalar(2));
    CHECK(!homalg::solve_linear(z, a, {Scalar(3)}).has_value());

    // kernel of (2 -1) over Z
    Matrix b = Matrix::zero(1, 2);
    b.set(z, 0, 0, lp_constant(z, Scalar(2)));
    b.set(z, 0, 1, lp_constant(z, Scalar(-1)));
    auto ker = homalg::kernel_basis(z, b);
    REQUIRE(ker.size() == 1);
    CHECK(add(z, mul(z, Scalar(2), ker[0][0]), mul(z, Scalar(-1), ker[0][1])) == Scalar(0));
}
