#include "doctest.h"

#include "homcube/cubes.hpp"
#include "test_support.hpp"

using namespace homcube;
using namespace homcube::cubes;
using homalg::FreeComplex;
using homalg::GradedMap;
using rings::Matrix;
using rings::Ring;
using rings::Scalar;

namespace {

// closed form of [B:A] by counting pairs (b, x) in B x (B\A) with b < x
int incidence_pairs(Mask b, Mask a) {
    if (!subset(a, b)) return 0;
    int kappa = 0;
    for (int x = 0; x < 16; ++x) {
        if (!((b & ~a) & (Mask{1} << x))) continue;
        kappa += card(b & ((Mask{1} << x) - 1));
    }
    return parity_sign(kappa);
}

FreeComplex two_term(const Ring& r, int c0, int c1, const Matrix& d0) {
    GradedMap diff;
    diff.degree = 1;
    if (!d0.is_zero()) diff.blocks[0] = d0;
    std::map<int, int> ranks;
    if (c0) ranks[0] = c0;
    if (c1) ranks[1] = c1;
    return FreeComplex::make(r, ranks, diff);
}

} // namespace

TEST_CASE("total incidence base cases") {
    CHECK(total_incidence(0b11, 0b11) == 1);
    CHECK(total_incidence(0b01, 0b10) == 0);  // A not inside B
    CHECK(total_incidence(0b11, 0b00) == -1); // [{1,2}: empty]
    CHECK(total_incidence(0b111, 0b101) == -1);
    for (Mask b = 0; b < 256; ++b) CHECK(total_incidence(b, b) == 1);
}

TEST_CASE("incidence closed forms agree with the face definition") {
    for (Mask b = 0; b < (Mask{1} << 8); ++b) {
        for (Mask a = b;; a = (a - 1) & b) {
            CHECK(total_incidence(b, a) == incidence_pairs(b, a));
            if (a == 0) break;
        }
        // [B:empty] = (-1)^{b(b-1)/2}
        int cb = card(b);
        CHECK(total_incidence(b, 0) == parity_sign(static_cast<long long>(cb) * (cb - 1) / 2));
        // [B : B - z] = (-1)^{#elements of B below z}
        for (int z = 0; z < 8; ++z) {
            Mask bit = Mask{1} << z;
            if (!(b & bit)) continue;
            CHECK(total_incidence(b, b & ~bit) == parity_sign(card(b & (bit - 1))));
        }
    }
}

TEST_CASE("simplicial sign identity") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int trial = 0; trial < 500; ++trial) {
        Mask a = static_cast<Mask>(rng() & 0x3F);
        int x = pick(rng), y = pick(rng);
        if (x == y) continue;
        Mask bx = Mask{1} << x, by = Mask{1} << y;
        if ((a & bx) || (a & by)) continue;
        int lhs = total_incidence(a | bx | by, a | bx) * total_incidence(a | bx, a);
        int rhs = total_incidence(a | bx | by, a | by) * total_incidence(a | by, a);
        CHECK(lhs == -rhs);
    }
}

TEST_CASE("incidence products change by a sign independent of the middle set") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        Mask b = static_cast<Mask>(rng() & 0xFF);
        Mask a = static_cast<Mask>(rng()) & b;
        int z = std::uniform_int_distribution<int>(0, 7)(rng);
        Mask zbit = Mask{1} << z;
        if (b & zbit) continue;
        std::optional<int> eps;
        Mask diffm = b & ~a;
        for (Mask t = 0;; t = (t - diffm) & diffm) {
            Mask s = a | t;
            int plain = total_incidence(b, s) * total_incidence(s, a);
            int lifted = total_incidence(b | zbit, s | zbit) * total_incidence(s | zbit, a | zbit);
            REQUIRE(plain != 0);
            int ratio = lifted / plain;
            if (!eps) eps = ratio;
            CHECK(*eps == ratio);
            if (t == diffm) break;
        }
        CHECK(total_incidence(b | zbit, a | zbit) == *eps * total_incidence(b, a));
    }
}

TEST_CASE("totalisation reproduces the mapping cone matrix") {
    Ring z = Ring::integers();
    std::mt19937_64 rng(29);
    FreeComplex c = testing::random_complex(rng, z, 2, 2);
    GradedMap f1 = testing::random_cochain_map(rng, c);
    SpecialCubeData cube = trivial_cube(c, {f1});
    NDiagram diag = expand_special(cube);
    TotalisedComplex tot = totalise(diag);

    // blocks: (empty,empty) = d, ({1},empty) = f1, ({1},{1}) = -d
    for (const auto& [l, offsets] : tot.offsets) {
        Matrix m = tot.complex.d(l);
        auto next = tot.offsets.find(l + 1);
        if (next == tot.offsets.end()) continue;
        Matrix d_block = mat_extract(m, next->second.at(0), offsets.at(0), c.rank(l + 1), c.rank(l));
        CHECK(d_block == c.d(l));
        const Matrix* f_block = f1.block(l);
        Matrix got_f = mat_extract(m, next->second.at(1), offsets.at(0), c.rank(l), c.rank(l));
        CHECK(got_f == (f_block ? *f_block : Matrix::zero(c.rank(l), c.rank(l))));
        Matrix got_minus_d = mat_extract(m, next->second.at(1), offsets.at(1), c.rank(l), c.rank(l - 1));
        CHECK(got_minus_d == rings::mat_neg(z, c.d(l - 1)));
    }
    CHECK(homalg::check_complex(tot.complex));
}

TEST_CASE("totalisation reproduces the square matrix with the corner homotopy") {
    Ring z = Ring::integers();
    std::mt19937_64 rng(31);
    FreeComplex c = testing::random_complex(rng, z, 3, 2);
    // two commuting maps with an exact commutator witness: f1 random, f2 = f1,
    // homotopy H = 0 is the degenerate case; exercise nonzero H via derive_cube
    // elsewhere. Here check the printed sign pattern with generic blocks.
    GradedMap f1 = testing::random_cochain_map(rng, c);
    GradedMap f2 = testing::random_cochain_map(rng, c);
    GradedMap h = testing::random_graded_map(rng, c, -1);

    SpecialCubeData cube;
    cube.n = 2;
    cube.complex = c;
    cube.f = {f1, f2};
    if (!h.is_zero()) cube.h[0b11] = h;
    NDiagram diag = expand_special(cube);
    TotalisedComplex tot = totalise(diag);

    auto block = [&](int l, Mask bmask, Mask amask, int rows, int cols) {
        Matrix m = tot.complex.d(l);
        return mat_extract(m, tot.offsets.at(l + 1).at(bmask), tot.offsets.at(l).at(amask), rows,
                           cols);
    };
    auto as_matrix = [&](const GradedMap& g, int l, int rows, int cols) {
        const Matrix* b = g.block(l);
        return b ? *b : Matrix::zero(rows, cols);
    };
    for (const auto& [l, offsets] : tot.offsets) {
        if (!tot.offsets.count(l + 1)) continue;
        CHECK(block(l, 0b00, 0b00, c.rank(l + 1), c.rank(l)) == c.d(l));
        CHECK(block(l, 0b01, 0b00, c.rank(l), c.rank(l)) == as_matrix(f1, l, c.rank(l), c.rank(l)));
        CHECK(block(l, 0b10, 0b00, c.rank(l), c.rank(l)) == as_matrix(f2, l, c.rank(l), c.rank(l)));
        CHECK(block(l, 0b01, 0b01, c.rank(l), c.rank(l - 1)) == rings::mat_neg(z, c.d(l - 1)));
        CHECK(block(l, 0b10, 0b10, c.rank(l), c.rank(l - 1)) == rings::mat_neg(z, c.d(l - 1)));
        CHECK(block(l, 0b11, 0b00, c.rank(l - 1), c.rank(l)) ==
              rings::mat_neg(z, as_matrix(h, l, c.rank(l - 1), c.rank(l))));
        CHECK(block(l, 0b11, 0b01, c.rank(l - 1), c.rank(l - 1)) ==
              rings::mat_neg(z, as_matrix(f2, l - 1, c.rank(l - 1), c.rank(l - 1))));
        CHECK(block(l, 0b11, 0b10, c.rank(l - 1), c.rank(l - 1)) ==
              as_matrix(f1, l - 1, c.rank(l - 1), c.rank(l - 1)));
        CHECK(block(l, 0b11, 0b11, c.rank(l - 1), c.rank(l - 2)) == c.d(l - 2));
    }
}

TEST_CASE("d_squared detects the wrong homotopy sign") {
    Ring z5 = Ring::integers_mod(5);
    std::mt19937_64 rng(37);
    FreeComplex c = testing::random_complex(rng, z5, 3, 2);
    FreeComplex d = c;
    GradedMap g0 = testing::random_graded_map(rng, c, -1);
    GradedMap alpha = homalg::gm_identity(c);
    // g = id + dG + Gd so that dG + Gd = g - id by construction
    GradedMap g = homalg::gm_add(z5, homalg::gm_identity(c),
                                 homalg::gm_add(z5, homalg::gm_compose(z5, c.diff, g0),
                                                homalg::gm_compose(z5, g0, c.diff)));
    auto hs = testing::random_commuting_family(rng, c, 2);
    SpecialCubeData der = derive_cube(c, d, g, alpha, g0, hs);
    CHECK(verify_special(der).ok);
    CHECK(is_cube(expand_special(der)));

    if (const GradedMap* h = der.homotopy(0b11); h && !h->is_zero()) {
        SpecialCubeData wrong = der;
        wrong.h[0b11] = homalg::gm_neg(z5, *h);
        bool nonzero_commutator =
            !homalg::gm_sub(z5, homalg::gm_compose(z5, der.f[0], der.f[1]),
                            homalg::gm_compose(z5, der.f[1], der.f[0]))
                 .is_zero();
        if (nonzero_commutator) {
            CHECK(!verify_special(wrong).ok);
            CHECK(!is_cube(expand_special(wrong)));
        }
    }
}

TEST_CASE("verify_special flags a commutator obstruction at S = {1,2}") {
    Ring z = Ring::integers();
    // C = Z^2 in degree 0; f1, f2 non-commuting automorphisms
    FreeComplex c = FreeComplex::make(z, {{0, 2}}, homalg::gm_zero(1));
    GradedMap f1, f2;
    f1.degree = f2.degree = 0;
    Matrix m1 = Matrix::zero(2, 2), m2 = Matrix::zero(2, 2);
    m1.set(z, 0, 0, rings::lp_constant(z, Scalar(1)));
    m1.set(z, 0, 1, rings::lp_constant(z, Scalar(1)));
    m1.set(z, 1, 1, rings::lp_constant(z, Scalar(1)));
    m2.set(z, 0, 0, rings::lp_constant(z, Scalar(1)));
    m2.set(z, 1, 0, rings::lp_constant(z, Scalar(1)));
    m2.set(z, 1, 1, rings::lp_constant(z, Scalar(1)));
    f1.blocks[0] = m1;
    f2.blocks[0] = m2;

    CHECK_THROWS_AS(trivial_cube(c, {f1, f2}), ContractViolation);

    SpecialCubeData raw;
    raw.n = 2;
    raw.complex = c;
    raw.f = {f1, f2};
    SpecialReport report = verify_special(raw);
    CHECK(!report.ok);
    REQUIRE(report.first_failure.has_value());
    CHECK(*report.first_failure == 0b11);
}

TEST_CASE("trivial cube with commuting maps passes everywhere") {
    Ring z = Ring::integers();
    std::mt19937_64 rng(41);
    FreeComplex c = testing::random_complex(rng, z, 3, 3);
    auto fs = testing::random_commuting_family(rng, c, 3);
    SpecialCubeData cube = trivial_cube(c, fs);
    SpecialReport report = verify_special(cube);
    CHECK(report.ok);
    CHECK(is_cube(expand_special(cube)));

    // identity maps work for any n
    SpecialCubeData idcube = trivial_cube(c, {homalg::gm_identity(c), homalg::gm_identity(c)});
    CHECK(verify_special(idcube).ok);
}

TEST_CASE("derived cube with alpha=beta=id, G=0 is the trivial cube") {
    Ring z5 = Ring::integers_mod(5);
    std::mt19937_64 rng(43);
    FreeComplex d = testing::random_complex(rng, z5, 3, 2);
    auto hs = testing::random_commuting_family(rng, d, 3);
    SpecialCubeData der =
        derive_cube(d, d, homalg::gm_identity(d), homalg::gm_identity(d), homalg::gm_zero(-1), hs);
    SpecialCubeData triv = trivial_cube(d, hs);
    CHECK(der.h.empty());
    REQUIRE(der.f.size() == triv.f.size());
    for (size_t k = 0; k < der.f.size(); ++k)
        CHECK(homalg::gm_sub(z5, der.f[k], triv.f[k]).is_zero());
}

TEST_CASE("filtration is a subcomplex chain with shifted quotients") {
    Ring z5 = Ring::integers_mod(5);
    std::mt19937_64 rng(47);
    FreeComplex c = testing::random_complex(rng, z5, 3, 2);
    auto fs = testing::random_commuting_family(rng, c, 2);
    GradedMap g0 = testing::random_graded_map(rng, c, -1);
    GradedMap g = homalg::gm_add(z5, homalg::gm_identity(c),
                                 homalg::gm_add(z5, homalg::gm_compose(z5, c.diff, g0),
                                                homalg::gm_compose(z5, g0, c.diff)));
    SpecialCubeData der = derive_cube(c, c, g, homalg::gm_identity(c), g0, fs);
    NDiagram diag = expand_special(der);
    int n = diag.n;

    FiltrationResult full = filtration(diag, 0);
    TotalisedComplex tot = totalise(diag);
    CHECK(full.sub.ranks == tot.complex.ranks);
    for (const auto& [l, m] : tot.complex.diff.blocks) CHECK(full.sub.d(l) == m);

    FiltrationResult top = filtration(diag, n + 1);
    CHECK(top.sub.is_zero_complex());

    FiltrationResult last = filtration(diag, n);
    FreeComplex expected = homalg::shift(diag.at((Mask{1} << n) - 1), -n);
    CHECK(last.sub.ranks == expected.ranks);
    for (const auto& [l, rk] : expected.ranks) CHECK(last.sub.d(l) == expected.d(l));

    // each Tot_k is a subcomplex of Tot_{k-1}: differential blocks restricted
    // to high-cardinality summands agree, and quotients match shifted sums
    for (int k = 0; k <= n; ++k) {
        FiltrationResult fk = filtration(diag, k);
        CHECK(homalg::check_complex(fk.sub));
        // quotient ranks = sum over |A| = k of shifted ranks
        for (const auto& [l, rk] : fk.quotient.ranks) {
            int expect = 0;
            for (Mask a = 0; a < (Mask{1} << n); ++a)
                if (card(a) == k) expect += diag.at(a).rank(l - k);
            CHECK(rk == expect);
        }
        // quotient differential is (-1)^k times the direct sum differential
        for (const auto& [l, m] : fk.quotient.diff.blocks) {
            Matrix direct = Matrix::zero(m.rows, m.cols);
            int roff = 0, coff = 0;
            for (Mask a = 0; a < (Mask{1} << n); ++a) {
                if (card(a) != k) continue;
                const FreeComplex& fa = diag.at(a);
                Matrix da = fa.d(l - k);
                Matrix signed_da = (k % 2 == 0) ? da : rings::mat_neg(z5, da);
                rings::mat_paste(z5, direct, signed_da, roff, coff);
                roff += fa.rank(l + 1 - k);
                coff += fa.rank(l - k);
            }
            CHECK(m == direct);
        }
    }
}

TEST_CASE("derived cubes satisfy d_squared = 0 over Z and Z/5, n up to 4") {
    for (const Ring& ring : {Ring::integers(), Ring::integers_mod(5)}) {
        std::mt19937_64 rng(ring.kind == rings::RingKind::Integers ? 53 : 59);
        for (int n = 1; n <= 4; ++n) {
            for (int trial = 0; trial < 5; ++trial) {
                FreeComplex d = testing::random_complex(rng, ring, 3, 2);
                GradedMap g0 = testing::random_graded_map(rng, d, -1, -1, 1);
                GradedMap g = homalg::gm_add(
                    ring, homalg::gm_identity(d),
                    homalg::gm_add(ring, homalg::gm_compose(ring, d.diff, g0),
                                   homalg::gm_compose(ring, g0, d.diff)));
                auto hs = testing::random_commuting_family(rng, d, n);
                SpecialCubeData der = derive_cube(d, d, g, homalg::gm_identity(d), g0, hs);
                CHECK(d_squared(expand_special(der)).empty());
            }
        }
    }
}
