#include <random>

#include <gtest/gtest.h>

#include "sato/connections.hpp"

using namespace sato;

namespace {

Series zpow(long k, long c = 1) { return Series::monomial(CycScalar(c), k); }

Series random_poly(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> c(-6, 6);
    std::vector<Series::Term> ts;
    for (long e = lo; e <= hi; ++e) ts.emplace_back(e, CycScalar(c(rng)));
    return Series::from_terms(ts);
}

// Unit 1 + c1/z + c2/z^2 + ... truncated, with its inverse by the geometric series.
std::pair<Series, Series> random_unit(std::mt19937_64& rng, long order) {
    std::uniform_int_distribution<long> c(-4, 4);
    std::vector<Series::Term> ts{{0, CycScalar(1)}};
    for (long e = -1; e >= -3; --e) ts.emplace_back(e, CycScalar(c(rng)));
    Series u = Series::from_terms(ts, 1, -order);
    Series x = Series(1L) - u;  // O(1/z)
    Series inv(1L), p(1L);
    for (long k = 1; k <= order; ++k) {
        p = p * x;
        inv = inv + p;
    }
    return {u, inv};
}

// Product of elementary polynomial matrices, with its inverse.
std::pair<SeriesMatrix, SeriesMatrix> random_unimodular(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> c(-3, 3), e(0, 2);
    SeriesMatrix g = SeriesMatrix::identity(n), gi = SeriesMatrix::identity(n);
    for (int step = 0; step < 4; ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const long cc = c(rng), ee = e(rng);
        SeriesMatrix el = SeriesMatrix::identity(n), eli = SeriesMatrix::identity(n);
        el(i, j) = zpow(ee, cc);
        eli(i, j) = zpow(ee, -cc);
        g = g * el;
        gi = eli * gi;
    }
    return {g, gi};
}

}  // namespace

TEST(Connections, ScalarGauge) {
    const Series lambda = zpow(2, 3);
    Connection c = rank_one(lambda);
    SeriesMatrix g(1, 1), gi(1, 1);
    g(0, 0) = zpow(1);
    gi(0, 0) = zpow(-1);
    EXPECT_EQ(gauge_transform(c, g, gi).M0(0, 0), lambda + zpow(-1));
    EXPECT_EQ(gauge_transform(c, SeriesMatrix::identity(1), SeriesMatrix::identity(1)).M0, c.M0);
}

TEST(Connections, GaugeRejectsNonInverse) {
    Connection c = rank_one(zpow(1));
    SeriesMatrix g(1, 1), gi(1, 1);
    g(0, 0) = zpow(1);
    gi(0, 0) = zpow(1);
    try {
        (void)gauge_transform(c, g, gi);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotInverse);
    }
}

TEST(Connections, DftDiagonalizesUmm) {
    SeriesMatrix m(2, 2);
    m(0, 1) = zpow(2);
    m(1, 0) = zpow(2);
    SeriesMatrix g = to_series(ScalarMatrix{{CycScalar(1), CycScalar(1)}, {CycScalar(1), CycScalar(-1)}});
    SeriesMatrix gi = to_series(inverse(ScalarMatrix{{CycScalar(1), CycScalar(1)}, {CycScalar(1), CycScalar(-1)}}));
    Connection d = gauge_transform(Connection(m), g, gi);
    EXPECT_EQ(d.M0(0, 0), zpow(2));
    EXPECT_EQ(d.M0(1, 1), zpow(2, -1));
    EXPECT_TRUE(d.M0(0, 1).is_exact_zero());
    EXPECT_TRUE(d.M0(1, 0).is_exact_zero());
}

TEST(Connections, OneDimClassExamples) {
    OneDimClass a = one_dim_class(zpow(1) + zpow(-1, 5));
    EXPECT_EQ(a.polypart, zpow(1));
    EXPECT_EQ(a.residue, CycScalar(5));
    EXPECT_TRUE(class_equal(a, OneDimClass{zpow(1), CycScalar(0)}));
    OneDimClass b = one_dim_class(zpow(-2));
    EXPECT_TRUE(b.polypart.is_exact_zero());
    EXPECT_TRUE(b.residue.is_zero());
    try {
        (void)one_dim_class(Series::parse("z + O(z^-1)"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientPrecision);
    }
    EXPECT_NO_THROW((void)one_dim_class(Series::parse("z + 2*z^-1 + O(z^-2)")));
}

TEST(Connections, MultisetEquality) {
    std::vector<OneDimClass> a{{zpow(1), CycScalar(0)}, {zpow(1, -1), CycScalar(0)}};
    std::vector<OneDimClass> b{{zpow(1, -1), CycScalar(1)}, {zpow(1), CycScalar(0)}};
    EXPECT_TRUE(class_multiset_equal(a, b));
    std::vector<OneDimClass> c{{zpow(1), CycScalar(0)}};
    std::vector<OneDimClass> d{{zpow(1), CycScalar(make_rational(1, 2))}};
    EXPECT_FALSE(class_multiset_equal(c, d));
    EXPECT_FALSE(class_multiset_equal(a, c));
}

TEST(Connections, CrossOrderClassEquality) {
    // zeta_5 viewed inside Q(zeta_10) is the same class.
    OneDimClass a{Series(zeta_pow(5, 1)) * zpow(1), CycScalar(0)};
    OneDimClass b{Series(zeta_pow(10, 2)) * zpow(1), CycScalar(3)};
    EXPECT_TRUE(class_equal(a, b));
}

TEST(Connections, DirectSumRoundTrip) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        std::vector<Connection> cs;
        std::vector<OneDimClass> expected;
        for (int k = 0; k < 4; ++k) {
            Series l = random_poly(rng, -3, 3);
            cs.push_back(rank_one(l));
            expected.push_back(one_dim_class(l));
        }
        Connection sum = direct_sum(cs);
        EXPECT_EQ(sum.dim(), 4u);
        auto got = diagonal_classes(sum);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(got[k] == expected[k]);
    }
}

TEST(Connections, ClassInvariantUnderScalarGauge) {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<long> mdist(-3, 3);
    for (int t = 0; t < 30; ++t) {
        const long order = 8;
        Series lambda = random_poly(rng, -1, 3);
        const long m = mdist(rng);
        auto [u, ui] = random_unit(rng, order);
        Series g = u.shifted(m), gi = ui.shifted(-m);
        SeriesMatrix G(1, 1), Gi(1, 1);
        G(0, 0) = g;
        Gi(0, 0) = gi;
        Series moved = gauge_transform(rank_one(lambda), G, Gi).M0(0, 0);
        OneDimClass a = one_dim_class(lambda), b = one_dim_class(moved);
        EXPECT_TRUE(class_equal(a, b));
        EXPECT_EQ(b.residue - a.residue, CycScalar(m));
    }
}

TEST(Connections, ClassicalLimitExamples) {
    const Series f = Series::parse("z^3 - 2*z + 1");
    SeriesMatrix m1(1, 1);
    m1(0, 0) = f;
    EXPECT_EQ(classical_limit(Connection::hbar_form(m1)), BiPoly({{1, Series(1L)}, {0, -f}}));
    SeriesMatrix m(2, 2);
    m(0, 1) = zpow(2);
    m(1, 0) = zpow(2);
    BiPoly curve = classical_limit(Connection::hbar_form(m));
    EXPECT_EQ(curve.str(), "y^2 - z^4");
}

// Oracle: permutation expansion of the determinant.
TEST(Connections, FaddeevLeVerrierMatchesLeibniz) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 3;
        SeriesMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = random_poly(rng, -1, 2);
        BiPoly p = characteristic_polynomial(a);
        // evaluate det(y I - a) at y = 0, 1, 2, -1 via Leibniz and compare
        for (long y : {0L, 1L, 2L, -1L}) {
            SeriesMatrix b(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) b(i, j) = (i == j ? Series(y) : Series()) - a(i, j);
            std::vector<std::size_t> perm{0, 1, 2};
            Series det;
            do {
                int inv = 0;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
                Series term(inv % 2 ? -1L : 1L);
                for (std::size_t i = 0; i < n; ++i) term = term * b(i, perm[i]);
                det = det + term;
            } while (std::next_permutation(perm.begin(), perm.end()));
            Series val;
            Series yp(1L);
            for (long d = 0; d <= p.degree(); ++d) {
                val = val + p.coeff(d) * yp;
                yp = yp * Series(y);
            }
            EXPECT_EQ(val, det);
        }
    }
}

TEST(Connections, ClassicalLimitGaugeInvariant) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 3;
        SeriesMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = random_poly(rng, 0, 2);
        auto [g, gi] = random_unimodular(rng, n);
        Connection c = Connection::hbar_form(a);
        Connection moved = gauge_transform(c, g, gi);
        EXPECT_EQ(classical_limit(moved), classical_limit(c));
    }
}
