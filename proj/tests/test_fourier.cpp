#include <gtest/gtest.h>

#include <random>

#include "sato/fourier.hpp"

using namespace sato;

namespace {

Series poly(std::mt19937_64& rng, long deg) {
    std::vector<Series::Term> ts{{deg, CycScalar(1)}};
    for (long k = 0; k < deg; ++k) ts.emplace_back(k, CycScalar(static_cast<long>(rng() % 13) - 6));
    return Series::from_terms(ts);
}

template <class F>
bool throws_kind(F&& f, ErrorKind k) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == k;
    }
    return false;
}

}  // namespace

TEST(Fourier, LinearExamples) {
    auto res = lft_infty_infty({Series::z(), 0, 1}, 6);
    EXPECT_EQ(res.out.ram, 1);
    EXPECT_EQ(res.out.polypart, Series::z());
    EXPECT_EQ(res.out.residue, CycScalar(-1));
    EXPECT_TRUE(class_equal(res.out, RamifiedClass{1, Series::z(), CycScalar(0)}));

    res = lft_infty_infty({Series::parse("2*z"), 0, 1}, 6);
    EXPECT_EQ(res.out.polypart, Series::parse("1/2*z"));
    EXPECT_EQ(res.out.residue, CycScalar(-1));
}

TEST(Fourier, QuadraticIsRamified) {
    const auto res = lft_infty_infty({Series::parse("z^2"), 0, 1}, 8);
    EXPECT_EQ(res.out.ram, 2);
    EXPECT_EQ(res.out.polypart, Series::monomial(CycScalar(1), 1, 2));
    EXPECT_EQ(res.out.residue, CycScalar(make_rational(-3, 4)));
    // Residues live modulo (1/2)Z here.
    EXPECT_TRUE(class_equal(res.out, RamifiedClass{2, res.out.polypart, CycScalar(make_rational(-1, 4))}));
    EXPECT_FALSE(class_equal(res.out, RamifiedClass{2, res.out.polypart, CycScalar(0)}));
}

TEST(Fourier, IntermediatesSatisfyShiftRelation) {
    const auto res = lft_infty_infty({Series::parse("z^3 - z + 2"), 1, 3}, 10);
    const Series lhs = res.g + res.h;
    EXPECT_TRUE(agrees(lhs, Series(CycScalar(make_rational(4, 6)))));
}

TEST(Fourier, GhConsistencyExamples) {
    EXPECT_TRUE(gh_consistency({Series::z(), 0, 1}));
    EXPECT_TRUE(gh_consistency({Series::parse("z + z^2"), 0, 1}, 8));
    EXPECT_FALSE(gh_consistency({Series::parse("z + z^2"), 0, 1}, 8, make_rational(1, 4)));
    EXPECT_FALSE(gh_consistency({Series::z(), 0, 1}, 8, Rational(0)));
}

TEST(Fourier, GhConsistencyProperty) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const long deg = 1 + static_cast<long>(rng() % 4);
        const int n = 1 + static_cast<int>(rng() % 4);
        const int twist = static_cast<int>(rng() % static_cast<unsigned>(n));
        const int order = 4 + static_cast<int>(rng() % 7);
        const LftInput in{poly(rng, deg), twist, n};
        EXPECT_TRUE(gh_consistency(in, order)) << in.f << " twist " << twist << "/" << n << " order " << order;
        EXPECT_FALSE(gh_consistency(in, order, make_rational(deg - 1, 2 * deg))) << in.f;
    }
}

TEST(Fourier, LinearClosedForm) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        Rational a(static_cast<long>(rng() % 9) + 1, static_cast<long>(rng() % 5) + 1);
        if (rng() % 2) a = -a;
        const Rational b(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 3) + 1);
        const int n = 1 + static_cast<int>(rng() % 5);
        const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
        const Series f = Series::from_terms({{1, CycScalar(a)}, {0, CycScalar(b)}});
        // zeta^i ((zeta^i z - b) / a) expanded by hand.
        const Series expected = Series::from_terms(
            {{1, zeta_pow(n, 2 * i) * CycScalar(Rational(1 / a))}, {0, -zeta_pow(n, i) * CycScalar(Rational(b / a))}});
        const auto res = lft_infty_infty({f, i, n}, 4);
        EXPECT_EQ(res.out.ram, 1);
        EXPECT_TRUE(same_value(res.out.polypart, expected)) << f << " " << i << "/" << n;
        EXPECT_EQ(res.out.residue, CycScalar(-1));
    }
}

TEST(Fourier, MonomialSlope) {
    for (long r = 1; r <= 3; ++r) {
        const auto res = lft_infty_infty({Series::monomial(CycScalar(1), r), 0, 1}, 8);
        EXPECT_EQ(res.out.ram, r);
        EXPECT_EQ(res.out.polypart.leading().first, make_rational(1, r));
        EXPECT_EQ(res.out.polypart.leading().second, CycScalar(1));
        EXPECT_EQ(res.out.residue, CycScalar(make_rational(-(r + 1), 2 * r)));
    }
}

TEST(Fourier, KsConnectionTransform) {
    const auto classes = lft_of_ks(Series::parse("z^2"), 2, 8);
    ASSERT_EQ(classes.size(), 2u);
    EXPECT_EQ(classes[0].ram, 2);
    EXPECT_FALSE(same_value(classes[0].polypart, classes[1].polypart));
}

TEST(Fourier, Errors) {
    EXPECT_TRUE(throws_kind([] { lft_infty_infty({Series(3L), 0, 1}, 4); }, ErrorKind::NotInvertible));
    EXPECT_TRUE(throws_kind([] { lft_infty_infty({Series::parse("z^-1 + z"), 0, 1}, 4); }, ErrorKind::NotInvertible));
    EXPECT_TRUE(throws_kind([] { lft_infty_infty({Series::parse("2*z^2"), 0, 1}, 4); }, ErrorKind::NotInvertible));
    EXPECT_TRUE(throws_kind([] { lft_infty_infty({Series::z(), 2, 2}, 4); }, ErrorKind::InvalidArgument));
}
