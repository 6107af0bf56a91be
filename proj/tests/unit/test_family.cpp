#include "doctest.h"

#include <string>

#include "generators.hpp"
#include "heightforge/family.hpp"

using namespace heightforge;

namespace {

Polynomial P(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Polynomial(v);
}

}  // namespace

TEST_CASE("build_family") {
    Family cubic = build_family({1, 1}, 3);
    CHECK(cubic.d() == 3);
    CHECK(cubic.specialize(Rational(5)) == P({5, 0, 0, 1}));
    Family sextic = build_family({1, -3, 1}, 3);
    CHECK(sextic.d() == 6);
    CHECK(sextic.form_leading_first() == std::vector<Rational>{1, -3, 1});
    CHECK_THROWS_AS(build_family({1, 1}, 1), DomainError);
    CHECK_THROWS_AS(build_family({1}, 2), DomainError);
    CHECK_THROWS_AS(build_family({1, 0}, 2), DomainError);
    try {
        build_family({0, 1}, 2);
        FAIL("expected a rejection");
    } catch (const DomainError& err) {
        CHECK(std::string(err.what()).find("divisible") != std::string::npos);
    }
}

TEST_CASE("specialize") {
    Family quad = build_family({1, 1}, 2);
    CHECK(specialize(quad, Rational(-1)) == P({-1, 0, 1}));
    CHECK(specialize(quad, Rational(0)) == P({0, 0, 1}));
    Family sextic = build_family({1, -3, 1}, 3);
    CHECK(specialize(sextic, Rational(2)) == P({4, 0, 0, -6, 0, 0, 1}));
}

TEST_CASE("factor data") {
    Family sextic = build_family({1, -3, 1}, 3);
    CHECK(sextic.factors().root_bound == 4);
    CHECK(sextic.factors().max_multiplicity == 1);
    Family shifted = build_family({1, 4}, 2);  // beta = -4
    CHECK(shifted.factors().root_bound == 4);
    CHECK(shifted.factors().max_abs_root_valuation(2) == 2);
    CHECK(shifted.factors().max_negative_root_valuation(2) == 0);
    Family small = build_family({4, 1}, 2);  // beta = -1/4
    CHECK(small.factors().max_negative_root_valuation(2) == 2);
    Family repeated = build_family({1, 2, 1}, 2);  // (X + Y)^2
    CHECK(repeated.factors().max_multiplicity == 2);
    CHECK(repeated.factors().radical == P({1, 1}));
}

TEST_CASE("monic normalization") {
    Family quad = build_family({1, 1}, 2);
    MonicConjugate id = monic_normalize(quad);
    CHECK(id.alpha == 1);
    CHECK(id.family.form() == quad.form());
    MonicConjugate c = monic_normalize(build_family({4, 1}, 3));
    CHECK(c.alpha == 2);
    CHECK(c.family.specialize(Rational(1)) == P({2, 0, 0, 1}));
    CHECK_THROWS_AS(monic_normalize(build_family({2, 1}, 3)), NormalizationUnavailable);
    CHECK(!try_monic_normalize(build_family({2, 1}, 3)));
    CHECK(rational_root(Rational(-8, 27), 3) == Rational(-2, 3));
    CHECK(!rational_root(Rational(-4), 2));
}

TEST_CASE("property: monic conjugate intertwines") {
    gen::Source src(41);
    const std::vector<std::pair<std::vector<Rational>, int>> forms{
        {{4, 1}, 3}, {{Rational(1, 8), 3, 2}, 2}, {{-27, 1, 5}, 2}, {{9, 0, -2}, 3}, {{1, 1}, 2}};
    for (int i = 0; i < 300; ++i) {
        const auto& [coeffs, e] = src.pick(forms);
        Family f = build_family(coeffs, e);
        auto conj = try_monic_normalize(f);
        if (!conj) continue;
        Rational t = src.rational(50), z = src.rational(50);
        CHECK(conj->family.monic());
        CHECK(conj->family.specialize(t)(conj->alpha * z) == conj->alpha * f.specialize(t)(z));
        CHECK(f.specialize(t).degree() == f.d());
    }
}

TEST_CASE("cover analysis") {
    CoverAnalysis c5 = analyze_cover(P({1}), P({1, 0, 0, 0, 0, 1}));
    REQUIRE(c5.poles.size() == 2);
    int total = 0;
    for (const auto& p : c5.poles) {
        CHECK(p.order == 1);
        CHECK(!p.at_infinity);
        total += p.count;
    }
    CHECK(total == 5);
    CHECK(c5(Rational(1)) == Rational(1, 2));
    CHECK_THROWS_AS(c5(Rational(-1)), DomainError);
    CoverAnalysis c4 = analyze_cover(P({1}), P({1, 0, 0, 0, 1}));
    REQUIRE(c4.poles.size() == 1);
    CHECK(c4.poles[0].count == 4);
    CoverAnalysis ident = analyze_cover(P({0, 1}), P({1}));
    REQUIRE(ident.poles.size() == 1);
    CHECK(ident.poles[0].at_infinity);
    CHECK(ident.poles[0].order == 1);
    CHECK_THROWS_AS(analyze_cover(P({3}), P({2})), DomainError);
    CoverAnalysis reduced = analyze_cover(P({-1, 0, 1}), P({-1, 1}));  // (t^2-1)/(t-1) = t+1
    CHECK(reduced.denom.degree() == 0);
}

TEST_CASE("e-generality") {
    CHECK(required_poles(2) == 5);
    CHECK(required_poles(3) == 4);
    CHECK(required_poles(4) == 3);
    CHECK(required_poles(9) == 3);
    CHECK(is_e_general(analyze_cover(P({1}), P({1, 0, 0, 0, 0, 1})), 2).general);
    EGenerality g4 = is_e_general(analyze_cover(P({1}), P({1, 0, 0, 0, 1})), 2);
    CHECK(!g4.general);
    CHECK(g4.qualifying == 4);
    CHECK(is_e_general(analyze_cover(P({1}), P({1, 0, 0, 1})), 5).general);
    CHECK(!is_e_general(analyze_cover(P({1}), P({0, 0, 1})), 2).general);
}

TEST_CASE("property: adding a coprime pole keeps e-generality") {
    gen::Source src(42);
    for (int i = 0; i < 150; ++i) {
        Polynomial denom{Rational(1)};
        int k = static_cast<int>(src.range(1, 6));
        for (int j = 0; j < k; ++j) denom *= P({src.range(-20, 20), 1});
        Polynomial numer = P({src.range(1, 5)});
        int e = static_cast<int>(src.range(2, 5));
        CoverAnalysis before = analyze_cover(numer, denom);
        long c = 0;
        do c = src.range(30, 90); while (denom(Rational(-c)) == 0);
        CoverAnalysis after = analyze_cover(numer, denom * P({c, 1}));
        EGenerality a = is_e_general(before, e), b = is_e_general(after, e);
        CHECK(b.qualifying >= a.qualifying);
        if (a.general) CHECK(b.general);
    }
}
