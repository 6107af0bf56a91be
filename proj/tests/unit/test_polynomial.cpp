#include "doctest.h"

#include "generators.hpp"
#include "heightforge/polynomial.hpp"
#include "heightforge/repro.hpp"

using namespace heightforge;

namespace {

Polynomial P(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Polynomial(v);
}

Polynomial product(const std::vector<Polynomial>& fs) {
    Polynomial r{Rational(1)};
    for (const auto& f : fs) r *= f;
    return r;
}

}  // namespace

TEST_CASE("evaluation and arithmetic") {
    Polynomial f = P({1, 0, 1});  // z^2 + 1
    CHECK(f(Rational(2)) == 5);
    CHECK(f.degree() == 2);
    CHECK(f.derivative() == P({0, 2}));
    CHECK((f * f) == P({1, 0, 2, 0, 1}));
    CHECK(f.inflate(2) == P({1, 0, 0, 0, 1}));
    CHECK(f.taylor_shift(Rational(1)) == P({2, 2, 1}));
    CHECK(P({0, 0}).is_zero());
    CHECK_THROWS(Polynomial().leading());
    Polynomial h{Rational(1, 2), Rational(3, 4)};
    CHECK(h.primitive() == P({2, 3}));
    CHECK(h.monic() == Polynomial{Rational(2, 3), Rational(1)});
}

TEST_CASE("division, gcd and squarefree decomposition") {
    Polynomial a = P({-1, 0, 0, 1}), b = P({-1, 1});
    auto [qt, r] = divmod(a, b);
    CHECK(qt == P({1, 1, 1}));
    CHECK(r.is_zero());
    CHECK(gcd(P({-1, 0, 1}), P({1, 2, 1})) == P({1, 1}));
    Polynomial f = P({-1, 1}) * P({-1, 1}) * P({2, 1}) * P({1, 0, 1});
    auto layers = squarefree_decomposition(f);
    REQUIRE(layers.size() == 2);
    CHECK(layers[0] == P({2, 1}) * P({1, 0, 1}));
    CHECK(layers[1] == P({-1, 1}));
}

TEST_CASE("irreducible factors") {
    CHECK(irreducible_factors(P({1, 0, 0, 0, 1})).size() == 1);
    auto f5 = irreducible_factors(P({1, 0, 0, 0, 0, 1}));
    REQUIRE(f5.size() == 2);
    CHECK(f5[0].degree() + f5[1].degree() == 5);
    auto f4 = irreducible_factors(P({4, 0, 0, 0, 1}));  // x^4 + 4 = (x^2+2x+2)(x^2-2x+2)
    CHECK(f4.size() == 2);
    CHECK(product(f4) == P({4, 0, 0, 0, 1}));
}

TEST_CASE("resultants and discriminants") {
    CHECK(resultant(P({-2, 1}), P({-3, 1})) == -1);
    CHECK(discriminant(P({3, 5, 1})) == 25 - 12);
    CHECK(discriminant(P({1, -3, 1})) == 5);
    std::vector<Rational> f{Rational(1), Rational(0)};  // the form Y against X: formal degree 1
    std::vector<Rational> g{Rational(0), Rational(1)};
    CHECK(abs(sylvester_resultant(f, g)) == 1);
    CHECK(determinant({{Rational(2), Rational(1)}, {Rational(1), Rational(1)}}) == 1);
}

TEST_CASE("property: division identity and gcd divides") {
    gen::Source src(31);
    for (int i = 0; i < 300; ++i) {
        Polynomial a = src.integer_poly(static_cast<int>(src.range(0, 6)), 20);
        Polynomial b = src.integer_poly(static_cast<int>(src.range(0, 4)), 20);
        auto [qt, r] = divmod(a, b);
        CHECK(qt * b + r == a);
        CHECK(r.degree() < b.degree());
        Polynomial c = src.integer_poly(static_cast<int>(src.range(1, 2)), 5);
        Polynomial g = gcd(a * c, b * c);
        CHECK(divmod(a * c, g).second.is_zero());
        CHECK(divmod(g, c.monic()).second.is_zero());
    }
}

TEST_CASE("property: factorizations rebuild the input") {
    gen::Source src(32);
    for (int i = 0; i < 100; ++i) {
        std::vector<Polynomial> parts;
        int k = static_cast<int>(src.range(1, 3));
        for (int j = 0; j < k; ++j) parts.push_back(src.integer_poly(static_cast<int>(src.range(1, 3)), 6));
        Polynomial f = product(parts);
        Polynomial monic = f.monic();
        Polynomial rebuilt{Rational(1)};
        auto layers = squarefree_decomposition(f);
        for (std::size_t m = 0; m < layers.size(); ++m)
            for (std::size_t r = 0; r <= m; ++r) rebuilt *= layers[m];
        CHECK(rebuilt == monic);
        Polynomial rad = product(layers);
        CHECK(product(irreducible_factors(rad)) == rad);
    }
}

TEST_CASE("property: resultant multiplicativity and root-product oracle") {
    gen::Source src(33);
    for (int i = 0; i < 200; ++i) {
        Polynomial f = src.integer_poly(static_cast<int>(src.range(1, 3)), 9);
        Polynomial g = src.integer_poly(static_cast<int>(src.range(1, 3)), 9);
        Polynomial h = src.integer_poly(static_cast<int>(src.range(1, 3)), 9);
        CHECK(resultant(f * g, h) == resultant(f, h) * resultant(g, h));
        std::vector<double> fd, hd;
        for (const auto& c : f.coeffs()) fd.push_back(c.get_d());
        for (const auto& c : h.coeffs()) hd.push_back(c.get_d());
        double exact = resultant(f, h).get_d();
        CHECK(resultant_by_roots(fd, hd) == doctest::Approx(exact).epsilon(1e-7).scale(1.0));
    }
}
