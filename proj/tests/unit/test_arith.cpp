#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "heightforge/arith.hpp"

using namespace heightforge;

namespace {

Rational q(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("parse and print rationals") {
    CHECK(parse_rational("3/6") == q(1, 2));
    CHECK(parse_rational("-7") == q(-7));
    CHECK(parse_rational("-4/8") == q(-1, 2));
    CHECK_THROWS_AS(parse_rational("4/-8"), SpecError);
    CHECK(to_string(q(-5, 2)) == "-5/2");
    CHECK(to_string(q(3)) == "3/1");
    CHECK_THROWS_AS(parse_rational("1/0"), SpecError);
    CHECK_THROWS_AS(parse_rational("abc"), SpecError);
    CHECK_THROWS_AS(parse_rational(""), SpecError);
}

TEST_CASE("places") {
    CHECK(Place::parse("inf").is_archimedean());
    CHECK(Place::parse("7").prime() == 7);
    CHECK(Place::finite(5).to_string() == "5");
    CHECK_THROWS(Place::parse("6"));
    CHECK(Place::infinity() < Place::finite(2));
}

TEST_CASE("p-adic valuations") {
    CHECK(padic_valuation(q(18), 3) == 2);
    CHECK(padic_valuation(q(5, 8), 2) == -3);
    CHECK(padic_valuation(q(7, 9), 5) == 0);
    CHECK_THROWS_AS(padic_valuation(q(0), 3), DomainError);
}

TEST_CASE("support") {
    CHECK(support(q(12)) == std::vector<Place>{Place::finite(2), Place::finite(3)});
    CHECK(support(q(1)).empty());
    CHECK(support(q(10, 21)) ==
          std::vector<Place>{Place::finite(2), Place::finite(3), Place::finite(5), Place::finite(7)});
    CHECK_THROWS_AS(support(q(0)), DomainError);
    CHECK(prime_factors(Integer(1001)) == std::vector<Prime>{7, 11, 13});
}

TEST_CASE("log_plus") {
    CHECK(log_plus(q(1, 2), Place::infinity()).enclosure().contains(0.0));
    LocalValue a = log_plus(q(1, 3), Place::finite(3));
    REQUIRE(a.is_exact());
    CHECK(a.exact().coeff == 1);
    CHECK(a.exact().prime == 3);
    LocalValue b = log_plus(q(9), Place::finite(3));
    REQUIRE(b.is_exact());
    CHECK(b.exact().coeff == 0);
    CHECK(log_plus(q(7, 2), Place::infinity()).enclosure().contains(std::log(3.5)));
}

TEST_CASE("LogSum exact sign") {
    LogSum s;
    s.add(3, 2);
    s.add(-2, 3);  // 3 log 2 - 2 log 3 = log(8/9) < 0
    CHECK(s.sign() < 0);
    LogSum t;
    t.add(2, 2);
    t.add(-1, 5);  // log(4/5)
    CHECK(t.sign() < 0);
    CHECK(compare(s, t) > 0);  // 8/9 > 4/5
    CHECK((s - s).is_zero());
    CHECK(s.enclosure().contains(std::log(8.0 / 9.0)));
}

TEST_CASE("Newton polygon examples") {
    using V = std::optional<long>;
    std::vector<V> eisenstein{1, std::nullopt, 0};
    CHECK(newton_polygon(eisenstein) == std::vector<NewtonSegment>{{q(-1, 2), 2}});
    std::vector<V> units{0, std::nullopt, 0};
    CHECK(newton_polygon(units) == std::vector<NewtonSegment>{{q(0), 2}});
    std::vector<V> split{0, -1, 0};
    CHECK(newton_polygon(split) == std::vector<NewtonSegment>{{q(-1), 1}, {q(1), 1}});
    std::vector<V> empty{std::nullopt, std::nullopt};
    CHECK_THROWS_AS(newton_polygon(empty), DomainError);
}

TEST_CASE("property: valuation is additive and ultrametric") {
    gen::Source src(11);
    const std::vector<Prime> primes{2, 3, 5, 7};
    for (int i = 0; i < 2000; ++i) {
        Rational a = src.nonzero(500), b = src.nonzero(500);
        Prime p = src.pick(primes);
        CHECK(padic_valuation(Rational(a * b), p) == padic_valuation(a, p) + padic_valuation(b, p));
        Rational s = a + b;
        if (s != 0) CHECK(padic_valuation(s, p) >= std::min(padic_valuation(a, p), padic_valuation(b, p)));
    }
}

TEST_CASE("property: product formula") {
    gen::Source src(12);
    for (int i = 0; i < 1000; ++i) {
        Rational x = src.nonzero(100000);
        LogSum finite;
        Rational rebuilt = 1;
        for (const Place& v : support(x)) {
            long k = padic_valuation(x, v.prime());
            finite.add(-k, v.prime());
            Integer pk;
            mpz_ui_pow_ui(pk.get_mpz_t(), v.prime(), static_cast<unsigned long>(std::labs(k)));
            rebuilt *= k > 0 ? Rational(pk) : Rational(1) / Rational(pk);
        }
        CHECK(rebuilt == abs(x));
        Interval total = log_enclosure(Rational(abs(x))) + finite.enclosure();
        CHECK(total.contains(0.0));
    }
}

TEST_CASE("property: Newton slopes sum to the valuation drop") {
    gen::Source src(13);
    const std::vector<Prime> primes{2, 3, 5};
    for (int i = 0; i < 500; ++i) {
        int n = static_cast<int>(src.range(1, 6));
        Prime p = src.pick(primes);
        std::vector<std::optional<long>> vals;
        std::vector<long> raw;
        for (int j = 0; j <= n; ++j) {
            long c = src.range(-200, 200);
            if (j == n && c == 0) c = 1;
            if (j == 0 && c == 0) c = 3;
            raw.push_back(c);
            vals.push_back(c == 0 ? std::nullopt : std::optional<long>(padic_valuation(Integer(c), p)));
        }
        Rational total = 0;
        long length = 0;
        for (const auto& s : newton_polygon(vals)) {
            total += s.slope * s.length;
            length += s.length;
        }
        CHECK(length == n);
        CHECK(total == *vals.back() - *vals.front());
    }
}
