#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "heightforge/interval.hpp"

using namespace heightforge;

namespace {

// log q to 256 bits, as an oracle independent of the enclosure code path.
double log_256(const mpq_class& x) {
    mpfr_t a;
    mpfr_init2(a, 256);
    mpfr_set_q(a, x.get_mpq_t(), MPFR_RNDN);
    mpfr_log(a, a, MPFR_RNDN);
    double r = mpfr_get_d(a, MPFR_RNDN);
    mpfr_clear(a);
    return r;
}

}  // namespace

TEST_CASE("basic interval operations") {
    Interval a{1.0, 2.0}, b{-3.0, 0.5};
    Interval s = a + b;
    CHECK(s.lo <= -2.0);
    CHECK(s.hi >= 2.5);
    Interval p = a * b;
    CHECK(p.contains(-6.0));
    CHECK(p.contains(1.0));
    CHECK(max(a, b).contains(Interval{1.0, 2.0}));
    CHECK(hull(a, b).contains(Interval{-3.0, 2.0}));
    CHECK((-a).contains(Interval{-2.0, -1.0}));
}

TEST_CASE("log enclosures") {
    CHECK(log_prime(2).contains(std::log(2.0)));
    CHECK(log_prime(3).width() < 1e-15);
    CHECK(log_enclosure(mpq_class(1, 3)).contains(-std::log(3.0)));
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
    Interval l = log_enclosure(big);
    CHECK(l.contains(400 * std::log(10.0)));
}

TEST_CASE("property: enclosures contain high precision values") {
    gen::Source src(21);
    for (int i = 0; i < 2000; ++i) {
        mpq_class x(src.range(1, 1000000), src.range(1, 1000000));
        x.canonicalize();
        mpq_class y = src.rational(1000);
        CHECK(enclose(x).contains(x.get_d()));
        Interval l = log_enclosure(x);
        CHECK(l.contains(log_256(x)));
        mpq_class prod = x * y, sum = x + y;
        CHECK((enclose(x) * enclose(y)).contains(enclose(prod)));
        CHECK((enclose(x) + enclose(y)).contains(enclose(sum)));
    }
}

TEST_CASE("MpInterval arithmetic") {
    ensure_mpfr_range();
    MpInterval a(mpq_class(1, 3), 200), b(mpq_class(-2, 7), 200);
    Interval s = (a + b).to_interval();
    CHECK(s.contains(1.0 / 3 - 2.0 / 7));
    Interval p = (a * b).to_interval();
    CHECK(p.contains(-2.0 / 21));
    CHECK(!a.contains_zero());
    MpInterval z(mpq_class(0), 64);
    CHECK(z.contains_zero());
    CHECK(round_down(a.mag_lower()) <= 1.0 / 3);
    CHECK(round_up(a.mag_upper()) >= 1.0 / 3);
}
