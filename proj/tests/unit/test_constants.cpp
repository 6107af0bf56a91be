#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "generators.hpp"
#include "heightforge/constants.hpp"
#include "heightforge/heights.hpp"

using namespace heightforge;

namespace {

Rational q(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

bool encloses(const Interval& i, double x, double slack = 1e-12) { return i.lo - slack <= x && x <= i.hi + slack; }

// Complex roots of a polynomial with double coefficients, constant term first.
std::vector<std::complex<double>> roots(const Polynomial& p) {
    const int n = p.degree();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -Rational(p.coeff(i) / p.leading()).get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> s(m);
    std::vector<std::complex<double>> out;
    for (const auto& r : s.eigenvalues()) out.push_back(r);
    return out;
}

}  // namespace

TEST_CASE("mk_a") {
    MKConstant quad = mk_a(build_family({1, 1}, 2));
    CHECK(quad.finite.empty());
    CHECK(encloses(quad.archimedean, 0.5 * std::log(3.0)));
    MKConstant sextic = mk_a(build_family({1, -3, 1}, 3));
    CHECK(sextic.finite.empty());
    CHECK(encloses(sextic.archimedean, std::log(12.0) / 3));
    MKConstant five = mk_a(build_family({1, 5}, 2));
    CHECK(five.coeff(5) == q(1, 2));
    CHECK(five.coeff(3) == 0);
}

TEST_CASE("mk_b") {
    MKConstant b2 = mk_b(build_family({1, 1}, 2));
    CHECK(b2.finite.empty());
    CHECK(encloses(b2.archimedean, std::log(1.5)));
    MKConstant b6 = mk_b(build_family({1, -3, 1}, 3));
    CHECK(encloses(b6.archimedean, 0.4 * std::log(1.5)));
    CHECK(b6.at(Place::finite(7)).hi == 0.0);
}

TEST_CASE("mk_mvt, exceptional places and delta") {
    CHECK_THROWS_AS(mk_mvt(build_family({1, 1}, 3)), DomainError);
    CHECK(exceptional_places(build_family({1, 1}, 2)) == std::set<Place>{Place::infinity()});
    CHECK(exceptional_places(build_family({1, 4}, 2)) == std::set<Place>{Place::infinity(), Place::finite(2)});
    Family sextic = build_family({1, -3, 1}, 3);
    std::set<Place> exc = exceptional_places(sextic);
    CHECK(exc.count(Place::infinity()));
    for (const auto& [p, c] : mk_mvt(sextic).finite) CHECK(exc.count(Place::finite(p)));
    CHECK(pigeonhole_delta(sextic) == q(1, 3));
    CHECK(pigeonhole_delta(build_family({1, 0, 1}, 2)) == q(1, 4));
    CHECK(pigeonhole_delta(build_family({1, 0, 0, 1}, 2)) == q(1, 3));
    CHECK_THROWS_AS(pigeonhole_delta(build_family({1, 1}, 2)), DomainError);
}

TEST_CASE("height bound constants") {
    Family quartic = build_family({1, 0, 1}, 2);
    ConstantsReport r0 = height_bound_constants(quartic, 0);
    REQUIRE(r0.computed);
    CHECK(r0.orbit_bound == 12);
    CHECK(r0.epsilon.delta == q(1, 4));
    CHECK(r0.epsilon.approx == doctest::Approx(0.25 / (2 * std::pow(4.0, 12))));
    CHECK(r0.C.hi > 0.0);
    CHECK(r0.C.hi == doctest::Approx(std::pow(10.0, r0.log10_C)));
    ConstantsReport r1 = height_bound_constants(quartic, 1);
    CHECK(r1.orbit_bound == 72);
    CHECK(r1.epsilon.log10 < r0.epsilon.log10);
    CHECK(r1.log10_C < r0.log10_C);
    ConstantsReport cubic = height_bound_constants(build_family({1, 1}, 3), 2);
    CHECK(!cubic.computed);
    CHECK(!cubic.not_computed_reason.empty());
    CHECK_THROWS_AS(height_bound_constants(build_family({2, 1}, 2), 0), DomainError);
}

TEST_CASE("model resultant") {
    Family quad = build_family({1, 1}, 2);
    CHECK(abs(model_resultant(quad, q(1, 3)).resultant) == 81);
    CHECK(abs(model_resultant(quad, q(2)).resultant) == 1);
    CHECK(abs(model_resultant(quad, q(1, 4)).resultant) == 256);
    ResultantBound eq = resultant_bound_check(quad, q(1, 3));
    CHECK(eq.ok);
    CHECK(encloses(eq.lhs, 4 * std::log(3.0)));
    CHECK(encloses(eq.rhs, 4 * std::log(3.0)));
    ResultantBound seven = resultant_bound_check(quad, q(7));
    CHECK(seven.ok);
    CHECK(seven.lhs.hi == 0.0);
    CHECK(encloses(seven.rhs, 4 * std::log(7.0)));
    CHECK(resultant_bound_check(build_family({1, -3, 1}, 3), q(1, 2)).ok);
}

TEST_CASE("property: resultant bound and monotone epsilon") {
    gen::Source src(61);
    const std::vector<Family> fams{build_family({1, 1}, 2), build_family({1, -3, 1}, 3), build_family({1, 0, 1}, 2),
                                   build_family({32, 2, 1}, 3)};
    for (int i = 0; i < 400; ++i) CHECK(resultant_bound_check(src.pick(fams), src.nonzero(1000)).ok);
    Family quartic = build_family({1, 0, 1}, 2);
    double prev = 1.0;
    for (int s = 0; s < 4; ++s) {
        ConstantsReport r = height_bound_constants(quartic, s);
        CHECK(r.epsilon.log10 <= prev);
        prev = r.epsilon.log10;
    }
}

TEST_CASE("property: escape region of a_v") {
    gen::Source src(62);
    const std::vector<Family> fams{build_family({1, 1}, 2), build_family({1, -3, 1}, 3), build_family({1, 5}, 2),
                                   build_family({1, -5, 4}, 2)};
    const std::vector<Prime> primes{2, 3, 5};
    int tested = 0;
    for (int i = 0; i < 10000; ++i) {
        const Family& fam = src.pick(fams);
        MKConstant a = mk_a(fam);
        Rational t = src.nonzero(60);
        Polynomial f = fam.specialize(t);
        if (src.coin()) {
            Prime p = src.pick(primes);
            Integer pk;
            mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(src.range(0, 4)));
            Rational z(src.range(1, 40), pk);
            z.canonicalize();
            Rational lhs = -padic_valuation(z, p);
            Rational rhs = Rational(std::max(0L, -padic_valuation(t, p)), fam.e()) + a.coeff(p);
            if (lhs > rhs) {
                ++tested;
                CHECK(padic_valuation(f(z), p) <= padic_valuation(z, p));
            }
        } else {
            Rational z = src.rational(3000) * src.range(1, 30);
            if (z == 0) continue;
            double lhs = std::log(std::abs(z.get_d()));
            double rhs = std::max(0.0, std::log(std::abs(t.get_d()))) / fam.e() + a.archimedean.hi + 1e-12;
            if (lhs > rhs) {
                ++tested;
                CHECK(abs(f(z)) >= abs(z));
                // The same region keeps the Green function within b of log|z|.
                GreenResult g = local_green(f, Place::infinity(), z, 1e-9);
                double b = mk_b(fam).archimedean.hi;
                CHECK(g.value.lo <= lhs + b + 1e-9);
                CHECK(g.value.hi >= lhs - b - 1e-9);
            }
        }
    }
    CHECK(tested > 2000);
}

TEST_CASE("property: mean value constant, finite places") {
    // F = (X - 1)(X - 4): e-th roots of the beta are +-1, +-2.
    Family fam = build_family({1, -5, 4}, 2);
    MKConstant e = mk_mvt(fam);
    Polynomial f1 = fam.specialize(q(1));
    const std::vector<Rational> zetas{q(1), q(-1), q(2), q(-2)};
    gen::Source src(63);
    const std::vector<Prime> primes{2, 3, 5, 7};
    for (int i = 0; i < 5000; ++i) {
        Rational z = src.rational(300);
        if (std::find(zetas.begin(), zetas.end(), z) != zetas.end()) continue;
        Prime p = src.pick(primes);
        Rational best = padic_valuation(Rational(z - zetas[0]), p);
        for (const auto& zeta : zetas) best = std::max(best, Rational(padic_valuation(Rational(z - zeta), p)));
        CHECK(Rational(padic_valuation(f1(z), p)) <= best + e.coeff(p));
    }
}

TEST_CASE("property: mean value constant, archimedean place") {
    const std::vector<Family> fams{build_family({1, -3, 1}, 3), build_family({1, -5, 4}, 2), build_family({1, 0, 1}, 2),
                                   build_family({1, 2, 1}, 2)};
    gen::Source src(64);
    for (const Family& fam : fams) {
        MKConstant e = mk_mvt(fam);
        Polynomial f1 = fam.specialize(q(1));
        std::vector<std::pair<std::complex<double>, int>> zetas;
        const auto& layers = fam.factors().multiplicity_factors;
        for (std::size_t k = 0; k < layers.size(); ++k) {
            if (layers[k].degree() < 1) continue;
            for (const auto& r : roots(layers[k].inflate(fam.e()))) zetas.emplace_back(r, static_cast<int>(k + 1));
        }
        for (int i = 0; i < 2000; ++i) {
            Rational z = src.rational(200) * src.range(1, 4);
            double fz = std::abs(f1(z).get_d());
            if (fz == 0.0) continue;
            double best = 1e300;
            for (const auto& [zeta, alpha] : zetas)
                best = std::min(best, alpha * std::log(std::abs(std::complex<double>(z.get_d()) - zeta)));
            CHECK(std::log(fz) >= best - e.archimedean.hi - 1e-9);
        }
    }
}
