#include "heightforge/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heightforge {

namespace {

Interval log_q(const Rational& q) { return q == 1 ? Interval::point(0.0) : log_enclosure(q); }

Interval log_plus_q(const Rational& q) { return abs(q) <= 1 ? Interval::point(0.0) : log_enclosure(Rational(abs(q))); }

Interval clamp_nonneg(const Interval& x) { return {std::max(0.0, x.lo), std::max(0.0, x.hi)}; }

Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Monic squarefree polynomial whose roots are the e-th roots of the beta_i.
Polynomial zeta_polynomial(const Family& fam) { return fam.factors().radical.monic().inflate(fam.e()); }

}  // namespace

Interval MKConstant::at(const Place& v) const {
    if (v.is_archimedean()) return archimedean;
    auto it = finite.find(v.prime());
    if (it == finite.end()) return Interval::point(0.0);
    return enclose(it->second) * log_prime(v.prime());
}

Rational MKConstant::coeff(Prime p) const {
    auto it = finite.find(p);
    return it == finite.end() ? Rational(0) : it->second;
}

void MKConstant::set(Prime p, const Rational& coeff) {
    if (coeff == 0)
        finite.erase(p);
    else
        finite[p] = coeff;
}

MKConstant mk_a(const Family& fam) {
    MKConstant a;
    const Rational inv_e(1, fam.e());
    for (const auto& [p, segs] : fam.factors().newton) a.set(p, inv_e * fam.factors().max_abs_root_valuation(p));
    Interval log3 = log_prime(3);
    a.archimedean = (log_plus_q(fam.factors().root_bound) + log3) * enclose(inv_e);
    return a;
}

MKConstant mk_b(const Family& fam) {
    MKConstant b;
    const int d = fam.d();
    Rational scale(d, static_cast<long>(fam.e()) * (d - 1));
    scale.canonicalize();
    b.archimedean = enclose(scale) * log_q(Rational(3, 2));
    return b;
}

MKConstant mk_mvt(const Family& fam) {
    if (fam.d() == fam.e()) throw DomainError("mean value constant requires d > e");
    MKConstant out;
    const FactorData& fd = fam.factors();
    const Polynomial Q = zeta_polynomial(fam);
    const int m = Q.degree();
    const Rational disc = discriminant(Q);
    const Rational alpha_max = fd.max_multiplicity;

    std::set<Prime> primes;
    for (Prime p : prime_factors(disc.get_num())) primes.insert(p);
    for (Prime p : prime_factors(disc.get_den())) primes.insert(p);
    for (const auto& [p, segs] : fd.newton) primes.insert(p);
    for (Prime p : primes) {
        // M_p bounds max(0, -v_p(zeta)) over all roots zeta.
        Rational Mp = fd.max_negative_root_valuation(p) / fam.e();
        Rational vdisc = padic_valuation(disc, p);
        Rational val = alpha_max * (std::max(Rational(0), vdisc) + Rational(m * (m - 1)) * Mp);
        out.set(p, val);
    }

    // |zeta| <= B^(1/e).
    const Rational inv_e(1, fam.e());
    Interval logB = log_plus_q(fd.root_bound) * enclose(inv_e);
    Interval log2 = log_prime(2);
    Interval mm1 = Interval::point(m - 1);
    Interval bracket = mm1 * log2 + mm1 * logB - log_enclosure(Rational(abs(disc))) + mm1 * mm1 * (log2 + logB);
    out.archimedean = clamp_nonneg(enclose(alpha_max) * bracket);
    return out;
}

MKConstant mk_c(const Family& fam) {
    MKConstant a = mk_a(fam), b = mk_b(fam);
    MKConstant e = fam.d() > fam.e() ? mk_mvt(fam) : MKConstant{};
    MKConstant c;
    std::set<Prime> primes;
    for (const auto& [p, v] : a.finite) primes.insert(p);
    for (const auto& [p, v] : e.finite) primes.insert(p);
    for (Prime p : primes) c.set(p, std::max(Rational(0), Rational(a.coeff(p) + e.coeff(p))));
    Interval ae = clamp_nonneg(a.archimedean + e.archimedean);
    Interval two_b_minus_a = b.archimedean * 2.0 - a.archimedean;
    c.archimedean = max(ae, two_b_minus_a) + log_prime(2);
    return c;
}

std::set<Place> exceptional_places(const Family& fam) {
    std::set<Place> out{Place::infinity()};
    for (const auto& [p, v] : mk_a(fam).finite) out.insert(Place::finite(p));
    if (fam.d() > fam.e())
        for (const auto& [p, v] : mk_mvt(fam).finite) out.insert(Place::finite(p));
    return out;
}

Rational pigeonhole_delta(const Family& fam) {
    if (fam.d() == fam.e()) throw DomainError("pigeonhole constant requires d > e");
    Rational a(1, fam.e());
    Rational b = Rational(1) - Rational(1, fam.e()) - Rational(1, fam.d());
    a.canonicalize();
    b.canonicalize();
    return std::min(a, b);
}

ConstantsReport height_bound_constants(const Family& fam, int bad_places) {
    if (bad_places < 0) throw DomainError("number of bad places must be nonnegative");
    if (!fam.monic()) throw DomainError("height bound constants require a monic family");
    ConstantsReport r;
    r.bad_places = bad_places;
    r.places_in_S = bad_places + 1;
    r.a = mk_a(fam);
    r.b = mk_b(fam);
    r.exceptional = exceptional_places(fam);
    const int d = fam.d();
    r.orbit_bound = 2 * ipow(Integer(d + 2), static_cast<unsigned long>(r.places_in_S));
    if (d == fam.e()) {
        r.not_computed_reason = "d = e: the family is z^d + bt, covered by the classical unicritical case";
        return r;
    }
    r.computed = true;
    r.mvt_e = mk_mvt(fam);
    r.c = mk_c(fam);
    r.delta = pigeonhole_delta(fam);

    ensure_mpfr_range();
    // log(2 d^B) enclosure, computed with MPFR since B can be large.
    mpfr_t lg, tmp;
    mpfr_inits2(128, lg, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(tmp, r.orbit_bound.get_mpz_t(), MPFR_RNDD);
    mpfr_set_ui(lg, static_cast<unsigned long>(d), MPFR_RNDD);
    mpfr_log(lg, lg, MPFR_RNDD);
    mpfr_mul(lg, lg, tmp, MPFR_RNDD);
    mpfr_set_ui(tmp, 2, MPFR_RNDD);
    mpfr_log(tmp, tmp, MPFR_RNDD);
    mpfr_add(lg, lg, tmp, MPFR_RNDD);  // lower bound of log(2 d^B)
    const double log_denom_lo = mpfr_get_d(lg, MPFR_RNDD);
    mpfr_clears(lg, tmp, static_cast<mpfr_ptr>(nullptr));

    const double ln10 = std::log(10.0);
    r.epsilon.delta = r.delta;
    r.epsilon.d = d;
    r.epsilon.orbit_bound = r.orbit_bound;
    const double log_delta = std::log(r.delta.get_d());
    r.epsilon.log10 = (log_delta - log_denom_lo) / ln10;
    r.epsilon.approx = std::exp(log_delta - log_denom_lo);

    // Per-place floor of the pairing: the larger of the good-place and bad-place constants.
    std::set<Prime> primes;
    for (const auto* k : {&r.a, &r.b, &r.mvt_e, &r.c})
        for (const auto& [p, v] : k->finite) primes.insert(p);
    Interval total = Interval::point(0.0);
    auto floor_at = [&](const Place& v) {
        Interval log2v = v.is_archimedean() ? log_prime(2) : Interval::point(0.0);
        Interval av = r.a.at(v), bv = r.b.at(v);
        Interval dv = max(av, bv) + log2v;
        Interval cv = r.c.at(v);
        return max(dv, cv);
    };
    total += floor_at(Place::infinity());
    for (Prime p : primes) total += floor_at(Place::finite(p));
    r.c_prime = total;
    // C = C' / (2 d^B); upper end rounded up through logs.
    double log_hi = std::log(total.hi) - log_denom_lo;
    r.C = {0.0, std::nextafter(std::exp(log_hi) * (1 + 1e-12), INFINITY)};
    if (r.C.hi == 0.0) r.C.hi = std::numeric_limits<double>::denorm_min();
    r.log10_C = log_hi / ln10;
    return r;
}

ResultantModel model_resultant(const Family& fam, const Rational& t) {
    if (!fam.monic()) {
        auto conj = try_monic_normalize(fam);
        if (!conj) throw DomainError("model resultant needs a monic family or a rational monic conjugate");
        return model_resultant(conj->family, t);
    }
    const int n = fam.form_degree(), e = fam.e(), d = fam.d();
    Polynomial A = fam.dehomogenized().primitive();
    const Integer& x = t.get_num();
    const Integer& y = t.get_den();
    std::vector<Rational> P(d + 1, Rational(0)), Q(d + 1, Rational(0));
    for (int j = 0; j <= n; ++j)
        P[static_cast<std::size_t>(e) * j] = A.coeff(j) * ipow(x, n - j) * ipow(y, j);
    Q[0] = A.leading() * ipow(y, n);
    ResultantModel m;
    m.resultant = sylvester_resultant(P, Q);
    m.leading_integer = to_integer(A.leading());
    return m;
}

ResultantBound resultant_bound_check(const Family& fam, const Rational& t) {
    const Family& g = fam.monic() ? fam : monic_normalize(fam).family;
    ResultantModel m = model_resultant(g, t);
    ResultantBound r;
    r.resultant = m.resultant;
    const int d = g.d(), n = g.form_degree();
    Integer H = std::max(Integer(abs(t.get_num())), Integer(t.get_den()));
    Integer lhs = abs(to_integer(m.resultant));
    Integer rhs = ipow(H, 2UL * d * n) * ipow(abs(m.leading_integer), 2UL * d);
    r.ok = lhs <= rhs;
    r.lhs = lhs == 1 ? Interval::point(0.0) : log_enclosure(lhs);
    r.rhs = rhs == 1 ? Interval::point(0.0) : log_enclosure(rhs);
    return r;
}

}  // namespace heightforge
