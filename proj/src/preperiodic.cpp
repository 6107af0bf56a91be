#include "heightforge/preperiodic.hpp"

#include <map>

#include "heightforge/constants.hpp"
#include "heightforge/heights.hpp"

namespace heightforge {

const char* to_string(OrbitEvent event) {
    switch (event) {
        case OrbitEvent::CycleFound: return "cycle";
        case OrbitEvent::EscapeCertified: return "escape";
        case OrbitEvent::BudgetExceeded: return "budget";
    }
    return "budget";
}

namespace {

struct EscapeTest {
    Rational radius;
    std::map<Prime, Rational> rho;

    EscapeTest(const Polynomial& f, const Rational& z) : radius(archimedean_escape_radius(f)) {
        for (const auto& v : green_support(f, z))
            if (!v.is_archimedean()) rho.emplace(v.prime(), finite_escape_exponent(f, v.prime()));
    }

    std::optional<Place> witness(const Rational& w) const {
        if (abs(w) > radius) return Place::infinity();
        if (w == 0) return std::nullopt;
        for (const auto& [p, r] : rho)
            if (Rational(-padic_valuation(w, p)) > r) return Place::finite(p);
        return std::nullopt;
    }
};

long bit_size(const Rational& q) {
    return static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
}

Certificate wandering_from_height(const Polynomial& f, const Rational& z) {
    Certificate c;
    c.evidence = "canonical height interval";
    for (double tol = 1e-2; tol > 1e-300; tol /= 4) {
        HeightResult h = canonical_height(f, z, tol);
        if (h.value.lo > 0) {
            c.hhat_lower = h.value.lo;
            return c;
        }
        if (h.method == HeightMethod::Exact) break;
    }
    throw BudgetExceeded("could not separate the canonical height from zero", Interval::point(0.0));
}

}  // namespace

std::optional<Place> escape_witness(const Polynomial& f, const Rational& w) { return EscapeTest(f, w).witness(w); }

OrbitRecord iterate_orbit(const Polynomial& f, const Rational& z, int max_steps, double height_cutoff) {
    if (max_steps < 1) throw DomainError("max_steps must be at least 1");
    if (f.degree() < 2) throw DomainError("dynamics needs a polynomial of degree at least 2");
    OrbitRecord rec;
    EscapeTest test(f, z);
    std::map<Rational, int> seen;
    Rational w = z;
    for (int n = 0; n <= max_steps; ++n) {
        rec.points.push_back(w);
        rec.naive_heights.push_back(naive_height(w).enclosure());
        auto [it, fresh] = seen.emplace(w, n);
        if (!fresh) {
            rec.event = OrbitEvent::CycleFound;
            rec.preperiod = it->second;
            rec.period = n - it->second;
            return rec;
        }
        if (rec.naive_heights.back().lo > height_cutoff) {
            if (auto place = test.witness(w)) {
                rec.event = OrbitEvent::EscapeCertified;
                rec.escape_place = place;
                rec.escape_step = n;
                return rec;
            }
        }
        if (n < max_steps) w = f(w);
    }
    rec.event = OrbitEvent::BudgetExceeded;
    return rec;
}

OrbitRecord iterate_orbit(const Family& fam, const Rational& t, const Rational& z, int max_steps,
                          double height_cutoff) {
    return iterate_orbit(fam.specialize(t), z, max_steps, height_cutoff);
}

Certificate certify_point(const Polynomial& f, const Rational& z, bool want_bound) {
    if (f.degree() < 2) throw DomainError("dynamics needs a polynomial of degree at least 2");
    EscapeTest test(f, z);
    std::map<Rational, int> seen;
    Rational w = z;
    for (int n = 0; n < 512 && bit_size(w) < (1 << 16); ++n) {
        auto [it, fresh] = seen.emplace(w, n);
        if (!fresh) {
            Certificate c;
            c.preperiodic = true;
            c.preperiod = it->second;
            c.period = n - it->second;
            c.evidence = "exact cycle";
            return c;
        }
        if (auto place = test.witness(w)) {
            Certificate c;
            c.witness = place;
            c.evidence = "escape at " + place->to_string() + " after " + std::to_string(n) + " steps";
            if (!want_bound) return c;
            for (double tol = 1e-3; tol > 1e-300; tol /= 16) {
                GreenResult g = local_green(f, *place, z, tol);
                if (g.value.lo > 0) {
                    c.hhat_lower = g.value.lo;
                    return c;
                }
            }
            break;
        }
        w = f(w);
    }
    return wandering_from_height(f, z);
}

Certificate certify_point(const Family& fam, const Rational& t, const Rational& z) {
    return certify_point(fam.specialize(t), z);
}

std::vector<PlaceObstruction> bad_place_obstruction(const Family& fam, const Rational& t) {
    MonicConjugate conj = monic_normalize(fam);
    std::set<Place> excluded = exceptional_places(conj.family);
    if (conj.alpha != 1)
        for (const auto& v : support(conj.alpha)) excluded.insert(v);
    std::vector<PlaceObstruction> out;
    if (t == 0) return out;
    const int e = fam.e();
    for (Prime p : prime_factors(t.get_den())) {
        if (excluded.count(Place::finite(p))) continue;
        PlaceObstruction o;
        o.p = p;
        o.valuation_t = padic_valuation(t, p);
        if (o.valuation_t % e != 0) {
            o.obstructed = true;
            o.reason = "e does not divide v_p(t) = " + std::to_string(o.valuation_t) +
                       ": |z|^e = |t| has no solution, so no rational preperiodic point exists";
        } else {
            o.forced_valuation = Rational(o.valuation_t / e);
            o.reason = "preperiodic points satisfy v_p(z) = " + std::to_string(o.valuation_t / e);
        }
        out.push_back(std::move(o));
    }
    return out;
}

bool obstructed(const std::vector<PlaceObstruction>& places) {
    for (const auto& o : places)
        if (o.obstructed) return true;
    return false;
}

CriterionResult power_criterion(int d, int m, const Rational& t) {
    if (d < 1 || m < 1) throw DomainError("d and m must be positive");
    if (t == 0) throw DomainError("t = 0 is degenerate for the power criterion");
    Integer x = t.get_num(), y = t.get_den();
    Integer xm, ym;
    mpz_pow_ui(xm.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
    mpz_pow_ui(ym.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(m));
    CriterionResult r;
    r.value = xm + ym;
    if (r.value == 0) throw DomainError("t is a pole of 1/(1 + t^m)");
    Integer a = abs(r.value), root;
    if (mpz_root(root.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(d))) {
        r.solvable = true;
        r.witness = root;
    }
    return r;
}

std::optional<Place> find_nonpower_place(const CoverAnalysis& cov, int e, const std::set<Place>& S,
                                         const Rational& t) {
    if (e < 1) throw DomainError("e must be positive");
    Rational phi = cov(t);
    if (phi == 0) throw DomainError("phi(t) = 0 has no finite valuation");
    for (Prime p : prime_factors(phi.get_den())) {
        if (S.count(Place::finite(p))) continue;
        long v = padic_valuation(phi, p);
        if (v < 0 && v % e != 0) return Place::finite(p);
    }
    return std::nullopt;
}

}  // namespace heightforge
