#include "heightforge/family.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace heightforge {

namespace {

FactorData compute_factor_data(const std::vector<Rational>& a) {
    FactorData fd;
    const int n = static_cast<int>(a.size()) - 1;
    std::set<Prime> primes;
    for (const auto& c : a) {
        if (c == 0) continue;
        for (Prime p : prime_factors(c.get_num())) primes.insert(p);
        for (Prime p : prime_factors(c.get_den())) primes.insert(p);
    }
    Polynomial F(a);
    for (Prime p : primes) {
        auto segs = newton_polygon(F, p);
        if (std::any_of(segs.begin(), segs.end(), [](const NewtonSegment& s) { return s.slope != 0; }))
            fd.newton.emplace(p, std::move(segs));
    }
    if (n == 1) {
        fd.root_bound = abs(a[0] / a[1]);
    } else {
        Rational m = 0;
        for (int j = 0; j < n; ++j) m = std::max(m, Rational(abs(a[j] / a[n])));
        fd.root_bound = 1 + m;
    }
    fd.multiplicity_factors = squarefree_decomposition(F);
    fd.radical = Polynomial{Rational(1)};
    for (std::size_t k = 0; k < fd.multiplicity_factors.size(); ++k) {
        if (fd.multiplicity_factors[k].degree() > 0) {
            fd.radical *= fd.multiplicity_factors[k];
            fd.max_multiplicity = static_cast<int>(k) + 1;
        }
    }
    return fd;
}

}  // namespace

Rational FactorData::max_negative_root_valuation(Prime p) const {
    auto it = newton.find(p);
    if (it == newton.end()) return 0;
    // Root valuations are the negated slopes; the steepest rises give the most negative.
    Rational worst = 0;
    for (const auto& s : it->second) worst = std::max(worst, Rational(s.slope));
    return worst;
}

Rational FactorData::max_abs_root_valuation(Prime p) const {
    auto it = newton.find(p);
    if (it == newton.end()) return 0;
    Rational worst = 0;
    for (const auto& s : it->second) worst = std::max(worst, Rational(abs(s.slope)));
    return worst;
}

Family::Family(std::vector<Rational> coeffs_leading_first, int e) : e_(e) {
    if (e < 2) throw DomainError("weight e must be at least 2");
    if (coeffs_leading_first.empty()) throw DomainError("empty form");
    if (coeffs_leading_first.size() == 1) throw DomainError("constant form gives a degenerate family");
    if (coeffs_leading_first.front() == 0)
        throw DomainError("leading coefficient a_{d/e} is zero: form divisible by Y");
    if (coeffs_leading_first.back() == 0) throw DomainError("constant coefficient a_0 is zero: form divisible by X");
    a_.assign(coeffs_leading_first.rbegin(), coeffs_leading_first.rend());
    for (auto& c : a_) c.canonicalize();
    d_ = e * form_degree();
    factors_ = compute_factor_data(a_);
}

Polynomial Family::specialize(const Rational& t) const {
    const int n = form_degree();
    std::vector<Rational> c(d_ + 1, Rational(0));
    Rational tp = 1;  // t^(n - j) built from j = n downward
    for (int j = n; j >= 0; --j) {
        c[static_cast<std::size_t>(e_) * j] = a_[j] * tp;
        tp *= t;
    }
    return Polynomial(std::move(c));
}

std::vector<Rational> Family::form_leading_first() const { return {a_.rbegin(), a_.rend()}; }

std::string Family::describe() const {
    std::ostringstream os;
    os << "F = [";
    auto lf = form_leading_first();
    for (std::size_t i = 0; i < lf.size(); ++i) os << (i ? ", " : "") << lf[i].get_str();
    os << "], e = " << e_ << ", d = " << d_;
    return os.str();
}

Family build_family(const std::vector<Rational>& coeffs_leading_first, int e) {
    return Family(coeffs_leading_first, e);
}

Polynomial specialize(const Family& fam, const Rational& t) { return fam.specialize(t); }

std::optional<Rational> rational_root(const Rational& q, int k) {
    if (k < 1) throw DomainError("root index must be positive");
    if (sgn(q) < 0 && k % 2 == 0) return std::nullopt;
    Integer num = abs(q.get_num()), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), k)) return std::nullopt;
    Rational r(sgn(q) < 0 ? Integer(-rn) : rn, rd);
    r.canonicalize();
    return r;
}

std::optional<MonicConjugate> try_monic_normalize(const Family& fam) {
    if (fam.monic()) return MonicConjugate{fam, Rational(1)};
    auto alpha = rational_root(fam.leading(), fam.d() - 1);
    if (!alpha) return std::nullopt;
    const int n = fam.form_degree();
    std::vector<Rational> b(n + 1);
    for (int j = 0; j <= n; ++j) {
        // a'_j = alpha^(1 - e j) a_j
        long ex = 1 - static_cast<long>(fam.e()) * j;
        Rational s;
        Integer num = alpha->get_num(), den = alpha->get_den();
        Integer pn, pd;
        unsigned long ax = static_cast<unsigned long>(ex < 0 ? -ex : ex);
        mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), ax);
        mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), ax);
        s = ex >= 0 ? Rational(pn, pd) : Rational(pd, pn);
        s.canonicalize();
        b[j] = fam.form()[j] * s;
    }
    std::vector<Rational> lf(b.rbegin(), b.rend());
    return MonicConjugate{Family(lf, fam.e()), *alpha};
}

MonicConjugate monic_normalize(const Family& fam) {
    auto r = try_monic_normalize(fam);
    if (!r)
        throw NormalizationUnavailable("leading coefficient " + fam.leading().get_str() + " is not a rational " +
                                       std::to_string(fam.d() - 1) + "-th power");
    return *r;
}

Rational CoverAnalysis::operator()(const Rational& t) const {
    Rational den = denom(t);
    if (den == 0) throw DomainError("t = " + t.get_str() + " is a pole of the cover");
    return numer(t) / den;
}

CoverAnalysis analyze_cover(const Polynomial& numer, const Polynomial& denom) {
    if (denom.is_zero()) throw DomainError("cover denominator is zero");
    if (denom.degree() == 0 && numer.degree() <= 0) throw DomainError("constant map is not a cover");
    CoverAnalysis cov;
    Polynomial g = gcd(numer, denom);
    cov.numer = divmod(numer, g).first;
    cov.denom = divmod(denom, g).first;
    // Normalize so the denominator is monic.
    Rational lead = cov.denom.leading();
    cov.numer *= Rational(1 / lead);
    cov.denom *= Rational(1 / lead);
    if (cov.denom.degree() == 0 && cov.numer.degree() <= 0) throw DomainError("constant map is not a cover");

    auto layers = squarefree_decomposition(cov.denom);
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (layers[k].degree() <= 0) continue;
        for (auto& f : irreducible_factors(layers[k])) {
            Pole pole;
            pole.count = f.degree();
            pole.factor = std::move(f);
            pole.order = static_cast<int>(k) + 1;
            cov.poles.push_back(std::move(pole));
        }
    }
    int inf_order = cov.numer.degree() - cov.denom.degree();
    if (inf_order > 0) {
        Pole pole;
        pole.at_infinity = true;
        pole.order = inf_order;
        pole.count = 1;
        cov.poles.push_back(std::move(pole));
    }
    return cov;
}

int required_poles(int e) {
    if (e < 2) throw DomainError("e-generality needs e >= 2");
    if (e == 2) return 5;
    if (e == 3) return 4;
    return 3;
}

EGenerality is_e_general(const CoverAnalysis& cov, int e) {
    EGenerality r;
    r.required = required_poles(e);
    for (const auto& pole : cov.poles) {
        if (pole.at_infinity) continue;
        if (std::gcd(pole.order, e) == 1) r.qualifying += pole.count;
    }
    r.general = r.qualifying >= r.required;
    return r;
}

}  // namespace heightforge
