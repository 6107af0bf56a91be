#include "heightforge/arith.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>

namespace heightforge {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw SpecError("empty rational");
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    Integer n, dd;
    if (num.empty() || n.set_str(num, 10) != 0) throw SpecError("malformed rational: " + s);
    if (den.empty() || den[0] == '-' || den[0] == '+' || dd.set_str(den, 10) != 0)
        throw SpecError("malformed rational: " + s);
    if (dd == 0) throw SpecError("zero denominator: " + s);
    Rational q(n, dd);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer to_integer(const Rational& q) {
    if (q.get_den() != 1) throw DomainError("not an integer: " + to_string(q));
    return q.get_num();
}

Place Place::finite(Prime p) {
    if (!is_prime(p)) throw DomainError("not a prime: " + std::to_string(p));
    return Place(p);
}

Place Place::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinity();
    Prime p = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw SpecError("malformed place: " + std::string(text));
    if (!is_prime(p)) throw SpecError("place is not a prime: " + std::string(text));
    return Place(p);
}

Prime Place::prime() const {
    if (is_archimedean()) throw DomainError("archimedean place has no prime");
    return prime_;
}

std::string Place::to_string() const {
    return is_archimedean() ? std::string("inf") : std::to_string(prime_);
}

bool is_prime(Prime p) {
    if (p < 2) return false;
    // GMP's test is BPSW-based and exact below 2^64.
    return mpz_probab_prime_p(Integer(std::to_string(p)).get_mpz_t(), 30) > 0;
}

namespace {

Integer to_mpz(Prime p) {
    Integer r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(Prime), 0, 0, &p);
    return r;
}

Prime to_prime(const Integer& n) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64) throw DomainError("prime factor exceeds 64 bits");
    Prime p = 0;
    mpz_export(&p, nullptr, -1, sizeof(Prime), 0, 0, n.get_mpz_t());
    return p;
}

Integer pollard_brent(const Integer& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Integer y = 2, x, g = 1, q = 1, ys;
        auto step = [&](Integer& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        unsigned long r = 1;
        const unsigned long m = 64;
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) step(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    step(y);
                    Integer diff = abs(x - y);
                    q = q * diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                step(ys);
                Integer diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(Integer n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
        out.push_back(n);
        return;
    }
    Integer f = pollard_brent(n);
    factor_into(f, out);
    factor_into(n / f, out);
}

}  // namespace

long padic_valuation(const Integer& n, Prime p) {
    if (n == 0) throw DomainError("valuation of zero is infinite");
    if (p < 2) throw DomainError("valuation requires a prime");
    Integer rest;
    Integer pp = to_mpz(p);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long padic_valuation(const Rational& q, Prime p) {
    if (q == 0) throw DomainError("valuation of zero is infinite");
    return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

std::vector<Prime> prime_factors(const Integer& n) {
    if (n == 0) throw DomainError("prime factors of zero");
    Integer m = abs(n);
    std::vector<Prime> result;
    for (unsigned long p = 2; p < 10000; p += (p == 2 ? 1 : 2)) {
        if (Integer(p) * p > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            result.push_back(p);
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }
    if (m > 1) {
        std::vector<Integer> big;
        factor_into(m, big);
        for (const auto& f : big) result.push_back(to_prime(f));
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::vector<Place> support(const Rational& q) {
    if (q == 0) throw DomainError("support of zero is undefined");
    std::vector<Prime> ps = prime_factors(q.get_num());
    std::vector<Prime> qs = prime_factors(q.get_den());
    ps.insert(ps.end(), qs.begin(), qs.end());
    std::sort(ps.begin(), ps.end());
    std::vector<Place> out;
    for (Prime p : ps) out.push_back(Place::finite(p));
    return out;
}

Interval LocalValue::enclosure() const {
    if (const auto* e = std::get_if<ExactLog>(&repr_)) {
        if (e->coeff == 0) return Interval::point(0.0);
        return enclose(e->coeff) * log_prime(e->prime);
    }
    return std::get<Interval>(repr_);
}

LocalValue log_plus(const Rational& q, const Place& v) {
    if (v.is_archimedean()) {
        Rational a = abs(q);
        if (a <= 1) return Interval::point(0.0);
        return log_enclosure(a);
    }
    if (q == 0) return LocalValue::zero_at(v.prime());
    long val = padic_valuation(q, v.prime());
    return ExactLog{Rational(std::max(0L, -val)), v.prime()};
}

void LogSum::add(const Rational& coeff, Prime p) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(p, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

LogSum& LogSum::operator+=(const LogSum& other) {
    for (const auto& [p, c] : other.terms_) add(c, p);
    return *this;
}

LogSum LogSum::operator-() const {
    LogSum r;
    for (const auto& [p, c] : terms_) r.terms_.emplace(p, -c);
    return r;
}

LogSum LogSum::scaled(const Rational& s) const {
    LogSum r;
    if (s == 0) return r;
    for (const auto& [p, c] : terms_) r.terms_.emplace(p, c * s);
    return r;
}

Rational LogSum::coeff(Prime p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Rational(0) : it->second;
}

int LogSum::sign() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1) return sgn(terms_.begin()->second);
    Interval enc = enclosure();
    if (enc.lo > 0) return 1;
    if (enc.hi < 0) return -1;
    // Ambiguous numerically: compare prod p^(D c_p) over positive and negative parts.
    Integer den = 1;
    for (const auto& [p, c] : terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    Integer pos = 1, neg = 1;
    for (const auto& [p, c] : terms_) {
        Integer e = to_integer(c * den);
        Integer ae = abs(e);
        if (!ae.fits_ulong_p() || ae > 1'000'000) throw DomainError("log-sum comparison exponent too large");
        Integer pw;
        mpz_pow_ui(pw.get_mpz_t(), to_mpz(p).get_mpz_t(), ae.get_ui());
        (e > 0 ? pos : neg) *= pw;
    }
    return cmp(pos, neg) > 0 ? 1 : (cmp(pos, neg) < 0 ? -1 : 0);
}

Interval LogSum::enclosure() const {
    Interval acc = Interval::point(0.0);
    for (const auto& [p, c] : terms_) acc += enclose(c) * log_prime(p);
    return acc;
}

int compare(const LogSum& a, const LogSum& b) { return (a - b).sign(); }

Interval LogInteger::enclosure() const {
    if (value <= 0) throw DomainError("log of a non-positive integer");
    if (value == 1) return Interval::point(0.0);
    return log_enclosure(value);
}

std::vector<NewtonSegment> newton_polygon(std::span<const std::optional<long>> valuations) {
    std::vector<std::pair<long, long>> pts;
    for (std::size_t i = 0; i < valuations.size(); ++i)
        if (valuations[i]) pts.emplace_back(static_cast<long>(i), *valuations[i]);
    if (pts.empty()) throw DomainError("Newton polygon of the zero polynomial");

    // Andrew's monotone chain, lower hull; collinear points are dropped so
    // each segment carries its full multiplicity.
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            Integer cross = Integer(b.first - a.first) * (pt.second - a.second) -
                            Integer(b.second - a.second) * (pt.first - a.first);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<NewtonSegment> out;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long dx = hull[i].first - hull[i - 1].first;
        Rational slope(Integer(hull[i].second - hull[i - 1].second), Integer(dx));
        slope.canonicalize();
        out.push_back({slope, dx});
    }
    return out;
}

}  // namespace heightforge
