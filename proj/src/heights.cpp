#include "heightforge/heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "heightforge/padic_ball.hpp"

namespace heightforge {

const char* to_string(GreenMode mode) {
    switch (mode) {
        case GreenMode::ExactEscape: return "exact-escape";
        case GreenMode::ExactBounded: return "exact-bounded";
        case GreenMode::Interval: return "interval";
    }
    return "interval";
}

const char* to_string(HeightMethod method) {
    switch (method) {
        case HeightMethod::Exact: return "exact";
        case HeightMethod::Local: return "local";
        case HeightMethod::Global: return "global";
    }
    return "local";
}

LogInteger naive_height(const Rational& t) {
    Integer x = abs(t.get_num());
    return LogInteger{std::max(x, Integer(t.get_den()))};
}

namespace {

constexpr mpfr_prec_t kPrec = 512;

long bit_size(const Rational& q) {
    return static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
}

void require_map(const Polynomial& f) {
    if (f.degree() < 2) throw DomainError("dynamics needs a polynomial of degree at least 2");
}

struct ExactPrefix {
    std::vector<Rational> points;
    bool cycle = false;
};

// Exact forward orbit until a repeat, a step limit, or a size limit.
ExactPrefix exact_prefix(const Polynomial& f, const Rational& z, int max_steps, long max_bits) {
    ExactPrefix out;
    std::map<Rational, int> seen;
    Rational w = z;
    for (int n = 0;; ++n) {
        if (!seen.emplace(w, n).second) {
            out.cycle = true;
            return out;
        }
        out.points.push_back(w);
        if (n >= max_steps || bit_size(w) > max_bits) return out;
        w = f(w);
    }
}

Integer ipow(long b, long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

// ---------------------------------------------------------------------------
// Finite places

struct FiniteData {
    Prime p;
    int d;
    long vd;
    Rational rho;       // escape iff -v(w) > rho
    Rational bound;     // G <= bound * log p on the non-escaping disk
    Rational drift;     // v(c_d) / (d - 1)
};

FiniteData finite_data(const Polynomial& f, Prime p) {
    FiniteData fd;
    fd.p = p;
    fd.d = f.degree();
    fd.vd = padic_valuation(f.leading(), p);
    fd.drift = Rational(fd.vd, fd.d - 1);
    fd.drift.canonicalize();
    fd.rho = fd.drift;
    for (int k = 0; k < fd.d; ++k) {
        if (f.coeffs()[k] == 0) continue;
        Rational r(fd.vd - padic_valuation(f.coeffs()[k], p), fd.d - k);
        r.canonicalize();
        fd.rho = std::max(fd.rho, r);
    }
    Rational mu = -fd.vd + fd.rho * fd.d;
    for (int k = 0; k < fd.d; ++k) {
        if (f.coeffs()[k] == 0) continue;
        mu = std::max(mu, Rational(-padic_valuation(f.coeffs()[k], p) + fd.rho * k));
    }
    fd.bound = std::max(Rational(0), Rational(mu - fd.drift)) / fd.d;
    return fd;
}

bool escaped(const FiniteData& fd, long v) { return Rational(-v) > fd.rho; }

GreenResult finite_exact(const FiniteData& fd, long v, int n, int steps) {
    GreenResult r;
    r.place = Place::finite(fd.p);
    r.exact = (Rational(-v) - fd.drift) / ipow(fd.d, n);
    r.value = enclose(*r.exact) * log_prime(fd.p);
    r.mode = GreenMode::ExactEscape;
    r.steps = steps;
    return r;
}

GreenResult finite_zero(Prime p, int steps) {
    GreenResult r;
    r.place = Place::finite(p);
    r.exact = Rational(0);
    r.value = Interval::point(0.0);
    r.mode = GreenMode::ExactBounded;
    r.steps = steps;
    return r;
}

GreenResult green_finite(const Polynomial& f, Prime p, const Rational& z, double tol) {
    const FiniteData fd = finite_data(f, p);
    const int d = fd.d;

    // Invariant disks D(0, p^k).
    Integer kmax = 0;
    if (fd.rho > 0) mpz_fdiv_q(kmax.get_mpz_t(), fd.rho.get_num().get_mpz_t(), fd.rho.get_den().get_mpz_t());
    for (long k = 0; k <= kmax.get_si(); ++k) {
        bool invariant = true;
        for (int j = 0; j <= d && invariant; ++j)
            if (f.coeffs()[j] != 0 && padic_valuation(f.coeffs()[j], p) - j * k < -k) invariant = false;
        if (invariant && (z == 0 || padic_valuation(z, p) >= -k)) return finite_zero(p, 0);
    }

    ExactPrefix pre = exact_prefix(f, z, 12, 2048);
    for (std::size_t n = 0; n < pre.points.size(); ++n) {
        const Rational& w = pre.points[n];
        if (w != 0 && escaped(fd, padic_valuation(w, p)))
            return finite_exact(fd, padic_valuation(w, p), static_cast<int>(n), static_cast<int>(n));
    }
    if (pre.cycle) return finite_zero(p, static_cast<int>(pre.points.size()));

    const int offset = static_cast<int>(pre.points.size()) - 1;
    const Rational& start = pre.points.back();
    const long floor_rho = kmax.get_si();
    const int budget = 64 * d;
    int safe_steps = offset;  // w_n known not escaped for n < safe_steps... n <= safe_steps
    int total_steps = offset;
    for (long extra : {1L, 2L, 4L, 8L, 16L, 32L}) {
        std::vector<PadicBall> balls{PadicBall::around(start, p, -floor_rho + extra)};
        for (int s = 0; s < budget; ++s) {
            const PadicBall& b = balls.back();
            ++total_steps;
            if (auto v = b.valuation(); v && escaped(fd, *v))
                return finite_exact(fd, *v, offset + s, total_steps);
            if (Rational(-b.min_valuation()) > fd.rho) break;  // ball straddles the escape region
            safe_steps = std::max(safe_steps, offset + s);
            for (std::size_t i = 0; i + 1 < balls.size(); ++i)
                if (balls[i].contains(b)) return finite_zero(p, total_steps);
            balls.push_back(image(f, b));
        }
    }
    GreenResult r;
    r.place = Place::finite(p);
    r.mode = GreenMode::Interval;
    r.steps = total_steps;
    Rational hi = fd.bound / ipow(d, safe_steps);
    r.value = {0.0, (enclose(hi) * log_prime(p)).hi};
    if (r.value.width() > tol) throw BudgetExceeded("finite Green function not certified at " + std::to_string(p), r.value);
    return r;
}

// ---------------------------------------------------------------------------
// Archimedean place

Rational upper_rational(const Mpfr& x) {
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x.get());
    Rational r(q);
    mpq_clear(q);
    return r;
}

struct ArchData {
    int d;
    Rational S, L, R;
    Interval logL;
    Interval bound;  // G <= bound.hi for |w| <= R
};

ArchData arch_data(const Polynomial& f) {
    ArchData a;
    a.d = f.degree();
    a.L = abs(f.leading());
    a.S = 0;
    for (int k = 0; k < a.d; ++k) a.S += abs(f.coeffs()[k]);
    a.R = std::max(Rational(2), Rational(2 * a.S / a.L));
    Mpfr root(64);
    Rational two_over_L = 2 / a.L;
    mpfr_set_q(root.get(), two_over_L.get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(root.get(), root.get(), static_cast<unsigned long>(a.d - 1), MPFR_RNDU);
    a.R = std::max(a.R, upper_rational(root));
    a.logL = a.L == 1 ? Interval::point(0.0) : log_enclosure(a.L);
    Rational M = 0, Rk = 1;
    for (int k = 0; k <= a.d; ++k) {
        M += abs(f.coeffs()[k]) * Rk;
        Rk *= a.R;
    }
    Interval inner = log_enclosure(M) + (a.logL + Interval::point(1.0)) * enclose(Rational(1, a.d - 1));
    inner = {std::max(0.0, inner.lo), std::max(0.0, inner.hi)};
    a.bound = inner * enclose(Rational(1, a.d));
    return a;
}

MpInterval evaluate(const std::vector<MpInterval>& coeffs, const MpInterval& w) {
    MpInterval acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * w + coeffs[k];
    return acc;
}

// d^-n * x, rounded in direction rnd.
double scale_down(const Mpfr& x, int d, int n, mpfr_rnd_t rnd) {
    Mpfr s(kPrec), r(kPrec);
    mpfr_ui_pow_ui(s.get(), static_cast<unsigned long>(d), static_cast<unsigned long>(n),
                   rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    mpfr_div(r.get(), x.get(), s.get(), rnd);
    return mpfr_get_d(r.get(), rnd);
}

GreenResult green_arch(const Polynomial& f, const Rational& z, double tol) {
    ensure_mpfr_range();
    GreenResult r;
    r.place = Place::infinity();
    ExactPrefix pre = exact_prefix(f, z, 8, 1024);
    if (pre.cycle) {
        r.mode = GreenMode::ExactBounded;
        r.value = Interval::point(0.0);
        r.steps = static_cast<int>(pre.points.size());
        return r;
    }
    const ArchData a = arch_data(f);
    const int d = a.d;
    std::vector<MpInterval> coeffs;
    for (const auto& c : f.coeffs()) coeffs.emplace_back(c, kPrec);
    const MpInterval R(a.R, kPrec);
    // 2S / (L (d-1)), rounded up.
    Rational tail_q = 2 * a.S / (a.L * (d - 1));
    Mpfr tail_num(kPrec);
    mpfr_set_q(tail_num.get(), tail_q.get_mpq_t(), MPFR_RNDU);
    Mpfr drift_lo(kPrec), drift_hi(kPrec);
    mpfr_set_d(drift_lo.get(), (a.logL * enclose(Rational(1, d - 1))).lo, MPFR_RNDD);
    mpfr_set_d(drift_hi.get(), (a.logL * enclose(Rational(1, d - 1))).hi, MPFR_RNDU);
    Mpfr bound(kPrec);
    mpfr_set_d(bound.get(), a.bound.hi, MPFR_RNDU);

    const int offset = static_cast<int>(pre.points.size()) - 1;
    MpInterval w(pre.points.back(), kPrec);
    Interval best{0.0, std::numeric_limits<double>::infinity()};
    const int max_steps = 400;
    for (int s = 0; s < max_steps; ++s) {
        const int n = offset + s;
        r.steps = n;
        if (!w.is_finite()) break;
        Mpfr lo = w.mag_lower(), hi = w.mag_upper();
        Mpfr g_lo(kPrec), g_hi(kPrec), t(kPrec);
        if (mpfr_cmp(lo.get(), R.hi().get()) >= 0) {
            mpfr_div(t.get(), tail_num.get(), lo.get(), MPFR_RNDU);
            mpfr_log(g_lo.get(), lo.get(), MPFR_RNDD);
            mpfr_add(g_lo.get(), g_lo.get(), drift_lo.get(), MPFR_RNDD);
            mpfr_sub(g_lo.get(), g_lo.get(), t.get(), MPFR_RNDD);
            if (mpfr_sgn(g_lo.get()) < 0) mpfr_set_zero(g_lo.get(), 1);
            mpfr_log(g_hi.get(), hi.get(), MPFR_RNDU);
            mpfr_add(g_hi.get(), g_hi.get(), drift_hi.get(), MPFR_RNDU);
            mpfr_add(g_hi.get(), g_hi.get(), t.get(), MPFR_RNDU);
        } else {
            mpfr_set_zero(g_lo.get(), 1);
            mpfr_set(g_hi.get(), bound.get(), MPFR_RNDU);
            if (mpfr_cmp(hi.get(), R.lo().get()) > 0) {
                // Some points may lie beyond R: tail estimate at radius R.
                Mpfr alt(kPrec);
                mpfr_div(t.get(), tail_num.get(), R.lo().get(), MPFR_RNDU);
                mpfr_log(alt.get(), hi.get(), MPFR_RNDU);
                mpfr_add(alt.get(), alt.get(), drift_hi.get(), MPFR_RNDU);
                mpfr_add(alt.get(), alt.get(), t.get(), MPFR_RNDU);
                if (mpfr_cmp(alt.get(), g_hi.get()) > 0) mpfr_set(g_hi.get(), alt.get(), MPFR_RNDU);
            }
        }
        Interval cur{scale_down(g_lo, d, n, MPFR_RNDD), scale_down(g_hi, d, n, MPFR_RNDU)};
        if (cur.width() < best.width()) best = cur;
        if (best.width() <= tol) {
            r.value = best;
            r.mode = GreenMode::Interval;
            return r;
        }
        w = evaluate(coeffs, w);
    }
    throw BudgetExceeded("archimedean Green function did not reach the requested width", best);
}

}  // namespace

Rational finite_escape_exponent(const Polynomial& f, Prime p) {
    require_map(f);
    return finite_data(f, p).rho;
}

Rational archimedean_escape_radius(const Polynomial& f) {
    require_map(f);
    return arch_data(f).R;
}

std::set<Place> green_support(const Polynomial& f, const Rational& z) {
    std::set<Place> out{Place::infinity()};
    for (const auto& c : f.coeffs())
        for (Prime p : prime_factors(c.get_den())) out.insert(Place::finite(p));
    for (Prime p : prime_factors(z.get_den())) out.insert(Place::finite(p));
    return out;
}

GreenResult local_green(const Polynomial& f, const Place& v, const Rational& z, double tol, bool allow_exact) {
    require_map(f);
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    GreenResult r = v.is_archimedean() ? green_arch(f, z, tol) : green_finite(f, v.prime(), z, tol);
    if (!allow_exact && r.mode != GreenMode::Interval) {
        r.mode = GreenMode::Interval;
        r.exact.reset();
        r.value = widen(r.value);
    }
    return r;
}

GreenResult local_green(const Family& fam, const Rational& t, const Place& v, const Rational& z, double tol) {
    bool conjugable = fam.monic() || try_monic_normalize(fam).has_value();
    return local_green(fam.specialize(t), v, z, tol, conjugable);
}

Interval height_defect_bound(const Polynomial& f) {
    require_map(f);
    const int d = f.degree();
    std::set<Prime> primes;
    for (const auto& c : f.coeffs()) {
        if (c == 0) continue;
        for (Prime p : prime_factors(c.get_num())) primes.insert(p);
        for (Prime p : prime_factors(c.get_den())) primes.insert(p);
    }
    LogSum finite;
    for (Prime p : primes) {
        const long vd = padic_valuation(f.leading(), p);
        Rational log_a = 0, log_r = 0;
        for (int k = 0; k <= d; ++k) {
            const Rational& c = f.coeffs()[k];
            if (c == 0) continue;
            log_a = std::max(log_a, Rational(-padic_valuation(c, p)));
            if (k < d) {
                Rational r(vd - padic_valuation(c, p), d - k);
                r.canonicalize();
                log_r = std::max(log_r, r);
            }
        }
        Rational cp = std::max({log_a, Rational(std::max(0L, vd)), Rational(d * log_r)});
        finite.add(cp, p);
    }
    Rational L = abs(f.leading()), S = 0, total = 0;
    for (int k = 0; k <= d; ++k) total += abs(f.coeffs()[k]);
    S = total - L;
    Rational R = std::max(Rational(1), Rational(2 * S / L));
    auto logp = [](const Rational& q) { return q <= 1 ? Interval::point(0.0) : log_enclosure(q); };
    Interval arch = max(max(logp(total), logp(1 / (L - S / R))), logp(R) * static_cast<double>(d));
    Interval out = finite.enclosure() + arch;
    return {std::max(0.0, out.lo), out.hi};
}

Interval height_defect_bound(const Family& fam, const Rational& t) { return height_defect_bound(fam.specialize(t)); }

HeightResult global_height(const Polynomial& f, const Rational& z, long max_bits) {
    require_map(f);
    const int d = f.degree();
    const double C = height_defect_bound(f).hi;
    Rational w = z;
    int n = 0;
    const int max_steps = 200;
    while (n < max_steps) {
        Rational next = f(w);
        if (bit_size(next) > max_bits) break;
        w = next;
        ++n;
    }
    LogInteger h = naive_height(w);
    Interval base = h.enclosure();
    Mpfr lo(kPrec), hi(kPrec);
    mpfr_set_d(lo.get(), base.lo, MPFR_RNDD);
    mpfr_set_d(hi.get(), base.hi, MPFR_RNDU);
    Interval scaled{scale_down(lo, d, n, MPFR_RNDD), scale_down(hi, d, n, MPFR_RNDU)};
    Mpfr c(kPrec);
    mpfr_set_d(c.get(), C / (d - 1), MPFR_RNDU);
    mpfr_mul_d(c.get(), c.get(), 1.0 + 1e-12, MPFR_RNDU);
    double tail = scale_down(c, d, n, MPFR_RNDU);
    HeightResult r;
    r.method = HeightMethod::Global;
    r.steps = n;
    r.value = {std::max(0.0, scaled.lo - tail), scaled.hi + tail};
    r.value = widen(r.value);
    r.value.lo = std::max(0.0, r.value.lo);
    return r;
}

HeightResult canonical_height(const Polynomial& f, const Rational& z, double tol) {
    require_map(f);
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    HeightResult r;
    ExactPrefix pre = exact_prefix(f, z, 16, 2048);
    if (pre.cycle) {
        r.method = HeightMethod::Exact;
        r.value = Interval::point(0.0);
        r.steps = static_cast<int>(pre.points.size());
        return r;
    }
    std::set<Place> places = green_support(f, z);
    const double share = tol / (2.0 * static_cast<double>(places.size()));
    Interval total = Interval::point(0.0);
    LogSum exact;
    for (const auto& v : places) {
        GreenResult g = local_green(f, v, z, v.is_archimedean() ? tol / 2 : share);
        r.steps = std::max(r.steps, g.steps);
        if (g.exact)
            exact.add(*g.exact, v.prime());
        else
            total += g.value;
    }
    total += exact.enclosure();
    r.method = HeightMethod::Local;
    r.value = {std::max(0.0, total.lo), total.hi};
    return r;
}

HeightResult canonical_height(const Family& fam, const Rational& t, const Rational& z, double tol) {
    Polynomial f = fam.specialize(t);
    if (fam.monic() || try_monic_normalize(fam)) return canonical_height(f, z, tol);
    HeightResult g = global_height(f, z);
    if (g.value.width() > tol)
        throw BudgetExceeded("global height method cannot reach the requested width", g.value);
    return g;
}

GreenResult arakelov_green(const Family& fam, const Rational& t, const Place& v, const Rational& x,
                           const Rational& y, double tol) {
    if (x == y) throw DomainError("pairing diverges on the diagonal");
    GreenResult gx = local_green(fam, t, v, x, tol / 3);
    GreenResult gy = local_green(fam, t, v, y, tol / 3);
    GreenResult r;
    r.place = v;
    r.steps = gx.steps + gy.steps;
    Rational diff = x - y;
    if (v.is_archimedean()) {
        r.value = gx.value + gy.value - log_enclosure(Rational(abs(diff)));
        r.mode = GreenMode::Interval;
        return r;
    }
    const Prime p = v.prime();
    Rational dist = padic_valuation(diff, p);  // -log|x - y|_p = v_p(x - y) log p
    if (gx.exact && gy.exact) {
        r.exact = dist + *gx.exact + *gy.exact;
        r.value = enclose(*r.exact) * log_prime(p);
        r.mode = (gx.mode == GreenMode::ExactBounded && gy.mode == GreenMode::ExactBounded) ? GreenMode::ExactBounded
                                                                                            : GreenMode::ExactEscape;
    } else {
        r.value = enclose(dist) * log_prime(p) + gx.value + gy.value;
        r.mode = GreenMode::Interval;
    }
    return r;
}

LocalValue lambda_local(const std::optional<Rational>& a, const Place& v, const Rational& t) {
    if (a && *a == t) throw DomainError("lambda is infinite at t = a");
    // q = t - a, or 1/t for the point at infinity; lambda = log+ |1/q|_v.
    if (!a) {
        if (t == 0) return v.is_archimedean() ? LocalValue(Interval::point(0.0)) : LocalValue::zero_at(v.prime());
        return log_plus(t, v);
    }
    return log_plus(Rational(1 / (t - *a)), v);
}

LogSum conductor_count(const std::optional<Rational>& a, const std::set<Place>& S, const Rational& t) {
    if (a && *a == t) throw DomainError("conductor undefined at t = a");
    Integer n;
    if (a) {
        Rational q = t - *a;
        n = q.get_num();
    } else {
        if (t == 0) return {};
        n = t.get_den();
    }
    LogSum out;
    for (Prime p : prime_factors(n))
        if (!S.count(Place::finite(p))) out.add(1, p);
    return out;
}

L1L2 l1_l2_split(const CoverAnalysis& cov, int e, const std::set<Place>& S, const Rational& t) {
    L1L2 out;
    for (const auto& pole : cov.poles) {
        if (pole.at_infinity || std::gcd(pole.order, e) != 1) continue;
        Rational value = pole.factor(t);
        if (value == 0) throw DomainError("t is a pole of the cover");
        for (Prime p : prime_factors(value.get_num())) {
            if (S.count(Place::finite(p))) continue;
            long v = padic_valuation(value, p);
            if (v <= 0) continue;
            if (v % e != 0)
                out.l1.add(v, p);
            else {
                Rational share(v, e);
                share.canonicalize();
                out.l2.add(share, p);
            }
        }
    }
    return out;
}

}  // namespace heightforge
