#include "heightforge/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace heightforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

}  // namespace

Interval& Interval::operator+=(const Interval& o) {
    lo = down(lo + o.lo);
    hi = up(hi + o.hi);
    return *this;
}

Interval& Interval::operator-=(const Interval& o) {
    double l = down(lo - o.hi);
    hi = up(hi - o.lo);
    lo = l;
    return *this;
}

Interval operator+(Interval a, const Interval& b) { return a += b; }
Interval operator-(Interval a, const Interval& b) { return a -= b; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
    if ((a.lo == 0.0 && a.hi == 0.0) || (b.lo == 0.0 && b.hi == 0.0)) return Interval::point(0.0);
    const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
    return {down(*mn), up(*mx)};
}

Interval operator*(const Interval& a, double s) { return a * Interval::point(s); }

Interval max(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval widen(const Interval& a) { return {down(a.lo), up(a.hi)}; }

void ensure_mpfr_range() {
    if (mpfr_get_emax() != mpfr_get_emax_max()) mpfr_set_emax(mpfr_get_emax_max());
    if (mpfr_get_emin() != mpfr_get_emin_min()) mpfr_set_emin(mpfr_get_emin_min());
}

Interval enclose(const mpq_class& q) {
    mpfr_t x;
    mpfr_init2(x, 53);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDD);
    double lo = mpfr_get_d(x, MPFR_RNDD);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDU);
    double hi = mpfr_get_d(x, MPFR_RNDU);
    mpfr_clear(x);
    return {lo, hi};
}

Interval enclose(const mpz_class& n) { return enclose(mpq_class(n)); }

Interval log_enclosure(const mpq_class& q) {
    ensure_mpfr_range();
    mpfr_t x;
    mpfr_init2(x, 64);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDD);
    mpfr_log(x, x, MPFR_RNDD);
    double lo = mpfr_get_d(x, MPFR_RNDD);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDU);
    mpfr_log(x, x, MPFR_RNDU);
    double hi = mpfr_get_d(x, MPFR_RNDU);
    mpfr_clear(x);
    return {lo, hi};
}

Interval log_enclosure(const mpz_class& n) { return log_enclosure(mpq_class(n)); }

Interval log_prime(unsigned long p) { return log_enclosure(mpq_class(p)); }

Mpfr::Mpfr(mpfr_prec_t prec) {
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(value_, other.precision());
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() {
    mpfr_clear(value_);
}

MpInterval::MpInterval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

MpInterval::MpInterval(const mpq_class& q, mpfr_prec_t prec) : lo_(prec), hi_(prec) {
    mpfr_set_q(lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), q.get_mpq_t(), MPFR_RNDU);
}

bool MpInterval::is_finite() const {
    return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get());
}

bool MpInterval::contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

Mpfr MpInterval::mag_lower() const {
    Mpfr r(precision());
    if (contains_zero()) return r;
    if (mpfr_sgn(lo_.get()) > 0)
        mpfr_set(r.get(), lo_.get(), MPFR_RNDD);
    else
        mpfr_neg(r.get(), hi_.get(), MPFR_RNDD);
    return r;
}

Mpfr MpInterval::mag_upper() const {
    Mpfr a(precision()), b(precision());
    mpfr_abs(a.get(), lo_.get(), MPFR_RNDU);
    mpfr_abs(b.get(), hi_.get(), MPFR_RNDU);
    if (mpfr_cmp(a.get(), b.get()) < 0) return b;
    return a;
}

MpInterval operator+(const MpInterval& a, const MpInterval& b) {
    MpInterval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

MpInterval operator*(const MpInterval& a, const MpInterval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    MpInterval r(prec);
    Mpfr t(prec);
    bool first = true;
    for (const Mpfr* x : {&a.lo_, &a.hi_}) {
        for (const Mpfr* y : {&b.lo_, &b.hi_}) {
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), r.lo_.get()) < 0) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), r.hi_.get()) > 0) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return r;
}

Interval MpInterval::to_interval() const { return {round_down(lo_), round_up(hi_)}; }

double round_down(const Mpfr& x) { return mpfr_get_d(x.get(), MPFR_RNDD); }
double round_up(const Mpfr& x) { return mpfr_get_d(x.get(), MPFR_RNDU); }

}  // namespace heightforge
