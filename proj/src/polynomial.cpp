#include "heightforge/polynomial.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace heightforge {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c.canonicalize();
    trim();
}

Polynomial Polynomial::monomial(const Rational& c, int degree) {
    std::vector<Rational> v(degree + 1, Rational(0));
    v[degree] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return coeffs_[i];
}

const Rational& Polynomial::leading() const {
    if (is_zero()) throw DomainError("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Rational Polynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() <= 0) return {};
    std::vector<Rational> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<long>(i);
    return Polynomial(std::move(v));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return {};
    Polynomial r = *this;
    Rational lead = leading();
    for (auto& c : r.coeffs_) c /= lead;
    return r;
}

Polynomial Polynomial::primitive() const {
    if (is_zero()) return {};
    Integer den = 1, num = 0;
    for (const auto& c : coeffs_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Rational> v;
    for (const auto& c : coeffs_) {
        Rational s = c * den;
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), s.get_num().get_mpz_t());
        v.push_back(s);
    }
    if (sgn(coeffs_.back()) < 0) num = -num;
    for (auto& c : v) c /= num;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::inflate(int k) const {
    if (is_zero()) return {};
    std::vector<Rational> v(static_cast<std::size_t>(degree()) * k + 1, Rational(0));
    for (int i = 0; i <= degree(); ++i) v[static_cast<std::size_t>(i) * k] = coeffs_[i];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::taylor_shift(const Rational& a) const {
    std::vector<Rational> v = coeffs_;
    const int n = degree();
    // Repeated synthetic division by (x - a).
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) v[j] += a * v[j + 1];
    return Polynomial(std::move(v));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    if (is_zero() || o.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
    coeffs_ = std::move(v);
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
}

std::string Polynomial::to_string(char var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        Rational a = abs(c);
        os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (a != 1 || i == 0) os << a.get_str();
        if (i > 0) os << var;
        if (i > 1) os << '^' << i;
        first = false;
    }
    return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<Rational> r = a.coeffs();
    const int db = b.degree();
    const int dq = a.degree() - db;
    if (dq < 0) return {Polynomial(), a};
    std::vector<Rational> q(dq + 1, Rational(0));
    for (int i = dq; i >= 0; --i) {
        Rational c = r[i + db] / b.leading();
        q[i] = c;
        for (int j = 0; j <= db; ++j) r[i + j] -= c * b.coeffs()[j];
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial x = a, y = b;
    while (!y.is_zero()) {
        Polynomial r = divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

std::vector<Polynomial> squarefree_decomposition(const Polynomial& p) {
    if (p.degree() < 1) return {};
    std::vector<Polynomial> out;
    Polynomial f = p.monic();
    Polynomial fp = f.derivative();
    Polynomial a = gcd(f, fp);
    Polynomial b = divmod(f, a).first;
    Polynomial c = divmod(fp, a).first;
    Polynomial d = c - b.derivative();
    while (b.degree() > 0) {
        Polynomial g = gcd(b, d);
        out.push_back(g);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    return out;
}

namespace {

std::vector<Integer> positive_divisors(const Integer& n) {
    Integer m = abs(n);
    std::vector<Integer> divs{1};
    for (Prime p : prime_factors(m)) {
        long e = padic_valuation(m, p);
        std::size_t base = divs.size();
        Integer pk = 1;
        for (long k = 1; k <= e; ++k) {
            pk *= Integer(std::to_string(p));
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    Polynomial acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Polynomial basis{Rational(1)};
        Rational denom = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            basis *= Polynomial{-xs[j], Rational(1)};
            denom *= xs[i] - xs[j];
        }
        acc += basis * (ys[i] / denom);
    }
    return acc;
}

bool integral(const Polynomial& p) {
    return std::all_of(p.coeffs().begin(), p.coeffs().end(), [](const Rational& c) { return c.get_den() == 1; });
}

// Returns a nontrivial integer factor of degree k of the primitive integer
// polynomial q, or the zero polynomial.
Polynomial kronecker_factor(const Polynomial& q, int k) {
    std::vector<std::pair<std::size_t, long>> candidates;
    for (long x = -24; x <= 24; ++x) {
        Rational v = q(Rational(x));
        if (v == 0) continue;
        candidates.emplace_back(positive_divisors(v.get_num()).size(), x);
    }
    std::sort(candidates.begin(), candidates.end());
    if (static_cast<int>(candidates.size()) < k + 1) return {};
    std::vector<Rational> xs;
    std::vector<std::vector<Integer>> divs;
    double combos = 1;
    for (int i = 0; i <= k; ++i) {
        xs.emplace_back(candidates[i].second);
        auto pos = positive_divisors(q(xs.back()).get_num());
        std::vector<Integer> all = pos;
        if (i > 0)
            for (const auto& d : pos) all.push_back(-d);
        combos *= static_cast<double>(all.size());
        divs.push_back(std::move(all));
    }
    if (combos > 2e6) throw DomainError("polynomial too large for Kronecker factorization");
    std::vector<std::size_t> idx(k + 1, 0);
    std::vector<Rational> ys(k + 1);
    while (true) {
        for (int i = 0; i <= k; ++i) ys[i] = divs[i][idx[i]];
        Polynomial g = interpolate(xs, ys);
        if (g.degree() == k && integral(g)) {
            auto [quo, rem] = divmod(q, g);
            if (rem.is_zero() && integral(quo)) return g;
        }
        int pos = 0;
        while (pos <= k && ++idx[pos] == divs[pos].size()) idx[pos++] = 0;
        if (pos > k) break;
    }
    return {};
}

void factor_recursive(const Polynomial& q, std::vector<Polynomial>& out) {
    if (q.degree() <= 0) return;
    if (q.degree() == 1) {
        out.push_back(q.monic());
        return;
    }
    Polynomial prim = q.primitive();
    // Rational roots first.
    if (prim.coeff(0) == 0) {
        out.push_back(Polynomial{Rational(0), Rational(1)});
        factor_recursive(divmod(prim, Polynomial{Rational(0), Rational(1)}).first, out);
        return;
    }
    for (const auto& r : positive_divisors(prim.coeff(0).get_num())) {
        for (const auto& s : positive_divisors(prim.leading().get_num())) {
            for (int sign : {1, -1}) {
                Rational root(r * sign, s);
                root.canonicalize();
                if (prim(root) == 0) {
                    Polynomial lin{-root, Rational(1)};
                    out.push_back(lin);
                    factor_recursive(divmod(prim, lin).first, out);
                    return;
                }
            }
        }
    }
    if (prim.degree() <= 3) {
        out.push_back(prim.monic());
        return;
    }
    for (int k = 2; k <= prim.degree() / 2; ++k) {
        Polynomial g = kronecker_factor(prim, k);
        if (!g.is_zero()) {
            factor_recursive(g, out);
            factor_recursive(divmod(prim, g).first, out);
            return;
        }
    }
    out.push_back(prim.monic());
}

}  // namespace

std::vector<Polynomial> irreducible_factors(const Polynomial& squarefree) {
    std::vector<Polynomial> out;
    factor_recursive(squarefree, out);
    std::sort(out.begin(), out.end(), [](const Polynomial& a, const Polynomial& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.to_string() < b.to_string();
    });
    return out;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rational factor = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    return det;
}

Rational sylvester_resultant(std::span<const Rational> f, std::span<const Rational> g) {
    if (f.empty() || g.empty()) throw DomainError("resultant needs nonempty coefficient lists");
    const std::size_t m = f.size() - 1, n = g.size() - 1;
    const std::size_t size = m + n;
    if (size == 0) return 1;
    std::vector<std::vector<Rational>> mat(size, std::vector<Rational>(size, Rational(0)));
    for (std::size_t row = 0; row < n; ++row)
        for (std::size_t i = 0; i <= m; ++i) mat[row][row + i] = f[m - i];
    for (std::size_t row = 0; row < m; ++row)
        for (std::size_t i = 0; i <= n; ++i) mat[n + row][row + i] = g[n - i];
    return determinant(std::move(mat));
}

Rational resultant(const Polynomial& f, const Polynomial& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    return sylvester_resultant(f.coeffs(), g.coeffs());
}

Rational discriminant(const Polynomial& p) {
    const int n = p.degree();
    if (n < 1) throw DomainError("discriminant of a constant");
    if (n == 1) return 1;
    Rational r = resultant(p, p.derivative()) / p.leading();
    return ((static_cast<long>(n) * (n - 1) / 2) % 2 == 0) ? r : Rational(-r);
}

std::vector<std::optional<long>> coefficient_valuations(const Polynomial& poly, Prime p) {
    std::vector<std::optional<long>> v;
    for (const auto& c : poly.coeffs()) {
        if (c == 0)
            v.emplace_back(std::nullopt);
        else
            v.emplace_back(padic_valuation(c, p));
    }
    return v;
}

std::vector<NewtonSegment> newton_polygon(const Polynomial& poly, Prime p) {
    auto v = coefficient_valuations(poly, p);
    return newton_polygon(std::span<const std::optional<long>>(v));
}

std::optional<Rational> max_root_valuation(const Polynomial& poly, Prime p) {
    if (poly.degree() < 1) throw DomainError("polynomial has no roots");
    if (poly.coeff(0) == 0) return std::nullopt;
    auto segs = newton_polygon(poly, p);
    return -segs.front().slope;
}

}  // namespace heightforge
