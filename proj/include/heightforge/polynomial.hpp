#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heightforge/arith.hpp"

namespace heightforge {

// Dense univariate polynomial over Q, coefficients stored constant term
// first and kept trimmed (the zero polynomial has no coefficients).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);
    Polynomial(std::initializer_list<Rational> coeffs) : Polynomial(std::vector<Rational>(coeffs)) {}

    static Polynomial monomial(const Rational& c, int degree);

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(int i) const;
    const Rational& leading() const;

    Rational operator()(const Rational& x) const;

    Polynomial derivative() const;
    Polynomial monic() const;
    /// Integer coefficients with positive leading term and content 1.
    Polynomial primitive() const;
    /// p(x) -> p(x^k)
    Polynomial inflate(int k) const;
    /// Coefficients of p(x + a).
    Polynomial taylor_shift(const Rational& a) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const Rational& s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

    std::string to_string(char var = 'z') const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Quotient and remainder; divisor must be nonzero.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
/// Monic gcd (zero if both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Yun decomposition: entry k-1 is the squarefree monic product of the
/// irreducible factors appearing with multiplicity exactly k.
std::vector<Polynomial> squarefree_decomposition(const Polynomial& p);

/// Monic irreducible factors over Q of a squarefree polynomial.  Uses
/// rational roots plus Kronecker's method, adequate for small degrees.
std::vector<Polynomial> irreducible_factors(const Polynomial& squarefree);

/// Sylvester determinant of coefficient lists read as forms of formal degree
/// (size - 1); leading zeros are allowed, giving the binary-form resultant.
Rational sylvester_resultant(std::span<const Rational> f, std::span<const Rational> g);
Rational resultant(const Polynomial& f, const Polynomial& g);
/// Disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lead.
Rational discriminant(const Polynomial& p);

/// Valuations v_p(c_i) (nullopt for zero coefficients).
std::vector<std::optional<long>> coefficient_valuations(const Polynomial& poly, Prime p);
std::vector<NewtonSegment> newton_polygon(const Polynomial& poly, Prime p);
/// Largest valuation of a root of a nonzero polynomial with a root; the
/// zero root counts as +infinity (nullopt).
std::optional<Rational> max_root_valuation(const Polynomial& poly, Prime p);

/// Exact determinant by Gaussian elimination over Q.
Rational determinant(std::vector<std::vector<Rational>> m);

}  // namespace heightforge
