#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "heightforge/arith.hpp"
#include "heightforge/polynomial.hpp"

namespace heightforge {

class NormalizationUnavailable : public DomainError {
public:
    using DomainError::DomainError;
};

// Roots beta_i of F(X, 1) described without leaving Q.
struct FactorData {
    /// Newton polygon of F(X, 1) at every prime dividing a coefficient.
    std::map<Prime, std::vector<NewtonSegment>> newton;
    /// B >= max |beta_i|: exact for linear F, Cauchy bound otherwise.
    Rational root_bound;
    /// Yun factors of F(X, 1): entry k-1 collects roots of multiplicity k.
    std::vector<Polynomial> multiplicity_factors;
    /// Monic squarefree part of F(X, 1).
    Polynomial radical;
    int max_multiplicity = 1;

    /// max_i max(0, -v_p(beta_i)) as a rational (0 when p is not listed).
    Rational max_negative_root_valuation(Prime p) const;
    /// max_i |v_p(beta_i)|.
    Rational max_abs_root_valuation(Prime p) const;
};

// f_t(z) = F(z^e, t) with F(X, Y) = sum_j a_j X^j Y^(n - j), n = d / e.
class Family {
public:
    /// Form coefficients listed a_n first.
    Family(std::vector<Rational> coeffs_leading_first, int e);

    int e() const { return e_; }
    int d() const { return d_; }
    int form_degree() const { return static_cast<int>(a_.size()) - 1; }
    bool monic() const { return a_.back() == 1; }
    /// a_j, constant term of F(X, 1) first.
    const std::vector<Rational>& form() const { return a_; }
    const Rational& leading() const { return a_.back(); }
    /// F(X, 1) as a polynomial in X.
    Polynomial dehomogenized() const { return Polynomial(a_); }
    const FactorData& factors() const { return factors_; }

    /// Coefficients of f_t in z, degree exactly d.
    Polynomial specialize(const Rational& t) const;
    /// Form coefficients a_n first (the input order).
    std::vector<Rational> form_leading_first() const;
    std::string describe() const;

private:
    int e_;
    int d_;
    std::vector<Rational> a_;
    FactorData factors_;
};

Family build_family(const std::vector<Rational>& coeffs_leading_first, int e);
Polynomial specialize(const Family& fam, const Rational& t);

/// Exact k-th root of q in Q (the real root for odd k), if it exists.
std::optional<Rational> rational_root(const Rational& q, int k);

struct MonicConjugate {
    Family family;
    Rational alpha;  // g_t(z) = alpha * f_t(z / alpha)
};

std::optional<MonicConjugate> try_monic_normalize(const Family& fam);
/// Throws NormalizationUnavailable when a_n is not an exact (d-1)-th power.
MonicConjugate monic_normalize(const Family& fam);

struct Pole {
    /// Monic irreducible factor of the denominator; empty for infinity.
    Polynomial factor;
    bool at_infinity = false;
    int order = 1;
    /// Number of conjugate poles carried by this factor.
    int count = 1;
};

struct CoverAnalysis {
    Polynomial numer;
    Polynomial denom;
    std::vector<Pole> poles;

    /// phi(t); throws DomainError at a pole.
    Rational operator()(const Rational& t) const;
};

CoverAnalysis analyze_cover(const Polynomial& numer, const Polynomial& denom);

/// 5, 4, 3 for e = 2, 3, >= 4.
int required_poles(int e);

struct EGenerality {
    bool general = false;
    int qualifying = 0;  // affine poles with gcd(order, e) = 1
    int required = 0;
};

EGenerality is_e_general(const CoverAnalysis& cov, int e);

}  // namespace heightforge
