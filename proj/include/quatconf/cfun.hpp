#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <vector>

namespace quatconf {

using Complex = std::complex<double>;

// A point of CP^1: a complex number or the point at infinity.
struct SpherePoint {
    Complex value{};
    bool infinite = false;

    SpherePoint() = default;
    SpherePoint(Complex z) : value(z) {}  // NOLINT: finite points convert implicitly
    SpherePoint(double x) : value(x) {}   // NOLINT
    static SpherePoint infinity() {
        SpherePoint p;
        p.infinite = true;
        return p;
    }
};

bool operator==(const SpherePoint& a, const SpherePoint& b);
std::ostream& operator<<(std::ostream& os, const SpherePoint& p);

// Default clustering tolerance for roots and common factors.
inline constexpr double kRootTolerance = 1e-8;

// Polynomial with complex coefficients, lowest degree first. Trailing zero
// coefficients are trimmed, so the zero polynomial has no coefficients and
// degree -1.
class CPolynomial {
public:
    CPolynomial() = default;
    explicit CPolynomial(std::vector<Complex> coeffs);
    CPolynomial(std::initializer_list<Complex> coeffs);

    static CPolynomial constant(Complex c) { return CPolynomial({c}); }
    static CPolynomial monomial(int degree, Complex c = 1.0);
    // (z - p)
    static CPolynomial linear_factor(Complex p) { return CPolynomial({-p, 1.0}); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Complex>& coefficients() const { return coeffs_; }
    Complex coefficient(int n) const;
    Complex leading() const { return coeffs_.empty() ? Complex{} : coeffs_.back(); }

    Complex operator()(Complex z) const;
    // Value together with the first derivative.
    std::pair<Complex, Complex> evaluate_with_derivative(Complex z) const;
    // Sum of |a_n| |z|^n, the scale of the rounding error of operator()(z).
    double magnitude_bound(Complex z) const;

    CPolynomial derivative() const;
    // Coefficients of t -> P(p + t), i.e. P^(n)(p) / n!.
    std::vector<Complex> taylor_shift(Complex p) const;
    // Quotient by (z - p), remainder discarded.
    CPolynomial deflate(Complex p) const;

    // All coefficients real and integral (exact arithmetic fast path applies).
    bool is_integral() const;

    friend CPolynomial operator+(const CPolynomial& a, const CPolynomial& b);
    friend CPolynomial operator-(const CPolynomial& a, const CPolynomial& b);
    friend CPolynomial operator*(const CPolynomial& a, const CPolynomial& b);
    friend CPolynomial operator*(const CPolynomial& a, Complex s);

private:
    void trim();
    std::vector<Complex> coeffs_;
};

// Roots with multiplicity, one entry per distinct root.
struct RootCluster {
    Complex point;
    int multiplicity = 1;
};

// All roots (with repetition) by Aberth-Ehrlich simultaneous iteration.
std::vector<Complex> find_roots(const CPolynomial& p);

// Distinct roots: Aberth roots grouped by overlapping inclusion discs (or
// distance below tol), each group replaced by its centroid.
std::vector<RootCluster> distinct_roots(const CPolynomial& p, double tol = kRootTolerance);

// Multiplicity of p as a root: number of leading Taylor coefficients at p that
// vanish relative to the largest one, at relative tolerance tol.
int multiplicity_at(const CPolynomial& poly, Complex p, double tol = kRootTolerance);

// Reduced ratio of complex polynomials; the denominator is kept monic and
// never zero. Numerator and denominator share no root (to kRootTolerance).
class RationalMap {
public:
    RationalMap() : num_(), den_({1.0}) {}
    RationalMap(CPolynomial numerator, CPolynomial denominator);
    explicit RationalMap(CPolynomial polynomial);
    // Skips common-factor removal; the caller guarantees coprime inputs.
    static RationalMap from_reduced(CPolynomial numerator, CPolynomial denominator);

    static RationalMap constant(Complex c) { return RationalMap(CPolynomial::constant(c)); }
    static RationalMap identity() { return RationalMap(CPolynomial({0.0, 1.0})); }

    const CPolynomial& numerator() const { return num_; }
    const CPolynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    // Value on CP^1; poles map to infinity, infinity to the ratio of leading terms.
    SpherePoint evaluate(const SpherePoint& z) const;
    // Finite value at a non-pole; throws std::domain_error at a pole.
    Complex operator()(Complex z) const;

    RationalMap derivative() const;
    // Zero order (positive) or pole order (negative) at p. Throws
    // std::domain_error for the zero function.
    int order_at(const SpherePoint& p) const;
    // max(deg numerator, deg denominator)
    int degree() const { return std::max(num_.degree(), den_.degree()); }

    // Taylor coefficients r^(n)(z0)/n!, n = 0..order. Throws at a pole.
    std::vector<Complex> taylor(Complex z0, int order) const;

    std::vector<RootCluster> zeros() const { return distinct_roots(num_); }
    std::vector<RootCluster> poles() const { return distinct_roots(den_); }

    friend RationalMap operator*(const RationalMap& a, const RationalMap& b);
    friend RationalMap operator+(const RationalMap& a, const RationalMap& b);
    friend RationalMap operator*(const RationalMap& a, Complex s);

private:
    void reduce();
    void normalize();
    CPolynomial num_;
    CPolynomial den_;
};

struct DivisorEntry {
    SpherePoint point;
    int order = 0;
};

// Finite divisor on CP^1: distinct points with nonzero integer orders.
class Divisor {
public:
    Divisor() = default;
    // Throws std::invalid_argument on a zero order or a repeated point.
    explicit Divisor(std::vector<DivisorEntry> entries);

    const std::vector<DivisorEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    int degree() const;
    // Order at p, matching points within tol.
    int order_at(const SpherePoint& p, double tol = 1e-8) const;

    Divisor zero_part() const;
    Divisor polar_part() const;  // P with (f) = Z - P; orders reported positive

private:
    std::vector<DivisorEntry> entries_;
};

// Same support (within tol) and the same orders.
bool same_divisor(const Divisor& a, const Divisor& b, double tol = 1e-8);

std::ostream& operator<<(std::ostream& os, const Divisor& d);

// prod (z - p_k)^{n_k} over the finite entries. An entry at infinity must carry
// the forced order -deg(finite part); anything else throws std::invalid_argument.
RationalMap from_divisor(const Divisor& d);

// Divisor of r over the finite plane (zeros and poles with orders).
Divisor divisor_of(const RationalMap& r);

}  // namespace quatconf
