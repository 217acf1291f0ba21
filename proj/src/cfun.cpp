#include "quatconf/cfun.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace quatconf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Rational = boost::multiprecision::cpp_rational;
using RationalPoly = std::vector<Rational>;

void trim_exact(RationalPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a / b over Q; b nonzero.
RationalPoly exact_remainder(RationalPoly a, const RationalPoly& b) {
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t n = 0; n <= db; ++n) a[shift + n] -= factor * b[n];
        a.pop_back();
        trim_exact(a);
    }
    return a;
}

RationalPoly exact_quotient(RationalPoly a, const RationalPoly& b) {
    if (a.size() < b.size()) return {};
    RationalPoly q(a.size() - b.size() + 1);
    while (a.size() >= b.size() && !a.empty()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = factor;
        for (std::size_t n = 0; n < b.size(); ++n) a[shift + n] -= factor * b[n];
        a.pop_back();
        trim_exact(a);
    }
    return q;
}

RationalPoly exact_gcd(RationalPoly a, RationalPoly b) {
    trim_exact(a);
    trim_exact(b);
    while (!b.empty()) {
        RationalPoly r = exact_remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

RationalPoly to_exact(const CPolynomial& p) {
    RationalPoly out;
    out.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients()) {
        out.emplace_back(static_cast<long long>(c.real()));
    }
    return out;
}

CPolynomial from_exact(const RationalPoly& p) {
    std::vector<Complex> c;
    c.reserve(p.size());
    for (const auto& r : p) c.emplace_back(static_cast<double>(r), 0.0);
    return CPolynomial(std::move(c));
}

}  // namespace

bool operator==(const SpherePoint& a, const SpherePoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
}

std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
    if (p.infinite) return os << "inf";
    const auto flags = os.flags();
    os << std::setprecision(17) << '[' << p.value.real() << ", " << p.value.imag() << ']';
    os.flags(flags);
    return os;
}

// ---------------------------------------------------------------------------
// CPolynomial

CPolynomial::CPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

CPolynomial::CPolynomial(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) { trim(); }

CPolynomial CPolynomial::monomial(int degree, Complex c) {
    std::vector<Complex> v(static_cast<std::size_t>(degree) + 1, 0.0);
    v.back() = c;
    return CPolynomial(std::move(v));
}

void CPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Complex CPolynomial::coefficient(int n) const {
    if (n < 0 || n > degree()) return {};
    return coeffs_[static_cast<std::size_t>(n)];
}

Complex CPolynomial::operator()(Complex z) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::pair<Complex, Complex> CPolynomial::evaluate_with_derivative(Complex z) const {
    Complex p{};
    Complex dp{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

double CPolynomial::magnitude_bound(Complex z) const {
    const double r = std::abs(z);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

CPolynomial CPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t n = 1; n < coeffs_.size(); ++n) d[n - 1] = coeffs_[n] * static_cast<double>(n);
    return CPolynomial(std::move(d));
}

std::vector<Complex> CPolynomial::taylor_shift(Complex p) const {
    // Repeated synthetic division by (z - p).
    std::vector<Complex> work = coeffs_;
    const std::size_t n = work.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = n - 1; m > k; --m) work[m - 1] += p * work[m];
    }
    return work;
}

CPolynomial CPolynomial::deflate(Complex p) const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Complex> q(coeffs_.size() - 1);
    Complex carry{};
    for (std::size_t m = coeffs_.size() - 1; m >= 1; --m) {
        carry = coeffs_[m] + carry * p;
        q[m - 1] = carry;
    }
    return CPolynomial(std::move(q));
}

bool CPolynomial::is_integral() const {
    constexpr double kMaxExact = 9007199254740992.0;  // 2^53
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
        return c.imag() == 0.0 && std::abs(c.real()) < kMaxExact && std::floor(c.real()) == c.real();
    });
}

CPolynomial operator+(const CPolynomial& a, const CPolynomial& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t n = 0; n < a.coeffs_.size(); ++n) c[n] += a.coeffs_[n];
    for (std::size_t n = 0; n < b.coeffs_.size(); ++n) c[n] += b.coeffs_[n];
    return CPolynomial(std::move(c));
}

CPolynomial operator-(const CPolynomial& a, const CPolynomial& b) { return a + b * Complex(-1.0); }

CPolynomial operator*(const CPolynomial& a, const CPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t m = 0; m < a.coeffs_.size(); ++m) {
        for (std::size_t n = 0; n < b.coeffs_.size(); ++n) c[m + n] += a.coeffs_[m] * b.coeffs_[n];
    }
    return CPolynomial(std::move(c));
}

CPolynomial operator*(const CPolynomial& a, Complex s) {
    std::vector<Complex> c = a.coeffs_;
    for (auto& v : c) v *= s;
    return CPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Roots

std::vector<Complex> find_roots(const CPolynomial& poly) {
    std::vector<Complex> roots;
    if (poly.degree() <= 0) return roots;

    // Exact zeros at the origin come off first.
    std::vector<Complex> coeffs = poly.coefficients();
    std::size_t zero_count = 0;
    while (zero_count < coeffs.size() && coeffs[zero_count] == Complex{}) ++zero_count;
    roots.assign(zero_count, Complex{});
    const CPolynomial p(std::vector<Complex>(coeffs.begin() + static_cast<std::ptrdiff_t>(zero_count), coeffs.end()));
    const int n = p.degree();
    if (n <= 0) return roots;
    if (n == 1) {
        roots.push_back(-p.coefficient(0) / p.coefficient(1));
        return roots;
    }

    // Start on a circle of radius (|a0| / |an|)^(1/n), slightly rotated so that
    // symmetric polynomials do not stall.
    const double radius = std::pow(std::abs(p.coefficient(0)) / std::abs(p.leading()), 1.0 / n);
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
        z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
    }

    std::vector<bool> done(z.size(), false);
    constexpr int kMaxIterations = 2000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        bool all_done = true;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (done[k]) continue;
            const auto [pv, dpv] = p.evaluate_with_derivative(z[k]);
            // Stop once the residual is at the rounding level of Horner's rule.
            if (std::abs(pv) <= 4.0 * n * kEps * p.magnitude_bound(z[k])) {
                done[k] = true;
                continue;
            }
            all_done = false;
            Complex sum{};
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            }
            Complex step;
            if (dpv == Complex{}) {
                step = pv / (pv * sum);
            } else {
                const Complex ratio = pv / dpv;
                step = ratio / (1.0 - ratio * sum);
            }
            z[k] -= step;
            if (std::abs(step) <= kEps * std::abs(z[k])) done[k] = true;
        }
        if (all_done) break;
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

std::vector<RootCluster> distinct_roots(const CPolynomial& poly, double tol) {
    const std::vector<Complex> z = find_roots(poly);
    const std::size_t m = z.size();
    if (m == 0) return {};

    // Inclusion radii n |p(z_k)| / |a_n prod_{j != k} (z_k - z_j)|, with the
    // rounding error of the evaluation folded into |p(z_k)|.
    const double n = static_cast<double>(poly.degree());
    std::vector<double> radius(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double residual = std::abs(poly(z[k])) + 4.0 * n * kEps * poly.magnitude_bound(z[k]);
        double denom = std::abs(poly.leading());
        for (std::size_t j = 0; j < m; ++j) {
            if (j != k) denom *= std::abs(z[k] - z[j]);
        }
        radius[k] = denom > 0.0 ? n * residual / denom : std::numeric_limits<double>::infinity();
    }

    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d = std::abs(z[a] - z[b]);
            const double scale = std::max({1.0, std::abs(z[a]), std::abs(z[b])});
            if (d <= radius[a] + radius[b] || d <= tol * scale) parent[find(a)] = find(b);
        }
    }

    std::vector<RootCluster> clusters;
    std::vector<std::size_t> root_of(m);
    std::vector<std::size_t> order;
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t r = find(a);
        auto it = std::find(order.begin(), order.end(), r);
        if (it == order.end()) {
            order.push_back(r);
            clusters.push_back({z[a], 1});
        } else {
            auto& c = clusters[static_cast<std::size_t>(it - order.begin())];
            c.point += z[a];
            c.multiplicity += 1;
        }
    }
    for (auto& c : clusters) c.point /= static_cast<double>(c.multiplicity);

    // The centroid of a multiple root is only as good as the cluster is
    // symmetric. A root of multiplicity m is a simple root of the (m-1)-th
    // derivative, where Newton converges quadratically.
    for (auto& c : clusters) {
        CPolynomial q = poly;
        for (int d = 1; d < c.multiplicity; ++d) q = q.derivative();
        const Complex start = c.point;
        const double leash = std::max(1e-6, 1e-3 * std::max(1.0, std::abs(start)));
        Complex x = start;
        for (int iter = 0; iter < 20; ++iter) {
            const auto [v, dv] = q.evaluate_with_derivative(x);
            if (dv == Complex{}) break;
            const Complex step = v / dv;
            x -= step;
            if (std::abs(step) <= 2.0 * kEps * std::max(1.0, std::abs(x))) break;
        }
        if (std::isfinite(x.real()) && std::isfinite(x.imag()) && std::abs(x - start) <= leash) c.point = x;
    }
    // Deterministic order: by real part, then imaginary part.
    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
        return a.point.imag() < b.point.imag();
    });
    return clusters;
}

int multiplicity_at(const CPolynomial& poly, Complex p, double tol) {
    if (poly.is_zero()) {
        throw std::domain_error("multiplicity_at: zero polynomial");
    }
    const std::vector<Complex> t = poly.taylor_shift(p);
    double scale = 0.0;
    for (const auto& c : t) scale = std::max(scale, std::abs(c));
    int m = 0;
    while (m < static_cast<int>(t.size()) - 1 && std::abs(t[static_cast<std::size_t>(m)]) <= tol * scale) ++m;
    return m;
}

// ---------------------------------------------------------------------------
// RationalMap

RationalMap::RationalMap(CPolynomial numerator, CPolynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) {
        throw std::invalid_argument("RationalMap: zero denominator");
    }
    reduce();
}

RationalMap::RationalMap(CPolynomial polynomial) : num_(std::move(polynomial)), den_({1.0}) {}

RationalMap RationalMap::from_reduced(CPolynomial numerator, CPolynomial denominator) {
    if (denominator.is_zero()) {
        throw std::invalid_argument("RationalMap: zero denominator");
    }
    RationalMap r;
    r.num_ = std::move(numerator);
    r.den_ = std::move(denominator);
    r.normalize();
    return r;
}

void RationalMap::normalize() {
    const Complex lead = den_.leading();
    if (lead != Complex(1.0)) {
        num_ = num_ * (1.0 / lead);
        den_ = den_ * (1.0 / lead);
    }
}

void RationalMap::reduce() {
    if (num_.is_zero()) {
        den_ = CPolynomial({1.0});
        return;
    }
    if (den_.degree() == 0 || num_.degree() == 0) {
        normalize();
        return;
    }
    if (num_.is_integral() && den_.is_integral()) {
        const RationalPoly a = to_exact(num_);
        const RationalPoly b = to_exact(den_);
        const RationalPoly g = exact_gcd(a, b);
        if (g.size() > 1) {
            RationalPoly qa = exact_quotient(a, g);
            RationalPoly qb = exact_quotient(b, g);
            const Rational lead = qb.back();
            for (auto& c : qa) c /= lead;
            for (auto& c : qb) c /= lead;
            num_ = from_exact(qa);
            den_ = from_exact(qb);
            return;
        }
        normalize();
        return;
    }
    for (const auto& cluster : distinct_roots(num_)) {
        const int shared = std::min(cluster.multiplicity, multiplicity_at(den_, cluster.point));
        for (int n = 0; n < shared; ++n) {
            num_ = num_.deflate(cluster.point);
            den_ = den_.deflate(cluster.point);
        }
    }
    normalize();
}

SpherePoint RationalMap::evaluate(const SpherePoint& z) const {
    if (num_.is_zero()) return SpherePoint(0.0);
    if (z.infinite) {
        if (num_.degree() > den_.degree()) return SpherePoint::infinity();
        if (num_.degree() < den_.degree()) return SpherePoint(0.0);
        return SpherePoint(num_.leading() / den_.leading());
    }
    const Complex d = den_(z.value);
    if (d == Complex{} ||
        (std::abs(d) <= kRootTolerance * den_.magnitude_bound(z.value) && order_at(z) < 0)) {
        return SpherePoint::infinity();
    }
    return SpherePoint(num_(z.value) / d);
}

Complex RationalMap::operator()(Complex z) const {
    const Complex d = den_(z);
    if (d == Complex{}) {
        throw std::domain_error("RationalMap: evaluation at a pole");
    }
    return num_(z) / d;
}

RationalMap RationalMap::derivative() const {
    CPolynomial n = num_.derivative() * den_ - num_ * den_.derivative();
    CPolynomial d = den_ * den_;
    return RationalMap(std::move(n), std::move(d));
}

int RationalMap::order_at(const SpherePoint& p) const {
    if (num_.is_zero()) {
        throw std::domain_error("order_at: the zero function has no order");
    }
    if (p.infinite) return den_.degree() - num_.degree();
    return multiplicity_at(num_, p.value) - multiplicity_at(den_, p.value);
}

std::vector<Complex> RationalMap::taylor(Complex z0, int order) const {
    const std::vector<Complex> n = num_.taylor_shift(z0);
    const std::vector<Complex> d = den_.taylor_shift(z0);
    if (d.empty() || d[0] == Complex{}) {
        throw std::domain_error("RationalMap::taylor: expansion point is a pole");
    }
    auto at = [](const std::vector<Complex>& v, int k) {
        return k < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(k)] : Complex{};
    };
    std::vector<Complex> q(static_cast<std::size_t>(order) + 1);
    for (int m = 0; m <= order; ++m) {
        Complex acc = at(n, m);
        for (int i = 1; i <= m; ++i) acc -= at(d, i) * q[static_cast<std::size_t>(m - i)];
        q[static_cast<std::size_t>(m)] = acc / d[0];
    }
    return q;
}

RationalMap operator*(const RationalMap& a, const RationalMap& b) {
    return RationalMap(a.num_ * b.num_, a.den_ * b.den_);
}

RationalMap operator+(const RationalMap& a, const RationalMap& b) {
    return RationalMap(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalMap operator*(const RationalMap& a, Complex s) {
    return RationalMap::from_reduced(a.num_ * s, a.den_);
}

// ---------------------------------------------------------------------------
// Divisors

Divisor::Divisor(std::vector<DivisorEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t a = 0; a < entries_.size(); ++a) {
        if (entries_[a].order == 0) {
            throw std::invalid_argument("Divisor: zero order entry");
        }
        for (std::size_t b = a + 1; b < entries_.size(); ++b) {
            if (entries_[a].point == entries_[b].point) {
                throw std::invalid_argument("Divisor: repeated point");
            }
        }
    }
}

int Divisor::degree() const {
    int d = 0;
    for (const auto& e : entries_) d += e.order;
    return d;
}

int Divisor::order_at(const SpherePoint& p, double tol) const {
    for (const auto& e : entries_) {
        if (e.point.infinite || p.infinite) {
            if (e.point.infinite && p.infinite) return e.order;
            continue;
        }
        if (std::abs(e.point.value - p.value) <= tol * std::max(1.0, std::abs(p.value))) return e.order;
    }
    return 0;
}

Divisor Divisor::zero_part() const {
    std::vector<DivisorEntry> out;
    for (const auto& e : entries_) {
        if (e.order > 0) out.push_back(e);
    }
    return Divisor(std::move(out));
}

Divisor Divisor::polar_part() const {
    std::vector<DivisorEntry> out;
    for (const auto& e : entries_) {
        if (e.order < 0) out.push_back({e.point, -e.order});
    }
    return Divisor(std::move(out));
}

bool same_divisor(const Divisor& a, const Divisor& b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& e : a.entries()) {
        if (b.order_at(e.point, tol) != e.order) return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const Divisor& d) {
    os << '{';
    bool first = true;
    for (const auto& e : d.entries()) {
        if (!first) os << ", ";
        first = false;
        os << '(' << e.point << ", " << e.order << ')';
    }
    return os << '}';
}

RationalMap from_divisor(const Divisor& d) {
    CPolynomial num({1.0});
    CPolynomial den({1.0});
    int finite_degree = 0;
    std::optional<int> at_infinity;
    for (const auto& e : d.entries()) {
        if (e.point.infinite) {
            at_infinity = e.order;
            continue;
        }
        finite_degree += e.order;
        const CPolynomial factor = CPolynomial::linear_factor(e.point.value);
        for (int n = 0; n < std::abs(e.order); ++n) {
            if (e.order > 0) {
                num = num * factor;
            } else {
                den = den * factor;
            }
        }
    }
    if (at_infinity && *at_infinity != -finite_degree) {
        throw std::invalid_argument("from_divisor: order at infinity must equal minus the finite degree");
    }
    return RationalMap::from_reduced(std::move(num), std::move(den));
}

Divisor divisor_of(const RationalMap& r) {
    std::vector<DivisorEntry> entries;
    for (const auto& z : r.zeros()) entries.push_back({SpherePoint(z.point), z.multiplicity});
    for (const auto& p : r.poles()) entries.push_back({SpherePoint(p.point), -p.multiplicity});
    return Divisor(std::move(entries));
}

}  // namespace quatconf
