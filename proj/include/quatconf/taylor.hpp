#pragma once

#include <array>
#include <complex>
#include <span>

#include "quatconf/quaternion.hpp"

namespace quatconf {

// Truncated Taylor polynomial in the two real coordinates (x, y) of the plane,
// centred at a base point:  sum_{a+b<=K} c_ab dx^a dy^b.
//
// Arithmetic on these objects is forward-mode differentiation: products and
// reciprocals are truncated at total degree K, so the coefficients stay exact
// Taylor coefficients of the composed map. Derivatives are read back from the
// coefficients (f_x = c10, f_xy = c11, f_xx = 2 c20, ...).
template <int K>
class Taylor2 {
    static_assert(K >= 0);

public:
    static constexpr int kOrder = K;
    static constexpr int kSize = (K + 1) * (K + 2) / 2;

    constexpr Taylor2() : c_{} {}
    constexpr Taylor2(double constant) : c_{} { c_[0] = constant; }  // NOLINT: implicit by design of scalar rings

    // Index of the dx^a dy^b coefficient, grouped by total degree.
    static constexpr int index(int a, int b) {
        const int d = a + b;
        return d * (d + 1) / 2 + b;
    }

    constexpr double operator()(int a, int b) const { return c_[index(a, b)]; }
    constexpr double& operator()(int a, int b) { return c_[index(a, b)]; }

    constexpr double value() const { return c_[0]; }

    static Taylor2 variable_x(double at) {
        Taylor2 t(at);
        if constexpr (K >= 1) t(1, 0) = 1.0;
        return t;
    }
    static Taylor2 variable_y(double at) {
        Taylor2 t(at);
        if constexpr (K >= 1) t(0, 1) = 1.0;
        return t;
    }

    Taylor2& operator+=(const Taylor2& o) {
        for (int n = 0; n < kSize; ++n) c_[n] += o.c_[n];
        return *this;
    }
    Taylor2& operator-=(const Taylor2& o) {
        for (int n = 0; n < kSize; ++n) c_[n] -= o.c_[n];
        return *this;
    }
    Taylor2& operator*=(double s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    Taylor2& operator*=(const Taylor2& o) { return *this = *this * o; }

    friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
    friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
    friend Taylor2 operator-(Taylor2 a) { return a *= -1.0; }
    friend Taylor2 operator*(Taylor2 a, double s) { return a *= s; }
    friend Taylor2 operator*(double s, Taylor2 a) { return a *= s; }

    friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
        Taylor2 r;
        for (int da = 0; da <= K; ++da) {
            for (int ba = 0; ba <= da; ++ba) {
                const double ca = a(da - ba, ba);
                if (ca == 0.0) continue;
                for (int db = 0; db + da <= K; ++db) {
                    for (int bb = 0; bb <= db; ++bb) {
                        r(da - ba + db - bb, ba + bb) += ca * b(db - bb, bb);
                    }
                }
            }
        }
        return r;
    }

    friend Taylor2 reciprocal(const Taylor2& a) {
        // 1/(c (1 + e)) = (1/c) sum_n (-e)^n, e without constant term, n <= K.
        const double c = a.value();
        if (c == 0.0) {
            throw std::domain_error("Taylor2 reciprocal of a series with zero constant term");
        }
        Taylor2 e = a * (1.0 / c);
        e.c_[0] = 0.0;
        Taylor2 sum(1.0);
        Taylor2 power(1.0);
        for (int n = 1; n <= K; ++n) {
            power = power * (-e);
            sum += power;
        }
        return sum * (1.0 / c);
    }
    friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }

    // Partial derivative in x as a series of one order less.
    Taylor2<(K > 0 ? K - 1 : 0)> dx() const {
        static_assert(K > 0, "cannot differentiate an order-0 series");
        Taylor2<K - 1> r;
        for (int d = 0; d < K; ++d) {
            for (int b = 0; b <= d; ++b) {
                const int a = d - b;
                r(a, b) = (a + 1) * (*this)(a + 1, b);
            }
        }
        return r;
    }
    Taylor2<(K > 0 ? K - 1 : 0)> dy() const {
        static_assert(K > 0, "cannot differentiate an order-0 series");
        Taylor2<K - 1> r;
        for (int d = 0; d < K; ++d) {
            for (int b = 0; b <= d; ++b) {
                const int a = d - b;
                r(a, b) = (b + 1) * (*this)(a, b + 1);
            }
        }
        return r;
    }

    template <int L>
    Taylor2<L> truncate() const {
        static_assert(L <= K);
        Taylor2<L> r;
        for (int d = 0; d <= L; ++d) {
            for (int b = 0; b <= d; ++b) r(d - b, b) = (*this)(d - b, b);
        }
        return r;
    }

    // Substitutes dx -> u, dy -> v (both without constant term) into this series:
    // the Taylor series of (this) o (base + (u, v)).
    Taylor2 compose(const Taylor2& u, const Taylor2& v) const {
        std::array<Taylor2, K + 1> upow;
        std::array<Taylor2, K + 1> vpow;
        upow[0] = Taylor2(1.0);
        vpow[0] = Taylor2(1.0);
        for (int n = 1; n <= K; ++n) {
            upow[n] = upow[n - 1] * u;
            vpow[n] = vpow[n - 1] * v;
        }
        Taylor2 r;
        for (int d = 0; d <= K; ++d) {
            for (int b = 0; b <= d; ++b) {
                const double c = (*this)(d - b, b);
                if (c != 0.0) r += (upow[d - b] * vpow[b]) * c;
            }
        }
        return r;
    }

private:
    std::array<double, kSize> c_;
};

using Jet1 = Taylor2<1>;
using Jet2 = Taylor2<2>;
using Jet3 = Taylor2<3>;

template <int K>
using QJet = BasicQuaternion<Taylor2<K>>;

// Complex-valued series, re + i im.
template <int K>
struct CTaylor {
    Taylor2<K> re;
    Taylor2<K> im;
};

// Real Taylor series in (dx, dy) of the holomorphic germ sum_n t[n] (dz)^n, dz = dx + i dy.
template <int K>
CTaylor<K> holomorphic_series(std::span<const std::complex<double>> t) {
    CTaylor<K> out;
    // (dx + i dy)^n = sum_b C(n,b) dx^(n-b) (i dy)^b
    for (int n = 0; n <= K && n < static_cast<int>(t.size()); ++n) {
        double binom = 1.0;
        for (int b = 0; b <= n; ++b) {
            // i^b
            std::complex<double> ib = (b % 4 == 0)   ? std::complex<double>(1, 0)
                                      : (b % 4 == 1) ? std::complex<double>(0, 1)
                                      : (b % 4 == 2) ? std::complex<double>(-1, 0)
                                                     : std::complex<double>(0, -1);
            const std::complex<double> c = t[n] * ib * binom;
            out.re(n - b, b) += c.real();
            out.im(n - b, b) += c.imag();
            binom = binom * (n - b) / (b + 1);
        }
    }
    return out;
}

// Quaternion-valued series lambda0 + lambda1 j.
template <int K>
QJet<K> pair_series(const CTaylor<K>& l0, const CTaylor<K>& l1) {
    return {l0.re, l0.im, l1.re, l1.im};
}

template <int K>
Quaternion value_of(const QJet<K>& q) {
    return {q.w.value(), q.x.value(), q.y.value(), q.z.value()};
}
template <int K>
QJet<K - 1> dx_of(const QJet<K>& q) {
    return {q.w.dx(), q.x.dx(), q.y.dx(), q.z.dx()};
}
template <int K>
QJet<K - 1> dy_of(const QJet<K>& q) {
    return {q.w.dy(), q.x.dy(), q.y.dy(), q.z.dy()};
}
template <int L, int K>
QJet<L> truncate_to(const QJet<K>& q) {
    return {q.w.template truncate<L>(), q.x.template truncate<L>(), q.y.template truncate<L>(),
            q.z.template truncate<L>()};
}
template <int K>
QJet<K> constant_jet(const Quaternion& q) {
    return {Taylor2<K>(q.w), Taylor2<K>(q.x), Taylor2<K>(q.y), Taylor2<K>(q.z)};
}
template <int K>
QJet<K> compose_jet(const QJet<K>& q, const Taylor2<K>& u, const Taylor2<K>& v) {
    return {q.w.compose(u, v), q.x.compose(u, v), q.y.compose(u, v), q.z.compose(u, v)};
}

// Quaternion jet times a constant quaternion, on either side.
template <int K>
QJet<K> operator*(const QJet<K>& a, const Quaternion& b) {
    return a * constant_jet<K>(b);
}
template <int K>
QJet<K> operator*(const Quaternion& a, const QJet<K>& b) {
    return constant_jet<K>(a) * b;
}

}  // namespace quatconf
