#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

namespace quatconf {

// Quaternion w + x i + y j + z k over a scalar ring T.
//
// T is double for plain values and a truncated Taylor series (see taylor.hpp)
// when a map is differentiated alongside its value. Every operation below only
// needs +, -, * and a reciprocal for inverse(), so both instantiations share
// one implementation of the product.
template <typename T>
struct BasicQuaternion {
    T w{}, x{}, y{}, z{};

    constexpr BasicQuaternion() = default;
    constexpr BasicQuaternion(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}
    // Real scalar.
    constexpr explicit BasicQuaternion(T real) : w(real), x(), y(), z() {}

    static constexpr BasicQuaternion one() { return {T(1.0), T(), T(), T()}; }
    static constexpr BasicQuaternion i() { return {T(), T(1.0), T(), T()}; }
    static constexpr BasicQuaternion j() { return {T(), T(), T(1.0), T()}; }
    static constexpr BasicQuaternion k() { return {T(), T(), T(), T(1.0)}; }

    // The complex plane sits in H as span{1, i}.
    static BasicQuaternion from_complex(const std::complex<double>& c)
        requires std::is_same_v<T, double>
    {
        return {c.real(), c.imag(), 0.0, 0.0};
    }

    // c0 + c1 j with complex c0, c1 (the left C-module splitting H = C + Cj).
    static BasicQuaternion from_pair(const std::complex<double>& c0, const std::complex<double>& c1)
        requires std::is_same_v<T, double>
    {
        // c1 j = (p + q i) j = p j + q k
        return {c0.real(), c0.imag(), c1.real(), c1.imag()};
    }

    constexpr BasicQuaternion conj() const { return {w, -x, -y, -z}; }
    constexpr T real() const { return w; }
    constexpr BasicQuaternion imag() const { return {T(), x, y, z}; }
    constexpr T norm2() const { return w * w + x * x + y * y + z * z; }

    BasicQuaternion& operator+=(const BasicQuaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    BasicQuaternion& operator-=(const BasicQuaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    BasicQuaternion& operator*=(const T& s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

template <typename T>
constexpr BasicQuaternion<T> operator+(BasicQuaternion<T> a, const BasicQuaternion<T>& b) {
    return a += b;
}
template <typename T>
constexpr BasicQuaternion<T> operator-(BasicQuaternion<T> a, const BasicQuaternion<T>& b) {
    return a -= b;
}
template <typename T>
constexpr BasicQuaternion<T> operator-(const BasicQuaternion<T>& a) {
    return {-a.w, -a.x, -a.y, -a.z};
}
template <typename T>
constexpr BasicQuaternion<T> operator*(BasicQuaternion<T> a, const T& s) {
    return a *= s;
}
template <typename T>
constexpr BasicQuaternion<T> operator*(const T& s, BasicQuaternion<T> a) {
    return a *= s;
}

// Hamilton product: ij = k, jk = i, ki = j.
template <typename T>
constexpr BasicQuaternion<T> operator*(const BasicQuaternion<T>& a, const BasicQuaternion<T>& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

using Quaternion = BasicQuaternion<double>;

inline Quaternion operator*(const Quaternion& a, double s) {
    return {a.w * s, a.x * s, a.y * s, a.z * s};
}
inline Quaternion operator*(double s, const Quaternion& a) { return a * s; }
inline Quaternion operator/(const Quaternion& a, double s) { return a * (1.0 / s); }

inline bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

inline double norm(const Quaternion& a) { return std::sqrt(a.norm2()); }

// Euclidean inner product Re(conj(a) b) on H = R^4.
inline double inner(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

// Distance |a - b|.
inline double distance(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

// Throws std::domain_error for a == 0.
Quaternion inverse(const Quaternion& a);

// Multiplicative inverse over a jet ring; T must provide reciprocal(T).
template <typename T>
BasicQuaternion<T> inverse(const BasicQuaternion<T>& a) {
    T r = reciprocal(a.norm2());
    return a.conj() * r;
}

Quaternion normalized(const Quaternion& a);

// Cross product of the imaginary parts, as a pure imaginary quaternion.
inline Quaternion cross(const Quaternion& a, const Quaternion& b) {
    return {0.0, a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline bool is_unit_imaginary(const Quaternion& a, double tol = 1e-10) {
    return std::abs(a.w) <= tol && std::abs(a.norm2() - 1.0) <= tol;
}

// Unit a with a u a^-1 = v for unit imaginary u, v. Built as normalize(1 - v u).
// Throws std::domain_error when v = -u; the caller composes two quarter turns.
Quaternion rotation_taking(const Quaternion& u, const Quaternion& v);

// Complex view of the span{1, i} part.
inline std::complex<double> complex_part(const Quaternion& a) { return {a.w, a.x}; }

// Splits a = c0 + c1 j.
inline std::pair<std::complex<double>, std::complex<double>> split_pair(const Quaternion& a) {
    return {{a.w, a.x}, {a.y, a.z}};
}

std::ostream& operator<<(std::ostream& os, const Quaternion& a);

}  // namespace quatconf
