#pragma once

#include <ostream>

#include "quatconf/quaternion.hpp"

namespace quatconf {

// H-valued one-form at a point, stored by its values on d/dx and d/dy.
struct OneFormValue {
    Quaternion wx;
    Quaternion wy;

    OneFormValue conj() const { return {wx.conj(), wy.conj()}; }
};

inline OneFormValue operator+(const OneFormValue& a, const OneFormValue& b) { return {a.wx + b.wx, a.wy + b.wy}; }
inline OneFormValue operator-(const OneFormValue& a, const OneFormValue& b) { return {a.wx - b.wx, a.wy - b.wy}; }
inline OneFormValue operator-(const OneFormValue& a) { return {-a.wx, -a.wy}; }
inline OneFormValue operator*(double s, const OneFormValue& a) { return {s * a.wx, s * a.wy}; }
inline OneFormValue operator*(const Quaternion& q, const OneFormValue& a) { return {q * a.wx, q * a.wy}; }
inline OneFormValue operator*(const OneFormValue& a, const Quaternion& q) { return {a.wx * q, a.wy * q}; }

// Largest of |wx|, |wy|.
double norm(const OneFormValue& a);

// Two-form on (d/dx, d/dy) with its real pairing.
struct TwoFormValue {
    Quaternion q;
    double re = 0.0;
};

// Hodge star, (*w)(X) = w(JX):  (wx, wy) -> (wy, -wx).
OneFormValue star(const OneFormValue& w);

enum class Side { left, right };
enum class Sign { plus, minus };

// Left part  w_N = (w - N *w) / 2   with  *w_N = N w_N,
// right part w^N = (w - *w N) / 2   with  *w^N = w^N N,
// for N replaced by -N when sign is minus. N must be a unit imaginary
// quaternion to 1e-10, else std::domain_error.
OneFormValue n_part(const OneFormValue& w, const Quaternion& N, Side side, Sign sign);

// (w ^ e)(d/dx, d/dy):  q = w_x e_y - w_y e_x,  re = <w_x, e_y> - <w_y, e_x>.
TwoFormValue wedge_pair(const OneFormValue& w, const OneFormValue& e);

// Real pairing <*w ^ e> / 2 = (<w_x, e_x> + <w_y, e_y>) / 2, the density of
// the pairings that enter the Gauss and normal curvatures.
double star_pairing(const OneFormValue& w, const OneFormValue& e);

std::ostream& operator<<(std::ostream& os, const OneFormValue& w);

}  // namespace quatconf
