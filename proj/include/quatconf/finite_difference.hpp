#pragma once

#include <complex>

#include "quatconf/taylor.hpp"

namespace quatconf {

// Second-order Taylor data of a quaternion-valued map from central
// differences with step h:
//   f_x  = (f(z+h) - f(z-h)) / 2h
//   f_xx = (f(z+h) - 2 f(z) + f(z-h)) / h^2
//   f_xy = (f(z+h+ih) - f(z+h-ih) - f(z-h+ih) + f(z-h-ih)) / 4h^2
// All entries carry O(h^2) truncation error.
template <typename Map>
QJet<2> fd_jet2(const Map& f, std::complex<double> z, double h) {
    const std::complex<double> dx(h, 0.0);
    const std::complex<double> dy(0.0, h);
    const Quaternion c = f(z);
    const Quaternion xp = f(z + dx);
    const Quaternion xm = f(z - dx);
    const Quaternion yp = f(z + dy);
    const Quaternion ym = f(z - dy);
    const Quaternion pp = f(z + dx + dy);
    const Quaternion pm = f(z + dx - dy);
    const Quaternion mp = f(z - dx + dy);
    const Quaternion mm = f(z - dx - dy);

    const Quaternion fx = (xp - xm) / (2.0 * h);
    const Quaternion fy = (yp - ym) / (2.0 * h);
    const Quaternion fxx = (xp - 2.0 * c + xm) / (h * h);
    const Quaternion fyy = (yp - 2.0 * c + ym) / (h * h);
    const Quaternion fxy = (pp - pm - mp + mm) / (4.0 * h * h);

    QJet<2> out = constant_jet<2>(c);
    auto set = [&](int a, int b, const Quaternion& q) {
        out.w(a, b) = q.w;
        out.x(a, b) = q.x;
        out.y(a, b) = q.y;
        out.z(a, b) = q.z;
    };
    set(1, 0, fx);
    set(0, 1, fy);
    set(2, 0, 0.5 * fxx);
    set(1, 1, fxy);
    set(0, 2, 0.5 * fyy);
    return out;
}

// First-order data only: value, f_x, f_y.
template <typename Map>
QJet<1> fd_jet1(const Map& f, std::complex<double> z, double h) {
    const std::complex<double> dx(h, 0.0);
    const std::complex<double> dy(0.0, h);
    const Quaternion fx = (f(z + dx) - f(z - dx)) / (2.0 * h);
    const Quaternion fy = (f(z + dy) - f(z - dy)) / (2.0 * h);
    QJet<1> out = constant_jet<1>(f(z));
    out.w(1, 0) = fx.w;
    out.x(1, 0) = fx.x;
    out.y(1, 0) = fx.y;
    out.z(1, 0) = fx.z;
    out.w(0, 1) = fy.w;
    out.x(0, 1) = fy.x;
    out.y(0, 1) = fy.y;
    out.z(0, 1) = fy.z;
    return out;
}

}  // namespace quatconf
