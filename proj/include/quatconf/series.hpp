#pragma once

#include "quatconf/cfun.hpp"
#include "quatconf/taylor.hpp"

namespace quatconf {

// Real (x, y) Taylor series of holomorphic building blocks at z.

template <int K>
CTaylor<K> series_of(const CPolynomial& p, Complex z) {
    std::vector<Complex> t = p.taylor_shift(z);
    t.resize(K + 1, Complex{});
    return holomorphic_series<K>(t);
}

// Throws std::domain_error at a pole.
template <int K>
CTaylor<K> series_of(const RationalMap& r, Complex z) {
    const std::vector<Complex> t = r.taylor(z, K);
    return holomorphic_series<K>(t);
}

template <int K>
CTaylor<K> conj_series(const CTaylor<K>& c) {
    return {c.re, -c.im};
}

// l0 + l1 j
template <int K>
QJet<K> lambda_series(const RationalMap& l0, const RationalMap& l1, Complex z) {
    return pair_series<K>(series_of<K>(l0, z), series_of<K>(l1, z));
}

// c0 + j c1 = (Re c0, Im c0, Re c1, -Im c1)
template <int K>
QJet<K> j_pair_series(const CTaylor<K>& c0, const CTaylor<K>& c1) {
    return {c0.re, c0.im, c1.re, -c1.im};
}

}  // namespace quatconf
