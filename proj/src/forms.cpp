#include "quatconf/forms.hpp"

#include <algorithm>

namespace quatconf {

double norm(const OneFormValue& a) { return std::max(norm(a.wx), norm(a.wy)); }

OneFormValue star(const OneFormValue& w) { return {w.wy, -w.wx}; }

OneFormValue n_part(const OneFormValue& w, const Quaternion& N, Side side, Sign sign) {
    if (!is_unit_imaginary(N, 1e-10)) {
        throw std::domain_error("n_part: N is not a unit imaginary quaternion");
    }
    const Quaternion n = sign == Sign::plus ? N : -N;
    const OneFormValue s = star(w);
    const OneFormValue t = side == Side::left ? n * s : s * n;
    return 0.5 * (w - t);
}

TwoFormValue wedge_pair(const OneFormValue& w, const OneFormValue& e) {
    return {w.wx * e.wy - w.wy * e.wx, inner(w.wx, e.wy) - inner(w.wy, e.wx)};
}

double star_pairing(const OneFormValue& w, const OneFormValue& e) {
    return 0.5 * (inner(w.wx, e.wx) + inner(w.wy, e.wy));
}

std::ostream& operator<<(std::ostream& os, const OneFormValue& w) {
    return os << "{dx: " << w.wx << ", dy: " << w.wy << "}";
}

}  // namespace quatconf
