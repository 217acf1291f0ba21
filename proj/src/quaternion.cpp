#include "quatconf/quaternion.hpp"

#include <iomanip>

namespace quatconf {

Quaternion inverse(const Quaternion& a) {
    const double n2 = a.norm2();
    if (n2 == 0.0) {
        throw std::domain_error("quaternion inverse of zero");
    }
    return a.conj() / n2;
}

Quaternion normalized(const Quaternion& a) {
    const double n = norm(a);
    if (n == 0.0) {
        throw std::domain_error("cannot normalize the zero quaternion");
    }
    return a / n;
}

Quaternion rotation_taking(const Quaternion& u, const Quaternion& v) {
    // For pure units, 1 - v u = 1 + <v,u> - v x u, which vanishes only at v = -u.
    const Quaternion a = Quaternion::one() - v * u;
    if (norm(a) < 1e-12) {
        throw std::domain_error(
            "rotation_taking: antipodal unit vectors; compose two quarter-turn rotations instead");
    }
    return normalized(a);
}

std::ostream& operator<<(std::ostream& os, const Quaternion& a) {
    const auto flags = os.flags();
    os << std::setprecision(17) << '[' << a.w << ", " << a.x << ", " << a.y << ", " << a.z << ']';
    os.flags(flags);
    return os;
}

}  // namespace quatconf
