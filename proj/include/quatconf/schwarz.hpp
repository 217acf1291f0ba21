#pragma once

#include <span>
#include <vector>

#include "quatconf/errors.hpp"
#include "quatconf/quaternion.hpp"
#include "quatconf/superconf.hpp"
#include "quatconf/surface.hpp"

namespace quatconf {

inline constexpr double kMobiusTolerance = 1e-10;

// a -> (p a + q)(r a + s)^-1.
struct BallMobius {
    Quaternion p = Quaternion::one();
    Quaternion q;
    Quaternion r;
    Quaternion s = Quaternion::one();

    // c (1, -a1, -conj(a1), 1) with c = (1 - |a1|^2)^(-1/2); sends a1 to 0.
    static BallMobius taking_to_zero(const Quaternion& a1);
    Quaternion operator()(const Quaternion& a) const;
};

struct MobiusCheck {
    bool ok = false;
    // | |p| - |s| |, | |q| - |r| |, | |p|^2 - |r|^2 - 1 |, |conj(p) q - conj(r) s|, |p conj(r) - q conj(s)|
    double residuals[5] = {0, 0, 0, 0, 0};
};

MobiusCheck mobius_ball_check(const Quaternion& p, const Quaternion& q, const Quaternion& r, const Quaternion& s);
MobiusCheck mobius_ball_check(const BallMobius& m);

// (a - a1)(1 - conj(a1) a)^-1. Throws std::domain_error if |a1| >= 1.
Quaternion apply_mobius(const Quaternion& a1, const Quaternion& a);
// Disk automorphism (z - z1)/(1 - conj(z1) z) and its inverse.
Complex disk_mobius(Complex z1, Complex z);
Complex disk_mobius_inverse(Complex z1, Complex w);

struct SchwarzReport {
    double c = 0.0;        // sup |psi| on the grid
    double c_tilde = 0.0;  // sup |psi^-1| on the grid
    double C0 = 0.0;       // sup |lambda_0| on the unit circle
    double C1 = 0.0;
    // c (C0^2 + C1^2)^(1/2).
    double bound = 0.0;
    // max over the grid of |f(z)| - bound |z|.
    double max_violation = 0.0;
    Complex worst{};
    // Grid points with |f(z)| >= (1 - 1e-9) bound |z| > 0.
    std::size_t equality_points = 0;
    // |f_x(0) - N(0) f_y(0)| - bound, as stated; equals 2|f_x(0)| - bound.
    double derivative_slack_literal = 0.0;
    // |f_x(0)| - bound.
    double derivative_slack = 0.0;
    std::size_t samples = 0;
};

// f on the unit disk with f(0) = 0; HypothesisError otherwise.
SchwarzReport bound_constants(const FactoredMap& f, std::span<const Complex> grid);

struct PickReport {
    Complex z1{};
    Quaternion f1;
    // Schwarz data of g = Theta(f o tau^-1) with Theta(a) = (a - f1)(1 - conj(f1) a)^-1.
    SchwarzReport g;
    // Constant of the Pick inequalities (the Schwarz bound of g), and
    // C = C_tilde ((1 - |z1|^2)/(1 - |f1|^2))^(1/2).
    double C_tilde = 0.0;
    double C = 0.0;
    double gap = 0.0;  // avoided cap of the left normal of g
    // max over the grid of |Theta(f(z))| - C_tilde |tau(z)|.
    double max_violation = 0.0;
    Complex worst{};
    // |f_x(z1)|/(1 - |f1|^2) - C_tilde/(1 - |z1|^2).
    double derivative_slack = 0.0;
    std::size_t samples = 0;
};

// Requires sup |f| < 1 on the grid and a non-surjective left normal of g
// (HypothesisError otherwise).
PickReport pick_check(const FactoredMap& f, Complex z1, std::span<const Complex> grid);

// |f_x(z)|^2 (1 - |z|^2)^2 / (1 - |f(z)|^2)^2. Throws std::domain_error when
// |z| >= 1 or |f(z)| >= 1.
double poincare_ratio(const SurfaceMap& f, Complex z);

// The unit disk of the Schwarz checks (margin from its step).
PlanarDomain schwarz_disk(int resolution, double h = 1e-3);

}  // namespace quatconf
