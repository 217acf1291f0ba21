#pragma once

#include <optional>
#include <vector>

#include "quatconf/cfun.hpp"
#include "quatconf/domain.hpp"
#include "quatconf/errors.hpp"
#include "quatconf/sphere.hpp"
#include "quatconf/surface.hpp"

namespace quatconf {

inline constexpr int kGapResolution = 64;
inline constexpr double kGapThreshold = 0.05;

// psi = N a + a i. It satisfies N psi = psi i and vanishes exactly where
// N = -a i a^-1, so it is nowhere zero when N avoids that point.
class PsiSection {
public:
    PsiSection(SphereMap n, Quaternion a, PlanarDomain domain);

    const SphereMap& normal() const { return n_; }
    const Quaternion& a() const { return a_; }
    const PlanarDomain& domain() const { return domain_; }
    // -a i a^-1, the value N must avoid.
    Quaternion avoided() const;

    Quaternion operator()(Complex z) const { return n_(z) * a_ + a_ * Quaternion::i(); }
    QJet<2> jet2(Complex z) const;
    QJet<3> jet3(Complex z) const;

    // Filled by build_psi.
    double gap = 0.0;           // angular radius of the avoided cap (auto mode)
    double min_modulus = 0.0;   // min |psi| over the domain samples
    double eigen_residual = 0.0;  // max |N psi - psi i| over the domain samples

private:
    SphereMap n_;
    Quaternion a_;
    PlanarDomain domain_;
};

// Chooses the centre q of the largest cap missed by N on a 64 x 64 sample of
// the domain and sets a with a i a^-1 = -q. Throws HypothesisError when the
// cap is thinner than 0.05 rad (N is treated as surjective).
PsiSection build_psi(const SphereMap& n, const PlanarDomain& domain);
// Explicit a (need not be a unit). Throws HypothesisError if psi vanishes on
// the domain samples.
PsiSection build_psi(const SphereMap& n, const PlanarDomain& domain, const Quaternion& a);

// f = psi (l0 + l1 j).
class FactoredMap {
public:
    FactoredMap(PsiSection psi, RationalMap l0, RationalMap l1);

    const PsiSection& psi() const { return psi_; }
    const RationalMap& lambda0() const { return l0_; }
    const RationalMap& lambda1() const { return l1_; }

    // Empty at a pole of l0 or l1.
    std::optional<Quaternion> evaluate(Complex z) const;
    // Throws std::domain_error at a pole.
    Quaternion operator()(Complex z) const;
    QJet<2> jet2(Complex z) const;

    // Finite poles of l0 and l1.
    std::vector<Complex> poles() const;
    // Analytic jets when N is analytic, else differences with the domain step.
    // Disks of radius 2h around poles are excluded.
    SurfaceMap surface() const;

private:
    PsiSection psi_;
    RationalMap l0_;
    RationalMap l1_;
};

// Requires N anti-holomorphic or constant on the section's domain
// (HypothesisError otherwise) and, unless allow_poles, no pole of the l's in
// the domain.
FactoredMap build_superconformal(const PsiSection& psi, const RationalMap& l0, const RationalMap& l1,
                                 bool allow_poles = false);

// f = (l0 + l1 j)^-1 (l2 + l3 j). Throws std::invalid_argument if l0, l1
// share a zero or both vanish. Poles of the l's are excluded with radius 2h.
SurfaceMap build_twistor(const RationalMap& l0, const RationalMap& l1, const RationalMap& l2,
                         const RationalMap& l3, double h = 1e-3);
// Its left normal -(l1 + j l0) i (l1 + j l0)^-1.
SphereMap twistor_left_normal(const RationalMap& l0, const RationalMap& l1);

// (f)(p) = min(ord_p l0, ord_p l1) over finite points, ignoring an
// identically zero l. Throws std::invalid_argument if both vanish.
Divisor divisor_of_factored(const FactoredMap& f);

// f = psi lambda with lambda = from_divisor(d) and psi from build_psi(n, domain).
FactoredMap superconformal_from_divisor(const Divisor& d, const SphereMap& n, const PlanarDomain& domain);

}  // namespace quatconf
