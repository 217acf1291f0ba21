#pragma once

#include <vector>

#include "quatconf/cfun.hpp"
#include "quatconf/domain.hpp"
#include "quatconf/errors.hpp"
#include "quatconf/sphere.hpp"
#include "quatconf/surface.hpp"

namespace quatconf {

// |N_x a lambda| at or below this marks a point of the singular set Q.
inline constexpr double kSingularTolerance = 1e-10;

class SingularPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct MuValue {
    Quaternion mu;
    // |psi lambda_y - N_y a lambda mu| / max(|psi lambda_y|, |N_y a lambda mu|), the d/dy check.
    double cross_residual = 0.0;
};

// Holomorphic N, unit a, lambda = l0 + l1 j. With psi = -N a + a i:
//   mu = (N_x a lambda)^-1 psi lambda_x
//   f  = a lambda (mu - 1)
//   g  = -N a lambda mu + a i lambda
//   Phi = f + i g componentwise.
class MinimalPair {
public:
    MinimalPair(SphereMap n, Quaternion a, RationalMap l0, RationalMap l1, PlanarDomain domain,
                std::vector<Complex> singular);

    const SphereMap& normal() const { return n_; }
    const Quaternion& a() const { return a_; }
    const RationalMap& lambda0() const { return l0_; }
    const RationalMap& lambda1() const { return l1_; }
    const PlanarDomain& domain() const { return domain_; }
    // Located points of Q = {N_x lambda = 0} in the domain.
    const std::vector<Complex>& singular_set() const { return singular_; }
    // lambda constant: mu = 0 and f = -a lambda is constant.
    bool degenerate() const { return l0_.is_constant() && l1_.is_constant(); }

    Quaternion lambda(Complex z) const;
    Quaternion psi(Complex z) const { return -(n_(z) * a_) + a_ * Quaternion::i(); }
    MuValue mu(Complex z) const;
    Quaternion f(Complex z) const;
    Quaternion g(Complex z) const;
    // Super-conformal companion psi lambda.
    Quaternion psi_lambda(Complex z) const { return psi(z) * lambda(z); }

    // Analytic jets when N is analytic, otherwise differences with the domain step.
    // Disks of radius 2h around Q are excluded.
    SurfaceMap f_surface() const;
    SurfaceMap g_surface() const;
    SurfaceMap psi_lambda_surface() const;

private:
    template <int K>
    void jets(Complex z, QJet<K>* f, QJet<K>* g) const;

    SphereMap n_;
    Quaternion a_;
    RationalMap l0_;
    RationalMap l1_;
    PlanarDomain domain_;
    std::vector<Complex> singular_;
};

// Throws SingularPointError at points of Q.
MuValue mu_at(const MinimalPair& pair, Complex z);

// Requires N holomorphic (HypothesisError otherwise) and non-constant
// (std::invalid_argument), and l0, l1 without poles in the domain. The
// default a is chosen so that N avoids a i a^-1 on the domain, keeping psi
// nowhere zero.
MinimalPair build_minimal_pair(const SphereMap& n, const RationalMap& l0, const RationalMap& l1,
                               const PlanarDomain& domain);
MinimalPair build_minimal_pair(const SphereMap& n, const RationalMap& l0, const RationalMap& l1,
                               const PlanarDomain& domain, const Quaternion& a);

// Q for a lambda-pair N: zeros of the Wronskian of the reduced pair together
// with common zeros of l0, l1. Sampled N: refined grid minima of |N_x lambda|.
std::vector<Complex> locate_singular_set(const SphereMap& n, const Quaternion& a, const RationalMap& l0,
                                         const RationalMap& l1, const PlanarDomain& domain);

struct MinimalDiagnostics {
    bool degenerate = false;
    std::size_t samples = 0;
    double conjugate_residual = 0.0;  // sup |dg + *df| / |df|
    double null_residual = 0.0;       // sup |sum_m ((Phi_m)_x)^2| / |df|^2
    double conformal_defect = 0.0;    // sup |(|f_x|^2 - |f_y|^2) - 2i<f_x,f_y>| / |df|^2
    double null_conformal_gap = 0.0;  // sup |null - conformal defect| pointwise
    double mean_curvature_f = 0.0;    // sup |H(f)|
    double mean_curvature_g = 0.0;
    double normal_mismatch = 0.0;     // sup of |N_f - N|, |N_g - N|
    double mu_cross_residual = 0.0;   // sup of the d/dy check of mu
};

MinimalDiagnostics minimal_diagnostics(const MinimalPair& pair, std::span<const Complex> grid);
MinimalDiagnostics minimal_diagnostics(const MinimalPair& pair);

struct BranchZeroReport {
    std::vector<Complex> branch_points;  // d(psi lambda) = 0
    std::vector<Complex> zeros_of_f;
    std::vector<Complex> branch_of_n;    // dN = 0
    // Branch points of N where f blows up; f does not extend there, so they
    // take no part in the comparison.
    std::vector<Complex> unbounded_branch_of_n;
    // branch_points equals zeros_of_f union (branch_of_n minus the unbounded
    // ones) within match_radius.
    bool sets_agree = false;
    double match_radius = 0.0;
    // sup |dN f - d(psi lambda)| / sup |dN f|, d(psi lambda) by central differences.
    double identity_residual = 0.0;
};

BranchZeroReport branch_zero_report(const MinimalPair& pair, std::span<const Complex> grid);
BranchZeroReport branch_zero_report(const MinimalPair& pair);

}  // namespace quatconf
