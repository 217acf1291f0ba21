#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "quatconf/cfun.hpp"
#include "quatconf/domain.hpp"
#include "quatconf/forms.hpp"
#include "quatconf/taylor.hpp"

namespace quatconf {

// Stereographic projection from k: x1 i + x2 j + x3 k -> (x1 + x2 i) / (1 - x3).
// Throws std::domain_error at k.
Complex stereo(const Quaternion& p);
// Two-sided inverse of stereo on S^2 minus k.
Quaternion inverse_stereo(Complex w);

// -i N i, the rotation used to move the chart centred at k.
inline Quaternion rotate_minus_i_n_i(const Quaternion& n) {
    return -(Quaternion::i() * n * Quaternion::i());
}

// Quaternion c0 + j c1 for complex c0, c1, i.e. (Re c0, Im c0, Re c1, -Im c1).
inline Quaternion j_pair(Complex c0, Complex c1) { return {c0.real(), c0.imag(), c1.real(), -c1.imag()}; }

enum class SphereKind { constant, lambda_pair, sampled };

// Map from a planar domain into the unit imaginary quaternions S^2.
//
// lambda_pair maps are N = s (l0 + j l1) i (l0 + j l1)^-1 with s = +1 or -1.
// N only depends on the ratio [l0 : l1], so the map keeps the coprime
// polynomial pair (A, B) with B/A = l1/l0 and evaluates it directly; poles of
// the l's are therefore harmless. Constant and lambda_pair maps have exact
// jets; sampled maps are differentiated by central differences.
class SphereMap {
public:
    using Sampler = std::function<Quaternion(Complex)>;

    // Throws std::invalid_argument unless n is unit imaginary.
    static SphereMap constant(const Quaternion& n);
    // Throws std::invalid_argument if both l's vanish identically or share a
    // zero in the finite plane.
    static SphereMap from_lambda_pair(const RationalMap& l0, const RationalMap& l1, Sign sign);
    // f must return unit imaginary values; h is the difference step.
    static SphereMap sampled(Sampler f, double h = 1e-4, std::string label = "sampled");

    SphereKind kind() const { return kind_; }
    Sign sign() const { return sign_; }
    bool analytic() const { return kind_ != SphereKind::sampled; }
    const std::string& label() const { return label_; }
    double fd_step() const { return h_; }

    // Only meaningful for lambda_pair maps.
    const RationalMap& lambda0() const { return l0_; }
    const RationalMap& lambda1() const { return l1_; }
    const CPolynomial& reduced0() const { return a_; }
    const CPolynomial& reduced1() const { return b_; }

    Quaternion operator()(Complex z) const;

    // Third-order jet; sampled maps throw std::logic_error.
    QJet<3> jet3(Complex z) const;
    // Second-order jet, from central differences for sampled maps.
    QJet<2> jet2(Complex z) const;
    // dN at z as a one-form.
    OneFormValue differential(Complex z) const;

private:
    SphereKind kind_ = SphereKind::constant;
    Sign sign_ = Sign::plus;
    Quaternion value_ = Quaternion::i();
    RationalMap l0_;
    RationalMap l1_;
    CPolynomial a_;
    CPolynomial b_;
    std::shared_ptr<const Sampler> sampler_;
    double h_ = 1e-4;
    std::string label_;
};

enum class Holomorphy { holomorphic, anti_holomorphic, constant, neither };
const char* to_string(Holomorphy h);

struct HolomorphyReport {
    Holomorphy kind = Holomorphy::neither;
    // sup over the grid of |(dN)_N| / |dN| and |(dN)_{-N}| / |dN|.
    double holomorphic_residual = 0.0;
    double anti_holomorphic_residual = 0.0;
    double max_differential = 0.0;
    std::size_t samples = 0;
};

// Throws std::invalid_argument on an empty grid.
HolomorphyReport classify(const SphereMap& n, std::span<const Complex> grid, double tol = 1e-4);
HolomorphyReport classify(const SphereMap& n, const PlanarDomain& domain, double tol = 1e-4);

// Preimage counts of i and -i on CP^1 with multiplicity, read off the zeros
// of l1 and l0 (swapped for sign -), including zeros at infinity.
struct DegreeCount {
    int preimages_of_i = 0;
    int preimages_of_minus_i = 0;
};

class DegreeMismatch : public std::runtime_error {
public:
    DegreeMismatch(int count_i, int count_minus_i);
    int count_i;
    int count_minus_i;
};

// Throws std::invalid_argument unless n is a lambda_pair map. A constant map
// counts 0 for both.
DegreeCount sphere_degree_counts(const SphereMap& n);
// The common count; throws DegreeMismatch when the two counts differ.
int sphere_degree(const SphereMap& n);

// Zeros of a nonzero rational map on CP^1 counted with multiplicity.
int zeros_on_sphere(const RationalMap& r);

// Largest spherical cap avoiding a point cloud on S^2.
struct SphereGap {
    Quaternion center;  // unit imaginary
    double radius = 0.0;  // angular distance to the nearest sample
};
SphereGap largest_gap(std::span<const Quaternion> points);

}  // namespace quatconf
