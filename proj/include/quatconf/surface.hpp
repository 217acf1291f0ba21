#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quatconf/cfun.hpp"
#include "quatconf/domain.hpp"
#include "quatconf/forms.hpp"
#include "quatconf/taylor.hpp"

namespace quatconf {

enum class Provenance { superconformal, twistor, minimal, custom };
const char* to_string(Provenance p);

enum class DerivativeMode { analytic, finite_difference };
const char* to_string(DerivativeMode m);

// Map f: U -> H together with a way to get its second-order jet at a point.
// Analytic maps carry an exact jet provider; finite-difference maps use the
// central stencils of fd_jet2 with step h.
class SurfaceMap {
public:
    using Evaluator = std::function<Quaternion(Complex)>;
    using JetProvider = std::function<QJet<2>(Complex)>;

    static SurfaceMap analytic(Evaluator value, JetProvider jets, Provenance provenance, std::string label = {});
    static SurfaceMap finite_difference(Evaluator value, double h, Provenance provenance, std::string label = {});

    // Same values, derivatives from central differences with step h.
    SurfaceMap as_finite_difference(double h) const;
    // Points (poles, singular sets) that sweeps must stay away from.
    SurfaceMap with_exclusions(std::vector<Complex> points, double radius) const;

    Quaternion operator()(Complex z) const { return (*value_)(z); }
    QJet<2> jet(Complex z) const;

    DerivativeMode mode() const { return mode_; }
    double h() const { return h_; }
    Provenance provenance() const { return provenance_; }
    const std::string& label() const { return label_; }
    const std::vector<Complex>& exclusions() const { return exclusions_; }
    double exclusion_radius() const { return exclusion_radius_; }
    bool excluded(Complex z) const;

private:
    std::shared_ptr<const Evaluator> value_;
    std::shared_ptr<const JetProvider> jets_;
    DerivativeMode mode_ = DerivativeMode::analytic;
    double h_ = 0.0;
    Provenance provenance_ = Provenance::custom;
    std::string label_;
    std::vector<Complex> exclusions_;
    double exclusion_radius_ = 0.0;
};

// Domain samples that the map does not exclude.
std::vector<Complex> sweep_points(const SurfaceMap& f, const PlanarDomain& domain);

inline constexpr double kBranchTolerance = 1e-8;
inline constexpr double kConformalTolerance = 1e-3;

struct SurfaceJet {
    Complex z;
    Quaternion f;
    Quaternion fx;
    Quaternion fy;
    // Left normal N = f_y f_x^-1 and right normal R = -f_x^-1 f_y; only set
    // when |f_x| >= branch tolerance.
    bool branch = false;
    Quaternion N;
    Quaternion R;
};

SurfaceJet jet_at(const SurfaceMap& f, Complex z, double branch_tol = kBranchTolerance);

// (| |f_x| - |f_y| | + |<f_x, f_y>| / s) / s with s = (|f_x|^2 + |f_y|^2)^(1/2):
// dimensionless, zero exactly at conformal points. Zero when df = 0.
double conformal_residual_at(const SurfaceMap& f, Complex z);
double conformal_residual(const Quaternion& fx, const Quaternion& fy);

struct CurvatureSample {
    Complex z;
    double K = 0.0;
    double Kperp = 0.0;
    Quaternion H;         // mean curvature vector
    double area = 0.0;    // |f_x|^2
    double Nsigma = 0.0;  // <*dN ^ N dN>-density = det(N, N_x, N_y)
    double Rsigma = 0.0;
};

// Curvatures from the normals:
//   H     = conj(-f_x^-1 N (N_x - N N_y) / 2)
//   Nsigma = <*dN, N dN>, Rsigma = <*dR, R dR>   (pairing <*w ^ e> / 2)
//   K     = (Rsigma + Nsigma) / (2 |f_x|^2),  Kperp = (Rsigma - Nsigma) / (2 |f_x|^2)
// Throws std::domain_error at branch points and where the conformal residual
// exceeds conformal_tol.
CurvatureSample curvature_at(const SurfaceMap& f, Complex z, double conformal_tol = kConformalTolerance,
                             double branch_tol = kBranchTolerance);
// Same formulas from a jet.
CurvatureSample curvature_from_jet(const QJet<2>& jet, Complex z, double conformal_tol = kConformalTolerance,
                                   double branch_tol = kBranchTolerance);

// |H|^2 - K - |Kperp|; nonnegative for conformal maps, zero where super-conformal.
double wintgen_slack_at(const SurfaceMap& f, Complex z, double conformal_tol = kConformalTolerance);
double wintgen_slack(const CurvatureSample& s);

struct OrderFit {
    int order = 0;
    double slope = 0.0;
    double leading = 0.0;
    double residual = 0.0;
};

class InconclusiveFit : public std::runtime_error {
public:
    InconclusiveFit(double slope);
    double slope;
};

// Least-squares slope of log max_{|z-p|=r} |f| against log r. The order is
// the rounded slope; a slope more than 0.25 from an integer throws
// InconclusiveFit. leading is exp of the intercept with the slope fixed at
// the order; residual is the RMS deviation from the free fit.
OrderFit vanish_order_fit(const SurfaceMap& f, Complex p, std::span<const double> radii);
// Log-spaced radii from r_max down to r_min.
std::vector<double> log_radii(double r_max, double r_min, int count);

// One line per grid point of the field dump.
struct FieldRow {
    Complex z;
    Quaternion f;
    Quaternion N;
    Quaternion R;
    double K = 0.0;
    double Kperp = 0.0;
    double H_normsq = 0.0;
    double conf_residual = 0.0;
    double wintgen_slack = 0.0;
    bool curvature_valid = false;
};

std::vector<FieldRow> sample_field(const SurfaceMap& f, std::span<const Complex> points,
                                   double conformal_tol = kConformalTolerance);
// Header plus %.17g rows; NaN where the curvature is undefined.
void write_field_csv(std::ostream& os, std::span<const FieldRow> rows);

}  // namespace quatconf
