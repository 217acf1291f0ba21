#include "quatconf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "quatconf/finite_difference.hpp"
#include "quatconf/parallel.hpp"

namespace quatconf {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::superconformal:
            return "superconformal";
        case Provenance::twistor:
            return "twistor";
        case Provenance::minimal:
            return "minimal";
        case Provenance::custom:
            return "custom";
    }
    return "custom";
}

const char* to_string(DerivativeMode m) {
    return m == DerivativeMode::analytic ? "analytic" : "finite-difference";
}

SurfaceMap SurfaceMap::analytic(Evaluator value, JetProvider jets, Provenance provenance, std::string label) {
    SurfaceMap s;
    s.value_ = std::make_shared<const Evaluator>(std::move(value));
    s.jets_ = std::make_shared<const JetProvider>(std::move(jets));
    s.mode_ = DerivativeMode::analytic;
    s.provenance_ = provenance;
    s.label_ = std::move(label);
    return s;
}

SurfaceMap SurfaceMap::finite_difference(Evaluator value, double h, Provenance provenance, std::string label) {
    if (!(h > 0.0)) throw std::invalid_argument("SurfaceMap: difference step must be positive");
    SurfaceMap s;
    s.value_ = std::make_shared<const Evaluator>(std::move(value));
    s.mode_ = DerivativeMode::finite_difference;
    s.h_ = h;
    s.provenance_ = provenance;
    s.label_ = std::move(label);
    return s;
}

SurfaceMap SurfaceMap::as_finite_difference(double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("SurfaceMap: difference step must be positive");
    SurfaceMap s = *this;
    s.jets_.reset();
    s.mode_ = DerivativeMode::finite_difference;
    s.h_ = h;
    return s;
}

SurfaceMap SurfaceMap::with_exclusions(std::vector<Complex> points, double radius) const {
    SurfaceMap s = *this;
    s.exclusions_ = std::move(points);
    s.exclusion_radius_ = radius;
    return s;
}

QJet<2> SurfaceMap::jet(Complex z) const {
    if (mode_ == DerivativeMode::analytic) return (*jets_)(z);
    return fd_jet2(*value_, z, h_);
}

bool SurfaceMap::excluded(Complex z) const {
    return std::any_of(exclusions_.begin(), exclusions_.end(),
                       [&](Complex p) { return std::abs(z - p) < exclusion_radius_; });
}

std::vector<Complex> sweep_points(const SurfaceMap& f, const PlanarDomain& domain) {
    std::vector<Complex> pts = domain.samples();
    std::erase_if(pts, [&](Complex z) { return f.excluded(z); });
    return pts;
}

// ---------------------------------------------------------------------------

SurfaceJet jet_at(const SurfaceMap& f, Complex z, double branch_tol) {
    const QJet<2> j = f.jet(z);
    SurfaceJet s;
    s.z = z;
    s.f = value_of(j);
    s.fx = value_of(dx_of(j));
    s.fy = value_of(dy_of(j));
    if (norm(s.fx) < branch_tol) {
        s.branch = true;
        return s;
    }
    const Quaternion inv = inverse(s.fx);
    s.N = s.fy * inv;
    s.R = -(inv * s.fy);
    return s;
}

double conformal_residual(const Quaternion& fx, const Quaternion& fy) {
    const double s2 = fx.norm2() + fy.norm2();
    if (s2 == 0.0) return 0.0;
    const double s = std::sqrt(s2);
    return std::abs(norm(fx) - norm(fy)) / s + std::abs(inner(fx, fy)) / s2;
}

double conformal_residual_at(const SurfaceMap& f, Complex z) {
    const QJet<2> j = f.jet(z);
    return conformal_residual(value_of(dx_of(j)), value_of(dy_of(j)));
}

CurvatureSample curvature_from_jet(const QJet<2>& jet, Complex z, double conformal_tol, double branch_tol) {
    const QJet<1> fx = dx_of(jet);
    const QJet<1> fy = dy_of(jet);
    const Quaternion fx0 = value_of(fx);
    const Quaternion fy0 = value_of(fy);
    if (norm(fx0) < branch_tol) {
        std::ostringstream msg;
        msg << "curvature_at: branch point at " << z;
        throw std::domain_error(msg.str());
    }
    const double residual = conformal_residual(fx0, fy0);
    if (residual > conformal_tol) {
        std::ostringstream msg;
        msg << "curvature_at: map is not conformal at " << z << " (residual " << residual << ")";
        throw std::domain_error(msg.str());
    }

    const QJet<1> fx_inv = inverse(fx);
    const QJet<1> N = fy * fx_inv;
    const QJet<1> R = -(fx_inv * fy);
    const Quaternion n0 = value_of(N);
    const Quaternion r0 = value_of(R);
    const OneFormValue dN{value_of(dx_of(N)), value_of(dy_of(N))};
    const OneFormValue dR{value_of(dx_of(R)), value_of(dy_of(R))};

    CurvatureSample s;
    s.z = z;
    s.area = fx0.norm2();
    s.H = (-(inverse(fx0) * n0 * (0.5 * (dN.wx - n0 * dN.wy)))).conj();
    s.Nsigma = star_pairing(star(dN), n0 * dN);
    s.Rsigma = star_pairing(star(dR), r0 * dR);
    s.K = (s.Rsigma + s.Nsigma) / (2.0 * s.area);
    s.Kperp = (s.Rsigma - s.Nsigma) / (2.0 * s.area);
    return s;
}

CurvatureSample curvature_at(const SurfaceMap& f, Complex z, double conformal_tol, double branch_tol) {
    return curvature_from_jet(f.jet(z), z, conformal_tol, branch_tol);
}

double wintgen_slack(const CurvatureSample& s) { return s.H.norm2() - s.K - std::abs(s.Kperp); }

double wintgen_slack_at(const SurfaceMap& f, Complex z, double conformal_tol) {
    return wintgen_slack(curvature_at(f, z, conformal_tol));
}

// ---------------------------------------------------------------------------

InconclusiveFit::InconclusiveFit(double s)
    : std::runtime_error("vanish_order_fit: slope " + std::to_string(s) + " is not close to an integer"), slope(s) {}

namespace {

double circle_max(const SurfaceMap& f, Complex p, double r) {
    constexpr int kSamples = 256;
    const double dt = 2.0 * std::numbers::pi / kSamples;
    auto value = [&](double t) { return norm(f(p + std::polar(r, t))); };
    int best = 0;
    double best_value = -1.0;
    for (int n = 0; n < kSamples; ++n) {
        const double v = value(n * dt);
        if (v > best_value) {
            best_value = v;
            best = n;
        }
    }
    // Golden-section refinement around the best sample.
    double a = (best - 1) * dt;
    double b = (best + 1) * dt;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = value(c);
    double fd = value(d);
    for (int it = 0; it < 40; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = value(d);
        }
    }
    return std::max({best_value, fc, fd});
}

}  // namespace

std::vector<double> log_radii(double r_max, double r_min, int count) {
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        const double t = count == 1 ? 0.0 : static_cast<double>(n) / (count - 1);
        r[static_cast<std::size_t>(n)] = r_max * std::pow(r_min / r_max, t);
    }
    return r;
}

OrderFit vanish_order_fit(const SurfaceMap& f, Complex p, std::span<const double> radii) {
    if (radii.size() < 2) throw std::invalid_argument("vanish_order_fit: need at least two radii");
    std::vector<double> x;
    std::vector<double> y;
    for (double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("vanish_order_fit: radii must be positive");
        const double m = circle_max(f, p, r);
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw std::domain_error("vanish_order_fit: map vanishes or blows up on a sample circle");
        }
        x.push_back(std::log(r));
        y.push_back(std::log(m));
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    OrderFit fit;
    fit.slope = slope;
    fit.order = static_cast<int>(std::lround(slope));
    if (std::abs(slope - fit.order) > 0.25) throw InconclusiveFit(slope);
    double rss = 0.0;
    double fixed = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - (slope * x[k] + intercept);
        rss += e * e;
        fixed += y[k] - fit.order * x[k];
    }
    fit.residual = std::sqrt(rss / n);
    fit.leading = std::exp(fixed / n);
    return fit;
}

// ---------------------------------------------------------------------------

std::vector<FieldRow> sample_field(const SurfaceMap& f, std::span<const Complex> points, double conformal_tol) {
    return parallel_map<FieldRow>(points.size(), [&](std::size_t idx) {
        const Complex z = points[idx];
        const QJet<2> j = f.jet(z);
        FieldRow row;
        row.z = z;
        row.f = value_of(j);
        const Quaternion fx = value_of(dx_of(j));
        const Quaternion fy = value_of(dy_of(j));
        row.conf_residual = conformal_residual(fx, fy);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.N = row.R = Quaternion(nan, nan, nan, nan);
        row.K = row.Kperp = row.H_normsq = row.wintgen_slack = nan;
        if (norm(fx) >= kBranchTolerance) {
            row.N = fy * inverse(fx);
            row.R = -(inverse(fx) * fy);
            try {
                const CurvatureSample s = curvature_from_jet(j, z, conformal_tol);
                row.K = s.K;
                row.Kperp = s.Kperp;
                row.H_normsq = s.H.norm2();
                row.wintgen_slack = wintgen_slack(s);
                row.curvature_valid = true;
            } catch (const std::domain_error&) {
                // left as NaN
            }
        }
        return row;
    });
}

void write_field_csv(std::ostream& os, std::span<const FieldRow> rows) {
    os << "z_re,z_im,f_w,f_x,f_y,f_z,N_i,N_j,N_k,R_i,R_j,R_k,K,Kperp,H_normsq,conf_residual,wintgen_slack\n";
    char buf[32];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << (last ? '\n' : ',');
    };
    for (const auto& r : rows) {
        put(r.z.real());
        put(r.z.imag());
        put(r.f.w);
        put(r.f.x);
        put(r.f.y);
        put(r.f.z);
        put(r.N.x);
        put(r.N.y);
        put(r.N.z);
        put(r.R.x);
        put(r.R.y);
        put(r.R.z);
        put(r.K);
        put(r.Kperp);
        put(r.H_normsq);
        put(r.conf_residual);
        put(r.wintgen_slack, true);
    }
}

}  // namespace quatconf
