#include "quatconf/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "quatconf/finite_difference.hpp"
#include "quatconf/parallel.hpp"
#include "quatconf/series.hpp"

namespace quatconf {

namespace {

void require_unit_imaginary(const Quaternion& n, const char* what) {
    if (!is_unit_imaginary(n, 1e-10)) {
        std::ostringstream msg;
        msg << what << ": " << n << " is not a unit imaginary quaternion";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

Complex stereo(const Quaternion& p) {
    const double d = 1.0 - p.z;
    if (std::abs(d) < 1e-14) {
        throw std::domain_error("stereo: the point k projects to infinity");
    }
    return {p.x / d, p.y / d};
}

Quaternion inverse_stereo(Complex w) {
    const double s = std::norm(w);
    return {0.0, 2.0 * w.real() / (s + 1.0), 2.0 * w.imag() / (s + 1.0), (s - 1.0) / (s + 1.0)};
}

// ---------------------------------------------------------------------------

SphereMap SphereMap::constant(const Quaternion& n) {
    require_unit_imaginary(n, "SphereMap::constant");
    SphereMap m;
    m.kind_ = SphereKind::constant;
    m.value_ = n;
    m.label_ = "constant";
    return m;
}

SphereMap SphereMap::from_lambda_pair(const RationalMap& l0, const RationalMap& l1, Sign sign) {
    if (l0.is_zero() && l1.is_zero()) {
        throw std::invalid_argument("from_lambda_pair: both lambdas vanish identically");
    }
    if (!l0.is_zero() && !l1.is_zero()) {
        for (const auto& root : l0.zeros()) {
            if (l1.order_at(root.point) > 0) {
                std::ostringstream msg;
                msg << "from_lambda_pair: lambda0 and lambda1 share the zero " << root.point;
                throw std::invalid_argument(msg.str());
            }
        }
    }
    SphereMap m;
    m.kind_ = SphereKind::lambda_pair;
    m.sign_ = sign;
    m.l0_ = l0;
    m.l1_ = l1;
    m.label_ = "lambda_pair";
    if (l0.is_zero()) {
        m.a_ = CPolynomial();
        m.b_ = CPolynomial{1.0};
    } else if (l1.is_zero()) {
        m.a_ = CPolynomial{1.0};
        m.b_ = CPolynomial();
    } else {
        // B / A = l1 / l0 in lowest terms.
        const RationalMap ratio(l1.numerator() * l0.denominator(), l1.denominator() * l0.numerator());
        m.a_ = ratio.denominator();
        m.b_ = ratio.numerator();
    }
    return m;
}

SphereMap SphereMap::sampled(Sampler f, double h, std::string label) {
    if (!(h > 0.0)) throw std::invalid_argument("SphereMap::sampled: step must be positive");
    SphereMap m;
    m.kind_ = SphereKind::sampled;
    m.sampler_ = std::make_shared<const Sampler>(std::move(f));
    m.h_ = h;
    m.label_ = std::move(label);
    return m;
}

Quaternion SphereMap::operator()(Complex z) const {
    switch (kind_) {
        case SphereKind::constant:
            return value_;
        case SphereKind::lambda_pair: {
            const Quaternion q = j_pair(a_(z), b_(z));
            const Quaternion n = q * Quaternion::i() * inverse(q);
            return sign_ == Sign::plus ? n : -n;
        }
        case SphereKind::sampled:
            return (*sampler_)(z);
    }
    return value_;
}

QJet<3> SphereMap::jet3(Complex z) const {
    switch (kind_) {
        case SphereKind::constant:
            return constant_jet<3>(value_);
        case SphereKind::lambda_pair: {
            const QJet<3> q = j_pair_series<3>(series_of<3>(a_, z), series_of<3>(b_, z));
            const QJet<3> n = q * Quaternion::i() * inverse(q);
            return sign_ == Sign::plus ? n : -n;
        }
        case SphereKind::sampled:
            break;
    }
    throw std::logic_error("SphereMap::jet3: third-order jets need an analytic sphere map");
}

QJet<2> SphereMap::jet2(Complex z) const {
    if (kind_ == SphereKind::sampled) return fd_jet2(*sampler_, z, h_);
    return truncate_to<2>(jet3(z));
}

OneFormValue SphereMap::differential(Complex z) const {
    if (kind_ == SphereKind::sampled) {
        const QJet<1> j = fd_jet1(*sampler_, z, h_);
        return {value_of(dx_of(j)), value_of(dy_of(j))};
    }
    const QJet<2> j = jet2(z);
    return {value_of(dx_of(j)), value_of(dy_of(j))};
}

// ---------------------------------------------------------------------------

const char* to_string(Holomorphy h) {
    switch (h) {
        case Holomorphy::holomorphic:
            return "holomorphic";
        case Holomorphy::anti_holomorphic:
            return "anti-holomorphic";
        case Holomorphy::constant:
            return "constant";
        case Holomorphy::neither:
            return "neither";
    }
    return "neither";
}

HolomorphyReport classify(const SphereMap& n, std::span<const Complex> grid, double tol) {
    if (grid.empty()) throw std::invalid_argument("classify: empty grid");
    struct Local {
        double hol = 0.0;
        double anti = 0.0;
        double dn = 0.0;
    };
    const auto locals = parallel_map<Local>(grid.size(), [&](std::size_t idx) {
        const Complex z = grid[idx];
        const Quaternion value = n(z);
        const OneFormValue dn = n.differential(z);
        Local l;
        l.dn = norm(dn);
        if (l.dn > 0.0) {
            l.hol = norm(n_part(dn, normalized(value), Side::left, Sign::plus)) / l.dn;
            l.anti = norm(n_part(dn, normalized(value), Side::left, Sign::minus)) / l.dn;
        }
        return l;
    });

    HolomorphyReport report;
    report.samples = grid.size();
    for (const auto& l : locals) report.max_differential = std::max(report.max_differential, l.dn);
    if (report.max_differential <= tol) {
        report.kind = Holomorphy::constant;
        return report;
    }
    // Branch points of N carry no direction information.
    const double floor = 1e-10 * report.max_differential;
    for (const auto& l : locals) {
        if (l.dn <= floor) continue;
        report.holomorphic_residual = std::max(report.holomorphic_residual, l.hol);
        report.anti_holomorphic_residual = std::max(report.anti_holomorphic_residual, l.anti);
    }
    if (report.holomorphic_residual <= tol) {
        report.kind = Holomorphy::holomorphic;
    } else if (report.anti_holomorphic_residual <= tol) {
        report.kind = Holomorphy::anti_holomorphic;
    } else {
        report.kind = Holomorphy::neither;
    }
    return report;
}

HolomorphyReport classify(const SphereMap& n, const PlanarDomain& domain, double tol) {
    const auto grid = domain.samples();
    return classify(n, grid, tol);
}

// ---------------------------------------------------------------------------

DegreeMismatch::DegreeMismatch(int ci, int cmi)
    : std::runtime_error("sphere_degree: #N^-1(i) = " + std::to_string(ci) + " but #N^-1(-i) = " +
                         std::to_string(cmi) + " (unbalanced lambda pair)"),
      count_i(ci),
      count_minus_i(cmi) {}

int zeros_on_sphere(const RationalMap& r) {
    if (r.is_zero()) throw std::invalid_argument("zeros_on_sphere: zero function");
    int count = 0;
    for (const auto& e : divisor_of(r).entries()) {
        if (e.order > 0) count += e.order;
    }
    count += std::max(0, r.order_at(SpherePoint::infinity()));
    return count;
}

DegreeCount sphere_degree_counts(const SphereMap& n) {
    if (n.kind() != SphereKind::lambda_pair) {
        throw std::invalid_argument("sphere_degree: needs a lambda_pair sphere map");
    }
    if (std::max(n.reduced0().degree(), n.reduced1().degree()) <= 0) return {};
    // N = i exactly where l1 = 0 for sign +, where l0 = 0 for sign -.
    const int z0 = zeros_on_sphere(n.lambda0());
    const int z1 = zeros_on_sphere(n.lambda1());
    return n.sign() == Sign::plus ? DegreeCount{z1, z0} : DegreeCount{z0, z1};
}

int sphere_degree(const SphereMap& n) {
    const DegreeCount c = sphere_degree_counts(n);
    if (c.preimages_of_i != c.preimages_of_minus_i) throw DegreeMismatch(c.preimages_of_i, c.preimages_of_minus_i);
    return c.preimages_of_i;
}

// ---------------------------------------------------------------------------

namespace {

double nearest_angle(const Quaternion& c, std::span<const Quaternion> points) {
    double best = -1.0;
    for (const auto& p : points) best = std::max(best, c.x * p.x + c.y * p.y + c.z * p.z);
    return std::acos(std::clamp(best, -1.0, 1.0));
}

}  // namespace

SphereGap largest_gap(std::span<const Quaternion> points) {
    if (points.empty()) return {Quaternion::i(), std::numbers::pi};

    // Fibonacci lattice of candidate centres.
    constexpr int kCandidates = 4096;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Quaternion> candidates(kCandidates);
    for (int n = 0; n < kCandidates; ++n) {
        const double z = 1.0 - 2.0 * (n + 0.5) / kCandidates;
        const double r = std::sqrt(1.0 - z * z);
        candidates[static_cast<std::size_t>(n)] = {0.0, r * std::cos(golden * n), r * std::sin(golden * n), z};
    }
    const auto radii = parallel_map<double>(candidates.size(),
                                            [&](std::size_t n) { return nearest_angle(candidates[n], points); });

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t n = 0; n < order.size(); ++n) order[n] = n;
    std::partial_sort(order.begin(), order.begin() + 8, order.end(), [&](std::size_t a, std::size_t b) {
        return radii[a] != radii[b] ? radii[a] > radii[b] : a < b;
    });

    SphereGap best{candidates[order[0]], radii[order[0]]};
    for (int pick = 0; pick < 8; ++pick) {
        Quaternion c = candidates[order[static_cast<std::size_t>(pick)]];
        double r = radii[order[static_cast<std::size_t>(pick)]];
        // Pattern search along tangent directions with shrinking steps.
        for (double step = 0.05; step > 1e-5; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                Quaternion e1 = cross(c, std::abs(c.x) < 0.9 ? Quaternion::i() : Quaternion::j());
                e1 = normalized(e1);
                const Quaternion e2 = cross(c, e1);
                for (int d = 0; d < 8; ++d) {
                    const double t = std::numbers::pi * d / 4.0;
                    const Quaternion trial =
                        normalized(c + step * (std::cos(t) * e1 + std::sin(t) * e2));
                    const double tr = nearest_angle(trial, points);
                    if (tr > r) {
                        c = trial;
                        r = tr;
                        improved = true;
                    }
                }
            }
        }
        if (r > best.radius) best = {c, r};
    }
    return best;
}

}  // namespace quatconf
