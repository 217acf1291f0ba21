#include "quatconf/superconf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quatconf/parallel.hpp"
#include "quatconf/series.hpp"

namespace quatconf {

PsiSection::PsiSection(SphereMap n, Quaternion a, PlanarDomain domain)
    : n_(std::move(n)), a_(a), domain_(std::move(domain)) {}

Quaternion PsiSection::avoided() const { return -(a_ * Quaternion::i() * inverse(a_)); }

QJet<2> PsiSection::jet2(Complex z) const {
    return n_.jet2(z) * a_ + constant_jet<2>(a_ * Quaternion::i());
}

QJet<3> PsiSection::jet3(Complex z) const {
    return n_.jet3(z) * a_ + constant_jet<3>(a_ * Quaternion::i());
}

namespace {

void measure(PsiSection& psi) {
    const auto pts = psi.domain().samples();
    struct Local {
        double modulus;
        double eigen;
    };
    const auto locals = parallel_map<Local>(pts.size(), [&](std::size_t k) {
        const Quaternion n = psi.normal()(pts[k]);
        const Quaternion v = n * psi.a() + psi.a() * Quaternion::i();
        return Local{norm(v), norm(n * v - v * Quaternion::i())};
    });
    psi.min_modulus = std::numeric_limits<double>::infinity();
    psi.eigen_residual = 0.0;
    for (const auto& l : locals) {
        psi.min_modulus = std::min(psi.min_modulus, l.modulus);
        psi.eigen_residual = std::max(psi.eigen_residual, l.eigen);
    }
}

// Unit a with a i a^-1 = v.
Quaternion conjugator_to(const Quaternion& v) {
    if (norm(v + Quaternion::i()) < 1e-6) {
        // Antipodal: i -> j -> v in two quarter turns.
        return rotation_taking(Quaternion::j(), v) * rotation_taking(Quaternion::i(), Quaternion::j());
    }
    return rotation_taking(Quaternion::i(), v);
}

}  // namespace

PsiSection build_psi(const SphereMap& n, const PlanarDomain& domain) {
    const auto pts = domain.with_resolution(kGapResolution).samples();
    const auto image = parallel_map<Quaternion>(pts.size(), [&](std::size_t k) { return n(pts[k]); });
    const SphereGap gap = largest_gap(image);
    if (gap.radius < kGapThreshold) {
        std::ostringstream msg;
        msg << "build_psi: left normal surjective; no global psi (largest gap " << gap.radius << " rad)";
        throw HypothesisError(msg.str());
    }
    PsiSection psi(n, conjugator_to(-gap.center), domain);
    psi.gap = gap.radius;
    measure(psi);
    return psi;
}

PsiSection build_psi(const SphereMap& n, const PlanarDomain& domain, const Quaternion& a) {
    if (a.norm2() == 0.0) throw std::invalid_argument("build_psi: a must be nonzero");
    PsiSection psi(n, a, domain);
    measure(psi);
    if (psi.min_modulus <= 1e-12 * norm(a)) {
        throw HypothesisError("build_psi: psi vanishes on the domain for this choice of a");
    }
    return psi;
}

// ---------------------------------------------------------------------------

FactoredMap::FactoredMap(PsiSection psi, RationalMap l0, RationalMap l1)
    : psi_(std::move(psi)), l0_(std::move(l0)), l1_(std::move(l1)) {}

std::optional<Quaternion> FactoredMap::evaluate(Complex z) const {
    const SpherePoint a = l0_.evaluate(z);
    const SpherePoint b = l1_.evaluate(z);
    if (a.infinite || b.infinite) return std::nullopt;
    return psi_(z) * Quaternion::from_pair(a.value, b.value);
}

Quaternion FactoredMap::operator()(Complex z) const {
    const auto v = evaluate(z);
    if (!v) {
        std::ostringstream msg;
        msg << "FactoredMap: pole at " << z;
        throw std::domain_error(msg.str());
    }
    return *v;
}

QJet<2> FactoredMap::jet2(Complex z) const { return psi_.jet2(z) * lambda_series<2>(l0_, l1_, z); }

std::vector<Complex> FactoredMap::poles() const {
    std::vector<Complex> out;
    for (const auto* r : {&l0_, &l1_}) {
        for (const auto& p : r->poles()) out.push_back(p.point);
    }
    return out;
}

SurfaceMap FactoredMap::surface() const {
    const FactoredMap self = *this;
    const double h = psi_.domain().h();
    SurfaceMap s = psi_.normal().analytic()
                       ? SurfaceMap::analytic([self](Complex z) { return self(z); },
                                              [self](Complex z) { return self.jet2(z); }, Provenance::superconformal,
                                              "factored")
                       : SurfaceMap::finite_difference([self](Complex z) { return self(z); }, h,
                                                       Provenance::superconformal, "factored");
    return s.with_exclusions(poles(), 2.0 * h);
}

FactoredMap build_superconformal(const PsiSection& psi, const RationalMap& l0, const RationalMap& l1,
                                 bool allow_poles) {
    const HolomorphyReport r = classify(psi.normal(), psi.domain());
    if (r.kind != Holomorphy::anti_holomorphic && r.kind != Holomorphy::constant) {
        std::ostringstream msg;
        msg << "build_superconformal: left normal must be anti-holomorphic, classified " << to_string(r.kind)
            << " (residuals " << r.holomorphic_residual << ", " << r.anti_holomorphic_residual << ")";
        throw HypothesisError(msg.str());
    }
    FactoredMap f(psi, l0, l1);
    if (!allow_poles) {
        for (Complex p : f.poles()) {
            if (psi.domain().encloses(p)) {
                std::ostringstream msg;
                msg << "build_superconformal: lambda has a pole at " << p << " inside the domain";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    return f;
}

// ---------------------------------------------------------------------------

namespace {

void require_no_common_zero(const RationalMap& l0, const RationalMap& l1, const char* what) {
    if (l0.is_zero() && l1.is_zero()) {
        throw std::invalid_argument(std::string(what) + ": both lambdas vanish identically");
    }
    if (l0.is_zero() || l1.is_zero()) return;
    for (const auto& root : l0.zeros()) {
        if (l1.order_at(root.point) > 0) {
            std::ostringstream msg;
            msg << what << ": lambda0 and lambda1 share the zero " << root.point;
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace

SurfaceMap build_twistor(const RationalMap& l0, const RationalMap& l1, const RationalMap& l2,
                         const RationalMap& l3, double h) {
    require_no_common_zero(l0, l1, "build_twistor");
    auto value = [=](Complex z) {
        const Quaternion p = Quaternion::from_pair(l0(z), l1(z));
        const Quaternion q = Quaternion::from_pair(l2(z), l3(z));
        return inverse(p) * q;
    };
    auto jets = [=](Complex z) { return inverse(lambda_series<2>(l0, l1, z)) * lambda_series<2>(l2, l3, z); };
    std::vector<Complex> poles;
    for (const auto* r : {&l0, &l1, &l2, &l3}) {
        for (const auto& p : r->poles()) poles.push_back(p.point);
    }
    return SurfaceMap::analytic(value, jets, Provenance::twistor, "twistor").with_exclusions(poles, 2.0 * h);
}

SphereMap twistor_left_normal(const RationalMap& l0, const RationalMap& l1) {
    return SphereMap::from_lambda_pair(l1, l0, Sign::minus);
}

// ---------------------------------------------------------------------------

Divisor divisor_of_factored(const FactoredMap& f) {
    const RationalMap& l0 = f.lambda0();
    const RationalMap& l1 = f.lambda1();
    if (l0.is_zero() && l1.is_zero()) {
        throw std::invalid_argument("divisor_of_factored: both lambdas vanish identically");
    }
    std::vector<Complex> candidates;
    auto add = [&](Complex p) {
        const bool seen = std::any_of(candidates.begin(), candidates.end(), [&](Complex q) {
            return std::abs(p - q) <= kRootTolerance * std::max({1.0, std::abs(p), std::abs(q)});
        });
        if (!seen) candidates.push_back(p);
    };
    for (const auto* r : {&l0, &l1}) {
        if (r->is_zero()) continue;
        const Divisor d = divisor_of(*r);
        for (const auto& e : d.entries()) {
            if (!e.point.infinite) add(e.point.value);
        }
    }
    std::vector<DivisorEntry> entries;
    for (Complex p : candidates) {
        int order = std::numeric_limits<int>::max();
        for (const auto* r : {&l0, &l1}) {
            if (!r->is_zero()) order = std::min(order, r->order_at(p));
        }
        if (order != 0) entries.push_back({p, order});
    }
    return Divisor(entries);
}

FactoredMap superconformal_from_divisor(const Divisor& d, const SphereMap& n, const PlanarDomain& domain) {
    const PsiSection psi = build_psi(n, domain);
    return build_superconformal(psi, from_divisor(d), RationalMap(), true);
}

}  // namespace quatconf
