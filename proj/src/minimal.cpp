#include "quatconf/minimal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "quatconf/parallel.hpp"
#include "quatconf/series.hpp"
#include "quatconf/superconf.hpp"

namespace quatconf {

namespace {

const Quaternion kI = Quaternion::i();

Quaternion lambda_value(const RationalMap& l0, const RationalMap& l1, Complex z) {
    return Quaternion::from_pair(l0(z), l1(z));
}

Quaternion lambda_derivative(const RationalMap& l0, const RationalMap& l1, Complex z) {
    return Quaternion::from_pair(l0.derivative()(z), l1.derivative()(z));
}

double relative_gap(const Quaternion& a, const Quaternion& b) {
    const double s = std::max(norm(a), norm(b));
    return s > 0.0 ? norm(a - b) / s : 0.0;
}

using Scalar = std::function<double(Complex)>;

// Compass search from z, starting with the given step.
Complex refine_minimum(const Scalar& fn, Complex z, double step) {
    double best = fn(z);
    const Complex dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0.7071067811865476, 0.7071067811865476},
                            {-0.7071067811865476, 0.7071067811865476}, {0.7071067811865476, -0.7071067811865476},
                            {-0.7071067811865476, -0.7071067811865476}};
    const double floor = 1e-14 * std::max(1.0, std::abs(z));
    for (int it = 0; it < 4000 && step > floor; ++it) {
        bool moved = false;
        for (Complex d : dirs) {
            const Complex w = z + step * d;
            const double v = fn(w);
            if (v < best) {
                best = v;
                z = w;
                moved = true;
                break;
            }
        }
        if (!moved) step *= 0.5;
    }
    return z;
}

void add_unique(std::vector<Complex>& out, Complex p, double tol) {
    for (Complex q : out) {
        if (std::abs(p - q) <= tol) return;
    }
    out.push_back(p);
}

// Isolated zeros of a nonnegative function: lattice local minima refined by
// compass search and kept when the refined value is below rel_tol * sup.
std::vector<Complex> locate_zeros(const Scalar& fn, const PlanarDomain& domain, double rel_tol) {
    const auto lattice = domain.lattice();
    const int n = domain.resolution();
    const auto values = parallel_map<double>(lattice.size(), [&](std::size_t k) {
        const double v = fn(lattice[k]);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    });
    double sup = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) sup = std::max(sup, v);
    }
    const double spacing = domain.spacing();
    std::vector<Complex> out;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const std::size_t k = static_cast<std::size_t>(r * n + c);
            if (!std::isfinite(values[k])) continue;
            bool minimum = true;
            for (int dr = -1; dr <= 1 && minimum; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 || rr >= n || cc >= n) continue;
                    if (values[static_cast<std::size_t>(rr * n + cc)] < values[k]) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (!minimum) continue;
            const Complex z = refine_minimum(fn, lattice[k], 0.5 * spacing);
            if (!domain.encloses(z) || std::abs(z - lattice[k]) > 2.0 * spacing) continue;
            if (fn(z) <= rel_tol * sup) add_unique(out, z, 1e-6 * std::max(1.0, std::abs(z)));
        }
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

MinimalPair::MinimalPair(SphereMap n, Quaternion a, RationalMap l0, RationalMap l1, PlanarDomain domain,
                         std::vector<Complex> singular)
    : n_(std::move(n)),
      a_(a),
      l0_(std::move(l0)),
      l1_(std::move(l1)),
      domain_(std::move(domain)),
      singular_(std::move(singular)) {}

Quaternion MinimalPair::lambda(Complex z) const { return lambda_value(l0_, l1_, z); }

MuValue MinimalPair::mu(Complex z) const {
    const OneFormValue dn = n_.differential(z);
    const Quaternion lam = lambda(z);
    const Quaternion lx = lambda_derivative(l0_, l1_, z);
    const Quaternion ly = kI * lx;
    const Quaternion base = dn.wx * a_ * lam;
    if (norm(base) <= kSingularTolerance) {
        std::ostringstream msg;
        msg << "mu: " << z << " lies in the singular set (|N_x a lambda| = " << norm(base) << ")";
        throw SingularPointError(msg.str());
    }
    const Quaternion p = psi(z);
    MuValue out;
    out.mu = inverse(base) * p * lx;
    out.cross_residual = relative_gap(p * ly, dn.wy * a_ * lam * out.mu);
    return out;
}

Quaternion MinimalPair::f(Complex z) const { return a_ * lambda(z) * (mu(z).mu - Quaternion::one()); }

Quaternion MinimalPair::g(Complex z) const {
    const Quaternion lam = lambda(z);
    return -(n_(z) * a_ * lam * mu(z).mu) + a_ * kI * lam;
}

template <int K>
void MinimalPair::jets(Complex z, QJet<K>* f, QJet<K>* g) const {
    const QJet<K + 1> n = [&] {
        if constexpr (K + 1 == 3) return n_.jet3(z);
        else return n_.jet2(z);
    }();
    const QJet<K + 1> lam = lambda_series<K + 1>(l0_, l1_, z);
    const QJet<K> nk = truncate_to<K>(n);
    const QJet<K> lk = truncate_to<K>(lam);
    const QJet<K> psi = -(nk * a_) + constant_jet<K>(a_ * kI);
    const QJet<K> mu = inverse(dx_of(n) * a_ * lk) * psi * dx_of(lam);
    if (f) *f = a_ * lk * (mu - constant_jet<K>(Quaternion::one()));
    if (g) *g = -(nk * a_ * lk * mu) + (a_ * kI) * lk;
}

SurfaceMap MinimalPair::f_surface() const {
    const MinimalPair self = *this;
    const double h = domain_.h();
    SurfaceMap s = n_.analytic() ? SurfaceMap::analytic(
                                       [self](Complex z) { return self.f(z); },
                                       [self](Complex z) {
                                           QJet<2> f;
                                           self.jets<2>(z, &f, nullptr);
                                           return f;
                                       },
                                       Provenance::minimal, "minimal-f")
                                 : SurfaceMap::finite_difference([self](Complex z) { return self.f(z); }, h,
                                                                 Provenance::minimal, "minimal-f");
    return s.with_exclusions(singular_, 2.0 * h);
}

SurfaceMap MinimalPair::g_surface() const {
    const MinimalPair self = *this;
    const double h = domain_.h();
    SurfaceMap s = n_.analytic() ? SurfaceMap::analytic(
                                       [self](Complex z) { return self.g(z); },
                                       [self](Complex z) {
                                           QJet<2> g;
                                           self.jets<2>(z, nullptr, &g);
                                           return g;
                                       },
                                       Provenance::minimal, "minimal-g")
                                 : SurfaceMap::finite_difference([self](Complex z) { return self.g(z); }, h,
                                                                 Provenance::minimal, "minimal-g");
    return s.with_exclusions(singular_, 2.0 * h);
}

SurfaceMap MinimalPair::psi_lambda_surface() const {
    const MinimalPair self = *this;
    const double h = domain_.h();
    if (!n_.analytic()) {
        return SurfaceMap::finite_difference([self](Complex z) { return self.psi_lambda(z); }, h,
                                             Provenance::superconformal, "psi-lambda");
    }
    return SurfaceMap::analytic(
        [self](Complex z) { return self.psi_lambda(z); },
        [self](Complex z) {
            const QJet<2> psi = -(self.n_.jet2(z) * self.a_) + constant_jet<2>(self.a_ * kI);
            return psi * lambda_series<2>(self.l0_, self.l1_, z);
        },
        Provenance::superconformal, "psi-lambda");
}

MuValue mu_at(const MinimalPair& pair, Complex z) { return pair.mu(z); }

// ---------------------------------------------------------------------------

std::vector<Complex> locate_singular_set(const SphereMap& n, const Quaternion& a, const RationalMap& l0,
                                         const RationalMap& l1, const PlanarDomain& domain) {
    std::vector<Complex> out;
    const double tol = 1e-6;
    // Common zeros of l0 and l1 (lambda = 0).
    if (l0.is_zero() || l1.is_zero()) {
        const RationalMap& other = l0.is_zero() ? l1 : l0;
        for (const auto& r : other.zeros()) {
            if (domain.encloses(r.point)) add_unique(out, r.point, tol);
        }
    } else {
        for (const auto& r : l0.zeros()) {
            if (domain.encloses(r.point) && l1.order_at(r.point) > 0) add_unique(out, r.point, tol);
        }
    }
    if (n.kind() == SphereKind::lambda_pair) {
        // N_x = 0 exactly where (B/A)' = 0 or A has a multiple zero: the Wronskian A'B - AB'.
        const CPolynomial& A = n.reduced0();
        const CPolynomial& B = n.reduced1();
        const CPolynomial w = A.derivative() * B - A * B.derivative();
        if (!w.is_zero()) {
            for (const auto& r : distinct_roots(w)) {
                if (domain.encloses(r.point)) add_unique(out, r.point, tol);
            }
        }
    } else if (n.kind() == SphereKind::sampled) {
        auto magnitude = [&](Complex z) {
            return norm(n.differential(z).wx * a * lambda_value(l0, l1, z));
        };
        for (Complex p : locate_zeros(magnitude, domain, 1e-6)) add_unique(out, p, tol);
    }
    return out;
}

namespace {

void check_minimal_hypotheses(const SphereMap& n, const RationalMap& l0, const RationalMap& l1,
                              const PlanarDomain& domain) {
    const HolomorphyReport r = classify(n, domain);
    if (r.kind == Holomorphy::constant) {
        throw std::invalid_argument("build_minimal_pair: constant left normal; use the super-conformal path");
    }
    if (r.kind != Holomorphy::holomorphic) {
        std::ostringstream msg;
        msg << "build_minimal_pair: left normal must be holomorphic, classified " << to_string(r.kind);
        throw HypothesisError(msg.str());
    }
    if (l0.is_zero() && l1.is_zero()) {
        throw std::invalid_argument("build_minimal_pair: both lambdas vanish identically");
    }
    for (const auto* l : {&l0, &l1}) {
        for (const auto& p : l->poles()) {
            if (domain.encloses(p.point)) {
                std::ostringstream msg;
                msg << "build_minimal_pair: lambda has a pole at " << p.point << " inside the domain";
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

}  // namespace

MinimalPair build_minimal_pair(const SphereMap& n, const RationalMap& l0, const RationalMap& l1,
                               const PlanarDomain& domain) {
    check_minimal_hypotheses(n, l0, l1, domain);
    // N must avoid q = a i a^-1. q sits halfway between the centre of the
    // missed cap and its rim: the centre itself gives a in C j for symmetric
    // images, where f collapses to a point for linear lambda.
    const PsiSection section = build_psi(n, domain);
    const Quaternion centre = section.avoided();
    Quaternion e = Quaternion::j() - inner(Quaternion::j(), centre) * centre;
    if (norm(e) < 0.5) e = Quaternion::k() - inner(Quaternion::k(), centre) * centre;
    e = normalized(e);
    const double t = 0.5 * section.gap;
    const Quaternion q = normalized(std::cos(t) * centre + std::sin(t) * e);
    const Quaternion a = norm(q + kI) < 1e-6
                             ? rotation_taking(Quaternion::j(), q) * rotation_taking(kI, Quaternion::j())
                             : rotation_taking(kI, q);
    return MinimalPair(n, a, l0, l1, domain, locate_singular_set(n, a, l0, l1, domain));
}

MinimalPair build_minimal_pair(const SphereMap& n, const RationalMap& l0, const RationalMap& l1,
                               const PlanarDomain& domain, const Quaternion& a) {
    check_minimal_hypotheses(n, l0, l1, domain);
    if (a.norm2() == 0.0) throw std::invalid_argument("build_minimal_pair: a must be nonzero");
    return MinimalPair(n, a, l0, l1, domain, locate_singular_set(n, a, l0, l1, domain));
}

// ---------------------------------------------------------------------------

MinimalDiagnostics minimal_diagnostics(const MinimalPair& pair, std::span<const Complex> grid) {
    MinimalDiagnostics out;
    out.degenerate = pair.degenerate();
    if (out.degenerate) return out;
    const SurfaceMap fs = pair.f_surface();
    const SurfaceMap gs = pair.g_surface();
    std::vector<Complex> pts;
    for (Complex z : grid) {
        if (!fs.excluded(z)) pts.push_back(z);
    }
    out.samples = pts.size();
    // f constant: every residual is vacuous.
    double sup_df = 0.0, sup_f = 0.0;
    for (Complex z : pts) {
        const SurfaceJet j = jet_at(fs, z);
        sup_df = std::max(sup_df, std::max(norm(j.fx), norm(j.fy)));
        sup_f = std::max(sup_f, norm(j.f));
    }
    if (sup_df <= 1e-9 * std::max(1.0, sup_f)) {
        out.degenerate = true;
        return out;
    }
    struct Local {
        double conj = 0, null = 0, defect = 0, gap = 0, hf = 0, hg = 0, normal = 0, cross = 0;
    };
    const auto locals = parallel_map<Local>(pts.size(), [&](std::size_t k) {
        const Complex z = pts[k];
        Local l;
        const SurfaceJet jf = jet_at(fs, z);
        const SurfaceJet jg = jet_at(gs, z);
        const double s = jf.fx.norm2() + jf.fy.norm2();
        if (s == 0.0) return l;
        l.conj = std::sqrt((jg.fx + jf.fy).norm2() + (jg.fy - jf.fx).norm2()) / std::sqrt(s);
        std::complex<double> null_sum = 0.0;
        const double fx[] = {jf.fx.w, jf.fx.x, jf.fx.y, jf.fx.z};
        const double gx[] = {jg.fx.w, jg.fx.x, jg.fx.y, jg.fx.z};
        for (int m = 0; m < 4; ++m) {
            const Complex phi_x(fx[m], gx[m]);
            null_sum += phi_x * phi_x;
        }
        const Complex defect(jf.fx.norm2() - jf.fy.norm2(), -2.0 * inner(jf.fx, jf.fy));
        l.null = std::abs(null_sum) / s;
        l.defect = std::abs(defect) / s;
        l.gap = std::abs(null_sum - defect) / s;
        const Quaternion n = pair.normal()(z);
        if (!jf.branch) {
            l.hf = norm(curvature_from_jet(fs.jet(z), z).H);
            l.normal = norm(jf.N - n);
        }
        if (!jg.branch) {
            l.hg = norm(curvature_from_jet(gs.jet(z), z).H);
            l.normal = std::max(l.normal, norm(jg.N - n));
        }
        l.cross = pair.mu(z).cross_residual;
        return l;
    });
    for (const auto& l : locals) {
        out.conjugate_residual = std::max(out.conjugate_residual, l.conj);
        out.null_residual = std::max(out.null_residual, l.null);
        out.conformal_defect = std::max(out.conformal_defect, l.defect);
        out.null_conformal_gap = std::max(out.null_conformal_gap, l.gap);
        out.mean_curvature_f = std::max(out.mean_curvature_f, l.hf);
        out.mean_curvature_g = std::max(out.mean_curvature_g, l.hg);
        out.normal_mismatch = std::max(out.normal_mismatch, l.normal);
        out.mu_cross_residual = std::max(out.mu_cross_residual, l.cross);
    }
    return out;
}

MinimalDiagnostics minimal_diagnostics(const MinimalPair& pair) {
    const auto pts = pair.domain().samples();
    return minimal_diagnostics(pair, pts);
}

// ---------------------------------------------------------------------------

namespace {

// d(psi lambda) = (-N_x a lambda + psi lambda_x, -N_y a lambda + psi i lambda_x).
OneFormValue psi_lambda_differential(const MinimalPair& pair, Complex z) {
    const OneFormValue dn = pair.normal().differential(z);
    const Quaternion lam = pair.lambda(z);
    const Quaternion lx = lambda_derivative(pair.lambda0(), pair.lambda1(), z);
    const Quaternion p = pair.psi(z);
    return {-(dn.wx * pair.a() * lam) + p * lx, -(dn.wy * pair.a() * lam) + p * kI * lx};
}

double form_norm(const OneFormValue& w) { return std::sqrt(w.wx.norm2() + w.wy.norm2()); }

}  // namespace

BranchZeroReport branch_zero_report(const MinimalPair& pair, std::span<const Complex> grid) {
    BranchZeroReport out;
    const PlanarDomain& domain = pair.domain();
    const auto& q = pair.singular_set();
    const double h = domain.h();
    auto near_q = [&](Complex z) {
        return std::any_of(q.begin(), q.end(), [&](Complex p) { return std::abs(z - p) <= 2.0 * h; });
    };
    auto f_norm = [&](Complex z) {
        try {
            return norm(pair.f(z));
        } catch (const SingularPointError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    const double zero_tol = 1e-8;
    out.branch_points = locate_zeros([&](Complex z) { return form_norm(psi_lambda_differential(pair, z)); },
                                     domain, zero_tol);
    out.zeros_of_f = locate_zeros(f_norm, domain, zero_tol);
    out.branch_of_n =
        locate_zeros([&](Complex z) { return form_norm(pair.normal().differential(z)); }, domain, zero_tol);
    // Zeros of f next to Q are artifacts of the blow-up there.
    out.zeros_of_f.erase(std::remove_if(out.zeros_of_f.begin(), out.zeros_of_f.end(), near_q), out.zeros_of_f.end());

    // |f| on circles of radius 1e-3 and 1e-4: a pole grows tenfold.
    auto circle_max = [&](Complex p, double r) {
        double m = 0.0;
        for (int k = 0; k < 16; ++k) m = std::max(m, f_norm(p + std::polar(r, 2.0 * M_PI * (k + 0.5) / 16.0)));
        return m;
    };
    out.match_radius = 1e-5 * std::max(1.0, std::abs(domain.center()) + domain.half_width());
    std::vector<Complex> expected = out.zeros_of_f;
    for (Complex p : out.branch_of_n) {
        if (circle_max(p, 1e-4) > 3.0 * circle_max(p, 1e-3)) {
            out.unbounded_branch_of_n.push_back(p);
        } else {
            add_unique(expected, p, out.match_radius);
        }
    }
    auto covered = [&](const std::vector<Complex>& from, const std::vector<Complex>& to) {
        return std::all_of(from.begin(), from.end(), [&](Complex p) {
            return std::any_of(to.begin(), to.end(), [&](Complex r) { return std::abs(p - r) <= out.match_radius; });
        });
    };
    out.sets_agree = covered(out.branch_points, expected) && covered(expected, out.branch_points);

    // dN f against central differences of psi lambda.
    const double step = 1e-4;
    std::vector<Complex> pts;
    for (Complex z : grid) {
        if (!near_q(z)) pts.push_back(z);
    }
    struct Local {
        double diff = 0, scale = 0;
    };
    const auto locals = parallel_map<Local>(pts.size(), [&](std::size_t k) {
        const Complex z = pts[k];
        Local l;
        MuValue m;
        try {
            m = pair.mu(z);
        } catch (const SingularPointError&) {
            return l;
        }
        const Quaternion f = pair.a() * pair.lambda(z) * (m.mu - Quaternion::one());
        const OneFormValue dn = pair.normal().differential(z);
        const Quaternion lx = (pair.psi_lambda(z + step) - pair.psi_lambda(z - step)) / (2.0 * step);
        const Quaternion ly =
            (pair.psi_lambda(z + Complex(0, step)) - pair.psi_lambda(z - Complex(0, step))) / (2.0 * step);
        const OneFormValue lhs{dn.wx * f, dn.wy * f};
        l.diff = std::max(norm(lhs.wx - lx), norm(lhs.wy - ly));
        l.scale = std::max(norm(lhs.wx), norm(lhs.wy));
        return l;
    });
    double diff = 0.0, scale = 0.0;
    for (const auto& l : locals) {
        diff = std::max(diff, l.diff);
        scale = std::max(scale, l.scale);
    }
    out.identity_residual = scale > 0.0 ? diff / scale : 0.0;
    return out;
}

BranchZeroReport branch_zero_report(const MinimalPair& pair) {
    const auto pts = pair.domain().samples();
    return branch_zero_report(pair, pts);
}

}  // namespace quatconf
