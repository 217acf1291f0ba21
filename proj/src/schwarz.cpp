#include "quatconf/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "quatconf/parallel.hpp"

namespace quatconf {

BallMobius BallMobius::taking_to_zero(const Quaternion& a1) {
    const double n2 = a1.norm2();
    if (n2 >= 1.0) throw std::domain_error("BallMobius: |a1| must be < 1");
    const double c = 1.0 / std::sqrt(1.0 - n2);
    return {c * Quaternion::one(), -c * a1, -c * a1.conj(), c * Quaternion::one()};
}

Quaternion BallMobius::operator()(const Quaternion& a) const { return (p * a + q) * inverse(r * a + s); }

MobiusCheck mobius_ball_check(const Quaternion& p, const Quaternion& q, const Quaternion& r, const Quaternion& s) {
    MobiusCheck out;
    out.residuals[0] = std::abs(norm(p) - norm(s));
    out.residuals[1] = std::abs(norm(q) - norm(r));
    out.residuals[2] = std::abs(p.norm2() - r.norm2() - 1.0);
    out.residuals[3] = norm(p.conj() * q - r.conj() * s);
    out.residuals[4] = norm(p * r.conj() - q * s.conj());
    out.ok = std::all_of(std::begin(out.residuals), std::end(out.residuals),
                         [](double v) { return v <= kMobiusTolerance; });
    return out;
}

MobiusCheck mobius_ball_check(const BallMobius& m) { return mobius_ball_check(m.p, m.q, m.r, m.s); }

Quaternion apply_mobius(const Quaternion& a1, const Quaternion& a) {
    if (a1.norm2() >= 1.0) {
        std::ostringstream msg;
        msg << "apply_mobius: |a1| = " << norm(a1) << " is not inside the unit ball";
        throw std::domain_error(msg.str());
    }
    return (a - a1) * inverse(Quaternion::one() - a1.conj() * a);
}

Complex disk_mobius(Complex z1, Complex z) { return (z - z1) / (1.0 - std::conj(z1) * z); }

Complex disk_mobius_inverse(Complex z1, Complex w) { return (w + z1) / (1.0 + std::conj(z1) * w); }

PlanarDomain schwarz_disk(int resolution, double h) { return PlanarDomain::disk(0.0, 1.0, resolution, h); }

namespace {

// sup over the unit circle: dense sampling, then golden-section refinement
// around the best samples.
double circle_sup(const std::function<double(Complex)>& fn) {
    constexpr int kSamples = 2048;
    const double dt = 2.0 * M_PI / kSamples;
    std::vector<double> v(kSamples);
    for (int k = 0; k < kSamples; ++k) v[static_cast<std::size_t>(k)] = fn(std::polar(1.0, k * dt));
    std::vector<int> order(kSamples);
    for (int k = 0; k < kSamples; ++k) order[static_cast<std::size_t>(k)] = k;
    std::partial_sort(order.begin(), order.begin() + 4, order.end(),
                      [&](int a, int b) { return v[static_cast<std::size_t>(a)] > v[static_cast<std::size_t>(b)]; });
    double best = v[static_cast<std::size_t>(order[0])];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int m = 0; m < 4; ++m) {
        double lo = (order[static_cast<std::size_t>(m)] - 1) * dt;
        double hi = (order[static_cast<std::size_t>(m)] + 1) * dt;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = fn(std::polar(1.0, x1)), f2 = fn(std::polar(1.0, x2));
        for (int it = 0; it < 60; ++it) {
            if (f1 > f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = fn(std::polar(1.0, x1));
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = fn(std::polar(1.0, x2));
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

using QFn = std::function<Quaternion(Complex)>;

// Shared Schwarz evaluation for f = psi lambda on the unit disk.
SchwarzReport schwarz_core(const QFn& psi, const QFn& lambda, std::span<const Complex> grid, const Quaternion& fx0,
                           const Quaternion& fy0, const Quaternion& n0) {
    SchwarzReport out;
    out.samples = grid.size();
    struct Local {
        double psi_sup = 0.0, psi_inv_sup = 0.0;
    };
    const auto psis = parallel_map<Local>(grid.size(), [&](std::size_t k) {
        const double m = norm(psi(grid[k]));
        return Local{m, 1.0 / m};
    });
    for (const auto& l : psis) {
        out.c = std::max(out.c, l.psi_sup);
        out.c_tilde = std::max(out.c_tilde, l.psi_inv_sup);
    }
    out.C0 = circle_sup([&](Complex z) { return std::abs(split_pair(lambda(z)).first); });
    out.C1 = circle_sup([&](Complex z) { return std::abs(split_pair(lambda(z)).second); });
    out.bound = out.c * std::hypot(out.C0, out.C1);

    const auto slack = parallel_map<double>(grid.size(), [&](std::size_t k) {
        const Complex z = grid[k];
        return norm(psi(z) * lambda(z)) - out.bound * std::abs(z);
    });
    out.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (slack[k] > out.max_violation) {
            out.max_violation = slack[k];
            out.worst = grid[k];
        }
        const double rhs = out.bound * std::abs(grid[k]);
        if (rhs > 0.0 && slack[k] >= -1e-9 * rhs) ++out.equality_points;
    }
    if (grid.empty()) out.max_violation = 0.0;
    out.derivative_slack_literal = norm(fx0 - n0 * fy0) - out.bound;
    out.derivative_slack = norm(fx0) - out.bound;
    return out;
}

Quaternion lambda_of(const FactoredMap& f, Complex z) {
    return Quaternion::from_pair(f.lambda0()(z), f.lambda1()(z));
}

}  // namespace

SchwarzReport bound_constants(const FactoredMap& f, std::span<const Complex> grid) {
    const Quaternion f0 = f(0.0);
    if (norm(f0) > 1e-12) {
        std::ostringstream msg;
        msg << "bound_constants: f(0) = " << f0 << " must vanish";
        throw HypothesisError(msg.str());
    }
    const QJet<2> jet = f.surface().jet(0.0);
    return schwarz_core([&](Complex z) { return f.psi()(z); }, [&](Complex z) { return lambda_of(f, z); }, grid,
                        value_of(dx_of(jet)), value_of(dy_of(jet)), f.psi().normal()(0.0));
}

PickReport pick_check(const FactoredMap& f, Complex z1, std::span<const Complex> grid) {
    if (std::abs(z1) >= 1.0) throw std::domain_error("pick_check: z1 must lie in the unit disk");
    PickReport out;
    out.z1 = z1;
    out.samples = grid.size();
    double sup_f = 0.0;
    for (Complex z : grid) sup_f = std::max(sup_f, norm(f(z)));
    if (sup_f >= 1.0) {
        std::ostringstream msg;
        msg << "pick_check: sup |f| = " << sup_f << " reaches the unit sphere";
        throw HypothesisError(msg.str());
    }
    const Quaternion f1 = f(z1);
    out.f1 = f1;
    const SphereMap& n = f.psi().normal();
    const double h = f.psi().domain().h();

    // g(w) = Theta(f(tau^-1 w)), left normal A N A^-1 with A = 1 + (f - f1) u^-1 conj(f1), u = 1 - conj(f1) f.
    const auto theta = [f1](const Quaternion& a) { return apply_mobius(f1, a); };
    const auto g = [&f, z1, theta](Complex w) { return theta(f(disk_mobius_inverse(z1, w))); };
    const auto ng = SphereMap::sampled(
        [&f, &n, z1, f1](Complex w) {
            const Complex z = disk_mobius_inverse(z1, w);
            const Quaternion fz = f(z);
            const Quaternion u = Quaternion::one() - f1.conj() * fz;
            const Quaternion A = Quaternion::one() + (fz - f1) * inverse(u) * f1.conj();
            return normalized((A * n(z) * inverse(A)).imag());
        },
        h, "pick-normal");
    const PlanarDomain disk = schwarz_disk(f.psi().domain().resolution(), h);
    const PsiSection psi_g = build_psi(ng, disk);
    out.gap = psi_g.gap;

    const auto lambda_g = [&](Complex w) { return inverse(psi_g(w)) * g(w); };
    std::vector<Complex> wgrid;
    wgrid.reserve(grid.size());
    for (Complex z : grid) wgrid.push_back(disk_mobius(z1, z));
    const SurfaceMap gs = SurfaceMap::finite_difference(g, h, Provenance::superconformal, "pick-g");
    const QJet<2> gj = gs.jet(0.0);
    out.g = schwarz_core([&](Complex w) { return psi_g(w); }, lambda_g, wgrid, value_of(dx_of(gj)),
                         value_of(dy_of(gj)), ng(0.0));
    out.C_tilde = out.g.bound;
    out.C = out.C_tilde * std::sqrt((1.0 - std::norm(z1)) / (1.0 - f1.norm2()));

    const auto slack = parallel_map<double>(grid.size(), [&](std::size_t k) {
        const Complex z = grid[k];
        return norm(theta(f(z))) - out.C_tilde * std::abs(disk_mobius(z1, z));
    });
    out.max_violation = grid.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (slack[k] > out.max_violation) {
            out.max_violation = slack[k];
            out.worst = grid[k];
        }
    }
    const QJet<2> fj = f.surface().jet(z1);
    out.derivative_slack =
        norm(value_of(dx_of(fj))) / (1.0 - f1.norm2()) - out.C_tilde / (1.0 - std::norm(z1));
    return out;
}

double poincare_ratio(const SurfaceMap& f, Complex z) {
    const double r2 = std::norm(z);
    if (r2 >= 1.0) throw std::domain_error("poincare_ratio: z must lie in the unit disk");
    const QJet<2> jet = f.jet(z);
    const double f2 = value_of(jet).norm2();
    if (f2 >= 1.0) throw std::domain_error("poincare_ratio: f(z) must lie in the unit ball");
    const double fx2 = value_of(dx_of(jet)).norm2();
    return fx2 * (1.0 - r2) * (1.0 - r2) / ((1.0 - f2) * (1.0 - f2));
}

}  // namespace quatconf
