// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quatconf/cli.hpp"
#include "quatconf/forms.hpp"
#include "quatconf/minimal.hpp"
#include "quatconf/schwarz.hpp"
#include "quatconf/series.hpp"
#include "quatconf/sphere.hpp"
#include "quatconf/superconf.hpp"
#include "quatconf/surface.hpp"

using namespace quatconf;

namespace {

using Engine = std::mt19937_64;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double uniform(Engine& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Quaternion random_quaternion(Engine& rng) { return {uniform(rng), uniform(rng), uniform(rng), uniform(rng)}; }

Quaternion random_unit_imaginary(Engine& rng) {
    std::normal_distribution<double> g;
    const Quaternion q{0.0, g(rng), g(rng), g(rng)};
    return q / norm(q);
}

Complex random_complex(Engine& rng, double radius) {
    return std::polar(radius * std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, 0.0, 2.0 * M_PI));
}

RationalMap poly(std::initializer_list<Complex> c) { return RationalMap(CPolynomial(c)); }

double qdist(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

double fdist(const OneFormValue& a, const OneFormValue& b) { return norm(a - b); }

const Quaternion kI = Quaternion::i();
const RationalMap kOneMap = RationalMap::constant(1.0);

// ---------------------------------------------------------------------------

Outcome algebraic_identities() {
    Engine rng(1001);
    double decomposition = 0, eigen = 0, conj = 0, wedge = 0;
    for (int n = 0; n < 10000; ++n) {
        const OneFormValue w{random_quaternion(rng), random_quaternion(rng)};
        const OneFormValue e{random_quaternion(rng), random_quaternion(rng)};
        const Quaternion N = random_unit_imaginary(rng);
        const OneFormValue wn = n_part(w, N, Side::left, Sign::plus);
        const OneFormValue wm = n_part(w, N, Side::left, Sign::minus);
        decomposition = std::max(decomposition, fdist(w, wn + wm));
        eigen = std::max(eigen, fdist(star(wn), N * wn));
        conj = std::max(conj, fdist(wn.conj(), n_part(w.conj(), N, Side::right, Sign::minus)));
        const TwoFormValue whole = wedge_pair(w, e);
        const TwoFormValue a = wedge_pair(n_part(w, N, Side::right, Sign::plus), n_part(e, N, Side::left, Sign::minus));
        const TwoFormValue b = wedge_pair(n_part(w, N, Side::right, Sign::minus), n_part(e, N, Side::left, Sign::plus));
        wedge = std::max(wedge, norm(whole.q - (a.q + b.q)));
    }
    const double worst = std::max({decomposition, eigen, conj, wedge});
    return {worst <= 1e-12, fmt("10000 samples; sum %.1e, star %.1e, conj %.1e, wedge %.1e", decomposition, eigen,
                                conj, wedge)};
}

Outcome holomorphic_normals() {
    const auto m = cli::build_model(cli::parse_config(
        cli::json::parse(R"({"construction": {"type": "custom", "name": "plane"}})")));
    Engine rng(1002);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const SurfaceJet j = jet_at(m.f, random_complex(rng, 1.0));
        if (j.branch) return {false, "identity map reported a branch point"};
        worst = std::max({worst, qdist(j.N, kI), qdist(j.R, -kI)});
    }
    return {m.f.mode() == DerivativeMode::analytic && worst <= 1e-12,
            fmt("f = z, 100 points: max |N - i|, |R + i| = %.1e", worst)};
}

Outcome psi_anchor() {
    const PsiSection psi = build_psi(SphereMap::constant(kI), PlanarDomain::disk(0.0, 1.0, 41), -0.5 * kI);
    double worst = 0.0;
    for (Complex z : PlanarDomain::disk(0.0, 1.0, 21).samples()) worst = std::max(worst, qdist(psi(z), Quaternion::one()));
    return {worst == 0.0, fmt("N = i, a = -i/2: max |psi - 1| = %.1e", worst)};
}

Outcome factorization_soundness() {
    Engine rng(1004);
    const PlanarDomain domain = PlanarDomain::disk(0.0, 1.0, 21);
    double worst_err = 0.0, min_ratio = 1e9, max_ratio = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const RationalMap n0(CPolynomial{random_complex(rng, 1.0) + 2.0, random_complex(rng, 0.5)});
        const RationalMap n1(CPolynomial{random_complex(rng, 1.0), random_complex(rng, 1.0)});
        const SphereMap n = SphereMap::from_lambda_pair(n0, n1, Sign::minus);
        const RationalMap l0(CPolynomial{random_complex(rng, 0.5) + 1.5, random_complex(rng, 0.5), random_complex(rng, 0.3)});
        const RationalMap l1(CPolynomial{random_complex(rng, 0.5), random_complex(rng, 0.5)});
        const FactoredMap f = build_superconformal(build_psi(n, domain), l0, l1);
        auto sup_error = [&](double h) {
            const SurfaceMap s = f.surface().as_finite_difference(h);
            double e = 0.0;
            for (Complex z : domain.with_step(h).samples()) {
                const SurfaceJet j = jet_at(s, z);
                if (!j.branch) e = std::max(e, qdist(j.N, n(z)));
            }
            return e;
        };
        const double e1 = sup_error(1e-3), e2 = sup_error(5e-4);
        worst_err = std::max(worst_err, e1);
        min_ratio = std::min(min_ratio, e1 / e2);
        max_ratio = std::max(max_ratio, e1 / e2);
    }
    const bool pass = worst_err <= 1e-4 && min_ratio >= 3.5 && max_ratio <= 4.5;
    return {pass, fmt("10 maps: sup |N_f - N| = %.2e at h = 1e-3; halving ratio in [%.3f, %.3f]", worst_err, min_ratio,
                      max_ratio)};
}

Outcome wintgen() {
    // Super-conformal maps, difference derivatives at h = 1e-3.
    const PlanarDomain domain = PlanarDomain::disk(0.0, 0.9, 31);
    std::vector<std::pair<std::string, SurfaceMap>> maps;
    const auto anti = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 1.0}), Sign::minus);
    maps.emplace_back("psi(1+z^2 + z j)", build_superconformal(build_psi(anti, domain), poly({1.0, 0.0, 1.0}),
                                                                poly({0.0, 1.0})).surface());
    maps.emplace_back("psi(z + 0.3 z^3 j)", build_superconformal(build_psi(anti, domain), poly({0.0, 1.0}),
                                                                  poly({0.0, 0.0, 0.0, 0.3})).surface());
    maps.emplace_back("twistor", build_twistor(poly({1.0, 0.5}), poly({0.0, 1.0}), poly({0.0, 0.0, 1.0}),
                                               poly({1.0, -1.0})));
    const auto model = [](const char* name) {
        return cli::build_model(cli::parse_config(cli::json::parse(
                                    std::string(R"({"construction": {"type": "custom", "name": ")") + name + "\"}}")))
            .f;
    };
    maps.emplace_back("round sphere", model("sphere"));
    double super_worst = 0.0;
    for (auto& [name, f] : maps) {
        const SurfaceMap fd = f.as_finite_difference(1e-3);
        for (Complex z : domain.samples()) {
            try {
                super_worst = std::max(super_worst, std::abs(wintgen_slack_at(fd, z)));
            } catch (const std::domain_error&) {
            }
        }
    }
    auto slack_range = [&](const SurfaceMap& f) {
        double lo = 0.0, hi = 0.0;
        const SurfaceMap fd = f.as_finite_difference(1e-3);
        for (Complex z : domain.samples()) {
            try {
                const double s = wintgen_slack_at(fd, z);
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            } catch (const std::domain_error&) {
            }
        }
        return std::pair{lo, hi};
    };
    const auto [glo, ghi] = slack_range(model("zbar_graph"));
    const auto [tlo, thi] = slack_range(model("clifford_torus"));
    const bool pass = super_worst < 1e-4 && ghi > 1e-2 && glo >= -1e-4;
    return {pass, fmt("super-conformal sup |slack| = %.1e; z + zbar^2 j slack in [%.1e, %.1e] (is super-conformal); "
                      "torus slack in [%.1e, %.1e]",
                      super_worst, glo, ghi, tlo, thi)};
}

Outcome curvature_calibration() {
    const auto sphere = cli::build_model(cli::parse_config(cli::json::parse(
        R"({"construction": {"type": "custom", "name": "sphere"}})")));
    const auto grid = PlanarDomain::rectangle(0.0, 1.5, 1.5, 50).samples();
    double worst_fd[3] = {0, 0, 0}, worst_an[3] = {0, 0, 0};
    auto measure = [&](const SurfaceMap& f, double* w) {
        for (Complex z : grid) {
            const CurvatureSample s = curvature_at(f, z);
            w[0] = std::max(w[0], std::abs(s.K - 1.0));
            w[1] = std::max(w[1], std::abs(s.Kperp));
            w[2] = std::max(w[2], std::abs(s.H.norm2() - 1.0));
        }
    };
    measure(sphere.f.as_finite_difference(1e-3), worst_fd);
    measure(sphere.f, worst_an);
    const bool pass = grid.size() == 2500 && worst_fd[0] <= 2e-3 && worst_fd[1] <= 1e-3 && worst_fd[2] <= 5e-3 &&
                      worst_an[0] <= 2e-3 && worst_an[1] <= 1e-3 && worst_an[2] <= 5e-3;
    return {pass, fmt("50x50, h = 1e-3: |K-1| %.1e, |Kperp| %.1e, ||H|^2-1| %.1e (analytic %.1e, %.1e, %.1e)",
                      worst_fd[0], worst_fd[1], worst_fd[2], worst_an[0], worst_an[1], worst_an[2])};
}

Outcome minimal_pipeline() {
    const PlanarDomain domain = PlanarDomain::disk(0.0, 0.8, 31);
    struct Config {
        SphereMap n;
        RationalMap l0, l1;
    };
    const std::vector<Config> configs = {
        {SphereMap::from_lambda_pair(kOneMap, poly({0.0, 1.0}), Sign::plus), poly({1.0, 1.0}), RationalMap()},
        {SphereMap::from_lambda_pair(kOneMap, poly({0.0, 1.0}), Sign::plus), poly({1.0, 1.0}), poly({0.3})},
        {SphereMap::from_lambda_pair(poly({1.0, 0.0, 0.5}), poly({0.2, 1.0}), Sign::plus), poly({1.0, -0.3, 0.4}),
         poly({0.7, 0.2})},
        {SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.0, 1.0}), Sign::plus), poly({1.0, 0.0, 1.0}),
         RationalMap()},
        {SphereMap::from_lambda_pair(poly({2.0, 1.0}), poly({1.0, 0.0, 0.5}), Sign::plus), poly({0.5, 1.0, 0.2}),
         poly({0.0, 0.0, 0.3})},
    };
    double conj = 0, H = 0, null = 0, identity = 0;
    bool degenerate = false;
    for (const auto& c : configs) {
        const MinimalPair pair = build_minimal_pair(c.n, c.l0, c.l1, domain);
        const MinimalDiagnostics d = minimal_diagnostics(pair);
        const BranchZeroReport b = branch_zero_report(pair);
        degenerate = degenerate || d.degenerate;
        conj = std::max(conj, d.conjugate_residual);
        H = std::max({H, d.mean_curvature_f, d.mean_curvature_g});
        null = std::max(null, d.null_residual);
        identity = std::max(identity, b.identity_residual);
    }
    // Sampled normal: every derivative by differences.
    const SphereMap exact = configs[2].n;
    const auto sampled = SphereMap::sampled([exact](Complex z) { return exact(z); }, 1e-4);
    const MinimalDiagnostics fd =
        minimal_diagnostics(build_minimal_pair(sampled, configs[2].l0, configs[2].l1, PlanarDomain::disk(0.0, 0.8, 21)));
    const bool pass = !degenerate && conj < 1e-8 && H < 1e-4 && null < 1e-8 && identity <= 1e-6 &&
                      fd.conjugate_residual < 1e-4;
    return {pass, fmt("5 pairs: conjugate %.1e, |H| %.1e, null %.1e, dN f = d(psi lambda) %.1e; "
                      "difference conjugate %.1e",
                      conj, H, null, identity, fd.conjugate_residual)};
}

Outcome branch_zero() {
    // N from (1, z^2) branches at 0. lambda = 1 + z^2 E keeps f bounded at 0;
    // E is chosen so that psi lambda_x = N_x a lambda at z0, i.e. f(z0) = 0.
    // Everything is even in z, so the disk leaves out -z0.
    const auto n = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.0, 1.0}), Sign::plus);
    const PlanarDomain domain = PlanarDomain::disk(Complex(0.25, -0.05), 0.55, 41);
    const MinimalPair probe = build_minimal_pair(n, kOneMap, RationalMap(), domain);
    const Complex z0(0.35, -0.2);
    const Quaternion q0 = Quaternion::from_complex(z0);
    const Quaternion na = n.differential(z0).wx * probe.a();
    const Quaternion E = inverse(2.0 * probe.psi(z0) * q0 - na * q0 * q0) * na;
    const auto [e0, e1] = split_pair(E);
    const MinimalPair pair = build_minimal_pair(n, RationalMap(CPolynomial{1.0, 0.0, e0}),
                                                RationalMap(CPolynomial{0.0, 0.0, e1}), domain, probe.a());
    const BranchZeroReport r = branch_zero_report(pair);
    auto near = [](const std::vector<Complex>& s, Complex p, double tol) {
        return std::any_of(s.begin(), s.end(), [&](Complex q) { return std::abs(q - p) < tol; });
    };
    const double tol = 2.0 * 0.55 / 40.0;  // grid spacing
    const bool expected = r.branch_points.size() == 2 && near(r.branch_points, z0, tol) &&
                          near(r.branch_points, 0.0, tol) && r.zeros_of_f.size() == 1 &&
                          near(r.zeros_of_f, z0, tol) && r.branch_of_n.size() == 1;
    return {expected && r.sets_agree,
            fmt("|f(z0)| = %.1e; %zu branch points of psi lambda, %zu zeros of f, %zu branch points of N; sets %s",
                norm(pair.f(z0)), r.branch_points.size(), r.zeros_of_f.size(), r.branch_of_n.size(),
                r.sets_agree ? "agree" : "differ")};
}

Outcome degree() {
    Engine rng(1009);
    auto random_poly = [&](int d) {
        CPolynomial p = CPolynomial::constant(random_complex(rng, 1.0) + Complex(0.5, 0.0));
        for (int k = 0; k < d; ++k) p = p * CPolynomial::linear_factor(random_complex(rng, 2.0));
        return p;
    };
    int matched = 0;
    std::string first_miss;
    for (int trial = 0; trial < 20; ++trial) {
        // Balanced: both components of the same degree.
        const int d0 = 1 + static_cast<int>(rng() % 4), d1 = d0;
        const Sign sign = trial % 2 ? Sign::plus : Sign::minus;
        const SphereMap n = SphereMap::from_lambda_pair(RationalMap(random_poly(d0)), RationalMap(random_poly(d1)), sign);
        const DegreeCount c = sphere_degree_counts(n);
        const int expect = std::max(d0, d1);
        if (c.preimages_of_i == expect && c.preimages_of_minus_i == expect) {
            ++matched;
        } else if (first_miss.empty()) {
            first_miss = fmt(" (first miss: degrees %d/%d, counts %d/%d)", d0, d1, c.preimages_of_i,
                             c.preimages_of_minus_i);
        }
    }
    return {matched == 20, fmt("%d/20 pairs with #N^-1(i) = #N^-1(-i) = max degree%s", matched, first_miss.c_str())};
}

Outcome schwarz_pick() {
    const PlanarDomain disk = schwarz_disk(114);
    const auto grid = disk.samples();
    const auto curved = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.5}), Sign::minus);
    const auto tilted = SphereMap::from_lambda_pair(poly({1.0, 0.2}), poly({0.3, 0.4}), Sign::minus);
    const std::vector<FactoredMap> maps = {
        build_superconformal(build_psi(SphereMap::constant(kI), disk, -0.5 * kI), poly({0.0, 0.5}), poly({0.0, 0.0, 0.2})),
        build_superconformal(build_psi(SphereMap::constant(kI), disk, -0.5 * kI), poly({0.0, 0.3, 0.3}), poly({0.0, 0.2})),
        build_superconformal(build_psi(curved, disk), poly({0.0, 0.2, 0.1}), poly({0.0, -0.1, 0.0, 0.05})),
        build_superconformal(build_psi(curved, disk), poly({0.0, 0.2, 0.05}), poly({0.0, 0.1})),
        build_superconformal(build_psi(tilted, disk), poly({0.0, 0.1, 0.0, 0.1}), poly({0.0, 0.0, 0.15})),
    };
    const std::vector<Complex> centres = {Complex(0.3, 0.0), Complex(-0.2, 0.4), Complex(0.1, -0.6)};
    double schwarz = -1e9, pick = -1e9, ratio = -1e9;
    int certified = 0;
    for (const auto& f : maps) {
        const SchwarzReport s = bound_constants(f, grid);
        schwarz = std::max({schwarz, s.max_violation, s.derivative_slack});
        for (Complex z1 : centres) {
            const PickReport p = pick_check(f, z1, grid);
            pick = std::max({pick, p.max_violation, p.derivative_slack});
            ratio = std::max(ratio, poincare_ratio(f.surface(), z1) - p.C_tilde * p.C_tilde);
            ++certified;
        }
    }
    const bool pass = grid.size() >= 10000 && schwarz <= 1e-9 && pick <= 1e-9 && ratio <= 0.0;
    return {pass, fmt("5 maps, %zu grid points: Schwarz %.1e, Pick %.1e, max ratio - C^2 = %.2e at %d points",
                      grid.size(), schwarz, pick, ratio, certified)};
}

Outcome divisor_machinery() {
    Engine rng(1011);
    const auto n = SphereMap::constant(kI);
    const PlanarDomain domain = PlanarDomain::disk(0.0, 3.0, 16);
    int roundtrips = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DivisorEntry> entries;
        const int count = 1 + static_cast<int>(rng() % 4);
        while (static_cast<int>(entries.size()) < count) {
            const Complex p = random_complex(rng, 2.0);
            bool far = true;
            for (const auto& e : entries) far = far && std::abs(e.point.value - p) > 0.1;
            if (!far) continue;
            int order = static_cast<int>(rng() % 9) - 4;
            if (order == 0) order = 1;
            entries.push_back({p, order});
        }
        const Divisor d(entries);
        if (same_divisor(divisor_of_factored(superconformal_from_divisor(d, n, domain)), d)) ++roundtrips;
    }
    // psi z^n with a curved normal.
    const auto curved = SphereMap::from_lambda_pair(kOneMap, poly({0.0, 0.5}), Sign::minus);
    const PsiSection psi = build_psi(curved, PlanarDomain::disk(0.0, 1.0, 41));
    const auto radii = log_radii(1e-2, 1e-4, 8);
    double worst = 0.0;
    for (int order = -3; order <= 3; ++order) {
        if (order == 0) continue;
        const CPolynomial zn = CPolynomial::monomial(std::abs(order));
        const RationalMap l = order > 0 ? RationalMap(zn) : RationalMap(CPolynomial::constant(1.0), zn);
        const FactoredMap f = build_superconformal(psi, l, RationalMap(), true);
        double slope;
        try {
            slope = vanish_order_fit(f.surface(), 0.0, radii).slope;
        } catch (const InconclusiveFit& e) {
            slope = e.slope;
        }
        worst = std::max(worst, std::abs(slope - order));
    }
    return {roundtrips == 100 && worst < 0.1,
            fmt("%d/100 divisors round-trip; psi z^n order fits within %.1e", roundtrips, worst)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    const std::filesystem::path configs = QUATCONF_CONFIG_DIR;
    const auto scratch = std::filesystem::temp_directory_path() / "quatconf_acceptance";
    std::filesystem::remove_all(scratch);
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(configs)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    int fixtures = 0, identical = 0;
    for (const auto& path : files) {
        cli::RunConfig config = cli::load_config(path);
        config.outputs = {{"csv", "field.csv", cli::json::object()}, {"obj", "mesh.obj", cli::json::object()}};
        std::string first[3];
        bool same = true;
        for (int run = 0; run < 2; ++run) {
            cli::Overrides o;
            o.out_dir = scratch / path.stem() / std::to_string(run);
            std::ostringstream report;
            cli::run_config(config, o, report);
            const std::string got[3] = {report.str(), slurp(o.out_dir / "field.csv"), slurp(o.out_dir / "mesh.obj")};
            for (int k = 0; k < 3; ++k) {
                if (run == 0) first[k] = got[k];
                else same = same && got[k] == first[k] && !got[k].empty();
            }
        }
        ++fixtures;
        identical += same;
    }
    std::filesystem::remove_all(scratch);
    return {fixtures > 0 && identical == fixtures,
            fmt("%d/%d configs give byte-identical report, CSV and OBJ across runs", identical, fixtures)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"algebraic identities", algebraic_identities},
        {"normals of holomorphic maps", holomorphic_normals},
        {"psi anchor value", psi_anchor},
        {"factorization soundness", factorization_soundness},
        {"Wintgen equality and control", wintgen},
        {"curvature calibration", curvature_calibration},
        {"minimal pipeline", minimal_pipeline},
        {"branch and zero correspondence", branch_zero},
        {"degree", degree},
        {"Schwarz and Schwarz-Pick", schwarz_pick},
        {"divisor machinery", divisor_machinery},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
