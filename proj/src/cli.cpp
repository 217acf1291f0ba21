#include "quatconf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "quatconf/parallel.hpp"
#include "quatconf/schwarz.hpp"
#include "quatconf/series.hpp"

namespace quatconf::cli {

namespace {

// ---------------------------------------------------------------------------
// JSON readers

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

Complex read_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    fail(where + ": expected a number or [re, im]");
}

Quaternion read_quaternion(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) fail(where + ": expected [w, x, y, z]");
    for (const auto& c : j) {
        if (!c.is_number()) fail(where + ": quaternion components must be numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

CPolynomial read_polynomial(const json& j, const std::string& where) {
    if (j.is_number()) return CPolynomial::constant(j.get<double>());
    if (!j.is_array()) fail(where + ": expected a coefficient list (ascending powers)");
    std::vector<Complex> c;
    for (std::size_t k = 0; k < j.size(); ++k) c.push_back(read_complex(j[k], where + "[" + std::to_string(k) + "]"));
    return CPolynomial(c);
}

RationalMap read_rational(const json& j, const std::string& where) {
    if (j.is_object()) {
        if (!j.contains("num")) fail(where + ": rational map needs \"num\"");
        const CPolynomial num = read_polynomial(j.at("num"), where + ".num");
        const CPolynomial den = j.contains("den") ? read_polynomial(j.at("den"), where + ".den") : CPolynomial{1.0};
        if (den.is_zero()) fail(where + ": zero denominator");
        return RationalMap(num, den);
    }
    return RationalMap(read_polynomial(j, where));
}

double read_number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(where + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

PlanarDomain read_domain(const json& j) {
    if (!j.is_object()) fail("domain: expected an object");
    const std::string type = j.value("type", "disk");
    const Complex center = j.contains("center") ? read_complex(j.at("center"), "domain.center") : Complex{};
    const double res = read_number(j, "resolution", 41, "domain");
    const double h = read_number(j, "h", 1e-3, "domain");
    if (res != std::floor(res)) fail("domain.resolution: expected an integer");
    try {
        if (type == "disk") {
            return PlanarDomain::disk(center, read_number(j, "radius", 1.0, "domain"), static_cast<int>(res), h);
        }
        if (type == "rectangle") {
            const double hw = read_number(j, "half_width", 1.0, "domain");
            return PlanarDomain::rectangle(center, hw, read_number(j, "half_height", hw, "domain"),
                                           static_cast<int>(res), h);
        }
    } catch (const std::invalid_argument& e) {
        fail(std::string("domain: ") + e.what());
    }
    fail("domain.type: expected \"disk\" or \"rectangle\"");
}

SphereMap read_sphere(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected an object");
    const std::string type = j.value("type", "lambda_pair");
    if (type == "constant") {
        const Quaternion v = j.contains("value") ? read_quaternion(j.at("value"), where + ".value") : Quaternion::i();
        try {
            return SphereMap::constant(v);
        } catch (const std::invalid_argument& e) {
            fail(where + ": " + e.what());
        }
    }
    if (type == "lambda_pair") {
        if (!j.contains("lambda0") || !j.contains("lambda1")) fail(where + ": lambda_pair needs lambda0 and lambda1");
        const std::string sign = j.value("sign", "-");
        if (sign != "+" && sign != "-") fail(where + ".sign: expected \"+\" or \"-\"");
        try {
            return SphereMap::from_lambda_pair(read_rational(j.at("lambda0"), where + ".lambda0"),
                                               read_rational(j.at("lambda1"), where + ".lambda1"),
                                               sign == "+" ? Sign::plus : Sign::minus);
        } catch (const std::invalid_argument& e) {
            fail(where + ": " + e.what());
        }
    }
    fail(where + ".type: expected \"constant\" or \"lambda_pair\"");
}

Divisor read_divisor(const json& j) {
    if (!j.is_array()) fail("divisor: expected a list of {\"point\": z, \"order\": n}");
    std::vector<DivisorEntry> entries;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string where = "divisor[" + std::to_string(k) + "]";
        const json& e = j[k];
        if (!e.is_object() || !e.contains("point") || !e.contains("order") || !e.at("order").is_number_integer()) {
            fail(where + ": expected {\"point\": z, \"order\": n}");
        }
        entries.push_back({read_complex(e.at("point"), where + ".point"), e.at("order").get<int>()});
    }
    try {
        return Divisor(entries);
    } catch (const std::invalid_argument& e) {
        fail(std::string("divisor: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Named fixtures

QJet<2> sphere_jet(Complex z) {
    const Jet2 x = Jet2::variable_x(z.real());
    const Jet2 y = Jet2::variable_y(z.imag());
    const Jet2 s = x * x + y * y;
    const Jet2 inv = reciprocal(s + Jet2(1.0));
    return {Jet2(0.0), 2.0 * x * inv, 2.0 * y * inv, (s - Jet2(1.0)) * inv};
}

// cos and sin of one coordinate as second-order jets.
std::pair<Jet2, Jet2> trig_jet(double t, bool along_x) {
    Jet2 c(std::cos(t)), s(std::sin(t));
    const int a = along_x ? 1 : 0, b = along_x ? 0 : 1;
    c(a, b) = -std::sin(t);
    s(a, b) = std::cos(t);
    c(2 * a, 2 * b) = -0.5 * std::cos(t);
    s(2 * a, 2 * b) = -0.5 * std::sin(t);
    return {c, s};
}

QJet<2> torus_jet(Complex z) {
    const double r = 1.0 / std::sqrt(2.0);
    const auto [cx, sx] = trig_jet(z.real(), true);
    const auto [cy, sy] = trig_jet(z.imag(), false);
    return {r * cx, r * sx, r * cy, r * sy};
}

QJet<2> zbar_graph_jet(Complex z) {
    const CTaylor<2> a = series_of<2>(CPolynomial{0.0, 1.0}, z);
    const CTaylor<2> b = conj_series(series_of<2>(CPolynomial{0.0, 0.0, 1.0}, z));
    return pair_series<2>(a, b);
}

QJet<2> plane_jet(Complex z) {
    const CTaylor<2> a = series_of<2>(CPolynomial{0.0, 1.0}, z);
    return pair_series<2>(a, CTaylor<2>{});
}

SurfaceMap fixture(const std::string& name) {
    using Jets = QJet<2> (*)(Complex);
    static const std::map<std::string, Jets> table = {
        {"sphere", sphere_jet}, {"clifford_torus", torus_jet}, {"zbar_graph", zbar_graph_jet}, {"plane", plane_jet}};
    const auto it = table.find(name);
    if (it == table.end()) fail("construction.name: unknown fixture \"" + name + "\"");
    const Jets jets = it->second;
    return SurfaceMap::analytic([jets](Complex z) { return value_of(jets(z)); }, jets, Provenance::custom, name);
}

// ---------------------------------------------------------------------------

RationalMap lambda_or_zero(const json& c, const char* key) {
    return c.contains(key) ? read_rational(c.at(key), std::string("construction.") + key) : RationalMap();
}

SurfaceMap finalize(const SurfaceMap& s, const Overrides& o) { return o.h ? s.as_finite_difference(*o.h) : s; }

}  // namespace

// ---------------------------------------------------------------------------

RunConfig parse_config(const json& j) {
    if (!j.is_object()) fail("config: expected a JSON object");
    RunConfig cfg;
    if (j.contains("domain")) cfg.domain = read_domain(j.at("domain"));
    if (!j.contains("construction") || !j.at("construction").is_object()) fail("config: missing construction block");
    cfg.construction = j.at("construction");
    if (!cfg.construction.contains("type") || !cfg.construction.at("type").is_string()) {
        fail("construction.type: expected a string");
    }
    if (j.contains("checks")) {
        const json& cs = j.at("checks");
        if (!cs.is_array()) fail("checks: expected a list");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            CheckSpec spec;
            const json& c = cs[k];
            if (c.is_string()) {
                spec.name = c.get<std::string>();
            } else if (c.is_object() && c.contains("name") && c.at("name").is_string()) {
                spec.name = c.at("name").get<std::string>();
                if (c.contains("tol")) {
                    if (!c.at("tol").is_number() || c.at("tol").get<double>() < 0.0) {
                        fail("checks[" + std::to_string(k) + "].tol: expected a nonnegative number");
                    }
                    spec.tol = c.at("tol").get<double>();
                }
                spec.params = c;
            } else {
                fail("checks[" + std::to_string(k) + "]: expected a name or {\"name\": ...}");
            }
            const auto& names = check_names();
            if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
                fail("checks[" + std::to_string(k) + "]: unknown check \"" + spec.name + "\"");
            }
            cfg.checks.push_back(spec);
        }
    }
    if (j.contains("outputs")) {
        const json& os = j.at("outputs");
        if (!os.is_array()) fail("outputs: expected a list");
        for (std::size_t k = 0; k < os.size(); ++k) {
            const json& o = os[k];
            if (!o.is_object() || !o.contains("format") || !o.contains("path")) {
                fail("outputs[" + std::to_string(k) + "]: expected {\"format\": ..., \"path\": ...}");
            }
            OutputSpec spec{o.at("format").get<std::string>(), o.at("path").get<std::string>(), o};
            if (spec.format != "csv" && spec.format != "obj") {
                fail("outputs[" + std::to_string(k) + "].format: expected \"csv\" or \"obj\"");
            }
            cfg.outputs.push_back(spec);
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {"conformality", "normals",      "curvature",
                                                   "wintgen",      "schwarz",      "pick",
                                                   "minimal-diagnostics", "divisor-roundtrip", "degree",
                                                   "polefit"};
    return names;
}

double default_tolerance(const std::string& check) {
    static const std::map<std::string, double> table = {
        {"conformality", 1e-6}, {"normals", 1e-4},  {"curvature", 1e-3}, {"wintgen", 1e-4},
        {"schwarz", 1e-9},      {"pick", 1e-9},     {"minimal-diagnostics", 1e-4},
        {"divisor-roundtrip", 0.0}, {"degree", 0.0}, {"polefit", 0.1}};
    const auto it = table.find(check);
    return it == table.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------

Model build_model(const RunConfig& config, const Overrides& overrides) {
    const json& c = config.construction;
    Model m;
    m.kind = c.at("type").get<std::string>();
    m.domain = overrides.h ? config.domain.with_step(*overrides.h) : config.domain;
    const PlanarDomain& domain = m.domain;
    try {
        if (m.kind == "superconformal") {
            if (!c.contains("N")) fail("construction: superconformal needs N");
            const SphereMap n = read_sphere(c.at("N"), "construction.N");
            const PsiSection psi = c.contains("a") ? build_psi(n, domain, read_quaternion(c.at("a"), "construction.a"))
                                                   : build_psi(n, domain);
            m.factored = build_superconformal(psi, lambda_or_zero(c, "lambda0"), lambda_or_zero(c, "lambda1"),
                                              c.value("allow_poles", false));
            m.normal = n;
            m.f = finalize(m.factored->surface(), overrides);
        } else if (m.kind == "wft") {
            if (!c.contains("N") || !c.contains("divisor")) fail("construction: wft needs N and divisor");
            const SphereMap n = read_sphere(c.at("N"), "construction.N");
            m.divisor = read_divisor(c.at("divisor"));
            m.factored = superconformal_from_divisor(*m.divisor, n, domain);
            m.normal = n;
            m.f = finalize(m.factored->surface(), overrides);
        } else if (m.kind == "twistor") {
            if (!c.contains("lambda") || !c.at("lambda").is_array() || c.at("lambda").size() != 4) {
                fail("construction: twistor needs \"lambda\": [l0, l1, l2, l3]");
            }
            const json& l = c.at("lambda");
            std::vector<RationalMap> r;
            for (int k = 0; k < 4; ++k) r.push_back(read_rational(l[k], "construction.lambda[" + std::to_string(k) + "]"));
            m.f = finalize(build_twistor(r[0], r[1], r[2], r[3], domain.h()), overrides);
            m.normal = twistor_left_normal(r[0], r[1]);
        } else if (m.kind == "minimal") {
            if (!c.contains("N")) fail("construction: minimal needs N");
            const SphereMap n = read_sphere(c.at("N"), "construction.N");
            const RationalMap l0 = lambda_or_zero(c, "lambda0"), l1 = lambda_or_zero(c, "lambda1");
            m.minimal = c.contains("a") ? build_minimal_pair(n, l0, l1, domain, read_quaternion(c.at("a"), "construction.a"))
                                        : build_minimal_pair(n, l0, l1, domain);
            m.normal = n;
            m.f = finalize(m.minimal->f_surface(), overrides);
            m.g = finalize(m.minimal->g_surface(), overrides);
        } else if (m.kind == "custom") {
            if (!c.contains("name") || !c.at("name").is_string()) fail("construction: custom needs a fixture name");
            m.f = finalize(fixture(c.at("name").get<std::string>()), overrides);
            if (c.contains("N")) m.normal = read_sphere(c.at("N"), "construction.N");
        } else {
            fail("construction.type: unknown type \"" + m.kind + "\"");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(std::string("construction: ") + e.what());
    }
    return m;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

struct Sup {
    double value = 0.0;
    Complex where{};
    void take(double v, Complex z) {
        if (v > value || !std::isfinite(v)) {
            value = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
            where = z;
        }
    }
};

// Per-point scalar, sup reduced in grid order.
Sup sweep_sup(std::span<const Complex> pts, const std::function<double(Complex)>& fn) {
    const auto v = parallel_map<double>(pts.size(), [&](std::size_t k) { return fn(pts[k]); });
    Sup s;
    for (std::size_t k = 0; k < pts.size(); ++k) s.take(v[k], pts[k]);
    return s;
}

// -Laplacian(log|f_x|)/|f_x|^2 by a five-point stencil of step d.
double gauss_oracle(const SurfaceMap& f, Complex z, double d) {
    auto lg = [&](Complex w) { return std::log(norm(value_of(dx_of(f.jet(w))))); };
    const double lap = (lg(z + d) + lg(z - d) + lg(z + Complex(0, d)) + lg(z - Complex(0, d)) - 4.0 * lg(z)) / (d * d);
    const double a = value_of(dx_of(f.jet(z))).norm2();
    return -lap / a;
}

const FactoredMap& need_factored(const Model& m, const std::string& check) {
    if (!m.factored) fail(check + ": needs a superconformal or wft construction");
    return *m.factored;
}

bool unit_disk(const PlanarDomain& d) {
    return d.kind() == PlanarDomain::Kind::disk && std::abs(d.center()) == 0.0 && d.radius() == 1.0;
}

}  // namespace

CheckResult run_check(const Model& m, const CheckSpec& spec, const Overrides& overrides) {
    CheckResult r;
    r.name = spec.name;
    r.tol = overrides.tol ? *overrides.tol : spec.tol ? *spec.tol : default_tolerance(spec.name);
    const json& p = spec.params;
    const std::vector<Complex> pts = sweep_points(m.f, m.domain);
    const std::string& name = spec.name;

    if (name == "conformality") {
        const Sup s = sweep_sup(pts, [&](Complex z) { return conformal_residual_at(m.f, z); });
        r.max_slack = s.value;
        r.details = {{"points", static_cast<double>(pts.size())}};
    } else if (name == "normals") {
        if (!m.normal) fail("normals: the construction has no reference left normal");
        const SphereMap& n = *m.normal;
        auto mismatch = [&](const SurfaceMap& s) {
            return sweep_sup(pts, [&](Complex z) {
                const SurfaceJet j = jet_at(s, z);
                return j.branch ? 0.0 : norm(j.N - n(z));
            });
        };
        const Sup sf = mismatch(m.f);
        r.max_slack = sf.value;
        r.details = {{"f", sf.value}};
        if (m.g) {
            const Sup sg = mismatch(*m.g);
            r.details.emplace_back("g", sg.value);
            r.max_slack = std::max(r.max_slack, sg.value);
        }
    } else if (name == "curvature") {
        const double d = p.value("oracle_step", 1e-2);
        const bool has_expect = p.contains("expect");
        const json e = has_expect ? p.at("expect") : json::object();
        struct Local {
            double gauss = 0, K = 0, Kperp = 0, H2 = 0;
            bool valid = false;
        };
        const auto locals = parallel_map<Local>(pts.size(), [&](std::size_t k) {
            Local l;
            try {
                const CurvatureSample s = curvature_at(m.f, pts[k]);
                l.valid = true;
                l.gauss = std::abs(s.K - gauss_oracle(m.f, pts[k], d)) / std::max(1.0, std::abs(s.K));
                if (e.contains("K")) l.K = std::abs(s.K - e.at("K").get<double>());
                if (e.contains("Kperp")) l.Kperp = std::abs(s.Kperp - e.at("Kperp").get<double>());
                if (e.contains("H_normsq")) l.H2 = std::abs(s.H.norm2() - e.at("H_normsq").get<double>());
            } catch (const std::domain_error&) {
            }
            return l;
        });
        double g = 0, K = 0, Kp = 0, H2 = 0;
        std::size_t valid = 0;
        for (const auto& l : locals) {
            if (!l.valid) continue;
            ++valid;
            g = std::max(g, l.gauss);
            K = std::max(K, l.K);
            Kp = std::max(Kp, l.Kperp);
            H2 = std::max(H2, l.H2);
        }
        r.details = {{"gauss_oracle", g}, {"valid_points", static_cast<double>(valid)}};
        r.max_slack = g;
        if (has_expect) {
            r.details.insert(r.details.end(), {{"K", K}, {"Kperp", Kp}, {"H_normsq", H2}});
            r.max_slack = std::max({g, K, Kp, H2});
        }
        if (valid == 0) {
            r.max_slack = std::numeric_limits<double>::infinity();
            r.note = "no point with defined curvature";
        }
    } else if (name == "wintgen") {
        const std::string mode = p.value("mode", "equality");
        if (mode != "equality" && mode != "inequality") fail("wintgen.mode: expected equality or inequality");
        const auto slack = parallel_map<double>(pts.size(), [&](std::size_t k) {
            try {
                return wintgen_slack_at(m.f, pts[k]);
            } catch (const std::domain_error&) {
                return 0.0;
            }
        });
        double lo = 0.0, hi = 0.0;
        for (double s : slack) {
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        r.details = {{"min_slack", lo}, {"max_slack", hi}};
        r.max_slack = mode == "equality" ? std::max(hi, -lo) : -lo;
        r.note = mode == "equality" ? "super-conformal: |H|^2 - K - |Kperp| = 0" : "|H|^2 - K - |Kperp| >= 0";
    } else if (name == "schwarz") {
        const FactoredMap& f = need_factored(m, name);
        if (!unit_disk(m.domain)) fail("schwarz: the domain must be the unit disk");
        const SchwarzReport s = bound_constants(f, m.domain.samples());
        r.max_slack = std::max(s.max_violation, s.derivative_slack);
        r.details = {{"c", s.c},
                     {"c_tilde", s.c_tilde},
                     {"C0", s.C0},
                     {"C1", s.C1},
                     {"bound_violation", s.max_violation},
                     {"derivative_slack", s.derivative_slack},
                     {"derivative_slack_literal", s.derivative_slack_literal},
                     {"equality_points", static_cast<double>(s.equality_points)}};
    } else if (name == "pick") {
        const FactoredMap& f = need_factored(m, name);
        if (!unit_disk(m.domain)) fail("pick: the domain must be the unit disk");
        const Complex z1 = p.contains("z1") ? read_complex(p.at("z1"), "pick.z1") : Complex(0.3, 0.0);
        const PickReport s = pick_check(f, z1, m.domain.samples());
        const double ratio = poincare_ratio(m.f, z1) - s.C_tilde * s.C_tilde;
        r.max_slack = std::max({s.max_violation, s.derivative_slack, ratio});
        r.details = {{"C_tilde", s.C_tilde},          {"C", s.C},
                     {"gap", s.gap},                  {"quotient_violation", s.max_violation},
                     {"derivative_slack", s.derivative_slack}, {"poincare_slack", ratio}};
    } else if (name == "minimal-diagnostics") {
        if (!m.minimal) fail("minimal-diagnostics: needs a minimal construction");
        const MinimalDiagnostics d = minimal_diagnostics(*m.minimal);
        const BranchZeroReport b = branch_zero_report(*m.minimal);
        r.details = {{"conjugate", d.conjugate_residual},
                     {"null", d.null_residual},
                     {"null_conformal_gap", d.null_conformal_gap},
                     {"H_f", d.mean_curvature_f},
                     {"H_g", d.mean_curvature_g},
                     {"normal_mismatch", d.normal_mismatch},
                     {"mu_cross", d.mu_cross_residual},
                     {"identity", b.identity_residual},
                     {"branch_sets_agree", b.sets_agree ? 1.0 : 0.0},
                     {"singular_points", static_cast<double>(m.minimal->singular_set().size())}};
        r.max_slack = std::max({d.conjugate_residual, d.null_residual, d.mean_curvature_f, d.mean_curvature_g,
                                d.normal_mismatch, d.mu_cross_residual, b.identity_residual});
        if (!b.sets_agree) r.max_slack = std::numeric_limits<double>::infinity();
        if (d.degenerate) r.note = "degenerate pair: f is constant, residuals vacuous";
    } else if (name == "divisor-roundtrip") {
        const FactoredMap& f = need_factored(m, name);
        const Divisor got = divisor_of_factored(f);
        bool same = false;
        if (m.divisor) {
            same = same_divisor(got, *m.divisor);
        } else {
            const FactoredMap back = superconformal_from_divisor(got, f.psi().normal(), m.domain);
            same = same_divisor(divisor_of_factored(back), got);
        }
        r.max_slack = same ? 0.0 : 1.0;
        r.details = {{"support", static_cast<double>(got.size())}, {"degree", static_cast<double>(got.degree())}};
    } else if (name == "degree") {
        if (!m.normal) fail("degree: the construction has no left normal");
        const DegreeCount c = sphere_degree_counts(*m.normal);
        r.max_slack = std::abs(c.preimages_of_i - c.preimages_of_minus_i);
        r.details = {{"preimages_of_i", static_cast<double>(c.preimages_of_i)},
                     {"preimages_of_minus_i", static_cast<double>(c.preimages_of_minus_i)}};
    } else if (name == "polefit") {
        const FactoredMap& f = need_factored(m, name);
        const Divisor d = m.divisor ? *m.divisor : divisor_of_factored(f);
        const SurfaceMap s = f.surface();
        double worst = 0.0;
        int fitted = 0;
        for (const auto& e : d.entries()) {
            if (e.point.infinite || !m.domain.encloses(e.point.value)) continue;
            double sep = 0.5;
            for (const auto& o : d.entries()) {
                if (&o != &e && !o.point.infinite) sep = std::min(sep, std::abs(o.point.value - e.point.value));
            }
            const auto radii = log_radii(0.2 * sep, 2e-4 * sep, 12);
            double slope = 0.0;
            try {
                slope = vanish_order_fit(s, e.point.value, radii).slope;
            } catch (const InconclusiveFit& x) {
                slope = x.slope;
            }
            worst = std::max(worst, std::abs(slope - e.order));
            ++fitted;
        }
        r.max_slack = worst;
        r.details = {{"fitted_points", static_cast<double>(fitted)}};
    } else {
        fail("unknown check " + name);
    }
    r.pass = r.max_slack <= r.tol;
    return r;
}

// ---------------------------------------------------------------------------
// Outputs

namespace {

bool vertex_of(const SurfaceMap& f, const PlanarDomain& domain, Complex z, MeshProjection pr, double out[3]) {
    if (!domain.contains(z) && domain.kind() == PlanarDomain::Kind::disk) return false;
    if (f.excluded(z)) return false;
    Quaternion q;
    try {
        q = f(z);
    } catch (const std::domain_error&) {
        return false;
    }
    const double c[4] = {q.w, q.x, q.y, q.z};
    if (pr.kind == Projection::drop) {
        for (int k = 0, m = 0; k < 4; ++k) {
            if (k != pr.index) out[m++] = c[k];
        }
    } else {
        const double den = 1.0 - q.w;
        if (den == 0.0) return false;
        for (int k = 0; k < 3; ++k) out[k] = c[k + 1] / den;
    }
    return std::isfinite(out[0]) && std::isfinite(out[1]) && std::isfinite(out[2]);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

MeshProjection read_projection(const json& p) {
    MeshProjection pr;
    const std::string kind = p.value("projection", "drop");
    if (kind == "drop") {
        pr.index = p.value("index", 0);
        if (pr.index < 0 || pr.index > 3) fail("obj.index: expected 0..3");
    } else if (kind == "stereographic") {
        pr.kind = Projection::stereographic;
    } else {
        fail("obj.projection: expected \"drop\" or \"stereographic\"");
    }
    return pr;
}

std::string field_csv(const Model& m, const SurfaceMap& s) {
    const std::vector<Complex> pts = sweep_points(s, m.domain);
    const auto rows = sample_field(s, pts);
    std::ostringstream os;
    write_field_csv(os, rows);
    if (!m.minimal) return os.str();
    // Minimal pairs carry mu as four extra columns.
    std::istringstream in(os.str());
    std::ostringstream out;
    std::string line;
    std::getline(in, line);
    out << line << ",mu_w,mu_x,mu_y,mu_z\n";
    char buf[128];
    for (const Complex z : pts) {
        std::getline(in, line);
        Quaternion mu(std::nan(""), std::nan(""), std::nan(""), std::nan(""));
        try {
            mu = m.minimal->mu(z).mu;
        } catch (const SingularPointError&) {
        }
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g", mu.w, mu.x, mu.y, mu.z);
        out << line << buf << "\n";
    }
    return out.str();
}

const SurfaceMap& output_surface(const Model& m, const json& p) {
    const std::string which = p.value("surface", "f");
    if (which == "f") return m.f;
    if (which == "g" && m.g) return *m.g;
    fail("outputs.surface: \"" + which + "\" is not available for this construction");
}

}  // namespace

void write_obj(std::ostream& os, const SurfaceMap& f, const PlanarDomain& domain, MeshProjection projection) {
    const auto lattice = domain.lattice();
    const int n = domain.resolution();
    std::vector<long> index(lattice.size(), 0);
    std::vector<std::array<double, 3>> verts(lattice.size());
    const auto ok = parallel_map<char>(lattice.size(), [&](std::size_t k) {
        return static_cast<char>(vertex_of(f, domain, lattice[k], projection, verts[k].data()));
    });
    char buf[160];
    long next = 0;
    for (std::size_t k = 0; k < lattice.size(); ++k) {
        if (!ok[k]) continue;
        index[k] = ++next;
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", verts[k][0], verts[k][1], verts[k][2]);
        os << buf;
    }
    for (int r = 0; r + 1 < n; ++r) {
        for (int c = 0; c + 1 < n; ++c) {
            const std::size_t a = static_cast<std::size_t>(r * n + c), b = a + 1;
            const std::size_t d = a + static_cast<std::size_t>(n), e = d + 1;
            if (!ok[a] || !ok[b] || !ok[d] || !ok[e]) continue;
            os << "f " << index[a] << ' ' << index[b] << ' ' << index[e] << '\n';
            os << "f " << index[a] << ' ' << index[e] << ' ' << index[d] << '\n';
        }
    }
}

void export_mesh(const SurfaceMap& f, const PlanarDomain& domain, MeshProjection projection,
                 const std::filesystem::path& path) {
    std::ostringstream os;
    write_obj(os, f, domain, projection);
    write_text(path, os.str());
}

void write_outputs(const Model& m, const std::vector<OutputSpec>& outputs, const Overrides& o) {
    for (const auto& spec : outputs) {
        const std::filesystem::path path = o.out_dir / spec.path;
        const SurfaceMap& s = output_surface(m, spec.params);
        if (spec.format == "csv") {
            write_text(path, field_csv(m, s));
        } else {
            export_mesh(s, m.domain, read_projection(spec.params), path);
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

void print_result(std::ostream& out, const CheckResult& r) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ": max slack " << fmt(r.max_slack) << " (tol " << fmt(r.tol)
        << ")";
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << "\n";
    for (const auto& [k, v] : r.details) out << "    " << k << " = " << fmt(v) << "\n";
}

std::string describe(Complex z) {
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    return fmt(z.real() == 0.0 ? 0.0 : z.real()) + (std::signbit(im) ? "" : "+") + fmt(im) + "i";
}

std::string describe(const RationalMap& r) {
    std::ostringstream os;
    auto poly = [&](const CPolynomial& p) {
        os << "[";
        for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
            if (k) os << ", ";
            os << describe(p.coefficients()[k]);
        }
        os << "]";
    };
    poly(r.numerator());
    if (r.denominator().degree() > 0) {
        os << " / ";
        poly(r.denominator());
    }
    return os.str();
}

std::string describe(const Quaternion& q) {
    return "(" + fmt(q.w) + ", " + fmt(q.x) + ", " + fmt(q.y) + ", " + fmt(q.z) + ")";
}

std::string describe(const Divisor& d) {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < d.entries().size(); ++k) {
        const auto& e = d.entries()[k];
        if (k) os << ", ";
        os << "(" << describe(e.point.value) << ": " << e.order << ")";
    }
    os << "}";
    return os.str();
}

}  // namespace

int run_config(const RunConfig& config, const Overrides& overrides, std::ostream& report) {
    const Model m = build_model(config, overrides);
    report << "construction " << m.kind << " (" << to_string(m.f.mode()) << " derivatives, h = " << fmt(m.domain.h())
           << ", " << sweep_points(m.f, m.domain).size() << " points)\n";
    std::vector<CheckSpec> checks = config.checks;
    if (checks.empty()) checks.push_back({"conformality", std::nullopt, json::object()});
    bool all = true;
    for (const auto& spec : checks) {
        CheckResult r;
        try {
            r = run_check(m, spec, overrides);
        } catch (const HypothesisError& e) {
            r.name = spec.name;
            r.max_slack = std::numeric_limits<double>::infinity();
            r.tol = overrides.tol ? *overrides.tol : spec.tol ? *spec.tol : default_tolerance(spec.name);
            r.note = std::string("hypothesis violated: ") + e.what();
        }
        print_result(report, r);
        all = all && r.pass;
    }
    write_outputs(m, config.outputs, overrides);
    report << (all ? "all checks passed\n" : "some checks failed\n");
    return all ? 0 : 1;
}

int command_check(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    return run_config(config, overrides, out);
}

int command_curvature(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    const Model m = build_model(config, overrides);
    std::vector<OutputSpec> outputs;
    for (const auto& o : config.outputs) {
        if (o.format == "csv") outputs.push_back(o);
    }
    if (outputs.empty()) outputs.push_back({"csv", "field.csv", json::object()});
    write_outputs(m, outputs, overrides);
    const auto pts = sweep_points(m.f, m.domain);
    const auto rows = sample_field(m.f, pts);
    double kmin = INFINITY, kmax = -INFINITY, hmax = 0.0, wmin = INFINITY, wmax = -INFINITY;
    std::size_t valid = 0;
    for (const auto& r : rows) {
        if (!r.curvature_valid) continue;
        ++valid;
        kmin = std::min(kmin, r.K);
        kmax = std::max(kmax, r.K);
        hmax = std::max(hmax, r.H_normsq);
        wmin = std::min(wmin, r.wintgen_slack);
        wmax = std::max(wmax, r.wintgen_slack);
    }
    for (const auto& o : outputs) out << "wrote " << (overrides.out_dir / o.path).string() << "\n";
    out << "points " << rows.size() << ", curvature defined at " << valid << "\n";
    if (valid > 0) {
        out << "K in [" << fmt(kmin) << ", " << fmt(kmax) << "], max |H|^2 " << fmt(hmax) << ", wintgen slack in ["
            << fmt(wmin) << ", " << fmt(wmax) << "]\n";
    }
    return 0;
}

int command_mesh(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    const Model m = build_model(config, overrides);
    std::vector<OutputSpec> outputs;
    for (const auto& o : config.outputs) {
        if (o.format == "obj") outputs.push_back(o);
    }
    if (outputs.empty()) outputs.push_back({"obj", "mesh.obj", json::object()});
    write_outputs(m, outputs, overrides);
    for (const auto& o : outputs) out << "wrote " << (overrides.out_dir / o.path).string() << "\n";
    return 0;
}

int command_factor(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    const Model m = build_model(config, overrides);
    out << "construction " << m.kind << "\n";
    if (m.factored) {
        const PsiSection& psi = m.factored->psi();
        out << "psi = N a + a i with a = " << describe(psi.a()) << "\n";
        out << "avoided point -a i a^-1 = " << describe(psi.avoided()) << "\n";
        out << "cap radius " << fmt(psi.gap) << ", min |psi| " << fmt(psi.min_modulus) << ", max |N psi - psi i| "
            << fmt(psi.eigen_residual) << "\n";
        out << "lambda0 = " << describe(m.factored->lambda0()) << "\n";
        out << "lambda1 = " << describe(m.factored->lambda1()) << "\n";
        out << "divisor " << describe(divisor_of_factored(*m.factored)) << "\n";
    } else if (m.minimal) {
        const MinimalPair& p = *m.minimal;
        out << "psi = -N a + a i with a = " << describe(p.a()) << "\n";
        out << "lambda0 = " << describe(p.lambda0()) << "\n";
        out << "lambda1 = " << describe(p.lambda1()) << "\n";
        out << "singular set Q:";
        for (Complex q : p.singular_set()) out << " " << describe(q);
        out << "\n";
    } else {
        out << "no factorization for this construction\n";
        return 1;
    }
    return 0;
}

int command_degree(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    const Model m = build_model(config, overrides);
    if (!m.normal) fail("degree: the construction has no left normal");
    try {
        out << sphere_degree(*m.normal) << "\n";
    } catch (const DegreeMismatch& e) {
        out << "unbalanced: " << e.count_i << " preimages of i, " << e.count_minus_i << " of -i\n";
        return 1;
    }
    return 0;
}

int command_polefit(const RunConfig& config, const Overrides& overrides, std::ostream& out) {
    const Model m = build_model(config, overrides);
    CheckSpec spec{"polefit", std::nullopt, json::object()};
    for (const auto& c : config.checks) {
        if (c.name == "polefit") spec = c;
    }
    const FactoredMap& f = need_factored(m, "polefit");
    const Divisor d = m.divisor ? *m.divisor : divisor_of_factored(f);
    const SurfaceMap s = f.surface();
    for (const auto& e : d.entries()) {
        if (e.point.infinite || !m.domain.encloses(e.point.value)) continue;
        double sep = 0.5;
        for (const auto& o : d.entries()) {
            if (&o != &e && !o.point.infinite) sep = std::min(sep, std::abs(o.point.value - e.point.value));
        }
        const auto radii = log_radii(0.2 * sep, 2e-4 * sep, 12);
        out << "point " << describe(e.point.value) << " order " << e.order << ": ";
        try {
            const OrderFit fit = vanish_order_fit(s, e.point.value, radii);
            out << "slope " << fmt(fit.slope) << ", fitted order " << fit.order << "\n";
        } catch (const InconclusiveFit& x) {
            out << "slope " << fmt(x.slope) << ", inconclusive\n";
        }
    }
    const CheckResult r = run_check(m, spec, overrides);
    print_result(out, r);
    return r.pass ? 0 : 1;
}

}  // namespace quatconf::cli
