#include "quatconf/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quatconf;
using namespace quatconf::cli;

namespace {

struct ObjCounts {
    std::vector<std::array<double, 3>> vertices;
    int faces = 0;
};

ObjCounts parse_obj(const std::string& text) {
    ObjCounts c;
    std::istringstream in(text);
    std::string tag;
    while (in >> tag) {
        if (tag == "v") {
            std::array<double, 3> v{};
            in >> v[0] >> v[1] >> v[2];
            c.vertices.push_back(v);
        } else if (tag == "f") {
            long a, b, d;
            in >> a >> b >> d;
            ++c.faces;
        }
    }
    return c;
}

RunConfig config_of(const char* text) { return parse_config(json::parse(text)); }

const char* kPlane = R"({"domain": {"type": "rectangle", "half_width": 1, "resolution": 2},
                         "construction": {"type": "custom", "name": "plane"}})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST(CliConfig, Defaults) {
    const RunConfig c = config_of(R"({"construction": {"type": "custom", "name": "plane"}})");
    EXPECT_EQ(c.domain.kind(), PlanarDomain::Kind::disk);
    EXPECT_EQ(c.domain.resolution(), 41);
    EXPECT_DOUBLE_EQ(c.domain.radius(), 1.0);
    EXPECT_TRUE(c.checks.empty());
}

TEST(CliConfig, RejectsMalformedInput) {
    EXPECT_THROW(config_of(R"({"domain": {"type": "disk"}})"), ConfigError);
    EXPECT_THROW(config_of(R"({"construction": {"type": "custom"}, "checks": ["nope"]})"), ConfigError);
    EXPECT_THROW(config_of(R"({"construction": {"type": "custom"}, "domain": {"type": "hexagon"}})"), ConfigError);
    EXPECT_THROW(config_of(R"({"construction": {"type": "custom"}, "domain": {"radius": -1}})"), ConfigError);
    EXPECT_THROW(config_of(R"({"construction": {"type": "custom"}, "outputs": [{"format": "png", "path": "x"}]})"),
                 ConfigError);
    EXPECT_THROW(build_model(config_of(R"({"construction": {"type": "custom", "name": "klein"}})")), ConfigError);
    EXPECT_THROW(build_model(config_of(R"({"construction": {"type": "superconformal",
        "N": {"type": "lambda_pair", "lambda0": [0, 1], "lambda1": [0, 2]}}})")),
                 ConfigError);
}

TEST(CliMesh, TwoByTwoGridIsTwoTriangles) {
    const Model m = build_model(config_of(kPlane));
    std::ostringstream os;
    write_obj(os, m.f, m.domain, {});
    const ObjCounts c = parse_obj(os.str());
    EXPECT_EQ(c.vertices.size(), 4u);
    EXPECT_EQ(c.faces, 2);
    for (const auto& v : c.vertices) EXPECT_EQ(v[2], 0.0);
}

TEST(CliMesh, PlaneLiesInCoordinatePlane) {
    const Model m = build_model(config_of(R"({"domain": {"resolution": 21},
                                              "construction": {"type": "custom", "name": "plane"}})"));
    std::ostringstream os;
    write_obj(os, m.f, m.domain, {});
    const ObjCounts c = parse_obj(os.str());
    ASSERT_GT(c.vertices.size(), 200u);
    for (const auto& v : c.vertices) ASSERT_EQ(v[2], 0.0);
}

TEST(CliMesh, SphereVerticesOnUnitSphere) {
    const Model m = build_model(config_of(R"({"domain": {"radius": 2, "resolution": 31},
                                              "construction": {"type": "custom", "name": "sphere"}})"));
    std::ostringstream os;
    write_obj(os, m.f, m.domain, {});
    const ObjCounts c = parse_obj(os.str());
    ASSERT_GT(c.vertices.size(), 500u);
    ASSERT_GT(c.faces, 1000);
    for (const auto& v : c.vertices) ASSERT_NEAR(std::hypot(v[0], v[1], v[2]), 1.0, 1e-12);
}

TEST(CliMesh, StereographicProjection) {
    // Unit imaginary points have zero real part, so the projection keeps them.
    const Model m = build_model(config_of(R"({"domain": {"resolution": 5},
                                              "construction": {"type": "custom", "name": "sphere"}})"));
    std::ostringstream a, b;
    write_obj(a, m.f, m.domain, {});
    write_obj(b, m.f, m.domain, {Projection::stereographic, 0});
    EXPECT_EQ(a.str(), b.str());
}

TEST(CliChecks, SmokeConfigPasses) {
    const RunConfig c = config_of(R"({"construction": {"type": "superconformal",
        "N": {"type": "constant", "value": [0, 1, 0, 0]}, "lambda0": [0, 1]},
        "checks": ["conformality", "normals", "curvature", "wintgen"]})");
    std::ostringstream report;
    EXPECT_EQ(run_config(c, {}, report), 0) << report.str();
}

TEST(CliChecks, TorusFailsEqualityAndPassesInequality) {
    const Model m = build_model(config_of(R"({"domain": {"type": "rectangle", "resolution": 11},
                                              "construction": {"type": "custom", "name": "clifford_torus"}})"));
    json eq = {{"name", "wintgen"}, {"mode", "equality"}};
    json ineq = {{"name", "wintgen"}, {"mode", "inequality"}};
    const CheckResult r1 = run_check(m, {"wintgen", std::nullopt, eq});
    const CheckResult r2 = run_check(m, {"wintgen", std::nullopt, ineq});
    EXPECT_FALSE(r1.pass);
    EXPECT_NEAR(r1.max_slack, 1.0, 1e-9);
    EXPECT_TRUE(r2.pass);
}

TEST(CliChecks, ToleranceOverride) {
    const Model m = build_model(config_of(R"({"domain": {"type": "rectangle", "resolution": 11},
                                              "construction": {"type": "custom", "name": "clifford_torus"}})"));
    Overrides o;
    o.tol = 2.0;
    EXPECT_TRUE(run_check(m, {"wintgen", std::nullopt, json::object()}, o).pass);
}

TEST(CliChecks, DifferenceStepOverride) {
    Overrides o;
    o.h = 1e-4;
    const Model m = build_model(config_of(R"({"construction": {"type": "custom", "name": "sphere"}})"), o);
    EXPECT_EQ(m.f.mode(), DerivativeMode::finite_difference);
    EXPECT_DOUBLE_EQ(m.domain.h(), 1e-4);
    EXPECT_TRUE(run_check(m, {"conformality", std::nullopt, json::object()}).pass);
}

TEST(CliChecks, DegreeOfLinearPair) {
    const RunConfig c = config_of(R"({"construction": {"type": "superconformal",
        "N": {"type": "lambda_pair", "lambda0": [0, 1], "lambda1": [-1, 1]}, "lambda0": [1]}})");
    std::ostringstream out;
    EXPECT_EQ(command_degree(c, {}, out), 0);
    EXPECT_EQ(out.str(), "1\n");
}

TEST(CliOutputs, ByteIdenticalAcrossRuns) {
    const auto dir = std::filesystem::temp_directory_path() / "quatconf_cli_test";
    std::filesystem::remove_all(dir);
    const RunConfig c = config_of(R"({"construction": {"type": "minimal",
        "N": {"type": "lambda_pair", "lambda0": [1], "lambda1": [0, 1], "sign": "+"}, "lambda0": [1, 1]},
        "domain": {"radius": 0.8, "resolution": 21},
        "outputs": [{"format": "csv", "path": "a/field.csv"}, {"format": "obj", "path": "a/mesh.obj"}]})");
    std::string first[2];
    for (int run = 0; run < 2; ++run) {
        Overrides o;
        o.out_dir = dir / std::to_string(run);
        write_outputs(build_model(c, o), c.outputs, o);
        const std::string csv = slurp(o.out_dir / "a/field.csv");
        const std::string obj = slurp(o.out_dir / "a/mesh.obj");
        ASSERT_FALSE(csv.empty());
        ASSERT_FALSE(obj.empty());
        if (run == 0) {
            first[0] = csv;
            first[1] = obj;
            EXPECT_NE(csv.find("mu_w"), std::string::npos);
        } else {
            EXPECT_EQ(csv, first[0]);
            EXPECT_EQ(obj, first[1]);
        }
    }
    std::filesystem::remove_all(dir);
}

TEST(CliOutputs, UnwritablePathThrows) {
    const Model m = build_model(config_of(kPlane));
    EXPECT_THROW(export_mesh(m.f, m.domain, {}, "/proc/quatconf/mesh.obj"), std::exception);
}
