#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quatconf/minimal.hpp"
#include "quatconf/superconf.hpp"
#include "quatconf/surface.hpp"

namespace quatconf::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CheckSpec {
    std::string name;
    std::optional<double> tol;
    json params = json::object();
};

struct OutputSpec {
    std::string format;  // "csv" or "obj"
    std::string path;
    json params = json::object();
};

struct RunConfig {
    PlanarDomain domain = PlanarDomain::disk(0.0, 1.0, 41);
    json construction;
    std::vector<CheckSpec> checks;
    std::vector<OutputSpec> outputs;
};

// Command-line overrides.
struct Overrides {
    std::optional<double> h;    // difference step; forces difference derivatives
    std::optional<double> tol;  // replaces every check tolerance
    std::filesystem::path out_dir = ".";
};

// Throws ConfigError on schema violations.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& check_names();
double default_tolerance(const std::string& check);

// Everything a construction block produces.
struct Model {
    std::string kind;
    PlanarDomain domain = PlanarDomain::disk(0.0, 1.0, 41);
    SurfaceMap f;
    std::optional<SurfaceMap> g;
    std::optional<SphereMap> normal;  // expected left normal of f
    std::optional<FactoredMap> factored;
    std::optional<MinimalPair> minimal;
    std::optional<Divisor> divisor;   // requested divisor (wft)
};

Model build_model(const RunConfig& config, const Overrides& overrides = {});

struct CheckResult {
    std::string name;
    double max_slack = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::vector<std::pair<std::string, double>> details;
    std::string note;
};

CheckResult run_check(const Model& model, const CheckSpec& spec, const Overrides& overrides = {});

// Builds the model, runs every check, writes the outputs, and prints the
// report. Returns 0 iff all checks pass.
int run_config(const RunConfig& config, const Overrides& overrides, std::ostream& report);

enum class Projection { drop, stereographic };
struct MeshProjection {
    Projection kind = Projection::drop;
    int index = 0;  // dropped coordinate for Projection::drop
};

// Lattice points of the domain (row-major) become vertices; each lattice
// square whose four corners are valid becomes two triangles.
void write_obj(std::ostream& os, const SurfaceMap& f, const PlanarDomain& domain, MeshProjection projection);
// Throws std::runtime_error when the file cannot be written.
void export_mesh(const SurfaceMap& f, const PlanarDomain& domain, MeshProjection projection,
                 const std::filesystem::path& path);

void write_outputs(const Model& model, const std::vector<OutputSpec>& outputs, const Overrides& overrides);

// Subcommand bodies; each returns the process exit status.
int command_check(const RunConfig& config, const Overrides& overrides, std::ostream& out);
int command_curvature(const RunConfig& config, const Overrides& overrides, std::ostream& out);
int command_mesh(const RunConfig& config, const Overrides& overrides, std::ostream& out);
int command_factor(const RunConfig& config, const Overrides& overrides, std::ostream& out);
int command_degree(const RunConfig& config, const Overrides& overrides, std::ostream& out);
int command_polefit(const RunConfig& config, const Overrides& overrides, std::ostream& out);

}  // namespace quatconf::cli
