#pragma once

#include "fstar/blockprod.hpp"
#include "fstar/cones.hpp"
#include "fstar/convex.hpp"
#include "fstar/domain.hpp"
#include "fstar/gridfn.hpp"
#include "fstar/interpolate.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fstar {

using json = nlohmann::json;

// Config errors carry a JSON-pointer path to the offending field.
struct ConfigError : std::runtime_error {
    std::string pointer;
    ConfigError(std::string ptr, const std::string &what)
        : std::runtime_error(ptr + ": " + what), pointer(std::move(ptr)) {}
};

// External wire formats.
json to_json(const DirichletSet &F);
DirichletSet dirichlet_from_json(const json &j, const std::string &ptr = "/F");

json to_json(const BlockSym &A);
BlockSym blocksym_from_json(const json &j, const std::string &ptr = "/block");

json to_json(const Domain &d);
Domain domain_from_json(const json &j, const std::string &ptr = "/domain");

json to_json(const ConvexBody &b);
ConvexBody body_from_json(const json &j, const std::string &ptr);

Axis axis_from_json(const json &j, const std::string &ptr);
std::vector<Axis> axes_from_json(const json &j, const std::string &ptr);

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
};

struct RunResult {
    std::string scenario_id;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;
    std::vector<std::pair<std::string, double>> timings_ms;

    bool all_pass() const;
    json summary(bool with_timings) const;
};

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::string format = "csv"; // csv | json
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    bool with_timings = false;
    Exec policy = default_exec();
};

// Subcommand runners; each throws ConfigError on schema violations and
// reports numeric failures through CheckResult entries.
RunResult run_check_product(const json &cfg, const RunOptions &opts);
RunResult run_prekopa(const json &cfg, const RunOptions &opts);
RunResult run_bm(const json &cfg, const RunOptions &opts);
RunResult run_min_principle(const json &cfg, const RunOptions &opts);
RunResult run_interp(const json &cfg, const RunOptions &opts);
RunResult run_supconv(const json &cfg, const RunOptions &opts);
RunResult run_example8(const json &cfg, const RunOptions &opts);
RunResult run_props(const json &cfg, const RunOptions &opts);

RunResult run_subcommand(const std::string &name, const json &cfg, const RunOptions &opts);

// Deterministic table writers (17 significant digits, "inf" literals).
std::filesystem::path emit_table(const GridFn &g, const std::filesystem::path &path, const std::string &format);
std::filesystem::path emit_bodies(const std::vector<ConvexBody> &bodies, const std::vector<std::vector<double>> &points,
                                  const std::filesystem::path &path, const std::string &format);

// Builtin scenario data: seeded product-subharmonic quadratics on R^2 x R.
struct QuadraticSuiteEntry {
    SymMat hessian;        // 3x3, fiber block normalized to 1
    double schur_margin;   // smallest eigenvalue of the Schur complement
};
std::vector<QuadraticSuiteEntry> quadratic_suite(int count, std::uint64_t seed, double min_margin = 0.05);

GridFn quadratic_gridfn(const SymMat &hessian, const std::vector<Axis> &x_axes, const Axis &y_axis);

} // namespace fstar
