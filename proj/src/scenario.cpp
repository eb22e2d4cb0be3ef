#include "fstar/scenario.hpp"

#include "fstar/harmonic.hpp"
#include "fstar/prekopa.hpp"
#include "fstar/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

namespace fstar {

namespace {

const json &require(const json &j, const std::string &key, const std::string &ptr) {
    if (!j.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(ptr + "/" + key, "missing required field");
    return *it;
}

double get_num(const json &j, const std::string &key, const std::string &ptr) {
    const json &v = require(j, key, ptr);
    if (!v.is_number()) throw ConfigError(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

double get_num_or(const json &j, const std::string &key, double dflt) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    return j.at(key).get<double>();
}

int get_int(const json &j, const std::string &key, const std::string &ptr) {
    const json &v = require(j, key, ptr);
    if (!v.is_number_integer()) throw ConfigError(ptr + "/" + key, "expected an integer");
    return v.get<int>();
}

int get_int_or(const json &j, const std::string &key, int dflt) {
    if (!j.is_object() || !j.contains(key)) return dflt;
    return j.at(key).get<int>();
}

std::string get_str(const json &j, const std::string &key, const std::string &ptr) {
    const json &v = require(j, key, ptr);
    if (!v.is_string()) throw ConfigError(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::uint64_t scenario_seed(const json &cfg, const RunOptions &opts) {
    if (opts.has_seed_override) return opts.seed_override;
    if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
    return 20240901u;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};

} // namespace

bool RunResult::all_pass() const {
    for (const CheckResult &c : checks)
        if (!c.pass) return false;
    return true;
}

json RunResult::summary(bool with_timings) const {
    json out;
    out["scenario"] = scenario_id;
    out["checks"] = json::array();
    for (const CheckResult &c : checks)
        out["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
    out["artifacts"] = artifacts;
    if (with_timings) {
        json t = json::object();
        for (const auto &[name, ms] : timings_ms) t[name] = ms;
        out["timings"] = t;
    }
    return out;
}

json to_json(const DirichletSet &F) {
    json j;
    j["dim"] = F.dim();
    switch (F.kind()) {
        case DirichletSet::Kind::PosCone: j["kind"] = "pos"; break;
        case DirichletSet::Kind::TraceCone: j["kind"] = "trace"; break;
        case DirichletSet::Kind::HalfSpaces: {
            j["kind"] = "halfspaces";
            j["halfspaces"] = json::array();
            for (const HalfSpace &h : F.halfspaces()) {
                json u = json::array();
                for (int i = 0; i < h.U.dim(); ++i) {
                    json row = json::array();
                    for (int k = 0; k < h.U.dim(); ++k) row.push_back(h.U(i, k));
                    u.push_back(row);
                }
                j["halfspaces"].push_back({{"U", u}, {"c", h.c}});
            }
            break;
        }
        case DirichletSet::Kind::EigenCone: {
            j["kind"] = "eigen";
            j["functionals"] = json::array();
            for (const EigenFunctional &f : F.functionals())
                j["functionals"].push_back({{"coeffs", f.coeffs}, {"offset", f.offset}});
            break;
        }
    }
    return j;
}

DirichletSet dirichlet_from_json(const json &j, const std::string &ptr) {
    std::string kind = get_str(j, "kind", ptr);
    int dim = get_int(j, "dim", ptr);
    if (kind == "pos") return DirichletSet::pos_cone(dim);
    if (kind == "trace") return DirichletSet::trace_cone(dim);
    if (kind == "halfspaces") {
        const json &hs = require(j, "halfspaces", ptr);
        if (!hs.is_array() || hs.empty()) throw ConfigError(ptr + "/halfspaces", "expected a nonempty array");
        std::vector<HalfSpace> out;
        for (size_t i = 0; i < hs.size(); ++i) {
            const std::string hptr = ptr + "/halfspaces/" + std::to_string(i);
            const json &u = require(hs[i], "U", hptr);
            std::vector<double> entries;
            for (const auto &row : u)
                for (const auto &x : row) entries.push_back(x.get<double>());
            if (entries.size() != static_cast<size_t>(dim) * dim) throw ConfigError(hptr + "/U", "expected a dim x dim matrix");
            out.push_back({SymMat(dim, entries), get_num_or(hs[i], "c", 0.0)});
        }
        return DirichletSet::half_spaces(dim, std::move(out));
    }
    if (kind == "eigen") {
        const json &fs = require(j, "functionals", ptr);
        std::vector<EigenFunctional> out;
        for (size_t i = 0; i < fs.size(); ++i) {
            EigenFunctional f;
            f.coeffs = fs[i].at("coeffs").get<std::vector<double>>();
            f.offset = get_num_or(fs[i], "offset", 0.0);
            out.push_back(std::move(f));
        }
        return DirichletSet::eigen_cone(dim, std::move(out));
    }
    throw ConfigError(ptr + "/kind", "unknown cone kind '" + kind + "'");
}

json to_json(const BlockSym &A) {
    json j;
    j["n"] = A.n();
    j["m"] = A.m();
    json rows = json::array();
    for (int i = 0; i < A.n() + A.m(); ++i) {
        json row = json::array();
        for (int k = 0; k < A.n() + A.m(); ++k) row.push_back(A.full()(i, k));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

BlockSym blocksym_from_json(const json &j, const std::string &ptr) {
    int n = get_int(j, "n", ptr), m = get_int(j, "m", ptr);
    const json &e = require(j, "entries", ptr);
    std::vector<double> entries;
    for (const auto &row : e)
        for (const auto &x : row) entries.push_back(x.get<double>());
    if (entries.size() != static_cast<size_t>(n + m) * (n + m))
        throw ConfigError(ptr + "/entries", "expected an (n+m) x (n+m) matrix");
    return BlockSym(n, m, SymMat(n + m, entries));
}

json to_json(const Domain &d) {
    json j;
    switch (d.kind()) {
        case Domain::Kind::Interval: j = {{"kind", "interval"}, {"a", d.a()}, {"b", d.b()}}; break;
        case Domain::Kind::Disk:
            j = {{"kind", "disk"},
                 {"center", {d.center()[0], d.center()[1]}},
                 {"radius", d.radius()},
                 {"boundary_nodes", d.boundary_count()}};
            break;
        case Domain::Kind::Grid: {
            j["kind"] = "grid";
            j["axes"] = json::array();
            for (int k = 0; k < 2; ++k)
                j["axes"].push_back({{"min", d.grid_axis(k).lo}, {"max", d.grid_axis(k).hi}, {"count", d.grid_axis(k).count}});
            j["mask"] = d.mask();
            break;
        }
    }
    return j;
}

Domain domain_from_json(const json &j, const std::string &ptr) {
    std::string kind = get_str(j, "kind", ptr);
    if (kind == "interval") return Domain::interval(get_num(j, "a", ptr), get_num(j, "b", ptr));
    if (kind == "disk") {
        const json &c = require(j, "center", ptr);
        return Domain::disk({c.at(0).get<double>(), c.at(1).get<double>()}, get_num(j, "radius", ptr),
                            get_int_or(j, "boundary_nodes", 256));
    }
    if (kind == "grid") {
        const json &axes = require(j, "axes", ptr);
        Axis a0 = axis_from_json(axes.at(0), ptr + "/axes/0");
        Axis a1 = axis_from_json(axes.at(1), ptr + "/axes/1");
        std::vector<std::uint8_t> mask = require(j, "mask", ptr).get<std::vector<std::uint8_t>>();
        return Domain::grid(a0, a1, std::move(mask));
    }
    throw ConfigError(ptr + "/kind", "unknown domain kind '" + kind + "'");
}

json to_json(const ConvexBody &b) {
    if (b.dim() == 1) return {{"dim", 1}, {"endpoints", {b.lo(), b.hi()}}};
    return {{"dim", 2}, {"directions", b.directions()}, {"support", b.support_values()}};
}

ConvexBody body_from_json(const json &j, const std::string &ptr) {
    int dim = get_int(j, "dim", ptr);
    if (dim == 1) {
        const json &e = require(j, "endpoints", ptr);
        return ConvexBody::interval(e.at(0).get<double>(), e.at(1).get<double>());
    }
    if (dim == 2) return ConvexBody::planar(require(j, "support", ptr).get<std::vector<double>>());
    throw ConfigError(ptr + "/dim", "bodies live in dimension 1 or 2");
}

Axis axis_from_json(const json &j, const std::string &ptr) {
    Axis a{get_num(j, "min", ptr), get_num(j, "max", ptr), get_int(j, "count", ptr)};
    try {
        a.validate();
    } catch (const std::exception &e) {
        throw ConfigError(ptr, e.what());
    }
    return a;
}

std::vector<Axis> axes_from_json(const json &j, const std::string &ptr) {
    if (!j.is_array() || j.empty()) throw ConfigError(ptr, "expected a nonempty array of axes");
    std::vector<Axis> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(axis_from_json(j[i], ptr + "/" + std::to_string(i)));
    return out;
}

std::filesystem::path emit_table(const GridFn &g, const std::filesystem::path &path, const std::string &format) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_table: cannot open " + path.string());
    if (format == "csv") {
        g.write_csv(os);
    } else if (format == "json") {
        json j;
        j["axes"] = json::array();
        for (const Axis &a : g.axes()) j["axes"].push_back({{"min", a.lo}, {"max", a.hi}, {"count", a.count}});
        json vals = json::array();
        for (std::int64_t f = 0; f < g.size(); ++f) vals.push_back(format_value(g[f]));
        j["values"] = vals;
        os << j.dump(2) << "\n";
    } else {
        throw std::runtime_error("emit_table: unknown format " + format);
    }
    return path;
}

std::filesystem::path emit_bodies(const std::vector<ConvexBody> &bodies, const std::vector<std::vector<double>> &points,
                                  const std::filesystem::path &path, const std::string &format) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_bodies: cannot open " + path.string());
    if (format == "json") {
        json j = json::array();
        for (size_t i = 0; i < bodies.size(); ++i) j.push_back({{"x", points[i]}, {"body", to_json(bodies[i])}});
        os << j.dump(2) << "\n";
        return path;
    }
    if (bodies.empty()) throw std::runtime_error("emit_bodies: empty list");
    if (bodies.front().dim() == 1) {
        for (size_t k = 0; k < points.front().size(); ++k) os << "x" << k << ",";
        os << "lo,hi,volume\n";
        for (size_t i = 0; i < bodies.size(); ++i) {
            for (double c : points[i]) os << format_value(c) << ",";
            os << format_value(bodies[i].lo()) << "," << format_value(bodies[i].hi()) << ","
               << format_value(volume(bodies[i])) << "\n";
        }
    } else {
        os << "point_index,direction_index,angle,support\n";
        for (size_t i = 0; i < bodies.size(); ++i)
            for (int d = 0; d < bodies[i].directions(); ++d)
                os << i << "," << d << "," << format_value(bodies[i].direction_angle(d)) << ","
                   << format_value(bodies[i].support_at(d)) << "\n";
    }
    return path;
}

std::vector<QuadraticSuiteEntry> quadratic_suite(int count, std::uint64_t seed, double min_margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<QuadraticSuiteEntry> out;
    out.reserve(static_cast<size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        // Hessian (Bxx c; c^T 1) with Schur complement Bxx - c c^T >= min_margin.
        double c1 = 0.7 * unit(rng), c2 = 0.7 * unit(rng);
        double g11 = 0.3 + 0.7 * std::abs(unit(rng));
        double g22 = 0.3 + 0.7 * std::abs(unit(rng));
        double g12 = 0.5 * unit(rng) * std::sqrt(g11 * g22);
        SymMat H(3);
        H.set(0, 0, g11 + c1 * c1 + min_margin);
        H.set(1, 1, g22 + c2 * c2 + min_margin);
        H.set(0, 1, g12 + c1 * c2);
        H.set(0, 2, c1);
        H.set(1, 2, c2);
        H.set(2, 2, 1.0);
        // Schur = (g + margin I) + cc^T - cc^T = g + margin I; g psd by construction.
        SymMat schur(2);
        schur.set(0, 0, H(0, 0) - c1 * c1);
        schur.set(1, 1, H(1, 1) - c2 * c2);
        schur.set(0, 1, H(0, 1) - c1 * c2);
        double margin = schur.min_eigenvalue();
        if (margin < min_margin * 0.5) continue;
        out.push_back({H, margin});
    }
    return out;
}

GridFn quadratic_gridfn(const SymMat &hessian, const std::vector<Axis> &x_axes, const Axis &y_axis) {
    const int n = hessian.dim() - 1;
    if (static_cast<int>(x_axes.size()) != n) throw std::invalid_argument("quadratic_gridfn: axis count mismatch");
    std::vector<Axis> joint = x_axes;
    joint.push_back(y_axis);
    GridFn g(joint);
    g.set_split(n);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        double v = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) v += 0.5 * z[static_cast<size_t>(i)] * hessian(i, j) * z[static_cast<size_t>(j)];
        g[f] = v;
    }
    return g;
}

namespace {

QuadraticSection quad8_from_json(const json &data, const std::string &ptr) {
    QuadraticSection q;
    q.lambda = get_num_or(data, "lambda", 1.0);
    q.mu = get_num_or(data, "mu", 1.0);
    q.tau = get_num_or(data, "tau", 0.0);
    q.a = get_num_or(data, "a", 0.0);
    q.b = get_num_or(data, "b", 0.0);
    q.kappa = get_num_or(data, "kappa", 1.0);
    (void)ptr;
    return q;
}

GridFn quad8_gridfn(const QuadraticSection &q, const std::vector<Axis> &x_axes, const Axis &y_axis) {
    std::vector<Axis> joint = x_axes;
    joint.push_back(y_axis);
    GridFn g(joint);
    g.set_split(2);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        g[f] = q.psi(z[0], z[1], z[2]);
    }
    return g;
}

GridFn gauss_shift_gridfn(const json &data, const std::vector<Axis> &x_axes, const Axis &y_axis) {
    std::string shift = data.contains("shift") ? data.at("shift").get<std::string>() : "sin";
    double amp = get_num_or(data, "amp", 1.0);
    std::vector<Axis> joint = x_axes;
    joint.push_back(y_axis);
    GridFn g(joint);
    g.set_split(static_cast<int>(x_axes.size()));
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        double x = z[0], y = z.back();
        double s = shift == "sin" ? amp * std::sin(x) : amp * x;
        double xsq = 0.0;
        for (size_t k = 0; k + 1 < z.size(); ++k) xsq += z[k] * z[k];
        g[f] = (y - s) * (y - s) + xsq;
    }
    return g;
}

GridFn abs_shift_gridfn(const json &data, const std::vector<Axis> &x_axes, const Axis &y_axis) {
    double c = get_num_or(data, "slope", 1.0);
    std::vector<Axis> joint = x_axes;
    joint.push_back(y_axis);
    GridFn g(joint);
    g.set_split(static_cast<int>(x_axes.size()));
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        double x = z[0], y = z.back();
        g[f] = std::abs(y - c * x) + x * x;
    }
    return g;
}

GridFn formula_gridfn(const json &data, const std::vector<Axis> &x_axes, const Axis &y_axis, const std::string &ptr) {
    std::string formula = get_str(data, "formula", ptr);
    if (formula == "quad8") return quad8_gridfn(quad8_from_json(data, ptr), x_axes, y_axis);
    if (formula == "gauss_shift") return gauss_shift_gridfn(data, x_axes, y_axis);
    if (formula == "abs_shift") return abs_shift_gridfn(data, x_axes, y_axis);
    if (formula == "custom_csv") {
        std::ifstream is(get_str(data, "path", ptr));
        if (!is) throw ConfigError(ptr + "/path", "cannot open CSV");
        GridFn g = GridFn::read_csv(is);
        g.set_split(get_int(data, "split", ptr));
        return g;
    }
    throw ConfigError(ptr + "/formula", "unknown formula id '" + formula + "'");
}

std::vector<Axis> grid_x_axes(const json &cfg) {
    return axes_from_json(require(require(cfg, "grid", ""), "x", "/grid"), "/grid/x");
}

Axis grid_y_axis(const json &cfg) {
    std::vector<Axis> y = axes_from_json(require(require(cfg, "grid", ""), "y", "/grid"), "/grid/y");
    if (y.size() != 1) throw ConfigError("/grid/y", "one fiber axis expected");
    return y[0];
}

void add_check(RunResult &res, const std::string &name, bool pass, double margin) {
    res.checks.push_back({name, pass, margin});
}

} // namespace

RunResult run_example8(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    QuadraticSection q = quad8_from_json(require(cfg, "data", ""), "/data");
    std::vector<Axis> x_axes = grid_x_axes(cfg);
    double w_floor = get_num_or(cfg.value("tolerances", json::object()), "w_floor", 0.05);
    double golden_tol = get_num_or(cfg.value("tolerances", json::object()), "golden", 1e-6);

    GridFn bk = section_volume_quadratic(q, x_axes, opts.policy);

    // Golden match against -log2 - (1/2) log W on {W > floor}.
    double worst = 0.0;
    GridFn xt(x_axes);
    for (std::int64_t f = 0; f < bk.size(); ++f) {
        std::vector<double> x = xt.coords(xt.multi_index(f));
        double W = q.w(x[0], x[1]);
        if (W <= w_floor) continue;
        worst = std::max(worst, std::abs(bk[f] - (-std::log(2.0) - 0.5 * std::log(W))));
    }
    add_check(res, "golden_match", worst <= golden_tol, worst);

    // Discrete Laplacian sign on full stencils inside {W > floor}.
    double deficit = q.lambda + q.mu - q.a * q.a - q.b * q.b;
    double lap_origin = 0.0;
    bool have_origin = false;
    double worst_lap = kInf;
    for (std::int64_t f = 0; f < bk.size(); ++f) {
        std::vector<int> idx = xt.multi_index(f);
        if (idx[0] < 1 || idx[0] > x_axes[0].count - 2 || idx[1] < 1 || idx[1] > x_axes[1].count - 2) continue;
        bool ok = true;
        for (int di = -1; di <= 1 && ok; ++di)
            for (int dj = -1; dj <= 1 && ok; ++dj) {
                std::vector<double> x = xt.coords({idx[0] + di, idx[1] + dj});
                ok = q.w(x[0], x[1]) > w_floor;
            }
        if (!ok) continue;
        double lap = fd_hessian(bk, idx).trace();
        worst_lap = std::min(worst_lap, lap);
        std::vector<double> x = xt.coords(idx);
        if (std::abs(x[0]) < 1e-12 && std::abs(x[1]) < 1e-12) {
            lap_origin = lap;
            have_origin = true;
        }
    }
    double scale = std::max(1.0, bk.max_abs_finite() / (x_axes[0].step() * x_axes[0].step()));
    if (deficit >= 0.0) {
        add_check(res, "laplacian_nonnegative", worst_lap >= -1e-6 * scale, worst_lap);
    } else {
        double target = deficit / (2.0 * q.kappa);
        double err = have_origin ? std::abs(lap_origin - target) : kInf;
        add_check(res, "laplacian_origin_matches_deficit", err <= 5e-3, err);
        add_check(res, "laplacian_negative_at_origin", have_origin && lap_origin < 0.0, lap_origin);
    }

    res.artifacts.push_back(emit_table(bk, opts.out_dir / (res.scenario_id + "_bk." + opts.format), opts.format).string());
    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

RunResult run_check_product(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    DirichletSet F = dirichlet_from_json(require(cfg, "F", ""), "/F");
    std::uint64_t seed = scenario_seed(cfg, opts);

    if (cfg.contains("block")) {
        BlockSym A = blocksym_from_json(cfg.at("block"), "/block");
        const json &sj = cfg.value("samples", json::object());
        int count = get_int_or(sj, "count", 200);
        double scale_max = get_num_or(sj, "scale_max", 1000.0);
        double margin = get_num_or(sj, "margin", 1e-9);
        ProductReport pr = product_contains(F, A, margin);
        SampledProductReport sr = product_contains_sampled(F, A, count, scale_max, seed, margin);
        add_check(res, std::string("schur_classification_") + to_string(pr.region), true, pr.margin);
        add_check(res, std::string("sampled_classification_") + to_string(sr.region), true, sr.worst_margin);
        add_check(res, "routes_agree", (pr.region == Region::Exterior) == (sr.region == Region::Exterior),
                  std::min(pr.margin, sr.worst_margin));

        json witness;
        witness["worst_gamma"] = json::array();
        for (int i = 0; i < sr.worst_gamma.rows; ++i) {
            json row = json::array();
            for (int k = 0; k < sr.worst_gamma.cols; ++k) row.push_back(sr.worst_gamma(i, k));
            witness["worst_gamma"].push_back(row);
        }
        witness["worst_margin"] = sr.worst_margin;
        witness["schur_margin"] = pr.schur_margin;
        witness["fiber_margin"] = pr.fiber_margin;
        witness["null_residual"] = pr.null_residual;
        std::filesystem::create_directories(opts.out_dir);
        std::filesystem::path wp = opts.out_dir / (res.scenario_id + "_witness.json");
        std::ofstream(wp) << witness.dump(2) << "\n";
        res.artifacts.push_back(wp.string());
    }

    if (cfg.contains("suite")) {
        const json &sj = cfg.at("suite");
        int count = get_int_or(sj, "count", 500);
        int max_n = get_int_or(sj, "max_n", 4), max_m = get_int_or(sj, "max_m", 4);
        int samples = get_int_or(sj, "samples", 200);
        double scale_max = get_num_or(sj, "scale_max", 1000.0);
        double gate = get_num_or(sj, "schur_gate", 1e-6);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_int_distribution<int> dim_n(1, max_n), dim_m(1, max_m);
        int disagreements = 0, decided = 0;
        for (int t = 0; t < count; ++t) {
            int n = dim_n(rng), m = dim_m(rng);
            SymMat A(n + m);
            for (int i = 0; i < n + m; ++i)
                for (int j = i; j < n + m; ++j) A.set(i, j, unit(rng));
            int style = t % 3;
            if (style == 1) {
                // Push toward membership.
                for (int i = 0; i < n + m; ++i) A.set(i, i, A(i, i) + 2.0);
            } else if (style == 2) {
                // Gram matrix: always a member for both builtin cones.
                SymMat G(n + m);
                for (int i = 0; i < n + m; ++i)
                    for (int j = i; j < n + m; ++j) {
                        double s = 0.0;
                        for (int k = 0; k < n + m; ++k) s += A(i, k) * A(j, k);
                        G.set(i, j, s);
                    }
                A = G;
            }
            BlockSym B(n, m, A);
            ProductReport pr = product_contains(F, B, 0.0);
            if (std::abs(pr.margin) <= gate || pr.null_residual > gate) continue;
            ++decided;
            SampledProductReport sr = product_contains_sampled(F, B, samples, scale_max, seed + static_cast<std::uint64_t>(t), gate);
            bool schur_member = pr.margin > 0.0;
            bool sampled_member = sr.region != Region::Exterior;
            if (schur_member != sampled_member) ++disagreements;
        }
        add_check(res, "suite_zero_disagreements", disagreements == 0, static_cast<double>(disagreements));
        add_check(res, "suite_decided_instances", decided > 0, static_cast<double>(decided));
    }

    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

RunResult run_prekopa(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    DirichletSet F = dirichlet_from_json(require(cfg, "F", ""), "/F");
    std::vector<Axis> x_axes = grid_x_axes(cfg);
    Axis y_axis = grid_y_axis(cfg);
    const json &data = require(cfg, "data", "");
    std::string formula = get_str(data, "formula", "/data");
    double tol = get_num_or(cfg.value("tolerances", json::object()), "margin", 1e-5);

    std::vector<GridFn> psis;
    if (formula == "quad_random_suite") {
        int count = get_int_or(data, "count", 10);
        for (const QuadraticSuiteEntry &e : quadratic_suite(count, scenario_seed(cfg, opts)))
            psis.push_back(quadratic_gridfn(e.hessian, x_axes, y_axis));
    } else {
        psis.push_back(formula_gridfn(data, x_axes, y_axis, "/data"));
    }

    GammaSamples gs;
    gs.seed = scenario_seed(cfg, opts);
    for (size_t i = 0; i < psis.size(); ++i) {
        std::string tag = psis.size() == 1 ? "" : "_" + std::to_string(i);
        CheckReport prod = is_product_subharmonic(psis[i], F, gs, tol, opts.policy);
        add_check(res, "psi_product_subharmonic" + tag, prod.pass, prod.worst_margin);

        MarginalResult mr = marginal(psis[i], nullptr, opts.policy);
        CheckReport sub = is_F_subharmonic(mr.phi, F, tol, 0.0, opts.policy);
        add_check(res, "marginal_F_subharmonic" + tag, sub.pass, sub.worst_margin);

        // Table: x coordinates, phi, discrete Laplacian.
        if (i == 0) {
            std::vector<Axis> cols = x_axes;
            GridFn phi = mr.phi;
            std::filesystem::path p = opts.out_dir / (res.scenario_id + "_phi." + opts.format);
            std::filesystem::create_directories(opts.out_dir);
            std::ofstream os(p, std::ios::binary);
            for (size_t k = 0; k < cols.size(); ++k) os << "x" << k << ",";
            os << "phi,laplacian\n";
            GridFn xt(x_axes);
            for (std::int64_t f = 0; f < phi.size(); ++f) {
                std::vector<int> idx = xt.multi_index(f);
                bool interior = true;
                for (size_t k = 0; k < cols.size(); ++k)
                    interior = interior && idx[k] >= 1 && idx[k] <= cols[k].count - 2;
                double lap = kInf;
                if (interior && std::isfinite(phi[f])) lap = fd_hessian(phi, idx).trace();
                std::vector<double> x = xt.coords(idx);
                for (double c : x) os << format_value(c) << ",";
                os << format_value(phi[f]) << "," << format_value(lap) << "\n";
            }
            res.artifacts.push_back(p.string());
        }
    }

    if (formula == "gauss_shift" && x_axes.size() == 1) {
        std::vector<int> x0 = {x_axes[0].count / 2};
        HessianDecomposition hd = hessian_decomposition_residual(psis[0], x0);
        double htol = get_num_or(cfg.value("tolerances", json::object()), "hessian_residual", 1e-3);
        add_check(res, "hessian_decomposition_residual", hd.residual <= htol, hd.residual);
        add_check(res, "hessian_matches_2", std::abs(hd.lhs(0, 0) - 2.0) <= htol, hd.lhs(0, 0) - 2.0);
    }

    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

RunResult run_bm(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    DirichletSet F = dirichlet_from_json(require(cfg, "F", ""), "/F");
    QuadraticSection q = quad8_from_json(require(cfg, "data", ""), "/data");
    std::vector<Axis> x_axes = grid_x_axes(cfg);
    Axis y_axis = grid_y_axis(cfg);
    double tol = get_num_or(cfg.value("tolerances", json::object()), "margin", 1e-5);

    GridFn rho = quad8_gridfn(q, x_axes, y_axis);
    GammaSamples gs;
    gs.seed = scenario_seed(cfg, opts);
    CheckReport prod = is_product_subharmonic(rho, F, gs, tol, opts.policy);
    add_check(res, "rho_product_subharmonic", prod.pass, prod.worst_margin);

    GridFn bk_grid = section_volume(rho, q.kappa, opts.policy);
    GridFn bk_closed = section_volume_quadratic(q, x_axes, opts.policy);

    double cross = 0.0;
    for (std::int64_t f = 0; f < bk_grid.size(); ++f) {
        if (bk_grid[f] == kInf || bk_closed[f] == kInf) continue;
        GridFn xt(x_axes);
        std::vector<double> x = xt.coords(xt.multi_index(f));
        if (q.w(x[0], x[1]) < 0.05) continue;
        cross = std::max(cross, std::abs(bk_grid[f] - bk_closed[f]));
    }
    double cross_tol = get_num_or(cfg.value("tolerances", json::object()), "cross_route", 1e-3);
    add_check(res, "grid_vs_closed_form", cross <= cross_tol, cross);

    CheckReport sub = is_F_subharmonic(bk_closed, F, tol, 0.0, opts.policy);
    add_check(res, "bk_F_subharmonic", sub.pass, sub.worst_margin);

    // Refinement diagnostic: grid-mode B_K converges to the closed form from
    // above as the fiber grid refines.
    if (cfg.contains("refinement")) {
        std::vector<int> counts = cfg.at("refinement").get<std::vector<int>>();
        double prev_err = kInf;
        bool monotone = true, from_above = true;
        for (int c : counts) {
            Axis fine{y_axis.lo, y_axis.hi, c};
            GridFn bk_c = section_volume(quad8_gridfn(q, x_axes, fine), q.kappa, opts.policy);
            double err = 0.0;
            for (std::int64_t f = 0; f < bk_c.size(); ++f) {
                if (bk_closed[f] == kInf || bk_c[f] == kInf) continue;
                err = std::max(err, std::abs(bk_c[f] - bk_closed[f]));
                if (bk_c[f] < bk_closed[f] - 1e-9) from_above = false;
            }
            if (err > prev_err + 1e-12) monotone = false;
            prev_err = err;
        }
        add_check(res, "refinement_from_above", from_above, prev_err);
        add_check(res, "refinement_error_decreasing", monotone, prev_err);
    }

    res.artifacts.push_back(emit_table(bk_closed, opts.out_dir / (res.scenario_id + "_bk." + opts.format), opts.format).string());
    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

RunResult run_min_principle(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    DirichletSet F = dirichlet_from_json(require(cfg, "F", ""), "/F");
    std::vector<Axis> x_axes = grid_x_axes(cfg);
    Axis y_axis = grid_y_axis(cfg);
    const json &data = require(cfg, "data", "");
    std::string formula = get_str(data, "formula", "/data");
    double tol = get_num_or(cfg.value("tolerances", json::object()), "margin", 1e-6);
    std::vector<double> ps = cfg.contains("p") ? cfg.at("p").get<std::vector<double>>() : std::vector<double>{1, 4, 16, 64};

    std::vector<GridFn> psis;
    if (formula == "quad_random_suite") {
        for (const QuadraticSuiteEntry &e : quadratic_suite(get_int_or(data, "count", 10), scenario_seed(cfg, opts)))
            psis.push_back(quadratic_gridfn(e.hessian, x_axes, y_axis));
    } else {
        psis.push_back(formula_gridfn(data, x_axes, y_axis, "/data"));
    }

    for (size_t i = 0; i < psis.size(); ++i) {
        std::string tag = psis.size() == 1 ? "" : "_" + std::to_string(i);
        MinPrincipleResult mp = min_principle(psis[i], ps, opts.policy);
        CheckReport sub = is_F_subharmonic(mp.inf_y, F, tol, 0.0, opts.policy);
        add_check(res, "inf_F_subharmonic" + tag, sub.pass, sub.worst_margin);
        bool monotone = true;
        for (size_t k = 0; k + 1 < mp.sup_deviation.size(); ++k)
            monotone = monotone && mp.sup_deviation[k + 1] <= mp.sup_deviation[k] + 1e-12;
        add_check(res, "p_family_decreasing" + tag, monotone, mp.sup_deviation.back());
        if (i == 0)
            res.artifacts.push_back(
                emit_table(mp.inf_y, opts.out_dir / (res.scenario_id + "_inf." + opts.format), opts.format).string());
    }
    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

RunResult run_supconv(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    std::vector<Axis> x_axes = grid_x_axes(cfg);
    Axis y_axis = grid_y_axis(cfg);
    GridFn psi = formula_gridfn(require(cfg, "data", ""), x_axes, y_axis, "/data");
    std::vector<double> eps = cfg.contains("eps") ? cfg.at("eps").get<std::vector<double>>()
                                                  : std::vector<double>{0.1, 0.01, 1e-3, 1e-4};
    std::sort(eps.begin(), eps.end(), std::greater<>());

    GammaSamples gs;
    gs.seed = scenario_seed(cfg, opts);
    double tol = get_num_or(cfg.value("tolerances", json::object()), "margin", 1e-4);

    bool dominates = true, monotone = true;
    double prev_scale = kInf;
    GridFn prev = psi;
    bool have_prev = false;
    double final_dev = kInf;
    for (double e : eps) {
        GridFn se = sup_convolution(psi, e, opts.policy);
        // Compare against psi on the shrunk grid.
        GridFn base(se.axes());
        std::vector<int> offset(static_cast<size_t>(psi.rank()));
        for (int k = 0; k < psi.rank(); ++k)
            offset[static_cast<size_t>(k)] =
                static_cast<int>(std::lround((se.axis(k).lo - psi.axis(k).lo) / psi.axis(k).step()));
        double dev = 0.0;
        for (std::int64_t f = 0; f < se.size(); ++f) {
            std::vector<int> idx = se.multi_index(f);
            for (int k = 0; k < psi.rank(); ++k) idx[static_cast<size_t>(k)] += offset[static_cast<size_t>(k)];
            double pv = psi.at(idx);
            if (se[f] < pv - 1e-12) dominates = false;
            dev = std::max(dev, se[f] - pv);
            if (have_prev && se[f] > prev[f] + 1e-12) monotone = false;
        }
        prev = se;
        have_prev = true;
        final_dev = dev;
        prev_scale = std::min(prev_scale, dev);
    }
    add_check(res, "dominates_psi", dominates, 0.0);
    add_check(res, "monotone_in_eps", monotone, 0.0);
    add_check(res, "converges_nodewise", final_dev <= get_num_or(cfg.value("tolerances", json::object()), "converge", 1e-3),
              final_dev);

    if (cfg.contains("F")) {
        DirichletSet F = dirichlet_from_json(cfg.at("F"), "/F");
        CheckReport before = is_product_subharmonic(psi, F, gs, tol, opts.policy);
        double e = eps.back();
        GridFn se = sup_convolution(psi, e, opts.policy);
        CheckReport after = is_product_subharmonic(se, F, gs, tol, opts.policy);
        bool preserved = after.worst_margin >= before.worst_margin - 10.0 * e - tol;
        add_check(res, "margin_preserved_up_to_O_eps", preserved, after.worst_margin - before.worst_margin);
    }

    res.timings_ms.emplace_back("total", timer.ms());
    return res;
}

namespace {

std::vector<double> family_boundary_values(const Domain &domain, const json &data, const std::string &key, double dflt) {
    const int M = domain.boundary_count();
    std::vector<double> g(static_cast<size_t>(M), dflt);
    if (data.contains(key)) {
        auto v = data.at(key).get<std::vector<double>>();
        if (static_cast<int>(v.size()) != M) throw ConfigError("/family/" + key, "one value per boundary node expected");
        g = v;
    }
    return g;
}

} // namespace

RunResult run_interp(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    Domain domain = domain_from_json(require(cfg, "domain", ""), "/domain");
    DirichletSet F = dirichlet_from_json(require(cfg, "F", ""), "/F");
    const json &fam = require(cfg, "family", "");
    std::string formula = get_str(fam, "formula", "/family");
    const json &grid = require(cfg, "grid", "");
    int x_count = get_int_or(grid, "x_count", 33);
    const json &tols = cfg.value("tolerances", json::object());

    if (formula == "interval_bodies" || formula == "cos_interval_family" || formula == "constant_body") {
        BoundaryBodyFamily bodies{domain, {}};
        const int M = domain.boundary_count();
        if (formula == "interval_bodies") {
            const json &bs = require(fam, "bodies", "/family");
            for (size_t i = 0; i < bs.size(); ++i)
                bodies.bodies.push_back(ConvexBody::interval(bs[i].at(0).get<double>(), bs[i].at(1).get<double>()));
        } else if (formula == "cos_interval_family") {
            double base = get_num_or(fam, "base", 1.0), amp = get_num_or(fam, "amp", 1.0);
            for (int i = 0; i < M; ++i)
                bodies.bodies.push_back(ConvexBody::interval(0.0, base + amp * std::cos(domain.boundary_angle(i))));
        } else {
            ConvexBody b = body_from_json(require(fam, "body", "/family"), "/family/body");
            for (int i = 0; i < M; ++i) bodies.bodies.push_back(b);
        }
        bodies.validate();

        std::vector<std::vector<double>> points;
        if (domain.kind() == Domain::Kind::Interval) {
            Axis t{domain.a(), domain.b(), x_count};
            for (int i = 0; i < x_count; ++i) points.push_back({t.coord(i)});
        } else {
            Axis ax{domain.center()[0] - domain.radius(), domain.center()[0] + domain.radius(), x_count};
            Axis ay{domain.center()[1] - domain.radius(), domain.center()[1] + domain.radius(), x_count};
            for (int i = 0; i < x_count; ++i)
                for (int j = 0; j < x_count; ++j)
                    if (domain.is_interior_point({ax.coord(i), ay.coord(j)})) points.push_back({ax.coord(i), ay.coord(j)});
        }
        std::vector<ConvexBody> interp = interpolate_bodies(bodies, points);
        res.artifacts.push_back(
            emit_bodies(interp, points, opts.out_dir / (res.scenario_id + "_bodies." + opts.format), opts.format).string());

        // -log volume along the interpolation.
        if (domain.kind() == Domain::Kind::Interval) {
            GridFn nlv(std::vector<Axis>{Axis{domain.a(), domain.b(), x_count}});
            for (int i = 0; i < x_count; ++i) nlv[i] = -std::log(volume(interp[static_cast<size_t>(i)]));
            double worst = kInf;
            for (int i = 1; i + 1 < x_count; ++i) worst = std::min(worst, nlv[i + 1] - 2.0 * nlv[i] + nlv[i - 1]);
            add_check(res, "neg_log_vol_convex", worst >= -get_num_or(tols, "convexity", 1e-8), worst);
        } else {
            GridFn nlv(std::vector<Axis>{Axis{domain.center()[0] - domain.radius(), domain.center()[0] + domain.radius(), x_count},
                                         Axis{domain.center()[1] - domain.radius(), domain.center()[1] + domain.radius(), x_count}},
                       kInf);
            size_t p = 0;
            for (std::int64_t f = 0; f < nlv.size(); ++f) {
                std::vector<double> x = nlv.coords(nlv.multi_index(f));
                if (!domain.is_interior_point(x)) continue;
                double v = volume(interp[p++]);
                nlv[f] = v > 0 ? -std::log(v) : kInf;
            }
            CheckReport sub = is_F_subharmonic(nlv, F, get_num_or(tols, "margin", 1e-5), 0.0, opts.policy);
            add_check(res, "neg_log_vol_F_subharmonic", sub.pass, sub.worst_margin);
        }
        res.timings_ms.emplace_back("total", timer.ms());
        return res;
    }

    if (formula == "quad_family" || formula == "custom_family_csv") {
        const int M = domain.boundary_count();
        std::vector<Axis> y_axes = axes_from_json(require(grid, "y", "/grid"), "/grid/y");
        BoundaryFunctionFamily family{domain, {}};
        if (formula == "quad_family") {
            std::vector<double> shifts;
            if (domain.kind() == Domain::Kind::Disk) {
                double amp = get_num_or(fam, "amp", 1.0);
                for (int i = 0; i < M; ++i) shifts.push_back(amp * std::cos(domain.boundary_angle(i)));
            } else {
                shifts = family_boundary_values(domain, fam, "shifts", 0.0);
            }
            for (int i = 0; i < M; ++i) {
                GridFn phi(y_axes);
                for (std::int64_t f = 0; f < phi.size(); ++f) {
                    double y = phi.coords(phi.multi_index(f))[0];
                    double d = y - shifts[static_cast<size_t>(i)];
                    phi[f] = 0.5 * d * d;
                }
                family.phi.push_back(std::move(phi));
            }
        } else {
            std::ifstream is(get_str(fam, "path", "/family"));
            if (!is) throw ConfigError("/family/path", "cannot open CSV");
            for (int i = 0; i < M; ++i) family.phi.push_back(GridFn::read_csv(is));
        }
        family.validate();

        InterpolationOptions io;
        io.x_count = x_count;
        io.policy = opts.policy;
        if (grid.contains("dual")) io.dual_axes = axes_from_json(grid.at("dual"), "/grid/dual");
        GridFn Phi = interpolate_functions(family, io);
        res.artifacts.push_back(emit_table(Phi, opts.out_dir / (res.scenario_id + "_Phi." + opts.format), opts.format).string());

        EnvelopeCheckOptions eo;
        eo.policy = opts.policy;
        eo.boundary_tol = get_num_or(tols, "boundary", 1e-2);
        eo.margin_tol = get_num_or(tols, "margin", 1e-4);
        eo.duality_tol = get_num_or(tols, "duality", 1e-3);
        if (grid.contains("dual")) eo.dual_axes = axes_from_json(grid.at("dual"), "/grid/dual");
        EnvelopeReport er = envelope_property_check(Phi, family, F, eo);
        add_check(res, "boundary_attainment", er.boundary_sup <= eo.boundary_tol, er.boundary_sup);
        add_check(res, "product_subharmonic", er.product.pass, er.product.worst_margin);
        add_check(res, "legendre_duality_margin", er.duality_margin >= -eo.margin_tol, er.duality_margin);
        add_check(res, "legendre_duality_residual", er.duality_residual <= eo.duality_tol, er.duality_residual);

        json report;
        report["boundary_sup"] = er.boundary_sup;
        report["product"] = er.product.summary();
        report["duality_margin"] = er.duality_margin;
        report["duality_residual"] = er.duality_residual;
        report["pass"] = er.pass;
        std::filesystem::create_directories(opts.out_dir);
        std::filesystem::path rp = opts.out_dir / (res.scenario_id + "_envelope.json");
        std::ofstream(rp) << report.dump(2) << "\n";
        res.artifacts.push_back(rp.string());

        res.timings_ms.emplace_back("total", timer.ms());
        return res;
    }

    throw ConfigError("/family/formula", "unknown family formula '" + formula + "'");
}

RunResult run_props(const json &cfg, const RunOptions &opts) {
    RunResult res;
    res.scenario_id = get_str(cfg, "id", "");
    Timer timer;
    std::string suite = get_str(cfg, "suite", "");
    std::uint64_t seed = scenario_seed(cfg, opts);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    if (suite == "legendre") {
        int count = get_int_or(cfg, "count", 10);
        bool fy_exact = true, involution_ok = true;
        double worst_inv = 0.0;
        for (int t = 0; t < count; ++t) {
            // Random convex function: max of affine pieces plus a quadratic.
            int pieces = 3 + t % 4;
            std::vector<double> sl(static_cast<size_t>(pieces)), ic(static_cast<size_t>(pieces));
            for (int p = 0; p < pieces; ++p) {
                sl[static_cast<size_t>(p)] = 2.0 * unit(rng);
                ic[static_cast<size_t>(p)] = unit(rng);
            }
            double qa = 0.25 * std::abs(unit(rng));
            Axis ya{-4.0, 4.0, 257};
            GridFn f(std::vector<Axis>{ya});
            double lip = 0.0;
            for (int i = 0; i < ya.count; ++i) {
                double y = ya.coord(i);
                double v = qa * y * y;
                for (int p = 0; p < pieces; ++p) v = std::max(v, sl[static_cast<size_t>(p)] * y + ic[static_cast<size_t>(p)]);
                f[i] = v;
            }
            for (int i = 0; i + 1 < ya.count; ++i) lip = std::max(lip, std::abs(f[i + 1] - f[i]) / ya.step());

            Axis ua{-(lip + 1.0), lip + 1.0, 513};
            LegendreResult fr = legendre(f, {ua}, opts.policy);
            // Fenchel-Young must hold exactly: the conjugate is the max of the
            // same expressions it is compared against.
            for (int i = 0; i < ya.count && fy_exact; i += 7)
                for (int jU = 0; jU < ua.count && fy_exact; jU += 11)
                    fy_exact = f[i] + fr.fn[jU] >= ya.coord(i) * ua.coord(jU);

            LegendreResult back = legendre(fr.fn, {ya}, opts.policy);
            for (int i = 8; i < ya.count - 8; ++i) worst_inv = std::max(worst_inv, std::abs(back.fn[i] - f[i]));
            if (worst_inv > 2.0 * lip * ya.step()) involution_ok = false;
        }
        add_check(res, "fenchel_young_exact", fy_exact, 0.0);
        add_check(res, "involution_within_2_L_dy", involution_ok, worst_inv);
        res.timings_ms.emplace_back("total", timer.ms());
        return res;
    }

    if (suite == "structural") {
        int count = get_int_or(cfg, "count", 50);
        DirichletSet F = cfg.contains("F") ? dirichlet_from_json(cfg.at("F"), "/F") : DirichletSet::trace_cone(2);
        double tol = 1e-9;
        bool max_ok = true, comb_ok = true, limit_ok = true;
        std::vector<Axis> axes{Axis{-1.0, 1.0, 33}, Axis{-1.0, 1.0, 33}};
        for (int t = 0; t < count; ++t) {
            // Pair of F-subharmonic quadratics plus a harmonic tilt.
            auto rand_member = [&]() {
                GridFn g(axes);
                double axx = unit(rng), ayy = unit(rng);
                if (axx + ayy < 0.05) {
                    double shift = (0.05 - axx - ayy) / 2.0 + 0.05;
                    axx += shift;
                    ayy += shift;
                }
                double axy = unit(rng), bx = unit(rng), by = unit(rng);
                double harm = unit(rng);
                for (std::int64_t f = 0; f < g.size(); ++f) {
                    std::vector<double> x = g.coords(g.multi_index(f));
                    g[f] = 0.5 * (axx * x[0] * x[0] + ayy * x[1] * x[1]) + axy * x[0] * x[1] + bx * x[0] + by * x[1] +
                           harm * (x[0] * x[0] - x[1] * x[1]);
                }
                return g;
            };
            GridFn a = rand_member(), b = rand_member();
            GridFn mx(axes), comb(axes);
            for (std::int64_t f = 0; f < a.size(); ++f) {
                mx[f] = std::max(a[f], b[f]);
                comb[f] = 0.5 * a[f] + 0.5 * b[f];
            }
            if (!is_F_subharmonic(mx, F, tol).pass) max_ok = false;
            if (!is_F_subharmonic(comb, F, tol).pass) comb_ok = false;

            // Decreasing limit: a + 1/k decreases to a.
            GridFn lim = a;
            for (int k = 1; k <= 4; ++k) {
                GridFn step(axes);
                for (std::int64_t f = 0; f < a.size(); ++f) step[f] = a[f] + 1.0 / k;
                if (!is_F_subharmonic(step, F, tol).pass) limit_ok = false;
            }
            if (!is_F_subharmonic(lim, F, tol).pass) limit_ok = false;
        }
        add_check(res, "maximum_property", max_ok, 0.0);
        add_check(res, "convex_combination_stability", comb_ok, 0.0);
        add_check(res, "decreasing_limit_stability", limit_ok, 0.0);
        res.timings_ms.emplace_back("total", timer.ms());
        return res;
    }

    throw ConfigError("/suite", "unknown property suite '" + suite + "'");
}

RunResult run_subcommand(const std::string &name, const json &cfg, const RunOptions &opts) {
    if (name == "check-product") return run_check_product(cfg, opts);
    if (name == "prekopa") return run_prekopa(cfg, opts);
    if (name == "bm") return run_bm(cfg, opts);
    if (name == "min-principle") return run_min_principle(cfg, opts);
    if (name == "interp") return run_interp(cfg, opts);
    if (name == "supconv") return run_supconv(cfg, opts);
    if (name == "example8") return run_example8(cfg, opts);
    if (name == "props") return run_props(cfg, opts);
    throw ConfigError("/", "unknown subcommand '" + name + "'");
}

} // namespace fstar
