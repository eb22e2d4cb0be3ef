#include "fstar/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fstar;

namespace {

std::string slurp(const std::filesystem::path &p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("wire formats round trip") {
    DirichletSet F = DirichletSet::half_spaces(2, {HalfSpace{SymMat::identity(2), -0.5}});
    DirichletSet F2 = dirichlet_from_json(to_json(F));
    CHECK(F2.kind() == DirichletSet::Kind::HalfSpaces);
    CHECK(F2.halfspaces()[0].c == doctest::Approx(-0.5));

    SymMat a(3);
    a.set(0, 0, 1.0);
    a.set(0, 2, 0.25);
    a.set(2, 2, 2.0);
    BlockSym B(2, 1, a);
    BlockSym B2 = blocksym_from_json(to_json(B));
    CHECK(B2.n() == 2);
    CHECK(B2.full()(0, 2) == doctest::Approx(0.25));

    Domain d = Domain::disk({0.1, -0.2}, 1.5, 64);
    Domain d2 = domain_from_json(to_json(d));
    CHECK(d2.kind() == Domain::Kind::Disk);
    CHECK(d2.radius() == doctest::Approx(1.5));

    ConvexBody body = ConvexBody::ball({0.0, 0.0}, 1.0, 32);
    ConvexBody body2 = body_from_json(to_json(body), "/body");
    CHECK(body2.directions() == 32);
    CHECK(body2.support_at(3) == doctest::Approx(body.support_at(3)));
}

TEST_CASE("config errors carry json pointers") {
    json bad = {{"id", "x"}, {"F", {{"kind", "trace"}}}}; // missing dim
    RunOptions opts;
    opts.out_dir = std::filesystem::temp_directory_path() / "fstar_test_cfg";
    try {
        run_check_product(bad, opts);
        FAIL("expected ConfigError");
    } catch (const ConfigError &e) {
        CHECK(e.pointer == "/F/dim");
    }
    json bad2 = {{"id", "x"}, {"F", {{"kind", "nope"}, {"dim", 2}}}};
    try {
        run_check_product(bad2, opts);
        FAIL("expected ConfigError");
    } catch (const ConfigError &e) {
        CHECK(e.pointer == "/F/kind");
    }
}

TEST_CASE("example8 scenario runs and is byte-deterministic") {
    json cfg = {{"id", "ex8_unit"},
                {"data", {{"formula", "quad8"}, {"lambda", 1.0}, {"mu", 1.0}, {"tau", 0.0}, {"a", 0.5}, {"b", 0.5}, {"kappa", 1.0}}},
                {"grid", {{"x", {{{"min", -0.7}, {"max", 0.7}, {"count", 41}}, {{"min", -0.7}, {"max", 0.7}, {"count", 41}}}}}}};
    RunOptions opts;
    opts.out_dir = std::filesystem::temp_directory_path() / "fstar_test_ex8_a";
    RunResult r1 = run_example8(cfg, opts);
    CHECK(r1.all_pass());

    RunOptions opts2 = opts;
    opts2.out_dir = std::filesystem::temp_directory_path() / "fstar_test_ex8_b";
    RunResult r2 = run_example8(cfg, opts2);
    CHECK(slurp(opts.out_dir / "ex8_unit_bk.csv") == slurp(opts2.out_dir / "ex8_unit_bk.csv"));
    CHECK(r1.summary(false).dump() == r2.summary(false).dump());
}

TEST_CASE("quadratic suite members satisfy the schur margin") {
    for (const QuadraticSuiteEntry &e : quadratic_suite(10, 777)) {
        CHECK(e.schur_margin >= 0.025);
        CHECK(e.hessian(2, 2) == doctest::Approx(1.0));
    }
    // Deterministic in the seed.
    auto a = quadratic_suite(5, 42), b = quadratic_suite(5, 42);
    for (size_t i = 0; i < a.size(); ++i) CHECK((a[i].hessian - b[i].hessian).max_abs() == 0.0);
}

TEST_CASE("gridfn csv emission round trips through the reader") {
    GridFn g({Axis{0.0, 1.0, 4}, Axis{-1.0, 1.0, 3}});
    for (std::int64_t f = 0; f < g.size(); ++f) g[f] = 0.1 * static_cast<double>(f) - 0.4;
    g[5] = kInf;
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "fstar_test_csv";
    std::filesystem::path p = emit_table(g, dir / "t.csv", "csv");
    std::ifstream is(p);
    GridFn back = GridFn::read_csv(is);
    for (std::int64_t f = 0; f < g.size(); ++f) CHECK(back[f] == g[f]);
}

TEST_CASE("props suites pass") {
    RunOptions opts;
    opts.out_dir = std::filesystem::temp_directory_path() / "fstar_test_props";
    json leg = {{"id", "props_leg"}, {"suite", "legendre"}, {"count", 4}, {"seed", 99}};
    CHECK(run_props(leg, opts).all_pass());
    json str = {{"id", "props_str"}, {"suite", "structural"}, {"count", 8}, {"seed", 99}};
    CHECK(run_props(str, opts).all_pass());
}
