#include "fstar/verify.hpp"

#include "fstar/harmonic.hpp"
#include "fstar/prekopa.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fstar;

namespace {

GridFn quadratic_form(const SymMat &Q, const std::vector<Axis> &axes) {
    GridFn g(axes);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> x = g.coords(g.multi_index(f));
        double v = 0.0;
        for (int i = 0; i < Q.dim(); ++i)
            for (int j = 0; j < Q.dim(); ++j) v += x[static_cast<size_t>(i)] * Q(i, j) * x[static_cast<size_t>(j)];
        g[f] = v;
    }
    return g;
}

} // namespace

TEST_CASE("fd_hessian is exact on quadratics") {
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        SymMat q(2);
        q.set(0, 0, unit(rng));
        q.set(1, 1, unit(rng));
        q.set(0, 1, unit(rng));
        GridFn f = quadratic_form(q, {Axis{-1.0, 1.0, 21}, Axis{-1.0, 1.0, 17}});
        SymMat h = fd_hessian(f, {10, 8});
        CHECK((h - 2.0 * q).max_abs() <= 1e-8);
    }
    GridFn f = quadratic_form(SymMat::identity(2), {Axis{-1.0, 1.0, 9}, Axis{-1.0, 1.0, 9}});
    CHECK(fd_hessian(f, {4, 4})(0, 0) == doctest::Approx(2.0));
    SymMat cross(2);
    cross.set(0, 1, 0.5);
    GridFn xy = quadratic_form(cross, {Axis{-1.0, 1.0, 9}, Axis{-1.0, 1.0, 9}});
    CHECK(fd_hessian(xy, {4, 4})(0, 1) == doctest::Approx(1.0));
    CHECK_THROWS(fd_hessian(f, {0, 4}));
}

TEST_CASE("is_F_subharmonic on harmonic and anti-subharmonic data") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 128);
    std::vector<double> g(128);
    for (int i = 0; i < 128; ++i) g[static_cast<size_t>(i)] = std::cos(2.0 * disk.boundary_angle(i));
    SolveOptions so;
    so.grid_count = 65;
    GridFn u = solve_dirichlet(disk, g, so);
    CheckReport rep = is_F_subharmonic(u, DirichletSet::trace_cone(2), 1e-4);
    CHECK(rep.pass);

    SymMat neg = -SymMat::identity(2);
    GridFn f = quadratic_form(neg, {Axis{-1.0, 1.0, 33}, Axis{-1.0, 1.0, 33}});
    CheckReport bad = is_F_subharmonic(f, DirichletSet::trace_cone(2), 1e-9);
    CHECK_FALSE(bad.pass);
    CHECK(bad.breakdown[0].margin == doctest::Approx(-4.0).epsilon(1e-6));
}

TEST_CASE("maximum property at the discrete level") {
    std::mt19937_64 rng(402);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DirichletSet F = DirichletSet::trace_cone(2);
    std::vector<Axis> axes = {Axis{-1.0, 1.0, 25}, Axis{-1.0, 1.0, 25}};
    for (int t = 0; t < 25; ++t) {
        SymMat qa(2), qb(2);
        double a1 = unit(rng) + 1.2, a2 = unit(rng);
        qa.set(0, 0, a1);
        qa.set(1, 1, -a1 + std::abs(unit(rng)));
        qa.set(0, 1, unit(rng));
        double b1 = unit(rng) + 1.2;
        qb.set(0, 0, b1);
        qb.set(1, 1, -b1 + std::abs(unit(rng)));
        qb.set(0, 1, unit(rng));
        (void)a2;
        GridFn fa = quadratic_form(qa, axes), fb = quadratic_form(qb, axes);
        REQUIRE(is_F_subharmonic(fa, F, 1e-9).pass);
        REQUIRE(is_F_subharmonic(fb, F, 1e-9).pass);
        GridFn mx(axes);
        for (std::int64_t f = 0; f < mx.size(); ++f) mx[f] = std::max(fa[f], fb[f]);
        CHECK(is_F_subharmonic(mx, F, 1e-9).pass);
    }
}

TEST_CASE("is_convex handles kinks, concavity, and indicators") {
    GridFn ab({Axis{-2.0, 2.0, 41}});
    for (int i = 0; i < 41; ++i) ab[i] = std::abs(ab.axis(0).coord(i));
    CHECK(is_convex(ab).pass);

    GridFn neg({Axis{-2.0, 2.0, 41}});
    for (int i = 0; i < 41; ++i) neg[i] = -ab[i] * ab[i];
    CHECK_FALSE(is_convex(neg).pass);

    GridFn chi({Axis{-2.0, 2.0, 41}}, kInf);
    for (int i = 12; i <= 28; ++i) chi[i] = 0.0;
    CHECK(is_convex(chi).pass);

    GridFn hole = chi;
    hole[20] = kInf; // finite region split in two
    CHECK_FALSE(is_convex(hole).pass);
}

TEST_CASE("product subharmonicity of the section-8 quadratics") {
    QuadraticSection good{1.0, 0.0, 1.0, 0.5, 0.5, 1.0}; // deficit 0.5... lambda+mu-a^2-b^2 = 1.5
    QuadraticSection tight{1.0, 0.0, 1.0, 1.0, 1.0, 1.0};  // deficit 0
    QuadraticSection bad{1.0, 0.0, 1.0, 1.2, 1.0, 1.0};    // deficit -0.44
    std::vector<Axis> xa = {Axis{-1.0, 1.0, 17}, Axis{-1.0, 1.0, 17}};
    Axis ya{-4.0, 4.0, 33};
    DirichletSet F = DirichletSet::trace_cone(2);
    GammaSamples gs;

    auto build = [&](const QuadraticSection &q) {
        std::vector<Axis> joint = xa;
        joint.push_back(ya);
        GridFn g(joint);
        g.set_split(2);
        for (std::int64_t f = 0; f < g.size(); ++f) {
            std::vector<double> z = g.coords(g.multi_index(f));
            g[f] = q.psi(z[0], z[1], z[2]);
        }
        return g;
    };

    CHECK(is_product_subharmonic(build(good), F, gs, 1e-6).pass);
    CHECK(is_product_subharmonic(build(tight), F, gs, 1e-6).pass);
    CheckReport rep = is_product_subharmonic(build(bad), F, gs, 1e-6);
    CHECK_FALSE(rep.pass);

    // convex-in-y plus harmonic-in-x passes for the trace cone.
    std::vector<Axis> joint = xa;
    joint.push_back(ya);
    GridFn mixed(joint);
    mixed.set_split(2);
    for (std::int64_t f = 0; f < mixed.size(); ++f) {
        std::vector<double> z = mixed.coords(mixed.multi_index(f));
        mixed[f] = z[2] * z[2] + (z[0] * z[0] - z[1] * z[1]);
    }
    CHECK(is_product_subharmonic(mixed, F, gs, 1e-9).pass);
}

TEST_CASE("slice and full-hessian routes agree on smooth closed forms") {
    std::vector<Axis> xa = {Axis{-1.0, 1.0, 13}, Axis{-1.0, 1.0, 13}};
    Axis ya{-3.0, 3.0, 25};
    GammaSamples gs;
    DirichletSet F = DirichletSet::trace_cone(2);
    for (double a : {0.3, 0.9, 1.25}) {
        QuadraticSection q{1.0, 0.1, 1.0, a, 0.8, 1.0};
        std::vector<Axis> joint = xa;
        joint.push_back(ya);
        GridFn g(joint);
        g.set_split(2);
        for (std::int64_t f = 0; f < g.size(); ++f) {
            std::vector<double> z = g.coords(g.multi_index(f));
            g[f] = q.psi(z[0], z[1], z[2]);
        }
        CheckReport rep = is_product_subharmonic(g, F, gs, 1e-6);
        double deficit = 2.0 * (q.lambda + q.mu - q.a * q.a - q.b * q.b);
        bool slices_pass = rep.breakdown[1].margin >= -1e-6 * rep.breakdown[1].scale;
        bool full_pass = rep.breakdown[2].margin >= -1e-6 * rep.breakdown[2].scale;
        CHECK(slices_pass == (deficit >= -1e-9));
        CHECK(full_pass == (deficit >= -1e-9));
        if (deficit < 0) CHECK(rep.breakdown[2].margin == doctest::Approx(deficit).epsilon(1e-6));
    }
}

TEST_CASE("uniform perturbation moves margins by a bounded amount") {
    std::vector<Axis> axes = {Axis{-1.0, 1.0, 21}, Axis{-1.0, 1.0, 21}};
    SymMat q = SymMat::identity(2);
    GridFn f = quadratic_form(q, axes);
    DirichletSet F = DirichletSet::trace_cone(2);
    double m0 = is_F_subharmonic(f, F, 1e-9).breakdown[0].margin;
    std::mt19937_64 rng(403);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double delta = 1e-4;
    GridFn g = f;
    for (std::int64_t k = 0; k < g.size(); ++k) g[k] += delta * unit(rng);
    double m1 = is_F_subharmonic(g, F, 1e-9).breakdown[0].margin;
    double h2 = axes[0].step() * axes[0].step();
    CHECK(std::abs(m1 - m0) <= 8.0 * delta / h2);
}

TEST_CASE("decreasing sequences keep the margin") {
    std::vector<Axis> axes = {Axis{-1.0, 1.0, 21}, Axis{-1.0, 1.0, 21}};
    GridFn f = quadratic_form(SymMat::identity(2), axes);
    DirichletSet F = DirichletSet::trace_cone(2);
    for (int k = 4; k >= 1; --k) {
        GridFn fk = f;
        for (std::int64_t i = 0; i < fk.size(); ++i) fk[i] += 1.0 / k;
        CHECK(is_F_subharmonic(fk, F, 1e-9).pass);
    }
    CHECK(is_F_subharmonic(f, F, 1e-9).pass);
}

TEST_CASE("mollified check approximates the viscosity reading") {
    // A function with a non-smooth ridge: max of two harmonics stays
    // trace-subharmonic after smoothing.
    std::vector<Axis> axes = {Axis{-1.0, 1.0, 81}, Axis{-1.0, 1.0, 81}};
    GridFn f(axes);
    for (std::int64_t k = 0; k < f.size(); ++k) {
        std::vector<double> x = f.coords(f.multi_index(k));
        f[k] = std::max(x[0], -x[0]) + 0.1 * (x[0] * x[0] - x[1] * x[1]);
    }
    CheckReport rep = is_F_subharmonic(f, DirichletSet::trace_cone(2), 1e-6, 0.1);
    CHECK(rep.pass);
}
