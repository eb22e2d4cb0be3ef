#include "fstar/prekopa.hpp"

#include "fstar/scenario.hpp"
#include "fstar/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace fstar;

namespace {

GridFn build_psi(const QuadraticSection &q, const std::vector<Axis> &xa, const Axis &ya) {
    std::vector<Axis> joint = xa;
    joint.push_back(ya);
    GridFn g(joint);
    g.set_split(2);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> z = g.coords(g.multi_index(f));
        g[f] = q.psi(z[0], z[1], z[2]);
    }
    return g;
}

} // namespace

TEST_CASE("gaussian marginal") {
    // psi = x^2 + y^2 on a wide fiber grid: phi(x) = x^2 - log sqrt(pi).
    std::vector<Axis> joint = {Axis{-1.0, 1.0, 21}, Axis{-8.0, 8.0, 513}};
    GridFn psi(joint);
    psi.set_split(1);
    for (std::int64_t f = 0; f < psi.size(); ++f) {
        std::vector<double> z = psi.coords(psi.multi_index(f));
        psi[f] = z[0] * z[0] + z[1] * z[1];
    }
    MarginalResult mr = marginal(psi);
    CHECK(mr.tail_warnings == 0);
    for (int i = 0; i < 21; ++i) {
        double x = mr.phi.axis(0).coord(i);
        CHECK(std::abs(mr.phi[i] - (x * x - 0.5 * std::log(M_PI))) <= 1e-6);
    }
    // Constant shift moves the marginal exactly.
    GridFn shifted = psi;
    for (std::int64_t f = 0; f < shifted.size(); ++f) shifted[f] += 2.5;
    MarginalResult ms = marginal(shifted);
    for (int i = 0; i < 21; ++i) CHECK(ms.phi[i] == doctest::Approx(mr.phi[i] + 2.5).epsilon(1e-12));
}

TEST_CASE("marginal of an indicator family is -log volume") {
    // psi = chi_{[0, 1+x]}: phi(x) = -log(1+x); endpoints on nodes.
    std::vector<Axis> joint = {Axis{0.0, 1.0, 5}, Axis{-1.0, 3.0, 65}};
    GridFn psi(joint, kInf);
    psi.set_split(1);
    for (std::int64_t f = 0; f < psi.size(); ++f) {
        std::vector<double> z = psi.coords(psi.multi_index(f));
        if (z[1] >= 0.0 - 1e-12 && z[1] <= 1.0 + z[0] + 1e-12) psi[f] = 0.0;
    }
    MarginalResult mr = marginal(psi);
    for (int i = 0; i < 5; ++i) {
        double x = mr.phi.axis(0).coord(i);
        // Trapezoid sees the node-aligned indicator with half-weight ends.
        CHECK(std::abs(mr.phi[i] + std::log(1.0 + x)) <= joint[1].step() / (1.0 + x) + 1e-12);
    }
    // All-infinite fiber: phi = +inf.
    GridFn dead(joint, kInf);
    dead.set_split(1);
    MarginalResult md = marginal(dead);
    CHECK(md.phi[0] == kInf);
}

TEST_CASE("tail warning on truncated fibers") {
    std::vector<Axis> joint = {Axis{0.0, 1.0, 3}, Axis{-1.0, 1.0, 33}};
    GridFn slow(joint);
    slow.set_split(1);
    for (std::int64_t f = 0; f < slow.size(); ++f) {
        std::vector<double> z = slow.coords(slow.multi_index(f));
        slow[f] = z[1] * z[1]; // edge value 1 < min + 5
    }
    CHECK(marginal(slow).tail_warnings == 3);
}

TEST_CASE("section volumes of the section-8 family") {
    QuadraticSection base{1.0, 0.0, 1.0, 0.0, 0.0, 1.0};
    GridFn bk = section_volume_quadratic(base, {Axis{-0.1, 0.1, 3}, Axis{-0.1, 0.1, 3}});
    // At the origin W = kappa = 1 and the section is [-1, 1]: B_K = -log 2.
    CHECK(bk.at({1, 1}) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

    QuadraticSection gen{1.0, 0.3, 0.8, 0.5, 0.4, 1.3};
    std::vector<Axis> xa = {Axis{-0.6, 0.6, 21}, Axis{-0.6, 0.6, 21}};
    GridFn bg = section_volume_quadratic(gen, xa);
    GridFn xt(xa);
    for (std::int64_t f = 0; f < bg.size(); ++f) {
        std::vector<double> x = xt.coords(xt.multi_index(f));
        double W = gen.w(x[0], x[1]);
        if (W > 0.05)
            CHECK(std::abs(bg[f] - (-std::log(2.0) - 0.5 * std::log(W))) <= 1e-6);
        else if (W <= 0.0)
            CHECK(bg[f] == kInf);
    }

    // Scaling the fiber shifts B_K by -log s exactly in closed-form mode:
    // realized by scaling kappa and the couplings consistently is nontrivial,
    // so check the 1-D measure identity on the grid route instead.
    GridFn rho = build_psi(gen, xa, Axis{-6.0, 6.0, 401});
    GridFn bk_grid = section_volume(rho, gen.kappa);
    for (std::int64_t f = 0; f < bk_grid.size(); ++f) {
        if (bk_grid[f] == kInf || bg[f] == kInf) continue;
        CHECK(std::abs(bk_grid[f] - bg[f]) <= 2e-3);
    }

    // Nonconvex fiber detection.
    std::vector<Axis> joint = {Axis{0.0, 1.0, 3}, Axis{-1.0, 1.0, 21}};
    GridFn bad(joint);
    bad.set_split(1);
    for (std::int64_t f = 0; f < bad.size(); ++f) {
        std::vector<double> z = bad.coords(bad.multi_index(f));
        bad[f] = -z[1] * z[1];
    }
    CHECK_THROWS(section_volume(bad, 0.5));
}

TEST_CASE("transport map of a shifted gaussian is a translation") {
    std::vector<Axis> joint = {Axis{-1.0, 1.0, 21}, Axis{-9.0, 9.0, 721}};
    GridFn psi(joint);
    psi.set_split(1);
    for (std::int64_t f = 0; f < psi.size(); ++f) {
        std::vector<double> z = psi.coords(psi.multi_index(f));
        psi[f] = (z[1] - z[0]) * (z[1] - z[0]);
    }
    std::vector<int> x0 = {10}, x1 = {15}; // x = 0 and x = 0.5
    std::vector<double> T = transport_map(psi, x0, x1);
    const Axis &ya = joint[1];
    for (int j = ya.count / 4; j < 3 * ya.count / 4; ++j)
        CHECK(std::abs(T[static_cast<size_t>(j)] - (ya.coord(j) + 0.5)) <= 1e-4);

    std::vector<double> Tid = transport_map(psi, x0, x0);
    for (int j = 0; j < ya.count; ++j) CHECK(Tid[static_cast<size_t>(j)] == ya.coord(j));
    for (int j = 0; j + 1 < ya.count; ++j) CHECK(T[static_cast<size_t>(j + 1)] >= T[static_cast<size_t>(j)] - 1e-15);
}

TEST_CASE("transport velocity closed forms") {
    std::vector<Axis> joint = {Axis{-1.0, 1.0, 201}, Axis{-9.0, 9.0, 721}};
    // psi = (y - x)^2 + x^2: Gamma == 1.
    GridFn psi(joint);
    psi.set_split(1);
    for (std::int64_t f = 0; f < psi.size(); ++f) {
        std::vector<double> z = psi.coords(psi.multi_index(f));
        psi[f] = (z[1] - z[0]) * (z[1] - z[0]) + z[0] * z[0];
    }
    TransportVelocity tv = transport_velocity(psi, {100});
    CHECK_FALSE(tv.one_sided_dx);
    const Axis &ya = joint[1];
    for (int j = ya.count / 4; j < 3 * ya.count / 4; ++j)
        CHECK(std::abs(tv.gamma[0][static_cast<size_t>(j)] - 1.0) <= 1e-3);

    // x-independent psi: Gamma == 0.
    GridFn flat(joint);
    flat.set_split(1);
    for (std::int64_t f = 0; f < flat.size(); ++f) {
        std::vector<double> z = flat.coords(flat.multi_index(f));
        flat[f] = z[1] * z[1];
    }
    TransportVelocity t0 = transport_velocity(flat, {100});
    for (int j = 0; j < ya.count; ++j) CHECK(std::abs(t0.gamma[0][static_cast<size_t>(j)]) <= 1e-12);

    // Gamma agrees with the x-derivative of the transport map.
    GridFn gen(joint);
    gen.set_split(1);
    for (std::int64_t f = 0; f < gen.size(); ++f) {
        std::vector<double> z = gen.coords(gen.multi_index(f));
        gen[f] = (z[1] - std::sin(z[0])) * (z[1] - std::sin(z[0])) + 0.5 * z[0] * z[0];
    }
    TransportVelocity tg = transport_velocity(gen, {100});
    std::vector<double> Tp = transport_map(gen, {100}, {101});
    std::vector<double> Tm = transport_map(gen, {100}, {99});
    double hx = joint[0].step();
    for (int j = ya.count / 4; j < 3 * ya.count / 4; ++j) {
        double dT = (Tp[static_cast<size_t>(j)] - Tm[static_cast<size_t>(j)]) / (2.0 * hx);
        CHECK(std::abs(tg.gamma[0][static_cast<size_t>(j)] - dT) <= 1e-3);
    }
}

TEST_CASE("hessian decomposition on closed forms") {
    // psi = (y - sin x)^2 + x^2: marginal is x^2 + const, Hess phi = 2.
    std::vector<Axis> joint = {Axis{-1.0, 1.0, 201}, Axis{-9.0, 9.0, 601}};
    GridFn psi(joint);
    psi.set_split(1);
    for (std::int64_t f = 0; f < psi.size(); ++f) {
        std::vector<double> z = psi.coords(psi.multi_index(f));
        psi[f] = (z[1] - std::sin(z[0])) * (z[1] - std::sin(z[0])) + z[0] * z[0];
    }
    HessianDecomposition hd = hessian_decomposition_residual(psi, {100});
    CHECK_FALSE(hd.growth_warning);
    CHECK(std::abs(hd.lhs(0, 0) - 2.0) <= 1e-3);
    CHECK(hd.residual <= 1e-3);

    // Quadratic of the section-8 family: Hess phi = 2 (B - C C^T), both sides
    // within 1e-4 and trace nonnegative.
    QuadraticSection q{1.0, 0.2, 0.9, 0.5, 0.4, 1.0};
    std::vector<Axis> xa = {Axis{-0.5, 0.5, 41}, Axis{-0.5, 0.5, 41}};
    GridFn qpsi = build_psi(q, xa, Axis{-10.0, 10.0, 801});
    HessianDecomposition hq = hessian_decomposition_residual(qpsi, {20, 20});
    SymMat expected(2);
    expected.set(0, 0, 2.0 * (q.lambda - q.a * q.a));
    expected.set(1, 1, 2.0 * (q.mu - q.b * q.b));
    expected.set(0, 1, 2.0 * (q.tau - q.a * q.b));
    CHECK((hq.lhs - expected).max_abs() <= 1e-4);
    CHECK(hq.residual <= 1e-4);
    CHECK(hq.lhs.trace() >= 0.0);
    CHECK(hq.rhs.trace() >= 0.0);

    // x-independent psi: both sides vanish.
    GridFn flat(joint);
    flat.set_split(1);
    for (std::int64_t f = 0; f < flat.size(); ++f) {
        std::vector<double> z = flat.coords(flat.multi_index(f));
        flat[f] = z[1] * z[1];
    }
    HessianDecomposition hf = hessian_decomposition_residual(flat, {100});
    CHECK(hf.lhs.max_abs() <= 1e-9);
    CHECK(hf.rhs.max_abs() <= 1e-9);
}

TEST_CASE("minimum principle on quadratics") {
    QuadraticSection q{1.0, 0.0, 1.0, 0.6, 0.5, 1.0};
    std::vector<Axis> xa = {Axis{-1.0, 1.0, 21}, Axis{-1.0, 1.0, 21}};
    GridFn psi = build_psi(q, xa, Axis{-6.0, 6.0, 641});
    MinPrincipleResult mp = min_principle(psi);
    // inf_y psi = x^T (B - C C^T) x with the section-8 coefficients.
    GridFn xt(xa);
    for (std::int64_t f = 0; f < mp.inf_y.size(); ++f) {
        std::vector<double> x = xt.coords(xt.multi_index(f));
        double expected = (q.lambda - q.a * q.a) * x[0] * x[0] + (q.mu - q.b * q.b) * x[1] * x[1] +
                          2.0 * (q.tau - q.a * q.b) * x[0] * x[1];
        CHECK(std::abs(mp.inf_y[f] - expected) <= 2e-4); // fiber-grid quantization of the argmin
    }
    CHECK(is_F_subharmonic(mp.inf_y, DirichletSet::trace_cone(2), 1e-5).pass);
    for (size_t k = 0; k + 1 < mp.sup_deviation.size(); ++k)
        CHECK(mp.sup_deviation[k + 1] <= mp.sup_deviation[k] + 1e-12);

    // y-independent psi: the infimum is psi itself.
    std::vector<Axis> joint = xa;
    joint.push_back(Axis{-1.0, 1.0, 9});
    GridFn flat(joint);
    flat.set_split(2);
    for (std::int64_t f = 0; f < flat.size(); ++f) {
        std::vector<double> z = flat.coords(flat.multi_index(f));
        flat[f] = z[0] + 2.0 * z[1];
    }
    MinPrincipleResult mf = min_principle(flat, {1.0, 4.0});
    for (std::int64_t f = 0; f < mf.inf_y.size(); ++f) {
        std::vector<double> x = xt.coords(xt.multi_index(f));
        CHECK(mf.inf_y[f] == doctest::Approx(x[0] + 2.0 * x[1]));
    }
}

TEST_CASE("prekopa property: product members have subharmonic marginals") {
    DirichletSet trace = DirichletSet::trace_cone(2);
    DirichletSet pos = DirichletSet::pos_cone(2);
    GammaSamples gs;
    std::vector<Axis> xa = {Axis{-1.0, 1.0, 17}, Axis{-1.0, 1.0, 17}};
    Axis ya{-7.0, 7.0, 257};
    for (const QuadraticSuiteEntry &e : quadratic_suite(6, 424242)) {
        GridFn psi = quadratic_gridfn(e.hessian, xa, ya);
        REQUIRE(is_product_subharmonic(psi, trace, gs, 1e-6).pass);
        MarginalResult mr = marginal(psi);
        CHECK(is_F_subharmonic(mr.phi, trace, 1e-5).pass);
        CHECK(is_F_subharmonic(mr.phi, pos, 1e-5).pass);
    }
}

TEST_CASE("brunn-minkowski variants") {
    // Theorem-II shape: F a non-cone convex Dirichlet set (tr >= -1), rho
    // product-subharmonic for the ray set, v F-subharmonic: v + B_K passes.
    SymMat I2 = SymMat::identity(2);
    DirichletSet F = DirichletSet::half_spaces(2, {HalfSpace{I2, -1.0}});
    QuadraticSection q{1.0, 0.0, 1.0, 0.7, 0.5, 1.0};
    std::vector<Axis> xa = {Axis{-0.4, 0.4, 33}, Axis{-0.4, 0.4, 33}};
    GridFn bk = section_volume_quadratic(q, xa);
    GridFn v(xa);
    for (std::int64_t f = 0; f < v.size(); ++f) {
        std::vector<double> x = v.coords(v.multi_index(f));
        v[f] = -0.2 * (x[0] * x[0] + x[1] * x[1]) + 0.3 * x[0]; // Hessian trace -0.8, inside F
    }
    REQUIRE(is_F_subharmonic(v, F, 1e-9).pass);
    GridFn sum(xa);
    for (std::int64_t f = 0; f < sum.size(); ++f) sum[f] = v[f] + bk[f];
    CHECK(is_F_subharmonic(sum, F, 1e-6).pass);
}
