#include "fstar/blockprod.hpp"

#include "fstar/prekopa.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fstar;

namespace {

BlockSym example8_block(double lambda, double mu, double tau, double a, double b) {
    SymMat q(3);
    q.set(0, 0, lambda);
    q.set(1, 1, mu);
    q.set(2, 2, 1.0);
    q.set(0, 1, tau);
    q.set(0, 2, a);
    q.set(1, 2, b);
    return BlockSym(2, 1, q);
}

SymMat random_sym(std::mt19937_64 &rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> unit(-scale, scale);
    SymMat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a.set(i, j, unit(rng));
    return a;
}

} // namespace

TEST_CASE("graph restriction basics") {
    BlockSym id(2, 1, SymMat::identity(3));
    Mat zero(1, 2);
    SymMat b = restrict_graph(id, zero);
    CHECK(b(0, 0) == doctest::Approx(1.0));
    CHECK(b(0, 1) == doctest::Approx(0.0));

    Mat g(1, 2);
    g(0, 0) = 1.0;
    SymMat r = restrict_graph(id, g);
    CHECK(r(0, 0) == doctest::Approx(2.0));
    CHECK(r(1, 1) == doctest::Approx(1.0));
    CHECK(r(0, 1) == doctest::Approx(0.0));

    CHECK_THROWS(restrict_graph(id, Mat(2, 2)));
}

TEST_CASE("graph restriction matches the dense congruence oracle on the section-8 matrix") {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    BlockSym a = example8_block(1.3, 0.8, 0.2, -0.4, 0.9);
    for (int t = 0; t < 100; ++t) {
        Mat g(1, 2);
        g(0, 0) = unit(rng);
        g(0, 1) = unit(rng);
        SymMat fast = restrict_graph(a, g);
        SymMat dense = reference::congruence_product(a, g);
        CHECK((fast - dense).max_abs() <= 1e-12 * std::max(1.0, dense.max_abs()));
    }
}

TEST_CASE("fiber projection") {
    CHECK(project_fiber(BlockSym(2, 2, SymMat::identity(4)))(1, 1) == doctest::Approx(1.0));
    CHECK(project_fiber(example8_block(1, 1, 0, 1, 1))(0, 0) == doctest::Approx(1.0));
    CHECK(project_fiber(BlockSym(1, 1, SymMat(2)))(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("pseudo-inverse") {
    SymMat d = SymMat::diag({2.0, 0.0});
    SymMat p = pseudo_inverse(d);
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(1, 1) == doctest::Approx(0.0));

    CHECK((pseudo_inverse(SymMat::identity(3)) - SymMat::identity(3)).max_abs() <= 1e-12);

    // Rank-1 case P = v v^T with |v| = 2: P^+ = v v^T / 16, checked through
    // the defining identity D D^+ D = D.
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> v = {unit(rng), unit(rng), unit(rng)};
    double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double &x : v) x *= 2.0 / norm;
    SymMat P = SymMat::outer(v);
    SymMat Pp = pseudo_inverse(P);
    CHECK((Pp - P * (1.0 / 16.0)).max_abs() <= 1e-10);
    // D D^+ D = D via dense products.
    Mat Dm(3, 3), Dpm(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Dm(i, j) = P(i, j);
            Dpm(i, j) = Pp(i, j);
        }
    Mat DDD = matmul(Dm, matmul(Dpm, Dm));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(DDD(i, j) - P(i, j)) <= 1e-10);
}

TEST_CASE("null spaces of the builtin cones are trivial") {
    CHECK(null_space(DirichletSet::trace_cone(2), 1).basis.empty());
    CHECK(null_space(DirichletSet::pos_cone(3), 2).basis.empty());
    CHECK_THROWS(null_space(DirichletSet::eigen_cone(2, {EigenFunctional{{1.0, 1.0}, 0.0}}), 1));
}

TEST_CASE("half-space null space: trace on the first block") {
    // F = { tr(U B) >= 0 } with U = diag(1, 0) on Sym^2(R^2): couplings with
    // U C = 0 are spanned by (0, 1)^T.
    SymMat u(2);
    u.set(0, 0, 1.0);
    DirichletSet F = DirichletSet::half_spaces(2, {HalfSpace{u, 0.0}});
    NullSpace ns = null_space(F, 1);
    CHECK(ns.generator_based);
    REQUIRE(ns.basis.size() == 1);
    CHECK(std::abs(ns.basis[0](0, 0)) <= 1e-12);
    CHECK(std::abs(std::abs(ns.basis[0](1, 0)) - 1.0) <= 1e-12);

    // Oracle: C along the kernel keeps the product membership even at huge
    // slopes, C off the kernel does not.
    SymMat a(3);
    a.set(0, 0, 1.0);
    a.set(2, 2, 0.0);
    a.set(1, 2, 1.0); // C = (0,1)^T, D = 0
    BlockSym in_kernel(2, 1, a);
    ProductReport pr = product_contains(F, in_kernel, 1e-9);
    CHECK(pr.region != Region::Exterior);

    SymMat bmat(3);
    bmat.set(0, 0, 1.0);
    bmat.set(0, 2, 1.0); // C = (1,0)^T hits the generator
    BlockSym off_kernel(2, 1, bmat);
    CHECK(product_contains(F, off_kernel, 1e-9).region == Region::Exterior);
    for (double s : {10.0, 1000.0}) {
        Mat g(1, 2);
        g(0, 0) = -s;
        CHECK(membership_margin(F, restrict_graph(off_kernel, g)) < 0.0);
    }
}

TEST_CASE("product membership on the section-8 family") {
    DirichletSet trace = DirichletSet::trace_cone(2);
    // lambda + mu - a^2 - b^2 = 0: boundary.
    CHECK(product_contains(trace, example8_block(1, 1, 0, 1, 1), 1e-9).region == Region::Boundary);
    CHECK(product_contains(trace, BlockSym(2, 1, SymMat::identity(3)), 1e-9).region == Region::Interior);

    // D = 0 with C nonzero and trivial null space: exterior, and the sampled
    // oracle sees the escape at growing slopes.
    SymMat a(3);
    a.set(0, 0, 5.0);
    a.set(1, 1, 5.0);
    a.set(0, 2, 1.0); // C = (1,0)^T, D = 0
    BlockSym degenerate(2, 1, a);
    CHECK(product_contains(trace, degenerate, 1e-9).region == Region::Exterior);
    SampledProductReport sr = product_contains_sampled(trace, degenerate, 100, 1000.0, 303, 1e-9);
    CHECK(sr.region == Region::Exterior);
}

TEST_CASE("sampled oracle detects the schur deficit of the section-8 example") {
    DirichletSet trace = DirichletSet::trace_cone(2);
    BlockSym bad = example8_block(1, 1, 0, 1.2, 1.0); // deficit -0.44
    SampledProductReport sr = product_contains_sampled(trace, bad, 200, 1000.0, 304, 1e-9);
    CHECK(sr.region == Region::Exterior);
    CHECK(product_contains(trace, bad, 1e-9).schur_margin == doctest::Approx(-0.44).epsilon(1e-9));
    CHECK(product_contains_sampled(trace, BlockSym(2, 1, SymMat::identity(3)), 50, 100.0, 305, 1e-9).region ==
          Region::Interior);
}

TEST_CASE("product_contains requires a convex cone flag") {
    // EigenCone route is unsupported inside the characterization.
    DirichletSet eigen = DirichletSet::eigen_cone(2, {EigenFunctional{{1.0, 1.0}, 0.0}});
    CHECK_THROWS(product_contains(eigen, BlockSym(2, 1, SymMat::identity(3)), 0.0));
}

TEST_CASE("congruence keeps positive semidefiniteness") {
    std::mt19937_64 rng(205);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + t % 3, m = 1 + (t / 3) % 2;
        SymMat g = random_sym(rng, n + m);
        SymMat p(n + m);
        for (int i = 0; i < n + m; ++i)
            for (int j = i; j < n + m; ++j) {
                double s = 0.0;
                for (int k = 0; k < n + m; ++k) s += g(i, k) * g(j, k);
                p.set(i, j, s);
            }
        Mat gamma(m, n);
        for (double &v : gamma.a) v = 4.0 * unit(rng);
        CHECK(restrict_graph(BlockSym(n, m, p), gamma).min_eigenvalue() >= -1e-9 * std::max(1.0, p.max_abs()));
    }
}

TEST_CASE("monotonicity: adding psd never exits the product cone") {
    std::mt19937_64 rng(206);
    DirichletSet trace = DirichletSet::trace_cone(2);
    int done = 0;
    while (done < 40) {
        SymMat a = random_sym(rng, 3, 1.5);
        BlockSym A(2, 1, a);
        ProductReport pr = product_contains(trace, A, 1e-9);
        if (pr.region == Region::Exterior) continue;
        SymMat g = random_sym(rng, 3);
        SymMat p(3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += g(i, k) * g(j, k);
                p.set(i, j, s);
            }
        CHECK(product_contains(trace, BlockSym(2, 1, a + p), 1e-6).region != Region::Exterior);
        ++done;
    }
}

TEST_CASE("trace cone m=1 membership is the explicit schur trace inequality") {
    DirichletSet trace = DirichletSet::trace_cone(2);
    std::mt19937_64 rng(207);
    std::uniform_real_distribution<double> unit(-1.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        double lambda = unit(rng) + 1.6, mu = unit(rng) + 1.6, tau = unit(rng), a = unit(rng), b = unit(rng);
        BlockSym A = example8_block(lambda, mu, tau, a, b);
        double margin = lambda + mu - a * a - b * b;
        if (std::abs(margin) < 0.05) continue; // the lattice oracle resolves deficits beyond its cell size
        CHECK((product_contains(trace, A, 1e-9).region != Region::Exterior) == (margin > 0.0));
        // Independent slope-sampling oracle through the dense congruence.
        CHECK(reference::graph_sampling_member_trace(A, 150, 1000.0, 208 + static_cast<std::uint64_t>(t), 1e-9) ==
              (margin > 0.0));
    }
}
