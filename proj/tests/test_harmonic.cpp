#include "fstar/harmonic.hpp"

#include <doctest.h>

#include <cmath>

using namespace fstar;

TEST_CASE("interval harmonic measure is the endpoint pair") {
    Domain iv = Domain::interval(0.0, 1.0);
    for (double t : {0.1, 0.4, 0.75}) {
        HarmonicMeasureWeights w = harmonic_measure(iv, {t});
        w.validate();
        CHECK(w.w[0] == doctest::Approx(1.0 - t));
        CHECK(w.w[1] == doctest::Approx(t));
    }
    CHECK_THROWS(harmonic_measure(iv, {1.5}));
}

TEST_CASE("disk harmonic measure: center is uniform, kernel value matches") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 256);
    HarmonicMeasureWeights w = harmonic_measure(disk, {0.0, 0.0});
    w.validate();
    for (int i = 0; i < 256; i += 31) CHECK(w.w[static_cast<size_t>(i)] == doctest::Approx(1.0 / 256).epsilon(1e-12));

    // Poisson kernel density at tau = (1,0) for x = (0.5, 0): 3 / (2 pi).
    HarmonicMeasureWeights wx = harmonic_measure(disk, {0.5, 0.0});
    wx.validate();
    double quad = 2.0 * M_PI / 256.0;
    CHECK(wx.w[0] / quad == doctest::Approx(3.0 / (2.0 * M_PI)).epsilon(1e-6));
}

TEST_CASE("grid-domain harmonic measure is gated and normalized") {
    // 7x7 square with a 5x5 interior: 20 boundary cells <= 64.
    int n = 7;
    std::vector<std::uint8_t> mask(static_cast<size_t>(n) * n, 0);
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j) mask[static_cast<size_t>(i) * n + j] = 1;
    Domain grid = Domain::grid(Axis{0, 1, n}, Axis{0, 1, n}, mask);
    CHECK(grid.boundary_count() == 20);
    HarmonicMeasureWeights w = harmonic_measure(grid, {0.5, 0.5});
    w.validate();

    // Large boundaries expose only integrate_boundary.
    int big = 41;
    std::vector<std::uint8_t> bigmask(static_cast<size_t>(big) * big, 0);
    for (int i = 1; i < big - 1; ++i)
        for (int j = 1; j < big - 1; ++j) bigmask[static_cast<size_t>(i) * big + j] = 1;
    Domain biggrid = Domain::grid(Axis{0, 1, big}, Axis{0, 1, big}, bigmask);
    CHECK_THROWS(harmonic_measure(biggrid, {0.5, 0.5}));
    std::vector<double> ones(static_cast<size_t>(biggrid.boundary_count()), 1.0);
    CHECK(integrate_boundary(biggrid, {0.5, 0.5}, ones) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("dirichlet solve: constants, linear interval, disk cosine") {
    Domain iv = Domain::interval(0.0, 1.0);
    SolveOptions so;
    so.grid_count = 11;
    GridFn lin = solve_dirichlet(iv, {0.0, 1.0}, so);
    for (int i = 0; i < 11; ++i) CHECK(lin[i] == doctest::Approx(i / 10.0));

    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 256);
    std::vector<double> g(256);
    for (int i = 0; i < 256; ++i) g[static_cast<size_t>(i)] = 1.7;
    SolveOptions dso;
    dso.grid_count = 33;
    GridFn cst = solve_dirichlet(disk, g, dso);
    double maxdev = 0.0;
    for (std::int64_t f = 0; f < cst.size(); ++f)
        if (std::isfinite(cst[f])) maxdev = std::max(maxdev, std::abs(cst[f] - 1.7));
    CHECK(maxdev <= 1e-8);

    // g = cos(theta): the harmonic extension is x1 = r cos(theta).
    for (int i = 0; i < 256; ++i) g[static_cast<size_t>(i)] = std::cos(disk.boundary_angle(i));
    SolveOptions fine;
    fine.grid_count = 129;
    GridFn u = solve_dirichlet(disk, g, fine);
    double err = 0.0;
    for (std::int64_t f = 0; f < u.size(); ++f) {
        if (!std::isfinite(u[f])) continue;
        std::vector<double> x = u.coords(u.multi_index(f));
        err = std::max(err, std::abs(u[f] - x[0]));
    }
    CHECK(err <= 1e-3);
    CHECK_THROWS(solve_dirichlet(disk, {1.0, 2.0}));
}

TEST_CASE("integrate_boundary quadrature") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 256);
    std::vector<double> ones(256, 1.0), cosg(256);
    for (int i = 0; i < 256; ++i) cosg[static_cast<size_t>(i)] = std::cos(disk.boundary_angle(i));
    CHECK(integrate_boundary(disk, {0.3, -0.2}, ones) == doctest::Approx(1.0).epsilon(1e-12));
    for (double r : {0.2, 0.5, 0.8})
        CHECK(std::abs(integrate_boundary(disk, {r, 0.0}, cosg) - r) <= 1e-6);

    Domain iv = Domain::interval(0.0, 1.0);
    for (double t : {0.25, 0.6}) {
        CHECK(integrate_boundary(iv, {t}, {3.0, 7.0}) == doctest::Approx((1.0 - t) * 3.0 + t * 7.0));
    }
}

TEST_CASE("monotonicity of the boundary integral") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 128);
    std::vector<double> g1(128), g2(128);
    for (int i = 0; i < 128; ++i) {
        g1[static_cast<size_t>(i)] = std::sin(disk.boundary_angle(i));
        g2[static_cast<size_t>(i)] = g1[static_cast<size_t>(i)] + 0.25 + 0.1 * std::cos(disk.boundary_angle(i));
    }
    for (double r : {0.0, 0.4, 0.7})
        CHECK(integrate_boundary(disk, {r, 0.1}, g1) <= integrate_boundary(disk, {r, 0.1}, g2));
}

TEST_CASE("disk boundary integral is harmonic in x") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 256);
    std::vector<double> g(256);
    for (int i = 0; i < 256; ++i) {
        double th = disk.boundary_angle(i);
        g[static_cast<size_t>(i)] = std::cos(2.0 * th) + 0.3 * std::sin(th);
    }
    double gn = 1.3;
    double h = 0.05;
    for (double cx : {-0.2, 0.1}) {
        for (double cy : {0.0, 0.3}) {
            double c = integrate_boundary(disk, {cx, cy}, g);
            double lap = integrate_boundary(disk, {cx + h, cy}, g) + integrate_boundary(disk, {cx - h, cy}, g) +
                         integrate_boundary(disk, {cx, cy + h}, g) + integrate_boundary(disk, {cx, cy - h}, g) - 4.0 * c;
            CHECK(std::abs(lap / (h * h)) <= 1e-3 * gn);
        }
    }
}

TEST_CASE("mean value diagnostic") {
    // Harmonic: x1^2 - x2^2 has zero circle deviation up to sampling error.
    GridFn f({Axis{-1.0, 1.0, 201}, Axis{-1.0, 1.0, 201}});
    for (std::int64_t k = 0; k < f.size(); ++k) {
        std::vector<double> x = f.coords(f.multi_index(k));
        f[k] = x[0] * x[0] - x[1] * x[1];
    }
    CHECK(mean_value_check(f, {0.1, -0.2}, 0.3) <= 1e-3);

    // |x|^2: deviation is exactly r^2 in the continuum.
    GridFn q({Axis{-1.0, 1.0, 401}, Axis{-1.0, 1.0, 401}});
    for (std::int64_t k = 0; k < q.size(); ++k) {
        std::vector<double> x = q.coords(q.multi_index(k));
        q[k] = x[0] * x[0] + x[1] * x[1];
    }
    CHECK(mean_value_check(q, {0.0, 0.0}, 0.5) == doctest::Approx(0.25).epsilon(1e-3));

    GridFn c({Axis{-1.0, 1.0, 51}, Axis{-1.0, 1.0, 51}});
    for (std::int64_t k = 0; k < c.size(); ++k) c[k] = 2.0;
    CHECK(mean_value_check(c, {0.0, 0.0}, 0.4) == doctest::Approx(0.0));
    CHECK_THROWS(mean_value_check(c, {0.9, 0.9}, 0.5));
}

TEST_CASE("solver reports non-convergence") {
    Domain disk = Domain::disk({0.0, 0.0}, 1.0, 64);
    std::vector<double> g(64, 1.0);
    g[0] = -1.0;
    SolveOptions so;
    so.grid_count = 65;
    so.max_iter = 3;
    CHECK_THROWS(solve_dirichlet(disk, g, so));
}
