#include "fstar/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace fstar {

void HarmonicMeasureWeights::validate() const {
    double s = 0.0;
    for (double v : w) {
        if (v < -1e-12) throw std::runtime_error("HarmonicMeasureWeights: negative weight");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::runtime_error("HarmonicMeasureWeights: weights do not sum to 1");
}

namespace {

// Circularly linear interpolation of per-node disk boundary data at angle th.
double interp_boundary_circle(const std::vector<double> &g, double th) {
    const int m = static_cast<int>(g.size());
    double t = th / (2.0 * M_PI) * m;
    double fl = std::floor(t);
    int i0 = ((static_cast<int>(fl) % m) + m) % m;
    int i1 = (i0 + 1) % m;
    double frac = t - fl;
    return (1.0 - frac) * g[static_cast<size_t>(i0)] + frac * g[static_cast<size_t>(i1)];
}

struct MaskedSolve {
    // One unknown per interior node on a rectangular grid; arms may be cut by
    // a curved boundary, in which case the Dirichlet value at the cut point is
    // prescribed.
    int n0 = 0, n1 = 0;
    std::vector<std::uint8_t> interior;
    // Per node and direction (E,W,N,S): arm fraction in (0,1], and prescribed
    // value when the arm ends on the boundary (NaN when it ends on an unknown).
    std::vector<std::array<double, 4>> frac;
    std::vector<std::array<double, 4>> bval;

    bool is_interior(int i, int j) const {
        return i >= 0 && i < n0 && j >= 0 && j < n1 && interior[static_cast<size_t>(i) * n1 + j] != 0;
    }
};

GridFn run_sor(const MaskedSolve &ms, const std::array<Axis, 2> &axes, const SolveOptions &opts, double data_scale) {
    GridFn u(std::vector<Axis>{axes[0], axes[1]}, kInf);
    const int n1 = ms.n1;

    // Start from the mean of the prescribed data.
    double mean = 0.0;
    int cnt = 0;
    for (size_t k = 0; k < ms.frac.size(); ++k)
        for (int d = 0; d < 4; ++d)
            if (!std::isnan(ms.bval[k][static_cast<size_t>(d)])) {
                mean += ms.bval[k][static_cast<size_t>(d)];
                ++cnt;
            }
    if (cnt > 0) mean /= cnt;
    std::vector<std::int64_t> nodes;
    for (int i = 0; i < ms.n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (ms.is_interior(i, j)) {
                u[static_cast<std::int64_t>(i) * n1 + j] = mean;
                nodes.push_back(static_cast<std::int64_t>(i) * n1 + j);
            }

    double omega = opts.omega;
    if (omega <= 0.0) omega = 2.0 / (1.0 + std::sin(M_PI / std::max(ms.n0, ms.n1)));
    omega = std::min(omega, 1.95);

    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    auto gauss_value = [&](std::int64_t node) {
        int i = static_cast<int>(node / n1), j = static_cast<int>(node % n1);
        const auto &fr = ms.frac[static_cast<size_t>(node)];
        const auto &bv = ms.bval[static_cast<size_t>(node)];
        double num = 0.0, den = 0.0;
        for (int pair = 0; pair < 2; ++pair) {
            double sp = fr[static_cast<size_t>(2 * pair)];
            double sm = fr[static_cast<size_t>(2 * pair + 1)];
            double up = std::isnan(bv[static_cast<size_t>(2 * pair)])
                            ? u[static_cast<std::int64_t>(i + di[2 * pair]) * n1 + (j + dj[2 * pair])]
                            : bv[static_cast<size_t>(2 * pair)];
            double um = std::isnan(bv[static_cast<size_t>(2 * pair + 1)])
                            ? u[static_cast<std::int64_t>(i + di[2 * pair + 1]) * n1 + (j + dj[2 * pair + 1])]
                            : bv[static_cast<size_t>(2 * pair + 1)];
            num += up / (sp * (sp + sm)) + um / (sm * (sp + sm));
            den += 1.0 / (sp * sm);
        }
        return num / den;
    };

    // Red-black sweeps: within a color the updates are independent, so the
    // parallel and serial schedules produce identical values.
    std::vector<std::int64_t> red, black;
    for (std::int64_t node : nodes)
        ((node / n1 + node % n1) % 2 == 0 ? red : black).push_back(node);

    double resid = kInf;
    int it = 0;
    const double scale = std::max(1.0, data_scale);
    for (; it < opts.max_iter; ++it) {
        for (const auto *color : {&red, &black}) {
            par_for(
                static_cast<std::int64_t>(color->size()),
                [&](std::int64_t k) {
                    std::int64_t node = (*color)[static_cast<size_t>(k)];
                    double g = gauss_value(node);
                    u[node] = (1.0 - omega) * u[node] + omega * g;
                },
                opts.policy);
        }
        if (it % 16 == 15 || it == opts.max_iter - 1) {
            double r = 0.0;
            for (std::int64_t node : nodes) r = std::max(r, std::abs(gauss_value(node) - u[node]));
            resid = r / scale;
            if (resid <= opts.tol) break;
        }
    }
    if (resid > opts.tol)
        throw std::runtime_error("solve_dirichlet: SOR did not converge, relative residual " + format_value(resid));
    return u;
}

GridFn solve_disk(const Domain &dom, const std::vector<double> &g, const SolveOptions &opts) {
    if (static_cast<int>(g.size()) != dom.boundary_count())
        throw std::invalid_argument("solve_dirichlet: boundary data size mismatch");
    const int n = opts.grid_count;
    const double R = dom.radius();
    const auto c = dom.center();
    std::array<Axis, 2> axes{Axis{c[0] - R, c[0] + R, n}, Axis{c[1] - R, c[1] + R, n}};
    const double h = axes[0].step();

    MaskedSolve ms;
    ms.n0 = n;
    ms.n1 = n;
    ms.interior.assign(static_cast<size_t>(n) * n, 0);
    auto inside = [&](double x, double y) {
        double dx = x - c[0], dy = y - c[1];
        return dx * dx + dy * dy < R * R;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inside(axes[0].coord(i), axes[1].coord(j))) ms.interior[static_cast<size_t>(i) * n + j] = 1;

    ms.frac.assign(static_cast<size_t>(n) * n, {1.0, 1.0, 1.0, 1.0});
    ms.bval.assign(static_cast<size_t>(n) * n, {std::nan(""), std::nan(""), std::nan(""), std::nan("")});
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    double data_scale = 0.0;
    for (double v : g) data_scale = std::max(data_scale, std::abs(v));

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!ms.is_interior(i, j)) continue;
            double x = axes[0].coord(i), y = axes[1].coord(j);
            for (int d = 0; d < 4; ++d) {
                if (ms.is_interior(i + di[d], j + dj[d])) continue;
                // Arm cut by the circle: find t in (0,1] with |p + t h dir - c| = R.
                double ex = di[d], ey = dj[d];
                double px = x - c[0], py = y - c[1];
                double b = (px * ex + py * ey) * h;
                double a2 = h * h;
                double cc = px * px + py * py - R * R;
                double disc = b * b - a2 * cc;
                double t = (-b + std::sqrt(std::max(disc, 0.0))) / a2;
                t = std::min(std::max(t, 1e-3), 1.0);
                double th = std::atan2(py + t * h * ey, px + t * h * ex);
                if (th < 0) th += 2.0 * M_PI;
                ms.frac[static_cast<size_t>(i) * n + j][static_cast<size_t>(d)] = t;
                ms.bval[static_cast<size_t>(i) * n + j][static_cast<size_t>(d)] = interp_boundary_circle(g, th);
            }
        }
    return run_sor(ms, axes, opts, data_scale);
}

GridFn solve_grid(const Domain &dom, const std::vector<double> &g, const SolveOptions &opts) {
    if (static_cast<int>(g.size()) != dom.boundary_count())
        throw std::invalid_argument("solve_dirichlet: boundary data size mismatch");
    const Axis a0 = dom.grid_axis(0), a1 = dom.grid_axis(1);
    MaskedSolve ms;
    ms.n0 = a0.count;
    ms.n1 = a1.count;
    ms.interior = dom.mask();
    ms.frac.assign(static_cast<size_t>(ms.n0) * ms.n1, {1.0, 1.0, 1.0, 1.0});
    ms.bval.assign(static_cast<size_t>(ms.n0) * ms.n1, {std::nan(""), std::nan(""), std::nan(""), std::nan("")});

    // Boundary cell lookup.
    std::vector<int> bindex(static_cast<size_t>(ms.n0) * ms.n1, -1);
    const auto &cells = dom.grid_boundary_cells();
    for (size_t k = 0; k < cells.size(); ++k)
        bindex[static_cast<size_t>(cells[k][0]) * ms.n1 + cells[k][1]] = static_cast<int>(k);

    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    double data_scale = 0.0;
    for (double v : g) data_scale = std::max(data_scale, std::abs(v));
    for (int i = 0; i < ms.n0; ++i)
        for (int j = 0; j < ms.n1; ++j) {
            if (!ms.is_interior(i, j)) continue;
            for (int d = 0; d < 4; ++d) {
                int ni = i + di[d], nj = j + dj[d];
                if (ms.is_interior(ni, nj)) continue;
                int bi = (ni >= 0 && ni < ms.n0 && nj >= 0 && nj < ms.n1)
                             ? bindex[static_cast<size_t>(ni) * ms.n1 + nj]
                             : -1;
                if (bi < 0) throw std::invalid_argument("solve_dirichlet: interior cell touches the grid edge without a boundary cell");
                ms.bval[static_cast<size_t>(i) * ms.n1 + j][static_cast<size_t>(d)] = g[static_cast<size_t>(bi)];
            }
        }
    return run_sor(ms, {a0, a1}, opts, data_scale);
}

} // namespace

HarmonicMeasureWeights harmonic_measure(const Domain &domain, const std::vector<double> &x) {
    if (!domain.is_interior_point(x)) throw std::invalid_argument("harmonic_measure: x must be strictly interior");
    HarmonicMeasureWeights hw;
    switch (domain.kind()) {
        case Domain::Kind::Interval: {
            double t = (x[0] - domain.a()) / (domain.b() - domain.a());
            hw.w = {1.0 - t, t};
            return hw;
        }
        case Domain::Kind::Disk: {
            const int m = domain.boundary_count();
            const double R = domain.radius();
            const auto c = domain.center();
            double dx = x[0] - c[0], dy = x[1] - c[1];
            double rho2 = dx * dx + dy * dy;
            hw.w.resize(static_cast<size_t>(m));
            double sum = 0.0;
            for (int i = 0; i < m; ++i) {
                auto tau = domain.boundary_node(i);
                double ex = x[0] - tau[0], ey = x[1] - tau[1];
                double kernel = (R * R - rho2) / (2.0 * M_PI * R * (ex * ex + ey * ey));
                hw.w[static_cast<size_t>(i)] = kernel * (2.0 * M_PI * R / m);
                sum += hw.w[static_cast<size_t>(i)];
            }
            for (double &v : hw.w) v /= sum;
            return hw;
        }
        case Domain::Kind::Grid: {
            const int m = domain.boundary_count();
            if (m > 64)
                throw std::invalid_argument(
                    "harmonic_measure: masked grids with more than 64 boundary nodes expose only integrate_boundary");
            hw.w.assign(static_cast<size_t>(m), 0.0);
            for (int i = 0; i < m; ++i) {
                std::vector<double> e(static_cast<size_t>(m), 0.0);
                e[static_cast<size_t>(i)] = 1.0;
                hw.w[static_cast<size_t>(i)] = integrate_boundary(domain, x, e);
            }
            double sum = 0.0;
            for (double v : hw.w) sum += v;
            for (double &v : hw.w) v /= sum;
            return hw;
        }
    }
    throw std::logic_error("harmonic_measure: unknown domain kind");
}

GridFn solve_dirichlet(const Domain &domain, const std::vector<double> &boundary_values, const SolveOptions &opts) {
    for (double v : boundary_values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_dirichlet: boundary values must be finite");
    switch (domain.kind()) {
        case Domain::Kind::Interval: {
            if (boundary_values.size() != 2) throw std::invalid_argument("solve_dirichlet: interval needs two values");
            GridFn u(std::vector<Axis>{Axis{domain.a(), domain.b(), opts.grid_count}});
            for (int i = 0; i < opts.grid_count; ++i) {
                double t = static_cast<double>(i) / (opts.grid_count - 1);
                u[i] = (1.0 - t) * boundary_values[0] + t * boundary_values[1];
            }
            return u;
        }
        case Domain::Kind::Disk: return solve_disk(domain, boundary_values, opts);
        case Domain::Kind::Grid: return solve_grid(domain, boundary_values, opts);
    }
    throw std::logic_error("solve_dirichlet: unknown domain kind");
}

double integrate_boundary(const Domain &domain, const std::vector<double> &x,
                          const std::vector<double> &boundary_values, const SolveOptions &opts) {
    if (domain.kind() == Domain::Kind::Grid) {
        if (!domain.is_interior_point(x)) throw std::invalid_argument("integrate_boundary: x must be interior");
        GridFn u = solve_dirichlet(domain, boundary_values, opts);
        int i = static_cast<int>(std::lround((x[0] - domain.grid_axis(0).lo) / domain.grid_axis(0).step()));
        int j = static_cast<int>(std::lround((x[1] - domain.grid_axis(1).lo) / domain.grid_axis(1).step()));
        return u[static_cast<std::int64_t>(i) * domain.grid_axis(1).count + j];
    }
    HarmonicMeasureWeights hw = harmonic_measure(domain, x);
    if (hw.w.size() != boundary_values.size()) throw std::invalid_argument("integrate_boundary: data size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < hw.w.size(); ++i) s += hw.w[i] * boundary_values[i];
    return s;
}

double mean_value_check(const GridFn &f, const std::vector<double> &x, double r, int angle_samples) {
    if (f.rank() != 2) throw std::invalid_argument("mean_value_check: needs a 2-D grid");
    if (!(r > 0)) throw std::invalid_argument("mean_value_check: radius must be positive");
    double acc = 0.0;
    for (int k = 0; k < angle_samples; ++k) {
        double th = 2.0 * M_PI * k / angle_samples;
        acc += f.sample({x[0] + r * std::cos(th), x[1] + r * std::sin(th)});
    }
    return std::abs(f.sample(x) - acc / angle_samples);
}

} // namespace fstar
