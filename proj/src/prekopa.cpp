#include "fstar/prekopa.hpp"

#include "fstar/blockprod.hpp"
#include "fstar/verify.hpp"

#include <cmath>
#include <stdexcept>

namespace fstar {

namespace {

void require_split(const GridFn &psi, const char *who) {
    if (!psi.has_split()) throw std::invalid_argument(std::string(who) + ": grid needs an (x;y) split");
}

// Trapezoid weight of node i on an axis (step * 1/2 at the ends).
double trapz_w(const Axis &a, int i) { return a.step() * ((i == 0 || i == a.count - 1) ? 0.5 : 1.0); }

std::int64_t x_node_count(const GridFn &psi) {
    std::int64_t t = 1;
    for (int k = 0; k < psi.split(); ++k) t *= psi.axis(k).count;
    return t;
}

std::vector<int> x_multi_index(const GridFn &psi, std::int64_t xf) {
    std::vector<int> idx(static_cast<size_t>(psi.split()));
    for (int k = psi.split() - 1; k >= 0; --k) {
        idx[static_cast<size_t>(k)] = static_cast<int>(xf % psi.axis(k).count);
        xf /= psi.axis(k).count;
    }
    return idx;
}

} // namespace

MarginalResult marginal(const GridFn &psi, const GridFn *log_weight, Exec policy) {
    require_split(psi, "marginal");
    const int n = psi.x_rank(), m = psi.y_rank();
    if (log_weight) {
        if (log_weight->rank() != m) throw std::invalid_argument("marginal: weight must live on the y-grid");
        for (int k = 0; k < m; ++k) {
            const Axis &a = psi.axis(n + k), &b = log_weight->axis(k);
            if (a.lo != b.lo || a.hi != b.hi || a.count != b.count)
                throw std::invalid_argument("marginal: weight y-axes mismatch");
        }
    }

    std::vector<Axis> x_axes(psi.axes().begin(), psi.axes().begin() + n);
    MarginalResult res;
    res.phi = GridFn(x_axes);
    res.integral.assign(static_cast<size_t>(res.phi.size()), 0.0);

    std::int64_t y_total = 1;
    for (int k = 0; k < m; ++k) y_total *= psi.axis(n + k).count;

    // Per-fiber trapezoid weights and edge flags, shared by every x-node.
    std::vector<double> wy(static_cast<size_t>(y_total));
    std::vector<std::uint8_t> y_edge(static_cast<size_t>(y_total), 0);
    std::vector<double> wlog(static_cast<size_t>(y_total), 0.0);
    {
        std::vector<int> yi(static_cast<size_t>(m));
        for (std::int64_t yf = 0; yf < y_total; ++yf) {
            std::int64_t rem = yf;
            double w = 1.0;
            bool edge = false;
            for (int k = m - 1; k >= 0; --k) {
                const Axis &a = psi.axis(n + k);
                int i = static_cast<int>(rem % a.count);
                rem /= a.count;
                yi[static_cast<size_t>(k)] = i;
                w *= trapz_w(a, i);
                edge = edge || i == 0 || i == a.count - 1;
            }
            wy[static_cast<size_t>(yf)] = w;
            y_edge[static_cast<size_t>(yf)] = edge ? 1 : 0;
            if (log_weight) wlog[static_cast<size_t>(yf)] = (*log_weight)[yf];
        }
    }

    std::vector<std::uint8_t> warned(static_cast<size_t>(res.phi.size()), 0);
    par_for(
        res.phi.size(),
        [&](std::int64_t xf) {
            const double *fiber = psi.values().data() + xf * y_total;
            double vmin = kInf, edge_min = kInf;
            for (std::int64_t yf = 0; yf < y_total; ++yf) {
                double v = fiber[yf] + wlog[static_cast<size_t>(yf)];
                if (v < vmin) vmin = v;
                if (y_edge[static_cast<size_t>(yf)] && v < edge_min) edge_min = v;
            }
            if (vmin == kInf) {
                res.phi[xf] = kInf;
                res.integral[static_cast<size_t>(xf)] = 0.0;
                return;
            }
            double s = 0.0;
            for (std::int64_t yf = 0; yf < y_total; ++yf) {
                double v = fiber[yf] + wlog[static_cast<size_t>(yf)];
                if (v == kInf) continue;
                s += std::exp(vmin - v) * wy[static_cast<size_t>(yf)];
            }
            res.phi[xf] = vmin - std::log(s);
            res.integral[static_cast<size_t>(xf)] = std::exp(-vmin) * s;
            if (edge_min < vmin + 5.0) warned[static_cast<size_t>(xf)] = 1;
        },
        policy);
    for (std::uint8_t w : warned) res.tail_warnings += w;
    return res;
}

double QuadraticSection::w(double x1, double x2) const {
    double l = a * x1 + b * x2;
    return l * l - (lambda * x1 * x1 + mu * x2 * x2 + 2.0 * tau * x1 * x2 - kappa);
}

double QuadraticSection::psi(double x1, double x2, double y) const {
    return lambda * x1 * x1 + mu * x2 * x2 + y * y + 2.0 * (tau * x1 * x2 + a * x1 * y + b * x2 * y);
}

SymMat QuadraticSection::hessian() const {
    SymMat h(3);
    h.set(0, 0, 2.0 * lambda);
    h.set(1, 1, 2.0 * mu);
    h.set(2, 2, 2.0);
    h.set(0, 1, 2.0 * tau);
    h.set(0, 2, 2.0 * a);
    h.set(1, 2, 2.0 * b);
    return h;
}

double QuadraticSection::laplacian_bk(double x1, double x2) const {
    double W = w(x1, x2);
    double wx1 = 2.0 * (a * x1 + b * x2) * a - 2.0 * lambda * x1 - 2.0 * tau * x2;
    double wx2 = 2.0 * (a * x1 + b * x2) * b - 2.0 * mu * x2 - 2.0 * tau * x1;
    return (lambda + mu - a * a - b * b) / (2.0 * W) + (wx1 * wx1 + wx2 * wx2) / (2.0 * W * W);
}

GridFn section_volume_quadratic(const QuadraticSection &q, const std::vector<Axis> &x_axes, Exec policy) {
    if (x_axes.size() != 2) throw std::invalid_argument("section_volume_quadratic: two x-axes expected");
    GridFn bk(x_axes);
    par_for(
        bk.size(),
        [&](std::int64_t f) {
            std::vector<int> idx = bk.multi_index(f);
            double x1 = x_axes[0].coord(idx[0]), x2 = x_axes[1].coord(idx[1]);
            double W = q.w(x1, x2);
            if (!(W > 0.0)) {
                bk[f] = kInf;
                return;
            }
            // Roots of the fiber quadratic y^2 + 2(a x1 + b x2) y + (...) = kappa.
            double mid = -(q.a * x1 + q.b * x2);
            double yp = mid + std::sqrt(W), ym = mid - std::sqrt(W);
            bk[f] = -std::log(yp - ym);
        },
        policy);
    return bk;
}

GridFn section_volume(const GridFn &rho, double kappa, Exec policy) {
    require_split(rho, "section_volume");
    if (rho.y_rank() != 1) throw std::invalid_argument("section_volume: fiber dimension must be 1");
    const Axis ya = rho.axis(rho.split());
    const std::int64_t yn = ya.count;

    std::vector<Axis> x_axes(rho.axes().begin(), rho.axes().begin() + rho.split());
    GridFn bk(x_axes);
    std::vector<std::uint8_t> nonconvex(static_cast<size_t>(bk.size()), 0);
    par_for(
        bk.size(),
        [&](std::int64_t xf) {
            const double *fiber = rho.values().data() + xf * yn;
            // Convex fibers: the sublevel set is a single interval.
            double scale = 1.0;
            for (std::int64_t j = 0; j < yn; ++j)
                if (std::isfinite(fiber[j])) scale = std::max(scale, std::abs(fiber[j]));
            for (std::int64_t j = 1; j + 1 < yn; ++j) {
                if (!std::isfinite(fiber[j - 1]) || !std::isfinite(fiber[j]) || !std::isfinite(fiber[j + 1])) continue;
                if (fiber[j + 1] - 2.0 * fiber[j] + fiber[j - 1] < -1e-9 * scale) {
                    nonconvex[static_cast<size_t>(xf)] = 1;
                    return;
                }
            }
            std::int64_t first = -1, last = -1;
            for (std::int64_t j = 0; j < yn; ++j)
                if (std::isfinite(fiber[j]) && fiber[j] <= kappa) {
                    if (first < 0) first = j;
                    last = j;
                }
            if (first < 0) {
                bk[xf] = kInf;
                return;
            }
            double ylo = ya.coord(static_cast<int>(first));
            if (first > 0 && std::isfinite(fiber[first - 1])) {
                double t = (kappa - fiber[first - 1]) / (fiber[first] - fiber[first - 1]);
                ylo = ya.coord(static_cast<int>(first - 1)) + t * ya.step();
            }
            double yhi = ya.coord(static_cast<int>(last));
            if (last + 1 < yn && std::isfinite(fiber[last + 1])) {
                double t = (kappa - fiber[last + 1]) / (fiber[last] - fiber[last + 1]);
                yhi = ya.coord(static_cast<int>(last + 1)) - t * ya.step();
            }
            double len = yhi - ylo;
            bk[xf] = len > 0.0 ? -std::log(len) : kInf;
        },
        policy);
    for (std::uint8_t b : nonconvex)
        if (b) throw std::invalid_argument("section_volume: nonconvex fiber detected");
    return bk;
}

namespace {

struct FiberCum {
    std::vector<double> density; // e^{-psi} along the fiber, scaled by e^{vmin}
    std::vector<double> cum;     // cumulative trapezoid of density
    double total = 0.0;
    double vmin = 0.0;
};

FiberCum fiber_cumulative(const GridFn &psi, const std::vector<int> &x_idx) {
    const int n = psi.split();
    const Axis ya = psi.axis(n);
    FiberCum fc;
    fc.density.resize(static_cast<size_t>(ya.count));
    fc.cum.resize(static_cast<size_t>(ya.count));
    std::vector<int> idx = x_idx;
    idx.push_back(0);
    fc.vmin = kInf;
    for (int j = 0; j < ya.count; ++j) {
        idx[static_cast<size_t>(n)] = j;
        fc.vmin = std::min(fc.vmin, psi.at(idx));
    }
    if (fc.vmin == kInf) throw std::invalid_argument("transport: zero-mass fiber");
    for (int j = 0; j < ya.count; ++j) {
        idx[static_cast<size_t>(n)] = j;
        double v = psi.at(idx);
        fc.density[static_cast<size_t>(j)] = v == kInf ? 0.0 : std::exp(fc.vmin - v);
    }
    fc.cum[0] = 0.0;
    for (int j = 1; j < ya.count; ++j)
        fc.cum[static_cast<size_t>(j)] =
            fc.cum[static_cast<size_t>(j - 1)] +
            0.5 * ya.step() * (fc.density[static_cast<size_t>(j - 1)] + fc.density[static_cast<size_t>(j)]);
    fc.total = fc.cum[static_cast<size_t>(ya.count - 1)];
    if (!(fc.total > 0.0)) throw std::invalid_argument("transport: zero-mass fiber");
    return fc;
}

} // namespace

std::vector<double> transport_map(const GridFn &psi, const std::vector<int> &x0, const std::vector<int> &x) {
    require_split(psi, "transport_map");
    if (psi.y_rank() != 1) throw std::invalid_argument("transport_map: fiber dimension must be 1");
    const Axis ya = psi.axis(psi.split());
    FiberCum f0 = fiber_cumulative(psi, x0);
    FiberCum fx = fiber_cumulative(psi, x);

    std::vector<double> T(static_cast<size_t>(ya.count));
    int k = 0;
    for (int j = 0; j < ya.count; ++j) {
        double q = f0.cum[static_cast<size_t>(j)] / f0.total * fx.total;
        while (k + 1 < ya.count - 1 && fx.cum[static_cast<size_t>(k + 1)] < q) ++k;
        // Invert the piecewise-linear cumulative on [k, k+1]; exact at knots.
        if (fx.cum[static_cast<size_t>(k)] >= q) {
            T[static_cast<size_t>(j)] = ya.coord(k);
            continue;
        }
        double seg = fx.cum[static_cast<size_t>(k + 1)] - fx.cum[static_cast<size_t>(k)];
        double t = seg > 0.0 ? (q - fx.cum[static_cast<size_t>(k)]) / seg : 0.0;
        t = std::min(t, 1.0);
        T[static_cast<size_t>(j)] = t == 1.0 ? ya.coord(k + 1) : ya.coord(k) + t * ya.step();
    }
    return T;
}

TransportVelocity transport_velocity(const GridFn &psi, const std::vector<int> &x0) {
    require_split(psi, "transport_velocity");
    if (psi.y_rank() != 1) throw std::invalid_argument("transport_velocity: fiber dimension must be 1");
    const int n = psi.split();
    const Axis ya = psi.axis(n);

    TransportVelocity tv;
    tv.y_axis = ya;
    tv.dphi.assign(static_cast<size_t>(n), 0.0);
    tv.gamma.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(ya.count), 0.0));

    FiberCum fc = fiber_cumulative(psi, x0);

    // d_x psi along the fiber by central differences in each x-direction.
    std::vector<int> idx(x0);
    idx.push_back(0);
    for (int k = 0; k < n; ++k) {
        const Axis &xa = psi.axis(k);
        int i = x0[static_cast<size_t>(k)];
        int ip = std::min(i + 1, xa.count - 1), im = std::max(i - 1, 0);
        if (ip - im < 2) tv.one_sided_dx = true;
        double denom = (ip - im) * xa.step();

        std::vector<double> dpsi(static_cast<size_t>(ya.count));
        for (int j = 0; j < ya.count; ++j) {
            idx[static_cast<size_t>(n)] = j;
            std::vector<int> a = idx, b = idx;
            a[static_cast<size_t>(k)] = ip;
            b[static_cast<size_t>(k)] = im;
            dpsi[static_cast<size_t>(j)] = (psi.at(a) - psi.at(b)) / denom;
        }

        // dphi_k = (int e^{-psi} d_x psi) / (int e^{-psi}).
        double num = 0.0;
        for (int j = 0; j < ya.count; ++j)
            num += trapz_w(ya, j) * fc.density[static_cast<size_t>(j)] * dpsi[static_cast<size_t>(j)];
        double dphi = num / (fc.total);
        tv.dphi[static_cast<size_t>(k)] = dphi;

        // Cumulative of e^{-psi} d_x psi.
        std::vector<double> wcum(static_cast<size_t>(ya.count), 0.0);
        for (int j = 1; j < ya.count; ++j)
            wcum[static_cast<size_t>(j)] = wcum[static_cast<size_t>(j - 1)] +
                                           0.5 * ya.step() *
                                               (fc.density[static_cast<size_t>(j - 1)] * dpsi[static_cast<size_t>(j - 1)] +
                                                fc.density[static_cast<size_t>(j)] * dpsi[static_cast<size_t>(j)]);

        for (int j = 0; j < ya.count; ++j) {
            double dens = fc.density[static_cast<size_t>(j)];
            if (dens <= 0.0) {
                tv.gamma[static_cast<size_t>(k)][static_cast<size_t>(j)] = 0.0;
                continue;
            }
            tv.gamma[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                -(dphi * fc.cum[static_cast<size_t>(j)] - wcum[static_cast<size_t>(j)]) / dens;
        }
    }
    return tv;
}

HessianDecomposition hessian_decomposition_residual(const GridFn &psi, const std::vector<int> &x0) {
    require_split(psi, "hessian_decomposition_residual");
    const int n = psi.split();
    if (n > 2) throw std::invalid_argument("hessian_decomposition_residual: base dimension must be <= 2");
    if (psi.y_rank() != 1) throw std::invalid_argument("hessian_decomposition_residual: fiber dimension must be 1");
    const Axis ya = psi.axis(n);

    HessianDecomposition hd{SymMat(n), SymMat(n), 0.0, false};

    // LHS: finite-difference Hessian of the marginal at x0.
    MarginalResult mr = marginal(psi);
    hd.lhs = fd_hessian(mr.phi, x0);

    // Growth heuristic: outward slope at the fiber edges.
    {
        std::vector<int> idx(x0);
        idx.push_back(0);
        auto at_y = [&](int j) {
            idx[static_cast<size_t>(n)] = j;
            return psi.at(idx);
        };
        double right = (at_y(ya.count - 1) - at_y(ya.count - 2)) / ya.step();
        double left = (at_y(1) - at_y(0)) / ya.step();
        if (!(right > 0.0) || !(left < 0.0)) hd.growth_warning = true;
    }

    TransportVelocity tv = transport_velocity(psi, x0);
    FiberCum fc = fiber_cumulative(psi, x0);

    // d_y Gamma by central differences.
    std::vector<std::vector<double>> dyg(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(ya.count), 0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 1; j + 1 < ya.count; ++j)
            dyg[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                (tv.gamma[static_cast<size_t>(k)][static_cast<size_t>(j + 1)] -
                 tv.gamma[static_cast<size_t>(k)][static_cast<size_t>(j - 1)]) /
                (2.0 * ya.step());

    // RHS integrals over interior y-nodes (full Hessian stencil there).
    SymMat acc(n);
    double mass = 0.0;
    std::vector<int> node(x0);
    node.push_back(0);
    for (int j = 1; j + 1 < ya.count; ++j) {
        node[static_cast<size_t>(n)] = j;
        double w = ya.step() * fc.density[static_cast<size_t>(j)];
        if (j == 1 || j == ya.count - 2) w *= 0.5;
        if (w == 0.0) continue;
        mass += w;

        SymMat H = fd_hessian(psi, node);
        BlockSym Hb(n, 1, H);
        Mat g(1, n);
        for (int k = 0; k < n; ++k) g(0, k) = tv.gamma[static_cast<size_t>(k)][static_cast<size_t>(j)];
        SymMat graph = restrict_graph(Hb, g);

        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
                double v = acc(k, l) + w * (graph(k, l) + dyg[static_cast<size_t>(k)][static_cast<size_t>(j)] *
                                                              dyg[static_cast<size_t>(l)][static_cast<size_t>(j)]);
                acc.set(k, l, v);
            }
    }
    if (!(mass > 0.0)) throw std::invalid_argument("hessian_decomposition_residual: zero-mass fiber");
    hd.rhs = acc * (1.0 / mass);

    hd.residual = (hd.lhs - hd.rhs).max_abs();
    return hd;
}

MinPrincipleResult min_principle(const GridFn &psi, std::vector<double> p_values, Exec policy) {
    require_split(psi, "min_principle");
    const int n = psi.x_rank();
    std::int64_t y_total = 1;
    for (int k = 0; k < psi.y_rank(); ++k) y_total *= psi.axis(n + k).count;

    MinPrincipleResult res;
    std::vector<Axis> x_axes(psi.axes().begin(), psi.axes().begin() + n);
    res.inf_y = GridFn(x_axes);
    par_for(
        res.inf_y.size(),
        [&](std::int64_t xf) {
            const double *fiber = psi.values().data() + xf * y_total;
            double m = kInf;
            for (std::int64_t yf = 0; yf < y_total; ++yf) m = std::min(m, fiber[yf]);
            res.inf_y[xf] = m;
        },
        policy);

    // |y|^2 on the fiber grid.
    GridFn ysq(std::vector<Axis>(psi.axes().begin() + n, psi.axes().end()));
    for (std::int64_t yf = 0; yf < ysq.size(); ++yf) {
        std::vector<double> c = ysq.coords(ysq.multi_index(yf));
        double s = 0.0;
        for (double v : c) s += v * v;
        ysq[yf] = s;
    }

    res.p_values = std::move(p_values);
    for (double p : res.p_values) {
        GridFn scaled(psi.axes());
        scaled.set_split(n);
        for (std::int64_t f = 0; f < psi.size(); ++f) {
            double v = psi[f];
            scaled[f] = v == kInf ? kInf : p * v + ysq[f % ysq.size()];
        }
        MarginalResult mr = marginal(scaled, nullptr, policy);
        double dev = 0.0;
        for (std::int64_t xf = 0; xf < res.inf_y.size(); ++xf) {
            if (res.inf_y[xf] == kInf || mr.phi[xf] == kInf) continue;
            dev = std::max(dev, std::abs(mr.phi[xf] / p - res.inf_y[xf]));
        }
        res.sup_deviation.push_back(dev);
    }
    return res;
}

} // namespace fstar
