#include "fstar/verify.hpp"

#include "fstar/convex.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fstar {

std::string CheckReport::summary() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " worst_margin=" << format_value(worst_margin) << " tol=" << format_value(tolerance);
    for (const CheckItem &it : breakdown)
        os << " [" << it.name << " margin=" << format_value(it.margin) << " checked=" << it.checked
           << " skipped=" << it.skipped << "]";
    return os.str();
}

SymMat fd_hessian(const GridFn &f, const std::vector<int> &node) {
    const int r = f.rank();
    for (int k = 0; k < r; ++k)
        if (node[static_cast<size_t>(k)] < 1 || node[static_cast<size_t>(k)] > f.axis(k).count - 2)
            throw std::out_of_range("fd_hessian: stencil exits grid");
    SymMat H(r);
    double fc = f.at(node);
    std::vector<int> idx = node;
    for (int k = 0; k < r; ++k) {
        double h = f.axis(k).step();
        idx = node;
        idx[static_cast<size_t>(k)] += 1;
        double fp = f.at(idx);
        idx[static_cast<size_t>(k)] -= 2;
        double fm = f.at(idx);
        H.set(k, k, (fp - 2.0 * fc + fm) / (h * h));
        for (int l = k + 1; l < r; ++l) {
            double hl = f.axis(l).step();
            double s = 0.0;
            for (int sk : {1, -1})
                for (int sl : {1, -1}) {
                    idx = node;
                    idx[static_cast<size_t>(k)] += sk;
                    idx[static_cast<size_t>(l)] += sl;
                    s += sk * sl * f.at(idx);
                }
            H.set(k, l, s / (4.0 * h * hl));
        }
    }
    return H;
}

namespace {

double min_step(const GridFn &f) {
    double s = kInf;
    for (int k = 0; k < f.rank(); ++k) s = std::min(s, f.axis(k).step());
    return s;
}

bool full_stencil_finite(const GridFn &f, const std::vector<int> &node) {
    const int r = f.rank();
    std::vector<int> idx(static_cast<size_t>(r));
    // All nodes in the surrounding hypercube of radius 1 must be finite
    // (covers the diagonal cross stencils).
    std::int64_t cells = 1;
    for (int k = 0; k < r; ++k) cells *= 3;
    for (std::int64_t c = 0; c < cells; ++c) {
        std::int64_t rem = c;
        for (int k = r - 1; k >= 0; --k) {
            idx[static_cast<size_t>(k)] = node[static_cast<size_t>(k)] + static_cast<int>(rem % 3) - 1;
            rem /= 3;
        }
        if (!std::isfinite(f.at(idx))) return false;
    }
    return true;
}

} // namespace

CheckReport is_F_subharmonic(const GridFn &f, const DirichletSet &F, double tolerance, double smoothing_eps, Exec policy) {
    if (F.dim() != f.rank()) throw std::invalid_argument("is_F_subharmonic: cone dimension must match grid rank");
    if (f.count_finite() == 0) throw std::invalid_argument("is_F_subharmonic: all-infinite input");
    if (smoothing_eps > 0.0) return is_F_subharmonic(mollify(f, smoothing_eps, policy), F, tolerance, 0.0, policy);

    const int r = f.rank();
    double hmin = min_step(f);
    double scale = std::max(1.0, f.max_abs_finite() / (hmin * hmin));

    std::vector<double> margins(static_cast<size_t>(f.size()), kInf);
    std::vector<std::uint8_t> skipped(static_cast<size_t>(f.size()), 0);
    par_for(
        f.size(),
        [&](std::int64_t fl) {
            std::vector<int> node = f.multi_index(fl);
            for (int k = 0; k < r; ++k)
                if (node[static_cast<size_t>(k)] < 1 || node[static_cast<size_t>(k)] > f.axis(k).count - 2) return;
            if (!full_stencil_finite(f, node)) {
                skipped[static_cast<size_t>(fl)] = 1;
                return;
            }
            margins[static_cast<size_t>(fl)] = membership_margin(F, fd_hessian(f, node));
        },
        policy);

    CheckItem item;
    item.name = "hessian_membership";
    item.margin = kInf;
    item.scale = scale;
    std::int64_t worst_at = -1;
    for (std::int64_t fl = 0; fl < f.size(); ++fl) {
        if (skipped[static_cast<size_t>(fl)]) {
            ++item.skipped;
            continue;
        }
        double m = margins[static_cast<size_t>(fl)];
        if (m == kInf) continue;
        ++item.checked;
        if (m < item.margin) {
            item.margin = m;
            worst_at = fl;
        }
    }
    if (item.checked == 0) throw std::invalid_argument("is_F_subharmonic: no full-stencil interior nodes");
    if (worst_at >= 0) item.witness = f.multi_index(worst_at);

    CheckReport rep;
    rep.tolerance = tolerance;
    rep.worst_margin = item.margin / scale;
    rep.witness = item.witness;
    rep.pass = rep.worst_margin >= -tolerance;
    rep.breakdown.push_back(std::move(item));
    return rep;
}

CheckReport is_convex(const GridFn &f, double tolerance) {
    const int r = f.rank();
    double scale = std::max(1.0, f.max_abs_finite());

    // Directions: axes plus all distinct-axis diagonals with sign patterns.
    std::vector<std::vector<int>> dirs;
    for (int k = 0; k < r; ++k) {
        std::vector<int> d(static_cast<size_t>(r), 0);
        d[static_cast<size_t>(k)] = 1;
        dirs.push_back(d);
    }
    for (int k = 0; k < r; ++k)
        for (int l = k + 1; l < r; ++l)
            for (int sign : {1, -1}) {
                std::vector<int> d(static_cast<size_t>(r), 0);
                d[static_cast<size_t>(k)] = 1;
                d[static_cast<size_t>(l)] = sign;
                dirs.push_back(d);
            }

    CheckItem item;
    item.name = "directional_second_differences";
    item.margin = kInf;
    item.scale = scale;
    std::int64_t worst_at = -1;
    bool infinite_violation = false;

    std::vector<int> lo(static_cast<size_t>(r)), hi(static_cast<size_t>(r));
    for (std::int64_t fl = 0; fl < f.size(); ++fl) {
        std::vector<int> node = f.multi_index(fl);
        double fc = f.at(node);
        for (const auto &d : dirs) {
            bool ok = true;
            std::vector<int> np = node, nm = node;
            for (int k = 0; k < r && ok; ++k) {
                np[static_cast<size_t>(k)] += d[static_cast<size_t>(k)];
                nm[static_cast<size_t>(k)] -= d[static_cast<size_t>(k)];
                ok = np[static_cast<size_t>(k)] >= 0 && np[static_cast<size_t>(k)] < f.axis(k).count &&
                     nm[static_cast<size_t>(k)] >= 0 && nm[static_cast<size_t>(k)] < f.axis(k).count;
            }
            if (!ok) continue;
            double fp = f.at(np), fm = f.at(nm);
            if (!std::isfinite(fp) || !std::isfinite(fm)) continue; // direction unconstrained
            ++item.checked;
            if (!std::isfinite(fc)) {
                // Midpoint convexity of the finite region fails: +inf between
                // two finite values.
                infinite_violation = true;
                worst_at = fl;
                item.witness = node;
                continue;
            }
            double second = fp - 2.0 * fc + fm;
            if (second < item.margin) {
                item.margin = second;
                worst_at = fl;
            }
        }
    }
    if (worst_at >= 0 && item.witness.empty()) item.witness = f.multi_index(worst_at);
    if (item.checked == 0) item.margin = 0.0;
    if (item.margin == kInf) item.margin = 0.0;

    CheckReport rep;
    rep.tolerance = tolerance;
    rep.worst_margin = infinite_violation ? -kInf : item.margin / scale;
    rep.witness = item.witness;
    rep.pass = rep.worst_margin >= -tolerance;
    rep.breakdown.push_back(std::move(item));
    return rep;
}

namespace {

// Extract the fiber over a fixed x multi-index as a GridFn on the y-axes.
GridFn fiber_slice(const GridFn &psi, const std::vector<int> &x_idx) {
    std::vector<Axis> y_axes(psi.axes().begin() + psi.split(), psi.axes().end());
    GridFn g(y_axes);
    std::vector<int> idx(static_cast<size_t>(psi.rank()));
    for (int k = 0; k < psi.split(); ++k) idx[static_cast<size_t>(k)] = x_idx[static_cast<size_t>(k)];
    for (std::int64_t fl = 0; fl < g.size(); ++fl) {
        std::vector<int> yi = g.multi_index(fl);
        for (int k = 0; k < g.rank(); ++k) idx[static_cast<size_t>(psi.split() + k)] = yi[static_cast<size_t>(k)];
        g[fl] = psi.at(idx);
    }
    return g;
}

} // namespace

CheckReport is_product_subharmonic(const GridFn &psi, const DirichletSet &F, const GammaSamples &samples,
                                   double tolerance, Exec policy) {
    if (!psi.has_split()) throw std::invalid_argument("is_product_subharmonic: grid needs an (x;y) split");
    const int n = psi.x_rank(), m = psi.y_rank();
    if (F.dim() != n) throw std::invalid_argument("is_product_subharmonic: cone dimension must match the x-block");

    CheckReport rep;
    rep.tolerance = tolerance;

    // (a) convexity of every y-fiber.
    {
        CheckItem item;
        item.name = "fiber_convexity";
        item.margin = kInf;
        item.scale = std::max(1.0, psi.max_abs_finite());
        std::int64_t x_total = 1;
        for (int k = 0; k < n; ++k) x_total *= psi.axis(k).count;
        std::vector<double> worst(static_cast<size_t>(x_total), kInf);
        std::vector<std::uint8_t> bad(static_cast<size_t>(x_total), 0);
        par_for(
            x_total,
            [&](std::int64_t xf) {
                std::vector<int> x_idx(static_cast<size_t>(n));
                std::int64_t rem = xf;
                for (int k = n - 1; k >= 0; --k) {
                    x_idx[static_cast<size_t>(k)] = static_cast<int>(rem % psi.axis(k).count);
                    rem /= psi.axis(k).count;
                }
                GridFn fib = fiber_slice(psi, x_idx);
                if (fib.count_finite() == 0) return;
                CheckReport sub = is_convex(fib, tolerance);
                worst[static_cast<size_t>(xf)] = sub.breakdown[0].margin;
                if (sub.worst_margin == -kInf) bad[static_cast<size_t>(xf)] = 1;
            },
            policy);
        bool inf_violation = false;
        for (std::int64_t xf = 0; xf < x_total; ++xf) {
            if (bad[static_cast<size_t>(xf)]) inf_violation = true;
            if (worst[static_cast<size_t>(xf)] < item.margin) item.margin = worst[static_cast<size_t>(xf)];
            ++item.checked;
        }
        if (item.margin == kInf) item.margin = 0.0;
        if (inf_violation) item.margin = -kInf;
        rep.breakdown.push_back(std::move(item));
    }

    // (b) F-subharmonicity along affine graphs y = y0 + Gamma (x - x_center).
    {
        CheckItem item;
        item.name = "graph_slices";
        item.margin = kInf;
        double hmin = kInf;
        for (int k = 0; k < n; ++k) hmin = std::min(hmin, psi.axis(k).step());
        item.scale = std::max(1.0, psi.max_abs_finite() / (hmin * hmin));

        // Slopes snap to integer multiples of step_y/step_x so slices read
        // exact grid values; off-lattice slopes would feed the 1/h^2 Hessian
        // stencils with interpolation error.
        auto aligned = [&](int k, int l, double raw) {
            double unit_slope = psi.axis(n + k).step() / psi.axis(l).step();
            double mult = std::max(1.0, std::round(std::abs(raw) / unit_slope));
            return (raw < 0 ? -mult : mult) * unit_slope;
        };
        std::vector<Mat> gammas;
        gammas.emplace_back(m, n); // zero slope
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < n; ++l) {
                const Axis &ya = psi.axis(n + k);
                const Axis &xa = psi.axis(l);
                double base = (ya.hi - ya.lo) / (xa.hi - xa.lo);
                for (double s : {0.25, 1.0, 4.0})
                    for (double sign : {1.0, -1.0}) {
                        Mat g(m, n);
                        g(k, l) = aligned(k, l, sign * s * base);
                        gammas.push_back(std::move(g));
                    }
            }
        std::mt19937_64 rng(samples.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (int s = 0; s < samples.random; ++s) {
            Mat g(m, n);
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < n; ++l) {
                    double raw = unit(rng) * (psi.axis(n + k).hi - psi.axis(n + k).lo) /
                                 (psi.axis(l).hi - psi.axis(l).lo);
                    g(k, l) = aligned(k, l, raw);
                }
            gammas.push_back(std::move(g));
        }
        for (const Mat &g : samples.extra) gammas.push_back(g);

        // Anchors: y-grid nodes, subsampled to at most max_anchor_nodes.
        std::int64_t y_total = 1;
        for (int k = 0; k < m; ++k) y_total *= psi.axis(n + k).count;
        std::int64_t stride = std::max<std::int64_t>(1, y_total / std::max(1, samples.max_anchor_nodes));

        std::vector<Axis> x_axes(psi.axes().begin(), psi.axes().begin() + n);
        std::vector<double> x_center(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) x_center[static_cast<size_t>(k)] = psi.axis(k).coord(psi.axis(k).count / 2);

        struct Task {
            const Mat *gamma;
            std::int64_t anchor;
        };
        std::vector<Task> tasks;
        for (const Mat &g : gammas)
            for (std::int64_t a = 0; a < y_total; a += stride) tasks.push_back({&g, a});

        std::vector<double> worst(tasks.size(), kInf);
        std::vector<std::int64_t> skipped(tasks.size(), 0);
        par_for(
            static_cast<std::int64_t>(tasks.size()),
            [&](std::int64_t t) {
                const Mat &g = *tasks[static_cast<size_t>(t)].gamma;
                std::vector<int> y_idx(static_cast<size_t>(m));
                std::int64_t rem = tasks[static_cast<size_t>(t)].anchor;
                for (int k = m - 1; k >= 0; --k) {
                    y_idx[static_cast<size_t>(k)] = static_cast<int>(rem % psi.axis(n + k).count);
                    rem /= psi.axis(n + k).count;
                }
                std::vector<double> y0(static_cast<size_t>(m));
                for (int k = 0; k < m; ++k) y0[static_cast<size_t>(k)] = psi.axis(n + k).coord(y_idx[static_cast<size_t>(k)]);

                GridFn slice(x_axes, kInf);
                std::int64_t skip = 0;
                std::vector<double> pt(static_cast<size_t>(n + m));
                for (std::int64_t xf = 0; xf < slice.size(); ++xf) {
                    std::vector<int> xi = slice.multi_index(xf);
                    bool inside = true;
                    for (int k = 0; k < n; ++k) pt[static_cast<size_t>(k)] = psi.axis(k).coord(xi[static_cast<size_t>(k)]);
                    for (int k = 0; k < m; ++k) {
                        double y = y0[static_cast<size_t>(k)];
                        for (int l = 0; l < n; ++l) y += g(k, l) * (pt[static_cast<size_t>(l)] - x_center[static_cast<size_t>(l)]);
                        const Axis &ya = psi.axis(n + k);
                        if (y < ya.lo - 1e-12 || y > ya.hi + 1e-12) {
                            inside = false;
                            break;
                        }
                        pt[static_cast<size_t>(n + k)] = std::min(std::max(y, ya.lo), ya.hi);
                    }
                    if (!inside) {
                        ++skip;
                        continue;
                    }
                    slice[xf] = psi.sample(pt);
                }
                skipped[static_cast<size_t>(t)] = skip;
                if (slice.count_finite() == 0) return;
                // Worst Hessian margin along the slice; interior full-stencil nodes only.
                double w = kInf;
                for (std::int64_t xf = 0; xf < slice.size(); ++xf) {
                    std::vector<int> xi = slice.multi_index(xf);
                    bool interior = true;
                    for (int k = 0; k < n && interior; ++k)
                        interior = xi[static_cast<size_t>(k)] >= 1 && xi[static_cast<size_t>(k)] <= x_axes[static_cast<size_t>(k)].count - 2;
                    if (!interior || !full_stencil_finite(slice, xi)) continue;
                    w = std::min(w, membership_margin(F, fd_hessian(slice, xi)));
                }
                worst[static_cast<size_t>(t)] = w;
            },
            policy);
        for (size_t t = 0; t < tasks.size(); ++t) {
            item.skipped += skipped[t];
            if (worst[t] == kInf) continue;
            ++item.checked;
            if (worst[t] < item.margin) item.margin = worst[t];
        }
        if (item.margin == kInf) item.margin = 0.0;
        rep.breakdown.push_back(std::move(item));
    }

    // (c) full Hessian against the Schur characterization.
    {
        CheckItem item;
        item.name = "full_hessian";
        item.margin = kInf;
        double hmin = min_step(psi);
        item.scale = std::max(1.0, psi.max_abs_finite() / (hmin * hmin));

        std::vector<double> margins(static_cast<size_t>(psi.size()), kInf);
        std::vector<std::uint8_t> skipped(static_cast<size_t>(psi.size()), 0);
        par_for(
            psi.size(),
            [&](std::int64_t fl) {
                std::vector<int> node = psi.multi_index(fl);
                for (int k = 0; k < psi.rank(); ++k)
                    if (node[static_cast<size_t>(k)] < 1 || node[static_cast<size_t>(k)] > psi.axis(k).count - 2) return;
                if (!full_stencil_finite(psi, node)) {
                    skipped[static_cast<size_t>(fl)] = 1;
                    return;
                }
                BlockSym H(n, m, fd_hessian(psi, node));
                ProductReport pr = product_contains(F, H, 0.0);
                margins[static_cast<size_t>(fl)] = pr.null_residual > 1e-9 * item.scale ? -pr.null_residual : pr.margin;
            },
            policy);
        std::int64_t worst_at = -1;
        for (std::int64_t fl = 0; fl < psi.size(); ++fl) {
            if (skipped[static_cast<size_t>(fl)]) {
                ++item.skipped;
                continue;
            }
            if (margins[static_cast<size_t>(fl)] == kInf) continue;
            ++item.checked;
            if (margins[static_cast<size_t>(fl)] < item.margin) {
                item.margin = margins[static_cast<size_t>(fl)];
                worst_at = fl;
            }
        }
        if (worst_at >= 0) item.witness = psi.multi_index(worst_at);
        if (item.margin == kInf) item.margin = 0.0;
        rep.breakdown.push_back(std::move(item));
    }

    rep.worst_margin = kInf;
    for (const CheckItem &it : rep.breakdown) {
        double normalized = it.margin == -kInf ? -kInf : it.margin / it.scale;
        if (normalized < rep.worst_margin) {
            rep.worst_margin = normalized;
            rep.witness = it.witness;
        }
    }
    rep.pass = rep.worst_margin >= -tolerance;
    return rep;
}

} // namespace fstar
