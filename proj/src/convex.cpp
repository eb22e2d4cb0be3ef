#include "fstar/convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fstar {

namespace {

// One conjugate line: g(u_j) = max_i (y_i u_j - f_i) over finite f_i, by
// direct maximization.  Exact: the same expression the Fenchel-Young checks
// evaluate.  Returns the attaining index, or -1 if the line is all-infinite.
void conjugate_line(const double *f, int n, const Axis &y, const Axis &u, double *g, int *argmax) {
    for (int j = 0; j < u.count; ++j) {
        double uj = u.coord(j);
        double best = -kInf;
        int bi = -1;
        for (int i = 0; i < n; ++i) {
            if (f[i] == kInf) continue;
            double cand = y.coord(i) * uj - f[i];
            if (cand > best) {
                best = cand;
                bi = i;
            }
        }
        g[j] = best;
        argmax[j] = bi;
    }
}

struct PassBuffers {
    std::vector<double> values;
    std::vector<std::uint8_t> flags;
};

// Conjugate along the last axis of a row-major block of shape (lines, n),
// producing (lines, m).  Carries the divergence flag of the contributor.
PassBuffers conjugate_last_axis(const std::vector<double> &vals, const std::vector<std::uint8_t> &flags,
                                std::int64_t lines, const Axis &y, const Axis &u, Exec policy) {
    PassBuffers out;
    out.values.assign(static_cast<size_t>(lines) * u.count, -kInf);
    out.flags.assign(out.values.size(), 0);
    par_for(
        lines,
        [&](std::int64_t l) {
            const double *f = vals.data() + l * y.count;
            double *g = out.values.data() + l * u.count;
            std::vector<int> arg(static_cast<size_t>(u.count));
            conjugate_line(f, y.count, y, u, g, arg.data());
            int first = -1, last = -1;
            for (int i = 0; i < y.count; ++i)
                if (f[i] != kInf) {
                    if (first < 0) first = i;
                    last = i;
                }
            for (int j = 0; j < u.count; ++j) {
                int bi = arg[static_cast<size_t>(j)];
                if (bi < 0) continue;
                std::uint8_t fl = flags.empty() ? 0 : flags[static_cast<size_t>(l * y.count + bi)];
                // Strict edge attainment: the finite sample box truncated a
                // growing objective, so the true supremum is not certified.
                if (bi == last && last > first) {
                    double prev = y.coord(last - 1) * u.coord(j) - f[last - 1];
                    if (f[last - 1] == kInf || g[j] > prev) fl = 1;
                }
                if (bi == first && last > first) {
                    double next = y.coord(first + 1) * u.coord(j) - f[first + 1];
                    if (f[first + 1] == kInf || g[j] > next) fl = 1;
                }
                if (bi == first && bi == last) fl = 1; // single support point: slope unbounded both ways
                out.flags[static_cast<size_t>(l * u.count + j)] = fl;
            }
        },
        policy);
    return out;
}

// Move axis k to the innermost position of a row-major layout.
std::vector<double> rotate_axis_last(const std::vector<double> &vals, const std::vector<int> &shape, int k) {
    const int r = static_cast<int>(shape.size());
    std::int64_t inner = 1, outer = 1;
    for (int i = k + 1; i < r; ++i) inner *= shape[static_cast<size_t>(i)];
    for (int i = 0; i < k; ++i) outer *= shape[static_cast<size_t>(i)];
    const std::int64_t nk = shape[static_cast<size_t>(k)];
    std::vector<double> out(vals.size());
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t i = 0; i < nk; ++i)
            for (std::int64_t in = 0; in < inner; ++in)
                out[static_cast<size_t>(((o * inner) + in) * nk + i)] =
                    vals[static_cast<size_t>((o * nk + i) * inner + in)];
    return out;
}

std::vector<std::uint8_t> rotate_axis_last_u8(const std::vector<std::uint8_t> &vals, const std::vector<int> &shape, int k) {
    const int r = static_cast<int>(shape.size());
    std::int64_t inner = 1, outer = 1;
    for (int i = k + 1; i < r; ++i) inner *= shape[static_cast<size_t>(i)];
    for (int i = 0; i < k; ++i) outer *= shape[static_cast<size_t>(i)];
    const std::int64_t nk = shape[static_cast<size_t>(k)];
    std::vector<std::uint8_t> out(vals.size());
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t i = 0; i < nk; ++i)
            for (std::int64_t in = 0; in < inner; ++in)
                out[static_cast<size_t>(((o * inner) + in) * nk + i)] =
                    vals[static_cast<size_t>((o * nk + i) * inner + in)];
    return out;
}

// Inverse of rotate_axis_last.
template <class T>
std::vector<T> rotate_axis_back(const std::vector<T> &vals, const std::vector<int> &shape_after, int k) {
    const int r = static_cast<int>(shape_after.size());
    std::int64_t inner = 1, outer = 1;
    for (int i = k + 1; i < r; ++i) inner *= shape_after[static_cast<size_t>(i)];
    for (int i = 0; i < k; ++i) outer *= shape_after[static_cast<size_t>(i)];
    const std::int64_t nk = shape_after[static_cast<size_t>(k)];
    std::vector<T> out(vals.size());
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t i = 0; i < nk; ++i)
            for (std::int64_t in = 0; in < inner; ++in)
                out[static_cast<size_t>((o * nk + i) * inner + in)] =
                    vals[static_cast<size_t>(((o * inner) + in) * nk + i)];
    return out;
}

} // namespace

LegendreResult legendre(const GridFn &f, const std::vector<Axis> &dual_axes, Exec policy) {
    const int r = f.rank();
    if (static_cast<int>(dual_axes.size()) != r) throw std::invalid_argument("legendre: one dual axis per input axis");
    for (const Axis &a : dual_axes) a.validate();
    if (f.count_finite() == 0) throw std::invalid_argument("legendre: empty effective domain");

    // f* = conj_0(-conj_1(-...conj_{r-1}(f)...)): conjugate the innermost axis
    // first, negating between passes.
    std::vector<int> shape(static_cast<size_t>(r));
    for (int k = 0; k < r; ++k) shape[static_cast<size_t>(k)] = f.axis(k).count;

    std::vector<double> vals = f.values();
    std::vector<std::uint8_t> flags;
    for (int k = r - 1; k >= 0; --k) {
        if (k < r - 1) {
            for (double &v : vals) v = -v; // -(-inf) = +inf: empty lines are skipped downstream
            std::vector<double> rot = rotate_axis_last(vals, shape, k);
            vals.swap(rot);
            std::vector<std::uint8_t> rotf = rotate_axis_last_u8(flags, shape, k);
            flags.swap(rotf);
        }
        std::int64_t lines = 1;
        for (int i = 0; i < r; ++i)
            if (i != k) lines *= shape[static_cast<size_t>(i)];
        PassBuffers out = conjugate_last_axis(vals, flags, lines, f.axis(k), dual_axes[static_cast<size_t>(k)], policy);
        shape[static_cast<size_t>(k)] = dual_axes[static_cast<size_t>(k)].count;
        if (k < r - 1) {
            std::vector<int> shape_after = shape;
            vals = rotate_axis_back(out.values, shape_after, k);
            flags = rotate_axis_back(out.flags, shape_after, k);
        } else {
            vals.swap(out.values);
            flags.swap(out.flags);
        }
    }

    LegendreResult res;
    res.fn = GridFn(dual_axes);
    res.fn.values() = std::move(vals);
    res.divergent = std::move(flags);
    return res;
}

std::vector<Axis> suggest_dual_axes(const GridFn &f, int count) {
    std::vector<Axis> out;
    for (int k = 0; k < f.rank(); ++k) {
        const Axis &a = f.axis(k);
        double lo = kInf, hi = -kInf;
        for (std::int64_t fl = 0; fl < f.size(); ++fl) {
            std::vector<int> idx = f.multi_index(fl);
            if (idx[static_cast<size_t>(k)] + 1 >= a.count) continue;
            double v0 = f[fl];
            std::vector<int> idx1 = idx;
            ++idx1[static_cast<size_t>(k)];
            double v1 = f.at(idx1);
            if (v0 == kInf || v1 == kInf) continue;
            double slope = (v1 - v0) / a.step();
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
        }
        if (!(lo <= hi)) {
            lo = -1.0;
            hi = 1.0;
        }
        double pad = 0.1 * std::max(1.0, hi - lo);
        out.push_back(Axis{lo - pad, hi + pad, count > 0 ? count : a.count});
    }
    return out;
}

ConvexBody ConvexBody::interval(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("ConvexBody: interval needs lo <= hi");
    ConvexBody b;
    b.dim_ = 1;
    b.lo_ = lo;
    b.hi_ = hi;
    return b;
}

ConvexBody ConvexBody::planar(std::vector<double> support_values) {
    if (support_values.size() < 3) throw std::invalid_argument("ConvexBody: need at least 3 directions");
    ConvexBody b;
    b.dim_ = 2;
    b.support_ = std::move(support_values);
    const int n = b.directions();
    double scale = 0.0;
    for (double h : b.support_) scale = std::max(scale, std::abs(h));
    double c = std::cos(2.0 * M_PI / n);
    for (int i = 0; i < n; ++i) {
        double lhs = b.support_[static_cast<size_t>((i + n - 1) % n)] + b.support_[static_cast<size_t>((i + 1) % n)];
        if (lhs < 2.0 * b.support_[static_cast<size_t>(i)] * c - 1e-9 * std::max(1.0, scale))
            throw std::invalid_argument("ConvexBody: support values violate the discrete support condition");
    }
    return b;
}

ConvexBody ConvexBody::from_points(const std::vector<std::array<double, 2>> &pts, int directions) {
    if (pts.empty()) throw std::invalid_argument("ConvexBody: empty point set");
    std::vector<double> h(static_cast<size_t>(directions), -kInf);
    for (int i = 0; i < directions; ++i) {
        double th = 2.0 * M_PI * i / directions;
        double cx = std::cos(th), sy = std::sin(th);
        for (const auto &p : pts) h[static_cast<size_t>(i)] = std::max(h[static_cast<size_t>(i)], p[0] * cx + p[1] * sy);
    }
    return planar(std::move(h));
}

ConvexBody ConvexBody::ball(std::array<double, 2> center, double radius, int directions) {
    if (radius < 0) throw std::invalid_argument("ConvexBody: negative radius");
    std::vector<double> h(static_cast<size_t>(directions));
    for (int i = 0; i < directions; ++i) {
        double th = 2.0 * M_PI * i / directions;
        h[static_cast<size_t>(i)] = center[0] * std::cos(th) + center[1] * std::sin(th) + radius;
    }
    return planar(std::move(h));
}

double ConvexBody::direction_angle(int i) const {
    if (dim_ != 2) throw std::logic_error("ConvexBody: directions are planar-only");
    return 2.0 * M_PI * i / directions();
}

double support_function(const ConvexBody &body, const std::vector<double> &u) {
    if (body.dim() == 1) {
        if (u.size() != 1) throw std::invalid_argument("support_function: direction dim mismatch");
        return u[0] >= 0 ? u[0] * body.hi() : u[0] * body.lo();
    }
    if (u.size() != 2) throw std::invalid_argument("support_function: direction dim mismatch");
    const int n = body.directions();
    // Exact on stored directions.
    double ang = std::atan2(u[1], u[0]);
    double norm = std::hypot(u[0], u[1]);
    if (norm > 0) {
        double t = ang / (2.0 * M_PI) * n;
        double tr = std::round(t);
        if (std::abs(t - tr) < 1e-12 * n) {
            int i = (static_cast<int>(tr) % n + n) % n;
            return norm * body.support_at(i);
        }
    }
    auto poly = body_polygon(body);
    if (poly.empty()) return -kInf;
    double best = -kInf;
    for (const auto &v : poly) best = std::max(best, v[0] * u[0] + v[1] * u[1]);
    return best;
}

GridFn indicator(const ConvexBody &body, const std::vector<Axis> &y_axes) {
    if (static_cast<int>(y_axes.size()) != body.dim()) throw std::invalid_argument("indicator: grid dim mismatch");
    GridFn g(y_axes, kInf);
    if (body.dim() == 1) {
        const Axis &a = y_axes[0];
        for (int i = 0; i < a.count; ++i) {
            double y = a.coord(i);
            if (y >= body.lo() && y <= body.hi()) g[i] = 0.0;
        }
        return g;
    }
    const int n = body.directions();
    std::vector<double> cs(static_cast<size_t>(n)), sn(static_cast<size_t>(n));
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
        cs[static_cast<size_t>(i)] = std::cos(body.direction_angle(i));
        sn[static_cast<size_t>(i)] = std::sin(body.direction_angle(i));
        scale = std::max(scale, std::abs(body.support_at(i)));
    }
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> y = g.coords(g.multi_index(f));
        bool inside = true;
        for (int i = 0; i < n && inside; ++i)
            inside = y[0] * cs[static_cast<size_t>(i)] + y[1] * sn[static_cast<size_t>(i)] <=
                     body.support_at(i) + 1e-12 * scale;
        if (inside) g[f] = 0.0;
    }
    return g;
}

ConvexBody minkowski_sum(const ConvexBody &a, const ConvexBody &b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    if (a.dim() == 1) return ConvexBody::interval(a.lo() + b.lo(), a.hi() + b.hi());
    if (a.directions() != b.directions()) throw std::invalid_argument("minkowski_sum: direction count mismatch");
    std::vector<double> h(static_cast<size_t>(a.directions()));
    for (int i = 0; i < a.directions(); ++i) h[static_cast<size_t>(i)] = a.support_at(i) + b.support_at(i);
    return ConvexBody::planar(std::move(h));
}

ConvexBody scale(const ConvexBody &a, double t) {
    if (t < 0) throw std::invalid_argument("scale: t must be nonnegative");
    if (a.dim() == 1) return ConvexBody::interval(t * a.lo(), t * a.hi());
    std::vector<double> h(static_cast<size_t>(a.directions()));
    for (int i = 0; i < a.directions(); ++i) h[static_cast<size_t>(i)] = t * a.support_at(i);
    return ConvexBody::planar(std::move(h));
}

ConvexBody body_integral(const std::vector<std::pair<double, ConvexBody>> &weighted) {
    if (weighted.empty()) throw std::invalid_argument("body_integral: empty list");
    double wsum = 0.0;
    for (const auto &[w, b] : weighted) {
        if (w < 0) throw std::invalid_argument("body_integral: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("body_integral: weights must sum to 1");
    const ConvexBody &first = weighted.front().second;
    if (first.dim() == 1) {
        double lo = 0.0, hi = 0.0;
        for (const auto &[w, b] : weighted) {
            if (b.dim() != 1) throw std::invalid_argument("body_integral: dimension mismatch");
            lo += w * b.lo();
            hi += w * b.hi();
        }
        return ConvexBody::interval(lo, hi);
    }
    std::vector<double> h(static_cast<size_t>(first.directions()), 0.0);
    for (const auto &[w, b] : weighted) {
        if (b.dim() != 2 || b.directions() != first.directions())
            throw std::invalid_argument("body_integral: incompatible bodies");
        for (int i = 0; i < first.directions(); ++i) h[static_cast<size_t>(i)] += w * b.support_at(i);
    }
    return ConvexBody::planar(std::move(h));
}

std::vector<std::array<double, 2>> body_polygon(const ConvexBody &body) {
    if (body.dim() != 2) throw std::logic_error("body_polygon: planar bodies only");
    const int n = body.directions();
    double r = 1.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::abs(body.support_at(i)));
    r = 2.0 * r + 1.0;
    std::vector<std::array<double, 2>> poly = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
    for (int i = 0; i < n && !poly.empty(); ++i) {
        double cx = std::cos(body.direction_angle(i)), sy = std::sin(body.direction_angle(i));
        double h = body.support_at(i);
        std::vector<std::array<double, 2>> next;
        const size_t sz = poly.size();
        for (size_t k = 0; k < sz; ++k) {
            const auto &p = poly[k];
            const auto &q = poly[(k + 1) % sz];
            double dp = p[0] * cx + p[1] * sy - h;
            double dq = q[0] * cx + q[1] * sy - h;
            if (dp <= 0) next.push_back(p);
            if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
                double t = dp / (dp - dq);
                next.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            }
        }
        poly.swap(next);
    }
    return poly;
}

double volume(const ConvexBody &body, bool *empty_warning) {
    if (empty_warning) *empty_warning = false;
    if (body.dim() == 1) return body.hi() - body.lo();
    auto poly = body_polygon(body);
    if (poly.size() < 3) {
        if (empty_warning) *empty_warning = true;
        return 0.0;
    }
    double area2 = 0.0;
    for (size_t k = 0; k < poly.size(); ++k) {
        const auto &p = poly[k];
        const auto &q = poly[(k + 1) % poly.size()];
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(area2);
}

double gauge(const ConvexBody &body, const std::vector<double> &y) {
    if (body.dim() == 1) {
        if (!(body.lo() < 0 && body.hi() > 0)) throw std::invalid_argument("gauge: 0 must be interior");
        if (y.size() != 1) throw std::invalid_argument("gauge: point dim mismatch");
        return std::max(y[0] / body.hi(), y[0] / body.lo());
    }
    if (y.size() != 2) throw std::invalid_argument("gauge: point dim mismatch");
    double g = 0.0;
    for (int i = 0; i < body.directions(); ++i) {
        double h = body.support_at(i);
        if (!(h > 0)) throw std::invalid_argument("gauge: 0 must be interior");
        g = std::max(g, (y[0] * std::cos(body.direction_angle(i)) + y[1] * std::sin(body.direction_angle(i))) / h);
    }
    return g;
}

double distance_to_body(const ConvexBody &body, const std::vector<double> &y) {
    if (body.dim() == 1) {
        if (y.size() != 1) throw std::invalid_argument("distance_to_body: point dim mismatch");
        return std::max({0.0, body.lo() - y[0], y[0] - body.hi()});
    }
    if (y.size() != 2) throw std::invalid_argument("distance_to_body: point dim mismatch");
    bool inside = true;
    double scale = 1.0;
    for (int i = 0; i < body.directions() && inside; ++i) {
        scale = std::max(scale, std::abs(body.support_at(i)));
        inside = y[0] * std::cos(body.direction_angle(i)) + y[1] * std::sin(body.direction_angle(i)) <=
                 body.support_at(i) + 1e-12 * scale;
    }
    if (inside) return 0.0;
    auto poly = body_polygon(body);
    if (poly.empty()) throw std::invalid_argument("distance_to_body: empty body");
    if (poly.size() == 1) return std::hypot(y[0] - poly[0][0], y[1] - poly[0][1]);
    double best = kInf;
    for (size_t k = 0; k < poly.size(); ++k) {
        const auto &p = poly[k];
        const auto &q = poly[(k + 1) % poly.size()];
        double ex = q[0] - p[0], ey = q[1] - p[1];
        double len2 = ex * ex + ey * ey;
        double t = len2 > 0 ? std::clamp(((y[0] - p[0]) * ex + (y[1] - p[1]) * ey) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::hypot(y[0] - (p[0] + t * ex), y[1] - (p[1] + t * ey)));
    }
    return best;
}

GridFn smoothed_indicator(const ConvexBody &body, double k, const std::vector<Axis> &y_axes) {
    if (!(k > 0)) throw std::invalid_argument("smoothed_indicator: k must be positive");
    GridFn g(y_axes);
    for (std::int64_t f = 0; f < g.size(); ++f) {
        std::vector<double> y = g.coords(g.multi_index(f));
        double d = distance_to_body(body, y);
        g[f] = d == 0.0 ? 0.0 : std::exp(k * d) - 1.0;
    }
    return g;
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas f[j] + c (i-j)^2,
// evaluated at every i.
void parabola_envelope_min(const double *f, int n, double c, double *out, int *v_buf, double *z_buf) {
    int k = 0;
    v_buf[0] = 0;
    z_buf[0] = -kInf;
    z_buf[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            int v = v_buf[k];
            s = ((f[q] + c * q * q) - (f[v] + c * v * v)) / (2.0 * c * (q - v));
            if (s <= z_buf[k]) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v_buf[k] = q;
        z_buf[k] = s;
        z_buf[k + 1] = kInf;
    }
    k = 0;
    for (int i = 0; i < n; ++i) {
        while (z_buf[k + 1] < i) ++k;
        int v = v_buf[k];
        out[i] = f[v] + c * (i - v) * (i - v);
    }
}

} // namespace

GridFn sup_convolution(const GridFn &psi, double eps, Exec policy) {
    if (!(eps > 0)) throw std::invalid_argument("sup_convolution: eps must be positive");
    for (double v : psi.values())
        if (!std::isfinite(v))
            throw std::invalid_argument("sup_convolution: requires finite values (gauge-truncate indicators first)");

    const int r = psi.rank();
    std::vector<int> shape(static_cast<size_t>(r));
    for (int kk = 0; kk < r; ++kk) shape[static_cast<size_t>(kk)] = psi.axis(kk).count;
    std::vector<double> vals = psi.values();

    for (int kk = r - 1; kk >= 0; --kk) {
        const Axis &a = psi.axis(kk);
        double c = a.step() * a.step() / (2.0 * eps);
        std::vector<double> work = kk == r - 1 ? vals : rotate_axis_last(vals, shape, kk);
        std::int64_t lines = static_cast<std::int64_t>(work.size()) / a.count;
        std::vector<double> out(work.size());
        par_for(
            lines,
            [&](std::int64_t l) {
                std::vector<double> neg(static_cast<size_t>(a.count));
                std::vector<int> vb(static_cast<size_t>(a.count));
                std::vector<double> zb(static_cast<size_t>(a.count) + 1);
                const double *f = work.data() + l * a.count;
                double *g = out.data() + l * a.count;
                for (int i = 0; i < a.count; ++i) neg[static_cast<size_t>(i)] = -f[i];
                parabola_envelope_min(neg.data(), a.count, c, g, vb.data(), zb.data());
                for (int i = 0; i < a.count; ++i) g[i] = -g[i];
            },
            policy);
        vals = kk == r - 1 ? std::move(out) : rotate_axis_back(out, shape, kk);
    }

    // Restrict to the middle half of each axis.
    std::vector<Axis> sub(static_cast<size_t>(r));
    std::vector<int> start(static_cast<size_t>(r));
    for (int kk = 0; kk < r; ++kk) {
        const Axis &a = psi.axis(kk);
        int s = a.count / 4;
        int e = a.count - 1 - a.count / 4;
        if (e - s < 1) throw std::invalid_argument("sup_convolution: grid too small for the centered sub-grid");
        start[static_cast<size_t>(kk)] = s;
        sub[static_cast<size_t>(kk)] = Axis{a.coord(s), a.coord(e), e - s + 1};
    }
    GridFn outfn(sub);
    GridFn full(psi.axes());
    full.values() = std::move(vals);
    for (std::int64_t f = 0; f < outfn.size(); ++f) {
        std::vector<int> idx = outfn.multi_index(f);
        for (int kk = 0; kk < r; ++kk) idx[static_cast<size_t>(kk)] += start[static_cast<size_t>(kk)];
        outfn[f] = full.at(idx);
    }
    if (psi.has_split() && outfn.rank() > psi.split()) outfn.set_split(psi.split());
    return outfn;
}

GridFn mollify(const GridFn &psi, double eps, Exec policy) {
    if (!(eps > 0)) throw std::invalid_argument("mollify: eps must be positive");
    const int r = psi.rank();

    std::vector<std::vector<double>> weights(static_cast<size_t>(r));
    std::vector<int> radius(static_cast<size_t>(r));
    for (int k = 0; k < r; ++k) {
        const Axis &a = psi.axis(k);
        int rad = static_cast<int>(std::floor(eps / a.step() - 1e-12));
        radius[static_cast<size_t>(k)] = rad;
        std::vector<double> w(static_cast<size_t>(2 * rad + 1));
        double sum = 0.0;
        for (int t = -rad; t <= rad; ++t) {
            double s = t * a.step() / eps;
            double v = std::exp(-1.0 / (1.0 - s * s));
            w[static_cast<size_t>(t + rad)] = v;
            sum += v;
        }
        for (double &v : w) v /= sum;
        weights[static_cast<size_t>(k)] = std::move(w);
    }

    std::vector<Axis> sub(static_cast<size_t>(r));
    for (int k = 0; k < r; ++k) {
        const Axis &a = psi.axis(k);
        int rad = radius[static_cast<size_t>(k)];
        if (a.count - 2 * rad < 2) throw std::invalid_argument("mollify: grid too small for stencil");
        sub[static_cast<size_t>(k)] = Axis{a.coord(rad), a.coord(a.count - 1 - rad), a.count - 2 * rad};
    }

    for (double v : psi.values())
        if (!std::isfinite(v)) throw std::invalid_argument("mollify: psi must be finite on the stencil");

    GridFn out(sub);
    par_for(
        out.size(),
        [&](std::int64_t f) {
            std::vector<int> idx = out.multi_index(f);
            for (int k = 0; k < r; ++k) idx[static_cast<size_t>(k)] += radius[static_cast<size_t>(k)];
            double total = 0.0;
            std::int64_t cells = 1;
            for (int k = 0; k < r; ++k) cells *= 2 * radius[static_cast<size_t>(k)] + 1;
            std::vector<int> node(static_cast<size_t>(r));
            for (std::int64_t c = 0; c < cells; ++c) {
                std::int64_t rem = c;
                double w = 1.0;
                node = idx;
                for (int k = r - 1; k >= 0; --k) {
                    int span = 2 * radius[static_cast<size_t>(k)] + 1;
                    int off = static_cast<int>(rem % span) - radius[static_cast<size_t>(k)];
                    rem /= span;
                    node[static_cast<size_t>(k)] += off;
                    w *= weights[static_cast<size_t>(k)][static_cast<size_t>(off + radius[static_cast<size_t>(k)])];
                }
                total += w * psi.at(node);
            }
            out[f] = total;
        },
        policy);
    if (psi.has_split() && out.rank() > psi.split()) out.set_split(psi.split());
    return out;
}

} // namespace fstar
