#include "fstar/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fstar {

namespace {

bool same_axes(const std::vector<Axis> &a, const std::vector<Axis> &b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k].lo != b[k].lo || a[k].hi != b[k].hi || a[k].count != b[k].count) return false;
    return true;
}

double sup_difference(const GridFn &a, const GridFn &b) {
    double s = 0.0;
    for (std::int64_t f = 0; f < a.size(); ++f) {
        double va = a[f], vb = b[f];
        if (va == kInf && vb == kInf) continue;
        if (va == kInf || vb == kInf) return kInf;
        s = std::max(s, std::abs(va - vb));
    }
    return s;
}

} // namespace

void BoundaryFunctionFamily::validate(double continuity_modulus) const {
    const int M = domain.boundary_count();
    if (static_cast<int>(phi.size()) != M)
        throw std::invalid_argument("BoundaryFunctionFamily: one function per boundary node expected");
    for (const GridFn &f : phi) {
        if (!same_axes(f.axes(), phi.front().axes()))
            throw std::invalid_argument("BoundaryFunctionFamily: shared y-grid required");
        CheckReport conv = is_convex(f, 1e-9);
        if (!conv.pass) throw std::invalid_argument("BoundaryFunctionFamily: boundary function is not convex");
    }
    if (continuity_modulus < kInf && domain.kind() == Domain::Kind::Disk) {
        for (int i = 0; i < M; ++i) {
            double d = sup_difference(phi[static_cast<size_t>(i)], phi[static_cast<size_t>((i + 1) % M)]);
            if (d > continuity_modulus)
                throw std::invalid_argument("BoundaryFunctionFamily: adjacent boundary data exceed the continuity modulus");
        }
    }
}

void BoundaryBodyFamily::validate(double continuity_modulus) const {
    const int M = domain.boundary_count();
    if (static_cast<int>(bodies.size()) != M)
        throw std::invalid_argument("BoundaryBodyFamily: one body per boundary node expected");
    for (const ConvexBody &b : bodies) {
        if (b.dim() != bodies.front().dim()) throw std::invalid_argument("BoundaryBodyFamily: mixed dimensions");
        if (b.dim() == 2 && b.directions() != bodies.front().directions())
            throw std::invalid_argument("BoundaryBodyFamily: mixed direction counts");
    }
    if (continuity_modulus < kInf && domain.kind() == Domain::Kind::Disk) {
        for (int i = 0; i < M; ++i) {
            const ConvexBody &a = bodies[static_cast<size_t>(i)];
            const ConvexBody &b = bodies[static_cast<size_t>((i + 1) % M)];
            double d = 0.0;
            if (a.dim() == 1)
                d = std::max(std::abs(a.lo() - b.lo()), std::abs(a.hi() - b.hi()));
            else
                for (int k = 0; k < a.directions(); ++k) d = std::max(d, std::abs(a.support_at(k) - b.support_at(k)));
            if (d > continuity_modulus)
                throw std::invalid_argument("BoundaryBodyFamily: adjacent bodies exceed the continuity modulus");
        }
    }
}

BoundaryFunctionFamily indicator_family(const BoundaryBodyFamily &bodies, const std::vector<Axis> &y_axes) {
    BoundaryFunctionFamily fam{bodies.domain, {}};
    fam.phi.reserve(bodies.bodies.size());
    for (const ConvexBody &b : bodies.bodies) fam.phi.push_back(indicator(b, y_axes));
    return fam;
}

namespace {

struct FamilyTransforms {
    std::vector<std::vector<double>> conj; // [tau][dual node]
    std::vector<std::uint8_t> divergent;   // per dual node: any tau divergent
    std::vector<std::uint8_t> mixed;       // per dual node: divergence differs across tau
    GridFn dual_template;
};

FamilyTransforms family_transforms(const BoundaryFunctionFamily &family, const std::vector<Axis> &dual_axes, Exec policy) {
    FamilyTransforms ft;
    const int M = static_cast<int>(family.phi.size());
    ft.conj.resize(static_cast<size_t>(M));
    LegendreResult first = legendre(family.phi[0], dual_axes, policy);
    ft.dual_template = first.fn;
    std::int64_t U = first.fn.size();
    ft.divergent.assign(static_cast<size_t>(U), 0);
    ft.mixed.assign(static_cast<size_t>(U), 0);
    for (int i = 0; i < M; ++i) {
        LegendreResult lr = i == 0 ? std::move(first) : legendre(family.phi[static_cast<size_t>(i)], dual_axes, policy);
        ft.conj[static_cast<size_t>(i)] = lr.fn.values();
        for (std::int64_t u = 0; u < U; ++u) {
            if (lr.divergent[static_cast<size_t>(u)]) {
                if (i > 0 && !ft.divergent[static_cast<size_t>(u)]) ft.mixed[static_cast<size_t>(u)] = 1;
                ft.divergent[static_cast<size_t>(u)] = 1;
            } else if (ft.divergent[static_cast<size_t>(u)]) {
                ft.mixed[static_cast<size_t>(u)] = 1;
            }
        }
    }
    return ft;
}

} // namespace

ComparabilityReport locally_comparable_check(const BoundaryFunctionFamily &family, const std::vector<Axis> &dual_axes) {
    family.validate();
    FamilyTransforms ft = family_transforms(family, dual_axes, default_exec());
    const std::int64_t U = ft.dual_template.size();
    const int M = static_cast<int>(family.phi.size());

    ComparabilityReport rep;
    rep.pass = true;
    for (std::int64_t u = 0; u < U; ++u) {
        if (ft.mixed[static_cast<size_t>(u)]) {
            rep.pass = false;
            rep.witness = ft.dual_template.multi_index(u);
            rep.note = "mixed finite/divergent transforms at a dual node";
            return rep;
        }
        if (ft.divergent[static_cast<size_t>(u)]) {
            ++rep.infinite_nodes;
            continue;
        }
        ++rep.finite_nodes;
        double lo = kInf, hi = -kInf;
        for (int i = 0; i < M; ++i) {
            double v = ft.conj[static_cast<size_t>(i)][static_cast<size_t>(u)];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > rep.worst_constant) {
            rep.worst_constant = hi - lo;
            rep.witness = ft.dual_template.multi_index(u);
        }
    }

    // Condition (2), grid reading: no isolated finite dual node.
    for (std::int64_t u = 0; u < U && rep.pass; ++u) {
        if (ft.divergent[static_cast<size_t>(u)]) continue;
        std::vector<int> idx = ft.dual_template.multi_index(u);
        bool has_finite_neighbor = false;
        for (int k = 0; k < ft.dual_template.rank(); ++k)
            for (int s : {-1, 1}) {
                std::vector<int> nb = idx;
                nb[static_cast<size_t>(k)] += s;
                if (nb[static_cast<size_t>(k)] < 0 || nb[static_cast<size_t>(k)] >= dual_axes[static_cast<size_t>(k)].count)
                    continue;
                if (!ft.divergent[static_cast<size_t>(ft.dual_template.flat_index(nb))]) has_finite_neighbor = true;
            }
        if (!has_finite_neighbor && U > 1) {
            rep.pass = false;
            rep.witness = idx;
            rep.note = "isolated finite dual node";
        }
    }
    return rep;
}

namespace {

std::vector<double> measure_weights(const Domain &domain, const std::vector<double> &x) {
    if (domain.kind() == Domain::Kind::Interval) {
        double t = (x[0] - domain.a()) / (domain.b() - domain.a());
        return {1.0 - t, t}; // continuous extension of the interior formula up to the endpoints
    }
    return harmonic_measure(domain, x).w;
}

std::vector<Axis> interpolation_x_axes(const Domain &domain, int x_count) {
    if (domain.kind() == Domain::Kind::Interval) return {Axis{domain.a(), domain.b(), x_count}};
    if (domain.kind() == Domain::Kind::Disk) {
        auto c = domain.center();
        double R = domain.radius();
        return {Axis{c[0] - R, c[0] + R, x_count}, Axis{c[1] - R, c[1] + R, x_count}};
    }
    throw std::invalid_argument("interpolation: envelope scenarios are restricted to interval and disk domains");
}

} // namespace

GridFn interpolate_functions(const BoundaryFunctionFamily &family, const InterpolationOptions &opts) {
    family.validate();
    std::vector<Axis> dual_axes = opts.dual_axes;
    if (dual_axes.empty()) {
        dual_axes = suggest_dual_axes(family.phi.front());
        for (const GridFn &f : family.phi) {
            std::vector<Axis> s = suggest_dual_axes(f);
            for (size_t k = 0; k < dual_axes.size(); ++k) {
                dual_axes[k].lo = std::min(dual_axes[k].lo, s[k].lo);
                dual_axes[k].hi = std::max(dual_axes[k].hi, s[k].hi);
            }
        }
    }
    ComparabilityReport cr = locally_comparable_check(family, dual_axes);
    if (!cr.pass) throw std::invalid_argument("interpolate_functions: family is not locally comparable: " + cr.note);

    FamilyTransforms ft = family_transforms(family, dual_axes, opts.policy);
    const std::int64_t U = ft.dual_template.size();
    const int M = static_cast<int>(family.phi.size());

    std::vector<Axis> x_axes = interpolation_x_axes(family.domain, opts.x_count);
    const std::vector<Axis> &y_axes = family.y_axes();
    std::vector<Axis> joint = x_axes;
    joint.insert(joint.end(), y_axes.begin(), y_axes.end());
    GridFn Phi(joint, kInf);
    Phi.set_split(static_cast<int>(x_axes.size()));

    GridFn x_template(x_axes);
    std::int64_t y_total = 1;
    for (const Axis &a : y_axes) y_total *= a.count;

    par_for(
        x_template.size(),
        [&](std::int64_t xf) {
            std::vector<double> x = x_template.coords(x_template.multi_index(xf));
            if (family.domain.kind() == Domain::Kind::Disk && !family.domain.is_interior_point(x)) return;
            std::vector<double> w = measure_weights(family.domain, x);

            GridFn dual_fiber = ft.dual_template;
            for (std::int64_t u = 0; u < U; ++u) {
                if (ft.divergent[static_cast<size_t>(u)]) {
                    dual_fiber[u] = kInf;
                    continue;
                }
                double s = 0.0;
                for (int i = 0; i < M; ++i) s += w[static_cast<size_t>(i)] * ft.conj[static_cast<size_t>(i)][static_cast<size_t>(u)];
                dual_fiber[u] = s;
            }
            LegendreResult back = legendre(dual_fiber, y_axes, Exec::Serial);
            for (std::int64_t yf = 0; yf < y_total; ++yf) Phi[xf * y_total + yf] = back.fn[yf];
        },
        opts.policy);
    return Phi;
}

std::vector<ConvexBody> interpolate_bodies(const BoundaryBodyFamily &family,
                                           const std::vector<std::vector<double>> &points) {
    family.validate();
    std::vector<ConvexBody> out;
    out.reserve(points.size());
    for (const auto &x : points) {
        std::vector<double> w = measure_weights(family.domain, x);
        std::vector<std::pair<double, ConvexBody>> weighted;
        weighted.reserve(w.size());
        for (size_t i = 0; i < w.size(); ++i) weighted.emplace_back(w[i], family.bodies[i]);
        out.push_back(body_integral(weighted));
    }
    return out;
}

namespace {

// Fiber of Phi at an off-grid base point by multilinear sampling per y-node.
std::vector<double> sampled_fiber(const GridFn &Phi, const std::vector<double> &x) {
    const int n = Phi.split();
    std::vector<Axis> y_axes(Phi.axes().begin() + n, Phi.axes().end());
    GridFn y_template(y_axes);
    std::vector<double> fiber(static_cast<size_t>(y_template.size()));
    std::vector<double> pt(x);
    pt.resize(static_cast<size_t>(Phi.rank()));
    for (std::int64_t yf = 0; yf < y_template.size(); ++yf) {
        std::vector<double> yc = y_template.coords(y_template.multi_index(yf));
        for (size_t k = 0; k < yc.size(); ++k) pt[static_cast<size_t>(n) + k] = yc[k];
        fiber[static_cast<size_t>(yf)] = Phi.sample(pt);
    }
    return fiber;
}

// Linearly extrapolated fiber of Phi at boundary node tau; for interval
// domains the endpoint column is already computed and returned directly.
std::vector<double> boundary_fiber(const GridFn &Phi, const Domain &domain, int tau_index) {
    const int n = Phi.split();
    std::int64_t y_total = 1;
    for (int k = n; k < Phi.rank(); ++k) y_total *= Phi.axis(k).count;
    if (domain.kind() == Domain::Kind::Interval) {
        std::int64_t xi = tau_index == 0 ? 0 : Phi.axis(0).count - 1;
        std::vector<double> fiber(static_cast<size_t>(y_total));
        for (std::int64_t yf = 0; yf < y_total; ++yf) fiber[static_cast<size_t>(yf)] = Phi[xi * y_total + yf];
        return fiber;
    }
    auto c = domain.center();
    auto tau = domain.boundary_node(tau_index);
    double R = domain.radius();
    double h = Phi.axis(0).step();
    double r1 = R - 3.0 * h, r2 = R - 6.0 * h;
    if (r2 <= 0) throw std::invalid_argument("boundary collar: grid too coarse");
    std::vector<double> x1 = {c[0] + (tau[0] - c[0]) * r1 / R, c[1] + (tau[1] - c[1]) * r1 / R};
    std::vector<double> x2 = {c[0] + (tau[0] - c[0]) * r2 / R, c[1] + (tau[1] - c[1]) * r2 / R};
    std::vector<double> f1 = sampled_fiber(Phi, x1);
    std::vector<double> f2 = sampled_fiber(Phi, x2);
    std::vector<double> out(f1.size());
    for (size_t k = 0; k < f1.size(); ++k) out[k] = 2.0 * f1[k] - f2[k];
    return out;
}

} // namespace

EnvelopeReport envelope_property_check(const GridFn &Phi, const BoundaryFunctionFamily &family, const DirichletSet &F,
                                       const EnvelopeCheckOptions &opts) {
    if (!Phi.has_split()) throw std::invalid_argument("envelope_property_check: Phi needs an (x;y) split");
    EnvelopeReport rep;

    // (i) Boundary attainment through the collar.
    const int M = family.domain.boundary_count();
    for (int i = 0; i < M; ++i) {
        std::vector<double> fiber = boundary_fiber(Phi, family.domain, i);
        const GridFn &phi = family.phi[static_cast<size_t>(i)];
        for (std::int64_t yf = 0; yf < phi.size(); ++yf) {
            double a = fiber[static_cast<size_t>(yf)], b = phi[yf];
            if (b == kInf || a == kInf) continue; // indicator-type data: attainment read on the finite part
            rep.boundary_sup = std::max(rep.boundary_sup, std::abs(a - b));
        }
    }

    // (ii) Product-cone subharmonicity.
    rep.product = is_product_subharmonic(Phi, F, opts.samples, opts.margin_tol, opts.policy);

    // (iii) Legendre duality: -Phi*(., u) is F-subharmonic and attains the
    // dual boundary data.
    std::vector<Axis> dual_axes = opts.dual_axes;
    if (dual_axes.empty()) dual_axes = suggest_dual_axes(family.phi.front());
    FamilyTransforms ft = family_transforms(family, dual_axes, opts.policy);

    const int n = Phi.split();
    std::vector<Axis> x_axes(Phi.axes().begin(), Phi.axes().begin() + n);
    std::vector<Axis> y_axes(Phi.axes().begin() + n, Phi.axes().end());
    GridFn x_template(x_axes);
    std::int64_t y_total = 1;
    for (const Axis &a : y_axes) y_total *= a.count;

    rep.duality_margin = kInf;
    rep.duality_residual = 0.0;
    const std::int64_t U = ft.dual_template.size();
    for (std::int64_t u = 0; u < U; u += std::max(1, opts.dual_probe_stride)) {
        if (ft.divergent[static_cast<size_t>(u)]) continue;
        std::vector<double> uc = ft.dual_template.coords(ft.dual_template.multi_index(u));

        GridFn f_u(x_axes, kInf);
        for (std::int64_t xf = 0; xf < x_template.size(); ++xf) {
            // -Phi*(x, u) = inf_y (Phi(x,y) - y.u) over the fiber grid.
            double best = kInf;
            const double *fiber = Phi.values().data() + xf * y_total;
            GridFn y_template(y_axes);
            for (std::int64_t yf = 0; yf < y_total; ++yf) {
                if (fiber[yf] == kInf) continue;
                std::vector<double> yc = y_template.coords(y_template.multi_index(yf));
                double dot = 0.0;
                for (size_t k = 0; k < yc.size(); ++k) dot += yc[k] * uc[k];
                best = std::min(best, fiber[yf] - dot);
            }
            f_u[xf] = best;
        }
        if (f_u.count_finite() == 0) continue;
        CheckReport cr = is_F_subharmonic(f_u, F, opts.margin_tol, 0.0, opts.policy);
        rep.duality_margin = std::min(rep.duality_margin, cr.worst_margin);

        // Boundary values of f_u against -phi_tau*(u).
        for (int i = 0; i < M; ++i) {
            double target = -ft.conj[static_cast<size_t>(i)][static_cast<size_t>(u)];
            double got;
            if (family.domain.kind() == Domain::Kind::Interval) {
                got = f_u[i == 0 ? 0 : f_u.size() - 1];
            } else {
                auto c = family.domain.center();
                auto tau = family.domain.boundary_node(i);
                double R = family.domain.radius();
                double h = f_u.axis(0).step();
                double r1 = R - 3.0 * h, r2 = R - 6.0 * h;
                std::vector<double> x1 = {c[0] + (tau[0] - c[0]) * r1 / R, c[1] + (tau[1] - c[1]) * r1 / R};
                std::vector<double> x2 = {c[0] + (tau[0] - c[0]) * r2 / R, c[1] + (tau[1] - c[1]) * r2 / R};
                double v1 = f_u.sample(x1), v2 = f_u.sample(x2);
                if (!std::isfinite(v1) || !std::isfinite(v2)) continue;
                got = 2.0 * v1 - v2;
            }
            rep.duality_residual = std::max(rep.duality_residual, std::abs(got - target));
        }
    }
    if (rep.duality_margin == kInf) rep.duality_margin = 0.0;

    rep.pass = rep.boundary_sup <= opts.boundary_tol && rep.product.pass && rep.duality_margin >= -opts.margin_tol &&
               rep.duality_residual <= opts.duality_tol;
    return rep;
}

namespace {

struct LatticeDir {
    std::vector<int> d;
};

long long gcdll(long long a, long long b) { return std::gcd(a, b); }

std::vector<LatticeDir> hull_directions(const std::vector<int> &shape, int x_rank) {
    const int r = static_cast<int>(shape.size());
    std::vector<LatticeDir> dirs;
    auto push = [&](std::vector<int> d) { dirs.push_back({std::move(d)}); };

    for (int k = 0; k < r; ++k) {
        std::vector<int> d(static_cast<size_t>(r), 0);
        d[static_cast<size_t>(k)] = 1;
        push(d);
    }

    if (x_rank == 1 && r == 2) {
        // Slopes with denominator dividing the base index range reach both
        // boundary columns exactly.
        int nx = shape[0] - 1, ny = shape[1] - 1;
        for (int p = 1; p <= nx; ++p) {
            if (nx % p != 0) continue;
            long long qmax = static_cast<long long>(ny) * p / nx + 1;
            for (long long q = 1; q <= qmax; ++q) {
                if (gcdll(p, q) != 1) continue;
                push({p, static_cast<int>(q)});
                push({p, static_cast<int>(-q)});
            }
        }
    } else {
        // Planar base: in-plane directions plus a bounded mixed set.
        int cap = 8;
        for (int p1 = 0; p1 <= cap; ++p1)
            for (int p2 = -cap; p2 <= cap; ++p2) {
                if (p1 == 0 && p2 <= 0) continue;
                if (std::gcd(p1, std::abs(p2)) != 1) continue;
                std::vector<int> d(static_cast<size_t>(r), 0);
                d[0] = p1;
                d[1] = p2;
                push(d);
            }
        int ny = shape[static_cast<size_t>(r - 1)] - 1;
        int nx = shape[0] - 1;
        int qmax = std::min(ny, 4 * std::max(1, ny / std::max(1, nx)));
        for (int q = 1; q <= qmax; ++q) {
            for (auto base : {std::pair{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
                if (std::gcd(std::gcd(std::abs(base.first), std::abs(base.second)), q) != 1) continue;
                std::vector<int> d(static_cast<size_t>(r), 0);
                d[0] = base.first;
                d[1] = base.second;
                d[static_cast<size_t>(r - 1)] = q;
                push(d);
                d[static_cast<size_t>(r - 1)] = -q;
                push(d);
            }
        }
    }
    return dirs;
}

// Lower convex envelope along one lattice line; updates values in place.
// Returns the largest decrease applied.
double convexify_line(std::vector<double *> &nodes) {
    const int L = static_cast<int>(nodes.size());
    std::vector<int> hull; // indices into nodes
    for (int t = 0; t < L; ++t) {
        double v = *nodes[static_cast<size_t>(t)];
        if (v == kInf) continue;
        while (hull.size() >= 2) {
            int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            double va = *nodes[static_cast<size_t>(a)], vb = *nodes[static_cast<size_t>(b)];
            // Remove b when it lies on or above the chord a-t.
            if ((vb - va) * (t - a) - (v - va) * (b - a) >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(t);
    }
    if (hull.size() < 2) return 0.0;
    double changed = 0.0;
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        int a = hull[s], b = hull[s + 1];
        double va = *nodes[static_cast<size_t>(a)], vb = *nodes[static_cast<size_t>(b)];
        for (int t = a + 1; t < b; ++t) {
            double interp = va + (vb - va) * (t - a) / (b - a);
            double &ref = *nodes[static_cast<size_t>(t)];
            if (interp < ref) {
                changed = std::max(changed, ref == kInf ? 1.0 : ref - interp); // a fill counts as unit change
                ref = interp;
            }
        }
    }
    return changed;
}

} // namespace

GridFn convex_hull_interpolation(const BoundaryFunctionFamily &family, const HullOptions &opts) {
    family.validate();
    const Domain &dom = family.domain;
    std::vector<Axis> x_axes = interpolation_x_axes(dom, opts.x_count);
    const std::vector<Axis> &y_axes = family.y_axes();
    std::vector<Axis> joint = x_axes;
    joint.insert(joint.end(), y_axes.begin(), y_axes.end());
    GridFn v(joint, kInf);
    v.set_split(static_cast<int>(x_axes.size()));

    std::int64_t y_total = 1;
    for (const Axis &a : y_axes) y_total *= a.count;

    // Boundary data columns.
    if (dom.kind() == Domain::Kind::Interval) {
        std::int64_t last = static_cast<std::int64_t>(x_axes[0].count - 1);
        for (std::int64_t yf = 0; yf < y_total; ++yf) {
            v[yf] = family.phi[0][yf];
            v[last * y_total + yf] = family.phi[1][yf];
        }
    } else {
        // Ring cells of the rasterized disk take the nearest boundary angle.
        GridFn x_template(x_axes);
        auto c = dom.center();
        const int M = dom.boundary_count();
        for (std::int64_t xf = 0; xf < x_template.size(); ++xf) {
            std::vector<int> xi = x_template.multi_index(xf);
            std::vector<double> x = x_template.coords(xi);
            if (dom.is_interior_point(x)) continue;
            bool ring = false;
            for (int k = 0; k < 2 && !ring; ++k)
                for (int s : {-1, 1}) {
                    std::vector<int> nb = xi;
                    nb[static_cast<size_t>(k)] += s;
                    if (nb[static_cast<size_t>(k)] < 0 || nb[static_cast<size_t>(k)] >= x_axes[static_cast<size_t>(k)].count)
                        continue;
                    if (dom.is_interior_point(x_template.coords(nb))) ring = true;
                }
            if (!ring) continue;
            double th = std::atan2(x[1] - c[1], x[0] - c[0]);
            if (th < 0) th += 2.0 * M_PI;
            int i = static_cast<int>(std::lround(th / (2.0 * M_PI) * M)) % M;
            for (std::int64_t yf = 0; yf < y_total; ++yf) v[xf * y_total + yf] = family.phi[static_cast<size_t>(i)][yf];
        }
    }

    std::vector<int> shape(static_cast<size_t>(v.rank()));
    for (int k = 0; k < v.rank(); ++k) shape[static_cast<size_t>(k)] = v.axis(k).count;
    std::vector<LatticeDir> dirs = hull_directions(shape, v.split());

    // Start nodes per direction: z with z - d outside the grid.
    std::vector<std::vector<std::int64_t>> dir_starts(dirs.size());
    for (size_t di = 0; di < dirs.size(); ++di) {
        const std::vector<int> &d = dirs[di].d;
        for (std::int64_t f = 0; f < v.size(); ++f) {
            std::vector<int> idx = v.multi_index(f);
            bool is_start = false;
            for (int k = 0; k < v.rank() && !is_start; ++k) {
                int prev = idx[static_cast<size_t>(k)] - d[static_cast<size_t>(k)];
                if (prev < 0 || prev >= shape[static_cast<size_t>(k)]) is_start = true;
            }
            if (is_start) dir_starts[di].push_back(f);
        }
    }

    double scale = std::max(1.0, v.max_abs_finite());
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        double max_change = 0.0;
        for (size_t di = 0; di < dirs.size(); ++di) {
            const std::vector<int> &d = dirs[di].d;
            const std::vector<std::int64_t> &starts = dir_starts[di];
            std::vector<double> changes(starts.size(), 0.0);
            par_for(
                static_cast<std::int64_t>(starts.size()),
                [&](std::int64_t s) {
                    std::vector<int> idx = v.multi_index(starts[static_cast<size_t>(s)]);
                    std::vector<double *> line;
                    for (;;) {
                        bool ok = true;
                        for (int k = 0; k < v.rank(); ++k)
                            ok = ok && idx[static_cast<size_t>(k)] >= 0 && idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)];
                        if (!ok) break;
                        line.push_back(&v[v.flat_index(idx)]);
                        for (int k = 0; k < v.rank(); ++k) idx[static_cast<size_t>(k)] += d[static_cast<size_t>(k)];
                    }
                    if (line.size() >= 3) changes[static_cast<size_t>(s)] = convexify_line(line);
                },
                opts.policy);
            for (double c : changes) max_change = std::max(max_change, c);
        }
        if (max_change <= opts.tol * scale) break;
    }
    if (it >= opts.max_iter) throw std::runtime_error("convex_hull_interpolation: iteration cap reached");
    return v;
}

} // namespace fstar
